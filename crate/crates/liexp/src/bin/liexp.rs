//! Command-line front end for the benchmark drivers in
//! [`liexp::experiments`]. All numeric work lives in the library; this
//! binary only parses arguments, resolves defaults, and routes output.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use liexp::{
    cmd_bench_orders, cmd_bench_q2, cmd_bench_sparse, cmd_kdv, AlgebraKind, MethodId, RunConfig,
};

#[derive(Parser)]
#[command(
    name = "liexp",
    version,
    about = "Benchmarks for structure-preserving approximations of exp(tB)",
    long_about = "Benchmarks for structure-preserving approximations of exp(tB).\n\n\
        Runs are deterministic: a fixed (command, options, seed) triple\n\
        reproduces the same CSV bytes on one platform. Every CSV ends with a\n\
        '# config: ...' line echoing the options that produced it.\n\n\
        Methods skc3 and skc4 rebuild derivative tables whose cost grows\n\
        steeply with the basis dimension, so bench-orders drops them from its\n\
        default method set once the basis has more than 120 elements; they\n\
        remain available at any size via --method."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgebraArg {
    /// so(n): antisymmetric matrices.
    So,
    /// sl(n): traceless matrices.
    Sl,
    /// so(3,1) on R^4 (also accepted as "lorentz").
    #[value(alias = "lorentz")]
    Lorenz,
}

impl From<AlgebraArg> for AlgebraKind {
    fn from(a: AlgebraArg) -> Self {
        match a {
            AlgebraArg::So => AlgebraKind::SpecialOrthogonal,
            AlgebraArg::Sl => AlgebraKind::SpecialLinear,
            AlgebraArg::Lorenz => AlgebraKind::Lorentz,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Error versus t for a random unit-norm element, one CSV row per
    /// (method, t), with counted flops and fitted slopes.
    BenchOrders {
        /// Algebra family to draw the element from.
        #[arg(long, value_enum, default_value_t = AlgebraArg::So)]
        algebra: AlgebraArg,
        /// Matrix dimension (defaults: so 5, sl 4; lorenz is fixed at 4).
        #[arg(long)]
        n: Option<usize>,
        /// Shorthand for --method skc<order>.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4), conflicts_with = "method")]
        order: Option<u8>,
        /// Single method to run (skc1..skc4, skc4-sym, strang, yoshida4);
        /// omit for the default set.
        #[arg(long)]
        method: Option<String>,
        /// t runs over 2^-1 .. 2^-kmax.
        #[arg(long, default_value_t = 5)]
        kmax: u32,
        /// Seed for the input generator.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Counted cost of constructing the second-order correction Q^2 for a
    /// full versus a banded antisymmetric input.
    BenchQ2 {
        /// Matrix dimension.
        #[arg(long, default_value_t = 50)]
        n: usize,
        /// Half-width of the banded input (bandwidth = 2*band + 1).
        #[arg(long, default_value_t = 2)]
        band: usize,
        /// Seed for the input generator.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Also write the table as CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Construction plus vector-application cost of the linear-cost
    /// tridiagonal plans over a doubling grid of dimensions.
    BenchSparse {
        /// Smallest dimension; the grid is n, 2n, 4n, 8n.
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Seed for the input generator.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// KdV-soliton error table: soliton-profile endpoint error versus h for
    /// the oracle and symmetric-product exponential modes, plus their
    /// difference, against an oracle reference at h = 2^-10.
    Kdv {
        /// h runs over 2^-1 .. 2^-kmax (at most 8).
        #[arg(long, default_value_t = 5)]
        kmax: u32,
        /// Seed, echoed for uniformity; the problem is deterministic.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write the error-table CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the reference trajectory (t,y1,y2,y3) here.
        #[arg(long)]
        traj_out: Option<PathBuf>,
    },
}

fn emit(csv: &str, out: Option<&PathBuf>) -> liexp::Result<()> {
    match out {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn run(cli: Cli) -> liexp::Result<()> {
    match cli.command {
        Command::BenchOrders {
            algebra,
            n,
            order,
            method,
            kmax,
            seed,
            out,
        } => {
            let algebra = AlgebraKind::from(algebra);
            let n = n.unwrap_or(match algebra {
                AlgebraKind::SpecialOrthogonal => 5,
                _ => 4,
            });
            let methods = match (order, method) {
                (Some(p), None) => vec![MethodId::Skc(p as usize)],
                (None, Some(id)) => vec![MethodId::parse(&id)?],
                (None, None) => Vec::new(),
                (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
            };
            let cfg = RunConfig {
                algebra,
                n,
                methods,
                kmax,
                seed,
                band: 2,
            };
            emit(&cmd_bench_orders(&cfg)?, out.as_ref())
        }
        Command::BenchQ2 { n, band, seed, out } => {
            let cfg = RunConfig {
                algebra: AlgebraKind::SpecialOrthogonal,
                n,
                methods: Vec::new(),
                kmax: 5,
                seed,
                band,
            };
            let report = cmd_bench_q2(&cfg)?;
            print!("{}", report.table);
            if let Some(path) = out {
                std::fs::write(path, &report.csv)?;
            }
            Ok(())
        }
        Command::BenchSparse { n, seed, out } => {
            let cfg = RunConfig {
                algebra: AlgebraKind::SpecialOrthogonal,
                n,
                methods: Vec::new(),
                kmax: 5,
                seed,
                band: 2,
            };
            emit(&cmd_bench_sparse(&cfg)?, out.as_ref())
        }
        Command::Kdv {
            kmax,
            seed,
            out,
            traj_out,
        } => {
            let cfg = RunConfig {
                algebra: AlgebraKind::SpecialLinear,
                n: 3,
                methods: Vec::new(),
                kmax,
                seed,
                band: 2,
            };
            let report = cmd_kdv(&cfg)?;
            if let Some(path) = traj_out {
                report.reference.write_csv(&path)?;
            }
            eprintln!(
                "fitted profile rate: {:.6} (sqrt(3)/2 = {:.6})",
                report.beta_fit,
                3f64.sqrt() / 2.0
            );
            emit(&report.csv, out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
