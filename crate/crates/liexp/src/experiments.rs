//! Deterministic benchmark drivers behind the `liexp` command-line tool.
//!
//! Each command builds its inputs from a seeded generator, so a fixed
//! `(command, config, seed)` triple reproduces the same CSV bytes on one
//! platform. Every CSV carries a header row and a trailing `# config:` line
//! echoing the configuration that produced it.

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{decompose, lorentz_basis, sl_basis, so_basis, AlgebraElement, AlgebraKind, Basis};
use crate::compose::{
    evaluate_action_counted, evaluate_counted, plan_skc, Plan, PlanFactor, Poly,
};
use crate::integrator::{integrate, kdv_ode, ExpMode, Trajectory};
use crate::oracle::{error_frob, fit_slope, frobenius_norm};
use crate::sparse::{
    skc2_tridiag_sln, skc2_tridiag_sln_counted, skc2_tridiag_son, skc2_tridiag_son_counted,
    TridiagSL, TridiagSO,
};
use crate::splitting::{q2_son_fast_counted, symmetric_skc4};
use crate::{Error, FlopCounter, Result};

/// Approximation method selectable on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodId {
    /// Canonical-coordinate product of the given order (1 through 4).
    Skc(usize),
    /// Time-symmetric fourth-order canonical-coordinate product.
    Skc4Sym,
    /// Strang composition over the basis split.
    Strang,
    /// Triple-jump fourth-order composition over the basis split.
    Yoshida4,
}

impl MethodId {
    /// Parse a command-line method id.
    pub fn parse(s: &str) -> Result<MethodId> {
        match s {
            "skc1" => Ok(MethodId::Skc(1)),
            "skc2" => Ok(MethodId::Skc(2)),
            "skc3" => Ok(MethodId::Skc(3)),
            "skc4" => Ok(MethodId::Skc(4)),
            "skc4-sym" => Ok(MethodId::Skc4Sym),
            "strang" => Ok(MethodId::Strang),
            "yoshida4" => Ok(MethodId::Yoshida4),
            _ => Err(Error::InvalidArgument(format!(
                "unknown method '{s}' (expected skc1..skc4, skc4-sym, strang, yoshida4)"
            ))),
        }
    }

    /// Stable label used in CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            MethodId::Skc(1) => "skc1",
            MethodId::Skc(2) => "skc2",
            MethodId::Skc(3) => "skc3",
            MethodId::Skc(4) => "skc4",
            MethodId::Skc(_) => unreachable!("orders are validated at construction"),
            MethodId::Skc4Sym => "skc4-sym",
            MethodId::Strang => "strang",
            MethodId::Yoshida4 => "yoshida4",
        }
    }

    /// Build the factored approximant for a decomposed element.
    pub fn build(&self, elem: &AlgebraElement) -> Result<Plan> {
        match self {
            MethodId::Skc(p) => plan_skc(elem, *p),
            MethodId::Skc4Sym => symmetric_skc4(elem),
            MethodId::Strang => Ok(plan_strang(elem)),
            MethodId::Yoshida4 => Ok(plan_yoshida4(elem)),
        }
    }
}

/// Default method set for the order benchmark. The third- and fourth-order
/// canonical products rebuild derivative tables whose cost grows steeply
/// with the basis dimension, so they are included only for small bases;
/// they stay available by explicit request at any size.
pub fn default_methods(basis_dim: usize) -> Vec<MethodId> {
    if basis_dim <= 120 {
        vec![
            MethodId::Skc(1),
            MethodId::Skc(2),
            MethodId::Skc(3),
            MethodId::Skc(4),
            MethodId::Strang,
            MethodId::Yoshida4,
            MethodId::Skc4Sym,
        ]
    } else {
        vec![
            MethodId::Skc(1),
            MethodId::Skc(2),
            MethodId::Strang,
            MethodId::Yoshida4,
            MethodId::Skc4Sym,
        ]
    }
}

/// Shared run configuration, echoed into every CSV so a file identifies
/// the run that produced it.
#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Which algebra family the random element is drawn from.
    pub algebra: AlgebraKind,
    /// Matrix dimension (fixed to 4 for the Lorentz algebra).
    pub n: usize,
    /// Methods to benchmark; empty means the default set for the basis size.
    pub methods: Vec<MethodId>,
    /// Number of grid points: t (or h) ranges over 2^-1 .. 2^-kmax.
    pub kmax: u32,
    /// Seed for the input generator.
    pub seed: u64,
    /// Half-width of the banded input in the Q^2 benchmark.
    pub band: usize,
}

fn kind_label(kind: AlgebraKind) -> &'static str {
    match kind {
        AlgebraKind::SpecialOrthogonal => "so",
        AlgebraKind::SpecialLinear => "sl",
        AlgebraKind::Lorentz => "lorenz",
    }
}

impl RunConfig {
    fn echo(&self, command: &str, methods: &[MethodId], extra: &str) -> String {
        let method_list = if methods.is_empty() {
            "-".to_string()
        } else {
            methods
                .iter()
                .map(|m| m.label())
                .collect::<Vec<_>>()
                .join("+")
        };
        let mut line = format!(
            "# config: command={command} algebra={} n={} methods={method_list} kmax={} seed={} band={}",
            kind_label(self.algebra),
            self.n,
            self.kmax,
            self.seed,
            self.band,
        );
        if !extra.is_empty() {
            line.push(' ');
            line.push_str(extra);
        }
        line
    }
}

/// Draw a random unit-norm element of the chosen algebra.
///
/// A dense matrix with uniform(0,1) entries is projected onto the algebra
/// (antisymmetrized for so(n), trace-corrected for sl(n), conjugate-flip
/// averaged for the Lorentz algebra), scaled to unit Frobenius norm, and
/// decomposed in the canonical basis.
pub fn random_element(kind: AlgebraKind, n: usize, seed: u64) -> Result<AlgebraElement> {
    let basis = basis_for(kind, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = Array2::from_shape_fn((n, n), |_| rng.gen::<f64>());
    let mut b = match kind {
        AlgebraKind::SpecialOrthogonal => 0.5 * (&m - &m.t()),
        AlgebraKind::SpecialLinear => {
            let delta = m.diag().sum() / n as f64;
            let mut b = m;
            for i in 0..n {
                b[[i, i]] -= delta;
            }
            b
        }
        AlgebraKind::Lorentz => {
            let j = Array2::from_diag(&Array1::from(vec![1.0, 1.0, 1.0, -1.0]));
            let flip = j.dot(&m.t()).dot(&j);
            0.5 * (&m - &flip)
        }
    };
    let norm = frobenius_norm(&b);
    if norm == 0.0 {
        return Err(Error::InvalidArgument(
            "projected sample is zero; pick another seed".into(),
        ));
    }
    b.mapv_inplace(|x| x / norm);
    decompose(&b, &basis, None)
}

/// Basis for an algebra family at dimension n, validating the dimension.
pub fn basis_for(kind: AlgebraKind, n: usize) -> Result<Basis> {
    match kind {
        AlgebraKind::SpecialOrthogonal | AlgebraKind::SpecialLinear => {
            if n < 2 {
                return Err(Error::InvalidArgument(format!(
                    "n must be at least 2, got {n}"
                )));
            }
            Ok(match kind {
                AlgebraKind::SpecialOrthogonal => so_basis(n),
                _ => sl_basis(n),
            })
        }
        AlgebraKind::Lorentz => {
            if n != 4 {
                return Err(Error::InvalidArgument(format!(
                    "the Lorentz algebra acts on R^4; got n = {n}"
                )));
            }
            Ok(lorentz_basis())
        }
    }
}

/// Strang composition over the basis split, as a factored plan: half-step
/// factors in basis order, a full step for the last generator, then the
/// half-steps mirrored.
pub fn plan_strang(elem: &AlgebraElement) -> Plan {
    let basis = elem.basis.clone();
    let ks: Vec<usize> = (0..basis.d).filter(|&k| elem.beta[k] != 0.0).collect();
    let mut factors = Vec::new();
    if let Some((&last, head)) = ks.split_last() {
        let half = |k: usize| PlanFactor {
            index: k,
            kind: basis.element(k).kind,
            poly: Poly::new(vec![0.0, elem.beta[k] / 2.0]),
        };
        factors.extend(head.iter().map(|&k| half(k)));
        factors.push(PlanFactor {
            index: last,
            kind: basis.element(last).kind,
            poly: Poly::new(vec![0.0, elem.beta[last]]),
        });
        factors.extend(head.iter().rev().map(|&k| half(k)));
    }
    Plan { basis, factors }
}

/// Triple-jump fourth-order composition over the basis split, as a factored
/// plan: the Strang factor list with arguments scaled by w1, w0, w1.
pub fn plan_yoshida4(elem: &AlgebraElement) -> Plan {
    let w1 = 1.0 / (2.0 - 2f64.cbrt());
    let w0 = 1.0 - 2.0 * w1;
    let inner = plan_strang(elem);
    let scaled = |w: f64| {
        inner.factors.iter().map(move |f| PlanFactor {
            index: f.index,
            kind: f.kind,
            poly: f.poly.with_scaled_arg(w),
        })
    };
    let mut factors = Vec::new();
    factors.extend(scaled(w1));
    factors.extend(scaled(w0));
    factors.extend(scaled(w1));
    Plan {
        basis: inner.basis,
        factors,
    }
}

fn dyadic_grid(kmax: u32) -> Vec<f64> {
    (1..=kmax).map(|k| 0.5f64.powi(k as i32)).collect()
}

fn fmt_slope(slope: Option<f64>) -> String {
    match slope {
        Some(s) => format!("{s:.15e}"),
        None => "nan".to_string(),
    }
}

/// Error-versus-t study for a random unit-norm element: one CSV row per
/// (method, t) with the measured error, the counted evaluation flops, and
/// the per-method fitted slope repeated on each of its rows.
pub fn cmd_bench_orders(cfg: &RunConfig) -> Result<String> {
    let elem = random_element(cfg.algebra, cfg.n, cfg.seed)?;
    let methods = if cfg.methods.is_empty() {
        default_methods(elem.basis.d)
    } else {
        cfg.methods.clone()
    };
    if cfg.kmax < 2 {
        return Err(Error::InvalidArgument(
            "kmax must be at least 2 to fit a slope".into(),
        ));
    }
    let b = elem.materialize();
    let ts = dyadic_grid(cfg.kmax);

    let mut csv = String::from("method,t,error,flops,slope\n");
    for method in &methods {
        let plan = method.build(&elem)?;
        let mut errors = Vec::with_capacity(ts.len());
        let mut flops = Vec::with_capacity(ts.len());
        for &t in &ts {
            let (f, fc) = evaluate_counted(&plan, t);
            errors.push(error_frob(&b, t, &f));
            flops.push(fc.total());
        }
        let slope = fmt_slope(fit_slope(&ts, &errors));
        for (i, &t) in ts.iter().enumerate() {
            csv.push_str(&format!(
                "{},{t:.15e},{:.15e},{},{slope}\n",
                method.label(),
                errors[i],
                flops[i],
            ));
        }
    }
    csv.push_str(&cfg.echo("bench-orders", &methods, ""));
    csv.push('\n');
    Ok(csv)
}

/// Output of the Q^2 construction benchmark: a human-readable table and the
/// same numbers as CSV.
#[derive(Debug)]
pub struct Q2Report {
    /// Table for the terminal.
    pub table: String,
    /// CSV with one row per input pattern.
    pub csv: String,
}

/// Cost of constructing the second-order correction for a full versus a
/// banded antisymmetric input, in counted scalar operations.
///
/// Fails (nonzero exit in the CLI) when the banded input does not come in
/// at least five times cheaper than the full one.
pub fn cmd_bench_q2(cfg: &RunConfig) -> Result<Q2Report> {
    let n = cfg.n;
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "n must be at least 4, got {n}"
        )));
    }
    if cfg.band == 0 || cfg.band >= n {
        return Err(Error::InvalidArgument(format!(
            "band half-width must lie in 1..n, got {}",
            cfg.band
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let m = Array2::from_shape_fn((n, n), |_| rng.gen::<f64>());
    let mut full = 0.5 * (&m - &m.t());
    let norm = frobenius_norm(&full);
    full.mapv_inplace(|x| x / norm);
    let mut banded = full.clone();
    for ((i, j), v) in banded.indexed_iter_mut() {
        if i.abs_diff(j) > cfg.band {
            *v = 0.0;
        }
    }

    let (_, fc_full) = q2_son_fast_counted(&full);
    let (_, fc_band) = q2_son_fast_counted(&banded);
    let n3 = (n * n * n) as f64;
    let per = |fc: &FlopCounter| {
        (
            fc.mults as f64 / n3,
            fc.adds as f64 / n3,
            fc.total() as f64 / n3,
        )
    };
    let (fm, fa, ft) = per(&fc_full);
    let (bm, ba, bt) = per(&fc_band);
    let ratio = fc_band.total() as f64 / fc_full.total() as f64;

    let banded_label = format!("banded (w = {})", cfg.band);
    let mut table = format!("Q^2 construction cost, so({n}), seed {}\n\n", cfg.seed);
    table.push_str("  input            mults/n^3   adds/n^3   total/n^3\n");
    table.push_str(&format!("  {:<15}  {fm:>9.3}   {fa:>8.3}   {ft:>9.3}\n", "full"));
    table.push_str(&format!("  {banded_label:<15}  {bm:>9.3}   {ba:>8.3}   {bt:>9.3}\n"));
    table.push_str(&format!(
        "\nbanded <= full/5: {} (ratio {ratio:.3})\n",
        if ratio <= 0.2 { "ok" } else { "FAILED" }
    ));

    let mut csv = String::from("input,n,band,mults,adds,total,total_per_n3\n");
    csv.push_str(&format!(
        "full,{n},{},{},{},{},{ft:.15e}\n",
        n - 1,
        fc_full.mults,
        fc_full.adds,
        fc_full.total(),
    ));
    csv.push_str(&format!(
        "banded,{n},{},{},{},{},{bt:.15e}\n",
        cfg.band,
        fc_band.mults,
        fc_band.adds,
        fc_band.total(),
    ));
    csv.push_str(&cfg.echo("bench-q2", &[], &format!("banded_to_full_ratio={ratio:.15e}")));
    csv.push('\n');

    if ratio > 0.2 {
        return Err(Error::InvalidArgument(format!(
            "banded Q^2 cost is {ratio:.3} of the full cost, above the 1/5 bound\n{table}"
        )));
    }
    Ok(Q2Report { table, csv })
}

fn random_tridiag_son(n: usize, rng: &mut ChaCha8Rng) -> TridiagSO {
    let beta: Vec<f64> = (0..n - 1).map(|_| rng.gen::<f64>()).collect();
    TridiagSO::new(beta).expect("nonempty coefficient list")
}

fn random_tridiag_sln(n: usize, rng: &mut ChaCha8Rng) -> TridiagSL {
    let superdiag: Vec<f64> = (0..n - 1).map(|_| rng.gen::<f64>()).collect();
    let subdiag: Vec<f64> = (0..n - 1).map(|_| rng.gen::<f64>()).collect();
    let mut diag: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let mean = diag.iter().sum::<f64>() / n as f64;
    for d in diag.iter_mut() {
        *d -= mean;
    }
    // One correction pass pins the rounded sum to zero exactly.
    let residual: f64 = diag.iter().sum();
    diag[0] -= residual;
    TridiagSL::new(diag, superdiag, subdiag).expect("centered diagonal is traceless")
}

/// Exact-coefficient cross-check of the linear-cost tridiagonal plans
/// against the generic dense path at a small dimension.
fn sparse_cross_check(seed: u64) -> Result<()> {
    let n = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let tol = 1e-12;

    let x = random_tridiag_son(n, &mut rng);
    let fast = skc2_tridiag_son(&x);
    let generic = plan_skc(&decompose(&x.dense(), &so_basis(n), None)?, 2)?;
    // The linear-cost so(n) plan runs in reversed basis order; the reversal
    // map a(t) -> -a(-t) carries the generic coefficients onto it.
    let mut generic_polys: std::collections::BTreeMap<usize, Poly> = generic
        .factors
        .iter()
        .map(|f| (f.index, f.poly.with_scaled_arg(-1.0).scaled(-1.0)))
        .collect();
    if fast.factor_count() != generic_polys.len() {
        return Err(Error::InvalidArgument(
            "so(n) cross-check: factor counts differ".into(),
        ));
    }
    for f in &fast.factors {
        let g = generic_polys.remove(&f.index).ok_or_else(|| {
            Error::InvalidArgument("so(n) cross-check: factor index mismatch".into())
        })?;
        if !polys_close(&f.poly, &g, tol) {
            return Err(Error::InvalidArgument(
                "so(n) cross-check: coefficients disagree with the generic path".into(),
            ));
        }
    }

    let x = random_tridiag_sln(n, &mut rng);
    let fast = skc2_tridiag_sln(&x);
    let generic = plan_skc(&decompose(&x.dense(), &sl_basis(n), None)?, 2)?;
    if fast.factor_count() != generic.factor_count() {
        return Err(Error::InvalidArgument(
            "sl(n) cross-check: factor counts differ".into(),
        ));
    }
    for (f, g) in fast.factors.iter().zip(&generic.factors) {
        if f.index != g.index || !polys_close(&f.poly, &g.poly, tol) {
            return Err(Error::InvalidArgument(
                "sl(n) cross-check: plans disagree with the generic path".into(),
            ));
        }
    }
    Ok(())
}

fn polys_close(a: &Poly, b: &Poly, tol: f64) -> bool {
    let (ca, cb) = (a.coeffs(), b.coeffs());
    let len = ca.len().max(cb.len());
    (0..len).all(|i| {
        let x = ca.get(i).copied().unwrap_or(0.0);
        let y = cb.get(i).copied().unwrap_or(0.0);
        (x - y).abs() <= tol
    })
}

/// Construction plus vector-application cost of the tridiagonal plans over
/// a doubling grid of dimensions, with a per-family linear-fit exponent.
///
/// Fails when either family's cost grows faster than n^1.2, and runs an
/// exact cross-check against the dense generic path before measuring.
pub fn cmd_bench_sparse(cfg: &RunConfig) -> Result<String> {
    let base = cfg.n;
    if base < 8 {
        return Err(Error::InvalidArgument(format!(
            "base n must be at least 8, got {base}"
        )));
    }
    sparse_cross_check(cfg.seed)?;
    let ns: Vec<usize> = (0..4).map(|i| base << i).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut csv = String::from("family,n,construction_flops,action_flops,total_flops,fit_exponent\n");
    for family in ["son", "sln"] {
        let mut totals = Vec::with_capacity(ns.len());
        let mut rows = Vec::with_capacity(ns.len());
        for &n in &ns {
            let mut fc = FlopCounter::new();
            let plan = match family {
                "son" => skc2_tridiag_son_counted(&random_tridiag_son(n, &mut rng), &mut fc),
                _ => skc2_tridiag_sln_counted(&random_tridiag_sln(n, &mut rng), &mut fc),
            };
            let ones = Array1::ones(n);
            let (_, ac) = evaluate_action_counted(&plan, 1.0, &ones);
            let total = fc.total() + ac.total();
            totals.push(total as f64);
            rows.push((n, fc.total(), ac.total(), total));
        }
        let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
        let exponent = fit_slope(&xs, &totals).unwrap_or(f64::NAN);
        for (n, c, a, total) in rows {
            csv.push_str(&format!(
                "{family},{n},{c},{a},{total},{exponent:.15e}\n"
            ));
        }
        if !(exponent <= 1.2) {
            return Err(Error::InvalidArgument(format!(
                "{family} cost exponent {exponent:.3} exceeds the 1.2 bound"
            )));
        }
    }
    csv.push_str(&cfg.echo("bench-sparse", &[], "cross_check=ok"));
    csv.push('\n');
    Ok(csv)
}

/// Output of the KdV benchmark: the error table, the fine reference
/// trajectory, and the profile rate fitted from it.
#[derive(Debug)]
pub struct KdvReport {
    /// Error-versus-h table as CSV.
    pub csv: String,
    /// Oracle-mode reference trajectory at h = 2^-10.
    pub reference: Trajectory,
    /// Rate b fitted from the reference profile y1(t) = sech^2(b t).
    pub beta_fit: f64,
}

/// Soliton endpoint errors for the oracle and symmetric product exponential
/// modes over h = 2^-1 .. 2^-kmax, against an oracle reference at h = 2^-10,
/// plus the mode-versus-mode difference column.
///
/// Errors track the soliton profile (the first state component) at t = 5.
pub fn cmd_kdv(cfg: &RunConfig) -> Result<KdvReport> {
    if cfg.kmax < 1 || cfg.kmax > 8 {
        return Err(Error::InvalidArgument(format!(
            "kmax must lie in 1..=8 so the reference stays finer, got {}",
            cfg.kmax
        )));
    }
    let ode = kdv_ode();
    let t_end = 5.0;
    let reference = integrate(&ode, 0.5f64.powi(10), t_end, ExpMode::Oracle)?;
    let r1 = reference.endpoint()[0];

    // y1(t) = sech^2(b t) inverts to b = acosh(y1^{-1/2}) / t; average over
    // the well-conditioned middle of the window.
    let mut fits = Vec::new();
    for (t, y) in reference.times.iter().zip(&reference.states) {
        if (0.5..=3.0).contains(t) && y[0] > 0.0 {
            fits.push((1.0 / y[0].sqrt()).acosh() / t);
        }
    }
    let beta_fit = fits.iter().sum::<f64>() / fits.len() as f64;

    let mut csv = String::from("h,oracle_error,skc4_sym_error,mode_difference\n");
    for &h in &dyadic_grid(cfg.kmax) {
        let o1 = integrate(&ode, h, t_end, ExpMode::Oracle)?.endpoint()[0];
        let s1 = integrate(&ode, h, t_end, ExpMode::SkcSymmetric4)?.endpoint()[0];
        csv.push_str(&format!(
            "{h:.15e},{:.15e},{:.15e},{:.15e}\n",
            (o1 - r1).abs(),
            (s1 - r1).abs(),
            (s1 - o1).abs(),
        ));
    }
    csv.push_str(&cfg.echo(
        "kdv",
        &[],
        &format!("reference_h=2^-10 metric=profile-endpoint beta_fit={beta_fit:.15e}"),
    ));
    csv.push('\n');
    Ok(KdvReport {
        csv,
        reference,
        beta_fit,
    })
}

#[cfg(test)]
mod tests {
    use ndarray::Array1;

    use super::*;
    use crate::oracle::expm_ref;
    use crate::splitting::{strang, yoshida4, SplitList};

    fn cfg(algebra: AlgebraKind, n: usize) -> RunConfig {
        RunConfig {
            algebra,
            n,
            methods: Vec::new(),
            kmax: 5,
            seed: 42,
            band: 2,
        }
    }

    #[test]
    fn random_elements_land_in_the_algebra_with_unit_norm() {
        for (kind, n) in [
            (AlgebraKind::SpecialOrthogonal, 5),
            (AlgebraKind::SpecialLinear, 4),
            (AlgebraKind::Lorentz, 4),
        ] {
            let elem = random_element(kind, n, 7).unwrap();
            let b = elem.materialize();
            assert!((frobenius_norm(&b) - 1.0).abs() <= 1e-12, "{kind:?}");
            match kind {
                AlgebraKind::SpecialOrthogonal => {
                    let sym = &b + &b.t();
                    assert!(frobenius_norm(&sym) <= 1e-14);
                }
                AlgebraKind::SpecialLinear => {
                    assert!(b.diag().sum().abs() <= 1e-14);
                }
                AlgebraKind::Lorentz => {
                    let j = Array2::from_diag(&Array1::from(vec![1.0, 1.0, 1.0, -1.0]));
                    let defect = b.dot(&j) + j.dot(&b.t());
                    assert!(frobenius_norm(&defect) <= 1e-14);
                }
            }
        }
    }

    #[test]
    fn random_elements_are_reproducible_and_seed_sensitive() {
        let a = random_element(AlgebraKind::SpecialOrthogonal, 4, 3).unwrap();
        let b = random_element(AlgebraKind::SpecialOrthogonal, 4, 3).unwrap();
        let c = random_element(AlgebraKind::SpecialOrthogonal, 4, 4).unwrap();
        assert_eq!(a.beta, b.beta);
        assert_ne!(a.beta, c.beta);
    }

    #[test]
    fn strang_plan_matches_the_matrix_composition() {
        let elem = random_element(AlgebraKind::SpecialOrthogonal, 4, 11).unwrap();
        let split = SplitList::from_basis_split(&elem);
        for &t in &[0.3, -0.7] {
            let via_plan = crate::compose::evaluate(&plan_strang(&elem), t);
            let via_matrix = strang(&split, t);
            assert!(frobenius_norm(&(&via_plan - &via_matrix)) <= 1e-13);
        }
    }

    #[test]
    fn yoshida_plan_matches_the_matrix_composition() {
        let elem = random_element(AlgebraKind::SpecialLinear, 3, 11).unwrap();
        let split = SplitList::from_basis_split(&elem);
        for &t in &[0.4, -0.25] {
            let via_plan = crate::compose::evaluate(&plan_yoshida4(&elem), t);
            let via_matrix = yoshida4(&split, t);
            assert!(frobenius_norm(&(&via_plan - &via_matrix)) <= 1e-13);
        }
    }

    #[test]
    fn bench_orders_csv_has_the_documented_shape() {
        let csv = cmd_bench_orders(&cfg(AlgebraKind::SpecialOrthogonal, 4)).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "method,t,error,flops,slope");
        // 7 default methods at this size, 5 grid points each, plus header
        // and the config echo.
        assert_eq!(lines.len(), 1 + 7 * 5 + 1);
        assert!(lines.last().unwrap().starts_with("# config: command=bench-orders"));
        let first = lines[1].split(',').collect::<Vec<_>>();
        assert_eq!(first.len(), 5);
        assert_eq!(first[0], "skc1");
        assert_eq!(first[1], "5.000000000000000e-1");
    }

    #[test]
    fn bench_orders_is_deterministic() {
        let c = cfg(AlgebraKind::Lorentz, 4);
        assert_eq!(cmd_bench_orders(&c).unwrap(), cmd_bench_orders(&c).unwrap());
    }

    #[test]
    fn bench_orders_slopes_sit_at_the_method_orders() {
        let mut c = cfg(AlgebraKind::SpecialLinear, 3);
        c.methods = vec![MethodId::Skc(1), MethodId::Skc(3), MethodId::Skc4Sym];
        let csv = cmd_bench_orders(&c).unwrap();
        let slope_of = |label: &str| -> f64 {
            csv.lines()
                .find(|l| l.starts_with(label))
                .unwrap()
                .rsplit(',')
                .next()
                .unwrap()
                .parse()
                .unwrap()
        };
        assert!((1.6..=2.6).contains(&slope_of("skc1")));
        assert!((3.6..=4.6).contains(&slope_of("skc3")));
        assert!((4.6..=5.8).contains(&slope_of("skc4-sym")));
    }

    #[test]
    fn bench_orders_respects_an_explicit_method_choice() {
        let mut c = cfg(AlgebraKind::SpecialOrthogonal, 4);
        c.methods = vec![MethodId::Strang];
        let csv = cmd_bench_orders(&c).unwrap();
        assert_eq!(csv.lines().count(), 1 + 5 + 1);
        assert!(csv.contains("methods=strang"));
    }

    #[test]
    fn method_ids_round_trip_and_reject_junk() {
        for id in ["skc1", "skc2", "skc3", "skc4", "skc4-sym", "strang", "yoshida4"] {
            assert_eq!(MethodId::parse(id).unwrap().label(), id);
        }
        assert!(MethodId::parse("skc5").is_err());
        assert!(MethodId::parse("rk4").is_err());
    }

    #[test]
    fn bench_q2_reports_the_banded_saving() {
        let c = cfg(AlgebraKind::SpecialOrthogonal, 50);
        let report = cmd_bench_q2(&c).unwrap();
        assert!(report.table.contains("banded <= full/5: ok"));
        let lines: Vec<&str> = report.csv.lines().collect();
        assert_eq!(lines[0], "input,n,band,mults,adds,total,total_per_n3");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("full,50,49,"));
        assert!(lines[2].starts_with("banded,50,2,"));
        assert!(lines[3].starts_with("# config:"));
    }

    #[test]
    fn bench_q2_rejects_bad_bands() {
        let mut c = cfg(AlgebraKind::SpecialOrthogonal, 50);
        c.band = 0;
        assert!(cmd_bench_q2(&c).is_err());
        c.band = 50;
        assert!(cmd_bench_q2(&c).is_err());
    }

    #[test]
    fn bench_sparse_fits_a_linear_exponent() {
        let mut c = cfg(AlgebraKind::SpecialOrthogonal, 50);
        c.n = 50;
        let csv = cmd_bench_sparse(&c).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "family,n,construction_flops,action_flops,total_flops,fit_exponent"
        );
        // Two families over four dimensions, plus header and config echo.
        assert_eq!(lines.len(), 1 + 8 + 1);
        assert!(lines.last().unwrap().contains("cross_check=ok"));
        for family in ["son", "sln"] {
            let row = lines.iter().find(|l| l.starts_with(family)).unwrap();
            let exponent: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
            assert!(
                (0.8..=1.2).contains(&exponent),
                "{family} exponent {exponent}"
            );
        }
    }

    #[test]
    fn kdv_table_shows_fourth_order_shrinkage_and_small_mode_gap() {
        let c = cfg(AlgebraKind::SpecialLinear, 3);
        let report = cmd_kdv(&c).unwrap();
        let lines: Vec<&str> = report.csv.lines().collect();
        assert_eq!(lines[0], "h,oracle_error,skc4_sym_error,mode_difference");
        assert_eq!(lines.len(), 1 + 5 + 1);
        let rows: Vec<Vec<f64>> = lines[1..=5]
            .iter()
            .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
            .collect();
        // Both error columns shrink by roughly 16 per halving once the run
        // is inside the asymptotic regime.
        for col in [1, 2] {
            let ratio = rows[3][col] / rows[4][col];
            assert!((10.0..=24.0).contains(&ratio), "col {col} ratio {ratio}");
        }
        // The mode difference stays within 10x of the oracle error row by row.
        for row in &rows {
            assert!(row[3] <= 10.0 * row[1]);
        }
        assert!((report.beta_fit - 3f64.sqrt() / 2.0).abs() <= 1e-6);
        assert_eq!(report.reference.states.len(), 5 * 1024 + 1);
    }

    #[test]
    fn plans_agree_with_the_oracle_at_small_t() {
        // End-to-end sanity: every method id produces a plan whose value at
        // small t tracks the true exponential.
        let elem = random_element(AlgebraKind::Lorentz, 4, 5).unwrap();
        let b = elem.materialize();
        let t = 0.5f64.powi(6);
        let target = expm_ref(&b.mapv(|x| t * x));
        for id in ["skc1", "skc2", "skc3", "skc4", "skc4-sym", "strang", "yoshida4"] {
            let plan = MethodId::parse(id).unwrap().build(&elem).unwrap();
            let f = crate::compose::evaluate(&plan, t);
            let err = frobenius_norm(&(&f - &target));
            assert!(err <= 1e-3, "{id}: err {err}");
        }
    }
}
