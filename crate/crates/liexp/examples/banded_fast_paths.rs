//! Linear-cost order-2 products for tridiagonal inputs.
//!
//! A tridiagonal element of so(n) or sl(n) admits an order-2 factored
//! product whose construction touches O(n) scalars and whose factors stay
//! inside a fixed band, so both building the product and applying it to a
//! vector cost O(n). The flop counts below are exact tallies, not models.
//!
//! Run with: cargo run --example banded_fast_paths

use liexp::{
    error_frob, evaluate, evaluate_action_counted, skc2_tridiag_sln_counted,
    skc2_tridiag_son_counted, FlopCounter, TridiagSL, TridiagSO,
};
use ndarray::Array1;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);

    println!("construction + apply-to-vector flops, tridiagonal so(n):\n");
    println!("  {:>6} {:>10} {:>10} {:>9} {:>7}", "n", "construct", "apply", "factors", "ratio");
    let mut last = 0u64;
    for i in 0..5 {
        let n = 250usize << i;
        let beta: Vec<f64> = (0..n - 1).map(|_| rng.gen()).collect();
        let mut fc = FlopCounter::new();
        let plan = skc2_tridiag_son_counted(&TridiagSO::new(beta).unwrap(), &mut fc);
        let (_, ac) = evaluate_action_counted(&plan, 1.0, &Array1::ones(n));
        let total = fc.total() + ac.total();
        let ratio = if last > 0 {
            format!("{:.2}", total as f64 / last as f64)
        } else {
            "-".to_string()
        };
        println!(
            "  {n:>6} {:>10} {:>10} {:>9} {:>7}",
            fc.total(),
            ac.total(),
            plan.factor_count(),
            ratio
        );
        last = total;
    }
    println!("\n  Doubling n doubles the work: the cost is O(n), not O(n^3).\n");

    // The same for sl(n), whose tridiagonal product also needs the running
    // sums of the diagonal.
    let n = 1000;
    let superdiag: Vec<f64> = (0..n - 1).map(|_| rng.gen()).collect();
    let subdiag: Vec<f64> = (0..n - 1).map(|_| rng.gen()).collect();
    let mut diag: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
    let mean = diag.iter().sum::<f64>() / n as f64;
    diag.iter_mut().for_each(|d| *d -= mean);
    let residual: f64 = diag.iter().sum();
    diag[0] -= residual;
    let mut fc = FlopCounter::new();
    let plan = skc2_tridiag_sln_counted(&TridiagSL::new(diag, superdiag, subdiag).unwrap(), &mut fc);
    println!(
        "tridiagonal sl({n}): {} construction flops, {} factors, all within a band of half-width 2\n",
        fc.total(),
        plan.factor_count()
    );

    // Correctness at a checkable size: the order-2 product tracks exp(tB)
    // with an O(t^3) error.
    let n = 8;
    let beta: Vec<f64> = (0..n - 1).map(|_| rng.gen()).collect();
    let x = TridiagSO::new(beta).unwrap();
    let b = x.dense();
    let mut fc = FlopCounter::new();
    let plan = skc2_tridiag_son_counted(&x, &mut fc);
    println!("order-2 check, tridiagonal so(8):");
    for &t in &[0.25, 0.125, 0.0625] {
        println!("  t = {t:<7} error {:.3e}", error_frob(&b, t, &evaluate(&plan, t)));
    }
    println!("  each halving divides the error by ~8 (order 2).");
}
