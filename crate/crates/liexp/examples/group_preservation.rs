//! Why factored approximants: they live on the group exactly.
//!
//! Every factor of a canonical-coordinate product is a one-parameter group
//! element (rotation, shear, diagonal pair, boost), so the product satisfies
//! its group constraint to rounding error at any t, even far outside the
//! regime where it approximates exp(tB) well. A truncated Taylor polynomial
//! of the same order drifts off the group as soon as t grows.
//!
//! Run with: cargo run --example group_preservation

use liexp::{det, evaluate, expm_ref, frobenius_norm, plan_skc, random_element, AlgebraKind};
use ndarray::{Array1, Array2};

fn taylor2(b: &Array2<f64>, t: f64) -> Array2<f64> {
    let tb = b.mapv(|x| t * x);
    Array2::eye(b.nrows()) + &tb + tb.dot(&tb).mapv(|x| 0.5 * x)
}

fn main() {
    println!("so(6): orthogonality defect |F'F - I| and flow error vs t\n");
    let elem = random_element(AlgebraKind::SpecialOrthogonal, 6, 42).unwrap();
    let b = elem.materialize();
    let plan = plan_skc(&elem, 2).unwrap();
    let eye = Array2::<f64>::eye(6);
    println!(
        "  {:>6} {:>14} {:>14} {:>14}",
        "t", "skc2 defect", "taylor2 defect", "skc2 error"
    );
    for &t in &[0.125, 0.5, 2.0, 8.0] {
        let f = evaluate(&plan, t);
        let g = taylor2(&b, t);
        let defect_f = frobenius_norm(&(f.t().dot(&f) - &eye));
        let defect_g = frobenius_norm(&(g.t().dot(&g) - &eye));
        let err = frobenius_norm(&(&f - &expm_ref(&b.mapv(|x| t * x))));
        println!("  {t:>6} {defect_f:>14.2e} {defect_g:>14.2e} {err:>14.2e}");
    }
    println!("\n  The approximation error grows with t, but the product never");
    println!("  leaves SO(6); the Taylor polynomial leaves it immediately.\n");

    println!("sl(4): determinant of the factored product vs t\n");
    let elem = random_element(AlgebraKind::SpecialLinear, 4, 7).unwrap();
    let plan = plan_skc(&elem, 3).unwrap();
    for &t in &[0.25, 1.0, 4.0] {
        let f = evaluate(&plan, t);
        println!("  t = {t:<5} det F = {:.16}", det(&f));
    }

    println!("\nso(3,1): invariance of the form J = diag(1,1,1,-1)\n");
    let j = Array2::from_diag(&Array1::from(vec![1.0, 1.0, 1.0, -1.0]));
    let elem = random_element(AlgebraKind::Lorentz, 4, 9).unwrap();
    let plan = plan_skc(&elem, 4).unwrap();
    for &t in &[0.5, 3.0] {
        let f = evaluate(&plan, t);
        let defect = frobenius_norm(&(f.dot(&j).dot(&f.t()) - &j));
        println!("  t = {t:<5} |F J F' - J| = {defect:.2e}");
    }
}
