//! A Lie-group integrator on the KdV soliton's scattering problem.
//!
//! The system y' = A(y) y with trace-free A evolves on a group orbit; the
//! fourth-order Runge-Kutta-Munthe-Kaas scheme steps it by exponentials of
//! algebra elements. With the exponential replaced by the symmetric
//! fourth-order canonical-coordinate product, the integrator keeps both its
//! order and the group structure. The profile component reproduces the
//! soliton u(t) = sech^2(sqrt(3) t / 2).
//!
//! Run with: cargo run --release --example kdv_soliton

use liexp::{integrate, kdv_ode, kdv_soliton_y1, ExpMode};

fn main() {
    let ode = kdv_ode();

    // A fine oracle-mode run pins the reference; sample its profile against
    // the closed form.
    let reference = integrate(&ode, 0.5f64.powi(10), 5.0, ExpMode::Oracle).unwrap();
    println!("reference profile vs sech^2(sqrt(3) t / 2):\n");
    println!("  {:>5} {:>22} {:>22}", "t", "y1(t)", "closed form");
    for &t in &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0] {
        let idx = (t / 0.5f64.powi(10)).round() as usize;
        println!(
            "  {t:>5} {:>22.15e} {:>22.15e}",
            reference.states[idx][0],
            kdv_soliton_y1(t)
        );
    }

    // Error versus step for the exact exponential and for the factored
    // product: both fourth order, and close to each other.
    let r1 = reference.endpoint()[0];
    println!("\nendpoint profile error at t = 5:\n");
    println!(
        "  {:>7} {:>14} {:>14} {:>14}",
        "h", "oracle exp", "skc4-sym exp", "mode diff"
    );
    for k in 1..=5 {
        let h = 0.5f64.powi(k);
        let o = integrate(&ode, h, 5.0, ExpMode::Oracle).unwrap().endpoint()[0];
        let s = integrate(&ode, h, 5.0, ExpMode::SkcSymmetric4)
            .unwrap()
            .endpoint()[0];
        println!(
            "  {:>7} {:>14.3e} {:>14.3e} {:>14.3e}",
            format!("2^-{k}"),
            (o - r1).abs(),
            (s - r1).abs(),
            (s - o).abs()
        );
    }
    println!("\n  Each halving divides both error columns by ~16 (order 4), and");
    println!("  swapping the exact exponential for the factored product moves the");
    println!("  solution by an amount on the order of the integration error itself.");
}
