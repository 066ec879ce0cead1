//! Error versus step for every built-in method on each algebra family.
//!
//! A product of elementary exponentials in canonical coordinates of the
//! second kind matches exp(tB) to the method's order p, so the error falls
//! as t^{p+1} and the fitted log-log slope sits near p + 1.
//!
//! Run with: cargo run --example order_convergence

use liexp::{
    error_frob, evaluate, fit_slope, plan_skc, random_element, AlgebraKind, MethodId,
};

fn main() {
    let ts: Vec<f64> = (1..=5).map(|k| 0.5f64.powi(k)).collect();
    let methods = [
        MethodId::Skc(1),
        MethodId::Skc(2),
        MethodId::Skc(3),
        MethodId::Skc(4),
        MethodId::Strang,
        MethodId::Yoshida4,
        MethodId::Skc4Sym,
    ];

    for (kind, n, name) in [
        (AlgebraKind::SpecialOrthogonal, 5, "so(5)"),
        (AlgebraKind::SpecialLinear, 4, "sl(4)"),
        (AlgebraKind::Lorentz, 4, "so(3,1)"),
    ] {
        let elem = random_element(kind, n, 42).expect("valid dimension");
        let b = elem.materialize();
        println!("{name}, random element with unit Frobenius norm:");
        println!("  {:<10} {:>12} {:>12} {:>8}", "method", "err(1/2)", "err(1/32)", "slope");
        for method in methods {
            let plan = method.build(&elem).expect("supported order");
            let errors: Vec<f64> = ts
                .iter()
                .map(|&t| error_frob(&b, t, &evaluate(&plan, t)))
                .collect();
            let slope = fit_slope(&ts, &errors).expect("errors above rounding");
            println!(
                "  {:<10} {:>12.3e} {:>12.3e} {:>8.2}",
                method.label(),
                errors[0],
                errors[4],
                slope
            );
        }
        println!();
    }

    // The same claim, read off one order at a time: each extra order buys
    // one extra power of t.
    let elem = random_element(AlgebraKind::SpecialOrthogonal, 5, 7).unwrap();
    let b = elem.materialize();
    println!("so(5), error reduction per halving of t at order p:");
    for p in 1..=4usize {
        let plan = plan_skc(&elem, p).unwrap();
        let e1 = error_frob(&b, 0.25, &evaluate(&plan, 0.25));
        let e2 = error_frob(&b, 0.125, &evaluate(&plan, 0.125));
        println!(
            "  order {p}: {e1:.3e} -> {e2:.3e}  (factor {:.1}, expect ~{})",
            e1 / e2,
            1 << (p + 1)
        );
    }
}
