//! Evaluation of factored products of elementary exponentials.
//!
//! A [`Plan`] records a product `F(t) = exp(a_1(t) V_{k_1}) * ... *
//! exp(a_m(t) V_{k_m})` as a list of (basis element, polynomial) factors in
//! left-to-right order. Every `V_k` of the built-in bases exponentiates in
//! closed form to a Givens rotation, a shear, a two-entry diagonal scaling,
//! or a hyperbolic rotation, so applying one factor to an n x n matrix
//! touches two rows or columns (O(n) work) and applying it to a vector
//! touches two entries (O(1) work). Products therefore lie in the group
//! exactly, up to rounding in the factor entries themselves.
//!
//! Counted variants tally scalar multiply/add flops: coefficient Horner
//! evaluations and the row/column updates are counted, transcendental
//! function evaluations are not.

use ndarray::{Array1, Array2};

use crate::algebra::{AlgebraElement, Basis, ElementKind};
use crate::coords::{alphas_from_coeffs, order_coeffs_generic, AlphaPolynomials};
use crate::flops::FlopCounter;
use crate::Result;

/// Dense univariate polynomial; `coeffs[r]` multiplies `t^r`. Trailing
/// zero coefficients are trimmed so the degree is meaningful.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    /// Build from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// Ascending coefficients with trailing zeros removed.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// True when every coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Evaluate at `t` by Horner's rule.
    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    /// Number of multiply (= add) operations one Horner evaluation costs.
    fn horner_ops(&self) -> u64 {
        self.coeffs.len().saturating_sub(1) as u64
    }

    /// The polynomial `c * p(t)`.
    pub fn scaled(&self, c: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&x| c * x).collect())
    }

    /// The polynomial `p(a t)`.
    pub fn with_scaled_arg(&self, a: f64) -> Poly {
        let mut pw = 1.0;
        Poly::new(
            self.coeffs
                .iter()
                .map(|&x| {
                    let y = x * pw;
                    pw *= a;
                    y
                })
                .collect(),
        )
    }
}

/// Which side of the accumulated matrix an elementary factor multiplies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `M <- U M`.
    Left,
    /// `M <- M U`.
    Right,
}

/// One factor of a plan: basis index, its structural kind (cached so the
/// evaluators need no index arithmetic), and the coefficient polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanFactor {
    /// Index of the basis element this factor exponentiates.
    pub index: usize,
    /// Structural kind of that element.
    pub kind: ElementKind,
    /// Coefficient polynomial `a(t)`.
    pub poly: Poly,
}

/// A product of elementary exponentials, leftmost factor first.
#[derive(Clone, Debug)]
pub struct Plan {
    /// Basis the factor indices refer to.
    pub basis: Basis,
    /// Factors in product order (the first factor is leftmost).
    pub factors: Vec<PlanFactor>,
}

impl Plan {
    /// Build a canonical-order plan from coefficient polynomials, one
    /// factor per basis element with a nonzero polynomial.
    pub fn from_alphas(alphas: &AlphaPolynomials) -> Plan {
        let basis = alphas.basis.clone();
        let factors = alphas
            .polys
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(k, p)| PlanFactor {
                index: k,
                kind: basis.element(k).kind,
                poly: p.clone(),
            })
            .collect();
        Plan { basis, factors }
    }

    /// Number of factors in the product.
    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }
}

/// Canonical-coordinate plan of the requested order (1 through 4) for a
/// decomposed algebra element, using the generic structure-constant
/// recursions. The factor order is the basis order.
pub fn plan_skc(elem: &AlgebraElement, order: usize) -> Result<Plan> {
    let coeffs = order_coeffs_generic(elem, order)?;
    Ok(Plan::from_alphas(&alphas_from_coeffs(&coeffs)))
}

/// Apply `exp(s V)` to the matrix `m` in place, on the given side.
pub fn elem_exp_apply(m: &mut Array2<f64>, kind: ElementKind, s: f64, side: Side) {
    let n = m.nrows();
    match kind {
        ElementKind::PlaneRotation { i, j } => {
            // exp(s F(i,j)) has the 2x2 block [[cos s, sin s], [-sin s, cos s]]
            // in the (i, j) plane.
            let (c, sn) = (s.cos(), s.sin());
            match side {
                Side::Right => {
                    for r in 0..n {
                        let a = m[[r, i]];
                        let b = m[[r, j]];
                        m[[r, i]] = c * a - sn * b;
                        m[[r, j]] = sn * a + c * b;
                    }
                }
                Side::Left => {
                    for col in 0..n {
                        let a = m[[i, col]];
                        let b = m[[j, col]];
                        m[[i, col]] = c * a + sn * b;
                        m[[j, col]] = -sn * a + c * b;
                    }
                }
            }
        }
        ElementKind::Boost { i, j } => {
            // exp(s K(i,j)) has the block [[cosh s, sinh s], [sinh s, cosh s]].
            let (ch, sh) = (s.cosh(), s.sinh());
            match side {
                Side::Right => {
                    for r in 0..n {
                        let a = m[[r, i]];
                        let b = m[[r, j]];
                        m[[r, i]] = ch * a + sh * b;
                        m[[r, j]] = sh * a + ch * b;
                    }
                }
                Side::Left => {
                    for col in 0..n {
                        let a = m[[i, col]];
                        let b = m[[j, col]];
                        m[[i, col]] = ch * a + sh * b;
                        m[[j, col]] = sh * a + ch * b;
                    }
                }
            }
        }
        ElementKind::MatrixUnit { i, j } => {
            // exp(s E(i,j)) = I + s E(i,j) since E(i,j)^2 = 0 for i != j.
            match side {
                Side::Right => {
                    for r in 0..n {
                        let a = m[[r, i]];
                        m[[r, j]] += s * a;
                    }
                }
                Side::Left => {
                    for col in 0..n {
                        let b = m[[j, col]];
                        m[[i, col]] += s * b;
                    }
                }
            }
        }
        ElementKind::DiagPair { i } => {
            // exp(s D(i)) scales row/column i by e^s and i+1 by e^{-s}.
            let e = s.exp();
            let ei = (-s).exp();
            match side {
                Side::Right => {
                    for r in 0..n {
                        m[[r, i]] *= e;
                        m[[r, i + 1]] *= ei;
                    }
                }
                Side::Left => {
                    for col in 0..n {
                        m[[i, col]] *= e;
                        m[[i + 1, col]] *= ei;
                    }
                }
            }
        }
    }
}

/// Apply `exp(s V)` to a vector in place (`v <- exp(sV) v`).
pub fn elem_exp_apply_vec(v: &mut Array1<f64>, kind: ElementKind, s: f64) {
    match kind {
        ElementKind::PlaneRotation { i, j } => {
            let (c, sn) = (s.cos(), s.sin());
            let a = v[i];
            let b = v[j];
            v[i] = c * a + sn * b;
            v[j] = -sn * a + c * b;
        }
        ElementKind::Boost { i, j } => {
            let (ch, sh) = (s.cosh(), s.sinh());
            let a = v[i];
            let b = v[j];
            v[i] = ch * a + sh * b;
            v[j] = sh * a + ch * b;
        }
        ElementKind::MatrixUnit { i, j } => {
            v[i] += s * v[j];
        }
        ElementKind::DiagPair { i } => {
            v[i] *= s.exp();
            v[i + 1] *= (-s).exp();
        }
    }
}

/// Flop cost of applying one factor to an n x n matrix: (mults, adds).
fn matrix_apply_cost(kind: ElementKind, n: u64) -> (u64, u64) {
    match kind {
        ElementKind::PlaneRotation { .. } | ElementKind::Boost { .. } => (4 * n, 2 * n),
        ElementKind::MatrixUnit { .. } => (n, n),
        ElementKind::DiagPair { .. } => (2 * n, 0),
    }
}

/// Flop cost of applying one factor to a vector: (mults, adds).
fn vector_apply_cost(kind: ElementKind) -> (u64, u64) {
    match kind {
        ElementKind::PlaneRotation { .. } | ElementKind::Boost { .. } => (4, 2),
        ElementKind::MatrixUnit { .. } => (1, 1),
        ElementKind::DiagPair { .. } => (2, 0),
    }
}

/// Evaluate the product at `t` as a dense matrix.
pub fn evaluate(plan: &Plan, t: f64) -> Array2<f64> {
    let mut m = Array2::eye(plan.basis.n);
    for f in &plan.factors {
        let s = f.poly.eval(t);
        if s != 0.0 {
            elem_exp_apply(&mut m, f.kind, s, Side::Right);
        }
    }
    m
}

/// [`evaluate`] with an explicit flop tally.
pub fn evaluate_counted(plan: &Plan, t: f64) -> (Array2<f64>, FlopCounter) {
    let n = plan.basis.n as u64;
    let mut fc = FlopCounter::new();
    let mut m = Array2::eye(plan.basis.n);
    for f in &plan.factors {
        let h = f.poly.horner_ops();
        fc.record(h, h);
        let s = f.poly.eval(t);
        if s != 0.0 {
            elem_exp_apply(&mut m, f.kind, s, Side::Right);
            let (mu, ad) = matrix_apply_cost(f.kind, n);
            fc.record(mu, ad);
        }
    }
    (m, fc)
}

/// Evaluate the product's action on a vector: `F(t) y` without forming
/// `F(t)`. Factors are applied right-to-left, each in O(1) work.
pub fn evaluate_action(plan: &Plan, t: f64, y: &Array1<f64>) -> Array1<f64> {
    let mut v = y.clone();
    for f in plan.factors.iter().rev() {
        let s = f.poly.eval(t);
        if s != 0.0 {
            elem_exp_apply_vec(&mut v, f.kind, s);
        }
    }
    v
}

/// [`evaluate_action`] with an explicit flop tally.
pub fn evaluate_action_counted(
    plan: &Plan,
    t: f64,
    y: &Array1<f64>,
) -> (Array1<f64>, FlopCounter) {
    let mut fc = FlopCounter::new();
    let mut v = y.clone();
    for f in plan.factors.iter().rev() {
        let h = f.poly.horner_ops();
        fc.record(h, h);
        let s = f.poly.eval(t);
        if s != 0.0 {
            elem_exp_apply_vec(&mut v, f.kind, s);
            let (mu, ad) = vector_apply_cost(f.kind);
            fc.record(mu, ad);
        }
    }
    (v, fc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{
        decompose, lorentz_basis, sl_basis, so_basis, AlgebraElement,
    };
    use crate::oracle::{det, expm_ref, frobenius_norm};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn apply_dense(kind: ElementKind, s: f64, n: usize) -> Array2<f64> {
        let mut m = Array2::eye(n);
        elem_exp_apply(&mut m, kind, s, Side::Right);
        m
    }

    #[test]
    fn poly_eval_matches_naive() {
        let p = Poly::new(vec![0.5, -1.0, 0.0, 2.0]);
        for &t in &[0.0, 0.3, -1.7, 2.0] {
            let naive = 0.5 - t + 2.0 * t * t * t;
            assert!((p.eval(t) - naive).abs() <= 1e-14);
        }
        assert_eq!(p.coeffs().len(), 4);
        assert!(Poly::new(vec![0.0, 0.0]).is_zero());
        let q = p.with_scaled_arg(-1.0);
        assert!((q.eval(2.0) - p.eval(-2.0)).abs() <= 1e-14);
        let r = p.scaled(3.0);
        assert!((r.eval(0.7) - 3.0 * p.eval(0.7)).abs() <= 1e-14);
    }

    #[test]
    fn elementary_factors_match_reference_exponential() {
        let n = 5;
        let so = so_basis(n);
        let sl = sl_basis(n);
        let s = 0.83;
        for basis in [&so, &sl] {
            for k in 0..basis.d {
                let e = basis.element(k);
                let direct = apply_dense(e.kind, s, n);
                let reference = expm_ref(&e.dense().mapv(|x| s * x));
                assert!(
                    frobenius_norm(&(direct - reference)) <= 1e-13,
                    "factor {k} disagrees with the reference exponential"
                );
            }
        }
    }

    #[test]
    fn boost_factor_matches_reference() {
        let basis = lorentz_basis();
        let s = 0.7;
        // Element 3 is the first boost, mixing coordinates 0 and 3.
        let e = basis.element(3);
        assert_eq!(e.kind, ElementKind::Boost { i: 0, j: 3 });
        let direct = apply_dense(e.kind, s, 4);
        let reference = expm_ref(&e.dense().mapv(|x| s * x));
        assert!(frobenius_norm(&(&direct - &reference)) <= 1e-14);
        assert!((direct[[0, 0]] - s.cosh()).abs() <= 1e-15);
        assert!((direct[[0, 3]] - s.sinh()).abs() <= 1e-15);
    }

    #[test]
    fn left_and_right_sides_agree_on_identity() {
        let basis = lorentz_basis();
        for k in 0..basis.d {
            let kind = basis.element(k).kind;
            let mut l = Array2::eye(4);
            let mut r = Array2::eye(4);
            elem_exp_apply(&mut l, kind, 0.4, Side::Left);
            elem_exp_apply(&mut r, kind, 0.4, Side::Right);
            assert!(frobenius_norm(&(l - r)) == 0.0, "element {k}");
        }
    }

    #[test]
    fn sides_compose_correctly_against_dense_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 4;
        let m0 = Array2::from_shape_fn((n, n), |_| rng.gen_range(-1.0..1.0));
        let basis = sl_basis(n);
        for k in 0..basis.d {
            let kind = basis.element(k).kind;
            let u = apply_dense(kind, -0.6, n);
            let mut right = m0.clone();
            elem_exp_apply(&mut right, kind, -0.6, Side::Right);
            assert!(frobenius_norm(&(right - m0.dot(&u))) <= 1e-14);
            let mut left = m0.clone();
            elem_exp_apply(&mut left, kind, -0.6, Side::Left);
            assert!(frobenius_norm(&(left - u.dot(&m0))) <= 1e-14);
        }
    }

    #[test]
    fn vector_apply_matches_matrix_apply() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let n = 6;
        let basis = so_basis(n);
        let y = Array1::from_shape_fn(n, |_| rng.gen_range(-1.0..1.0));
        for k in 0..basis.d {
            let kind = basis.element(k).kind;
            let u = apply_dense(kind, 1.1, n);
            let mut v = y.clone();
            elem_exp_apply_vec(&mut v, kind, 1.1);
            let diff = &v - &u.dot(&y);
            assert!(diff.iter().all(|x| x.abs() <= 1e-14), "element {k}");
        }
    }

    #[test]
    fn evaluate_at_zero_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let basis = so_basis(4);
        let beta: Vec<f64> = (0..basis.d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let elem = AlgebraElement::new(basis, beta).unwrap();
        let plan = plan_skc(&elem, 2).unwrap();
        let f = evaluate(&plan, 0.0);
        let eye: Array2<f64> = Array2::eye(4);
        assert_eq!(frobenius_norm(&(f - eye)), 0.0);
    }

    #[test]
    fn evaluate_matches_dense_factor_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let basis = sl_basis(3);
        let beta: Vec<f64> = (0..basis.d).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let elem = AlgebraElement::new(basis.clone(), beta).unwrap();
        let plan = plan_skc(&elem, 3).unwrap();
        let t = 0.37;
        let fast = evaluate(&plan, t);
        let mut dense: Array2<f64> = Array2::eye(3);
        for f in &plan.factors {
            let s = f.poly.eval(t);
            let factor = expm_ref(&basis.element(f.index).dense().mapv(|x| s * x));
            dense = dense.dot(&factor);
        }
        assert!(frobenius_norm(&(fast - dense)) <= 1e-13);
    }

    #[test]
    fn action_matches_full_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let basis = lorentz_basis();
        let beta: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let elem = AlgebraElement::new(basis, beta).unwrap();
        let plan = plan_skc(&elem, 2).unwrap();
        let y = Array1::from_shape_fn(4, |_| rng.gen_range(-1.0..1.0));
        let t = 0.9;
        let via_action = evaluate_action(&plan, t, &y);
        let via_matrix = evaluate(&plan, t).dot(&y);
        let diff = &via_action - &via_matrix;
        assert!(diff.iter().all(|x| x.abs() <= 1e-13));
    }

    #[test]
    fn counted_variants_return_same_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let basis = so_basis(5);
        let beta: Vec<f64> = (0..basis.d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let elem = AlgebraElement::new(basis, beta).unwrap();
        let plan = plan_skc(&elem, 2).unwrap();
        let (m, fc) = evaluate_counted(&plan, 0.5);
        assert!(frobenius_norm(&(m - evaluate(&plan, 0.5))) == 0.0);
        assert!(fc.total() > 0);
        let y = Array1::from_shape_fn(5, |_| rng.gen_range(-1.0..1.0));
        let (v, fcv) = evaluate_action_counted(&plan, 0.5, &y);
        let direct = evaluate_action(&plan, 0.5, &y);
        assert!(v.iter().zip(direct.iter()).all(|(a, b)| a == b));
        assert!(fcv.total() > 0);
    }

    #[test]
    fn matrix_evaluation_cost_stays_within_cubic_budget() {
        // The order-2 canonical product over so(n) has n(n-1)/2 rotation
        // factors at 6n flops each plus a quadratic Horner cost, which must
        // fit under 2n^3 + 50n^2 at these sizes.
        for &n in &[10usize, 20, 40] {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            let basis = so_basis(n);
            let beta: Vec<f64> =
                (0..basis.d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let elem = AlgebraElement::new(basis, beta).unwrap();
            let plan = plan_skc(&elem, 2).unwrap();
            let (_, fc) = evaluate_counted(&plan, 0.25);
            let budget = 2 * (n as u64).pow(3) + 50 * (n as u64).pow(2);
            assert!(
                fc.total() <= budget,
                "n = {n}: {} flops exceeds {budget}",
                fc.total()
            );
        }
    }

    #[test]
    fn action_cost_is_a_vanishing_fraction_of_matrix_cost() {
        let sizes = [10usize, 20, 40];
        let mut ratios = Vec::new();
        for &n in &sizes {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + n as u64);
            let basis = so_basis(n);
            let beta: Vec<f64> =
                (0..basis.d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let elem = AlgebraElement::new(basis, beta).unwrap();
            let plan = plan_skc(&elem, 2).unwrap();
            let y = Array1::from_shape_fn(n, |_| rng.gen_range(-1.0..1.0));
            let (_, fm) = evaluate_counted(&plan, 0.25);
            let (_, fv) = evaluate_action_counted(&plan, 0.25, &y);
            ratios.push(fv.total() as f64 / fm.total() as f64);
        }
        // Ratio behaves like O(1/n): it shrinks roughly in half per
        // doubling and is well below 4/n at every size.
        for (&n, &r) in sizes.iter().zip(&ratios) {
            assert!(r <= 4.0 / n as f64, "n = {n}: ratio {r}");
        }
        assert!(ratios[2] < ratios[1] && ratios[1] < ratios[0]);
    }

    #[test]
    fn zero_polynomials_are_omitted_from_plans() {
        // A single-element coefficient vector exponentiates exactly: the
        // plan holds one factor and every higher-order polynomial is gone.
        let basis = so_basis(4);
        let mut beta = vec![0.0; basis.d];
        beta[2] = 0.9;
        let elem = AlgebraElement::new(basis, beta).unwrap();
        let plan = plan_skc(&elem, 4).unwrap();
        assert_eq!(plan.factor_count(), 1);
        assert_eq!(plan.factors[0].index, 2);
        let f = evaluate(&plan, 1.3);
        let reference = expm_ref(&elem.materialize().mapv(|x| 1.3 * x));
        assert!(frobenius_norm(&(f - reference)) <= 1e-13);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn prop_orthogonal_products_stay_orthogonal(
            seed in 0u64..500,
            t in -1.0f64..1.0,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let basis = so_basis(4);
            let beta: Vec<f64> =
                (0..basis.d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let elem = AlgebraElement::new(basis, beta).unwrap();
            let plan = plan_skc(&elem, 2).unwrap();
            let f = evaluate(&plan, t);
            let eye: Array2<f64> = Array2::eye(4);
            let defect = frobenius_norm(&(f.t().dot(&f) - eye));
            prop_assert!(defect <= 1e-13, "orthogonality defect {defect:e}");
        }

        #[test]
        fn prop_special_linear_products_keep_unit_determinant(
            seed in 0u64..500,
            t in -1.0f64..1.0,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let basis = sl_basis(3);
            let beta: Vec<f64> =
                (0..basis.d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let elem = AlgebraElement::new(basis, beta).unwrap();
            let plan = plan_skc(&elem, 2).unwrap();
            let f = evaluate(&plan, t);
            prop_assert!((det(&f) - 1.0).abs() <= 1e-11);
        }

        #[test]
        fn prop_lorentz_products_preserve_the_form(
            seed in 0u64..500,
            t in -1.0f64..1.0,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let basis = lorentz_basis();
            let beta: Vec<f64> =
                (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let elem = AlgebraElement::new(basis, beta).unwrap();
            let plan = plan_skc(&elem, 2).unwrap();
            let f = evaluate(&plan, t);
            let j = Array2::from_diag(&ndarray::arr1(&[1.0, 1.0, 1.0, -1.0]));
            let defect = frobenius_norm(&(f.dot(&j).dot(&f.t()) - &j));
            prop_assert!(defect <= 1e-12, "form defect {defect:e}");
        }
    }

    #[test]
    fn decomposed_random_element_round_trip_through_plan() {
        // decompose -> plan -> evaluate approaches the true exponential as
        // t shrinks; at t = 1e-3 an order-2 product of a unit-norm element
        // is already accurate to ~1e-9.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let n = 4;
        let raw = Array2::from_shape_fn((n, n), |_| rng.gen_range(-1.0..1.0));
        let skew = (&raw - &raw.t()) / 2.0;
        let nrm = frobenius_norm(&skew);
        let b = skew.mapv(|x| x / nrm);
        let elem = decompose(&b, &so_basis(n), None).unwrap();
        let plan = plan_skc(&elem, 2).unwrap();
        let t = 1e-3;
        let f = evaluate(&plan, t);
        let reference = expm_ref(&b.mapv(|x| t * x));
        assert!(frobenius_norm(&(f - reference)) <= 1e-9);
    }
}
