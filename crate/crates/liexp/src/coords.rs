//! Coefficient polynomials for canonical coordinates of the second kind.
//!
//! Writing `exp(tB) = exp(g_1(t) V_1) * ... * exp(g_d(t) V_d)` with the
//! factors in basis order defines the coordinate functions `g_k`. Each is
//! analytic with `g_k(0) = 0` and `g_k'(0) = beta_k`; differentiating the
//! product repeatedly and collecting terms yields recursions expressing the
//! higher derivatives at 0 through the structure constants. Truncating the
//! Taylor series of every `g_k` after degree `p` gives a product that
//! matches `exp(tB)` to order `p` while staying in the group exactly.
//!
//! [`order_coeffs_generic`] implements the recursions for any of the
//! built-in algebras up to order 4. For order 2 the double sums collapse
//! into structured single formulas, giving [`order_coeffs_son_fast`] and
//! [`order_coeffs_sln_fast`] an O(n^3) cost on so(n) and sl(n) instead of
//! walking the structure-constant table.

use crate::algebra::{AlgebraElement, AlgebraKind, Basis, ScTable};
use crate::compose::Poly;
use crate::{Error, Result};

/// Derivatives of the coordinate functions at t = 0.
///
/// `derivs[r][k]` holds `g_k^{(r+1)}(0)` for `r = 0, ..., order-1`; the
/// first row is the coefficient vector beta itself.
#[derive(Clone, Debug)]
pub struct CoeffSet {
    /// Basis the coordinates refer to.
    pub basis: Basis,
    /// Highest matched order (1 through 4).
    pub order: usize,
    /// Derivative rows, one per order.
    pub derivs: Vec<Vec<f64>>,
}

/// The Taylor polynomials `a_k(t) = sum_r g_k^{(r)}(0) t^r / r!` assembled
/// from a [`CoeffSet`], one per basis element.
#[derive(Clone, Debug)]
pub struct AlphaPolynomials {
    /// Basis the polynomials refer to.
    pub basis: Basis,
    /// Polynomial for each basis element (zero polynomials included).
    pub polys: Vec<Poly>,
}

/// Assemble coefficient polynomials from derivative rows, dividing row `r`
/// by `(r+1)!` for the degree-(r+1) Taylor coefficient.
pub fn alphas_from_coeffs(coeffs: &CoeffSet) -> AlphaPolynomials {
    let d = coeffs.basis.d;
    let mut polys = Vec::with_capacity(d);
    let mut factorial = 1.0;
    let factorials: Vec<f64> = (1..=coeffs.order)
        .map(|r| {
            factorial *= r as f64;
            factorial
        })
        .collect();
    for k in 0..d {
        let mut c = vec![0.0; coeffs.order + 1];
        for (r, row) in coeffs.derivs.iter().enumerate() {
            c[r + 1] = row[k] / factorials[r];
        }
        polys.push(Poly::new(c));
    }
    AlphaPolynomials {
        basis: coeffs.basis.clone(),
        polys,
    }
}

/// `out += scale * [V_k, x]` where `x` is a coefficient vector over the
/// basis, expanded through the structure constants.
fn ad_into(sc: &ScTable, k: usize, x: &[f64], scale: f64, out: &mut [f64]) {
    for &s in sc.partners_of(k) {
        let xs = x[s];
        if xs != 0.0 {
            for (i, c) in sc.bracket(k, s) {
                out[i] += scale * xs * c;
            }
        }
    }
}

/// `[V_k, x]` as a fresh coefficient vector.
fn ad(sc: &ScTable, k: usize, x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; x.len()];
    ad_into(sc, k, x, 1.0, &mut out);
    out
}

fn axpy(out: &mut [f64], a: f64, x: &[f64]) {
    if a == 0.0 {
        return;
    }
    for (o, &v) in out.iter_mut().zip(x) {
        *o += a * v;
    }
}

fn is_zero_vec(x: &[f64]) -> bool {
    x.iter().all(|&v| v == 0.0)
}

/// Derivatives of the coordinate functions up to the requested order,
/// computed through the structure-constant table. Works for every
/// built-in algebra; cost grows with the algebra dimension, so the O(n^3)
/// fast paths are preferable for large so(n)/sl(n) at order 2.
pub fn order_coeffs_generic(elem: &AlgebraElement, order: usize) -> Result<CoeffSet> {
    if !(1..=4).contains(&order) {
        return Err(Error::UnsupportedOrder {
            requested: order,
            max: 4,
        });
    }
    let basis = elem.basis.clone();
    let d = basis.d;
    let beta = &elem.beta;
    let mut derivs: Vec<Vec<f64>> = vec![beta.clone()];
    if order == 1 {
        return Ok(CoeffSet {
            basis,
            order,
            derivs,
        });
    }
    let sc = basis.sc_table();

    // First derivative of the partial products: for each element i,
    //   d1p[i] = sum_{k < i} beta_k [V_k, V_i],
    // the algebra-valued rate at which the factors left of position i
    // rotate V_i. Every higher-order condition is a combination of such
    // vectors.
    let d1p: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            let mut v = vec![0.0; d];
            for &k in sc.partners_of(i) {
                if k < i && beta[k] != 0.0 {
                    for (idx, c) in sc.bracket(k, i) {
                        v[idx] += beta[k] * c;
                    }
                }
            }
            v
        })
        .collect();

    // Second derivatives: g'' = - sum_i beta_i d1p[i].
    let mut g2 = vec![0.0; d];
    for i in 0..d {
        axpy(&mut g2, -beta[i], &d1p[i]);
    }
    derivs.push(g2);

    if order >= 3 {
        let g2 = derivs[1].clone();
        // Second derivative of the partial products.
        let d2p: Vec<Vec<f64>> = (0..d)
            .map(|i| {
                let mut acc = vec![0.0; d];
                for k in 0..i {
                    let a1 = ad(sc, k, &unit(d, i));
                    if is_zero_vec(&a1) {
                        continue;
                    }
                    for l in 0..k {
                        if beta[k] * beta[l] != 0.0 {
                            ad_into(sc, l, &a1, 2.0 * beta[k] * beta[l], &mut acc);
                        }
                    }
                    if beta[k] != 0.0 {
                        ad_into(sc, k, &a1, beta[k] * beta[k], &mut acc);
                    }
                    axpy(&mut acc, g2[k], &a1);
                }
                acc
            })
            .collect();
        // Third derivatives: g''' = - sum_i (2 g''_i d1p[i] + beta_i d2p[i]).
        let mut g3 = vec![0.0; d];
        for i in 0..d {
            axpy(&mut g3, -2.0 * g2[i], &d1p[i]);
            axpy(&mut g3, -beta[i], &d2p[i]);
        }
        derivs.push(g3);

        if order >= 4 {
            let g3 = derivs[2].clone();
            // Third derivative of the partial products. Iterated brackets
            // are applied innermost-first: ad_j ad_l ad_k (V_i) means
            // [V_j, [V_l, [V_k, V_i]]] with j < l < k < i.
            let d3p: Vec<Vec<f64>> = (0..d)
                .map(|i| {
                    let mut acc = vec![0.0; d];
                    for k in 0..i {
                        let a1 = ad(sc, k, &unit(d, i));
                        if is_zero_vec(&a1) {
                            continue;
                        }
                        axpy(&mut acc, g3[k], &a1);
                        let a2k = ad(sc, k, &a1);
                        axpy(&mut acc, 3.0 * g2[k] * beta[k], &a2k);
                        if beta[k] != 0.0 {
                            ad_into(sc, k, &a2k, beta[k].powi(3), &mut acc);
                        }
                        for l in 0..k {
                            let w = 3.0 * (g2[k] * beta[l] + beta[k] * g2[l]);
                            let need_lk = w != 0.0
                                || beta[l] != 0.0
                                || beta[k] * beta[l] != 0.0;
                            if !need_lk {
                                continue;
                            }
                            let a_lk = ad(sc, l, &a1);
                            axpy(&mut acc, w, &a_lk);
                            if is_zero_vec(&a_lk) && is_zero_vec(&a2k) {
                                continue;
                            }
                            ad_into(
                                sc,
                                l,
                                &a_lk,
                                3.0 * beta[l] * beta[l] * beta[k],
                                &mut acc,
                            );
                            ad_into(
                                sc,
                                l,
                                &a2k,
                                3.0 * beta[l] * beta[k] * beta[k],
                                &mut acc,
                            );
                            for j in 0..l {
                                let cj = 6.0 * beta[j] * beta[l] * beta[k];
                                if cj != 0.0 {
                                    ad_into(sc, j, &a_lk, cj, &mut acc);
                                }
                            }
                        }
                    }
                    acc
                })
                .collect();
            // Fourth derivatives:
            //   g'''' = - sum_i (3 g'''_i d1p[i] + 3 g''_i d2p[i]
            //                    + beta_i d3p[i]).
            let mut g4 = vec![0.0; d];
            for i in 0..d {
                axpy(&mut g4, -3.0 * g3[i], &d1p[i]);
                axpy(&mut g4, -3.0 * g2[i], &d2p[i]);
                axpy(&mut g4, -beta[i], &d3p[i]);
            }
            derivs.push(g4);
        }
    }

    Ok(CoeffSet {
        basis,
        order,
        derivs,
    })
}

fn unit(d: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; d];
    v[i] = 1.0;
    v
}

/// Order-2 derivatives for so(n) in O(n^3), bypassing the
/// structure-constant table.
///
/// For the pair element F(i,j) the second derivative collapses to three
/// structured sums over one index:
///   g''_(i,j) = sum_{s>j} B[j][s] B[i][s]
///             - sum_{i<r<j} B[r][j] B[i][r]
///             + sum_{r<i} B[r][j] B[r][i].
pub fn order_coeffs_son_fast(elem: &AlgebraElement) -> Result<CoeffSet> {
    if !matches!(elem.basis.kind, AlgebraKind::SpecialOrthogonal) {
        return Err(Error::InvalidArgument(
            "order_coeffs_son_fast expects an so(n) element".into(),
        ));
    }
    let basis = elem.basis.clone();
    let n = basis.n;
    let b = elem.materialize();
    let mut g2 = vec![0.0; basis.d];
    for i in 0..n {
        for j in (i + 1)..n {
            let mut acc = 0.0;
            for s in (j + 1)..n {
                acc += b[[j, s]] * b[[i, s]];
            }
            for r in (i + 1)..j {
                acc -= b[[r, j]] * b[[i, r]];
            }
            for r in 0..i {
                acc += b[[r, j]] * b[[r, i]];
            }
            g2[basis.so_index(i, j)] = acc;
        }
    }
    Ok(CoeffSet {
        basis,
        order: 2,
        derivs: vec![elem.beta.clone(), g2],
    })
}

/// Order-2 derivatives for sl(n) in O(n^3), bypassing the
/// structure-constant table.
///
/// With off-diagonal entries B[k][l] and diagonal entries delta_k:
///   g''_(k,l) = sum_{i<k, i!=l} B[k][i] B[i][l]
///             - sum_{i>k, i!=l} B[k][i] B[i][l]
///             + B[k][l] (delta_k - delta_l)           for k != l,
///   g''_D(k)  = - sum_{i<=k} sum_{j>k} B[i][j] B[j][i] for the diagonal
/// elements D(k).
pub fn order_coeffs_sln_fast(elem: &AlgebraElement) -> Result<CoeffSet> {
    if !matches!(elem.basis.kind, AlgebraKind::SpecialLinear) {
        return Err(Error::InvalidArgument(
            "order_coeffs_sln_fast expects an sl(n) element".into(),
        ));
    }
    let basis = elem.basis.clone();
    let n = basis.n;
    let b = elem.materialize();
    let mut g2 = vec![0.0; basis.d];
    for k in 0..n {
        for l in 0..n {
            if k == l {
                continue;
            }
            let mut acc = b[[k, l]] * (b[[k, k]] - b[[l, l]]);
            for i in 0..k {
                if i != l {
                    acc += b[[k, i]] * b[[i, l]];
                }
            }
            for i in (k + 1)..n {
                if i != l {
                    acc -= b[[k, i]] * b[[i, l]];
                }
            }
            g2[basis.sl_offdiag_index(k, l)] = acc;
        }
    }
    for k in 0..(n - 1) {
        let mut acc = 0.0;
        for i in 0..=k {
            for j in (k + 1)..n {
                acc -= b[[i, j]] * b[[j, i]];
            }
        }
        g2[basis.sl_diag_index(k)] = acc;
    }
    Ok(CoeffSet {
        basis,
        order: 2,
        derivs: vec![elem.beta.clone(), g2],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{lorentz_basis, sl_basis, so_basis, AlgebraElement};
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_element(basis: &Basis, seed: u64) -> AlgebraElement {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let beta: Vec<f64> = (0..basis.d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        AlgebraElement::new(basis.clone(), beta).unwrap()
    }

    #[test]
    fn rejects_out_of_range_orders() {
        let elem = random_element(&so_basis(3), 1);
        assert!(matches!(
            order_coeffs_generic(&elem, 0),
            Err(Error::UnsupportedOrder { requested: 0, max: 4 })
        ));
        assert!(matches!(
            order_coeffs_generic(&elem, 5),
            Err(Error::UnsupportedOrder { requested: 5, max: 4 })
        ));
    }

    #[test]
    fn first_row_is_beta_and_order_one_stops_there() {
        let elem = random_element(&sl_basis(3), 2);
        let c = order_coeffs_generic(&elem, 1).unwrap();
        assert_eq!(c.derivs.len(), 1);
        assert_eq!(c.derivs[0], elem.beta);
    }

    #[test]
    fn single_basis_element_has_no_higher_corrections() {
        // exp(t beta_k V_k) is itself an elementary factor, so all
        // derivatives beyond the first vanish identically.
        let basis = lorentz_basis();
        for k in 0..basis.d {
            let mut beta = vec![0.0; basis.d];
            beta[k] = 0.77;
            let elem = AlgebraElement::new(basis.clone(), beta).unwrap();
            let c = order_coeffs_generic(&elem, 4).unwrap();
            for row in &c.derivs[1..] {
                assert!(row.iter().all(|&x| x == 0.0));
            }
        }
    }

    #[test]
    fn derivative_rows_are_homogeneous_in_beta() {
        // Scaling beta by c scales g^{(r)}(0) by c^r: matching exp(t c B)
        // at order p is the same as matching exp((ct) B).
        let basis = so_basis(4);
        let elem = random_element(&basis, 3);
        let c = 1.7;
        let scaled = AlgebraElement::new(
            basis.clone(),
            elem.beta.iter().map(|&x| c * x).collect(),
        )
        .unwrap();
        let base = order_coeffs_generic(&elem, 4).unwrap();
        let scl = order_coeffs_generic(&scaled, 4).unwrap();
        for (r, (row_b, row_s)) in base.derivs.iter().zip(&scl.derivs).enumerate() {
            let factor = c.powi(r as i32 + 1);
            for (a, b) in row_b.iter().zip(row_s) {
                assert!(
                    (a * factor - b).abs() <= 1e-12 * (1.0 + b.abs()),
                    "row {r}"
                );
            }
        }
    }

    #[test]
    fn sl2_upper_triangular_closed_form() {
        // For B = [[g, b], [0, -g]] the coordinates solve in closed form:
        // the sub-diagonal coordinate vanishes, the diagonal coordinate is
        // g t, and the super-diagonal one is b (e^{2gt} - 1) / (2g) with
        // derivatives 2bg, 4bg^2, 8bg^3 at zero.
        let (g, b) = (0.63, -1.21);
        let basis = sl_basis(2);
        let m = array![[g, b], [0.0, -g]];
        let elem = crate::algebra::decompose(&m, &basis, None).unwrap();
        let c = order_coeffs_generic(&elem, 4).unwrap();
        let e01 = basis.sl_offdiag_index(0, 1);
        let e10 = basis.sl_offdiag_index(1, 0);
        let d0 = basis.sl_diag_index(0);
        let expected = [b, 2.0 * b * g, 4.0 * b * g * g, 8.0 * b * g * g * g];
        for (r, &want) in expected.iter().enumerate() {
            assert!(
                (c.derivs[r][e01] - want).abs() <= 1e-12,
                "derivative {} of the super-diagonal coordinate",
                r + 1
            );
            assert_eq!(c.derivs[r][e10], 0.0);
        }
        assert!((c.derivs[0][d0] - g).abs() <= 1e-15);
        for r in 1..4 {
            assert_eq!(c.derivs[r][d0], 0.0);
        }
    }

    #[test]
    fn sl2_lower_triangular_closed_form() {
        // For B = [[g, 0], [b, -g]] the sub-diagonal coordinate is
        // b (1 - e^{-2gt}) / (2g): derivatives alternate in sign.
        let (g, b) = (0.63, -1.21);
        let basis = sl_basis(2);
        let m = array![[g, 0.0], [b, -g]];
        let elem = crate::algebra::decompose(&m, &basis, None).unwrap();
        let c = order_coeffs_generic(&elem, 4).unwrap();
        let e10 = basis.sl_offdiag_index(1, 0);
        let expected = [b, -2.0 * b * g, 4.0 * b * g * g, -8.0 * b * g * g * g];
        for (r, &want) in expected.iter().enumerate() {
            assert!(
                (c.derivs[r][e10] - want).abs() <= 1e-12,
                "derivative {}",
                r + 1
            );
        }
    }

    #[test]
    fn son_fast_matches_generic() {
        for n in 3..=6 {
            for seed in 0..5 {
                let basis = so_basis(n);
                let elem = random_element(&basis, 1000 * n as u64 + seed);
                let fast = order_coeffs_son_fast(&elem).unwrap();
                let generic = order_coeffs_generic(&elem, 2).unwrap();
                for (a, b) in fast.derivs[1].iter().zip(&generic.derivs[1]) {
                    assert!((a - b).abs() <= 1e-13, "n = {n}, seed = {seed}");
                }
            }
        }
    }

    #[test]
    fn sln_fast_matches_generic() {
        for n in 2..=6 {
            for seed in 0..5 {
                let basis = sl_basis(n);
                let elem = random_element(&basis, 2000 * n as u64 + seed);
                let fast = order_coeffs_sln_fast(&elem).unwrap();
                let generic = order_coeffs_generic(&elem, 2).unwrap();
                for (a, b) in fast.derivs[1].iter().zip(&generic.derivs[1]) {
                    assert!((a - b).abs() <= 1e-13, "n = {n}, seed = {seed}");
                }
            }
        }
    }

    #[test]
    fn fast_paths_reject_foreign_bases() {
        let so_elem = random_element(&so_basis(3), 5);
        let sl_elem = random_element(&sl_basis(3), 6);
        assert!(order_coeffs_sln_fast(&so_elem).is_err());
        assert!(order_coeffs_son_fast(&sl_elem).is_err());
    }

    #[test]
    fn alpha_polynomials_divide_by_factorials() {
        let basis = so_basis(3);
        let c = CoeffSet {
            basis: basis.clone(),
            order: 4,
            derivs: vec![
                vec![1.0, 0.0, 0.0],
                vec![2.0, 0.0, 0.0],
                vec![6.0, 0.0, 0.0],
                vec![24.0, 0.0, 0.0],
            ],
        };
        let alphas = alphas_from_coeffs(&c);
        assert_eq!(alphas.polys[0].coeffs(), &[0.0, 1.0, 1.0, 1.0, 1.0]);
        assert!(alphas.polys[1].is_zero());
    }
}
