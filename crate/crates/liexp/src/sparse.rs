//! O(n) plan construction for tridiagonal elements, plus bandwidth
//! truncation of coefficient polynomials.
//!
//! A tridiagonal element of so(n) or sl(n) admits an order-2 product whose
//! factor list stays within bandwidth 2: the only second-order corrections
//! sit on the sub/super-diagonals two away from the main diagonal, and every
//! coefficient is a short closed-form product of neighbouring entries. Both
//! the number of factors and the construction cost are linear in n, versus
//! the O(d) = O(n^2) factors of a dense plan.

use ndarray::Array2;

use crate::algebra::{sl_basis, so_basis, ElementKind};
use crate::compose::{Plan, PlanFactor, Poly};
use crate::coords::AlphaPolynomials;
use crate::flops::FlopCounter;
use crate::{Error, Result};

/// Tridiagonal element of so(n): `B = sum_k beta_k F(k,k+1)`, so the
/// superdiagonal holds `beta` and the subdiagonal its negation.
#[derive(Clone, Debug)]
pub struct TridiagSO {
    n: usize,
    beta: Vec<f64>,
}

impl TridiagSO {
    /// Build from the `n−1` superdiagonal values.
    pub fn new(beta: Vec<f64>) -> Result<Self> {
        if beta.is_empty() {
            return Err(Error::InvalidArgument(
                "tridiagonal so(n) needs at least one superdiagonal entry (n >= 2)".into(),
            ));
        }
        Ok(TridiagSO {
            n: beta.len() + 1,
            beta,
        })
    }

    /// Matrix dimension n.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Superdiagonal values `beta_0 .. beta_{n-2}`.
    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// Dense n×n form.
    pub fn dense(&self) -> Array2<f64> {
        let mut b = Array2::zeros((self.n, self.n));
        for (k, &v) in self.beta.iter().enumerate() {
            b[[k, k + 1]] = v;
            b[[k + 1, k]] = -v;
        }
        b
    }
}

/// Tridiagonal element of sl(n): diagonal `diag` (zero sum), superdiagonal
/// `superdiag`, subdiagonal `subdiag`.
#[derive(Clone, Debug)]
pub struct TridiagSL {
    n: usize,
    diag: Vec<f64>,
    superdiag: Vec<f64>,
    subdiag: Vec<f64>,
}

impl TridiagSL {
    /// Build from the three diagonals. The main diagonal must sum to zero
    /// within 1e-13 (trace-free), and the off-diagonals must have length
    /// `n−1`.
    pub fn new(diag: Vec<f64>, superdiag: Vec<f64>, subdiag: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n < 2 {
            return Err(Error::InvalidArgument(
                "tridiagonal sl(n) needs n >= 2 diagonal entries".into(),
            ));
        }
        if superdiag.len() != n - 1 || subdiag.len() != n - 1 {
            return Err(Error::InvalidArgument(format!(
                "off-diagonals must have length {} (got {} and {})",
                n - 1,
                superdiag.len(),
                subdiag.len()
            )));
        }
        let trace: f64 = diag.iter().sum();
        if trace.abs() > 1e-13 {
            return Err(Error::InvalidArgument(format!(
                "diagonal must sum to zero within 1e-13 (got {trace:e})"
            )));
        }
        Ok(TridiagSL {
            n,
            diag,
            superdiag,
            subdiag,
        })
    }

    /// Matrix dimension n.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Main diagonal values.
    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// Superdiagonal values `B[k][k+1]`.
    pub fn superdiag(&self) -> &[f64] {
        &self.superdiag
    }

    /// Subdiagonal values `B[k+1][k]`.
    pub fn subdiag(&self) -> &[f64] {
        &self.subdiag
    }

    /// Dense n×n form.
    pub fn dense(&self) -> Array2<f64> {
        let mut b = Array2::zeros((self.n, self.n));
        for (k, &v) in self.diag.iter().enumerate() {
            b[[k, k]] = v;
        }
        for k in 0..self.n - 1 {
            b[[k, k + 1]] = self.superdiag[k];
            b[[k + 1, k]] = self.subdiag[k];
        }
        b
    }
}

fn push_factor(factors: &mut Vec<PlanFactor>, index: usize, kind: ElementKind, coeffs: Vec<f64>) {
    let poly = Poly::new(coeffs);
    if !poly.is_zero() {
        factors.push(PlanFactor { index, kind, poly });
    }
}

/// Order-2 plan for a tridiagonal so(n) element, with at most `2n−3`
/// factors and O(n) construction cost.
///
/// The factor arrangement runs the rotation planes from the bottom-right
/// corner up: for k = n−2 down to 0, the rotation in plane (k,k+1) with
/// coefficient `beta_k t`, followed by the correction rotation in plane
/// (k,k+2) with coefficient `+beta_k beta_{k+1} t^2 / 2`. This is the
/// reverse of the canonical basis order, so relative to the canonical
/// order-2 coefficients the map `a(t) -> −a(−t)` flips the sign of the
/// quadratic corrections.
pub fn skc2_tridiag_son(x: &TridiagSO) -> Plan {
    let mut fc = FlopCounter::new();
    skc2_tridiag_son_counted(x, &mut fc)
}

/// Counted variant of [`skc2_tridiag_son`].
pub fn skc2_tridiag_son_counted(x: &TridiagSO, fc: &mut FlopCounter) -> Plan {
    let n = x.n;
    let basis = so_basis(n);
    let mut factors = Vec::with_capacity(2 * n - 3);
    for k in (0..n - 1).rev() {
        push_factor(
            &mut factors,
            basis.so_index(k, k + 1),
            ElementKind::PlaneRotation { i: k, j: k + 1 },
            vec![0.0, x.beta[k]],
        );
        if k + 2 < n {
            let c = 0.5 * x.beta[k] * x.beta[k + 1];
            fc.record(2, 0);
            push_factor(
                &mut factors,
                basis.so_index(k, k + 2),
                ElementKind::PlaneRotation { i: k, j: k + 2 },
                vec![0.0, 0.0, c],
            );
        }
    }
    Plan { basis, factors }
}

/// Order-2 plan for a tridiagonal sl(n) element in canonical basis order,
/// with O(n) factors and construction cost.
///
/// Writing `eta` for the superdiagonal, `mu` for the subdiagonal and
/// `delta` for the diagonal, the nonzero coefficient polynomials are
///
/// - E(k,k+1): `eta_k t + eta_k (delta_k − delta_{k+1}) t^2 / 2`
/// - E(i,i−1): `mu_{i−1} t + mu_{i−1} (delta_i − delta_{i−1}) t^2 / 2`
/// - E(k,k+2): `−eta_k eta_{k+1} t^2 / 2`
/// - E(i,i−2): `+mu_{i−2} mu_{i−1} t^2 / 2`
/// - D(k): `gamma_k t − eta_k mu_k t^2 / 2`, gamma_k the prefix sums of delta
///
/// which agree with the generic order-2 coefficients specialised to
/// tridiagonal input (the sign conventions are pinned by that equality).
pub fn skc2_tridiag_sln(x: &TridiagSL) -> Plan {
    let mut fc = FlopCounter::new();
    skc2_tridiag_sln_counted(x, &mut fc)
}

/// Counted variant of [`skc2_tridiag_sln`].
pub fn skc2_tridiag_sln_counted(x: &TridiagSL, fc: &mut FlopCounter) -> Plan {
    let n = x.n;
    let basis = sl_basis(n);
    let eta = &x.superdiag;
    let mu = &x.subdiag;
    let delta = &x.diag;

    // Diagonal coordinates of B in the D(k) basis are the prefix sums.
    let mut gamma = vec![0.0; n - 1];
    let mut acc = 0.0;
    for k in 0..n - 1 {
        acc += delta[k];
        fc.record(0, 1);
        gamma[k] = acc;
    }

    let mut factors = Vec::with_capacity(5 * n);
    // Off-diagonal factors in basis order: rows ascending, and within row i
    // the columns i−2 < i−1 < i+1 < i+2.
    for i in 0..n {
        if i >= 2 {
            let c = 0.5 * mu[i - 2] * mu[i - 1];
            fc.record(2, 0);
            push_factor(
                &mut factors,
                basis.sl_offdiag_index(i, i - 2),
                ElementKind::MatrixUnit { i, j: i - 2 },
                vec![0.0, 0.0, c],
            );
        }
        if i >= 1 {
            let c = 0.5 * mu[i - 1] * (delta[i] - delta[i - 1]);
            fc.record(2, 1);
            push_factor(
                &mut factors,
                basis.sl_offdiag_index(i, i - 1),
                ElementKind::MatrixUnit { i, j: i - 1 },
                vec![0.0, mu[i - 1], c],
            );
        }
        if i + 1 < n {
            let c = 0.5 * eta[i] * (delta[i] - delta[i + 1]);
            fc.record(2, 1);
            push_factor(
                &mut factors,
                basis.sl_offdiag_index(i, i + 1),
                ElementKind::MatrixUnit { i, j: i + 1 },
                vec![0.0, eta[i], c],
            );
        }
        if i + 2 < n {
            let c = -0.5 * eta[i] * eta[i + 1];
            fc.record(2, 0);
            push_factor(
                &mut factors,
                basis.sl_offdiag_index(i, i + 2),
                ElementKind::MatrixUnit { i, j: i + 2 },
                vec![0.0, 0.0, c],
            );
        }
    }
    // Diagonal factors after all off-diagonal ones, matching basis order.
    for k in 0..n - 1 {
        let c = -0.5 * eta[k] * mu[k];
        fc.record(2, 0);
        push_factor(
            &mut factors,
            basis.sl_diag_index(k),
            ElementKind::DiagPair { i: k },
            vec![0.0, gamma[k], c],
        );
    }
    Plan { basis, factors }
}

/// Zero out the coefficient polynomial of every basis element whose support
/// lies entirely outside bandwidth `r` (|row − col| > r for all entries);
/// all other polynomials are unchanged.
pub fn truncate_to_band(alphas: &AlphaPolynomials, r: usize) -> AlphaPolynomials {
    let basis = alphas.basis.clone();
    let polys = alphas
        .polys
        .iter()
        .enumerate()
        .map(|(k, p)| {
            if p.is_zero() {
                return Poly::zero();
            }
            let outside = basis
                .element(k)
                .entries()
                .iter()
                .all(|&(i, j, _)| i.abs_diff(j) > r);
            if outside {
                Poly::zero()
            } else {
                p.clone()
            }
        })
        .collect();
    AlphaPolynomials { basis, polys }
}
