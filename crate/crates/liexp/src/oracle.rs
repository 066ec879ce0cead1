//! Reference matrix functions used to validate the structured methods.
//!
//! Everything in this module is deliberately independent of the coordinate
//! and composition machinery elsewhere in the crate: the exponential is a
//! standard Padé scaling-and-squaring implementation, the logarithm uses
//! inverse scaling and squaring with Denman-Beavers square roots, and the
//! convergence study is a plain least-squares slope fit on dyadic step
//! sizes. These serve as the measuring stick the rest of the crate is
//! checked against, so they intentionally share no code with it.

use ndarray::Array2;

use crate::{Error, Result};

/// Frobenius norm of a matrix.
pub fn frobenius_norm(a: &Array2<f64>) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Maximum absolute column sum (the induced 1-norm).
fn one_norm(a: &Array2<f64>) -> f64 {
    let n = a.ncols();
    (0..n)
        .map(|j| a.column(j).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// LU factorization with partial pivoting, stored in-place.
///
/// Returns the factorization and the permutation's sign so determinants can
/// be recovered. Fails with `SingularMatrix` when a pivot vanishes exactly.
struct Lu {
    lu: Array2<f64>,
    piv: Vec<usize>,
    sign: f64,
}

fn lu_factor(a: &Array2<f64>) -> Result<Lu> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "lu_factor requires a square matrix");
    let mut lu = a.clone();
    let mut piv: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for k in 0..n {
        // Pick the largest pivot in column k at or below the diagonal.
        let mut p = k;
        let mut best = lu[[k, k]].abs();
        for r in (k + 1)..n {
            let v = lu[[r, k]].abs();
            if v > best {
                best = v;
                p = r;
            }
        }
        if best == 0.0 {
            return Err(Error::SingularMatrix);
        }
        if p != k {
            for j in 0..n {
                let tmp = lu[[k, j]];
                lu[[k, j]] = lu[[p, j]];
                lu[[p, j]] = tmp;
            }
            piv.swap(k, p);
            sign = -sign;
        }
        let pivot = lu[[k, k]];
        for r in (k + 1)..n {
            let m = lu[[r, k]] / pivot;
            lu[[r, k]] = m;
            for j in (k + 1)..n {
                lu[[r, j]] -= m * lu[[k, j]];
            }
        }
    }
    Ok(Lu { lu, piv, sign })
}

/// Solve A X = B for X given the LU factorization of A.
fn lu_solve(f: &Lu, b: &Array2<f64>) -> Array2<f64> {
    let n = f.lu.nrows();
    let m = b.ncols();
    // Apply the row permutation to B.
    let mut x = Array2::<f64>::zeros((n, m));
    for i in 0..n {
        for j in 0..m {
            x[[i, j]] = b[[f.piv[i], j]];
        }
    }
    // Forward substitution with the unit lower triangle.
    for i in 1..n {
        for k in 0..i {
            let l = f.lu[[i, k]];
            if l != 0.0 {
                for j in 0..m {
                    x[[i, j]] -= l * x[[k, j]];
                }
            }
        }
    }
    // Back substitution with the upper triangle.
    for i in (0..n).rev() {
        let d = f.lu[[i, i]];
        for k in (i + 1)..n {
            let u = f.lu[[i, k]];
            if u != 0.0 {
                for j in 0..m {
                    x[[i, j]] -= u * x[[k, j]];
                }
            }
        }
        for j in 0..m {
            x[[i, j]] /= d;
        }
    }
    x
}

/// Solve the linear system A X = B with partial-pivoted Gaussian elimination.
pub(crate) fn solve(a: &Array2<f64>, b: &Array2<f64>) -> Result<Array2<f64>> {
    let f = lu_factor(a)?;
    Ok(lu_solve(&f, b))
}

/// Determinant via LU with partial pivoting.
pub fn det(a: &Array2<f64>) -> f64 {
    match lu_factor(a) {
        Ok(f) => {
            let mut d = f.sign;
            for i in 0..f.lu.nrows() {
                d *= f.lu[[i, i]];
            }
            d
        }
        Err(_) => 0.0,
    }
}

/// Matrix inverse, used by the logarithm's square-root iteration.
fn inverse(a: &Array2<f64>) -> Result<Array2<f64>> {
    let n = a.nrows();
    solve(a, &Array2::eye(n))
}

/// Reference matrix exponential: degree-13 Padé approximant with scaling
/// and squaring.
///
/// The scaling power is chosen so the scaled 1-norm falls below the
/// standard degree-13 threshold, the approximant is evaluated with the
/// usual even/odd splitting, and the result is squared back up. Accuracy
/// is close to machine precision for any well-scaled input.
pub fn expm_ref(a: &Array2<f64>) -> Array2<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm_ref requires a square matrix");
    const THETA_13: f64 = 5.371920351148152;
    #[allow(clippy::unreadable_literal)]
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];

    let norm = one_norm(a);
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let a = a.mapv(|x| x / (2f64).powi(s));

    let a2 = a.dot(&a);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);
    let eye: Array2<f64> = Array2::eye(n);

    // U = A (A6 (b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
    let u_inner = a6.dot(&(&a6 * B[13] + &a4 * B[11] + &a2 * B[9]))
        + &a6 * B[7]
        + &a4 * B[5]
        + &a2 * B[3]
        + &eye * B[1];
    let u = a.dot(&u_inner);
    // V = A6 (b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
    let v = a6.dot(&(&a6 * B[12] + &a4 * B[10] + &a2 * B[8]))
        + &a6 * B[6]
        + &a4 * B[4]
        + &a2 * B[2]
        + &eye * B[0];

    // Padé approximant: (V - U)^{-1} (V + U).
    let mut f = solve(&(&v - &u), &(&v + &u))
        .expect("Padé denominator is nonsingular for scaled inputs");
    for _ in 0..s {
        f = f.dot(&f);
    }
    f
}

/// Principal matrix logarithm via inverse scaling and squaring.
///
/// Denman-Beavers iterations take repeated square roots until the argument
/// is within Frobenius distance 0.25 of the identity, a Gregory series in
/// W = (X - I)(X + I)^{-1} evaluates the log of the final factor, and the
/// result is scaled back up by the number of roots taken. Fails with
/// `NotNearIdentity` when the square-root iteration cannot bring the
/// argument close to the identity (e.g. for matrices with eigenvalues on
/// the negative real axis).
pub fn logm_ref(a: &Array2<f64>) -> Result<Array2<f64>> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "logm_ref requires a square matrix");
    let eye: Array2<f64> = Array2::eye(n);

    let mut x = a.clone();
    let mut k = 0u32;
    const MAX_ROOTS: u32 = 40;
    while frobenius_norm(&(&x - &eye)) > 0.25 {
        if k >= MAX_ROOTS {
            return Err(Error::NotNearIdentity);
        }
        // One Denman-Beavers square root: iterate
        //   Y <- (Y + Z^{-1})/2, Z <- (Z + Y^{-1})/2
        // from Y = X, Z = I; Y converges to X^{1/2}. A singular iterate
        // means the principal square root does not exist (eigenvalues on
        // the closed negative real axis), which is the same failure mode
        // as non-convergence.
        let mut y = x.clone();
        let mut z = eye.clone();
        let mut converged = false;
        for _ in 0..60 {
            let y_next =
                (&y + &inverse(&z).map_err(|_| Error::NotNearIdentity)?) * 0.5;
            let z_next =
                (&z + &inverse(&y).map_err(|_| Error::NotNearIdentity)?) * 0.5;
            let diff = frobenius_norm(&(&y_next - &y));
            y = y_next;
            z = z_next;
            if diff <= 1e-15 * frobenius_norm(&y).max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NotNearIdentity);
        }
        x = y;
        k += 1;
    }

    // Gregory series: log X = 2 atanh(W) = 2 (W + W^3/3 + W^5/5 + ...)
    // with W = (X - I)(X + I)^{-1}. After the root stage |W| <= ~0.13 so
    // the series converges rapidly.
    let w = solve(&(&x + &eye).t().to_owned(), &(&x - &eye).t().to_owned())?
        .t()
        .to_owned();
    let w2 = w.dot(&w);
    let mut term = w.clone();
    let mut series = w.clone();
    for j in 1..60 {
        term = term.dot(&w2);
        let add = &term / (2 * j + 1) as f64;
        series = &series + &add;
        if frobenius_norm(&add) <= 1e-17 * frobenius_norm(&series).max(1.0) {
            break;
        }
    }
    Ok(series * (2f64).powi(k as i32 + 1))
}

/// Frobenius distance from the group element that `approx` should be:
/// `|| exp(-tB) * approx - I ||_F`.
///
/// Measuring the defect through the inverse exact flow keeps the metric
/// group-intrinsic and avoids differencing two nearly equal exponentials.
pub fn error_frob(b: &Array2<f64>, t: f64, approx: &Array2<f64>) -> f64 {
    let exact_inv = expm_ref(&b.mapv(|x| -t * x));
    let n = b.nrows();
    let eye: Array2<f64> = Array2::eye(n);
    frobenius_norm(&(exact_inv.dot(approx) - eye))
}

/// Result of a convergence study: step sizes, measured errors, and the
/// fitted order (slope of log2(error) against log2(t)).
#[derive(Clone, Debug)]
pub struct ErrorReport {
    /// Step sizes at which the error was sampled, largest first.
    pub ts: Vec<f64>,
    /// Error at each step size, same order as `ts`.
    pub errors: Vec<f64>,
    /// Least-squares slope of log2(error) vs log2(t), or `None` when every
    /// sample sat below the noise floor (the method was exact to rounding).
    pub slope: Option<f64>,
}

/// Measure the convergence order of an approximation `f(t) ~ exp(tB)`.
///
/// Errors are evaluated via [`error_frob`] at each step size; samples below
/// 100 times machine epsilon are treated as rounding noise and excluded
/// from the fit. With fewer than two clean samples no slope is reported.
pub fn convergence_study<F>(b: &Array2<f64>, ts: &[f64], mut f: F) -> ErrorReport
where
    F: FnMut(f64) -> Array2<f64>,
{
    let errors: Vec<f64> = ts.iter().map(|&t| error_frob(b, t, &f(t))).collect();
    let slope = fit_slope(ts, &errors);
    ErrorReport {
        ts: ts.to_vec(),
        errors,
        slope,
    }
}

/// Least-squares slope of log2(err) against log2(t), ignoring samples at
/// rounding level. Shared by the convergence studies and the benchmarks.
pub fn fit_slope(ts: &[f64], errors: &[f64]) -> Option<f64> {
    const NOISE_FLOOR: f64 = 1e2 * f64::EPSILON;
    let pts: Vec<(f64, f64)> = ts
        .iter()
        .zip(errors)
        .filter(|(_, &e)| e > NOISE_FLOOR)
        .map(|(&t, &e)| (t.log2(), e.log2()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    Some((m * sxy - sx * sy) / (m * sxx - sx * sx))
}
