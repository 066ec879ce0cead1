//! Bases, structure constants, and decomposition for the supported
//! matrix Lie algebras.
//!
//! Three families are built in:
//!
//! - **so(n)**: antisymmetric matrices, basis `F(i,j) = e_i e_j^T - e_j e_i^T`
//!   for `i < j`, ordered lexicographically. Dimension `n(n-1)/2`.
//! - **sl(n)**: traceless matrices, basis all off-diagonal matrix units
//!   `E(i,j) = e_i e_j^T` (ordered pairs, lexicographic), followed by the
//!   diagonal differences `D(i) = e_i e_i^T - e_{i+1} e_{i+1}^T`.
//!   Dimension `n^2 - 1`.
//! - **so(3,1)**: the Lorentz algebra, matrices with `B J + J B^T = 0` for
//!   `J = diag(1, 1, 1, -1)`. Basis: three plane rotations
//!   `F(1,2), F(1,3), F(2,3)` then three boosts
//!   `K(i) = e_i e_4^T + e_4 e_i^T` for `i = 1, 2, 3`. Dimension 6.
//!
//! Structure constants are computed symbolically from the commutators of
//! the (rank-one or rank-two) basis elements and stored sparsely, so they
//! are exact integers. For the algebras here every nonzero constant is
//! +-1 or +-2.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::{Arc, OnceLock};

use ndarray::Array2;

use crate::{Error, Result};

/// Relative tolerance used by [`decompose`] when the caller passes `None`.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Which algebra family a basis describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    /// so(n): antisymmetric real matrices.
    SpecialOrthogonal,
    /// sl(n): traceless real matrices.
    SpecialLinear,
    /// so(3,1): the Lorentz algebra on R^4 with signature (+,+,+,-).
    Lorentz,
}

/// The structural role of one basis element, determining which elementary
/// exponential it generates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElementKind {
    /// `F(i,j) = e_i e_j^T - e_j e_i^T` with `i < j`; exponentiates to a
    /// Givens rotation in the (i, j) plane.
    PlaneRotation { i: usize, j: usize },
    /// `E(i,j) = e_i e_j^T` with `i != j`; exponentiates to a shear.
    MatrixUnit { i: usize, j: usize },
    /// `D(i) = e_i e_i^T - e_{i+1} e_{i+1}^T`; exponentiates to a diagonal
    /// scaling of rows i and i+1.
    DiagPair { i: usize },
    /// `K = e_i e_j^T + e_j e_i^T` with `i < j`; exponentiates to a
    /// hyperbolic rotation (boost) in the (i, j) plane.
    Boost { i: usize, j: usize },
}

/// One basis element, stored sparsely as its nonzero entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseBasisElement {
    /// Structural role (which elementary exponential this generates).
    pub kind: ElementKind,
    /// Ambient matrix dimension.
    pub n: usize,
}

impl SparseBasisElement {
    /// The nonzero entries as `(row, col, value)` triples.
    pub fn entries(&self) -> Vec<(usize, usize, f64)> {
        match self.kind {
            ElementKind::PlaneRotation { i, j } => {
                vec![(i, j, 1.0), (j, i, -1.0)]
            }
            ElementKind::MatrixUnit { i, j } => vec![(i, j, 1.0)],
            ElementKind::DiagPair { i } => vec![(i, i, 1.0), (i + 1, i + 1, -1.0)],
            ElementKind::Boost { i, j } => vec![(i, j, 1.0), (j, i, 1.0)],
        }
    }

    /// Materialize the element as a dense matrix.
    pub fn dense(&self) -> Array2<f64> {
        let mut m = Array2::zeros((self.n, self.n));
        for (r, c, v) in self.entries() {
            m[[r, c]] = v;
        }
        m
    }
}

/// Sparse table of structure constants.
///
/// For basis elements `V_k`, the commutators expand as
/// `[V_k, V_l] = sum_i c_{k,l}^i V_i`. Only pairs `k < l` are stored
/// (antisymmetry gives the rest); within a pair only nonzero coefficients
/// are kept. Constants are exact small integers for all built-in algebras.
#[derive(Clone, Debug, Default)]
pub struct ScTable {
    /// `(k, l) -> [(i, c_{k,l}^i)]` with `k < l`, coefficients nonzero.
    pairs: BTreeMap<(usize, usize), Vec<(usize, i32)>>,
    /// For each index `s`, the sorted list of partners `k` with
    /// `[V_k, V_s] != 0` (in either order).
    partners: Vec<Vec<usize>>,
}

impl ScTable {
    /// The expansion of `[V_k, V_l]` as `(index, coefficient)` pairs.
    /// Handles either argument order via antisymmetry; `k == l` gives
    /// an empty expansion.
    pub fn bracket(&self, k: usize, l: usize) -> Vec<(usize, f64)> {
        if k == l {
            return Vec::new();
        }
        let (a, b, sign) = if k < l { (k, l, 1.0) } else { (l, k, -1.0) };
        match self.pairs.get(&(a, b)) {
            Some(v) => v.iter().map(|&(i, c)| (i, sign * c as f64)).collect(),
            None => Vec::new(),
        }
    }

    /// Indices `k` whose bracket with `V_s` is nonzero, sorted ascending.
    pub fn partners_of(&self, s: usize) -> &[usize] {
        &self.partners[s]
    }

    /// Iterate over the stored pairs `((k, l), coefficients)` with `k < l`.
    pub fn iter_pairs(
        &self,
    ) -> impl Iterator<Item = (&(usize, usize), &Vec<(usize, i32)>)> {
        self.pairs.iter()
    }

    /// Number of stored (k < l) pairs with a nonzero bracket.
    pub fn nnz_pairs(&self) -> usize {
        self.pairs.len()
    }

    /// Total number of nonzero structure constants over stored pairs.
    pub fn nnz(&self) -> usize {
        self.pairs.values().map(|v| v.len()).sum()
    }
}

/// A basis for one of the supported algebras, with lazily built structure
/// constants.
///
/// Basis elements are generated on demand by [`BasisSpec::element`], so a
/// large algebra (say so(2000), dimension ~2 million) never materializes
/// a list of elements. The structure-constant table is built on first use
/// and cached.
#[derive(Debug)]
pub struct BasisSpec {
    /// Algebra family.
    pub kind: AlgebraKind,
    /// Ambient matrix dimension (matrices are n x n).
    pub n: usize,
    /// Algebra dimension: the number of basis elements.
    pub d: usize,
    sc: OnceLock<ScTable>,
}

/// Shared handle to a basis. Cloning is cheap and all clones share the
/// cached structure-constant table.
pub type Basis = Arc<BasisSpec>;

/// The so(n) basis: `F(i,j)` for `i < j` in lexicographic order.
pub fn so_basis(n: usize) -> Basis {
    assert!(n >= 2, "so(n) requires n >= 2");
    Arc::new(BasisSpec {
        kind: AlgebraKind::SpecialOrthogonal,
        n,
        d: n * (n - 1) / 2,
        sc: OnceLock::new(),
    })
}

/// The sl(n) basis: off-diagonal matrix units `E(i,j)` (ordered pairs,
/// lexicographic), then diagonal differences `D(0), ..., D(n-2)`.
pub fn sl_basis(n: usize) -> Basis {
    assert!(n >= 2, "sl(n) requires n >= 2");
    Arc::new(BasisSpec {
        kind: AlgebraKind::SpecialLinear,
        n,
        d: n * n - 1,
        sc: OnceLock::new(),
    })
}

/// The so(3,1) basis: rotations `F(0,1), F(0,2), F(1,2)` then boosts
/// `K(0), K(1), K(2)` mixing each spatial axis with the fourth coordinate.
pub fn lorentz_basis() -> Basis {
    Arc::new(BasisSpec {
        kind: AlgebraKind::Lorentz,
        n: 4,
        d: 6,
        sc: OnceLock::new(),
    })
}

impl BasisSpec {
    /// The k-th basis element (0-based).
    pub fn element(&self, k: usize) -> SparseBasisElement {
        assert!(k < self.d, "basis index {k} out of range (d = {})", self.d);
        let n = self.n;
        let kind = match self.kind {
            AlgebraKind::SpecialOrthogonal => {
                let (i, j) = so_unrank(n, k);
                ElementKind::PlaneRotation { i, j }
            }
            AlgebraKind::SpecialLinear => {
                let off = n * (n - 1);
                if k < off {
                    let (i, j) = sl_unrank_offdiag(n, k);
                    ElementKind::MatrixUnit { i, j }
                } else {
                    ElementKind::DiagPair { i: k - off }
                }
            }
            AlgebraKind::Lorentz => match k {
                0 => ElementKind::PlaneRotation { i: 0, j: 1 },
                1 => ElementKind::PlaneRotation { i: 0, j: 2 },
                2 => ElementKind::PlaneRotation { i: 1, j: 2 },
                3 => ElementKind::Boost { i: 0, j: 3 },
                4 => ElementKind::Boost { i: 1, j: 3 },
                5 => ElementKind::Boost { i: 2, j: 3 },
                _ => unreachable!(),
            },
        };
        SparseBasisElement { kind, n }
    }

    /// Index of the so(n) element `F(i,j)` (requires `i < j`).
    pub fn so_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(matches!(self.kind, AlgebraKind::SpecialOrthogonal));
        debug_assert!(i < j && j < self.n);
        so_rank(self.n, i, j)
    }

    /// Index of the sl(n) off-diagonal element `E(i,j)` (requires `i != j`).
    pub fn sl_offdiag_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(matches!(self.kind, AlgebraKind::SpecialLinear));
        debug_assert!(i != j && i < self.n && j < self.n);
        i * (self.n - 1) + if j > i { j - 1 } else { j }
    }

    /// Index of the sl(n) diagonal element `D(i)`.
    pub fn sl_diag_index(&self, i: usize) -> usize {
        debug_assert!(matches!(self.kind, AlgebraKind::SpecialLinear));
        debug_assert!(i + 1 < self.n);
        self.n * (self.n - 1) + i
    }

    /// The structure-constant table, built on first access.
    pub fn sc_table(&self) -> &ScTable {
        self.sc.get_or_init(|| build_sc_table(self))
    }

    /// Write the nonzero structure constants as lines `k l i c`, one per
    /// constant, for stored pairs `k < l` in lexicographic order. All
    /// indices are 0-based and `c` is an exact integer.
    pub fn dump_sc(&self) -> String {
        let mut out = String::new();
        for (&(k, l), v) in self.sc_table().iter_pairs() {
            for &(i, c) in v {
                writeln!(out, "{} {} {} {}", k, l, i, c).unwrap();
            }
        }
        out
    }
}

fn so_rank(n: usize, i: usize, j: usize) -> usize {
    // Lexicographic rank of (i, j), i < j, among all such pairs.
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

fn so_unrank(n: usize, k: usize) -> (usize, usize) {
    // Invert so_rank by walking rows; row i holds n-1-i pairs.
    let mut k = k;
    for i in 0..n {
        let row = n - 1 - i;
        if k < row {
            return (i, i + 1 + k);
        }
        k -= row;
    }
    unreachable!("index out of range")
}

fn sl_unrank_offdiag(n: usize, k: usize) -> (usize, usize) {
    let i = k / (n - 1);
    let r = k % (n - 1);
    let j = if r >= i { r + 1 } else { r };
    (i, j)
}

/// Symbolic matrix with integer entries, used only while building
/// structure constants so they come out exact.
fn commutator_entries(
    a: &SparseBasisElement,
    b: &SparseBasisElement,
) -> BTreeMap<(usize, usize), i64> {
    let ae: Vec<(usize, usize, i64)> = a
        .entries()
        .into_iter()
        .map(|(r, c, v)| (r, c, v as i64))
        .collect();
    let be: Vec<(usize, usize, i64)> = b
        .entries()
        .into_iter()
        .map(|(r, c, v)| (r, c, v as i64))
        .collect();
    let mut out: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    // AB - BA over sparse entry lists.
    for &(r1, c1, v1) in &ae {
        for &(r2, c2, v2) in &be {
            if c1 == r2 {
                *out.entry((r1, c2)).or_default() += v1 * v2;
            }
            if c2 == r1 {
                *out.entry((r2, c1)).or_default() -= v1 * v2;
            }
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Expand an integer sparse matrix in the basis, exactly.
///
/// Returns `None` if the matrix is not an integer combination of basis
/// elements (cannot happen for commutators of basis elements of the
/// built-in algebras).
fn decompose_integer(
    spec: &BasisSpec,
    m: &BTreeMap<(usize, usize), i64>,
) -> Option<Vec<(usize, i32)>> {
    let n = spec.n;
    let mut coeffs: Vec<(usize, i32)> = Vec::new();
    let mut residual = m.clone();
    match spec.kind {
        AlgebraKind::SpecialOrthogonal => {
            for (&(r, c), &v) in m {
                if r < c && v != 0 {
                    // F(r,c) carries +1 at (r,c) and -1 at (c,r).
                    coeffs.push((so_rank(n, r, c), v as i32));
                    *residual.entry((r, c)).or_default() -= v;
                    *residual.entry((c, r)).or_default() += v;
                }
            }
        }
        AlgebraKind::SpecialLinear => {
            for (&(r, c), &v) in m {
                if r != c && v != 0 {
                    coeffs.push((r * (n - 1) + if c > r { c - 1 } else { c }, v as i32));
                    *residual.entry((r, c)).or_default() -= v;
                }
            }
            // Diagonal part: entries d_0..d_{n-1} with sum zero expand as
            // sum_k gamma_k D(k) with gamma_k = d_0 + ... + d_k.
            let mut prefix: i64 = 0;
            for i in 0..n - 1 {
                prefix += residual.get(&(i, i)).copied().unwrap_or(0);
                if prefix != 0 {
                    coeffs.push((n * (n - 1) + i, prefix as i32));
                }
            }
            let mut total: i64 = 0;
            for i in 0..n {
                total += residual.get(&(i, i)).copied().unwrap_or(0);
            }
            if total != 0 {
                return None; // nonzero trace: not in sl(n)
            }
            for i in 0..n {
                residual.remove(&(i, i));
            }
        }
        AlgebraKind::Lorentz => {
            // Rotations occupy the spatial 3x3 block; boosts the last
            // row/column.
            for k in 0..6 {
                let e = spec.element(k);
                let entries = e.entries();
                let (r0, c0, v0) = entries[0];
                let coeff = residual.get(&(r0, c0)).copied().unwrap_or(0) / v0 as i64;
                if coeff != 0 {
                    coeffs.push((k, coeff as i32));
                    for (r, c, v) in entries {
                        *residual.entry((r, c)).or_default() -= coeff * v as i64;
                    }
                }
            }
        }
    }
    residual.retain(|_, v| *v != 0);
    if residual.is_empty() {
        coeffs.sort_unstable();
        Some(coeffs)
    } else {
        None
    }
}

fn build_sc_table(spec: &BasisSpec) -> ScTable {
    let d = spec.d;
    let mut pairs: BTreeMap<(usize, usize), Vec<(usize, i32)>> = BTreeMap::new();
    // Commutators of sparse elements only touch overlapping index sets, so
    // walking all pairs is cheap enough for the dimensions exercised here;
    // the table is cached after the first call.
    for k in 0..d {
        let ek = spec.element(k);
        for l in (k + 1)..d {
            let el = spec.element(l);
            if !elements_interact(&ek, &el) {
                continue;
            }
            let m = commutator_entries(&ek, &el);
            if m.is_empty() {
                continue;
            }
            let coeffs = decompose_integer(spec, &m)
                .expect("commutator of basis elements stays in the algebra");
            if !coeffs.is_empty() {
                pairs.insert((k, l), coeffs);
            }
        }
    }
    let mut partners: Vec<Vec<usize>> = vec![Vec::new(); d];
    for &(k, l) in pairs.keys() {
        partners[k].push(l);
        partners[l].push(k);
    }
    for p in &mut partners {
        p.sort_unstable();
        p.dedup();
    }
    ScTable { pairs, partners }
}

/// Quick disjointness test: two sparse elements commute when their row and
/// column index sets do not meet, which prunes most pairs in large
/// algebras.
fn elements_interact(a: &SparseBasisElement, b: &SparseBasisElement) -> bool {
    let idx = |e: &SparseBasisElement| -> Vec<usize> {
        let mut v: Vec<usize> = e
            .entries()
            .into_iter()
            .flat_map(|(r, c, _)| [r, c])
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let ia = idx(a);
    let ib = idx(b);
    ia.iter().any(|x| ib.binary_search(x).is_ok())
}

/// An algebra element expressed in a basis: the coefficient vector beta
/// with `B = sum_k beta_k V_k`.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    /// The basis the coefficients refer to.
    pub basis: Basis,
    /// Coefficients, length `basis.d`.
    pub beta: Vec<f64>,
}

impl AlgebraElement {
    /// Build from a coefficient vector, checking the length.
    pub fn new(basis: Basis, beta: Vec<f64>) -> Result<Self> {
        if beta.len() != basis.d {
            return Err(Error::DimensionMismatch {
                expected: basis.d,
                got: beta.len(),
            });
        }
        Ok(Self { basis, beta })
    }

    /// Reassemble the dense matrix `sum_k beta_k V_k`.
    pub fn materialize(&self) -> Array2<f64> {
        let n = self.basis.n;
        let mut m = Array2::zeros((n, n));
        for (k, &b) in self.beta.iter().enumerate() {
            if b == 0.0 {
                continue;
            }
            for (r, c, v) in self.basis.element(k).entries() {
                m[[r, c]] += b * v;
            }
        }
        m
    }
}

/// Express a dense matrix in the given basis.
///
/// The coefficients are read off entrywise (every basis here admits that),
/// then the reconstruction residual is compared against
/// `tol * max(1, ||B||_F)`; a residual above that threshold means the
/// matrix violates the algebra's defining constraint and the call fails
/// with [`Error::NotInAlgebra`]. Passing `None` uses [`DEFAULT_TOL`].
pub fn decompose(b: &Array2<f64>, basis: &Basis, tol: Option<f64>) -> Result<AlgebraElement> {
    let n = basis.n;
    if b.nrows() != n || b.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.nrows(),
        });
    }
    let tol = tol.unwrap_or(DEFAULT_TOL);
    let mut beta = vec![0.0; basis.d];
    match basis.kind {
        AlgebraKind::SpecialOrthogonal => {
            for i in 0..n {
                for j in (i + 1)..n {
                    beta[so_rank(n, i, j)] = b[[i, j]];
                }
            }
        }
        AlgebraKind::SpecialLinear => {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        beta[i * (n - 1) + if j > i { j - 1 } else { j }] = b[[i, j]];
                    }
                }
            }
            // gamma_k = B_00 + ... + B_kk reproduces the diagonal exactly
            // when the trace vanishes.
            let mut prefix = 0.0;
            for i in 0..n - 1 {
                prefix += b[[i, i]];
                beta[n * (n - 1) + i] = prefix;
            }
        }
        AlgebraKind::Lorentz => {
            beta[0] = b[[0, 1]];
            beta[1] = b[[0, 2]];
            beta[2] = b[[1, 2]];
            beta[3] = b[[0, 3]];
            beta[4] = b[[1, 3]];
            beta[5] = b[[2, 3]];
        }
    }
    let elem = AlgebraElement {
        basis: basis.clone(),
        beta,
    };
    let residual = &elem.materialize() - b;
    let scale = crate::oracle::frobenius_norm(b).max(1.0);
    let res_norm = crate::oracle::frobenius_norm(&residual);
    if res_norm > tol * scale {
        return Err(Error::NotInAlgebra(format!(
            "reconstruction residual {res_norm:.3e} exceeds {:.3e}",
            tol * scale
        )));
    }
    Ok(elem)
}

/// Split a general matrix into its traceless part (as an sl(n) element)
/// and the scalar multiple of the identity that was removed.
///
/// `B = B_0 + delta I` with `tr(B_0) = 0` and `delta = tr(B)/n`, so
/// `exp(tB) = exp(tB_0) * e^{t delta}`. The traceless part is returned
/// decomposed in the sl(n) basis.
pub fn levi_split(b: &Array2<f64>, basis: &Basis) -> (AlgebraElement, f64) {
    assert!(
        matches!(basis.kind, AlgebraKind::SpecialLinear),
        "levi_split expects an sl(n) basis"
    );
    let n = basis.n;
    assert_eq!(b.nrows(), n, "dimension mismatch");
    let delta = b.diag().sum() / n as f64;
    let mut b0 = b.clone();
    for i in 0..n {
        b0[[i, i]] -= delta;
    }
    // The traceless projection decomposes exactly; the residual check
    // cannot fire because sl(n) is defined by the trace alone. A generous
    // tolerance guards against accumulated rounding in the prefix sums.
    let elem = decompose(&b0, basis, Some(1e-9))
        .expect("traceless projection lies in sl(n)");
    (elem, delta)
}
