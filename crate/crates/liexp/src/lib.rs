//! Structure-preserving approximation of matrix Lie-group exponentials.
//!
//! Given an element `B` of a matrix Lie algebra, the crate approximates
//! `exp(tB)` by a product of elementary exponentials determined by canonical
//! coordinates of the second kind. Every factor lies in the group exactly,
//! so the approximation inherits group structure (orthogonality, unit
//! determinant, preservation of an indefinite form) to rounding error while
//! matching the flow to a prescribed order in `t`.
//!
//! The crate covers:
//!
//! - bases and structure constants for so(n), sl(n), and so(3,1)
//!   ([`algebra`]);
//! - order-1 through order-4 coordinate polynomials, with O(n^3) fast paths
//!   for so(n) and sl(n) at order 2 ([`coords`]);
//! - evaluation of factored products and their action on vectors, with
//!   explicit operation counts ([`compose`]);
//! - time-symmetric compositions: Strang splitting, the Yoshida order-4
//!   triple jump, and a symmetric order-4 coordinate product with a
//!   third-order correction computed from a structured double-commutator
//!   sum ([`splitting`]);
//! - O(n) constructions for banded (tridiagonal) inputs ([`sparse`]);
//! - a fourth-order Runge-Kutta-Munthe-Kaas integrator for ODEs evolving on
//!   a group orbit, with a KdV-soliton demonstration ([`integrator`]);
//! - reference dense matrix functions used only for validation
//!   ([`oracle`]);
//! - reproducible benchmark drivers behind the `liexp` binary
//!   ([`experiments`]).

pub mod algebra;
pub mod compose;
pub mod coords;
pub mod experiments;
pub mod flops;
pub mod integrator;
pub mod oracle;
pub mod sparse;
pub mod splitting;

pub use algebra::{
    decompose, levi_split, lorentz_basis, sl_basis, so_basis, AlgebraElement, AlgebraKind,
    Basis, BasisSpec, ElementKind, SparseBasisElement, DEFAULT_TOL,
};
pub use compose::{
    elem_exp_apply, elem_exp_apply_vec, evaluate, evaluate_action, evaluate_action_counted,
    evaluate_counted, plan_skc, Plan, PlanFactor, Poly, Side,
};
pub use coords::{
    alphas_from_coeffs, order_coeffs_generic, order_coeffs_sln_fast, order_coeffs_son_fast,
    AlphaPolynomials, CoeffSet,
};
pub use experiments::{
    basis_for, cmd_bench_orders, cmd_bench_q2, cmd_bench_sparse, cmd_kdv, default_methods,
    plan_strang, plan_yoshida4, random_element, KdvReport, MethodId, Q2Report, RunConfig,
};
pub use flops::FlopCounter;
pub use integrator::{
    integrate, kdv_ode, kdv_rhs, kdv_soliton_y1, rkmk4_step, ExpMode, LieOde, Trajectory,
};
pub use oracle::{
    convergence_study, det, error_frob, expm_ref, fit_slope, frobenius_norm, logm_ref,
    ErrorReport,
};
pub use sparse::{
    skc2_tridiag_sln, skc2_tridiag_sln_counted, skc2_tridiag_son, skc2_tridiag_son_counted,
    truncate_to_band, TridiagSL, TridiagSO,
};
pub use splitting::{
    q2_generic, q2_son_fast, q2_son_fast_counted, strang, symmetric_skc4, yoshida4,
    SplitList,
};

/// Errors reported by the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The matrix fails the defining constraint of the requested algebra.
    #[error("matrix is not in the algebra: {0}")]
    NotInAlgebra(String),
    /// An approximation order outside the implemented range was requested.
    #[error("order {requested} unsupported; this path implements orders 1..={max}")]
    UnsupportedOrder { requested: usize, max: usize },
    /// Two objects that must agree in dimension do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// The matrix logarithm could not bring its argument near the identity.
    #[error("matrix logarithm: argument could not be brought near the identity")]
    NotNearIdentity,
    /// A linear solve hit an exactly singular pivot.
    #[error("singular matrix in linear solve")]
    SingularMatrix,
    /// A caller-supplied argument is out of range or malformed.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// An integrator step produced data outside the algebra.
    #[error("step rejected: {0}")]
    StepRejected(String),
    /// An I/O failure while writing benchmark output.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
