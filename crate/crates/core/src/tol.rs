//! Numerical thresholds used throughout the crate.
//!
//! Centralized so that every tolerance has one definition and the test
//! suites can reference the same constants the implementation uses.

/// Hermiticity validation: max |M - M^dag| entry for flagged operators.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Unit-norm validation for pure states and unit-trace for density matrices.
pub const NORM_TOL: f64 = 1e-12;

/// Allowed negative eigenvalue slack when validating positive semidefiniteness.
pub const PSD_TOL: f64 = 1e-10;

/// Eigen-residual target: ||M v - lambda v|| relative to ||M||.
pub const EIG_RESIDUAL_TOL: f64 = 1e-10;

/// Jacobi sweep cap. Quadratic convergence makes this generous.
pub const JACOBI_MAX_SWEEPS: usize = 64;

/// Off-diagonal Frobenius norm at which the Jacobi iteration stops,
/// relative to the Frobenius norm of the input.
pub const JACOBI_OFF_TOL: f64 = 1e-13;

/// Trace-orthonormalization: residual norm below which an input operator is
/// treated as linearly dependent and dropped (inputs are normalized first).
pub const DEPENDENT_DROP_TOL: f64 = 1e-10;

/// Gram-matrix deviation allowed for an orthonormal basis.
pub const ORTHO_TOL: f64 = 1e-10;

/// Lie-closure residual: commutators must project back into the span.
pub const CLOSURE_TOL: f64 = 1e-8;

/// Purity tolerance for the unentangled / generalized-coherent classification.
pub const PURITY_TOL: f64 = 1e-8;

/// Ground-state degeneracy: gap must exceed this fraction of the spectral
/// width for the ground level to count as nondegenerate.
pub const GAP_REL_TOL: f64 = 1e-8;

/// Absolute gap below which an exact-diagonalization ground space is
/// flagged as near-degenerate.
pub const DEGENERATE_GAP_ABS: f64 = 1e-10;

/// Lanczos ground-state residual target (scaled by a spectral estimate).
pub const LANCZOS_TOL: f64 = 1e-12;

/// Canonical anticommutation relations check for Jordan-Wigner operators.
pub const CAR_TOL: f64 = 1e-12;

/// Convex-roof optimizer: value tolerance of the coordinate descent.
pub const ROOF_VALUE_TOL: f64 = 1e-4;

/// Convex-roof optimizer: default number of random restarts.
pub const ROOF_RESTARTS: usize = 32;

/// Rank cutoff when purifying a density matrix.
pub const RANK_EPS: f64 = 1e-12;

/// Certificate check for CP maps: sum A_i^dag A_i vs identity.
pub const CP_TOL: f64 = 1e-10;

/// Free-fermion solver vs dense diagonalization agreement.
pub const FREE_FERMION_TOL: f64 = 1e-8;
