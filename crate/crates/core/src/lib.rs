//! Generalized entanglement relative to distinguished observable algebras.
//!
//! A pure state is unentangled relative to a distinguished Lie algebra of
//! observables when its vector of expectations over that algebra is
//! extremal. This crate computes the associated purity measure, its
//! convex-roof extension to mixed states, conditional compositions of CP
//! maps with the monotonicity audit they admit, and the free-fermion
//! solution of the periodic anisotropic XY chain, where the fermionic
//! u(N) purity of the BCS-like ground state acts as a disorder parameter
//! across the quantum phase transition.
//!
//! Module map:
//! - [`linalg`]: dense complex Hermitian eigensolver (cyclic Jacobi),
//!   deterministic Lanczos, tensor products, partial trace,
//!   trace-inner-product orthonormalization, matrix exponentials.
//! - [`states`]: named state constructors (GHZ, W, products, spin
//!   coherent, Haar random, Werner) and validated density matrices.
//! - [`algebra`]: built-in observable algebras with trace-orthonormal
//!   bases and the purity normalization, including the Jordan-Wigner
//!   fermionic algebras u(N) and so(2N).
//! - [`purity`]: reduced expectation vectors, h-purity, classification,
//!   ground-state and lowest-weight characterizations.
//! - [`measures`]: mixedness measures, the convex-roof purity deficit,
//!   the two-qubit concurrence oracle, reduced-state mixedness.
//! - [`channels`]: CP maps in Hellwig-Kraus form, conditional
//!   composition, group-unitary GLOCC sampling, monotonicity audits.
//! - [`xymodel`]: the periodic anisotropic XY chain: dense oracle,
//!   Bogoliubov solution with parity-sector resolution, purity scans,
//!   critical-point and exponent fits.

pub mod algebra;
pub mod channels;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod purity;
pub mod states;
pub mod tol;
pub mod xymodel;

pub use algebra::{
    bipartite_algebra, fermion_so_algebra, fermion_u_algebra, jordan_wigner_rep,
    local_qubit_algebra, spin_algebra, FermionRep, ObservableAlgebra,
};
pub use channels::{
    conditional_compose, monotonicity_audit, run_glocc_audit, sample_unitary_glocc, AuditOptions,
    AuditReport, CPMap, GloccOptions, TraceProperty,
};
pub use error::{CoreError, CoreResult};
pub use linalg::{
    hermitian_eig, kron, partial_trace, trace_orthonormalize, unitary_from_generator, Operator,
    Spectrum,
};
pub use measures::{
    mixedness, reduced_mixedness, roof_purity_deficit, sigma_roof, wootters_concurrence,
    ChordOptions, Ensemble, MixednessMeasure, RoofOptions, RoofResult,
};
pub use purity::{
    ground_state_check, h_purity, is_unentangled, lowest_weight_check, meyer_wallach, reduce,
    reduce_pure, theorem_equivalence_suite, GroundCheck, ReducedState, TheoremReport,
};
pub use states::{
    ghz, haar_random, product_state, spin_coherent, w_state, werner, DensityMatrix, PureState,
    State,
};
pub use xymodel::{
    bcs_purity, bcs_state, build_hamiltonian, estimate_critical, exact_ground, purity_scan,
    sector_ground, solve_bogoliubov, BogoliubovSolution, CriticalEstimate, PurityScan, ScanPoint,
    Sector, SectorGround, XyGround, XyParams,
};
