//! Renyi quantum thermodynamics on finite-dimensional states.
//!
//! The crate is organized in layers:
//!
//! - [`matrix`], [`eigen`], [`spectral`]: complex Hermitian linear algebra
//!   (cyclic Jacobi eigensolver, spectral matrix functions, traces,
//!   brackets, determinants, Gram matrices).
//! - [`states`]: density matrices, positive operators, Gibbs states, and
//!   deterministic random ensembles.
//! - [`entropy`]: Renyi entropy and its limits, relative entropy (plain and
//!   sandwiched), the Lieb trace functional.
//! - [`thermo`]: partition function, alpha-expectations, internal/free
//!   energies, the alpha-derivative identity, and the variational
//!   **Peierls-Bogoliubov** machinery around the equilibrium state.
//! - [`uncertainty`]: moments, covariance/commutator/Gram matrices,
//!   Schrodinger and determinant uncertainty relations, alpha-variance.
//! - [`harness`]: registry-driven randomized verification of every
//!   inequality and identity above, with deterministic seeding and
//!   machine-readable reports.
//!
//! All operations are pure functions of their inputs; values are immutable
//! after construction and safe to share across threads.

#![forbid(unsafe_code)]

pub mod eigen;
pub mod entropy;
pub mod error;
pub mod harness;
pub mod matrix;
pub mod rng;
pub mod spectral;
pub mod states;
pub mod thermo;
pub mod tol;
pub mod uncertainty;

pub use num_complex::Complex64;

pub use eigen::{eig_hermitian, EigenDecomposition};
pub use entropy::{
    lieb_trace, renyi_entropy, renyi_relative, sandwiched_renyi, AlphaParam, LiebProbe,
};
pub use error::{Error, Result};
pub use matrix::{bracket, gram, trace_product, BracketKind, ComplexMatrix, HermitianMatrix};
pub use spectral::{is_positive_definite, matrix_fn, min_eigenvalue, SpectralFunction};
pub use states::{
    density_from_matrix, gibbs_state, maximally_mixed, project_to_density, pure_state, sample,
    DensityMatrix, PositiveMatrix, Sample, SampleKind, SampleSpec,
};
pub use thermo::{
    alpha_derivative, alpha_expectation, equilibrium_energy, free_energy, internal_energy,
    log_partition, log_z_curvature, thermo_report, ThermoParams, ThermoReport,
};
pub use uncertainty::{
    alpha_variance, build_report, covariance, det_gaps, lemma_split_check, moments,
    schrodinger_gap, DetGaps, LemmaSplit, ObservableSet, PairGap, SchrodingerGap,
    UncertaintyReport,
};
