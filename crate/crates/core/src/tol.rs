//! Central tolerance and guard constants.
//!
//! Scale-dependent thresholds take the form `factor * max(1, scale)` where
//! `scale` is a norm of the matrix at hand; the helpers below build them.

/// Hermiticity deviation allowed on input, relative to `max(1, max-norm)`.
pub const HERMITIAN_TOL_FACTOR: f64 = 1e-12;

/// Positive-definiteness floor, relative to `max(1, Frobenius norm)`.
pub const PD_TOL_FACTOR: f64 = 1e-10;

/// Off-diagonal Frobenius mass (relative to the input norm) at which the
/// Jacobi sweep stops.
pub const EIG_CONVERGENCE_FACTOR: f64 = 1e-14;

/// Hard cap on Jacobi sweeps before reporting non-convergence.
pub const JACOBI_SWEEP_CAP: usize = 64;

/// Eigenvalues of a unit-trace state below this count as zero when taking
/// ranks and support projectors.
pub const RANK_TOL: f64 = 1e-10;

/// Eigenvalues above this (but below zero) are repaired to zero during
/// density-matrix construction; anything more negative is rejected.
pub const NEG_EIG_REPAIR_LIMIT: f64 = -1e-6;

/// `|beta| * (lambda_max - lambda_min)` beyond which a Gibbs state would be
/// numerically rank-deficient; construction refuses instead.
pub const BETA_EXP_GUARD: f64 = 700.0;

/// Width of the routing window around alpha = 1 inside which the analytic
/// alpha = 1 branch is used.
pub const NEAR_ONE_TOL: f64 = 1e-6;

/// Frobenius distance to the Gibbs state below which a state is reported as
/// being at equilibrium.
pub const EQUILIBRIUM_TOL: f64 = 1e-8;

/// Scale a tolerance factor by `max(1, scale)`.
pub fn scaled(factor: f64, scale: f64) -> f64 {
    factor * scale.max(1.0)
}
