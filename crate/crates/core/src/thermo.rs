//! Partition function, alpha-expectations, internal and free energies, and
//! the variational machinery around the equilibrium state.
//!
//! Every exponential here runs on a max-shifted spectrum, so the only
//! floating-point hazard left is benign underflow; a trace that underflows
//! all the way to zero is reported as a range error instead of producing an
//! infinite log.

use crate::eigen::{eig_hermitian, EigenDecomposition};
use crate::entropy::{renyi_entropy, AlphaParam};
use crate::error::{Error, Result};
use crate::matrix::{psd_trace_product, trace_product, HermitianMatrix};
use crate::states::{gibbs_state, DensityMatrix};
use crate::tol;

/// The `(alpha, beta)` pair of one thermodynamic query. `beta` may be
/// negative (meaningful on finite systems) but must be nonzero wherever a
/// `1/beta` prefactor appears.
#[derive(Debug, Clone, Copy)]
pub struct ThermoParams {
    pub alpha: AlphaParam,
    pub beta: f64,
}

impl ThermoParams {
    pub fn new(alpha: AlphaParam, beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::BetaRange("beta must be finite".into()));
        }
        Ok(Self { alpha, beta })
    }

    fn require_nonzero_beta(&self) -> Result<f64> {
        if self.beta == 0.0 {
            return Err(Error::BetaZero);
        }
        Ok(self.beta)
    }
}

/// Everything the CLI reports for one `(rho, H, alpha, beta)` query.
#[derive(Debug, Clone)]
pub struct ThermoReport {
    pub s_alpha: f64,
    pub e_alpha_beta: f64,
    pub f_alpha_beta: f64,
    pub log_z_beta: f64,
    pub is_equilibrium: bool,
    /// `beta * F + log Z_beta`; nonnegative, zero exactly at equilibrium.
    pub pb_gap: f64,
}

/// `log Tr e^{-beta H}`, evaluated as a shifted log-sum-exp. Finite for any
/// finite `beta`: the shifted sum always contains a term equal to 1.
pub fn log_partition(h: &HermitianMatrix, beta: f64) -> Result<f64> {
    if !beta.is_finite() {
        return Err(Error::BetaRange("beta must be finite".into()));
    }
    Ok(log_partition_from_spectrum(
        eig_hermitian(h)?.eigenvalues(),
        beta,
    ))
}

pub(crate) fn log_partition_from_spectrum(eigs: &[f64], beta: f64) -> f64 {
    // Reference eigenvalue with the largest Boltzmann weight; exponents
    // after the shift are all <= 0.
    let reference = if beta >= 0.0 {
        eigs.iter().copied().fold(f64::INFINITY, f64::min)
    } else {
        eigs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    };
    let sum: f64 = eigs.iter().map(|&l| (-beta * (l - reference)).exp()).sum();
    -beta * reference + sum.ln()
}

/// `log Tr(rho^alpha e^{c H})` with the exponential max-shifted and the
/// trace taken through Hermitian square roots (both factors are positive, so
/// the trace is a Frobenius norm and never cancels). Errors if the trace
/// underflows to zero (the state's support carries no weight at this
/// exponent range).
fn log_trace_pow_exp(
    rho: &DensityMatrix,
    h_eig: &EigenDecomposition,
    alpha: f64,
    c: f64,
) -> Result<f64> {
    let shift = h_eig
        .eigenvalues()
        .iter()
        .map(|&l| c * l)
        .fold(f64::NEG_INFINITY, f64::max);
    let exp_half = h_eig.apply_spectrum(|l| (0.5 * (c * l - shift)).exp());
    let rho_half_pow = rho
        .eig()
        .apply_spectrum(|p| if p > 0.0 { p.powf(0.5 * alpha) } else { 0.0 });
    let t = psd_trace_product(rho_half_pow.matrix(), exp_half.matrix())?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::BetaRange(format!(
            "exponent range exhausted: Tr(rho^a e^(cH)) evaluated to {t:.3e} at c = {c:.3e}"
        )));
    }
    Ok(shift + t.ln())
}

/// `log Tr rho^alpha` (with `0^0 = 0`, so alpha = 0 gives `log rank`).
fn log_trace_pow(rho: &DensityMatrix, alpha: f64) -> f64 {
    rho.eig()
        .eigenvalues()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p.powf(alpha))
        .sum::<f64>()
        .ln()
}

/// Nonlinear alpha-expectation
/// `<A>_alpha = (1/(alpha-1)) log(Tr rho^alpha e^{(alpha-1)A} / Tr rho^alpha)`,
/// with the linear branch `Tr rho A` at alpha = 1.
pub fn alpha_expectation(
    rho: &DensityMatrix,
    a: &HermitianMatrix,
    alpha: AlphaParam,
) -> Result<f64> {
    if rho.dim() != a.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), a.dim()));
    }
    if alpha.is_infinite() {
        return Err(Error::AlphaInfinite);
    }
    if alpha.routes_to_one() {
        return Ok(trace_product(&[rho.matrix(), a.matrix()])?.re);
    }
    let av = alpha.value();
    let a_eig = eig_hermitian(a)?;
    let num = log_trace_pow_exp(rho, &a_eig, av, av - 1.0)?;
    Ok((num - log_trace_pow(rho, av)) / (av - 1.0))
}

/// Internal energy
/// `E_{alpha,beta}(rho, H) = [log Tr rho^alpha e^{(alpha-1) beta H} - log Tr rho^alpha] / (beta (alpha-1))`.
pub fn internal_energy(
    rho: &DensityMatrix,
    h: &HermitianMatrix,
    params: ThermoParams,
) -> Result<f64> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), h.dim()));
    }
    let beta = params.require_nonzero_beta()?;
    if params.alpha.is_infinite() {
        return Err(Error::AlphaInfinite);
    }
    if params.alpha.routes_to_one() {
        return Ok(trace_product(&[rho.matrix(), h.matrix()])?.re);
    }
    let av = params.alpha.value();
    let h_eig = eig_hermitian(h)?;
    let num = log_trace_pow_exp(rho, &h_eig, av, (av - 1.0) * beta)?;
    Ok((num - log_trace_pow(rho, av)) / (beta * (av - 1.0)))
}

/// Internal energy of the equilibrium state, in closed form:
/// `(log Z_beta - log Z_{alpha beta}) / (beta (alpha - 1))` for finite
/// alpha != 1, the Gibbs expectation of `H` at alpha = 1, and the extreme
/// eigenvalue of `H` at alpha = infinity.
pub fn equilibrium_energy(h: &HermitianMatrix, params: ThermoParams) -> Result<f64> {
    let beta = params.require_nonzero_beta()?;
    let eig = eig_hermitian(h)?;
    if params.alpha.is_infinite() {
        return Ok(if beta > 0.0 {
            eig.min_eigenvalue()
        } else {
            eig.max_eigenvalue()
        });
    }
    if params.alpha.routes_to_one() {
        // -d log Z / d beta, evaluated analytically as the Gibbs mean.
        return Ok(gibbs_moments_from_spectrum(eig.eigenvalues(), beta).0);
    }
    let av = params.alpha.value();
    let log_z_beta = log_partition_from_spectrum(eig.eigenvalues(), beta);
    let log_z_alpha_beta = log_partition_from_spectrum(eig.eigenvalues(), av * beta);
    Ok((log_z_beta - log_z_alpha_beta) / (beta * (av - 1.0)))
}

/// Free energy
/// `F_{alpha,beta}(rho, H) = E_{alpha,beta} - S_alpha / beta
///  = log Tr rho^alpha e^{(alpha-1) beta H} / (beta (alpha-1))`.
pub fn free_energy(rho: &DensityMatrix, h: &HermitianMatrix, params: ThermoParams) -> Result<f64> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), h.dim()));
    }
    let beta = params.require_nonzero_beta()?;
    if params.alpha.is_infinite() {
        return Err(Error::AlphaInfinite);
    }
    if params.alpha.routes_to_one() {
        let e = trace_product(&[rho.matrix(), h.matrix()])?.re;
        let s = renyi_entropy(rho, params.alpha);
        return Ok(e - s / beta);
    }
    let av = params.alpha.value();
    let h_eig = eig_hermitian(h)?;
    let num = log_trace_pow_exp(rho, &h_eig, av, (av - 1.0) * beta)?;
    Ok(num / (beta * (av - 1.0)))
}

/// Secant quotient `(psi(beta alpha) - psi(beta)) / (beta (alpha - 1))`.
/// Applied to `-log Z` it reproduces the equilibrium internal energy.
pub fn alpha_derivative(psi: impl Fn(f64) -> f64, alpha: f64, beta: f64) -> Result<f64> {
    if alpha == 1.0 {
        return Err(Error::AlphaOne);
    }
    if beta == 0.0 {
        return Err(Error::BetaZero);
    }
    Ok((psi(beta * alpha) - psi(beta)) / (beta * (alpha - 1.0)))
}

/// `d^2 log Z / d beta^2`: the Gibbs-state variance of `H`. Nonnegative.
pub fn log_z_curvature(h: &HermitianMatrix, beta: f64) -> Result<f64> {
    if !beta.is_finite() {
        return Err(Error::BetaRange("beta must be finite".into()));
    }
    let eig = eig_hermitian(h)?;
    Ok(gibbs_moments_from_spectrum(eig.eigenvalues(), beta).1)
}

/// `(mean, variance)` of the spectrum under Boltzmann weights at `beta`.
fn gibbs_moments_from_spectrum(eigs: &[f64], beta: f64) -> (f64, f64) {
    let reference = if beta >= 0.0 {
        eigs.iter().copied().fold(f64::INFINITY, f64::min)
    } else {
        eigs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    };
    let weights: Vec<f64> = eigs.iter().map(|&l| (-beta * (l - reference)).exp()).collect();
    let z: f64 = weights.iter().sum();
    let mean: f64 = eigs
        .iter()
        .zip(&weights)
        .map(|(&l, &w)| w * l)
        .sum::<f64>()
        / z;
    // Central form keeps the variance nonnegative up to rounding.
    let var: f64 = eigs
        .iter()
        .zip(&weights)
        .map(|(&l, &w)| w * (l - mean) * (l - mean))
        .sum::<f64>()
        / z;
    (mean, var)
}

/// `log Tr(e^{c0 H0} e^{c1 H1})`, both exponentials max-shifted and the
/// trace taken through Hermitian square roots.
pub(crate) fn log_trace_exp_pair(
    h0_eig: &EigenDecomposition,
    c0: f64,
    h1_eig: &EigenDecomposition,
    c1: f64,
) -> Result<f64> {
    let s0 = h0_eig
        .eigenvalues()
        .iter()
        .map(|&l| c0 * l)
        .fold(f64::NEG_INFINITY, f64::max);
    let s1 = h1_eig
        .eigenvalues()
        .iter()
        .map(|&l| c1 * l)
        .fold(f64::NEG_INFINITY, f64::max);
    let e0_half = h0_eig.apply_spectrum(|l| (0.5 * (c0 * l - s0)).exp());
    let e1_half = h1_eig.apply_spectrum(|l| (0.5 * (c1 * l - s1)).exp());
    let t = psd_trace_product(e0_half.matrix(), e1_half.matrix())?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::BetaRange(format!(
            "exponent range exhausted: Tr(e^(c0 H0) e^(c1 H1)) evaluated to {t:.3e}"
        )));
    }
    Ok(s0 + s1 + t.ln())
}

/// Assemble the full report. `E`, `F`, and `S` are computed through their
/// own routes, so `F = E - S/beta` holds as a cross-check rather than by
/// construction (except at alpha = infinity, where only the equilibrium
/// closed form exists).
pub fn thermo_report(
    rho: &DensityMatrix,
    h: &HermitianMatrix,
    params: ThermoParams,
) -> Result<ThermoReport> {
    let beta = params.require_nonzero_beta()?;
    let s_alpha = renyi_entropy(rho, params.alpha);
    let log_z_beta = log_partition(h, beta)?;
    let is_equilibrium = match gibbs_state(h, beta) {
        Ok(equilibrium) => {
            rho.matrix()
                .sub(equilibrium.matrix())?
                .frobenius_norm()
                <= tol::EQUILIBRIUM_TOL
        }
        Err(_) => false,
    };
    let (e_alpha_beta, f_alpha_beta) = if params.alpha.is_infinite() {
        if !is_equilibrium {
            return Err(Error::AlphaInfinite);
        }
        let e = equilibrium_energy(h, params)?;
        (e, e - s_alpha / beta)
    } else {
        (
            internal_energy(rho, h, params)?,
            free_energy(rho, h, params)?,
        )
    };
    let pb_gap = beta * f_alpha_beta + log_z_beta;
    Ok(ThermoReport {
        s_alpha,
        e_alpha_beta,
        f_alpha_beta,
        log_z_beta,
        is_equilibrium,
        pb_gap,
    })
}
