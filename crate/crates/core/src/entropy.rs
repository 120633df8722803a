//! Renyi entropy, its limiting cases, relative entropies (plain and
//! sandwiched), and the Lieb trace functional.

use crate::eigen::eig_hermitian;
use crate::error::{Error, Result};
use crate::matrix::{psd_trace_product, trace_product, ComplexMatrix, HermitianMatrix};
use crate::spectral::{matrix_fn_with_eig, SpectralFunction};
use crate::states::{DensityMatrix, PositiveMatrix};
use crate::tol;

/// Entropic order parameter: a value in `[0, +inf]`, with a routing window
/// around 1 inside which the analytic alpha = 1 branch is used (the generic
/// formula loses all precision there).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaParam {
    value: f64,
    near_one_tol: f64,
}

impl AlphaParam {
    pub fn new(value: f64) -> Result<Self> {
        Self::with_near_one_tol(value, tol::NEAR_ONE_TOL)
    }

    pub fn with_near_one_tol(value: f64, near_one_tol: f64) -> Result<Self> {
        if value.is_nan() || value < 0.0 {
            return Err(Error::InvalidAlpha(format!(
                "alpha must be in [0, +inf], got {value}"
            )));
        }
        if !(near_one_tol > 0.0) {
            return Err(Error::InvalidAlpha(format!(
                "near-one tolerance must be positive, got {near_one_tol}"
            )));
        }
        Ok(Self {
            value,
            near_one_tol,
        })
    }

    pub fn infinity() -> Self {
        Self {
            value: f64::INFINITY,
            near_one_tol: tol::NEAR_ONE_TOL,
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0.0
    }

    /// Whether this alpha takes the analytic alpha = 1 branch.
    pub fn routes_to_one(&self) -> bool {
        self.value.is_finite() && (self.value - 1.0).abs() <= self.near_one_tol
    }
}

/// Inputs to the Lieb trace functional `Tr K* A^q K B^r`.
#[derive(Debug, Clone)]
pub struct LiebProbe {
    k: ComplexMatrix,
    q: f64,
    r: f64,
}

impl LiebProbe {
    pub fn new(k: ComplexMatrix, q: f64, r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) || !(0.0..=1.0).contains(&r) || q + r > 1.0 {
            return Err(Error::InvalidProbe(format!(
                "need 0 <= q, r <= 1 with q + r <= 1, got q = {q}, r = {r}"
            )));
        }
        Ok(Self { k, q, r })
    }

    pub fn k(&self) -> &ComplexMatrix {
        &self.k
    }

    pub fn exponents(&self) -> (f64, f64) {
        (self.q, self.r)
    }
}

/// `S_alpha(rho) = log Tr rho^alpha / (1 - alpha)` with the limiting branches
/// `S_0 = log rank`, `S_1 = -Tr rho log rho`, `S_inf = -log max eigenvalue`.
pub fn renyi_entropy(rho: &DensityMatrix, alpha: AlphaParam) -> f64 {
    let populations = rho.eig().eigenvalues();
    if alpha.is_infinite() {
        return -populations[populations.len() - 1].ln();
    }
    if alpha.routes_to_one() {
        return von_neumann_entropy(populations);
    }
    if alpha.is_zero() {
        return (rho.rank() as f64).ln();
    }
    let a = alpha.value();
    let power_sum: f64 = populations
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p.powf(a))
        .sum();
    power_sum.ln() / (1.0 - a)
}

fn von_neumann_entropy(populations: &[f64]) -> f64 {
    // 0 log 0 = 0.
    -populations
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>()
}

/// Relative entropy `D_alpha(rho || sigma) = log Tr(rho^alpha sigma^{1-alpha})
/// / (alpha - 1)`; alpha = 1 is the von Neumann branch, alpha = 0 the support
/// projector limit. Satisfies `D_alpha >= -log Tr sigma`.
pub fn renyi_relative(
    rho: &DensityMatrix,
    sigma: &PositiveMatrix,
    alpha: AlphaParam,
) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    if alpha.is_infinite() {
        return Err(Error::AlphaInfinite);
    }
    if alpha.routes_to_one() {
        return von_neumann_relative(rho, sigma);
    }
    if alpha.is_zero() {
        // -log Tr(P_rho sigma): the alpha -> 0 limit under 0^0 = 0. The
        // projector is its own Hermitian square root.
        let projector = rho.eig().apply_spectrum(|p| if p > tol::RANK_TOL { 1.0 } else { 0.0 });
        let sigma_half = sigma.eig().apply_spectrum(f64::sqrt);
        let overlap = psd_trace_product(projector.matrix(), sigma_half.matrix())?;
        return Ok(-overlap.ln());
    }
    let a = alpha.value();
    let rho_half_pow = rho
        .eig()
        .apply_spectrum(|p| if p > 0.0 { p.powf(0.5 * a) } else { 0.0 });
    let sigma_half_pow = sigma.eig().apply_spectrum(|s| s.powf(0.5 * (1.0 - a)));
    let t = psd_trace_product(rho_half_pow.matrix(), sigma_half_pow.matrix())?;
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::SpectralDomain(format!(
            "Tr(rho^a sigma^(1-a)) evaluated to {t:.3e}"
        )));
    }
    Ok(t.ln() / (a - 1.0))
}

fn von_neumann_relative(rho: &DensityMatrix, sigma: &PositiveMatrix) -> Result<f64> {
    // Tr rho log rho restricted to the support, minus Tr rho log sigma.
    let plogp: f64 = rho
        .eig()
        .eigenvalues()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum();
    let log_sigma = matrix_fn_with_eig(
        sigma.eig(),
        &SpectralFunction::Log,
        crate::spectral::default_pd_tol(sigma.hermitian()),
    )?;
    let cross = trace_product(&[rho.matrix(), log_sigma.matrix()])?.re;
    Ok(plogp - cross)
}

/// Sandwiched divergence
/// `(1/(alpha-1)) log Tr (sigma^{(1-alpha)/(2 alpha)} rho sigma^{(1-alpha)/(2 alpha)})^alpha`,
/// with the half-exponent on each side so commuting pairs reduce to the plain
/// relative entropy.
pub fn sandwiched_renyi(
    rho: &DensityMatrix,
    sigma: &PositiveMatrix,
    alpha: AlphaParam,
) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    if alpha.is_infinite() {
        return Err(Error::AlphaInfinite);
    }
    if alpha.routes_to_one() {
        return von_neumann_relative(rho, sigma);
    }
    if alpha.is_zero() {
        return Err(Error::InvalidAlpha(
            "sandwiched divergence needs alpha > 0".into(),
        ));
    }
    let a = alpha.value();
    let c = (1.0 - a) / (2.0 * a);
    let side = sigma.eig().apply_spectrum(|s| s.powf(c));
    let inner = side
        .matrix()
        .matmul(rho.matrix())?
        .matmul(side.matrix())?;
    let inner = HermitianMatrix::symmetrize(inner);
    let inner_eig = eig_hermitian(&inner)?;
    let t: f64 = inner_eig
        .eigenvalues()
        .iter()
        .filter(|&&m| m > 0.0)
        .map(|&m| m.powf(a))
        .sum();
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::SpectralDomain(format!(
            "sandwiched trace evaluated to {t:.3e}"
        )));
    }
    Ok(t.ln() / (a - 1.0))
}

/// Lieb functional `Tr K* A^q K B^r`; jointly concave in `(A, B)` on the
/// positive cone for admissible exponents. Evaluated as `||A^{q/2} K
/// B^{r/2}||_F^2`, which is real and nonnegative by construction.
pub fn lieb_trace(probe: &LiebProbe, a: &PositiveMatrix, b: &PositiveMatrix) -> Result<f64> {
    let n = probe.k.dim();
    if a.dim() != n {
        return Err(Error::DimensionMismatch(n, a.dim()));
    }
    if b.dim() != n {
        return Err(Error::DimensionMismatch(n, b.dim()));
    }
    let (q, r) = probe.exponents();
    let a_half = a.eig().apply_spectrum(|l| l.powf(0.5 * q));
    let b_half = b.eig().apply_spectrum(|l| l.powf(0.5 * r));
    let m = a_half
        .matrix()
        .matmul(&probe.k)?
        .matmul(b_half.matrix())?;
    Ok(m.entries().iter().map(|z| z.norm_sqr()).sum())
}
