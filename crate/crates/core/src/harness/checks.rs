//! The registered property checks.
//!
//! Each check samples its inputs from the trial's substream, evaluates one
//! or more sub-predicates, and returns the minimum margin. Sub-predicates of
//! equality claims contribute `tol_eq - |difference|`.

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde_json::{json, Map, Value};

use crate::eigen::eig_hermitian;
use crate::entropy::{
    lieb_trace, renyi_entropy, renyi_relative, sandwiched_renyi, AlphaParam, LiebProbe,
};
use crate::error::Result;
use crate::matrix::{trace_product, ComplexMatrix, HermitianMatrix};
use crate::rng::substream;
use crate::states::{
    density_from_matrix, gibbs_state, ginibre, ginibre_density, gue_hermitian, haar_unitary,
    project_to_density, DensityMatrix, PositiveMatrix,
};
use crate::thermo::{
    alpha_derivative, alpha_expectation, equilibrium_energy, free_energy, log_partition,
    log_trace_exp_pair, log_z_curvature, ThermoParams,
};
use crate::uncertainty::{
    alpha_variance, build_report, det_gaps, lemma_split_check, moments, schrodinger_gap,
    ObservableSet,
};

use super::{Trial, TrialConfig};

/// Per-trial context: substream, cyclic grid selection, witness capture.
struct Ctx<'a> {
    cfg: &'a TrialConfig,
    rng: ChaCha12Rng,
    trial: u64,
    capture: bool,
    witness: Map<String, Value>,
    margin: f64,
}

impl<'a> Ctx<'a> {
    fn new(cfg: &'a TrialConfig, name: &str, trial: u64, capture: bool) -> Self {
        Self {
            cfg,
            rng: substream(cfg.seed, name, trial),
            trial,
            capture,
            witness: Map::new(),
            margin: f64::MAX,
        }
    }

    fn dim(&self) -> usize {
        self.cfg.dims[(self.trial as usize) % self.cfg.dims.len()]
    }

    /// Smallest even dimension >= 2 from the configured grid, cycling over
    /// the even entries when there are several.
    fn even_dim(&self) -> usize {
        let evens: Vec<usize> = self.cfg.dims.iter().copied().filter(|n| n % 2 == 0).collect();
        if evens.is_empty() {
            2
        } else {
            evens[(self.trial as usize) % evens.len()]
        }
    }

    fn pick<T: Copy>(&self, grid: &[T]) -> Option<T> {
        if grid.is_empty() {
            None
        } else {
            Some(grid[(self.trial as usize) % grid.len()])
        }
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.random::<f64>()
    }

    fn rho(&mut self, n: usize) -> Result<DensityMatrix> {
        ginibre_density(&mut self.rng, n)
    }

    fn herm(&mut self, n: usize) -> HermitianMatrix {
        gue_hermitian(&mut self.rng, n, 1.0)
    }

    /// Well-conditioned positive operator with a varying trace scale.
    fn pos(&mut self, n: usize) -> Result<PositiveMatrix> {
        let g = ginibre(&mut self.rng, n);
        let wishart = g.matmul(&g.adjoint())?.scale_re(1.0 / n as f64);
        let floored = HermitianMatrix::symmetrize(wishart).add_scaled_identity(0.01);
        let scale = self.uniform(-1.0, 1.0).exp();
        PositiveMatrix::new(floored.scale_re(scale))
    }

    fn note(&mut self, key: &str, value: Value) {
        if self.capture {
            self.witness.insert(key.to_string(), value);
        }
    }

    fn note_matrix(&mut self, key: &str, m: &ComplexMatrix) {
        if self.capture {
            let rows: Vec<Value> = (0..m.dim())
                .map(|i| {
                    Value::Array(
                        (0..m.dim())
                            .map(|j| json!([m[(i, j)].re, m[(i, j)].im]))
                            .collect(),
                    )
                })
                .collect();
            self.witness.insert(key.to_string(), Value::Array(rows));
        }
    }

    fn require(&mut self, margin: f64) {
        self.margin = self.margin.min(margin);
    }

    /// Equality claim `|difference| <= tol_eq`.
    fn require_eq(&mut self, difference: f64, tol_eq: f64) {
        self.require(tol_eq - difference.abs());
    }

    fn finish(self) -> Trial {
        Trial {
            margin: self.margin,
            witness: if self.capture {
                Some(Value::Object(self.witness))
            } else {
                None
            },
        }
    }
}

fn alphas_all(cfg: &TrialConfig) -> Vec<AlphaParam> {
    cfg.alphas.clone()
}

fn alphas_finite(cfg: &TrialConfig) -> Vec<AlphaParam> {
    cfg.alphas.iter().copied().filter(|a| !a.is_infinite()).collect()
}

fn alphas_finite_not_one(cfg: &TrialConfig) -> Vec<AlphaParam> {
    alphas_finite(cfg)
        .into_iter()
        .filter(|a| !a.routes_to_one())
        .collect()
}

fn alphas_unit_interval(cfg: &TrialConfig) -> Vec<AlphaParam> {
    alphas_finite(cfg)
        .into_iter()
        .filter(|a| a.value() > 0.0 && a.value() < 1.0 && !a.routes_to_one())
        .collect()
}

fn betas_nonzero(cfg: &TrialConfig) -> Vec<f64> {
    cfg.betas.iter().copied().filter(|&b| b != 0.0).collect()
}

const MIX_WEIGHTS: [f64; 3] = [0.25, 0.5, 0.75];

fn mix_density(p: f64, a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    let mixed = a
        .hermitian()
        .scale_re(p)
        .add(&b.hermitian().scale_re(1.0 - p))?;
    density_from_matrix(&mixed)
}

fn mix_positive(p: f64, a: &PositiveMatrix, b: &PositiveMatrix) -> Result<PositiveMatrix> {
    let mixed = a
        .hermitian()
        .scale_re(p)
        .add(&b.hermitian().scale_re(1.0 - p))?;
    PositiveMatrix::new(mixed)
}

fn conjugate_hermitian(u: &ComplexMatrix, h: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(HermitianMatrix::symmetrize(
        u.matmul(h.matrix())?.matmul(&u.adjoint())?,
    ))
}

/// Half the trace norm of the Hermitian difference `a - b`.
fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    let diff = a.hermitian().sub(b.hermitian())?;
    let eig = eig_hermitian(&diff)?;
    Ok(0.5 * eig.eigenvalues().iter().map(|l| l.abs()).sum::<f64>())
}

// --- entropy structure ---------------------------------------------------

pub(super) fn entropy_bounds(cfg: &TrialConfig, name: &str, t: u64, capture: bool) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    let n = ctx.dim();
    let rho = ctx.rho(n)?;
    let log_n = (n as f64).ln();
    for a in alphas_all(cfg) {
        let s = renyi_entropy(&rho, a);
        ctx.require(s + 1e-10);
        ctx.require(log_n + 1e-10 - s);
    }
    ctx.note("dim", json!(n));
    ctx.note_matrix("rho", rho.matrix());
    Ok(ctx.finish())
}

pub(super) fn entropy_monotone_alpha(
    cfg: &TrialConfig,
    name: &str,
    t: u64,
    capture: bool,
) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    let n = ctx.dim();
    let rho = ctx.rho(n)?;
    let mut grid = alphas_all(cfg);
    grid.sort_by(|a, b| a.value().partial_cmp(&b.value()).expect("no NaN alphas"));
    let entropies: Vec<f64> = grid.iter().map(|&a| renyi_entropy(&rho, a)).collect();
    for w in entropies.windows(2) {
        // Decreasing in alpha: S_alpha >= S_alpha' for alpha < alpha'.
        ctx.require(w[0] - w[1] + 1e-9);
    }
    ctx.note("dim", json!(n));
    ctx.note_matrix("rho", rho.matrix());
    Ok(ctx.finish())
}

pub(super) fn s_concave(cfg: &TrialConfig, name: &str, t: u64, capture: bool) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    let n = ctx.dim();
    let rho1 = ctx.rho(n)?;
    let rho2 = ctx.rho(n)?;
    let p = ctx.pick(&MIX_WEIGHTS).expect("constant grid");
    let mixed = mix_density(p, &rho1, &rho2)?;
    for a in alphas_unit_interval(cfg) {
        let gap =
            renyi_entropy(&mixed, a) - p * renyi_entropy(&rho1, a) - (1.0 - p) * renyi_entropy(&rho2, a);
        ctx.require(gap);
    }
    ctx.note("dim", json!(n));
    ctx.note("p", json!(p));
    ctx.note_matrix("rho1", rho1.matrix());
    ctx.note_matrix("rho2", rho2.matrix());
    Ok(ctx.finish())
}

pub(super) fn lieb_concavity(cfg: &TrialConfig, name: &str, t: u64, capture: bool) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    let n = ctx.dim();
    let a1 = ctx.pos(n)?;
    let a2 = ctx.pos(n)?;
    let b1 = ctx.pos(n)?;
    let b2 = ctx.pos(n)?;
    let lam = ctx.pick(&MIX_WEIGHTS).expect("constant grid");
    let a_mix = mix_positive(lam, &a1, &a2)?;
    let b_mix = mix_positive(lam, &b1, &b2)?;

    let mut probes = Vec::new();
    // The exponent line behind joint convexity: q = alpha, r = 1 - alpha, K = I.
    if let Some(alpha) = ctx.pick(&alphas_unit_interval(cfg)) {
        probes.push(LiebProbe::new(
            ComplexMatrix::identity(n),
            alpha.value(),
            1.0 - alpha.value(),
        )?);
    }
    // General exponents and a random contraction.
    let q = ctx.uniform(0.0, 1.0);
    let r = ctx.uniform(0.0, 1.0 - q);
    let k = ginibre(&mut ctx.rng, n);
    probes.push(LiebProbe::new(k, q, r)?);

    for probe in &probes {
        let concave_gap = lieb_trace(probe, &a_mix, &b_mix)?
            - lam * lieb_trace(probe, &a1, &b1)?
            - (1.0 - lam) * lieb_trace(probe, &a2, &b2)?;
        ctx.require(concave_gap);
    }
    ctx.note("dim", json!(n));
    ctx.note("lambda", json!(lam));
    ctx.note_matrix("a1", a1.matrix());
    ctx.note_matrix("a2", a2.matrix());
    ctx.note_matrix("b1", b1.matrix());
    ctx.note_matrix("b2", b2.matrix());
    Ok(ctx.finish())
}

pub(super) fn d_joint_convex(cfg: &TrialConfig, name: &str, t: u64, capture: bool) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    let n = ctx.dim();
    let rho1 = ctx.rho(n)?;
    let rho2 = ctx.rho(n)?;
    let sigma1 = ctx.pos(n)?;
    let sigma2 = ctx.pos(n)?;
    let lam = ctx.pick(&MIX_WEIGHTS).expect("constant grid");
    let rho_mix = mix_density(lam, &rho1, &rho2)?;
    let sigma_mix = mix_positive(lam, &sigma1, &sigma2)?;
    for a in alphas_unit_interval(cfg) {
        let convex_gap = lam * renyi_relative(&rho1, &sigma1, a)?
            + (1.0 - lam) * renyi_relative(&rho2, &sigma2, a)?
            - renyi_relative(&rho_mix, &sigma_mix, a)?;
        ctx.require(convex_gap);
    }
    ctx.note("dim", json!(n));
    ctx.note("lambda", json!(lam));
    ctx.note_matrix("rho1", rho1.matrix());
    ctx.note_matrix("rho2", rho2.matrix());
    ctx.note_matrix("sigma1", sigma1.matrix());
    ctx.note_matrix("sigma2", sigma2.matrix());
    Ok(ctx.finish())
}

pub(super) fn d_lower_bound(cfg: &TrialConfig, name: &str, t: u64, capture: bool) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    let n = ctx.dim();
    let rho = ctx.rho(n)?;
    let sigma = ctx.pos(n)?;
    let log_tr_sigma = sigma.trace().ln();
    let Some(alpha) = ctx.pick(&alphas_finite(cfg)) else {
        return Ok(ctx.finish());
    };

    // Sweep: D_alpha(rho || sigma) + log Tr sigma >= 0.
    ctx.require(renyi_relative(&rho, &sigma, alpha)? + log_tr_sigma);

    // Equality witness rho = sigma / Tr sigma.
    let witness = density_from_matrix(&sigma.hermitian().scale_re(1.0 / sigma.trace()))?;
    ctx.require_eq(
        renyi_relative(&witness, &sigma, alpha)? + log_tr_sigma,
        1e-9,
    );

    // Strict growth away from the witness, except at alpha = 0 where the
    // bound is saturated by every full-rank state.
    if !alpha.is_zero() {
        let other = ctx.rho(n)?;
        let diff = other.hermitian().sub(witness.hermitian())?;
        let spread = trace_distance(&other, &witness)?;
        if spread >= 0.02 {
            let eps = 0.02 / spread;
            let perturbed =
                density_from_matrix(&witness.hermitian().add(&diff.scale_re(eps))?)?;
            debug_assert!((trace_distance(&perturbed, &witness)? - 0.02).abs() < 1e-9);
            ctx.require(renyi_relative(&perturbed, &sigma, alpha)? + log_tr_sigma - 1e-6);
        }
    }

    ctx.note("dim", json!(n));
    ctx.note("alpha", json!(alpha.value()));
    ctx.note_matrix("rho", rho.matrix());
    ctx.note_matrix("sigma", sigma.matrix());
    Ok(ctx.finish())
}

pub(super) fn unitary_invariance(
    cfg: &TrialConfig,
    name: &str,
    t: u64,
    capture: bool,
) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    let n = ctx.dim();
    let rho = ctx.rho(n)?;
    let sigma = ctx.pos(n)?;
    let u = haar_unitary(&mut ctx.rng, n);
    let rho_u = density_from_matrix(&conjugate_hermitian(&u, rho.hermitian())?)?;
    let sigma_u = PositiveMatrix::new(conjugate_hermitian(&u, sigma.hermitian())?)?;
    for a in alphas_finite(cfg) {
        let d = renyi_relative(&rho, &sigma, a)?;
        let d_u = renyi_relative(&rho_u, &sigma_u, a)?;
        ctx.require_eq(d - d_u, 1e-9 * (1.0 + d.abs()));
    }
    for a in alphas_all(cfg) {
        let s = renyi_entropy(&rho, a);
        let s_u = renyi_entropy(&rho_u, a);
        ctx.require_eq(s - s_u, 1e-9 * (1.0 + s.abs()));
    }
    ctx.note("dim", json!(n));
    ctx.note_matrix("rho", rho.matrix());
    ctx.note_matrix("sigma", sigma.matrix());
    ctx.note_matrix("u", &u);
    Ok(ctx.finish())
}

// --- variational thermodynamics ------------------------------------------

fn pb_margins(
    ctx: &mut Ctx<'_>,
    tighten: f64,
) -> Result<()> {
    let cfg = ctx.cfg;
    let n = ctx.dim();
    let rho = ctx.rho(n)?;
    let h = ctx.herm(n);
    let Some(alpha) = ctx.pick(&alphas_finite(cfg)) else {
        return Ok(());
    };
    let Some(beta) = ctx.pick(&betas_nonzero(cfg)) else {
        return Ok(());
    };
    let params = ThermoParams::new(alpha, beta)?;
    let log_z = log_partition(&h, beta)?;

    // beta F_{alpha,beta}(rho, H) + log Z_beta >= 0 ...
    let f = free_energy(&rho, &h, params)?;
    ctx.require(beta * f + log_z - tighten);

    // ... with equality exactly at the Gibbs state.
    let equilibrium = gibbs_state(&h, beta)?;
    let f0 = free_energy(&equilibrium, &h, params)?;
    ctx.require_eq(beta * f0 + log_z - tighten, 1e-9);

    ctx.note("dim", json!(n));
    ctx.note("alpha", json!(alpha.value()));
    ctx.note("beta", json!(beta));
    ctx.note_matrix("rho", rho.matrix());
    ctx.note_matrix("h", h.matrix());
    Ok(())
}

pub(super) fn pb_inequality(cfg: &TrialConfig, name: &str, t: u64, capture: bool) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    pb_margins(&mut ctx, 0.0)?;
    Ok(ctx.finish())
}

/// The deliberately corrupted variant backing the sensitivity probe.
pub(super) fn pb_inequality_tightened(
    cfg: &TrialConfig,
    name: &str,
    t: u64,
    capture: bool,
) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    pb_margins(&mut ctx, 0.01)?;
    Ok(ctx.finish())
}

pub(super) fn pb_corollary(cfg: &TrialConfig, name: &str, t: u64, capture: bool) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    let n = ctx.dim();
    let h = ctx.herm(n);
    let h0 = ctx.herm(n);
    let h_eig = eig_hermitian(&h)?;
    let h0_eig = eig_hermitian(&h0)?;
    let log_z_h = log_partition(&h, 1.0)?;
    let log_z_h0 = log_partition(&h0, 1.0)?;
    for alpha in alphas_finite_not_one(cfg) {
        let a = alpha.value();
        // (1/(a-1)) log[Tr e^{-a H0} e^{(a-1) H} / Tr e^{-H0}] >= -log(Z(H)/Z(H0))
        let lhs = (log_trace_exp_pair(&h0_eig, -a, &h_eig, a - 1.0)? - log_z_h0) / (a - 1.0);
        ctx.require(lhs + log_z_h - log_z_h0);
    }
    ctx.note("dim", json!(n));
    ctx.note_matrix("h", h.matrix());
    ctx.note_matrix("h0", h0.matrix());
    Ok(ctx.finish())
}

pub(super) fn free_energy_is_divergence(
    cfg: &TrialConfig,
    name: &str,
    t: u64,
    capture: bool,
) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    let n = ctx.dim();
    let rho = ctx.rho(n)?;
    let h = ctx.herm(n);
    let exp_minus_h = PositiveMatrix::new(
        eig_hermitian(&h)?.apply_spectrum(|l| (-l).exp()),
    )?;
    for alpha in alphas_finite(cfg) {
        let f = free_energy(&rho, &h, ThermoParams::new(alpha, 1.0)?)?;
        let d = renyi_relative(&rho, &exp_minus_h, alpha)?;
        ctx.require_eq(f - d, 1e-9 * (1.0 + f.abs()));
    }
    ctx.note("dim", json!(n));
    ctx.note_matrix("rho", rho.matrix());
    ctx.note_matrix("h", h.matrix());
    Ok(ctx.finish())
}

pub(super) fn alpha_derivative_identity(
    cfg: &TrialConfig,
    name: &str,
    t: u64,
    capture: bool,
) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    let n = ctx.dim();
    let h = ctx.herm(n);
    let psi = |b: f64| -log_partition(&h, b).expect("log partition is total");
    for alpha in alphas_finite_not_one(cfg) {
        for beta in betas_nonzero(cfg) {
            let closed = equilibrium_energy(&h, ThermoParams::new(alpha, beta)?)?;
            let secant = alpha_derivative(psi, alpha.value(), beta)?;
            ctx.require_eq(closed - secant, 1e-10);
        }
    }
    ctx.note("dim", json!(n));
    ctx.note_matrix("h", h.matrix());
    Ok(ctx.finish())
}

pub(super) fn energy_monotone_beta(
    cfg: &TrialConfig,
    name: &str,
    t: u64,
    capture: bool,
) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    let n = ctx.dim();
    let h = ctx.herm(n);
    let mut betas = betas_nonzero(cfg);
    betas.sort_by(|a, b| a.partial_cmp(b).expect("finite betas"));
    for alpha in alphas_all(cfg) {
        let energies: Vec<f64> = betas
            .iter()
            .map(|&b| equilibrium_energy(&h, ThermoParams::new(alpha, b).expect("finite")))
            .collect::<Result<_>>()?;
        for w in energies.windows(2) {
            ctx.require(w[0] - w[1] + 1e-9);
        }
    }
    ctx.note("dim", json!(n));
    ctx.note_matrix("h", h.matrix());
    Ok(ctx.finish())
}

pub(super) fn energy_beta_limits(
    cfg: &TrialConfig,
    name: &str,
    t: u64,
    capture: bool,
) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    let n = ctx.dim();
    // Spectrum with consecutive gaps >= 0.5, conjugated by a Haar basis.
    let mut eigs = Vec::with_capacity(n);
    let mut level = ctx.uniform(-2.0, 0.0);
    eigs.push(level);
    for _ in 1..n {
        level += 0.5 + ctx.uniform(0.0, 0.5);
        eigs.push(level);
    }
    let u = haar_unitary(&mut ctx.rng, n);
    let h = conjugate_hermitian(&u, &HermitianMatrix::from_real_diag(&eigs))?;
    let lambda_min = eigs[0];
    let lambda_max = eigs[n - 1];

    // alpha = 0 is excluded: its closed form carries a log(n)/beta term that
    // decays only algebraically, still ~1e-2 at beta = 200. Small positive
    // alpha needs alpha * beta * gap large enough that the subdominant
    // Boltzmann residual clears the 1e-8 assertion; 0.25 is plenty.
    for alpha in alphas_all(cfg)
        .into_iter()
        .filter(|a| a.is_infinite() || a.value() >= 0.25)
    {
        let cold = equilibrium_energy(&h, ThermoParams::new(alpha, 200.0)?)?;
        ctx.require_eq(cold - lambda_min, 1e-8);
        let hot = equilibrium_energy(&h, ThermoParams::new(alpha, -200.0)?)?;
        ctx.require_eq(hot - lambda_max, 1e-8);
    }
    ctx.note("dim", json!(n));
    ctx.note("spectrum", json!(eigs));
    Ok(ctx.finish())
}

pub(super) fn log_z_concavity(cfg: &TrialConfig, name: &str, t: u64, capture: bool) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    let n = ctx.dim();
    let h = ctx.herm(n);
    for beta in betas_nonzero(cfg) {
        ctx.require(log_z_curvature(&h, beta)? + 1e-10);
    }
    ctx.note("dim", json!(n));
    ctx.note_matrix("h", h.matrix());
    Ok(ctx.finish())
}

pub(super) fn gibbs_local_min(cfg: &TrialConfig, name: &str, t: u64, capture: bool) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    let n = ctx.dim();
    let h = ctx.herm(n);
    // The Gibbs state minimizes F for beta > 0 (for beta < 0 it maximizes;
    // that direction is covered by pb_inequality through beta F).
    let positive_betas: Vec<f64> = betas_nonzero(cfg).into_iter().filter(|&b| b > 0.0).collect();
    let Some(beta) = ctx.pick(&positive_betas) else {
        return Ok(ctx.finish());
    };
    let Some(alpha) = ctx.pick(&alphas_finite(cfg)) else {
        return Ok(ctx.finish());
    };
    let params = ThermoParams::new(alpha, beta)?;
    let equilibrium = gibbs_state(&h, beta)?;
    let f0 = free_energy(&equilibrium, &h, params)?;

    // Trace-preserving Hermitian perturbation, normalized, then projected
    // back onto the state space.
    let raw = ctx.herm(n);
    let traceless = raw.add_scaled_identity(-raw.trace_re() / n as f64);
    let direction = traceless.scale_re(1.0 / traceless.frobenius_norm().max(1e-12));
    let perturbed = project_to_density(
        &equilibrium.hermitian().add(&direction.scale_re(1e-3))?,
    )?;
    let f_perturbed = free_energy(&perturbed, &h, params)?;
    ctx.require(f_perturbed - f0 + 1e-12);

    ctx.note("dim", json!(n));
    ctx.note("alpha", json!(alpha.value()));
    ctx.note("beta", json!(beta));
    ctx.note_matrix("h", h.matrix());
    ctx.note_matrix("direction", direction.matrix());
    Ok(ctx.finish())
}

// --- uncertainty ----------------------------------------------------------

pub(super) fn schrodinger(cfg: &TrialConfig, name: &str, t: u64, capture: bool) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    let n = ctx.dim();
    let rho = ctx.rho(n)?;
    let a = ctx.herm(n);
    let b = ctx.herm(n);
    let gap = schrodinger_gap(&rho, &a, &b)?;
    ctx.require(gap.gap);
    // Robertson is the weaker bound: its slack dominates.
    ctx.require(gap.robertson_gap - gap.gap + 1e-12);

    // Affine multiples saturate the bound.
    let a_unit = a.scale_re(1.0 / a.frobenius_norm().max(1.0));
    let c = ctx.uniform(-2.0, 2.0);
    let d = ctx.uniform(-2.0, 2.0);
    let b_affine = a_unit.scale_re(c).add_scaled_identity(d);
    let saturated = schrodinger_gap(&rho, &a_unit, &b_affine)?;
    let (_, va) = moments(&rho, &a_unit)?;
    let (_, vb) = moments(&rho, &b_affine)?;
    ctx.require_eq(saturated.gap, 1e-10 * (va * vb + 1.0));

    ctx.note("dim", json!(n));
    ctx.note_matrix("rho", rho.matrix());
    ctx.note_matrix("a", a.matrix());
    ctx.note_matrix("b", b.matrix());
    Ok(ctx.finish())
}

fn observable_set(ctx: &mut Ctx<'_>, m: usize) -> Result<ObservableSet> {
    let n = ctx.dim().max(2);
    let rho = ctx.rho(n)?;
    let observables: Vec<HermitianMatrix> = (0..m).map(|_| ctx.herm(n)).collect();
    ObservableSet::new(rho, observables)
}

pub(super) fn det_inequality(cfg: &TrialConfig, name: &str, t: u64, capture: bool) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    let m = ctx.pick(&[2usize, 4]).expect("constant grid");
    let set = observable_set(&mut ctx, m)?;
    let report = build_report(&set)?;
    let gaps = det_gaps(&set)?;

    let tau_herm = HermitianMatrix::new(report.tau.clone())?;
    let min_eig_tau = eig_hermitian(&tau_herm)?.min_eigenvalue();
    // tau is PSD up to rounding for every sampled set.
    ctx.require(min_eig_tau + 1e-10);
    if min_eig_tau > 1e-6 {
        // Strict version of the determinant inequality.
        ctx.require(gaps.det_gap - 1e-12);
    } else {
        ctx.require(gaps.det_gap);
    }

    ctx.note("m", json!(m));
    ctx.note("dim", json!(set.rho().dim()));
    ctx.note_matrix("rho", set.rho().matrix());
    for (i, x) in set.observables().iter().enumerate() {
        ctx.note_matrix(&format!("x{i}"), x.matrix());
    }
    Ok(ctx.finish())
}

pub(super) fn lemma_split(cfg: &TrialConfig, name: &str, t: u64, capture: bool) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    let n = ctx.even_dim();
    let g = ginibre(&mut ctx.rng, n);
    let c = HermitianMatrix::symmetrize(g.matmul(&g.adjoint())?.scale_re(1.0 / n as f64))
        .add_scaled_identity(0.01);
    let split = lemma_split_check(c.matrix())?;
    ctx.require(split.det_a - split.det_ib);
    for l in &split.split_spectrum {
        ctx.require(1.0 + 1e-9 - l.abs());
    }
    ctx.note("dim", json!(n));
    ctx.note_matrix("c", c.matrix());
    Ok(ctx.finish())
}

pub(super) fn hadamard_chain(cfg: &TrialConfig, name: &str, t: u64, capture: bool) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    let m = ctx.pick(&[2usize, 4]).expect("constant grid");
    let set = observable_set(&mut ctx, m)?;
    let gaps = det_gaps(&set)?;
    // prod var_j >= det cov >= det(i delta).
    ctx.require(gaps.hadamard_gap - gaps.det_gap + 1e-9);
    ctx.require(gaps.det_gap + 1e-9);
    ctx.note("m", json!(m));
    ctx.note("dim", json!(set.rho().dim()));
    ctx.note_matrix("rho", set.rho().matrix());
    Ok(ctx.finish())
}

pub(super) fn alpha_shift_rules(
    cfg: &TrialConfig,
    name: &str,
    t: u64,
    capture: bool,
) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    let n = ctx.dim();
    let rho = ctx.rho(n)?;
    let a = ctx.herm(n);
    let gamma = ctx.uniform(-5.0, 5.0);
    let shifted = a.add_scaled_identity(gamma);
    let scaled_identity = HermitianMatrix::identity(n).scale_re(gamma);
    for alpha in alphas_finite(cfg) {
        let base = alpha_expectation(&rho, &a, alpha)?;
        let moved = alpha_expectation(&rho, &shifted, alpha)?;
        ctx.require_eq(moved - base - gamma, 1e-9 * (1.0 + base.abs()));
        // <gamma I>_alpha = gamma.
        let constant = alpha_expectation(&rho, &scaled_identity, alpha)?;
        ctx.require_eq(constant - gamma, 1e-9 * (1.0 + gamma.abs()));
        // The alpha-variance is shift-covariant.
        let var_base = alpha_variance(&rho, &a, alpha)?;
        let var_moved = alpha_variance(&rho, &shifted, alpha)?;
        ctx.require_eq(var_moved - var_base, 1e-9 * (1.0 + var_base.abs()));
    }
    ctx.note("dim", json!(n));
    ctx.note("gamma", json!(gamma));
    ctx.note_matrix("rho", rho.matrix());
    ctx.note_matrix("a", a.matrix());
    Ok(ctx.finish())
}

pub(super) fn alpha_variance_limit(
    cfg: &TrialConfig,
    name: &str,
    t: u64,
    capture: bool,
) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    let n = ctx.dim();
    let rho = ctx.rho(n)?;
    let a = ctx.herm(n);
    let (_, var) = moments(&rho, &a)?;
    for side in [1.0 + 1e-4, 1.0 - 1e-4] {
        let near = alpha_variance(&rho, &a, AlphaParam::new(side)?)?;
        ctx.require_eq(near - var, 1e-3);
    }
    ctx.note("dim", json!(n));
    ctx.note_matrix("rho", rho.matrix());
    ctx.note_matrix("a", a.matrix());
    Ok(ctx.finish())
}

pub(super) fn sandwiched_reduction(
    cfg: &TrialConfig,
    name: &str,
    t: u64,
    capture: bool,
) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    let n = ctx.dim();
    // Commuting pair: common Haar eigenbasis, independent spectra. The state
    // spectrum is floored away from zero to keep the reduction well inside
    // the 1e-10 comparison.
    let u = haar_unitary(&mut ctx.rng, n);
    let mut probs: Vec<f64> = (0..n).map(|_| -ctx.rng.random::<f64>().ln()).collect();
    let total: f64 = probs.iter().sum();
    for p in probs.iter_mut() {
        *p = 0.85 * (*p / total) + 0.15 / n as f64;
    }
    let sigmas: Vec<f64> = (0..n).map(|_| ctx.uniform(-1.6, 1.6).exp()).collect();
    let rho = density_from_matrix(&conjugate_hermitian(
        &u,
        &HermitianMatrix::from_real_diag(&probs),
    )?)?;
    let sigma = PositiveMatrix::new(conjugate_hermitian(
        &u,
        &HermitianMatrix::from_real_diag(&sigmas),
    )?)?;
    for alpha in alphas_finite_not_one(cfg)
        .into_iter()
        .filter(|a| !a.is_zero())
    {
        let plain = renyi_relative(&rho, &sigma, alpha)?;
        let sandwiched = sandwiched_renyi(&rho, &sigma, alpha)?;
        ctx.require_eq(sandwiched - plain, 1e-10);
    }
    ctx.note("dim", json!(n));
    ctx.note("probs", json!(probs));
    ctx.note("sigmas", json!(sigmas));
    Ok(ctx.finish())
}

/// Records how far the adopted internal energy sits from the rejected
/// `Tr rho^alpha H / Tr rho^alpha` average; asserts nothing.
pub(super) fn alt_energy_comparison(
    cfg: &TrialConfig,
    name: &str,
    t: u64,
    capture: bool,
) -> Result<Trial> {
    let mut ctx = Ctx::new(cfg, name, t, capture);
    let n = ctx.dim();
    let rho = ctx.rho(n)?;
    let h = ctx.herm(n);
    let mut observed = 0.0f64;
    for alpha in alphas_finite(cfg) {
        let ours = alpha_expectation(&rho, &h, alpha)?;
        let a = alpha.value();
        let rho_pow = rho
            .eig()
            .apply_spectrum(|p| if p > 0.0 { p.powf(a) } else { 0.0 });
        let weight: f64 = rho_pow.trace_re();
        let alt = trace_product(&[rho_pow.matrix(), h.matrix()])?.re / weight;
        observed = observed.max((ours - alt).abs());
    }
    // Margin is the recorded divergence itself: nonnegative, never failing.
    ctx.require(observed);
    ctx.note("dim", json!(n));
    ctx.note("max_divergence", json!(observed));
    Ok(ctx.finish())
}
