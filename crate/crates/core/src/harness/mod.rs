//! Registry-driven randomized verification.
//!
//! Every check normalizes its claim to a margin with "margin >= 0 means the
//! property holds"; a trial fails when its margin drops below `-tol`. All
//! randomness flows through per-trial substreams of the config seed, and
//! aggregation is order-independent, so parallel and serial runs produce the
//! same report.

mod checks;

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::entropy::AlphaParam;
use crate::error::{Error, Result};

/// Margin recorded for a trial whose evaluation itself errored. Large and
/// finite so reports stay valid JSON.
pub(crate) const ERROR_MARGIN: f64 = -1e300;

/// Sweep configuration shared by all checks.
#[derive(Debug, Clone)]
pub struct TrialConfig {
    pub seed: u64,
    pub trials: usize,
    pub dims: Vec<usize>,
    pub alphas: Vec<AlphaParam>,
    pub betas: Vec<f64>,
    /// Violation tolerance: a trial fails when its margin < -tol.
    pub tol: f64,
}

impl Default for TrialConfig {
    fn default() -> Self {
        let alphas = [0.0, 0.25, 0.5, 0.9, 1.0, 1.1, 2.0, 5.0]
            .iter()
            .map(|&v| AlphaParam::new(v).expect("valid alpha"))
            .chain(std::iter::once(AlphaParam::infinity()))
            .collect();
        Self {
            seed: 42,
            trials: 1000,
            dims: vec![2, 3, 4, 8],
            alphas,
            betas: vec![-2.0, -1.0, 0.5, 1.0, 2.0, 5.0],
            tol: 1e-9,
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::InvalidConfig("trials must be >= 1".into()));
        }
        if self.dims.is_empty() {
            return Err(Error::InvalidConfig("dims must be nonempty".into()));
        }
        if self.dims.iter().any(|&n| n == 0) {
            return Err(Error::InvalidConfig("dims must be >= 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig("tol must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome of one registered check.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub name: String,
    pub trials_run: usize,
    pub failures: usize,
    /// Most negative margin observed across trials.
    pub worst_gap: f64,
    /// Serialized inputs of the worst trial; present whenever failures > 0.
    pub witness: Option<Value>,
    /// Wall time; excluded from serialized output so reports stay
    /// byte-identical across runs and thread counts.
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Suite-level outcome.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub pass: bool,
    pub checks: usize,
    pub failed_checks: usize,
    #[serde(skip)]
    pub total_elapsed: Duration,
}

pub(crate) struct Trial {
    pub margin: f64,
    pub witness: Option<Value>,
}

type CheckFn = fn(&TrialConfig, &str, u64, bool) -> Result<Trial>;

const REGISTRY: &[(&str, CheckFn)] = &[
    ("entropy_bounds", checks::entropy_bounds),
    ("entropy_monotone_alpha", checks::entropy_monotone_alpha),
    ("S_concave", checks::s_concave),
    ("lieb_concavity", checks::lieb_concavity),
    ("D_joint_convex", checks::d_joint_convex),
    ("D_lower_bound", checks::d_lower_bound),
    ("unitary_invariance", checks::unitary_invariance),
    ("pb_inequality", checks::pb_inequality),
    ("pb_corollary", checks::pb_corollary),
    ("free_energy_is_divergence", checks::free_energy_is_divergence),
    ("alpha_derivative_identity", checks::alpha_derivative_identity),
    ("energy_monotone_beta", checks::energy_monotone_beta),
    ("energy_beta_limits", checks::energy_beta_limits),
    ("logZ_concavity", checks::log_z_concavity),
    ("gibbs_local_min", checks::gibbs_local_min),
    ("schrodinger", checks::schrodinger),
    ("det_inequality", checks::det_inequality),
    ("lemma_split", checks::lemma_split),
    ("hadamard_chain", checks::hadamard_chain),
    ("alpha_shift_rules", checks::alpha_shift_rules),
    ("alpha_variance_limit", checks::alpha_variance_limit),
    ("sandwiched_reduction", checks::sandwiched_reduction),
    ("alt_energy_comparison", checks::alt_energy_comparison),
];

/// Names of all registered checks, in suite order.
pub fn check_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|(name, _)| *name).collect()
}

fn lookup(name: &str) -> Result<CheckFn> {
    REGISTRY
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, f)| *f)
        .ok_or_else(|| Error::UnknownCheck(name.to_string()))
}

/// Run one registered check. Deterministic for fixed `(name, config)`
/// regardless of execution parallelism: trials are keyed by index and the
/// aggregation (min margin, counts) is order-independent.
pub fn run_check(name: &str, config: &TrialConfig) -> Result<PropertyReport> {
    config.validate()?;
    let f = lookup(name)?;
    Ok(run_check_inner(name, config, f))
}

fn run_check_inner(name: &str, config: &TrialConfig, f: CheckFn) -> PropertyReport {
    let start = Instant::now();
    let margins: Vec<f64> = (0..config.trials)
        .into_par_iter()
        .map(|t| match f(config, name, t as u64, false) {
            Ok(trial) => trial.margin,
            Err(_) => ERROR_MARGIN,
        })
        .collect();

    let mut worst_gap = f64::MAX;
    let mut worst_idx = 0usize;
    for (i, &m) in margins.iter().enumerate() {
        if m < worst_gap {
            worst_gap = m;
            worst_idx = i;
        }
    }
    let failures = margins.iter().filter(|&&m| m < -config.tol).count();

    // Regenerate the worst trial from its substream to capture a witness.
    let witness = if failures > 0 {
        match f(config, name, worst_idx as u64, true) {
            Ok(trial) => Some(json!({
                "trial": worst_idx,
                "margin": worst_gap,
                "inputs": trial.witness.unwrap_or(Value::Null),
            })),
            Err(e) => Some(json!({
                "trial": worst_idx,
                "margin": worst_gap,
                "error": e.to_string(),
            })),
        }
    } else {
        None
    };

    PropertyReport {
        name: name.to_string(),
        trials_run: config.trials,
        failures,
        worst_gap,
        witness,
        elapsed: start.elapsed(),
    }
}

/// Run every registered check. Individual check errors are captured as
/// failed reports rather than thrown; only config validation can error.
pub fn run_suite(config: &TrialConfig) -> Result<(Vec<PropertyReport>, SuiteSummary)> {
    config.validate()?;
    let start = Instant::now();
    let reports: Vec<PropertyReport> = REGISTRY
        .iter()
        .map(|(name, f)| run_check_inner(name, config, *f))
        .collect();
    let failed_checks = reports.iter().filter(|r| r.failures > 0).count();
    let summary = SuiteSummary {
        pass: failed_checks == 0,
        checks: reports.len(),
        failed_checks,
        total_elapsed: start.elapsed(),
    };
    Ok((reports, summary))
}

/// Sensitivity probe: the Peierls-Bogoliubov predicate with its bound
/// tightened by +0.01. A healthy harness must report failures here; a clean
/// pass would mean the real check is vacuous.
pub fn pb_sensitivity_probe(config: &TrialConfig) -> Result<PropertyReport> {
    config.validate()?;
    Ok(run_check_inner(
        "pb_inequality",
        config,
        checks::pb_inequality_tightened,
    ))
}
