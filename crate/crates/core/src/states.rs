//! Quantum states and observables: density matrices, strictly positive
//! operators, Gibbs equilibrium states, and the random ensembles the
//! verification harness draws from.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::eigen::{eig_hermitian, EigenDecomposition};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::rng::substream;
use crate::spectral::default_pd_tol;
use crate::tol;

/// Strictly positive definite Hermitian operator (the sigma arguments of the
/// relative entropies). Validation eigendecomposes once and keeps the result.
#[derive(Debug, Clone)]
pub struct PositiveMatrix {
    base: HermitianMatrix,
    eig: EigenDecomposition,
}

impl PositiveMatrix {
    pub fn new(base: HermitianMatrix) -> Result<Self> {
        let eig = eig_hermitian(&base)?;
        let min = eig.min_eigenvalue();
        if min <= default_pd_tol(&base) {
            return Err(Error::SingularSigma(min));
        }
        Ok(Self { base, eig })
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.base
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.base.matrix()
    }

    pub fn eig(&self) -> &EigenDecomposition {
        &self.eig
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn trace(&self) -> f64 {
        self.base.trace_re()
    }
}

/// Density matrix: positive semidefinite, unit trace. Construction clips
/// eigenvalue noise at zero and renormalizes, so the stored spectrum is
/// exactly the clipped, normalized one.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    base: HermitianMatrix,
    eig: EigenDecomposition,
    purity_hint: Option<bool>,
}

impl DensityMatrix {
    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.base
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.base.matrix()
    }

    /// Eigendecomposition fixed at construction; eigenvalues are the
    /// clipped, renormalized populations (ascending).
    pub fn eig(&self) -> &EigenDecomposition {
        &self.eig
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn purity_hint(&self) -> Option<bool> {
        self.purity_hint
    }

    /// Populations above the rank cutoff.
    pub fn rank(&self) -> usize {
        self.eig
            .eigenvalues()
            .iter()
            .filter(|&&p| p > tol::RANK_TOL)
            .count()
    }

    fn from_clipped_spectrum(
        eigenvalues: Vec<f64>,
        eigenvectors: ComplexMatrix,
        purity_hint: Option<bool>,
    ) -> Self {
        let eig = EigenDecomposition::from_parts_sorted(eigenvalues, eigenvectors);
        let base = eig.reconstruct();
        Self {
            base,
            eig,
            purity_hint,
        }
    }
}

/// Validate and repair a Hermitian matrix into a state.
///
/// Eigenvalues in `[-1e-6, 0)` count as numerical noise and clip to zero;
/// anything more negative is rejected rather than silently repaired, as is a
/// non-positive trace.
pub fn density_from_matrix(a: &HermitianMatrix) -> Result<DensityMatrix> {
    let eig = eig_hermitian(a)?;
    let min = eig.min_eigenvalue();
    if min < tol::NEG_EIG_REPAIR_LIMIT {
        return Err(Error::NotPositive(min));
    }
    let clipped: Vec<f64> = eig.eigenvalues().iter().map(|&l| l.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if total <= 0.0 {
        return Err(Error::ZeroTrace(total));
    }
    let populations: Vec<f64> = clipped.iter().map(|&l| l / total).collect();
    Ok(DensityMatrix::from_clipped_spectrum(
        populations,
        eig.eigenvectors().clone(),
        None,
    ))
}

/// Clip *any* negative part and renormalize. Projection helper for
/// perturbation sweeps, where excursions below the repair threshold are
/// intentional.
pub fn project_to_density(a: &HermitianMatrix) -> Result<DensityMatrix> {
    let eig = eig_hermitian(a)?;
    let clipped: Vec<f64> = eig.eigenvalues().iter().map(|&l| l.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if total <= 0.0 {
        return Err(Error::ZeroTrace(total));
    }
    let populations: Vec<f64> = clipped.iter().map(|&l| l / total).collect();
    Ok(DensityMatrix::from_clipped_spectrum(
        populations,
        eig.eigenvectors().clone(),
        None,
    ))
}

/// Rank-one state `v v* / ||v||^2`. The spectrum `(0, ..., 0, 1)` is built
/// exactly by completing `v` to an orthonormal basis, so pure states carry
/// no eigenvalue dust.
pub fn pure_state(v: &[Complex64]) -> Result<DensityMatrix> {
    let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if norm_sq <= 0.0 || !norm_sq.is_finite() {
        return Err(Error::ZeroVector);
    }
    let n = v.len();
    let norm = norm_sq.sqrt();
    let unit: Vec<Complex64> = v.iter().map(|z| z / norm).collect();

    // Complete to an orthonormal basis: seed with standard basis vectors
    // (dropping the one most parallel to v) and run Gram-Schmidt with a
    // re-orthogonalization pass.
    let skip = (0..n)
        .max_by(|&i, &j| unit[i].norm().partial_cmp(&unit[j].norm()).expect("finite"))
        .expect("n >= 1");
    let mut basis: Vec<Vec<Complex64>> = vec![unit.clone()];
    for j in (0..n).filter(|&j| j != skip) {
        let mut col: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
            .collect();
        for _pass in 0..2 {
            for prev in &basis {
                let proj: Complex64 = prev.iter().zip(&col).map(|(p, c)| p.conj() * c).sum();
                for (c, p) in col.iter_mut().zip(prev) {
                    *c -= proj * p;
                }
            }
        }
        let col_norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in col.iter_mut() {
            *z /= col_norm;
        }
        basis.push(col);
    }

    // Ascending eigenvalue order: the kernel first, v last.
    let mut populations = vec![0.0; n];
    populations[n - 1] = 1.0;
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| {
        let col = if j == n - 1 { 0 } else { j + 1 };
        basis[col][i]
    });
    Ok(DensityMatrix::from_clipped_spectrum(
        populations,
        eigenvectors,
        Some(true),
    ))
}

/// `I / n`.
pub fn maximally_mixed(n: usize) -> DensityMatrix {
    let populations = vec![1.0 / n as f64; n];
    let mut rho = DensityMatrix::from_clipped_spectrum(
        populations,
        ComplexMatrix::identity(n),
        Some(n == 1),
    );
    rho.purity_hint = Some(n == 1);
    rho
}

/// Gibbs state `e^{-beta H} / Tr e^{-beta H}`, computed on the shifted
/// spectrum so the largest Boltzmann weight is exactly 1. Negative beta is
/// meaningful on finite systems and accepted.
pub fn gibbs_state(h: &HermitianMatrix, beta: f64) -> Result<DensityMatrix> {
    if !beta.is_finite() {
        return Err(Error::BetaRange("beta must be finite".into()));
    }
    let eig = eig_hermitian(h)?;
    let spread = eig.max_eigenvalue() - eig.min_eigenvalue();
    if beta.abs() * spread > tol::BETA_EXP_GUARD {
        return Err(Error::BetaRange(format!(
            "|beta| * spectral spread = {:.3e} exceeds {:.0}; the state would be numerically rank-deficient",
            beta.abs() * spread,
            tol::BETA_EXP_GUARD
        )));
    }
    let shift = if beta >= 0.0 {
        eig.min_eigenvalue()
    } else {
        eig.max_eigenvalue()
    };
    let weights: Vec<f64> = eig
        .eigenvalues()
        .iter()
        .map(|&l| (-beta * (l - shift)).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    let populations: Vec<f64> = weights.iter().map(|&w| w / z).collect();

    // Re-sort: populations are decreasing in the spectrum for beta > 0.
    let n = populations.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| populations[i].partial_cmp(&populations[j]).expect("finite"));
    let sorted: Vec<f64> = order.iter().map(|&i| populations[i]).collect();
    let u = eig.eigenvectors();
    let vecs = ComplexMatrix::from_fn(n, |i, j| u[(i, order[j])]);
    Ok(DensityMatrix::from_clipped_spectrum(
        sorted,
        vecs,
        Some(n == 1),
    ))
}

/// Random ensembles with deterministic seeding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    /// `G G* / Tr(G G*)` for Ginibre `G` (full rank almost surely).
    GinibreDensity,
    /// `(M + M*) / 2`, scaled.
    GueHermitian,
    /// QR of a Ginibre sample with the positive-diagonal `R` convention.
    HaarUnitary,
}

/// Specification of one deterministic random sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSpec {
    pub kind: SampleKind,
    pub n: usize,
    pub seed: u64,
    pub scale: f64,
}

impl SampleSpec {
    pub fn new(kind: SampleKind, n: usize, seed: u64) -> Self {
        Self {
            kind,
            n,
            seed,
            scale: 1.0,
        }
    }
}

/// A sample drawn from one of the supported ensembles.
#[derive(Debug, Clone)]
pub enum Sample {
    Density(DensityMatrix),
    Hermitian(HermitianMatrix),
    Unitary(ComplexMatrix),
}

/// Draw the sample described by `spec`. Identical spec, identical bits.
pub fn sample(spec: &SampleSpec) -> Result<Sample> {
    if spec.n == 0 {
        return Err(Error::BadShape { n: 0, got: 0 });
    }
    let mut rng = substream(spec.seed, "sample", spec.kind as u64);
    Ok(match spec.kind {
        SampleKind::GinibreDensity => Sample::Density(ginibre_density(&mut rng, spec.n)?),
        SampleKind::GueHermitian => Sample::Hermitian(gue_hermitian(&mut rng, spec.n, spec.scale)),
        SampleKind::HaarUnitary => Sample::Unitary(haar_unitary(&mut rng, spec.n)),
    })
}

fn complex_gauss(rng: &mut impl Rng) -> Complex64 {
    // Standard complex Gaussian: E|z|^2 = 1.
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub(crate) fn ginibre(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| complex_gauss(rng))
}

/// Hilbert-Schmidt-ensemble state `G G* / Tr(G G*)`.
pub fn ginibre_density(rng: &mut impl Rng, n: usize) -> Result<DensityMatrix> {
    let g = ginibre(rng, n);
    let gg = g.matmul(&g.adjoint()).expect("square");
    density_from_matrix(&HermitianMatrix::symmetrize(gg))
}

/// GUE observable `(M + M*) / 2 * scale`.
pub fn gue_hermitian(rng: &mut impl Rng, n: usize, scale: f64) -> HermitianMatrix {
    let m = ginibre(rng, n);
    HermitianMatrix::symmetrize(m.scale_re(scale))
}

/// Haar-distributed unitary via modified Gram-Schmidt with one
/// re-orthogonalization pass. MGS leaves the implicit R diagonal real
/// positive, which is exactly the phase-fixing the Haar measure needs.
pub fn haar_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n);
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..n).map(|i| g[(i, j)]).collect())
        .collect();
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: Complex64 = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                for i in 0..n {
                    let c = cols[k][i];
                    cols[j][i] -= proj * c;
                }
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        debug_assert!(norm > 1e-200, "Ginibre columns are independent a.s.");
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    ComplexMatrix::from_fn(n, |i, j| cols[j][i])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_hamiltonian() -> HermitianMatrix {
        HermitianMatrix::from_real_diag(&[
            3.0, 2.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0, 5.0, 3.0, 5.0, 9.0,
        ])
    }

    #[test]
    fn density_accepts_and_repairs() {
        let ok = density_from_matrix(&HermitianMatrix::from_real_diag(&[0.25; 4])).unwrap();
        assert!((ok.hermitian().trace_re() - 1.0).abs() < 1e-12);

        let wobbly =
            density_from_matrix(&HermitianMatrix::from_real_diag(&[0.5, 0.5000000001])).unwrap();
        assert!((wobbly.hermitian().trace_re() - 1.0).abs() < 1e-12);
        assert!(wobbly.eig().eigenvalues().iter().all(|&p| p > 0.49));
    }

    #[test]
    fn density_rejects_bad_input() {
        let neg = HermitianMatrix::from_real_diag(&[1.0, -0.5]);
        assert!(matches!(
            density_from_matrix(&neg),
            Err(Error::NotPositive(_))
        ));
        let zero = HermitianMatrix::zeros(2);
        assert!(matches!(
            density_from_matrix(&zero),
            Err(Error::ZeroTrace(_))
        ));
    }

    #[test]
    fn pure_state_basics() {
        let rho = pure_state(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!(rho.matrix()[(1, 1)].norm() < 1e-14);
        assert_eq!(rho.rank(), 1);
        assert_eq!(rho.purity_hint(), Some(true));
        assert!(pure_state(&[Complex64::new(0.0, 0.0)]).is_err());
    }

    #[test]
    fn maximally_mixed_populations() {
        let rho = maximally_mixed(12);
        assert_eq!(rho.rank(), 12);
        assert!(rho.eig().eigenvalues().iter().all(|&p| (p - 1.0 / 12.0).abs() < 1e-15));
    }

    #[test]
    fn gibbs_two_level_closed_form() {
        let h = HermitianMatrix::from_real_diag(&[0.0, std::f64::consts::LN_2]);
        let rho = gibbs_state(&h, 1.0).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 2.0 / 3.0).abs() < 1e-14);
        assert!((rho.matrix()[(1, 1)].re - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn gibbs_matches_example_mean_energy() {
        let h = example_hamiltonian();
        let rho = gibbs_state(&h, 1.0).unwrap();
        let mean = crate::matrix::trace_product(&[rho.matrix(), h.matrix()])
            .unwrap()
            .re;
        assert!((mean - 1.79549).abs() < 1e-4);
    }

    #[test]
    fn gibbs_at_zero_beta_is_maximally_mixed() {
        let h = example_hamiltonian();
        let rho = gibbs_state(&h, 0.0).unwrap();
        let mm = maximally_mixed(12);
        let d = rho.matrix().sub(mm.matrix()).unwrap().frobenius_norm();
        assert!(d < 1e-12);
    }

    #[test]
    fn gibbs_guard_and_shift_invariance() {
        let h = example_hamiltonian();
        assert!(matches!(gibbs_state(&h, 100.0), Err(Error::BetaRange(_))));

        let shifted = h.add_scaled_identity(37.5);
        let a = gibbs_state(&h, 1.3).unwrap();
        let b = gibbs_state(&shifted, 1.3).unwrap();
        assert!(a.matrix().sub(b.matrix()).unwrap().frobenius_norm() < 1e-10);
    }

    #[test]
    fn gibbs_commutes_with_hamiltonian() {
        let mut rng = substream(5, "gibbs-comm", 0);
        let h = gue_hermitian(&mut rng, 6, 1.0);
        let rho = gibbs_state(&h, 0.7).unwrap();
        let comm = crate::matrix::bracket(
            rho.hermitian(),
            &h,
            crate::matrix::BracketKind::Commutator,
        )
        .unwrap();
        assert!(comm.frobenius_norm() <= 1e-10 * h.frobenius_norm());
    }

    #[test]
    fn gibbs_passes_validation_unchanged() {
        let h = example_hamiltonian();
        let rho = gibbs_state(&h, 1.0).unwrap();
        let revalidated = density_from_matrix(rho.hermitian()).unwrap();
        let d = revalidated
            .matrix()
            .sub(rho.matrix())
            .unwrap()
            .frobenius_norm();
        assert!(d < 1e-12);
    }

    #[test]
    fn sampling_is_deterministic_per_spec() {
        let spec = SampleSpec::new(SampleKind::GinibreDensity, 5, 1);
        let (a, b) = (sample(&spec).unwrap(), sample(&spec).unwrap());
        let (Sample::Density(a), Sample::Density(b)) = (a, b) else {
            panic!("kind mismatch");
        };
        // Bit-identical across runs.
        for (x, y) in a.matrix().entries().iter().zip(b.matrix().entries()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
        assert!((a.hermitian().trace_re() - 1.0).abs() < 1e-12);
        assert!(a.eig().min_eigenvalue() > 0.0);
    }

    #[test]
    fn haar_sample_is_unitary() {
        let spec = SampleSpec::new(SampleKind::HaarUnitary, 4, 9);
        let Sample::Unitary(u) = sample(&spec).unwrap() else {
            panic!("kind mismatch");
        };
        let resid = u
            .adjoint()
            .matmul(&u)
            .unwrap()
            .sub(&ComplexMatrix::identity(4))
            .unwrap()
            .frobenius_norm();
        assert!(resid <= 1e-12);
    }

    #[test]
    fn gue_sample_is_exactly_hermitian() {
        let spec = SampleSpec {
            kind: SampleKind::GueHermitian,
            n: 3,
            seed: 5,
            scale: 1.0,
        };
        let Sample::Hermitian(h) = sample(&spec).unwrap() else {
            panic!("kind mismatch");
        };
        let m = h.matrix();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m[(i, j)], m[(j, i)].conj());
            }
        }
    }
}
