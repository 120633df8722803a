//! Moments of observables in a state, the covariance / commutator / Gram
//! matrices, the Schrodinger and determinant uncertainty inequalities, the
//! positive-definite split lemma, and the alpha-variance.

use num_complex::Complex64;

use crate::eigen::eig_hermitian;
use crate::entropy::AlphaParam;
use crate::error::{Error, Result};
use crate::matrix::{bracket, gram, trace_product, BracketKind, ComplexMatrix, HermitianMatrix};
use crate::spectral::default_pd_tol;
use crate::states::DensityMatrix;
use crate::thermo::alpha_expectation;
use crate::tol;

/// A state together with an ordered list of same-dimension observables.
#[derive(Debug, Clone)]
pub struct ObservableSet {
    rho: DensityMatrix,
    observables: Vec<HermitianMatrix>,
}

impl ObservableSet {
    pub fn new(rho: DensityMatrix, observables: Vec<HermitianMatrix>) -> Result<Self> {
        if observables.is_empty() {
            return Err(Error::BadShape { n: 0, got: 0 });
        }
        for x in &observables {
            if x.dim() != rho.dim() {
                return Err(Error::DimensionMismatch(rho.dim(), x.dim()));
            }
        }
        Ok(Self { rho, observables })
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn observables(&self) -> &[HermitianMatrix] {
        &self.observables
    }

    pub fn len(&self) -> usize {
        self.observables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observables.is_empty()
    }
}

/// One pairwise Schrodinger gap inside a report.
#[derive(Debug, Clone, Copy)]
pub struct PairGap {
    pub j: usize,
    pub k: usize,
    pub gap: f64,
}

/// Output of `schrodinger_gap`.
#[derive(Debug, Clone, Copy)]
pub struct SchrodingerGap {
    /// `var_A var_B - Cov^2 - (1/2 <i[A,B]>)^2`; nonnegative.
    pub gap: f64,
    /// The weaker bound's slack: `var_A var_B - 1/4 |<[A,B]>|^2`.
    pub robertson_gap: f64,
    /// Whether the bound is saturated at working precision.
    pub saturated: bool,
}

/// Output of `det_gaps`.
#[derive(Debug, Clone, Copy)]
pub struct DetGaps {
    /// `det cov - det(i delta)`; strictly positive when tau is PD.
    pub det_gap: f64,
    /// `prod_j var_j - det(i delta)`.
    pub hadamard_gap: f64,
    /// Whether tau cleared the strict positive-definiteness cutoff. When
    /// false the strict inequality degrades to nonnegativity.
    pub tau_positive_definite: bool,
}

/// Output of `lemma_split_check`.
#[derive(Debug, Clone)]
pub struct LemmaSplit {
    pub det_a: f64,
    pub det_ib: f64,
    /// Spectrum of `A^{-1/2} B A^{-1/2}`; contained in `[-1, 1]`.
    pub split_spectrum: Vec<f64>,
}

/// Full second-moment report for one observable set.
#[derive(Debug, Clone)]
pub struct UncertaintyReport {
    pub means: Vec<f64>,
    /// Real symmetric covariance matrix `(tau + tau^T)/2`.
    pub cov: ComplexMatrix,
    /// Imaginary antisymmetric commutator matrix `(tau - tau^T)/2`.
    pub delta: ComplexMatrix,
    /// Gram matrix of the weighted deviations; Hermitian PSD, `tau = cov + delta`.
    pub tau: ComplexMatrix,
    pub schrodinger_gaps: Vec<PairGap>,
    /// Determinant gaps; present only for an even number of observables.
    pub det: Option<DetGaps>,
}

/// `(mean, variance)` of `A` in `rho`.
pub fn moments(rho: &DensityMatrix, a: &HermitianMatrix) -> Result<(f64, f64)> {
    if rho.dim() != a.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), a.dim()));
    }
    let mean = trace_product(&[rho.matrix(), a.matrix()])?.re;
    let dev = a.add_scaled_identity(-mean);
    let var = trace_product(&[rho.matrix(), dev.matrix(), dev.matrix()])?.re;
    Ok((mean, var))
}

/// `Cov(A, B) = 1/2 <{A, B}> - <A><B>`; symmetric, collapses to the variance
/// at `B = A`.
pub fn covariance(rho: &DensityMatrix, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    if rho.dim() != a.dim() || rho.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let anti = bracket(a, b, BracketKind::Anticommutator)?;
    let mean_a = trace_product(&[rho.matrix(), a.matrix()])?.re;
    let mean_b = trace_product(&[rho.matrix(), b.matrix()])?.re;
    let half_anti = 0.5 * trace_product(&[rho.matrix(), &anti])?.re;
    Ok(half_anti - mean_a * mean_b)
}

/// Weighted deviations `X'_j = rho^{1/2} (X_j - <X_j>)` and their Gram
/// matrix.
fn weighted_gram(set: &ObservableSet) -> Result<(Vec<f64>, ComplexMatrix)> {
    let rho = set.rho();
    let sqrt_rho = rho
        .eig()
        .apply_spectrum(|p| if p > 0.0 { p.sqrt() } else { 0.0 });
    let mut means = Vec::with_capacity(set.len());
    let mut deviations = Vec::with_capacity(set.len());
    for x in set.observables() {
        let mean = trace_product(&[rho.matrix(), x.matrix()])?.re;
        means.push(mean);
        let dev = x.add_scaled_identity(-mean);
        deviations.push(sqrt_rho.matrix().matmul(dev.matrix())?);
    }
    let tau = gram(&deviations)?;
    Ok((means, tau))
}

/// Assemble the covariance / commutator / Gram report. `cov = (tau + tau^T)/2`
/// and `delta = (tau - tau^T)/2`, so `tau = cov + delta` entrywise.
pub fn build_report(set: &ObservableSet) -> Result<UncertaintyReport> {
    let (means, tau) = weighted_gram(set)?;
    let m = set.len();
    let tau_t = tau.transpose();
    let cov = tau.add(&tau_t)?.scale_re(0.5);
    let delta = tau.sub(&tau_t)?.scale_re(0.5);

    #[cfg(debug_assertions)]
    for j in 0..m {
        for k in 0..m {
            // Independent route: Cov from the anticommutator must match the
            // symmetrized Gram matrix.
            let direct = covariance(set.rho(), &set.observables()[j], &set.observables()[k])?;
            debug_assert!(
                (direct - cov[(j, k)].re).abs() <= 1e-10 * (1.0 + direct.abs()),
                "Cov route mismatch at ({j}, {k}): {direct} vs {}",
                cov[(j, k)].re
            );
        }
    }

    let mut schrodinger_gaps = Vec::new();
    for j in 0..m {
        for k in (j + 1)..m {
            // var_j var_k - Cov^2 - (1/2 <i[X_j, X_k]>)^2 == var var - |tau_jk|^2.
            let gap = tau[(j, j)].re * tau[(k, k)].re - tau[(j, k)].norm_sqr();
            schrodinger_gaps.push(PairGap { j, k, gap });
        }
    }

    let det = if m % 2 == 0 {
        Some(det_gaps_from_tau(&tau, &cov, &delta)?)
    } else {
        None
    };

    Ok(UncertaintyReport {
        means,
        cov,
        delta,
        tau,
        schrodinger_gaps,
        det,
    })
}

/// Schrodinger bound slack for one pair of observables, computed through the
/// moment route (independent of the Gram-matrix route in `build_report`).
pub fn schrodinger_gap(
    rho: &DensityMatrix,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<SchrodingerGap> {
    let (_, var_a) = moments(rho, a)?;
    let (_, var_b) = moments(rho, b)?;
    let cov = covariance(rho, a, b)?;
    let comm = bracket(a, b, BracketKind::Commutator)?;
    let i_comm = comm.scale(Complex64::new(0.0, 1.0));
    let mean_i_comm = trace_product(&[rho.matrix(), &i_comm])?.re;
    let gap = var_a * var_b - cov * cov - 0.25 * mean_i_comm * mean_i_comm;
    let robertson_gap = var_a * var_b - 0.25 * mean_i_comm * mean_i_comm;
    let saturated = gap <= 1e-10 * (var_a * var_b + 1.0);
    Ok(SchrodingerGap {
        gap,
        robertson_gap,
        saturated,
    })
}

fn det_gaps_from_tau(
    tau: &ComplexMatrix,
    cov: &ComplexMatrix,
    delta: &ComplexMatrix,
) -> Result<DetGaps> {
    let tau_herm = HermitianMatrix::symmetrize(tau.clone());
    let min_eig = eig_hermitian(&tau_herm)?.min_eigenvalue();
    let tau_positive_definite = min_eig > default_pd_tol(&tau_herm);

    let det_cov = cov.determinant();
    let i_delta = delta.scale(Complex64::new(0.0, 1.0));
    let det_i_delta = i_delta.determinant();
    debug_assert!(det_cov.im.abs() <= 1e-9 * (1.0 + det_cov.norm()));
    debug_assert!(det_i_delta.im.abs() <= 1e-9 * (1.0 + det_i_delta.norm()));

    let mut diag_product = 1.0;
    for j in 0..cov.dim() {
        diag_product *= cov[(j, j)].re;
    }

    Ok(DetGaps {
        det_gap: det_cov.re - det_i_delta.re,
        hadamard_gap: diag_product - det_i_delta.re,
        tau_positive_definite,
    })
}

/// Determinant inequalities `det cov > det(i delta)` and the Hadamard chain,
/// for an even number of observables.
pub fn det_gaps(set: &ObservableSet) -> Result<DetGaps> {
    if set.len() % 2 != 0 {
        return Err(Error::OddObservableCount(set.len()));
    }
    let (_, tau) = weighted_gram(set)?;
    let tau_t = tau.transpose();
    let cov = tau.add(&tau_t)?.scale_re(0.5);
    let delta = tau.sub(&tau_t)?.scale_re(0.5);
    det_gaps_from_tau(&tau, &cov, &delta)
}

/// Split a Hermitian positive definite `C` of even dimension into its
/// transpose-symmetric part `A = (C + C^T)/2` and antisymmetric part
/// `B = (C - C^T)/2`, returning `det A` and `det iB` (`det A > det iB`), plus
/// the spectrum of `A^{-1/2} B A^{-1/2}` which lands in `[-1, 1]`.
pub fn lemma_split_check(c: &ComplexMatrix) -> Result<LemmaSplit> {
    let n = c.dim();
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    // The split only produces an observable pair (A real symmetric, iB
    // Hermitian) for Hermitian input; positive definiteness of the quadratic
    // form then coincides with spectral positivity.
    let herm = HermitianMatrix::new(c.clone())?;
    let eig = eig_hermitian(&herm)?;
    let min = eig.min_eigenvalue();
    if min <= default_pd_tol(&herm) {
        return Err(Error::NotPositiveDefinite(min));
    }

    let c_t = c.transpose();
    let a = c.add(&c_t)?.scale_re(0.5);
    let b = c.sub(&c_t)?.scale_re(0.5);

    let det_a = a.determinant();
    let det_ib = b.scale(Complex64::new(0.0, 1.0)).determinant();
    debug_assert!(det_a.im.abs() <= 1e-9 * (1.0 + det_a.norm()));
    debug_assert!(det_ib.im.abs() <= 1e-9 * (1.0 + det_ib.norm()));

    let a_herm = HermitianMatrix::symmetrize(a);
    let a_inv_sqrt = eig_hermitian(&a_herm)?.apply_spectrum(|l| 1.0 / l.sqrt());
    let mid = a_inv_sqrt
        .matrix()
        .matmul(&b)?
        .matmul(a_inv_sqrt.matrix())?;
    let split_spectrum = eig_hermitian(&HermitianMatrix::symmetrize(mid))?
        .eigenvalues()
        .to_vec();
    debug_assert!(
        split_spectrum.iter().all(|&l| (-1.0 - 1e-9..=1.0 + 1e-9).contains(&l)),
        "split spectrum escaped [-1, 1]: {split_spectrum:?}"
    );

    Ok(LemmaSplit {
        det_a: det_a.re,
        det_ib: det_ib.re,
        split_spectrum,
    })
}

/// `sigma_{A,alpha}^2 = Tr rho (A - <A>_alpha I)^2`.
///
/// At alpha = infinity the alpha-expectation limit exists in closed form
/// whenever `rho` and `A` commute (`max_i(log p_i + a_i) - max_i log p_i`
/// over the joint spectrum, which collapses to the lowest eigenvalue of `A`
/// on the Gibbs path); non-commuting pairs are rejected.
pub fn alpha_variance(rho: &DensityMatrix, a: &HermitianMatrix, alpha: AlphaParam) -> Result<f64> {
    if rho.dim() != a.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), a.dim()));
    }
    let center = if alpha.is_infinite() {
        infinite_alpha_expectation_commuting(rho, a)?
    } else {
        alpha_expectation(rho, a, alpha)?
    };
    let dev = a.add_scaled_identity(-center);
    Ok(trace_product(&[rho.matrix(), dev.matrix(), dev.matrix()])?.re)
}

/// alpha -> infinity limit of the alpha-expectation for a commuting pair.
fn infinite_alpha_expectation_commuting(rho: &DensityMatrix, a: &HermitianMatrix) -> Result<f64> {
    let scale = a.frobenius_norm().max(1.0);
    let comm = bracket(rho.hermitian(), a, BracketKind::Commutator)?;
    if comm.frobenius_norm() > 1e-8 * scale {
        return Err(Error::AlphaInfiniteUnsupported(
            "state and observable do not commute".into(),
        ));
    }

    // Joint spectrum: rotate rho into the eigenbasis of A and diagonalize
    // its blocks over each (possibly degenerate) eigenvalue cluster of A.
    let a_eig = eig_hermitian(a)?;
    let u = a_eig.eigenvectors();
    let rotated = u.adjoint().matmul(rho.matrix())?.matmul(u)?;
    let n = a.dim();
    let cluster_tol = 1e-8 * scale;
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(n); // (p_i, a_i)
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && a_eig.eigenvalues()[end] - a_eig.eigenvalues()[end - 1] <= cluster_tol {
            end += 1;
        }
        let size = end - start;
        let a_value = a_eig.eigenvalues()[start..end].iter().sum::<f64>() / size as f64;
        let block = ComplexMatrix::from_fn(size, |i, j| rotated[(start + i, start + j)]);
        let block_populations = eig_hermitian(&HermitianMatrix::symmetrize(block))?;
        for &p in block_populations.eigenvalues() {
            pairs.push((p, a_value));
        }
        start = end;
    }

    let mut best_combined = f64::NEG_INFINITY;
    let mut best_logp = f64::NEG_INFINITY;
    for &(p, a_value) in &pairs {
        if p > tol::RANK_TOL {
            let logp = p.ln();
            best_combined = best_combined.max(logp + a_value);
            best_logp = best_logp.max(logp);
        }
    }
    if !best_combined.is_finite() {
        return Err(Error::AlphaInfiniteUnsupported(
            "state carries no support".into(),
        ));
    }
    Ok(best_combined - best_logp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use crate::states::{density_from_matrix, gibbs_state, ginibre_density, gue_hermitian};

    fn alpha(v: f64) -> AlphaParam {
        AlphaParam::new(v).unwrap()
    }

    fn pauli_x() -> HermitianMatrix {
        HermitianMatrix::new(
            ComplexMatrix::from_rows(&[
                vec![(0.0, 0.0), (1.0, 0.0)],
                vec![(1.0, 0.0), (0.0, 0.0)],
            ])
            .unwrap(),
        )
        .unwrap()
    }

    fn pauli_y() -> HermitianMatrix {
        HermitianMatrix::new(
            ComplexMatrix::from_rows(&[
                vec![(0.0, 0.0), (0.0, -1.0)],
                vec![(0.0, 1.0), (0.0, 0.0)],
            ])
            .unwrap(),
        )
        .unwrap()
    }

    fn pauli_z() -> HermitianMatrix {
        HermitianMatrix::from_real_diag(&[1.0, -1.0])
    }

    fn skewed_qubit() -> DensityMatrix {
        density_from_matrix(&HermitianMatrix::from_real_diag(&[0.75, 0.25])).unwrap()
    }

    fn example_hamiltonian() -> HermitianMatrix {
        HermitianMatrix::from_real_diag(&[
            3.0, 2.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0, 5.0, 3.0, 5.0, 9.0,
        ])
    }

    #[test]
    fn qubit_moments() {
        let rho = skewed_qubit();
        let (mean, var) = moments(&rho, &pauli_z()).unwrap();
        assert!((mean - 0.5).abs() < 1e-14);
        assert!((var - 0.75).abs() < 1e-14);

        let c = HermitianMatrix::identity(2).scale_re(3.0);
        let (mean_c, var_c) = moments(&rho, &c).unwrap();
        assert!((mean_c - 3.0).abs() < 1e-14);
        assert!(var_c.abs() < 1e-14);
    }

    #[test]
    fn covariance_properties() {
        let mut rng = substream(1, "cov", 0);
        let rho = ginibre_density(&mut rng, 4).unwrap();
        let a = gue_hermitian(&mut rng, 4, 1.0);
        let b = gue_hermitian(&mut rng, 4, 1.0);

        let (_, var) = moments(&rho, &a).unwrap();
        assert!((covariance(&rho, &a, &a).unwrap() - var).abs() < 1e-12);
        assert_eq!(
            covariance(&rho, &a, &b).unwrap(),
            covariance(&rho, &b, &a).unwrap()
        );
        let c = HermitianMatrix::identity(4).scale_re(7.0);
        assert!(covariance(&rho, &a, &c).unwrap().abs() < 1e-12);

        // Pauli pair in a diagonal state: anticommutator vanishes.
        assert!(covariance(&skewed_qubit(), &pauli_x(), &pauli_y()).unwrap().abs() < 1e-14);
    }

    #[test]
    fn pauli_report() {
        let set = ObservableSet::new(skewed_qubit(), vec![pauli_x(), pauli_y()]).unwrap();
        let report = build_report(&set).unwrap();
        assert!(report.means.iter().all(|m| m.abs() < 1e-14));
        // tau = [[1, i/2], [-i/2, 1]]
        assert!((report.tau[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!((report.tau[(0, 1)] - Complex64::new(0.0, 0.5)).norm() < 1e-12);
        assert!((report.tau[(1, 0)] - Complex64::new(0.0, -0.5)).norm() < 1e-12);
        // cov = I, delta = [[0, i/2], [-i/2, 0]]
        assert!((report.cov[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!(report.cov[(0, 1)].norm() < 1e-12);
        assert!((report.delta[(0, 1)] - Complex64::new(0.0, 0.5)).norm() < 1e-12);
        assert_eq!(report.delta[(0, 0)], Complex64::new(0.0, 0.0));
        // tau = cov + delta entrywise.
        for j in 0..2 {
            for k in 0..2 {
                let sum = report.cov[(j, k)] + report.delta[(j, k)];
                assert!((sum - report.tau[(j, k)]).norm() < 1e-12);
            }
        }
        let det = report.det.unwrap();
        assert!((det.det_gap - 0.75).abs() < 1e-12);
        assert!((det.hadamard_gap - 0.75).abs() < 1e-12);
        assert!(det.tau_positive_definite);
        assert!((report.schrodinger_gaps[0].gap - 0.75).abs() < 1e-12);
    }

    #[test]
    fn single_observable_report() {
        let set = ObservableSet::new(skewed_qubit(), vec![pauli_z()]).unwrap();
        let report = build_report(&set).unwrap();
        assert!((report.cov[(0, 0)].re - 0.75).abs() < 1e-12);
        assert_eq!(report.delta[(0, 0)], Complex64::new(0.0, 0.0));
        assert!(report.det.is_none());
        assert!(report.schrodinger_gaps.is_empty());
    }

    #[test]
    fn commuting_set_has_zero_delta() {
        let rho = skewed_qubit();
        let set = ObservableSet::new(
            rho,
            vec![pauli_z(), HermitianMatrix::from_real_diag(&[2.0, -0.5])],
        )
        .unwrap();
        let report = build_report(&set).unwrap();
        assert!(report.delta[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn schrodinger_gap_pauli_example() {
        let g = schrodinger_gap(&skewed_qubit(), &pauli_x(), &pauli_y()).unwrap();
        // 1 * 1 - 0 - (1/2)^2 with <i[sx, sy]> = -2<sz> = -1.
        assert!((g.gap - 0.75).abs() < 1e-14);
        assert!((g.robertson_gap - 0.75).abs() < 1e-14);
        assert!(!g.saturated);
    }

    #[test]
    fn schrodinger_saturates_on_affine_multiples() {
        let mut rng = substream(2, "sat", 0);
        let rho = ginibre_density(&mut rng, 4).unwrap();
        let a = gue_hermitian(&mut rng, 4, 1.0);
        let same = schrodinger_gap(&rho, &a, &a).unwrap();
        assert!(same.gap.abs() < 1e-10);
        assert!(same.saturated);

        let b = a.scale_re(2.0).add_scaled_identity(3.0);
        let affine = schrodinger_gap(&rho, &a, &b).unwrap();
        let (_, va) = moments(&rho, &a).unwrap();
        let (_, vb) = moments(&rho, &b).unwrap();
        assert!(affine.gap.abs() < 1e-10 * (va * vb + 1.0));
        assert!(affine.saturated);
    }

    #[test]
    fn schrodinger_gap_scales_quartically() {
        let mut rng = substream(3, "scale", 0);
        let rho = ginibre_density(&mut rng, 3).unwrap();
        let a = gue_hermitian(&mut rng, 3, 1.0);
        let b = gue_hermitian(&mut rng, 3, 1.0);
        let g1 = schrodinger_gap(&rho, &a, &b).unwrap().gap;
        let g2 = schrodinger_gap(&rho, &a.scale_re(3.0), &b).unwrap().gap;
        assert!((g2 - 9.0 * g1).abs() < 1e-9 * (1.0 + g2.abs()));
    }

    #[test]
    fn det_gaps_flags_and_errors() {
        let rho = skewed_qubit();
        let odd = ObservableSet::new(rho.clone(), vec![pauli_x()]).unwrap();
        assert!(matches!(det_gaps(&odd), Err(Error::OddObservableCount(1))));

        // Repeated observable: tau singular, both determinants vanish. The
        // Hadamard product of the (nonzero) variances still dominates.
        let repeated = ObservableSet::new(rho, vec![pauli_x(), pauli_x()]).unwrap();
        let d = det_gaps(&repeated).unwrap();
        assert!(!d.tau_positive_definite);
        assert!(d.det_gap.abs() < 1e-12);
        assert!((d.hadamard_gap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn det_gap_positive_for_random_even_sets() {
        let mut rng = substream(11, "det4", 0);
        let rho = ginibre_density(&mut rng, 4).unwrap();
        let xs: Vec<HermitianMatrix> = (0..4).map(|_| gue_hermitian(&mut rng, 4, 1.0)).collect();
        let set = ObservableSet::new(rho, xs).unwrap();
        let d = det_gaps(&set).unwrap();
        assert!(d.tau_positive_definite);
        assert!(d.det_gap > 0.0);
        assert!(d.hadamard_gap >= d.det_gap - 1e-12);
    }

    #[test]
    fn lemma_split_examples() {
        let c = ComplexMatrix::from_rows(&[
            vec![(1.0, 0.0), (0.0, 0.5)],
            vec![(0.0, -0.5), (1.0, 0.0)],
        ])
        .unwrap();
        let split = lemma_split_check(&c).unwrap();
        assert!((split.det_a - 1.0).abs() < 1e-14);
        assert!((split.det_ib - 0.25).abs() < 1e-14);
        assert!(split.split_spectrum.iter().all(|l| l.abs() <= 1.0 + 1e-12));

        let id = lemma_split_check(&ComplexMatrix::identity(4)).unwrap();
        assert!((id.det_a - 1.0).abs() < 1e-14);
        assert!(id.det_ib.abs() < 1e-14);

        // Real symmetric PD: B = 0 identically.
        let sym = ComplexMatrix::from_rows(&[
            vec![(2.0, 0.0), (0.3, 0.0)],
            vec![(0.3, 0.0), (1.5, 0.0)],
        ])
        .unwrap();
        assert!(lemma_split_check(&sym).unwrap().det_ib.abs() < 1e-14);

        assert!(matches!(
            lemma_split_check(&ComplexMatrix::identity(3)),
            Err(Error::OddDimension(3))
        ));
        let indefinite = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        assert!(matches!(
            lemma_split_check(&indefinite),
            Err(Error::NotPositiveDefinite(_))
        ));
    }

    #[test]
    fn alpha_variance_matches_reference_values() {
        let h = example_hamiltonian();
        let rho = gibbs_state(&h, 1.0).unwrap();
        // 50-digit scalar references over the 12 Boltzmann weights.
        let cases = [
            (alpha(0.5), 1.0260774964584175),
            (alpha(2.0), 1.0253123497976548),
            (alpha(1.0), 0.97559264653604963),
            (alpha(0.0), 1.3538418348052885),
            (AlphaParam::infinity(), 1.2588040197586037),
        ];
        for (a, expect) in cases {
            let sd = alpha_variance(&rho, &h, a).unwrap().sqrt();
            assert!(
                (sd - expect).abs() < 1e-10,
                "alpha = {:?}: {sd} vs {expect}",
                a.value()
            );
        }
    }

    #[test]
    fn alpha_variance_consistency_and_shift() {
        let mut rng = substream(4, "avar", 0);
        let rho = ginibre_density(&mut rng, 5).unwrap();
        let a = gue_hermitian(&mut rng, 5, 1.0);

        let (_, var) = moments(&rho, &a).unwrap();
        assert!((alpha_variance(&rho, &a, alpha(1.0)).unwrap() - var).abs() < 1e-10);
        for side in [1.0 + 1e-4, 1.0 - 1e-4] {
            assert!((alpha_variance(&rho, &a, alpha(side)).unwrap() - var).abs() < 1e-3);
        }

        let shifted = a.add_scaled_identity(-2.3);
        for av in [0.5, 2.0] {
            let lhs = alpha_variance(&rho, &shifted, alpha(av)).unwrap();
            let rhs = alpha_variance(&rho, &a, alpha(av)).unwrap();
            assert!((lhs - rhs).abs() < 1e-9);
        }
    }

    #[test]
    fn infinite_alpha_variance_needs_commuting_pair() {
        let mut rng = substream(5, "avar-inf", 0);
        let rho = ginibre_density(&mut rng, 4).unwrap();
        let a = gue_hermitian(&mut rng, 4, 1.0);
        assert!(matches!(
            alpha_variance(&rho, &a, AlphaParam::infinity()),
            Err(Error::AlphaInfiniteUnsupported(_))
        ));
    }
}
