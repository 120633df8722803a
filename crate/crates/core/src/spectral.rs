//! Spectral matrix functions: `f(A) = U f(Lambda) U*`.

use crate::eigen::{eig_hermitian, EigenDecomposition};
use crate::error::{Error, Result};
use crate::matrix::HermitianMatrix;
use crate::tol;

/// Scalar map applied to the spectrum.
///
/// Conventions for `Power(p)`:
/// - `p = 0`: support projector (eigenvalues at or below the rank cutoff map
///   to 0, everything else to 1), i.e. `0^0 = 0`.
/// - `p > 0` non-integer: needs a positive semidefinite spectrum; eigenvalues
///   in the small negative noise band clamp to 0 (`0^p = 0`).
/// - `p > 0` integer: plain powers, any sign of spectrum.
/// - `p < 0` and `Log`: need a strictly positive-definite spectrum.
#[derive(Debug, Clone, Copy)]
pub enum SpectralFunction {
    Power(f64),
    Exp,
    Log,
    Custom(fn(f64) -> f64),
}

/// Default positive-definiteness cutoff for `a`.
pub fn default_pd_tol(a: &HermitianMatrix) -> f64 {
    tol::scaled(tol::PD_TOL_FACTOR, a.frobenius_norm())
}

/// Evaluate `f` on the eigendecomposition of `a` and rebuild.
pub fn matrix_fn(a: &HermitianMatrix, f: &SpectralFunction) -> Result<HermitianMatrix> {
    let eig = eig_hermitian(a)?;
    matrix_fn_with_eig(&eig, f, default_pd_tol(a))
}

pub(crate) fn matrix_fn_with_eig(
    eig: &EigenDecomposition,
    f: &SpectralFunction,
    pd_tol: f64,
) -> Result<HermitianMatrix> {
    let mapped = map_spectrum(eig.eigenvalues(), f, pd_tol)?;
    let mut it = mapped.iter();
    Ok(eig.apply_spectrum(move |_| *it.next().expect("spectrum length")))
}

/// Apply the scalar map to a spectrum, enforcing the domain rules.
pub(crate) fn map_spectrum(eigs: &[f64], f: &SpectralFunction, pd_tol: f64) -> Result<Vec<f64>> {
    let min = eigs.iter().copied().fold(f64::INFINITY, f64::min);
    let mapped: Vec<f64> = match *f {
        SpectralFunction::Power(p) => {
            if p < 0.0 && min <= pd_tol {
                return Err(Error::SpectralDomain(format!(
                    "power({p}) needs a strictly positive spectrum (min eigenvalue {min:.3e})"
                )));
            }
            if p == 0.0 {
                eigs.iter()
                    .map(|&l| if l > tol::RANK_TOL { 1.0 } else { 0.0 })
                    .collect()
            } else if p > 0.0 && p.fract() != 0.0 {
                if min < -pd_tol {
                    return Err(Error::SpectralDomain(format!(
                        "power({p}) needs a positive semidefinite spectrum (min eigenvalue {min:.3e})"
                    )));
                }
                eigs.iter()
                    .map(|&l| if l <= 0.0 { 0.0 } else { l.powf(p) })
                    .collect()
            } else {
                // Integer powers (and negative powers on a PD spectrum).
                eigs.iter().map(|&l| l.powf(p)).collect()
            }
        }
        SpectralFunction::Exp => eigs.iter().map(|&l| l.exp()).collect(),
        SpectralFunction::Log => {
            if min <= pd_tol {
                return Err(Error::SpectralDomain(format!(
                    "log needs a strictly positive spectrum (min eigenvalue {min:.3e})"
                )));
            }
            eigs.iter().map(|&l| l.ln()).collect()
        }
        SpectralFunction::Custom(g) => eigs.iter().map(|&l| g(l)).collect(),
    };
    if mapped.iter().any(|v| !v.is_finite()) {
        return Err(Error::SpectralDomain(
            "spectrum map produced a non-finite value".into(),
        ));
    }
    Ok(mapped)
}

/// Smallest eigenvalue of `a`.
pub fn min_eigenvalue(a: &HermitianMatrix) -> Result<f64> {
    Ok(eig_hermitian(a)?.min_eigenvalue())
}

/// `min eigenvalue > tol`; `tol` defaults to `1e-10 * max(1, ||A||_F)`.
pub fn is_positive_definite(a: &HermitianMatrix, tol: Option<f64>) -> Result<bool> {
    let cutoff = tol.unwrap_or_else(|| default_pd_tol(a));
    Ok(min_eigenvalue(a)? > cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ComplexMatrix;

    #[test]
    fn diagonal_power() {
        let a = HermitianMatrix::from_real_diag(&[0.25, 0.75]);
        let sq = matrix_fn(&a, &SpectralFunction::Power(2.0)).unwrap();
        assert!((sq.matrix()[(0, 0)].re - 1.0 / 16.0).abs() < 1e-15);
        assert!((sq.matrix()[(1, 1)].re - 9.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let e = matrix_fn(&HermitianMatrix::zeros(5), &SpectralFunction::Exp).unwrap();
        let resid = e
            .matrix()
            .sub(&ComplexMatrix::identity(5))
            .unwrap()
            .frobenius_norm();
        assert!(resid < 1e-15);
    }

    #[test]
    fn exp_log_round_trip_on_gue() {
        let a = crate::states::gue_hermitian(&mut crate::rng::substream(7, "roundtrip", 0), 6, 1.0);
        let e = matrix_fn(&a, &SpectralFunction::Exp).unwrap();
        let back = matrix_fn(&e, &SpectralFunction::Log).unwrap();
        let resid = back.matrix().sub(a.matrix()).unwrap().frobenius_norm();
        assert!(resid <= 1e-9 * a.frobenius_norm().max(1.0));
    }

    #[test]
    fn support_projector_convention() {
        let a = HermitianMatrix::from_real_diag(&[0.0, 0.5, 0.5]);
        let p = matrix_fn(&a, &SpectralFunction::Power(0.0)).unwrap();
        assert!((p.trace_re() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn domain_violations() {
        let a = HermitianMatrix::from_real_diag(&[1.0, 0.0]);
        assert!(matrix_fn(&a, &SpectralFunction::Log).is_err());
        assert!(matrix_fn(&a, &SpectralFunction::Power(-1.0)).is_err());
        let b = HermitianMatrix::from_real_diag(&[1.0, -2.0]);
        assert!(matrix_fn(&b, &SpectralFunction::Power(0.5)).is_err());
        // Integer powers are fine on indefinite spectra.
        let sq = matrix_fn(&b, &SpectralFunction::Power(2.0)).unwrap();
        assert!((sq.matrix()[(1, 1)].re - 4.0).abs() < 1e-15);
    }

    #[test]
    fn identity_map_and_unitary_conjugation_commute() {
        let mut rng = crate::rng::substream(11, "conj", 0);
        let a = crate::states::gue_hermitian(&mut rng, 5, 1.0);
        let same = matrix_fn(&a, &SpectralFunction::Power(1.0)).unwrap();
        assert!(same.matrix().sub(a.matrix()).unwrap().frobenius_norm() < 1e-10 * a.frobenius_norm());

        // f(V A V*) = V f(A) V*
        let v = crate::states::haar_unitary(&mut rng, 5);
        let conj = HermitianMatrix::symmetrize(
            v.matmul(a.matrix()).unwrap().matmul(&v.adjoint()).unwrap(),
        );
        let f = SpectralFunction::Custom(|x| (1.0 + x * x).ln());
        let lhs = matrix_fn(&conj, &f).unwrap();
        let rhs = HermitianMatrix::symmetrize(
            v.matmul(matrix_fn(&a, &f).unwrap().matrix())
                .unwrap()
                .matmul(&v.adjoint())
                .unwrap(),
        );
        let resid = lhs.matrix().sub(rhs.matrix()).unwrap().frobenius_norm();
        assert!(resid < 1e-10 * (1.0 + lhs.frobenius_norm()));
    }

    #[test]
    fn min_eigenvalue_of_example_hamiltonian() {
        let h = HermitianMatrix::from_real_diag(&[
            3.0, 2.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0, 5.0, 3.0, 5.0, 9.0,
        ]);
        assert_eq!(min_eigenvalue(&h).unwrap(), 1.0);
        assert!(!is_positive_definite(&HermitianMatrix::from_real_diag(&[1.0, 0.0]), None).unwrap());
    }
}
