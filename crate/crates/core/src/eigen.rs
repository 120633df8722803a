//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Each rotation is a 2x2 unitary annihilating one off-diagonal pair; sweeps
//! repeat until the off-diagonal Frobenius mass drops below
//! `1e-14 * ||A||_F`. Unconditionally stable for Hermitian input and
//! self-contained, at the cost of being slower than QR for large n (the
//! states handled here stay small).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::tol;

/// Spectrum sorted ascending plus the matching unitary eigenbasis.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Descending view of the spectrum.
    pub fn eigenvalues_descending(&self) -> impl Iterator<Item = f64> + '_ {
        self.eigenvalues.iter().rev().copied()
    }

    /// Unitary whose columns are eigenvectors in eigenvalue order.
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// `U f(Lambda) U*` for an arbitrary spectrum map. The result is
    /// symmetrized, i.e. exactly Hermitian.
    pub fn apply_spectrum(&self, mut f: impl FnMut(f64) -> f64) -> HermitianMatrix {
        let n = self.dim();
        let vals: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let u = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut s = Complex64::new(0.0, 0.0);
                for (k, &v) in vals.iter().enumerate() {
                    s += u[(i, k)] * u[(j, k)].conj() * v;
                }
                out[(i, j)] = s;
                out[(j, i)] = s.conj();
            }
        }
        HermitianMatrix::symmetrize(out)
    }

    /// Reconstruct `U Lambda U*` (mainly for residual checks).
    pub fn reconstruct(&self) -> HermitianMatrix {
        self.apply_spectrum(|l| l)
    }

    pub(crate) fn from_parts_sorted(eigenvalues: Vec<f64>, eigenvectors: ComplexMatrix) -> Self {
        debug_assert!(eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        Self {
            eigenvalues,
            eigenvectors,
        }
    }
}

/// Decompose a Hermitian matrix. Deterministic for identical input bits:
/// cyclic pivot order, canonical eigenvector phases, and lexicographic
/// tie-breaking between equal eigenvalues.
pub fn eig_hermitian(a: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = a.dim();
    let a_fro = a.frobenius_norm();
    let threshold = tol::EIG_CONVERGENCE_FACTOR * a_fro;

    let mut m = a.matrix().clone();
    let mut u = ComplexMatrix::identity(n);

    if n > 1 && a_fro > 0.0 {
        let mut converged = off_diagonal_mass(&m) <= threshold;
        let mut sweeps = 0;
        while !converged {
            if sweeps >= tol::JACOBI_SWEEP_CAP {
                return Err(Error::NonConvergence(tol::JACOBI_SWEEP_CAP));
            }
            for p in 0..(n - 1) {
                for q in (p + 1)..n {
                    rotate(&mut m, &mut u, p, q);
                }
            }
            sweeps += 1;
            converged = off_diagonal_mass(&m) <= threshold;
        }
    }

    let mut eigenvalues: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    canonicalize_phases(&mut u);

    // Ascending sort; exact ties fall back to lexicographic column order so
    // the output is a pure function of the input bits.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eigenvalues[i]
            .partial_cmp(&eigenvalues[j])
            .expect("finite eigenvalues")
            .then_with(|| compare_columns(&u, i, j))
    });

    let sorted_vals: Vec<f64> = order.iter().map(|&i| eigenvalues[i]).collect();
    let sorted_vecs = ComplexMatrix::from_fn(n, |i, j| u[(i, order[j])]);
    eigenvalues = sorted_vals;

    Ok(EigenDecomposition::from_parts_sorted(eigenvalues, sorted_vecs))
}

fn off_diagonal_mass(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += 2.0 * m[(i, j)].norm_sqr();
        }
    }
    s.sqrt()
}

/// One Jacobi rotation annihilating `m[(p, q)]`, accumulated into `u`.
fn rotate(m: &mut ComplexMatrix, u: &mut ComplexMatrix, p: usize, q: usize) {
    let beta = m[(p, q)];
    let abs_b = beta.norm();
    if abs_b == 0.0 {
        return;
    }
    // Phase that maps the pivot to a real entry, then the classic real
    // symmetric rotation on [[a_pp, |b|], [|b|, a_qq]].
    let phase = beta / abs_b; // e^{i phi}
    let alpha = m[(p, p)].re;
    let gamma = m[(q, q)].re;
    let theta = (gamma - alpha) / (2.0 * abs_b);
    let t = if theta >= 0.0 {
        1.0 / (theta + (1.0 + theta * theta).sqrt())
    } else {
        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Column rotation J with J_pp = c, J_pq = s, J_qp = -s e^{-i phi},
    // J_qq = c e^{-i phi}; apply A <- J* A J and U <- U J.
    let phase_conj = phase.conj();
    let jqp = -phase_conj * s;
    let jqq = phase_conj * c;

    let n = m.dim();
    // A <- A J (columns p, q).
    for i in 0..n {
        let aip = m[(i, p)];
        let aiq = m[(i, q)];
        m[(i, p)] = aip * c + aiq * jqp;
        m[(i, q)] = aip * s + aiq * jqq;
    }
    // A <- J* A (rows p, q).
    for j in 0..n {
        let apj = m[(p, j)];
        let aqj = m[(q, j)];
        m[(p, j)] = apj * c + aqj * jqp.conj();
        m[(q, j)] = apj * s + aqj * jqq.conj();
    }
    // Pin the analytically known entries to kill rounding drift.
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)] = Complex64::new(alpha - t * abs_b, 0.0);
    m[(q, q)] = Complex64::new(gamma + t * abs_b, 0.0);

    // U <- U J.
    for i in 0..n {
        let uip = u[(i, p)];
        let uiq = u[(i, q)];
        u[(i, p)] = uip * c + uiq * jqp;
        u[(i, q)] = uip * s + uiq * jqq;
    }
}

/// Rotate each column so its first non-negligible component is real positive.
fn canonicalize_phases(u: &mut ComplexMatrix) {
    let n = u.dim();
    for j in 0..n {
        let mut lead = None;
        for i in 0..n {
            if u[(i, j)].norm() > 1e-12 {
                lead = Some(u[(i, j)]);
                break;
            }
        }
        if let Some(z) = lead {
            let factor = z.conj() / z.norm();
            for i in 0..n {
                let v = u[(i, j)] * factor;
                u[(i, j)] = v;
            }
        }
    }
}

fn compare_columns(u: &ComplexMatrix, a: usize, b: usize) -> std::cmp::Ordering {
    for i in 0..u.dim() {
        let (x, y) = (u[(i, a)], u[(i, b)]);
        match x.re.partial_cmp(&y.re).expect("finite") {
            std::cmp::Ordering::Equal => {}
            ord => return ord,
        }
        match x.im.partial_cmp(&y.im).expect("finite") {
            std::cmp::Ordering::Equal => {}
            ord => return ord,
        }
    }
    std::cmp::Ordering::Equal
}
