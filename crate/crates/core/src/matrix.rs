//! Dense complex square matrices and the Hermitian refinement.
//!
//! Everything downstream (states, entropies, thermodynamic functionals)
//! evaluates through these two types. Storage is row-major `Complex64`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// Square matrix over `Complex64`, row-major, `n >= 1`, all entries finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::BadShape {
                n,
                got: entries.len(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteEntries);
        }
        Ok(Self { n, entries })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Self { n, entries }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Build from nested rows of `(re, im)` pairs; rows must form a square.
    pub fn from_rows(rows: &[Vec<(f64, f64)>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::BadShape {
                    n,
                    got: row.len() * n,
                });
            }
            for &(re, im) in row {
                entries.push(Complex64::new(re, im));
            }
        }
        Self::new(n, entries)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            n: self.n,
            entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            n: self.n,
            entries,
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Determinant by LU elimination with partial pivoting; singular -> 0.
    pub fn determinant(&self) -> Complex64 {
        let n = self.n;
        let mut m = self.entries.clone();
        let at = |m: &[Complex64], i: usize, j: usize| m[i * n + j];
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let mut pivot = col;
            let mut best = at(&m, col, col).norm_sqr();
            for row in (col + 1)..n {
                let v = at(&m, row, col).norm_sqr();
                if v > best {
                    best = v;
                    pivot = row;
                }
            }
            if best == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != col {
                for j in 0..n {
                    m.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = at(&m, col, col);
            det *= p;
            for row in (col + 1)..n {
                let factor = at(&m, row, col) / p;
                for j in col..n {
                    let v = at(&m, col, j);
                    m[row * n + j] -= factor * v;
                }
            }
        }
        det
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.n + j]
    }
}

/// Hermitian matrix. Construction symmetrizes to `(A + A*)/2`, so the stored
/// form satisfies `m[(j, i)] == m[(i, j)].conj()` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    mat: ComplexMatrix,
}

impl HermitianMatrix {
    /// Validate Hermiticity within `1e-12 * max(1, max-norm)` and store the
    /// symmetrized form.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let tol = tol::scaled(tol::HERMITIAN_TOL_FACTOR, mat.max_abs_entry());
        let mut deviation = 0.0f64;
        for i in 0..mat.dim() {
            for j in i..mat.dim() {
                let d = (mat[(i, j)] - mat[(j, i)].conj()).norm();
                deviation = deviation.max(d);
            }
        }
        if deviation > tol {
            return Err(Error::NotHermitian { deviation, tol });
        }
        Ok(Self::symmetrize(mat))
    }

    /// Force `(A + A*)/2` without a deviation check. For results that are
    /// Hermitian by construction up to rounding.
    pub(crate) fn symmetrize(mut mat: ComplexMatrix) -> Self {
        let n = mat.dim();
        for i in 0..n {
            let d = mat[(i, i)].re;
            mat[(i, i)] = Complex64::new(d, 0.0);
            for j in (i + 1)..n {
                let avg = (mat[(i, j)] + mat[(j, i)].conj()) * 0.5;
                mat[(i, j)] = avg;
                mat[(j, i)] = avg.conj();
            }
        }
        Self { mat }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Self {
            mat: ComplexMatrix::from_real_diag(diag),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            mat: ComplexMatrix::zeros(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// Hermitian sum (closed under addition).
    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self::symmetrize(self.mat.add(&other.mat)?))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self::symmetrize(self.mat.sub(&other.mat)?))
    }

    /// Real scaling (closed under real scalars).
    pub fn scale_re(&self, c: f64) -> Self {
        Self {
            mat: self.mat.scale_re(c),
        }
    }

    /// `A + gamma * I`.
    pub fn add_scaled_identity(&self, gamma: f64) -> Self {
        let mut mat = self.mat.clone();
        for i in 0..mat.dim() {
            let v = mat[(i, i)].re + gamma;
            mat[(i, i)] = Complex64::new(v, 0.0);
        }
        Self { mat }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.frobenius_norm()
    }

    /// Real trace (diagonal is exactly real after symmetrization).
    pub fn trace_re(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).sum()
    }
}

/// Which bracket `bracket` computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketKind {
    /// `[A, B] = AB - BA` (anti-Hermitian for Hermitian inputs).
    Commutator,
    /// `{A, B} = AB + BA` (Hermitian for Hermitian inputs).
    Anticommutator,
}

/// `[A, B]` or `{A, B}` of two observables.
pub fn bracket(a: &HermitianMatrix, b: &HermitianMatrix, kind: BracketKind) -> Result<ComplexMatrix> {
    let ab = a.matrix().matmul(b.matrix())?;
    let ba = b.matrix().matmul(a.matrix())?;
    match kind {
        BracketKind::Commutator => ab.sub(&ba),
        BracketKind::Anticommutator => ab.add(&ba),
    }
}

/// Trace of the ordered product of `factors`.
pub fn trace_product(factors: &[&ComplexMatrix]) -> Result<Complex64> {
    let first = factors.first().ok_or(Error::BadShape { n: 0, got: 0 })?;
    let mut acc = (*first).clone();
    for f in &factors[1..] {
        acc = acc.matmul(f)?;
    }
    Ok(acc.trace())
}

/// `Tr(A B)` for the positive pair `A = a_half a_half*`, `B = b_half b_half*`,
/// evaluated as `||b_half* a_half||_F^2`. The sum of squares is immune to the
/// cancellation the entrywise trace suffers when the result is exponentially
/// smaller than the factors' entries (Boltzmann-weighted traces are).
pub fn psd_trace_product(a_half: &ComplexMatrix, b_half: &ComplexMatrix) -> Result<f64> {
    let m = b_half.adjoint().matmul(a_half)?;
    Ok(m.entries().iter().map(|z| z.norm_sqr()).sum())
}

/// Gram matrix `tau[j][k] = Tr(D_j D_k*)` in the Hilbert-Schmidt inner
/// product. Hermitian and positive semidefinite by construction.
pub fn gram(deviations: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let m = deviations.len();
    if m == 0 {
        return Err(Error::BadShape { n: 0, got: 0 });
    }
    let n = deviations[0].dim();
    for d in deviations {
        if d.dim() != n {
            return Err(Error::DimensionMismatch(n, d.dim()));
        }
    }
    let mut tau = ComplexMatrix::zeros(m);
    for j in 0..m {
        for k in j..m {
            // Tr(D_j D_k*) is the entrywise Frobenius inner product.
            let mut s = Complex64::new(0.0, 0.0);
            for (a, b) in deviations[j].entries().iter().zip(deviations[k].entries()) {
                s += a * b.conj();
            }
            tau[(j, k)] = s;
            tau[(k, j)] = s.conj();
        }
        let d = tau[(j, j)].re;
        tau[(j, j)] = Complex64::new(d, 0.0);
    }
    Ok(tau)
}

#[cfg(test)]
mod tests {
    use super::*;

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

    #[test]
    fn rejects_bad_shapes_and_nonfinite() {
        assert!(ComplexMatrix::new(0, vec![]).is_err());
        assert!(ComplexMatrix::new(2, vec![Complex64::new(1.0, 0.0); 3]).is_err());
        let mut e = vec![Complex64::new(0.0, 0.0); 4];
        e[1] = Complex64::new(f64::NAN, 0.0);
        assert!(ComplexMatrix::new(2, e).is_err());
    }

    #[test]
    fn hermitian_check_and_symmetrization() {
        let m = ComplexMatrix::from_rows(&[
            vec![(1.0, 0.0), (2.0, 3.0)],
            vec![(2.0, -3.0), (4.0, 0.0)],
        ])
        .unwrap();
        let h = HermitianMatrix::new(m).unwrap();
        assert_eq!(h.matrix()[(0, 1)], h.matrix()[(1, 0)].conj());

        let bad = ComplexMatrix::from_rows(&[
            vec![(1.0, 0.0), (2.0, 3.0)],
            vec![(2.0, 3.0), (4.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            HermitianMatrix::new(bad),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn trace_of_identity() {
        assert_eq!(ComplexMatrix::identity(12).trace().re, 12.0);
    }

    #[test]
    fn trace_product_diagonal_pair() {
        // Tr(rho^2 sigma^{-1}) for rho = I/2, sigma = diag(1/4, 3/4) -> 4/3
        let rho2 = ComplexMatrix::from_real_diag(&[0.25, 0.25]);
        let sigma_inv = ComplexMatrix::from_real_diag(&[4.0, 4.0 / 3.0]);
        let t = trace_product(&[&rho2, &sigma_inv]).unwrap();
        assert!((t.re - 4.0 / 3.0).abs() < 1e-15);
        assert!(t.im.abs() < 1e-15);
    }

    #[test]
    fn trace_product_is_cyclic() {
        use crate::rng::substream;
        use rand::Rng;
        let mut rng = substream(7, "cyclic", 0);
        for _ in 0..16 {
            let rnd = |rng: &mut rand_chacha::ChaCha12Rng| {
                ComplexMatrix::from_fn(4, |_, _| {
                    Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                })
            };
            let (a, b, c) = (rnd(&mut rng), rnd(&mut rng), rnd(&mut rng));
            let abc = trace_product(&[&a, &b, &c]).unwrap();
            let bca = trace_product(&[&b, &c, &a]).unwrap();
            assert!((abc - bca).norm() < 1e-12 * (1.0 + abc.norm()));
        }
    }

    #[test]
    fn pauli_brackets() {
        // [sx, sy] = 2i sz, {sx, sy} = 0, [A, A] = 0
        let comm = bracket(&pauli_x(), &pauli_y(), BracketKind::Commutator).unwrap();
        let expect = pauli_z().matrix().scale(Complex64::new(0.0, 2.0));
        assert!(comm.sub(&expect).unwrap().max_abs_entry() < 1e-15);

        let anti = bracket(&pauli_x(), &pauli_y(), BracketKind::Anticommutator).unwrap();
        assert!(anti.max_abs_entry() < 1e-15);

        let self_comm = bracket(&pauli_y(), &pauli_y(), BracketKind::Commutator).unwrap();
        assert!(self_comm.max_abs_entry() == 0.0);
    }

    #[test]
    fn commutator_times_i_is_hermitian() {
        let ic = bracket(&pauli_x(), &pauli_y(), BracketKind::Commutator)
            .unwrap()
            .scale(Complex64::new(0.0, 1.0));
        assert!(HermitianMatrix::new(ic).is_ok());
    }

    #[test]
    fn determinants() {
        assert_eq!(ComplexMatrix::identity(4).determinant().re, 1.0);

        let m = ComplexMatrix::from_rows(&[
            vec![(0.0, 0.0), (-0.5, 0.0)],
            vec![(0.5, 0.0), (0.0, 0.0)],
        ])
        .unwrap();
        assert!((m.determinant().re - 0.25).abs() < 1e-15);

        let d = ComplexMatrix::from_real_diag(&[2.0, -3.0, 0.5]);
        assert!((d.determinant().re - (2.0 * -3.0 * 0.5)).abs() < 1e-15);

        let singular = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        assert_eq!(singular.determinant(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn gram_basics() {
        // Single deviation: tau = [Tr D D*] >= 0.
        let d = ComplexMatrix::from_rows(&[
            vec![(1.0, 2.0), (0.0, 0.0)],
            vec![(0.0, 0.0), (0.0, -1.0)],
        ])
        .unwrap();
        let tau = gram(std::slice::from_ref(&d)).unwrap();
        assert!((tau[(0, 0)].re - 6.0).abs() < 1e-15);
        assert_eq!(tau[(0, 0)].im, 0.0);

        // Duplicate deviations: singular Gram.
        let tau2 = gram(&[d.clone(), d]).unwrap();
        assert!(tau2.determinant().norm() < 1e-12);
    }

    #[test]
    fn gram_dimension_mismatch() {
        let a = ComplexMatrix::zeros(2);
        let b = ComplexMatrix::zeros(3);
        assert!(matches!(
            gram(&[a, b]),
            Err(Error::DimensionMismatch(2, 3))
        ));
    }
}
