//! Dense complex matrices, density matrices and the entropy functionals built
//! on their spectra.
//!
//! Everything here works at desk scale (dimension up to ~16). Matrices are
//! stored row-major; eigen-solves are delegated to `faer` and post-processed
//! into a deterministic ordering and phase convention.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex64;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::NotSquare { rows: dim, cols: if dim == 0 { 0 } else { data.len() / dim } });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: pos / dim, col: pos % dim });
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::NotSquare { rows: dim, cols: bad.len() });
        }
        Self::new(dim, rows.into_iter().flatten().collect())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| c64(x, 0.0)).collect()).collect())
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { c64(1.0, 0.0) } else { c64(0.0, 0.0) })
    }

    pub fn diag(values: &[f64]) -> Self {
        Self::from_fn(values.len(), |i, j| if i == j { c64(values[i], 0.0) } else { c64(0.0, 0.0) })
    }

    pub fn diag_complex(values: &[C64]) -> Self {
        Self::from_fn(values.len(), |i, j| if i == j { values[i] } else { c64(0.0, 0.0) })
    }

    /// |v⟩⟨w|
    pub fn outer(v: &[C64], w: &[C64]) -> Self {
        assert_eq!(v.len(), w.len());
        Self::from_fn(v.len(), |i, j| v[i] * w[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let d = self.dim;
        let mut out = vec![c64(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += a * rhs.data[k * d + j];
                }
            }
        }
        Self { dim: d, data: out }
    }

    /// Matrix-vector product.
    pub fn apply_vec(&self, v: &[C64]) -> Vec<C64> {
        let d = self.dim;
        (0..d).map(|i| (0..d).map(|j| self.data[i * d + j] * v[j]).sum()).collect()
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (a, b) = (self.dim, rhs.dim);
        Self::from_fn(a * b, |r, c| self[(r / b, c / b)] * rhs[(r % b, c % b)])
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        &self.matmul(rhs) - &rhs.matmul(self)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        assert_eq!(self.dim, rhs.dim);
        self.data.iter().zip(&rhs.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// max |A - A†| entrywise
    pub fn hermitian_residual(&self) -> f64 {
        let d = self.dim;
        let mut r: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                r = r.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        r
    }

    /// (A + A†)/2
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Column-stacking vectorization: `vec(A)[i + d*j] = A[i][j]`.
    pub fn vectorize(&self) -> Vec<C64> {
        let d = self.dim;
        let mut v = Vec::with_capacity(d * d);
        for j in 0..d {
            for i in 0..d {
                v.push(self[(i, j)]);
            }
        }
        v
    }

    /// Inverse of [`vectorize`](Self::vectorize).
    pub fn devectorize(v: &[C64]) -> Result<Self> {
        let d = (v.len() as f64).sqrt().round() as usize;
        if d * d != v.len() || d == 0 {
            return Err(Error::DimensionMismatch { expected: d * d, found: v.len() });
        }
        Ok(Self::from_fn(d, |i, j| v[i + d * j]))
    }

    pub(crate) fn to_faer(&self) -> Mat<C64> {
        Mat::from_fn(self.dim, self.dim, |i, j| self[(i, j)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for row in self.data.chunks(self.dim) {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Pauli matrices and qubit ladder operators in the computational basis
/// `{|0⟩, |1⟩}` with `σᶻ|0⟩ = |0⟩`.
pub mod pauli {
    use super::{c64, ComplexMatrix};

    pub fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    pub fn sigma_y() -> ComplexMatrix {
        ComplexMatrix::from_rows(vec![vec![c64(0.0, 0.0), c64(0.0, -1.0)], vec![c64(0.0, 1.0), c64(0.0, 0.0)]]).unwrap()
    }

    pub fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::diag(&[1.0, -1.0])
    }

    /// σ⁺ = |0⟩⟨1|
    pub fn sigma_plus() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap()
    }

    /// σ⁻ = |1⟩⟨0|
    pub fn sigma_minus() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap()
    }

    /// `[I, σˣ, σʸ, σᶻ]`
    pub fn basis() -> [ComplexMatrix; 4] {
        [ComplexMatrix::identity(2), sigma_x(), sigma_y(), sigma_z()]
    }
}

/// Unit-trace, Hermitian, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let herm = mat.hermitian_residual();
        if herm > tol::HERM {
            return Err(Error::InvalidDensity(format!("Hermiticity residual {herm:e}")));
        }
        let tr = mat.trace();
        if (tr - c64(1.0, 0.0)).norm() > tol::TRACE {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let spec = eig_hermitian(&mat)?;
        let min = spec.eigenvalues[0];
        if min < -tol::PSD {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { mat })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { mat: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64) }
    }

    /// |ψ⟩⟨ψ| for a normalized `psi`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidDensity("zero state vector".into()));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&v, &v))
    }

    /// `|i⟩⟨i|` in the computational basis.
    pub fn basis_state(dim: usize, i: usize) -> Self {
        let mut p = vec![0.0; dim];
        p[i] = 1.0;
        Self { mat: ComplexMatrix::diag(&p) }
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::diag(probs))
    }

    /// Qubit state `½(I + r·σ)`.
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        let m = ComplexMatrix::from_rows(vec![
            vec![c64(0.5 * (1.0 + z), 0.0), c64(0.5 * x, -0.5 * y)],
            vec![c64(0.5 * x, 0.5 * y), c64(0.5 * (1.0 - z), 0.0)],
        ])?;
        Self::new(m)
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

    pub fn spectrum(&self) -> SpectralDecomposition {
        eig_hermitian(&self.mat).expect("density matrices are Hermitian")
    }

    /// Bloch vector of a qubit state.
    pub fn bloch(&self) -> Option<[f64; 3]> {
        if self.dim() != 2 {
            return None;
        }
        let m = &self.mat;
        Some([2.0 * m[(0, 1)].re, -2.0 * m[(0, 1)].im, (m[(0, 0)] - m[(1, 1)]).re])
    }
}

/// Eigenvalues in ascending order with orthonormal eigenvectors stored as columns.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, i: usize) -> Vec<C64> {
        self.eigenvectors.column(i)
    }

    /// `V f(Λ) V†`
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let d = self.dim();
        ComplexMatrix::from_fn(d, |i, j| (0..d).map(|k| v[(i, k)] * v[(j, k)].conj() * fl[k]).sum())
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_eigenvalues(|l| l)
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues come back ascending. Each eigenvector is rotated so its first
/// component with modulus above 1e-12 is real and positive, which makes the
/// output deterministic for non-degenerate spectra.
pub fn eig_hermitian(a: &ComplexMatrix) -> Result<SpectralDecomposition> {
    let residual = a.hermitian_residual();
    if residual > tol::HERM {
        return Err(Error::NotHermitian { residual });
    }
    let d = a.dim();
    let h = a.hermitian_part().to_faer();
    let evd = h.self_adjoint_eigen(Side::Lower).map_err(|_| Error::EigenFailure)?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| s[i].re.total_cmp(&s[j].re));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| s[k].re).collect();
    let mut vecs = ComplexMatrix::zeros(d);
    for (col, &k) in order.iter().enumerate() {
        let lead = (0..d).map(|i| u[(i, k)]).find(|z| z.norm() > 1e-12).unwrap_or(c64(1.0, 0.0));
        let phase = lead.conj() / lead.norm();
        for i in 0..d {
            vecs[(i, col)] = u[(i, k)] * phase;
        }
    }
    Ok(SpectralDecomposition { eigenvalues, eigenvectors: vecs })
}

/// Principal real power `V Λᵖ V†` of a positive semidefinite matrix.
pub fn mat_power(a: &ComplexMatrix, p: f64) -> Result<ComplexMatrix> {
    let spec = eig_hermitian(a)?;
    let min = spec.eigenvalues[0];
    if min < -tol::PSD {
        return Err(Error::InvalidParameter(format!("matrix is not positive semidefinite (eigenvalue {min:e})")));
    }
    if p < 0.0 && min <= tol::EPS_INV {
        return Err(Error::SingularForNegativePower { eigenvalue: min });
    }
    Ok(spec.map_eigenvalues(|l| if p == 0.0 { 1.0 } else { l.max(0.0).powf(p) }))
}

/// `-Σ λ ln λ` with the `0 ln 0 = 0` convention below `EPS_LOG`.
fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values.iter().filter(|&&l| l > tol::EPS_LOG).map(|&l| -l * l.ln()).sum()
}

/// Von Neumann entropy `−Tr[ρ ln ρ]` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.spectrum().eigenvalues).max(0.0)
}

/// Quantum relative entropy `Tr[ρ ln ρ − ρ ln σ]` in nats.
///
/// Fails with [`Error::SupportViolation`] when `ρ` has weight on the kernel
/// of `σ`, where the relative entropy is infinite.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: sigma.dim() });
    }
    let r = rho.spectrum();
    let s = sigma.spectrum();
    let d = rho.dim();

    let kernel: Vec<Vec<C64>> =
        (0..d).filter(|&j| s.eigenvalues[j] <= tol::EPS_LOG).map(|j| s.eigenvector(j)).collect();
    if !kernel.is_empty() {
        for i in (0..d).filter(|&i| r.eigenvalues[i] > tol::EPS_LOG) {
            let v = r.eigenvector(i);
            let leak: f64 = kernel
                .iter()
                .map(|k| k.iter().zip(&v).map(|(a, b)| a.conj() * b).sum::<C64>().norm_sqr())
                .sum::<f64>()
                .sqrt();
            if leak > tol::SUPPORT {
                return Err(Error::SupportViolation { leak });
            }
        }
    }

    let neg_entropy = -entropy_of_spectrum(&r.eigenvalues);
    let rho_m = rho.matrix();
    let cross: f64 = (0..d)
        .filter(|&j| s.eigenvalues[j] > tol::EPS_LOG)
        .map(|j| {
            let v = s.eigenvector(j);
            let w = rho_m.apply_vec(&v);
            let weight: f64 = v.iter().zip(&w).map(|(a, b)| a.conj() * b).sum::<C64>().re;
            weight * s.eigenvalues[j].ln()
        })
        .sum();
    Ok(neg_entropy - cross)
}
