//! Kraus-represented quantum channels.
//!
//! Vectorization is column stacking throughout (`vec(A)[i + d*j] = A[i][j]`),
//! so `vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ)` and a Kraus map `{E_ℓ}` has superoperator
//! `Σ_ℓ conj(E_ℓ) ⊗ E_ℓ`. The Choi matrix is `J = Σ_ij |i⟩⟨j| ⊗ Λ(|i⟩⟨j|)`
//! (input factor first).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, eig_hermitian, ComplexMatrix, DensityMatrix, C64};
use crate::tol;

/// Ordered Kraus operators `{E_ℓ}` acting as `Λ(ρ) = Σ_ℓ E_ℓ ρ E_ℓ†`.
///
/// Construction only checks shapes. Trace preservation and complete
/// positivity are reported by [`KrausMap::validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct KrausMap {
    dim: usize,
    operators: Vec<ComplexMatrix>,
}

impl KrausMap {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let dim =
            operators.first().map(|e| e.dim()).ok_or_else(|| Error::InvalidParameter("empty Kraus list".into()))?;
        if let Some(bad) = operators.iter().find(|e| e.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        if operators.len() > dim * dim {
            return Err(Error::TooManyOperators { count: operators.len(), max: dim * dim });
        }
        Ok(Self { dim, operators })
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, operators: vec![ComplexMatrix::identity(dim)] }
    }

    pub fn unitary(u: ComplexMatrix) -> Self {
        Self { dim: u.dim(), operators: vec![u] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Structural report: trace preservation, complete positivity, unitality.
    pub fn validate(&self) -> ValidationReport {
        let id = ComplexMatrix::identity(self.dim);
        let mut tp = ComplexMatrix::zeros(self.dim);
        let mut un = ComplexMatrix::zeros(self.dim);
        for e in &self.operators {
            tp = &tp + &e.adjoint().matmul(e);
            un = &un + &e.matmul(&e.adjoint());
        }
        let tp_residual = tp.max_abs_diff(&id);
        let unital_residual = un.max_abs_diff(&id);
        let choi = self.choi();
        let choi_min_eigenvalue = choi.min_eigenvalue();
        ValidationReport {
            trace_preserving: tp_residual <= tol::TP,
            completely_positive: choi_min_eigenvalue >= -tol::CP,
            unital: unital_residual <= tol::TP,
            tp_residual,
            unital_residual,
            choi_min_eigenvalue,
        }
    }

    /// Linear action on an arbitrary operator.
    pub fn apply_matrix(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: a.dim() });
        }
        let mut out = ComplexMatrix::zeros(self.dim);
        for e in &self.operators {
            out = &out + &e.matmul(a).matmul(&e.adjoint());
        }
        Ok(out)
    }

    /// `Λ(ρ)`, re-validated as a density matrix.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        DensityMatrix::new(self.apply_matrix(rho.matrix())?)
    }

    /// `Σ_ℓ conj(E_ℓ) ⊗ E_ℓ`, acting on column-stacked vectors.
    pub fn to_superoperator(&self) -> ComplexMatrix {
        let n = self.dim * self.dim;
        let mut m = ComplexMatrix::zeros(n);
        for e in &self.operators {
            m = &m + &e.conj().kron(e);
        }
        m
    }

    pub fn choi(&self) -> ChoiMatrix {
        let d = self.dim;
        let mat = ComplexMatrix::from_fn(d * d, |r, c| {
            let (i, a) = (r / d, r % d);
            let (j, b) = (c / d, c % d);
            self.operators.iter().map(|e| e[(a, i)] * e[(b, j)].conj()).sum()
        });
        ChoiMatrix { dim: d, mat }
    }

    /// Unique fixed point `π` with `Λ(π) = π`.
    ///
    /// Taken from the superoperator eigenvector whose eigenvalue is closest to
    /// 1, devectorized, Hermitized and normalized to unit trace. Fails when
    /// more than one eigenvalue sits within `tol::FIXED_POINT` of 1 or when
    /// the fixed point is not strictly positive.
    pub fn invariant_state(&self) -> Result<DensityMatrix> {
        let sup = self.to_superoperator().to_faer();
        let evd = sup.eigen().map_err(|_| Error::EigenFailure)?;
        let s = evd.S().column_vector();
        let u = evd.U();
        let n = s.nrows();
        let one = c64(1.0, 0.0);
        let near_one = (0..n).filter(|&k| (s[k] - one).norm() <= tol::FIXED_POINT).count();
        if near_one > 1 {
            return Err(Error::NonUniqueInvariant { count: near_one });
        }
        let best =
            (0..n).min_by(|&a, &b| (s[a] - one).norm().total_cmp(&(s[b] - one).norm())).ok_or(Error::EigenFailure)?;
        let v: Vec<C64> = (0..n).map(|i| u[(i, best)]).collect();
        let a = ComplexMatrix::devectorize(&v)?;
        let tr = a.trace();
        if tr.norm() < 1e-12 {
            return Err(Error::EigenFailure);
        }
        let a = a.scale(tr.inv()).hermitian_part();
        let a = a.scale_real(1.0 / a.trace().re);

        let spec = eig_hermitian(&a)?;
        let min_eigenvalue = spec.eigenvalues[0];
        if min_eigenvalue <= tol::POS_DEF {
            return Err(Error::NotPositiveDefinite { min_eigenvalue });
        }
        let pi = DensityMatrix::new(a)?;
        let residual = self.apply_matrix(pi.matrix())?.max_abs_diff(pi.matrix());
        if residual > tol::FIXED_POINT {
            return Err(Error::NotInvariant { residual });
        }
        Ok(pi)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub trace_preserving: bool,
    pub completely_positive: bool,
    pub unital: bool,
    /// `‖Σ E†E − I‖_max`
    pub tp_residual: f64,
    /// `‖Σ E E† − I‖_max`
    pub unital_residual: f64,
    pub choi_min_eigenvalue: f64,
}

impl ValidationReport {
    pub fn is_cptp(&self) -> bool {
        self.trace_preserving && self.completely_positive
    }
}

/// Choi matrix of a map on a `dim`-dimensional system (size `dim²`).
#[derive(Clone, Debug)]
pub struct ChoiMatrix {
    dim: usize,
    mat: ComplexMatrix,
}

impl ChoiMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn min_eigenvalue(&self) -> f64 {
        eig_hermitian(&self.mat).map(|s| s.eigenvalues[0]).unwrap_or(f64::NEG_INFINITY)
    }

    /// Trace over the output factor; equals the identity for trace-preserving maps.
    pub fn partial_trace_output(&self) -> ComplexMatrix {
        let d = self.dim;
        ComplexMatrix::from_fn(d, |i, j| (0..d).map(|a| self.mat[(i * d + a, j * d + a)]).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli::*;
    use crate::random::{random_density_matrix, random_kraus_map, seeded};

    fn dephasing() -> KrausMap {
        let h = 0.5f64.sqrt();
        KrausMap::new(vec![ComplexMatrix::identity(2).scale_real(h), sigma_z().scale_real(h)]).unwrap()
    }

    #[test]
    fn identity_map_is_unital_cptp() {
        let r = KrausMap::identity(2).validate();
        assert!(r.trace_preserving && r.completely_positive && r.unital);
        assert_eq!(r.tp_residual, 0.0);
        assert_eq!(r.unital_residual, 0.0);
    }

    #[test]
    fn bit_flip_is_unital() {
        let p: f64 = 0.3;
        let m = KrausMap::new(vec![
            sigma_x().scale_real(p.sqrt()),
            ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt()),
        ])
        .unwrap();
        let r = m.validate();
        assert!(r.trace_preserving && r.completely_positive && r.unital);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            KrausMap::new(vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(KrausMap::new(vec![ComplexMatrix::identity(1); 2]), Err(Error::TooManyOperators { .. })));
        assert!(KrausMap::new(vec![]).is_err());
    }

    #[test]
    fn apply_dimension_mismatch() {
        let rho = DensityMatrix::maximally_mixed(3);
        assert!(matches!(KrausMap::identity(2).apply(&rho), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn apply_identity() {
        let mut rng = seeded(1);
        let rho = random_density_matrix(3, &mut rng);
        let out = KrausMap::identity(3).apply(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn superoperator_examples() {
        assert!(KrausMap::identity(2).to_superoperator().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
        let sx = KrausMap::unitary(sigma_x()).to_superoperator();
        assert!(sx.max_abs_diff(&sigma_x().kron(&sigma_x())) < 1e-15);
    }

    #[test]
    fn superoperator_matches_apply() {
        let mut rng = seeded(7);
        let map = random_kraus_map(2, 2, &mut rng);
        let sup = map.to_superoperator();
        for _ in 0..20 {
            let rho = random_density_matrix(2, &mut rng);
            let lhs = sup.apply_vec(&rho.matrix().vectorize());
            let rhs = map.apply(&rho).unwrap().matrix().vectorize();
            let err = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-10, "{err}");
        }
    }

    #[test]
    fn choi_partial_trace_is_identity_for_tp() {
        let mut rng = seeded(3);
        let map = random_kraus_map(3, 4, &mut rng);
        let c = map.choi();
        assert!(c.partial_trace_output().max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
        assert!(c.min_eigenvalue() > -1e-12);
        assert!(c.matrix().hermitian_residual() < 1e-14);
    }

    #[test]
    fn non_tp_map_detected() {
        let m = KrausMap::new(vec![ComplexMatrix::identity(2).scale_real(0.9)]).unwrap();
        let r = m.validate();
        assert!(!r.trace_preserving);
        assert!((r.tp_residual - 0.19).abs() < 1e-12);
    }

    #[test]
    fn invariant_state_of_dephasing_is_maximally_mixed() {
        let pi = dephasing().invariant_state();
        // dephasing leaves every diagonal state fixed
        assert!(matches!(pi, Err(Error::NonUniqueInvariant { .. })));
    }

    #[test]
    fn invariant_state_of_depolarizing_like_map() {
        let h = 0.5f64.sqrt();
        // mixture of identity and the three Paulis: unital with unique fixed point
        let m = KrausMap::new(vec![
            ComplexMatrix::identity(2).scale_real(h),
            sigma_x().scale_real(h * (1.0f64 / 3.0).sqrt()),
            sigma_y().scale_real(h * (1.0f64 / 3.0).sqrt()),
            sigma_z().scale_real(h * (1.0f64 / 3.0).sqrt()),
        ])
        .unwrap();
        let pi = m.invariant_state().unwrap();
        assert!(pi.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-12);
    }

    #[test]
    fn invariant_state_identity_map_is_not_unique() {
        assert!(matches!(KrausMap::identity(2).invariant_state(), Err(Error::NonUniqueInvariant { .. })));
    }

    #[test]
    fn amplitude_damping_has_singular_fixed_point() {
        let g: f64 = 0.4;
        let m = KrausMap::new(vec![
            ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, (1.0 - g).sqrt()]]).unwrap(),
            ComplexMatrix::from_real_rows(&[&[0.0, g.sqrt()], &[0.0, 0.0]]).unwrap(),
        ])
        .unwrap();
        assert!(matches!(m.invariant_state(), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn random_maps_have_invariant_fixed_point() {
        let mut rng = seeded(11);
        for d in 2..=4 {
            let map = random_kraus_map(d, 3, &mut rng);
            let pi = map.invariant_state().unwrap();
            let out = map.apply(&pi).unwrap();
            assert!(out.matrix().max_abs_diff(pi.matrix()) < 1e-8);
        }
    }
}
