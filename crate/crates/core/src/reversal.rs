//! Time reversal, the dual (backward) map, and the nonequilibrium potential
//! of an invariant state.
//!
//! Time reversal `Θ` is complex conjugation in the computational basis, so
//! `Θ A Θ† = conj(A)` and `Tr[Θ A Θ†] = conj(Tr[A])`.

use serde::{Deserialize, Serialize};

use crate::cptp::KrausMap;
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, mat_power, ComplexMatrix, DensityMatrix, SpectralDecomposition};
use crate::tol;

/// `Θ A Θ†` for `Θ` = complex conjugation.
pub fn time_reverse(a: &ComplexMatrix) -> ComplexMatrix {
    a.conj()
}

pub fn time_reverse_state(rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::new(time_reverse(rho.matrix())).expect("conjugation preserves density matrices")
}

fn ensure_positive_definite(pi: &DensityMatrix) -> Result<()> {
    let min_eigenvalue = pi.spectrum().eigenvalues[0];
    if min_eigenvalue <= tol::POS_DEF {
        return Err(Error::NotPositiveDefinite { min_eigenvalue });
    }
    Ok(())
}

/// Backward map with Kraus operators `Ẽ_ℓ = Θ π^{1/2} E_ℓ† π^{-1/2} Θ†`.
///
/// `π` must be a positive-definite fixed point of `map`. The result is
/// trace preserving and has `Θ π Θ†` as a fixed point.
pub fn dual_map(map: &KrausMap, pi: &DensityMatrix) -> Result<KrausMap> {
    if pi.dim() != map.dim() {
        return Err(Error::DimensionMismatch { expected: map.dim(), found: pi.dim() });
    }
    ensure_positive_definite(pi)?;
    let residual = map.apply_matrix(pi.matrix())?.max_abs_diff(pi.matrix());
    if residual > tol::FIXED_POINT {
        return Err(Error::NotInvariant { residual });
    }
    let sqrt_pi = mat_power(pi.matrix(), 0.5)?;
    let inv_sqrt_pi = mat_power(pi.matrix(), -0.5)?;
    let ops =
        map.operators().iter().map(|e| time_reverse(&sqrt_pi.matmul(&e.adjoint()).matmul(&inv_sqrt_pi))).collect();
    KrausMap::new(ops)
}

/// Spectral data of an invariant state with `phi[i] = −ln π_i`.
#[derive(Clone, Debug)]
pub struct NonequilibriumPotential {
    pub pi: DensityMatrix,
    pub spectrum: SpectralDecomposition,
    pub phi: Vec<f64>,
}

impl NonequilibriumPotential {
    pub fn dim(&self) -> usize {
        self.phi.len()
    }

    /// `−ln π` as an operator.
    pub fn phi_operator(&self) -> ComplexMatrix {
        self.spectrum.map_eigenvalues(|l| -l.ln())
    }

    /// `π^{-1/2}`
    pub fn inv_sqrt_pi(&self) -> ComplexMatrix {
        self.spectrum.map_eigenvalues(|l| l.powf(-0.5))
    }

    /// Potential values with eigenvalues closer than `tol` collapsed onto the
    /// first member of their cluster, so differences inside a degenerate
    /// block are exactly zero.
    pub fn grouped_phi(&self, tol: f64) -> Vec<f64> {
        let mut reps = Vec::with_capacity(self.phi.len());
        let mut anchor = f64::NAN;
        for &p in &self.phi {
            if !((p - anchor).abs() <= tol) {
                anchor = p;
            }
            reps.push(anchor);
        }
        reps
    }

    /// Expansion coefficients `m_ji = ⟨π_j|E|π_i⟩`.
    pub fn coefficients(&self, e: &ComplexMatrix) -> ComplexMatrix {
        let v = &self.spectrum.eigenvectors;
        v.adjoint().matmul(e).matmul(v)
    }
}

pub fn build_potential(pi: &DensityMatrix) -> Result<NonequilibriumPotential> {
    let spectrum = eig_hermitian(pi.matrix())?;
    let min_eigenvalue = spectrum.eigenvalues[0];
    if min_eigenvalue <= tol::POS_DEF {
        return Err(Error::NotPositiveDefinite { min_eigenvalue });
    }
    let phi = spectrum.eigenvalues.iter().map(|l| -l.ln()).collect();
    Ok(NonequilibriumPotential { pi: pi.clone(), spectrum, phi })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorClass {
    Classified { delta_phi: f64 },
    Unclassifiable,
}

impl OperatorClass {
    pub fn delta_phi(&self) -> Option<f64> {
        match self {
            OperatorClass::Classified { delta_phi } => Some(*delta_phi),
            OperatorClass::Unclassifiable => None,
        }
    }
}

/// Per-operator potential change and whether every operator has one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KrausClassification {
    pub per_operator: Vec<OperatorClass>,
    pub satisfies_assumption_i: bool,
}

impl KrausClassification {
    pub fn delta_phis(&self) -> Option<Vec<f64>> {
        self.per_operator.iter().map(|c| c.delta_phi()).collect()
    }
}

/// Groups each Kraus operator by the change of nonequilibrium potential of
/// the transitions `|π_i⟩ → |π_j⟩` it contains.
///
/// Only coefficients with `|m_ji| > tol` count. An operator is classified
/// when all of its `Φ(j) − Φ(i)` agree within `tol`; the zero operator is
/// classified with `ΔΦ = 0`.
pub fn classify_kraus(map: &KrausMap, pot: &NonequilibriumPotential, tol: f64) -> KrausClassification {
    let reps = pot.grouped_phi(tol);
    let d = pot.dim();
    let per_operator: Vec<OperatorClass> = map
        .operators()
        .iter()
        .map(|e| {
            let m = pot.coefficients(e);
            let mut common: Option<f64> = None;
            for j in 0..d {
                for i in 0..d {
                    if m[(j, i)].norm() <= tol {
                        continue;
                    }
                    let diff = reps[j] - reps[i];
                    match common {
                        None => common = Some(diff),
                        Some(c) if (c - diff).abs() <= tol => {}
                        Some(_) => return OperatorClass::Unclassifiable,
                    }
                }
            }
            OperatorClass::Classified { delta_phi: common.unwrap_or(0.0) }
        })
        .collect();
    let satisfies_assumption_i = map.dim() == d && per_operator.iter().all(|c| c.delta_phi().is_some());
    KrausClassification { per_operator, satisfies_assumption_i }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutationResidual {
    /// `max_ℓ ‖π^{-1/2} E_ℓ − e^{ΔΦ_ℓ/2} E_ℓ π^{-1/2}‖_max`
    pub forward: f64,
    /// `max_ℓ ‖E_ℓ† π^{-1/2} − e^{ΔΦ_ℓ/2} π^{-1/2} E_ℓ†‖_max`
    pub adjoint: f64,
}

impl CommutationResidual {
    pub fn max(&self) -> f64 {
        self.forward.max(self.adjoint)
    }
}

/// Residuals of the exchange relations between `π^{-1/2}` and each Kraus
/// operator of a classified map.
pub fn verify_commutation(
    map: &KrausMap,
    pot: &NonequilibriumPotential,
    cls: &KrausClassification,
) -> Result<CommutationResidual> {
    if !cls.satisfies_assumption_i || cls.per_operator.len() != map.len() {
        return Err(Error::AssumptionNotSatisfied("Kraus operators are not all classified".into()));
    }
    let s = pot.inv_sqrt_pi();
    let mut res = CommutationResidual { forward: 0.0, adjoint: 0.0 };
    for (e, c) in map.operators().iter().zip(&cls.per_operator) {
        let k = (c.delta_phi().expect("classified") / 2.0).exp();
        let ed = e.adjoint();
        res.forward = res.forward.max(s.matmul(e).max_abs_diff(&e.matmul(&s).scale_real(k)));
        res.adjoint = res.adjoint.max(ed.matmul(&s).max_abs_diff(&s.matmul(&ed).scale_real(k)));
    }
    Ok(res)
}

/// Checks that `projectors` are Hermitian, idempotent, rank one, mutually
/// orthogonal and sum to the identity.
pub fn validate_projector_set(projectors: &[ComplexMatrix]) -> Result<()> {
    let d = projectors.first().map(|p| p.dim()).ok_or_else(|| Error::NotAProjectorSet("empty".into()))?;
    let mut sum = ComplexMatrix::zeros(d);
    for (a, p) in projectors.iter().enumerate() {
        if p.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
        }
        if p.hermitian_residual() > tol::PROJECTOR || p.matmul(p).max_abs_diff(p) > tol::PROJECTOR {
            return Err(Error::NotAProjectorSet(format!("element {a} is not an orthogonal projector")));
        }
        let trace = p.trace().re;
        if (trace - 1.0).abs() > tol::PROJECTOR {
            return Err(Error::NotRankOne { index: a, trace });
        }
        for (b, q) in projectors.iter().enumerate().skip(a + 1) {
            if p.matmul(q).max_abs() > tol::PROJECTOR {
                return Err(Error::NotAProjectorSet(format!("elements {a} and {b} are not orthogonal")));
            }
        }
        sum = &sum + p;
    }
    if projectors.len() != d {
        return Err(Error::NotAProjectorSet(format!("{} projectors for dimension {d}", projectors.len())));
    }
    if sum.max_abs_diff(&ComplexMatrix::identity(d)) > tol::PROJECTOR {
        return Err(Error::NotAProjectorSet("projectors do not sum to the identity".into()));
    }
    Ok(())
}

/// True iff every projector commutes with `π` within `tol::PROJECTOR`.
pub fn check_observable_compatibility(projectors: &[ComplexMatrix], pot: &NonequilibriumPotential) -> Result<bool> {
    validate_projector_set(projectors)?;
    if projectors[0].dim() != pot.dim() {
        return Err(Error::DimensionMismatch { expected: pot.dim(), found: projectors[0].dim() });
    }
    let pi = pot.pi.matrix();
    Ok(projectors.iter().all(|p| p.commutator(pi).max_abs() <= tol::PROJECTOR))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli::*;
    use crate::linalg::{c64, C64};
    use crate::random::{random_unitary, seeded};
    use std::f64::consts::LN_2;

    fn dephasing() -> KrausMap {
        let h = 0.5f64.sqrt();
        KrausMap::new(vec![ComplexMatrix::identity(2).scale_real(h), sigma_z().scale_real(h)]).unwrap()
    }

    fn z_projectors() -> Vec<ComplexMatrix> {
        vec![ComplexMatrix::diag(&[1.0, 0.0]), ComplexMatrix::diag(&[0.0, 1.0])]
    }

    fn x_projectors() -> Vec<ComplexMatrix> {
        let h = 0.5f64.sqrt();
        let plus = [c64(h, 0.0), c64(h, 0.0)];
        let minus = [c64(h, 0.0), c64(-h, 0.0)];
        vec![ComplexMatrix::outer(&plus, &plus), ComplexMatrix::outer(&minus, &minus)]
    }

    #[test]
    fn time_reversal_examples() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        assert_eq!(time_reverse(&a), a);
        let isy = sigma_y().scale(c64(0.0, 1.0));
        assert_eq!(time_reverse(&isy), isy);
        assert_eq!(time_reverse(&sigma_y()), sigma_y().scale_real(-1.0));
        let th = 0.7f64;
        let d = ComplexMatrix::diag_complex(&[C64::from_polar(1.0, th), C64::from_polar(1.0, -th)]);
        let expected = ComplexMatrix::diag_complex(&[C64::from_polar(1.0, -th), C64::from_polar(1.0, th)]);
        assert!(time_reverse(&d).max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn dual_of_dephasing_is_itself() {
        let m = dephasing();
        let dual = dual_map(&m, &DensityMatrix::maximally_mixed(2)).unwrap();
        for (a, b) in dual.operators().iter().zip(m.operators()) {
            assert!(a.max_abs_diff(b) < 1e-14);
        }
    }

    #[test]
    fn dual_of_unitary_is_reversed_adjoint() {
        let mut rng = seeded(2);
        let u = random_unitary(3, &mut rng);
        let dual = dual_map(&KrausMap::unitary(u.clone()), &DensityMatrix::maximally_mixed(3)).unwrap();
        assert!(dual.operators()[0].max_abs_diff(&time_reverse(&u.adjoint())) < 1e-13);
    }

    #[test]
    fn dual_rejects_non_invariant_state() {
        let pi = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        let m = KrausMap::unitary(sigma_x());
        assert!(matches!(dual_map(&m, &pi), Err(Error::NotInvariant { .. })));
        let singular = DensityMatrix::basis_state(2, 0);
        assert!(matches!(dual_map(&KrausMap::identity(2), &singular), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn potential_examples() {
        let p = build_potential(&DensityMatrix::maximally_mixed(2)).unwrap();
        assert!((p.phi[0] - LN_2).abs() < 1e-15 && (p.phi[1] - LN_2).abs() < 1e-15);

        let p = build_potential(&DensityMatrix::diagonal(&[1.0 / 3.0, 2.0 / 3.0]).unwrap()).unwrap();
        assert!((p.phi[0] - 3f64.ln()).abs() < 1e-14);
        assert!((p.phi[1] - 1.5f64.ln()).abs() < 1e-14);
        assert!((p.phi[0] - p.phi[1] - LN_2).abs() < 1e-14);

        let p = build_potential(&DensityMatrix::diagonal(&[0.25, 0.25, 0.5]).unwrap()).unwrap();
        let want = [4f64.ln(), 4f64.ln(), LN_2];
        for (a, b) in p.phi.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(matches!(build_potential(&DensityMatrix::basis_state(2, 1)), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn dephasing_classifies_with_zero_potential_change() {
        let pot = build_potential(&DensityMatrix::maximally_mixed(2)).unwrap();
        let cls = classify_kraus(&dephasing(), &pot, tol::CLASSIFY);
        assert!(cls.satisfies_assumption_i);
        assert_eq!(cls.delta_phis().unwrap(), vec![0.0, 0.0]);
        let r = verify_commutation(&dephasing(), &pot, &cls).unwrap();
        assert!(r.max() < 1e-14);
    }

    #[test]
    fn mixing_jump_is_unclassifiable() {
        let pot = build_potential(&DensityMatrix::diagonal(&[1.0 / 3.0, 2.0 / 3.0]).unwrap()).unwrap();
        let swap = KrausMap::unitary(sigma_x());
        let cls = classify_kraus(&swap, &pot, tol::CLASSIFY);
        assert_eq!(cls.per_operator, vec![OperatorClass::Unclassifiable]);
        assert!(!cls.satisfies_assumption_i);
        assert!(matches!(verify_commutation(&swap, &pot, &cls), Err(Error::AssumptionNotSatisfied(_))));
    }

    #[test]
    fn zero_operator_is_classified() {
        let pot = build_potential(&DensityMatrix::diagonal(&[0.4, 0.6]).unwrap()).unwrap();
        let m = KrausMap::new(vec![ComplexMatrix::identity(2), ComplexMatrix::zeros(2)]).unwrap();
        let cls = classify_kraus(&m, &pot, tol::CLASSIFY);
        assert_eq!(cls.delta_phis().unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn observable_compatibility() {
        let thermal = build_potential(&DensityMatrix::diagonal(&[1.0 / 3.0, 2.0 / 3.0]).unwrap()).unwrap();
        assert!(check_observable_compatibility(&z_projectors(), &thermal).unwrap());
        assert!(!check_observable_compatibility(&x_projectors(), &thermal).unwrap());
        let flat = build_potential(&DensityMatrix::maximally_mixed(2)).unwrap();
        assert!(check_observable_compatibility(&x_projectors(), &flat).unwrap());
    }

    #[test]
    fn projector_set_errors() {
        let pot = build_potential(&DensityMatrix::maximally_mixed(2)).unwrap();
        let degenerate = vec![ComplexMatrix::identity(2), ComplexMatrix::zeros(2)];
        assert!(check_observable_compatibility(&degenerate, &pot).is_err());
        let incomplete = vec![ComplexMatrix::diag(&[1.0, 0.0]), ComplexMatrix::diag(&[1.0, 0.0])];
        assert!(matches!(check_observable_compatibility(&incomplete, &pot), Err(Error::NotAProjectorSet(_))));
        let not_rank_one = vec![ComplexMatrix::diag(&[1.0, 0.0, 0.0]), ComplexMatrix::diag(&[0.0, 1.0, 1.0])];
        assert!(matches!(validate_projector_set(&not_rank_one), Err(Error::NotRankOne { index: 1, .. })));
    }
}
