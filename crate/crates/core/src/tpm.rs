//! Two-point-measurement (TPM) statistics.
//!
//! Forward protocol: measure `O_in` on `ρ₀`, evolve with `Λ`, measure
//! `O_fin`. Backward protocol: prepare the time-reversed final outcome,
//! evolve with the dual map, measure the time-reversed `O_in`. Tables are
//! indexed `[k][m]` for forward quantities (final outcome first) and
//! `[m][k]` for backward joint probabilities.

use serde::{Deserialize, Serialize};

use crate::cptp::KrausMap;
use crate::error::{Error, Result};
use crate::linalg::{c64, relative_entropy, von_neumann_entropy, ComplexMatrix, DensityMatrix, C64};
use crate::reversal::{self, classify_kraus, dual_map, time_reverse, NonequilibriumPotential};
use crate::tol;

/// Non-degenerate observable given by rank-one spectral projectors.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasuredObservable {
    projectors: Vec<ComplexMatrix>,
    outcome_labels: Vec<f64>,
}

impl MeasuredObservable {
    pub fn new(projectors: Vec<ComplexMatrix>, outcome_labels: Vec<f64>) -> Result<Self> {
        reversal::validate_projector_set(&projectors)?;
        if outcome_labels.len() != projectors.len() {
            return Err(Error::DimensionMismatch { expected: projectors.len(), found: outcome_labels.len() });
        }
        Ok(Self { projectors, outcome_labels })
    }

    /// Projectors onto the columns of a unitary, labelled `0, 1, …`.
    pub fn from_basis(basis: &ComplexMatrix) -> Result<Self> {
        let d = basis.dim();
        let projectors = (0..d)
            .map(|k| {
                let v = basis.column(k);
                ComplexMatrix::outer(&v, &v)
            })
            .collect();
        Self::new(projectors, (0..d).map(|k| k as f64).collect())
    }

    /// Computational basis `|0⟩, |1⟩, …`, labelled by index.
    pub fn computational(dim: usize) -> Self {
        Self::from_basis(&ComplexMatrix::identity(dim)).expect("identity columns are orthonormal")
    }

    /// `σᶻ` with outcomes `+1` (on `|0⟩`) and `−1`.
    pub fn pauli_z() -> Self {
        Self::new(vec![ComplexMatrix::diag(&[1.0, 0.0]), ComplexMatrix::diag(&[0.0, 1.0])], vec![1.0, -1.0])
            .expect("valid")
    }

    /// `σˣ` with outcomes `+1` (on `|+⟩`) and `−1`.
    pub fn pauli_x() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = [c64(h, 0.0), c64(h, 0.0)];
        let minus = [c64(h, 0.0), c64(-h, 0.0)];
        Self::new(vec![ComplexMatrix::outer(&plus, &plus), ComplexMatrix::outer(&minus, &minus)], vec![1.0, -1.0])
            .expect("valid")
    }

    /// Eigenprojectors of the invariant state, labelled by its eigenvalues.
    pub fn invariant_eigenbasis(pot: &NonequilibriumPotential) -> Result<Self> {
        let mut obs = Self::from_basis(&pot.spectrum.eigenvectors)?;
        obs.outcome_labels = pot.spectrum.eigenvalues.clone();
        Ok(obs)
    }

    pub fn dim(&self) -> usize {
        self.projectors.len()
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn outcome_labels(&self) -> &[f64] {
        &self.outcome_labels
    }

    /// Time-reversed projectors `Θ Π Θ†`.
    pub fn time_reversed(&self) -> Vec<ComplexMatrix> {
        self.projectors.iter().map(time_reverse).collect()
    }

    /// Outcome distribution `Tr[ρ Π]`.
    pub fn probabilities(&self, rho: &ComplexMatrix) -> Vec<f64> {
        self.projectors.iter().map(|p| trace_product(p, rho)).collect()
    }

    /// `Σ p_k Π_k`
    pub fn dephased(&self, probs: &[f64]) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim());
        for (p, pr) in probs.iter().zip(&self.projectors) {
            out = &out + &pr.scale_real(*p);
        }
        out
    }
}

/// `Re Tr[A B]`
fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let d = a.dim();
    let mut s = C64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            s += a[(i, j)] * b[(j, i)];
        }
    }
    s.re
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Forward joint distribution and its marginals.
#[derive(Clone, Debug, PartialEq)]
pub struct ForwardStats {
    /// `p_forward[k][m] = Tr[Π_k Λ(Π_m ρ₀ Π_m)]`
    pub p_forward: Vec<Vec<f64>>,
    pub p_in: Vec<f64>,
    pub p_fin: Vec<f64>,
}

pub fn run_forward(
    rho0: &DensityMatrix,
    map: &KrausMap,
    o_in: &MeasuredObservable,
    o_fin: &MeasuredObservable,
) -> Result<ForwardStats> {
    let d = map.dim();
    check_dims(d, rho0.dim())?;
    check_dims(d, o_in.dim())?;
    check_dims(d, o_fin.dim())?;
    let rho = rho0.matrix();
    let p_in = o_in.probabilities(rho);
    let mut p_forward = vec![vec![0.0; d]; d];
    for (m, pm) in o_in.projectors().iter().enumerate() {
        let evolved = map.apply_matrix(&pm.matmul(rho).matmul(pm))?;
        for (k, pk) in o_fin.projectors().iter().enumerate() {
            p_forward[k][m] = trace_product(pk, &evolved);
        }
    }
    let rho_tau = map.apply_matrix(&o_in.dephased(&p_in))?;
    let p_fin = o_fin.probabilities(&rho_tau);
    Ok(ForwardStats { p_forward, p_in, p_fin })
}

/// Backward joint distribution `p_backward[m][k] = Tr[Π̃_m Λ̃(Π̃_k)] p_fin[k]`.
pub fn run_backward(
    map: &KrausMap,
    pi: &DensityMatrix,
    o_in: &MeasuredObservable,
    o_fin: &MeasuredObservable,
    p_fin: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let d = map.dim();
    check_dims(d, o_in.dim())?;
    check_dims(d, o_fin.dim())?;
    check_dims(d, p_fin.len())?;
    let total: f64 = p_fin.iter().sum();
    if (total - 1.0).abs() > 1e-10 || p_fin.iter().any(|&p| p < -tol::EPS_PROB) {
        return Err(Error::InvalidParameter(format!("p_fin is not a probability vector (sum {total})")));
    }
    let dual = dual_map(map, pi)?;
    let rev_in = o_in.time_reversed();
    let rev_fin = o_fin.time_reversed();
    let mut p_backward = vec![vec![0.0; d]; d];
    for (k, pk) in rev_fin.iter().enumerate() {
        let evolved = dual.apply_matrix(pk)?;
        for (m, pm) in rev_in.iter().enumerate() {
            p_backward[m][k] = trace_product(pm, &evolved) * p_fin[k];
        }
    }
    Ok(p_backward)
}

/// One entry of a stochastic entropy production table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntropyCell {
    Value(f64),
    Flag(CellFlag),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellFlag {
    /// Zero-measure forward trajectory; carries no weight.
    Undefined,
    /// Forward-possible trajectory whose reversal has zero probability.
    AbsoluteIrreversibility,
}

impl EntropyCell {
    pub fn value(&self) -> Option<f64> {
        match self {
            EntropyCell::Value(v) => Some(*v),
            EntropyCell::Flag(_) => None,
        }
    }
}

/// `Δσ` indexed `[k][m]` (final outcome, initial outcome).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntropyTable(pub Vec<Vec<EntropyCell>>);

impl EntropyTable {
    pub fn get(&self, k: usize, m: usize) -> EntropyCell {
        self.0[k][m]
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn has_absolute_irreversibility(&self) -> bool {
        self.0.iter().flatten().any(|c| *c == EntropyCell::Flag(CellFlag::AbsoluteIrreversibility))
    }

    /// Largest difference between two tables over cells defined in both.
    pub fn max_abs_diff(&self, other: &EntropyTable) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .filter_map(|(a, b)| Some((a.value()? - b.value()?).abs()))
            .fold(0.0, f64::max)
    }
}

/// Direct table `Δσ[k][m] = ln p_F[k][m] − ln p_B[m][k]`.
pub fn stochastic_entropy_table(p_forward: &[Vec<f64>], p_backward: &[Vec<f64>]) -> EntropyTable {
    let d = p_forward.len();
    EntropyTable(
        (0..d)
            .map(|k| {
                (0..d)
                    .map(|m| {
                        let (pf, pb) = (p_forward[k][m], p_backward[m][k]);
                        if pf <= tol::EPS_PROB {
                            EntropyCell::Flag(CellFlag::Undefined)
                        } else if pb <= tol::EPS_PROB {
                            EntropyCell::Flag(CellFlag::AbsoluteIrreversibility)
                        } else {
                            EntropyCell::Value(pf.ln() - pb.ln())
                        }
                    })
                    .collect()
            })
            .collect(),
    )
}

/// Potential `Φ` attached to each outcome, `−Tr[Π ln π]`.
///
/// For projectors commuting with `π` this is the potential of the
/// eigenspace the projector lies in. Fails when an outcome projector does
/// not commute with `π`.
pub fn observable_potentials(obs: &MeasuredObservable, pot: &NonequilibriumPotential) -> Result<Vec<f64>> {
    if !reversal::check_observable_compatibility(obs.projectors(), pot)? {
        return Err(Error::AssumptionNotSatisfied("observable does not commute with the invariant state".into()));
    }
    Ok(projected_potentials(obs, pot))
}

/// `−Tr[Π ln π]` for every outcome, without the commutation check.
pub fn projected_potentials(obs: &MeasuredObservable, pot: &NonequilibriumPotential) -> Vec<f64> {
    let phi = pot.phi_operator();
    obs.projectors().iter().map(|p| trace_product(p, &phi)).collect()
}

/// `Δσ[k][m] = ln p_in[m] − ln p_fin[k] − (Φ_fin[k] − Φ_in[m])`.
///
/// Cells with a vanishing initial or final probability are `Undefined`.
pub fn closed_form_entropy_table(p_in: &[f64], p_fin: &[f64], phi_in: &[f64], phi_fin: &[f64]) -> EntropyTable {
    EntropyTable(
        p_fin
            .iter()
            .zip(phi_fin)
            .map(|(&pk, &fk)| {
                p_in.iter()
                    .zip(phi_in)
                    .map(|(&pm, &fm)| {
                        if pm <= tol::EPS_PROB || pk <= tol::EPS_PROB {
                            EntropyCell::Flag(CellFlag::Undefined)
                        } else {
                            EntropyCell::Value(pm.ln() - pk.ln() - (fk - fm))
                        }
                    })
                    .collect()
            })
            .collect(),
    )
}

/// Joint distributions, marginals and the direct `Δσ` table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TpmResult {
    pub p_forward: Vec<Vec<f64>>,
    pub p_backward: Vec<Vec<f64>>,
    pub delta_sigma: EntropyTable,
    pub p_in: Vec<f64>,
    pub p_fin: Vec<f64>,
}

impl TpmResult {
    pub fn from_parts(forward: ForwardStats, p_backward: Vec<Vec<f64>>) -> Self {
        let delta_sigma = stochastic_entropy_table(&forward.p_forward, &p_backward);
        TpmResult { p_forward: forward.p_forward, p_backward, delta_sigma, p_in: forward.p_in, p_fin: forward.p_fin }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluctuationCheck {
    /// `max |p_F[k][m] − e^{Δσ[k][m]} p_B[m][k]|` over defined cells.
    pub max_residual: f64,
    /// `|Σ p_F e^{−Δσ} − 1|`
    pub integral_residual: f64,
}

/// Tests `p_F = e^{Δσ} p_B` cell by cell against a predicted `Δσ` table.
pub fn verify_fluctuation_relation(result: &TpmResult, predicted: &EntropyTable) -> Result<FluctuationCheck> {
    let d = result.p_forward.len();
    if result.delta_sigma.has_absolute_irreversibility() {
        let count = result
            .delta_sigma
            .0
            .iter()
            .flatten()
            .filter(|c| **c == EntropyCell::Flag(CellFlag::AbsoluteIrreversibility))
            .count();
        return Err(Error::UndefinedCells { count });
    }
    let mut max_residual: f64 = 0.0;
    let mut integral = 0.0;
    let mut missing = 0;
    for k in 0..d {
        for m in 0..d {
            let pf = result.p_forward[k][m];
            match predicted.get(k, m).value() {
                Some(s) => {
                    max_residual = max_residual.max((pf - s.exp() * result.p_backward[m][k]).abs());
                    if pf > tol::EPS_PROB {
                        integral += pf * (-s).exp();
                    }
                }
                None if pf > tol::EPS_PROB => missing += 1,
                None => {}
            }
        }
    }
    if missing > 0 {
        return Err(Error::UndefinedCells { count: missing });
    }
    Ok(FluctuationCheck { max_residual, integral_residual: (integral - 1.0).abs() })
}

/// Raw moments `⟨Δσⁿ⟩` for `n = 0..=order` over the forward distribution.
pub fn moments_of(p_forward: &[Vec<f64>], table: &EntropyTable, order: usize) -> Result<Vec<f64>> {
    if order > 4 {
        return Err(Error::InvalidParameter(format!("moment order {order} > 4")));
    }
    let mut out = vec![0.0; order + 1];
    let mut missing = 0;
    for (k, row) in p_forward.iter().enumerate() {
        for (m, &pf) in row.iter().enumerate() {
            if pf <= tol::EPS_PROB {
                continue;
            }
            match table.get(k, m).value() {
                Some(s) => {
                    let mut pow = 1.0;
                    for slot in out.iter_mut() {
                        *slot += pf * pow;
                        pow *= s;
                    }
                }
                None => missing += 1,
            }
        }
    }
    if missing > 0 {
        return Err(Error::UndefinedCells { count: missing });
    }
    Ok(out)
}

pub fn moments(result: &TpmResult, order: usize) -> Result<Vec<f64>> {
    moments_of(&result.p_forward, &result.delta_sigma, order)
}

/// `⟨Δσ²⟩ − ⟨Δσ⟩²` from a raw-moment vector of order ≥ 2.
pub fn variance(raw: &[f64]) -> f64 {
    raw[2] - raw[1] * raw[1]
}

/// `S(ρ_τ‖ρ_fin) + S(ρ_in‖π) − S(ρ_τ‖π)`
pub fn average_via_relative_entropies(
    rho_in: &DensityMatrix,
    rho_tau: &DensityMatrix,
    rho_fin: &DensityMatrix,
    pi: &DensityMatrix,
) -> Result<f64> {
    Ok(relative_entropy(rho_tau, rho_fin)? + relative_entropy(rho_in, pi)? - relative_entropy(rho_tau, pi)?)
}

/// Thermodynamic reading of the average for a Gibbs invariant state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermalDecomposition {
    /// `S(ρ_τ‖ρ_fin)`, the cost of the second measurement.
    pub measurement_term: f64,
    /// `S(ρ_τ) − S(ρ_in)`
    pub entropy_change: f64,
    /// `ΔQ = Tr[H(ρ_τ − ρ_in)]`, heat absorbed from the bath.
    pub heat: f64,
    /// `S(ρ_τ‖ρ_fin) + ΔS − βΔQ`
    pub total: f64,
}

pub fn thermal_decomposition(
    rho_in: &DensityMatrix,
    rho_tau: &DensityMatrix,
    rho_fin: &DensityMatrix,
    hamiltonian: &ComplexMatrix,
    beta: f64,
) -> Result<ThermalDecomposition> {
    let measurement_term = relative_entropy(rho_tau, rho_fin)?;
    let entropy_change = von_neumann_entropy(rho_tau) - von_neumann_entropy(rho_in);
    let heat = trace_product(hamiltonian, &(rho_tau.matrix() - rho_in.matrix()));
    Ok(ThermalDecomposition {
        measurement_term,
        entropy_change,
        heat,
        total: measurement_term + entropy_change - beta * heat,
    })
}

/// States along the forward protocol.
#[derive(Clone, Debug)]
pub struct ProtocolStates {
    pub rho_in: DensityMatrix,
    pub rho_tau: DensityMatrix,
    pub rho_fin: DensityMatrix,
}

pub fn protocol_states(
    map: &KrausMap,
    o_in: &MeasuredObservable,
    o_fin: &MeasuredObservable,
    stats: &ForwardStats,
) -> Result<ProtocolStates> {
    let rho_in = DensityMatrix::new(o_in.dephased(&stats.p_in))?;
    let rho_tau = map.apply(&rho_in)?;
    let rho_fin = DensityMatrix::new(o_fin.dephased(&stats.p_fin))?;
    Ok(ProtocolStates { rho_in, rho_tau, rho_fin })
}

#[derive(Clone, Debug)]
pub struct ProtocolOptions {
    pub classification_tol: f64,
    /// Use this invariant state instead of extracting it from the map.
    pub invariant_state: Option<DensityMatrix>,
    pub moment_order: usize,
}

impl Default for ProtocolOptions {
    fn default() -> Self {
        Self { classification_tol: tol::CLASSIFY, invariant_state: None, moment_order: 4 }
    }
}

/// Everything the TPM pipeline computes for one `(ρ₀, Λ, O_in, O_fin)`.
#[derive(Clone, Debug)]
pub struct ProtocolReport {
    pub invariant_state: DensityMatrix,
    pub potential: NonequilibriumPotential,
    pub classification: reversal::KrausClassification,
    pub assumption_ii_satisfied: bool,
    pub result: TpmResult,
    /// Present only when both structural assumptions hold.
    pub closed_form: Option<EntropyTable>,
    /// Checked against the closed form when available, otherwise against
    /// the table built from projected potentials `−Tr[Π ln π]`.
    pub fluctuation: Option<FluctuationCheck>,
    /// Raw moments, index `n` holds `⟨Δσⁿ⟩`.
    pub moments: Option<Vec<f64>>,
    pub mean_relative_entropy: Option<f64>,
}

impl ProtocolReport {
    pub fn assumption_i_satisfied(&self) -> bool {
        self.classification.satisfies_assumption_i
    }

    pub fn mean(&self) -> Option<f64> {
        self.moments.as_ref().map(|m| m[1])
    }

    pub fn variance(&self) -> Option<f64> {
        self.moments.as_ref().filter(|m| m.len() > 2).map(|m| variance(m))
    }
}

/// Runs the forward and backward protocols and every verifier.
pub fn run_protocol(
    rho0: &DensityMatrix,
    map: &KrausMap,
    o_in: &MeasuredObservable,
    o_fin: &MeasuredObservable,
    opts: &ProtocolOptions,
) -> Result<ProtocolReport> {
    let pi = match &opts.invariant_state {
        Some(pi) => pi.clone(),
        None => map.invariant_state()?,
    };
    let potential = reversal::build_potential(&pi)?;
    let classification = classify_kraus(map, &potential, opts.classification_tol);
    let assumption_ii_satisfied = reversal::check_observable_compatibility(o_in.projectors(), &potential)?
        && reversal::check_observable_compatibility(o_fin.projectors(), &potential)?;

    let forward = run_forward(rho0, map, o_in, o_fin)?;
    let p_backward = run_backward(map, &pi, o_in, o_fin, &forward.p_fin)?;
    let states = protocol_states(map, o_in, o_fin, &forward)?;
    let result = TpmResult::from_parts(forward, p_backward);

    let phi_in = projected_potentials(o_in, &potential);
    let phi_fin = projected_potentials(o_fin, &potential);
    let predicted = closed_form_entropy_table(&result.p_in, &result.p_fin, &phi_in, &phi_fin);
    let fluctuation = verify_fluctuation_relation(&result, &predicted).ok();
    let closed_form = (classification.satisfies_assumption_i && assumption_ii_satisfied).then_some(predicted);

    let moments = moments(&result, opts.moment_order.max(2)).ok();
    let mean_relative_entropy =
        average_via_relative_entropies(&states.rho_in, &states.rho_tau, &states.rho_fin, &pi).ok();

    Ok(ProtocolReport {
        invariant_state: pi,
        potential,
        classification,
        assumption_ii_satisfied,
        result,
        closed_form,
        fluctuation,
        moments,
        mean_relative_entropy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli::*;
    use std::f64::consts::LN_2;

    fn assert_table(got: &[Vec<f64>], want: &[&[f64]]) {
        for (g, w) in got.iter().zip(want) {
            for (a, b) in g.iter().zip(w.iter()) {
                assert!((a - b).abs() < 1e-14, "{got:?} vs {want:?}");
            }
        }
    }

    fn dephasing() -> KrausMap {
        let h = 0.5f64.sqrt();
        KrausMap::new(vec![ComplexMatrix::identity(2).scale_real(h), sigma_z().scale_real(h)]).unwrap()
    }

    #[test]
    fn forward_identity_map() {
        let z = MeasuredObservable::pauli_z();
        let f = run_forward(&DensityMatrix::basis_state(2, 0), &KrausMap::identity(2), &z, &z).unwrap();
        assert_eq!(f.p_forward, vec![vec![1.0, 0.0], vec![0.0, 0.0]]);
        assert_eq!(f.p_in, vec![1.0, 0.0]);
        assert_eq!(f.p_fin, vec![1.0, 0.0]);
    }

    #[test]
    fn forward_dephasing_on_mixed_state() {
        let z = MeasuredObservable::pauli_z();
        let f = run_forward(&DensityMatrix::maximally_mixed(2), &dephasing(), &z, &z).unwrap();
        // dephasing commutes with σᶻ measurements
        assert_table(&f.p_forward, &[&[0.5, 0.0], &[0.0, 0.5]]);
    }

    #[test]
    fn forward_dephasing_in_x_basis_is_uniform() {
        let x = MeasuredObservable::pauli_x();
        let f = run_forward(&DensityMatrix::maximally_mixed(2), &dephasing(), &x, &x).unwrap();
        for row in &f.p_forward {
            for &p in row {
                assert!((p - 0.25).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn forward_dimension_mismatch() {
        let z = MeasuredObservable::pauli_z();
        let r = run_forward(&DensityMatrix::maximally_mixed(3), &KrausMap::identity(2), &z, &z);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn backward_examples() {
        let z = MeasuredObservable::pauli_z();
        let pb = run_backward(&KrausMap::identity(2), &DensityMatrix::maximally_mixed(2), &z, &z, &[1.0, 0.0]).unwrap();
        assert_table(&pb, &[&[1.0, 0.0], &[0.0, 0.0]]);
        let pb = run_backward(&dephasing(), &DensityMatrix::maximally_mixed(2), &z, &z, &[0.75, 0.25]).unwrap();
        assert!((pb[0][0] - 0.75).abs() < 1e-15 && (pb[1][1] - 0.25).abs() < 1e-15);
        assert!(pb[0][1].abs() < 1e-15 && pb[1][0].abs() < 1e-15);
        assert!(run_backward(&dephasing(), &DensityMatrix::maximally_mixed(2), &z, &z, &[0.7, 0.2]).is_err());
    }

    #[test]
    fn direct_table_conventions() {
        let p = vec![vec![0.5, 0.25], vec![0.25, 0.0]];
        let t = stochastic_entropy_table(&p, &p);
        assert_eq!(t.get(0, 0), EntropyCell::Value(0.0));
        assert_eq!(t.get(1, 1), EntropyCell::Flag(CellFlag::Undefined));

        let pf = vec![vec![0.75, 0.0], vec![0.25, 0.0]];
        let pb = vec![vec![0.375, 0.25], vec![0.0, 0.375]];
        let t = stochastic_entropy_table(&pf, &pb);
        assert!((t.get(0, 0).value().unwrap() - LN_2).abs() < 1e-15);
        assert_eq!(t.get(0, 1), EntropyCell::Flag(CellFlag::Undefined));

        let pb = vec![vec![0.5, 0.0], vec![0.0, 0.5]];
        let t = stochastic_entropy_table(&pf, &pb);
        assert_eq!(t.get(1, 0), EntropyCell::Flag(CellFlag::AbsoluteIrreversibility));
    }

    #[test]
    fn closed_form_examples() {
        // equal marginals, flat potential: antisymmetric
        let p = [0.2, 0.8];
        let t = closed_form_entropy_table(&p, &p, &[0.0, 0.0], &[0.0, 0.0]);
        let a = t.get(0, 1).value().unwrap();
        let b = t.get(1, 0).value().unwrap();
        assert!((a - (0.8f64 / 0.2).ln()).abs() < 1e-15 && (a + b).abs() < 1e-15);

        // β = 0 qubit, p_in = (1, 0), p_fin = (3/4, 1/4)
        let t = closed_form_entropy_table(&[1.0, 0.0], &[0.75, 0.25], &[LN_2, LN_2], &[LN_2, LN_2]);
        assert!((t.get(0, 0).value().unwrap() - (4.0f64 / 3.0).ln()).abs() < 1e-15);
        assert!((t.get(1, 0).value().unwrap() - 4f64.ln()).abs() < 1e-15);
        assert_eq!(t.get(0, 1), EntropyCell::Flag(CellFlag::Undefined));

        // potential shift enters with the sign of Φ(m) − Φ(k)
        let bw = 1.0;
        let phi = [bw, 0.0];
        let flat = closed_form_entropy_table(&[0.5, 0.5], &[0.5, 0.5], &[0.0, 0.0], &[0.0, 0.0]);
        let t = closed_form_entropy_table(&[0.5, 0.5], &[0.5, 0.5], &phi, &phi);
        assert!((t.get(1, 0).value().unwrap() - flat.get(1, 0).value().unwrap() - bw).abs() < 1e-15);
        assert!((t.get(0, 1).value().unwrap() - flat.get(0, 1).value().unwrap() + bw).abs() < 1e-15);
    }

    #[test]
    fn fluctuation_trivial_and_undefined() {
        let p = vec![vec![0.5, 0.0], vec![0.0, 0.5]];
        let r = TpmResult::from_parts(
            ForwardStats { p_forward: p.clone(), p_in: vec![0.5, 0.5], p_fin: vec![0.5, 0.5] },
            p.clone(),
        );
        let zero = EntropyTable(vec![vec![EntropyCell::Value(0.0); 2]; 2]);
        let c = verify_fluctuation_relation(&r, &zero).unwrap();
        assert_eq!(c.max_residual, 0.0);
        assert_eq!(c.integral_residual, 0.0);

        let undefined = EntropyTable(vec![vec![EntropyCell::Flag(CellFlag::Undefined); 2]; 2]);
        assert!(matches!(verify_fluctuation_relation(&r, &undefined), Err(Error::UndefinedCells { count: 2 })));
    }

    #[test]
    fn moments_of_zero_table() {
        let p = vec![vec![0.25; 2]; 2];
        let zero = EntropyTable(vec![vec![EntropyCell::Value(0.0); 2]; 2]);
        let m = moments_of(&p, &zero, 4).unwrap();
        assert_eq!(m, vec![1.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(moments_of(&p, &zero, 5).is_err());
    }

    #[test]
    fn relative_entropy_average_vanishes_at_invariant_state() {
        let pi = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        assert!(average_via_relative_entropies(&pi, &pi, &pi, &pi).unwrap().abs() < 1e-15);
    }

    #[test]
    fn observable_potentials_require_commutation() {
        let pot = reversal::build_potential(&DensityMatrix::diagonal(&[1.0 / 3.0, 2.0 / 3.0]).unwrap()).unwrap();
        let phi = observable_potentials(&MeasuredObservable::pauli_z(), &pot).unwrap();
        assert!((phi[0] - 3f64.ln()).abs() < 1e-14 && (phi[1] - 1.5f64.ln()).abs() < 1e-14);
        assert!(matches!(
            observable_potentials(&MeasuredObservable::pauli_x(), &pot),
            Err(Error::AssumptionNotSatisfied(_))
        ));
    }

    #[test]
    fn degenerate_observable_rejected() {
        let r = MeasuredObservable::new(vec![ComplexMatrix::identity(2), ComplexMatrix::zeros(2)], vec![1.0, 0.0]);
        assert!(matches!(r, Err(Error::NotRankOne { index: 0, .. })));
    }
}
