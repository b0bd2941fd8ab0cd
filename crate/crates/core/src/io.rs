//! File formats and the command drivers behind the `entroflux` binary.
//!
//! Kraus maps are stored as `{"dim": d, "operators": [op, ...]}` with each
//! operator a row-major `d × d` array of `[re, im]` pairs. Scenario configs
//! are JSON; scans are written as CSV with a frozen header.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cptp::{KrausMap, ValidationReport};
use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix, DensityMatrix};
use crate::mitigation::{self, MitigationReport};
use crate::qubit_thermal::{kraus_for, QubitThermalModel, RateFunction, TabulatedRate};
use crate::reversal::{build_potential, classify_kraus, OperatorClass};
use crate::tol;
use crate::tpm::{run_protocol, EntropyTable, FluctuationCheck, MeasuredObservable, ProtocolOptions, TpmResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

pub const SCAN_HEADER: &str =
    "t,gamma,Gamma,z,mean_dsigma,dmean_dt,var_dsigma,dvar_dt,I_t,z_nonneg,suff_met,nec_met,mitigating";

/// Row-major matrix of `[re, im]` pairs.
pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &ComplexMatrix) -> JsonMatrix {
    m.rows().into_iter().map(|row| row.into_iter().map(|z| [z.re, z.im]).collect()).collect()
}

pub fn matrix_from_json(rows: &JsonMatrix) -> Result<ComplexMatrix> {
    ComplexMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&[re, im]| c64(re, im)).collect()).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KrausFile {
    pub dim: usize,
    pub operators: Vec<JsonMatrix>,
}

impl KrausFile {
    pub fn from_map(map: &KrausMap) -> Self {
        KrausFile { dim: map.dim(), operators: map.operators().iter().map(matrix_to_json).collect() }
    }

    pub fn into_map(self) -> Result<KrausMap> {
        let ops = self
            .operators
            .iter()
            .map(|op| {
                let m = matrix_from_json(op)?;
                if m.dim() != self.dim {
                    return Err(Error::DimensionMismatch { expected: self.dim, found: m.dim() });
                }
                Ok(m)
            })
            .collect::<Result<Vec<_>>>()?;
        KrausMap::new(ops)
    }
}

pub fn kraus_to_json(map: &KrausMap) -> String {
    serde_json::to_string_pretty(&KrausFile::from_map(map)).expect("Kraus file serializes")
}

pub fn kraus_from_json(text: &str) -> Result<KrausMap> {
    serde_json::from_str::<KrausFile>(text)?.into_map()
}

pub fn read_kraus(path: &Path) -> Result<KrausMap> {
    kraus_from_json(&fs::read_to_string(path)?)
}

pub fn tpm_result_to_json(r: &TpmResult) -> String {
    serde_json::to_string_pretty(r).expect("TPM result serializes")
}

pub fn tpm_result_from_json(text: &str) -> Result<TpmResult> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemSpec {
    KrausFile(PathBuf),
    QubitThermal(QubitThermalModel),
}

/// Measurement basis. `invariant` uses the eigenbasis of the invariant state;
/// `unitary` takes the basis vectors as matrix columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisSpec {
    PauliZ,
    PauliX,
    Computational,
    Invariant,
    Unitary(JsonMatrix),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservablesSpec {
    #[serde(rename = "in")]
    pub initial: BasisSpec,
    #[serde(rename = "fin")]
    pub fin: BasisSpec,
}

impl Default for ObservablesSpec {
    fn default() -> Self {
        ObservablesSpec { initial: BasisSpec::PauliZ, fin: BasisSpec::PauliZ }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    Bloch([f64; 3]),
    Diagonal(Vec<f64>),
    Matrix(JsonMatrix),
    Invariant,
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState::Bloch([0.0, 0.0, 1.0])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TimeSpec {
    Uniform { t_max: f64, steps: usize },
    Grid { grid: Vec<f64> },
}

impl Default for TimeSpec {
    fn default() -> Self {
        TimeSpec::Uniform { t_max: 10.0, steps: 2000 }
    }
}

impl TimeSpec {
    /// `steps` points `t_max·i/steps`, `i = 1..=steps`, or the explicit grid.
    pub fn grid(&self) -> Result<Vec<f64>> {
        match self {
            TimeSpec::Uniform { t_max, steps } => {
                if *steps < 2 {
                    return Err(Error::InvalidParameter(format!("steps must be >= 2, got {steps}")));
                }
                if !(t_max.is_finite() && *t_max > 0.0) {
                    return Err(Error::InvalidParameter(format!("t_max must be > 0, got {t_max}")));
                }
                Ok((1..=*steps).map(|i| t_max * i as f64 / *steps as f64).collect())
            }
            TimeSpec::Grid { grid } => {
                if grid.is_empty() || grid.iter().any(|t| !t.is_finite() || *t < 0.0) {
                    return Err(Error::InvalidParameter("grid must be non-empty with finite t >= 0".into()));
                }
                if grid.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::InvalidParameter("grid must be strictly increasing".into()));
                }
                Ok(grid.clone())
            }
        }
    }

    /// Final time, used as `τ` by the TPM command.
    pub fn end(&self) -> Result<f64> {
        Ok(*self.grid()?.last().expect("non-empty grid"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tp: f64,
    pub classification: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tp: tol::TP, classification: tol::CLASSIFY }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    /// Scans default to CSV; TPM output is always JSON.
    pub format: Option<OutputFormat>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub system: SystemSpec,
    #[serde(default)]
    pub observables: ObservablesSpec,
    #[serde(default)]
    pub initial_state: InitialState,
    #[serde(default)]
    pub time: TimeSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputSpec,
}

impl Default for ScenarioConfig {
    /// Damped-oscillatory qubit at `β = 0.5`, `ω = 1`, started in `|0⟩`.
    fn default() -> Self {
        ScenarioConfig {
            system: SystemSpec::QubitThermal(QubitThermalModel::default_scenario(0.5).expect("valid defaults")),
            observables: ObservablesSpec::default(),
            initial_state: InitialState::default(),
            time: TimeSpec::default(),
            tolerances: Tolerances::default(),
            output: OutputSpec::default(),
        }
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub beta: Option<f64>,
    pub omega: Option<f64>,
    pub rate: Option<String>,
    pub t_max: Option<f64>,
    pub steps: Option<usize>,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
}

/// Parses `constant:γ₀`, `damped:γ₀,a,ν,τ_d` or `table:path.csv`.
pub fn parse_rate(spec: &str) -> Result<RateFunction> {
    let (kind, args) = spec.split_once(':').ok_or_else(|| Error::Parse(format!("rate spec {spec:?}")))?;
    let nums = || -> Result<Vec<f64>> {
        args.split(',').map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")))).collect()
    };
    match kind {
        "constant" => match nums()?.as_slice() {
            [g] => Ok(RateFunction::Constant { gamma0: *g }),
            _ => Err(Error::Parse("constant rate takes one value".into())),
        },
        "damped" => match nums()?.as_slice() {
            [g, a, nu, tau] => {
                Ok(RateFunction::DampedOscillatory { gamma0: *g, amplitude: *a, frequency: *nu, decay_time: *tau })
            }
            _ => Err(Error::Parse("damped rate takes gamma0,amplitude,frequency,decay_time".into())),
        },
        "table" => Ok(RateFunction::Tabulated(TabulatedRate::from_csv(&fs::read_to_string(args)?)?)),
        _ => Err(Error::Parse(format!("unknown rate kind {kind:?}"))),
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self> {
        let mut cfg = match path {
            Some(p) => ScenarioConfig::from_json(&fs::read_to_string(p)?)?,
            None => ScenarioConfig::default(),
        };
        cfg.apply(overrides)?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        if o.beta.is_some() || o.omega.is_some() || o.rate.is_some() {
            let SystemSpec::QubitThermal(m) = &self.system else {
                return Err(Error::InvalidParameter("--beta/--omega/--rate need a qubit_thermal system".into()));
            };
            let rate = match &o.rate {
                Some(s) => parse_rate(s)?,
                None => m.rate.clone(),
            };
            self.system = SystemSpec::QubitThermal(QubitThermalModel::new(
                o.beta.unwrap_or(m.beta),
                o.omega.unwrap_or(m.omega),
                rate,
            )?);
        }
        if o.t_max.is_some() || o.steps.is_some() {
            let (t0, s0) = match &self.time {
                TimeSpec::Uniform { t_max, steps } => (*t_max, *steps),
                TimeSpec::Grid { grid } => (*grid.last().unwrap_or(&10.0), grid.len()),
            };
            self.time = TimeSpec::Uniform { t_max: o.t_max.unwrap_or(t0), steps: o.steps.unwrap_or(s0) };
        }
        if let Some(p) = &o.out {
            self.output.path = Some(p.clone());
        }
        if let Some(t) = o.tol {
            self.tolerances.classification = t;
        }
        Ok(())
    }

    pub fn qubit_model(&self) -> Result<&QubitThermalModel> {
        match &self.system {
            SystemSpec::QubitThermal(m) => Ok(m),
            SystemSpec::KrausFile(_) => {
                Err(Error::InvalidParameter("this command needs a qubit_thermal system".into()))
            }
        }
    }
}

fn observable(spec: &BasisSpec, dim: usize, pi: &DensityMatrix) -> Result<MeasuredObservable> {
    let need_qubit = |o: MeasuredObservable| {
        if dim == 2 {
            Ok(o)
        } else {
            Err(Error::DimensionMismatch { expected: dim, found: 2 })
        }
    };
    match spec {
        BasisSpec::PauliZ => need_qubit(MeasuredObservable::pauli_z()),
        BasisSpec::PauliX => need_qubit(MeasuredObservable::pauli_x()),
        BasisSpec::Computational => Ok(MeasuredObservable::computational(dim)),
        BasisSpec::Invariant => MeasuredObservable::invariant_eigenbasis(&build_potential(pi)?),
        BasisSpec::Unitary(m) => MeasuredObservable::from_basis(&matrix_from_json(m)?),
    }
}

fn initial_state(spec: &InitialState, pi: &DensityMatrix) -> Result<DensityMatrix> {
    match spec {
        InitialState::Bloch([x, y, z]) => DensityMatrix::from_bloch(*x, *y, *z),
        InitialState::Diagonal(p) => DensityMatrix::diagonal(p),
        InitialState::Matrix(m) => DensityMatrix::new(matrix_from_json(m)?),
        InitialState::Invariant => Ok(pi.clone()),
    }
}

/// Conformance summary for one Kraus file.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidateReport {
    pub validation: ValidationReport,
    pub conforming: bool,
    pub invariant_spectrum: Option<Vec<f64>>,
    pub invariant_error: Option<String>,
    pub delta_phi: Option<Vec<Option<f64>>>,
    pub assumption_i_satisfied: Option<bool>,
}

pub fn validate_map(map: &KrausMap, tol_tp: f64, tol_classify: f64) -> ValidateReport {
    let validation = map.validate();
    let conforming = validation.tp_residual <= tol_tp && validation.choi_min_eigenvalue >= -tol::CP;
    let (mut invariant_spectrum, mut invariant_error, mut delta_phi, mut assumption_i) = (None, None, None, None);
    match map.invariant_state().and_then(|pi| Ok((pi.spectrum().eigenvalues, build_potential(&pi)?))) {
        Ok((spec, pot)) => {
            let cls = classify_kraus(map, &pot, tol_classify);
            invariant_spectrum = Some(spec);
            delta_phi = Some(cls.per_operator.iter().map(OperatorClass::delta_phi).collect());
            assumption_i = Some(cls.satisfies_assumption_i);
        }
        Err(e) => invariant_error = Some(e.to_string()),
    }
    ValidateReport {
        validation,
        conforming,
        invariant_spectrum,
        invariant_error,
        delta_phi,
        assumption_i_satisfied: assumption_i,
    }
}

impl ValidateReport {
    pub fn render(&self) -> String {
        let v = &self.validation;
        let mut s = String::new();
        let _ = writeln!(s, "trace preserving:     {} (residual {:.3e})", v.trace_preserving, v.tp_residual);
        let _ = writeln!(
            s,
            "completely positive:  {} (min Choi eigenvalue {:.3e})",
            v.completely_positive, v.choi_min_eigenvalue
        );
        let _ = writeln!(s, "unital:               {} (residual {:.3e})", v.unital, v.unital_residual);
        match (&self.invariant_spectrum, &self.invariant_error) {
            (Some(spec), _) => {
                let _ = writeln!(s, "invariant spectrum:   {spec:?}");
            }
            (None, Some(e)) => {
                let _ = writeln!(s, "invariant state:      {e}");
            }
            _ => {}
        }
        if let (Some(dp), Some(ok)) = (&self.delta_phi, self.assumption_i_satisfied) {
            let _ = writeln!(s, "classified:           {ok}");
            for (i, d) in dp.iter().enumerate() {
                match d {
                    Some(x) => {
                        let _ = writeln!(s, "  E{}: delta_phi = {x:.12}", i + 1);
                    }
                    None => {
                        let _ = writeln!(s, "  E{}: unclassifiable", i + 1);
                    }
                }
            }
        }
        let _ = writeln!(s, "conforming:           {}", self.conforming);
        s
    }

    pub fn exit_code(&self) -> i32 {
        if self.conforming {
            EXIT_OK
        } else {
            EXIT_VIOLATION
        }
    }
}

pub fn cmd_validate(path: &Path, tol_tp: f64) -> Result<ValidateReport> {
    Ok(validate_map(&read_kraus(path)?, tol_tp, tol::CLASSIFY))
}

/// JSON document written by the TPM command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TpmOutput {
    pub tau: Option<f64>,
    pub assumption_i_satisfied: bool,
    pub assumption_ii_satisfied: bool,
    pub delta_phi: Vec<Option<f64>>,
    pub invariant_spectrum: Vec<f64>,
    #[serde(flatten)]
    pub result: TpmResult,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub delta_sigma_closed_form: Option<EntropyTable>,
    pub fluctuation: Option<FluctuationCheck>,
    pub moments: Option<Vec<f64>>,
    pub mean: Option<f64>,
    pub variance: Option<f64>,
    pub mean_relative_entropy: Option<f64>,
}

pub fn cmd_tpm(cfg: &ScenarioConfig) -> Result<TpmOutput> {
    let (map, pi, tau) = match &cfg.system {
        SystemSpec::QubitThermal(m) => {
            let tau = cfg.time.end()?;
            (m.kraus_at(tau)?, m.thermal_state(), Some(tau))
        }
        SystemSpec::KrausFile(p) => {
            let map = read_kraus(p)?;
            let pi = map.invariant_state()?;
            (map, pi, None)
        }
    };
    let v = map.validate();
    if v.tp_residual > cfg.tolerances.tp || v.choi_min_eigenvalue < -tol::CP {
        return Err(Error::InvalidParameter(format!(
            "map is not CPTP (tp residual {:.3e}, min Choi eigenvalue {:.3e})",
            v.tp_residual, v.choi_min_eigenvalue
        )));
    }
    let o_in = observable(&cfg.observables.initial, map.dim(), &pi)?;
    let o_fin = observable(&cfg.observables.fin, map.dim(), &pi)?;
    let rho0 = initial_state(&cfg.initial_state, &pi)?;
    let opts = ProtocolOptions {
        classification_tol: cfg.tolerances.classification,
        invariant_state: Some(pi),
        ..ProtocolOptions::default()
    };
    let rep = run_protocol(&rho0, &map, &o_in, &o_fin, &opts)?;
    Ok(TpmOutput {
        tau,
        assumption_i_satisfied: rep.assumption_i_satisfied(),
        assumption_ii_satisfied: rep.assumption_ii_satisfied,
        delta_phi: rep.classification.per_operator.iter().map(OperatorClass::delta_phi).collect(),
        invariant_spectrum: rep.potential.spectrum.eigenvalues.clone(),
        mean: rep.mean(),
        variance: rep.variance(),
        result: rep.result,
        delta_sigma_closed_form: rep.closed_form,
        fluctuation: rep.fluctuation,
        moments: rep.moments,
        mean_relative_entropy: rep.mean_relative_entropy,
    })
}

pub fn tpm_output_to_json(out: &TpmOutput) -> String {
    serde_json::to_string_pretty(out).expect("TPM output serializes")
}

pub fn cmd_scan(cfg: &ScenarioConfig) -> Result<MitigationReport> {
    mitigation::scan(cfg.qubit_model()?, &cfg.time.grid()?)
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Time series with the frozen `SCAN_HEADER` columns. Singular cells are
/// left empty.
pub fn scan_to_csv(report: &MitigationReport) -> String {
    let mut s = String::with_capacity(256 * (report.points.len() + 1));
    s.push_str(SCAN_HEADER);
    s.push('\n');
    for p in &report.points {
        let f = &p.flags;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            num(p.t),
            num(p.gamma),
            num(p.gamma_int),
            num(p.z),
            num(p.mean),
            opt(p.mean_rate),
            num(p.variance),
            opt(p.var_rate),
            opt(p.gap),
            f.z_nonneg,
            f.sufficient_met,
            f.necessary_met,
            f.mitigating
        );
    }
    s
}

pub fn scan_to_json(report: &MitigationReport) -> String {
    serde_json::to_string_pretty(report).expect("scan report serializes")
}

/// Diagonal Kraus operators of the thermalizing qubit at a given `Γ` and
/// phase `ωt`.
pub fn export_qubit_kraus(beta: f64, omega: f64, gamma_int: f64, omega_t: f64) -> Result<KrausMap> {
    let model = QubitThermalModel::new(beta, omega, RateFunction::Constant { gamma0: 1.0 })?;
    kraus_for(gamma_int, omega_t, model.z_inf())
}

/// Writes `text` to `path`, or stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Sizes the global rayon pool from `ENTROFLUX_THREADS` (0 or unset: auto).
pub fn configure_threads() -> Result<()> {
    let n = match std::env::var("ENTROFLUX_THREADS") {
        Ok(v) => v.trim().parse::<usize>().map_err(|e| Error::Parse(format!("ENTROFLUX_THREADS={v:?}: {e}")))?,
        Err(_) => 0,
    };
    if n > 0 {
        // a second call in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_kraus_map, seeded};

    #[test]
    fn kraus_json_round_trip_is_bit_exact() {
        let mut rng = seeded(4);
        for d in 2..=4 {
            let map = random_kraus_map(d, 3, &mut rng);
            let back = kraus_from_json(&kraus_to_json(&map)).unwrap();
            for (a, b) in map.operators().iter().zip(back.operators()) {
                assert!(a
                    .as_slice()
                    .iter()
                    .zip(b.as_slice())
                    .all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()));
            }
        }
    }

    #[test]
    fn kraus_json_rejects_bad_shapes() {
        let bad = r#"{"dim": 2, "operators": [[[[1,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]],[[0,0],[0,0],[1,0]]]]}"#;
        assert!(matches!(kraus_from_json(bad), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(kraus_from_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn config_defaults_and_overrides() {
        let text = r#"{"system": {"qubit_thermal": {"beta": 0.0, "omega": 1.0,
            "rate": {"kind": "constant", "gamma0": 0.5}}}, "time": {"t_max": 2.0, "steps": 4}}"#;
        let mut cfg = ScenarioConfig::from_json(text).unwrap();
        assert_eq!(cfg.time.grid().unwrap(), vec![0.5, 1.0, 1.5, 2.0]);
        cfg.apply(&Overrides {
            beta: Some(1.5),
            rate: Some("damped:1,1.5,5,2".into()),
            steps: Some(8),
            ..Default::default()
        })
        .unwrap();
        let m = cfg.qubit_model().unwrap();
        assert_eq!(m.beta, 1.5);
        assert!(matches!(m.rate, RateFunction::DampedOscillatory { .. }));
        assert_eq!(cfg.time.grid().unwrap().len(), 8);
        assert!(ScenarioConfig::from_json(
            r#"{"system": {"qubit_thermal": {"beta": 0, "omega": 1,
            "rate": {"kind": "constant", "gamma0": 1}}}, "time": {"t_max": 1, "steps": 1}}"#
        )
        .unwrap()
        .time
        .grid()
        .is_err());
    }

    #[test]
    fn tpm_mean_at_beta_zero() {
        let text = r#"{"system": {"qubit_thermal": {"beta": 0.0, "omega": 1.0,
            "rate": {"kind": "constant", "gamma0": 1.0}}},
            "time": {"grid": [0.34657359027997264]}}"#;
        let out = cmd_tpm(&ScenarioConfig::from_json(text).unwrap()).unwrap();
        assert!((out.mean.unwrap() - 0.5623351446188083).abs() < 1e-9);
        assert!(out.delta_sigma_closed_form.is_some());
    }

    #[test]
    fn tpm_from_invariant_is_reversible() {
        let mut cfg = ScenarioConfig::default();
        cfg.initial_state = InitialState::Invariant;
        cfg.time = TimeSpec::Grid { grid: vec![1.3] };
        let out = cmd_tpm(&cfg).unwrap();
        assert!(out.mean.unwrap().abs() < 1e-12);
        for row in &out.result.delta_sigma.0 {
            for c in row {
                assert!(c.value().unwrap().abs() < 1e-10);
            }
        }
    }

    #[test]
    fn tpm_with_sigma_x_omits_closed_form() {
        let mut cfg = ScenarioConfig::default();
        cfg.observables = ObservablesSpec { initial: BasisSpec::PauliX, fin: BasisSpec::PauliX };
        cfg.time = TimeSpec::Grid { grid: vec![1.0] };
        let out = cmd_tpm(&cfg).unwrap();
        assert!(!out.assumption_ii_satisfied);
        assert!(out.delta_sigma_closed_form.is_none());
        assert!(!tpm_output_to_json(&out).contains("delta_sigma_closed_form"));
    }

    #[test]
    fn scan_csv_shape() {
        let mut cfg = ScenarioConfig::default();
        cfg.time = TimeSpec::Grid { grid: vec![0.0, 0.5, 1.0] };
        let csv = scan_to_csv(&cmd_scan(&cfg).unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SCAN_HEADER);
        let first: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(first.len(), 13);
        assert_eq!(first[5], "");
        assert_eq!(first[6].parse::<f64>().unwrap(), 0.0);
    }

    #[test]
    fn validate_exported_qubit_map() {
        let map = export_qubit_kraus(1.0, 1.0, 0.5, 0.3).unwrap();
        let rep = validate_map(&map, tol::TP, tol::CLASSIFY);
        assert!(rep.conforming);
        let dp: Vec<f64> = rep.delta_phi.unwrap().into_iter().map(Option::unwrap).collect();
        for (a, b) in dp.iter().zip([1.0, -1.0, 0.0, 0.0]) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}
