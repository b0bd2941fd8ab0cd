//! Thermalizing qubit with a time-dependent decay rate.
//!
//! The Bloch vector obeys
//!
//! ```text
//! z(t)        = e^{-2Γ(t)} (z₀ − z∞) + z∞
//! x(t)+i y(t) = e^{-Γ(t) + iωt} (x₀ + i y₀)
//! ```
//!
//! with `Γ(t) = ½(1+e^{βω}) ∫₀ᵗ γ(τ) dτ` and `z∞ = −tanh(βω/2)`. The rate
//! `γ(t)` may go negative for a while (non-Markovian transients), which makes
//! `Γ` non-monotone. `H = (ω/2) σᶻ`, so `|1⟩` is the ground state.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cptp::KrausMap;
use crate::error::{Error, Result};
use crate::linalg::{c64, eig_hermitian, pauli, ComplexMatrix, DensityMatrix, C64};
use crate::random::seeded;

/// Time-dependent decay rate `γ(t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RateFunction {
    Constant {
        gamma0: f64,
    },
    /// `γ₀ (1 − a e^{−t/τ_d} sin(νt))`
    DampedOscillatory {
        gamma0: f64,
        amplitude: f64,
        frequency: f64,
        decay_time: f64,
    },
    Tabulated(TabulatedRate),
}

/// Piecewise-linear rate through `(t, γ)` samples, held constant outside
/// the sampled range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct TabulatedRate {
    times: Vec<f64>,
    values: Vec<f64>,
    /// `∫_{t₀}^{t_i} γ`
    cumulative: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    points: Vec<(f64, f64)>,
}

impl TryFrom<RawTable> for TabulatedRate {
    type Error = Error;
    fn try_from(raw: RawTable) -> Result<Self> {
        TabulatedRate::new(raw.points)
    }
}

impl From<TabulatedRate> for RawTable {
    fn from(t: TabulatedRate) -> Self {
        RawTable { points: t.points() }
    }
}

impl TabulatedRate {
    /// Samples must be finite, at least two, strictly increasing in `t`, and
    /// end on a positive rate.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidParameter("tabulated rate needs at least two samples".into()));
        }
        if points.iter().any(|(t, g)| !t.is_finite() || !g.is_finite()) {
            return Err(Error::InvalidParameter("tabulated rate has non-finite samples".into()));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidParameter("tabulated times must be strictly increasing".into()));
        }
        if points[points.len() - 1].1 <= 0.0 {
            return Err(Error::InvalidParameter("tabulated rate must end positive".into()));
        }
        let (times, values): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
        let mut cumulative = vec![0.0; times.len()];
        for i in 1..times.len() {
            cumulative[i] = cumulative[i - 1] + 0.5 * (values[i] + values[i - 1]) * (times[i] - times[i - 1]);
        }
        Ok(TabulatedRate { times, values, cumulative })
    }

    /// Reads `t,gamma` rows; a non-numeric first line is taken as a header.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let parsed = match fields.as_slice() {
                [t, g] => t.parse::<f64>().ok().zip(g.parse::<f64>().ok()),
                _ => None,
            };
            match parsed {
                Some(p) => points.push(p),
                None if points.is_empty() && n == 0 => continue,
                None => return Err(Error::Parse(format!("rate table line {}: {line:?}", n + 1))),
            }
        }
        TabulatedRate::new(points)
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        self.times.iter().copied().zip(self.values.iter().copied()).collect()
    }

    pub fn value(&self, t: f64) -> f64 {
        let n = self.times.len();
        if t <= self.times[0] {
            return self.values[0];
        }
        if t >= self.times[n - 1] {
            return self.values[n - 1];
        }
        let i = self.times.partition_point(|&s| s <= t) - 1;
        let w = (t - self.times[i]) / (self.times[i + 1] - self.times[i]);
        self.values[i] + w * (self.values[i + 1] - self.values[i])
    }

    /// `∫_{t₀}^{t} γ`, exact for the linear interpolant.
    fn antiderivative(&self, t: f64) -> f64 {
        let n = self.times.len();
        if t <= self.times[0] {
            return (t - self.times[0]) * self.values[0];
        }
        if t >= self.times[n - 1] {
            return self.cumulative[n - 1] + (t - self.times[n - 1]) * self.values[n - 1];
        }
        let i = self.times.partition_point(|&s| s <= t) - 1;
        self.cumulative[i] + 0.5 * (self.values[i] + self.value(t)) * (t - self.times[i])
    }

    pub fn integral(&self, t: f64) -> f64 {
        self.antiderivative(t) - self.antiderivative(0.0)
    }
}

impl RateFunction {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            RateFunction::Constant { gamma0 } => *gamma0,
            RateFunction::DampedOscillatory { gamma0, amplitude, frequency, decay_time } => {
                gamma0 * (1.0 - amplitude * (-t / decay_time).exp() * (frequency * t).sin())
            }
            RateFunction::Tabulated(tab) => tab.value(t),
        }
    }

    /// `∫₀ᵗ γ(τ) dτ`
    pub fn integral(&self, t: f64) -> f64 {
        match self {
            RateFunction::Constant { gamma0 } => gamma0 * t,
            RateFunction::DampedOscillatory { gamma0, amplitude, frequency, decay_time } => {
                let k = 1.0 / decay_time;
                let nu = *frequency;
                let damped = (nu - (-k * t).exp() * (nu * (nu * t).cos() + k * (nu * t).sin())) / (nu * nu + k * k);
                gamma0 * (t - amplitude * damped)
            }
            RateFunction::Tabulated(tab) => tab.integral(t),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.into()));
        match self {
            RateFunction::Constant { gamma0 } if !gamma0.is_finite() => bad("gamma0 must be finite"),
            RateFunction::DampedOscillatory { gamma0, amplitude, frequency, decay_time } => {
                if ![*gamma0, *amplitude, *frequency, *decay_time].iter().all(|v| v.is_finite()) {
                    bad("rate parameters must be finite")
                } else if *gamma0 <= 0.0 {
                    bad("gamma0 must be positive so the rate has a positive long-time limit")
                } else if *decay_time <= 0.0 {
                    bad("decay_time must be positive")
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitThermalModel {
    pub beta: f64,
    pub omega: f64,
    pub rate: RateFunction,
}

impl QubitThermalModel {
    pub fn new(beta: f64, omega: f64, rate: RateFunction) -> Result<Self> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::InvalidParameter(format!("beta must be finite and >= 0, got {beta}")));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParameter(format!("omega must be finite and > 0, got {omega}")));
        }
        rate.validate()?;
        Ok(QubitThermalModel { beta, omega, rate })
    }

    /// `γ(t) = 1 − 1.5 e^{−t/2} sin(5t)` at `ω = 1`: negative-rate windows
    /// early on, positive long-time limit.
    pub fn default_scenario(beta: f64) -> Result<Self> {
        QubitThermalModel::new(
            beta,
            1.0,
            RateFunction::DampedOscillatory { gamma0: 1.0, amplitude: 1.5, frequency: 5.0, decay_time: 2.0 },
        )
    }

    pub fn beta_omega(&self) -> f64 {
        self.beta * self.omega
    }

    pub fn z_inf(&self) -> f64 {
        -(self.beta_omega() / 2.0).tanh()
    }

    /// `½(1 + e^{βω})`
    pub fn rate_prefactor(&self) -> f64 {
        0.5 * (1.0 + self.beta_omega().exp())
    }

    pub fn hamiltonian(&self) -> ComplexMatrix {
        pauli::sigma_z().scale_real(self.omega / 2.0)
    }

    /// Gibbs state `diag(π₀, π₁)` with `π₁/π₀ = e^{βω}`.
    pub fn thermal_state(&self) -> DensityMatrix {
        let pi0 = 1.0 / (1.0 + self.beta_omega().exp());
        DensityMatrix::diagonal(&[pi0, 1.0 - pi0]).expect("valid probabilities")
    }

    /// `Γ(t)`
    pub fn gamma_integral(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.rate_prefactor() * self.rate.integral(t))
    }

    /// `dΓ/dt = ½(1+e^{βω}) γ(t)`
    pub fn gamma_derivative(&self, t: f64) -> f64 {
        self.rate_prefactor() * self.rate.value(t)
    }

    /// `z(t)` starting from `z₀`.
    pub fn z_at(&self, z0: f64, t: f64) -> Result<f64> {
        let g = self.gamma_integral(t)?;
        Ok(z_from_gamma(z0, g, self.z_inf()))
    }

    pub fn bloch_evolve(&self, r0: BlochState, t: f64) -> Result<BlochState> {
        let g = self.gamma_integral(t)?;
        Ok(bloch_evolve_gamma(r0, g, self.omega * t, self.z_inf()))
    }

    pub fn kraus_at(&self, t: f64) -> Result<KrausMap> {
        let g = self.gamma_integral(t)?;
        kraus_for(g, self.omega * t, self.z_inf())
    }

    /// Structural checks of the two-index coefficient matrix at time `t`.
    pub fn lambda_constraints_check(&self, t: f64) -> Result<LambdaReport> {
        let g = self.gamma_integral(t)?;
        Ok(lambda_report(g, self.omega * t, self.z_inf()))
    }

    /// Closed-form `⟨Δσ⟩` for `ρ₀ = diag(p0, 1 − p0)` with `σᶻ` measured at
    /// both ends.
    pub fn mean_entropy(&self, t: f64, p0_in: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p0_in) {
            return Err(Error::InvalidParameter(format!("p0_in must lie in [0, 1], got {p0_in}")));
        }
        let g = self.gamma_integral(t)?;
        let zi = self.z_inf();
        let z0 = z_from_gamma(1.0, g, zi);
        let z1 = z_from_gamma(-1.0, g, zi);
        let zbar = p0_in * z0 + (1.0 - p0_in) * z1;
        let p_fin0 = 0.5 * (1.0 + zbar);
        Ok(binary_entropy(p_fin0) - binary_entropy(p0_in) + 0.5 * self.beta_omega() * (2.0 * p0_in - 1.0 - zbar))
    }

    /// `⟨Δσ²⟩` for `ρ₀ = |0⟩⟨0|`.
    pub fn second_moment(&self, t: f64) -> Result<f64> {
        let g = self.gamma_integral(t)?;
        let (plus, minus) = half_populations(g, self.z_inf());
        let bw = self.beta_omega();
        Ok(xlnx_sq(plus) + xlnx_sq(minus) + bw * bw * minus - 2.0 * bw * xlnx(minus))
    }

    /// `Var(Δσ) = ¼(1 − z²) I²` for `ρ₀ = |0⟩⟨0|`; zero at the pure state.
    pub fn variance_entropy(&self, t: f64) -> Result<f64> {
        let g = self.gamma_integral(t)?;
        let (plus, minus) = half_populations(g, self.z_inf());
        if plus <= 0.0 || minus <= 0.0 {
            return Ok(0.0);
        }
        let i = (plus / minus).ln() + self.beta_omega();
        Ok(plus * minus * i * i)
    }

    /// `∂ₜ⟨Δσ⟩ = −½ ż I` for `ρ₀ = |0⟩⟨0|`.
    pub fn mean_entropy_rate(&self, t: f64) -> Result<f64> {
        let s = self.rate_state(t)?;
        Ok(-0.5 * s.z_dot * s.gap)
    }

    /// `∂ₜVar(Δσ) = 2 ∂ₜ⟨Δσ⟩ (z I/2 − 1)` for `ρ₀ = |0⟩⟨0|`.
    pub fn variance_rate(&self, t: f64) -> Result<f64> {
        let s = self.rate_state(t)?;
        let mean_rate = -0.5 * s.z_dot * s.gap;
        Ok(2.0 * mean_rate * (0.5 * s.z * s.gap - 1.0))
    }

    /// Shared ingredients of the rate formulas on the `z₀ = 1` branch.
    pub fn rate_state(&self, t: f64) -> Result<RateState> {
        let g = self.gamma_integral(t)?;
        let zi = self.z_inf();
        let z = z_from_gamma(1.0, g, zi);
        if !(z.abs() < 1.0 - 1e-12) {
            return Err(Error::SingularAtPureState { z });
        }
        let gamma_dot = self.gamma_derivative(t);
        let z_dot = -2.0 * gamma_dot * (-2.0 * g).exp() * (1.0 - zi);
        let gap = gap_from_gamma(g, self.beta_omega());
        Ok(RateState { gamma_int: g, gamma_dot, z, z_dot, gap })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateState {
    pub gamma_int: f64,
    pub gamma_dot: f64,
    pub z: f64,
    pub z_dot: f64,
    /// `I = ln[(1+z)/(1−z)] + βω`
    pub gap: f64,
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time must be finite and >= 0, got {t}")));
    }
    Ok(())
}

pub fn z_from_gamma(z0: f64, gamma_int: f64, z_inf: f64) -> f64 {
    (-2.0 * gamma_int).exp() * (z0 - z_inf) + z_inf
}

/// `((1+z)/2, (1−z)/2)` on the `z₀ = 1` branch, each computed without
/// cancellation.
fn half_populations(gamma_int: f64, z_inf: f64) -> (f64, f64) {
    let minus = -0.5 * (-2.0 * gamma_int).exp_m1() * (1.0 - z_inf);
    let plus = 0.5 * ((1.0 + z_inf) + (-2.0 * gamma_int).exp() * (1.0 - z_inf));
    (plus, minus)
}

/// `ln(1 + e^{−2Γ} e^{βω}) − ln(1 − e^{−2Γ})`
pub(crate) fn gap_from_gamma(gamma_int: f64, beta_omega: f64) -> f64 {
    (beta_omega - 2.0 * gamma_int).exp().ln_1p() - (-(-2.0 * gamma_int).exp_m1()).ln()
}

fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

fn xlnx_sq(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln().powi(2)
    }
}

/// `−p ln p − (1−p) ln(1−p)`
pub fn binary_entropy(p: f64) -> f64 {
    -xlnx(p) - xlnx(1.0 - p)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochState {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n2 = x * x + y * y + z * z;
        if !n2.is_finite() || n2 > 1.0 + 1e-12 {
            return Err(Error::InvalidDensity(format!("Bloch vector ({x}, {y}, {z}) outside the unit ball")));
        }
        Ok(BlochState { x, y, z })
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::from_bloch(self.x, self.y, self.z)
    }

    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        let [x, y, z] = rho.bloch().ok_or(Error::DimensionMismatch { expected: 2, found: rho.dim() })?;
        Ok(BlochState { x, y, z })
    }
}

pub fn bloch_evolve_gamma(r0: BlochState, gamma_int: f64, omega_t: f64, z_inf: f64) -> BlochState {
    let c = C64::from_polar((-gamma_int).exp(), omega_t) * c64(r0.x, r0.y);
    BlochState { x: c.re, y: c.im, z: z_from_gamma(r0.z, gamma_int, z_inf) }
}

/// Superoperator (column stacking) of the Bloch-vector dynamics, built
/// directly from the matrix-element action
/// `ρ₀₀ → (1 − c₂²)ρ₀₀ + c₁²ρ₁₁`, `ρ₁₀ → e^{−Γ+iωt} ρ₁₀`.
pub fn bloch_superoperator(gamma_int: f64, omega_t: f64, z_inf: f64) -> ComplexMatrix {
    let s = -(-2.0 * gamma_int).exp_m1();
    let up = 0.5 * s * (1.0 + z_inf);
    let down = 0.5 * s * (1.0 - z_inf);
    let coh = C64::from_polar((-gamma_int).exp(), omega_t);
    // vec index of (i, j) is j * 2 + i
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = c64(1.0 - down, 0.0);
    m[(0, 3)] = c64(up, 0.0);
    m[(3, 0)] = c64(down, 0.0);
    m[(3, 3)] = c64(1.0 - up, 0.0);
    m[(1, 1)] = coh;
    m[(2, 2)] = coh.conj();
    m
}

/// Diagonal Kraus decomposition `{E₁, E₂, E₃, E₄}` at integrated rate `Γ`
/// and phase `ωt`.
///
/// `E₁ ∝ σ⁺` and `E₂ ∝ σ⁻` carry the jumps. `E₃`, `E₄` are diagonal and
/// come from the eigen-decomposition of the Hermitian block
/// `C = [[1 − c₂², e^{−Γ−iωt}], [e^{−Γ+iωt}, 1 − c₁²]]` with eigenvalues
/// `D₁,₂ = ½(1+e^{−2Γ}) ± b` and eigenvectors
/// `(e^{−Γ−iωt}, b ∓ a)/√(2b(b ∓ a))`, `E = √D diag(u₁, ū₂)`.
pub fn kraus_for(gamma_int: f64, omega_t: f64, z_inf: f64) -> Result<KrausMap> {
    if gamma_int < 0.0 {
        return Err(Error::NegativeIntegratedRate { gamma_int });
    }
    let e2g = (-2.0 * gamma_int).exp();
    let s = -(-2.0 * gamma_int).exp_m1();
    let a = z_inf * s / 2.0;
    let b = (a * a + e2g).sqrt();
    if b <= 1e-14 {
        return Err(Error::DegenerateEigenvector { b });
    }
    let e1 = pauli::sigma_plus().scale_real((0.5 * s * (1.0 + z_inf)).max(0.0).sqrt());
    let e2 = pauli::sigma_minus().scale_real((0.5 * s * (1.0 - z_inf)).max(0.0).sqrt());
    let mean = 0.5 * (1.0 + e2g);
    let d1 = mean + b;
    // D₂ = (AB − |C|²)/D₁ avoids the cancellation in mean − b
    let d2 = ((1.0 - 0.5 * s * (1.0 - z_inf)) * (1.0 - 0.5 * s * (1.0 + z_inf)) - e2g) / d1;
    let coh = C64::from_polar((-gamma_int).exp(), -omega_t);
    // b − a and b + a computed as e^{−2Γ}/(b ± a) on the side that cancels
    let (b_minus_a, b_plus_a) = if a >= 0.0 { (e2g / (b + a), b + a) } else { (b - a, e2g / (b - a)) };
    let diag_op = |d: f64, second: f64, norm2: f64| {
        let scale = d.max(0.0).sqrt() / norm2.sqrt();
        ComplexMatrix::diag_complex(&[coh.scale(scale), c64(second * scale, 0.0)])
    };
    let e3 = diag_op(d1, b_minus_a, 2.0 * b * b_minus_a);
    let e4 = diag_op(d2, -b_plus_a, 2.0 * b * b_plus_a);
    KrausMap::new(vec![e1, e2, e3, e4])
}

/// Two-index coefficients `λ_jk` with `Λ(ρ) = Σ λ_jk σ_j ρ σ_k`,
/// `σ₀ = I`, `σ₁,₂,₃ = σˣ, σʸ, σᶻ`.
pub fn lambda_matrix(gamma_int: f64, omega_t: f64, z_inf: f64) -> ComplexMatrix {
    let eg = (-gamma_int).exp();
    let lam = -0.25 * (-2.0 * gamma_int).exp_m1();
    let base = 0.25 * (1.0 + eg * eg);
    let (sin, cos) = omega_t.sin_cos();
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = c64(base + 0.5 * eg * cos, 0.0);
    m[(3, 3)] = c64(base - 0.5 * eg * cos, 0.0);
    m[(1, 1)] = c64(lam, 0.0);
    m[(2, 2)] = c64(lam, 0.0);
    m[(0, 3)] = c64(z_inf * lam, 0.5 * eg * sin);
    m[(3, 0)] = m[(0, 3)].conj();
    m[(2, 1)] = c64(0.0, z_inf * lam);
    m[(1, 2)] = m[(2, 1)].conj();
    m
}

/// Residuals of the λ-matrix constraints. The ten `pairings` entries are
/// the coefficient identities obtained by matching the Bloch dynamics
/// term by term, in order: `Re λ₀₃` value, `λ₁₁+λ₂₂`, `Im λ₀₂` vs `Re λ₁₃`,
/// `Im λ₀₁` vs `Re λ₃₂`, `Re λ₀₁`, `Re λ₀₂`, `Im λ₀₂` vs `Re λ₃₁`,
/// `Im λ₀₁` vs `Re λ₁₃`, the `sin ωt` identity and the `cos ωt` identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaReport {
    pub lambda: Vec<Vec<C64>>,
    pub trace_pairing: f64,
    pub trace_sum: f64,
    pub hermiticity: f64,
    pub pairings: [f64; 10],
    pub min_eigenvalue: f64,
    /// Max error of the x/y/z-from-λ formulas against the Bloch solution
    /// over 20 random initial vectors.
    pub bloch_reproduction: f64,
    /// `‖S_λ − S_Bloch‖_max` between superoperators.
    pub map_residual: f64,
}

impl LambdaReport {
    /// Largest violation, counting a negative eigenvalue as a violation.
    pub fn max_residual(&self) -> f64 {
        self.pairings
            .iter()
            .copied()
            .chain([
                self.trace_pairing,
                self.trace_sum,
                self.hermiticity,
                (-self.min_eigenvalue).max(0.0),
                self.bloch_reproduction,
                self.map_residual,
            ])
            .fold(0.0, f64::max)
    }
}

fn lambda_report(gamma_int: f64, omega_t: f64, z_inf: f64) -> LambdaReport {
    let l = lambda_matrix(gamma_int, omega_t, z_inf);
    let re = |j: usize, k: usize| l[(j, k)].re;
    let im = |j: usize, k: usize| l[(j, k)].im;
    let eg = (-gamma_int).exp();
    let (sin, cos) = omega_t.sin_cos();

    let trace_pairing = [(re(0, 1) - im(3, 2)).abs(), (re(0, 2) - im(1, 3)).abs(), (re(0, 3) - im(2, 1)).abs()]
        .into_iter()
        .fold(0.0, f64::max);
    let trace_sum = ((0..4).map(|i| l[(i, i)]).sum::<C64>() - 1.0).norm();
    let hermiticity = l.hermitian_residual();
    let pairings = [
        (re(0, 3) + 0.25 * z_inf * (-2.0 * gamma_int).exp_m1()).abs(),
        (1.0 - 2.0 * re(1, 1) - 2.0 * re(2, 2) - eg * eg).abs(),
        (-2.0 * im(0, 2) + 2.0 * re(1, 3)).abs(),
        (2.0 * im(0, 1) + 2.0 * re(3, 2)).abs(),
        re(0, 1).abs(),
        re(0, 2).abs(),
        (2.0 * im(0, 2) + 2.0 * re(3, 1)).abs(),
        (-2.0 * im(0, 1) + 2.0 * re(1, 3)).abs(),
        (2.0 * im(0, 3) + 2.0 * re(1, 2) - eg * sin).abs(),
        (re(0, 0) + re(1, 1) - re(2, 2) - re(3, 3) - eg * cos).abs(),
    ];
    let min_eigenvalue = eig_hermitian(&l.hermitian_part()).map(|s| s.eigenvalues[0]).unwrap_or(f64::NAN);

    let mut rng = seeded(0x1a3b);
    let mut bloch_reproduction: f64 = 0.0;
    for _ in 0..20 {
        let r0 = random_bloch(&mut rng);
        let (x0, y0, z0) = (r0.x, r0.y, r0.z);
        let x = 4.0 * re(0, 1)
            + x0 * (re(0, 0) + re(1, 1) - re(2, 2) - re(3, 3))
            + y0 * (-2.0 * im(0, 3) + 2.0 * re(2, 1))
            + z0 * (2.0 * im(0, 2) + 2.0 * re(3, 1));
        let y = 4.0 * re(0, 2)
            + y0 * (1.0 - 2.0 * re(1, 1) - 2.0 * re(3, 3))
            + x0 * (2.0 * im(0, 3) + 2.0 * re(1, 2))
            + z0 * (-2.0 * im(0, 1) + 2.0 * re(1, 3));
        let z = 4.0 * re(0, 3)
            + z0 * (1.0 - 2.0 * re(1, 1) - 2.0 * re(2, 2))
            + x0 * (-2.0 * im(0, 2) + 2.0 * re(1, 3))
            + y0 * (2.0 * im(0, 1) + 2.0 * re(3, 2));
        let r = bloch_evolve_gamma(r0, gamma_int, omega_t, z_inf);
        bloch_reproduction = bloch_reproduction.max((x - r.x).abs()).max((y - r.y).abs()).max((z - r.z).abs());
    }

    let sigmas = pauli::basis();
    let mut super_l = ComplexMatrix::zeros(4);
    for j in 0..4 {
        for k in 0..4 {
            // vec(A X B) = (Bᵀ ⊗ A) vec(X)
            let term = sigmas[k].transpose().kron(&sigmas[j]).scale(l[(j, k)]);
            super_l = &super_l + &term;
        }
    }
    let map_residual = super_l.max_abs_diff(&bloch_superoperator(gamma_int, omega_t, z_inf));

    LambdaReport {
        lambda: l.rows(),
        trace_pairing,
        trace_sum,
        hermiticity,
        pairings,
        min_eigenvalue,
        bloch_reproduction,
        map_residual,
    }
}

fn random_bloch<R: rand::Rng + ?Sized>(rng: &mut R) -> BlochState {
    let r = rng.random::<f64>().cbrt();
    let cos_t = 2.0 * rng.random::<f64>() - 1.0;
    let sin_t = (1.0 - cos_t * cos_t).sqrt();
    let phi = 2.0 * PI * rng.random::<f64>();
    BlochState { x: r * sin_t * phi.cos(), y: r * sin_t * phi.sin(), z: r * cos_t }
}
