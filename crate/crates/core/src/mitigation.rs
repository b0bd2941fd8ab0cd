//! Irreversibility mitigation for the thermalizing qubit started in `|0⟩`:
//! time windows where both `⟨Δσ⟩` and `Var(Δσ)` decrease, and the bounds on
//! `Γ(t)` that rule such windows out (necessary) or guarantee them once the
//! rate is negative (sufficient).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubit_thermal::{gap_from_gamma, QubitThermalModel};

/// Resolution of refined window endpoints.
pub const WINDOW_RESOLUTION: f64 = 1e-6;
/// Slack on rate signs when checking the sufficient-bound guarantee.
pub const RATE_SIGN_TOL: f64 = 1e-12;

/// `I(t) = ln(1 + e^{−2Γ}e^{βω}) − ln(1 − e^{−2Γ})`.
pub fn potential_gap(model: &QubitThermalModel, t: f64) -> Result<f64> {
    potential_gap_from_gamma(model.gamma_integral(t)?, model.beta_omega())
}

pub fn potential_gap_from_gamma(gamma_int: f64, beta_omega: f64) -> Result<f64> {
    if gamma_int <= 1e-12 {
        return Err(Error::DivergentAtZeroGamma);
    }
    Ok(gap_from_gamma(gamma_int, beta_omega))
}

/// Largest `Γ` with `z(t) ≥ 0`: `−½ ln[(1 − e^{−βω})/2]`, `+∞` at `β = 0`.
pub fn necessary_bound(model: &QubitThermalModel) -> f64 {
    necessary_bound_for(model.beta_omega())
}

pub fn necessary_bound_for(beta_omega: f64) -> f64 {
    -0.5 * (-0.5 * (-beta_omega).exp_m1()).ln()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SufficientBound {
    pub x_plus: f64,
    pub x_minus: f64,
    /// `−½ ln x₊`
    pub gamma_star: f64,
}

pub fn sufficient_bound(model: &QubitThermalModel) -> SufficientBound {
    sufficient_bound_for(model.beta_omega())
}

/// Roots `x± = (2/5)(1 − e^{−βω} ± √(e^{−2βω} + 3e^{−βω} + 1))` of
/// `10x² − 8(1 − e^{−βω})x − 8e^{−βω} = 0`. Accepts `βω = +∞`.
pub fn sufficient_bound_for(beta_omega: f64) -> SufficientBound {
    let q = (-beta_omega).exp();
    let root = (q * q + 3.0 * q + 1.0).sqrt();
    let x_plus = 0.4 * ((1.0 - q) + root);
    let x_minus = 0.4 * ((1.0 - q) - root);
    SufficientBound { x_plus, x_minus, gamma_star: -0.5 * x_plus.ln() }
}

/// Residual of `x₊` in the quadratic, normalized by `e^{βω}`.
pub fn x_plus_residual(beta_omega: f64) -> f64 {
    let q = (-beta_omega).exp();
    let x = sufficient_bound_for(beta_omega).x_plus;
    (10.0 * x * x - 8.0 * (1.0 - q) * x - 8.0 * q).abs()
}

/// Rational bounds `(lower, upper)` on `ln(1 + x)` for `x > −1`:
/// `2x/(2+x)` and `x(2+x)/(2(1+x))`, swapping roles for `x ≤ 0`.
pub fn log_bounds(x: f64) -> (f64, f64) {
    let a = 2.0 * x / (2.0 + x);
    let b = 0.5 * x * (2.0 + x) / (1.0 + x);
    if x >= 0.0 {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub necessary_gamma_bound: f64,
    pub sufficient_gamma_bound: f64,
    pub x_plus: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointFlags {
    pub gamma_negative: bool,
    pub mean_decreasing: bool,
    pub var_decreasing: bool,
    pub z_nonneg: bool,
    pub necessary_met: bool,
    pub sufficient_met: bool,
    pub mitigating: bool,
}

/// One grid point. Rate fields are `None` where the closed forms are
/// singular (pure state at `Γ = 0`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub t: f64,
    pub gamma: f64,
    pub gamma_int: f64,
    pub z: f64,
    pub mean: f64,
    pub mean_rate: Option<f64>,
    pub variance: f64,
    pub var_rate: Option<f64>,
    pub gap: Option<f64>,
    pub flags: PointFlags,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub t_start: f64,
    pub t_end: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MitigationReport {
    pub points: Vec<ScanPoint>,
    pub windows: Vec<Window>,
    pub bounds: Bounds,
    /// Points with a negative rate inside the sufficient bound where either
    /// rate is not negative. Expected to be zero.
    pub guarantee_violations: usize,
}

impl MitigationReport {
    pub fn time_grid(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.t).collect()
    }

    pub fn mitigating_count(&self) -> usize {
        self.points.iter().filter(|p| p.flags.mitigating).count()
    }
}

fn evaluate(model: &QubitThermalModel, t: f64, bounds: &Bounds) -> Result<ScanPoint> {
    let gamma = model.rate.value(t);
    let gamma_int = model.gamma_integral(t)?;
    let z = model.z_at(1.0, t)?;
    let mean = model.mean_entropy(t, 1.0)?;
    let variance = model.variance_entropy(t)?;
    let (mean_rate, var_rate) = match model.rate_state(t) {
        Ok(s) => {
            let m = -0.5 * s.z_dot * s.gap;
            (Some(m), Some(2.0 * m * (0.5 * s.z * s.gap - 1.0)))
        }
        Err(Error::SingularAtPureState { .. }) => (None, None),
        Err(e) => return Err(e),
    };
    let gap = potential_gap_from_gamma(gamma_int, model.beta_omega()).ok();
    let mean_decreasing = mean_rate.is_some_and(|r| r < 0.0);
    let var_decreasing = var_rate.is_some_and(|r| r < 0.0);
    let flags = PointFlags {
        gamma_negative: gamma < 0.0,
        mean_decreasing,
        var_decreasing,
        z_nonneg: z >= 0.0,
        necessary_met: gamma_int <= bounds.necessary_gamma_bound,
        sufficient_met: gamma_int <= bounds.sufficient_gamma_bound,
        mitigating: mean_decreasing && var_decreasing,
    };
    Ok(ScanPoint { t, gamma, gamma_int, z, mean, mean_rate, variance, var_rate, gap, flags })
}

/// `min(−∂ₜ⟨Δσ⟩, −∂ₜVar)`, positive exactly where mitigation holds.
fn mitigation_margin(model: &QubitThermalModel, t: f64) -> f64 {
    match (model.mean_entropy_rate(t), model.variance_rate(t)) {
        (Ok(a), Ok(b)) => (-a).min(-b),
        _ => f64::NEG_INFINITY,
    }
}

/// Bisects between a non-mitigating `outside` and a mitigating `inside`.
fn refine(model: &QubitThermalModel, mut outside: f64, mut inside: f64) -> f64 {
    while (inside - outside).abs() > WINDOW_RESOLUTION {
        let mid = 0.5 * (inside + outside);
        if mitigation_margin(model, mid) > 0.0 {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    0.5 * (inside + outside)
}

/// Evaluates every grid point (in parallel), extracts maximal mitigating runs
/// and refines their interior endpoints by bisection.
pub fn scan(model: &QubitThermalModel, t_grid: &[f64]) -> Result<MitigationReport> {
    if t_grid.is_empty() {
        return Err(Error::InvalidParameter("empty time grid".into()));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("time grid must be strictly increasing".into()));
    }
    let suff = sufficient_bound(model);
    let bounds = Bounds {
        necessary_gamma_bound: necessary_bound(model),
        sufficient_gamma_bound: suff.gamma_star,
        x_plus: suff.x_plus,
    };
    let points: Vec<ScanPoint> = t_grid.par_iter().map(|&t| evaluate(model, t, &bounds)).collect::<Result<_>>()?;

    let guarantee_violations = points
        .iter()
        .filter(|p| p.flags.gamma_negative && p.flags.sufficient_met)
        .filter(|p| match (p.mean_rate, p.var_rate) {
            (Some(a), Some(b)) => a > RATE_SIGN_TOL || b > RATE_SIGN_TOL,
            _ => false,
        })
        .count();

    let mut windows = Vec::new();
    let mut i = 0;
    while i < points.len() {
        if !points[i].flags.mitigating {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < points.len() && points[i + 1].flags.mitigating {
            i += 1;
        }
        let t_start = if start == 0 { points[0].t } else { refine(model, points[start - 1].t, points[start].t) };
        let t_end = if i + 1 == points.len() { points[i].t } else { refine(model, points[i + 1].t, points[i].t) };
        windows.push(Window { t_start, t_end });
        i += 1;
    }

    Ok(MitigationReport { points, windows, bounds, guarantee_violations })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundOrdering {
    /// `max (Γ*_suff − Γ*_nec)`; negative when the sufficient bound is
    /// stricter everywhere.
    pub max_violation: f64,
    /// `min (15e^{−2βω} + 50e^{−βω} + 15)`
    pub closing_inequality_min: f64,
    pub max_root_residual: f64,
    /// Whether `x₊` decreases along the (sorted) grid.
    pub x_plus_monotone: bool,
    /// Largest violation of the rational log bounds on sampled `x ∈ (−1, 5]`.
    pub log_bound_violation: f64,
}

pub fn verify_bound_ordering(beta_omegas: &[f64]) -> BoundOrdering {
    let mut max_violation = f64::NEG_INFINITY;
    let mut closing_inequality_min = f64::INFINITY;
    let mut max_root_residual: f64 = 0.0;
    for &bw in beta_omegas {
        max_violation = max_violation.max(sufficient_bound_for(bw).gamma_star - necessary_bound_for(bw));
        let q = (-bw).exp();
        closing_inequality_min = closing_inequality_min.min(15.0 * q * q + 50.0 * q + 15.0);
        max_root_residual = max_root_residual.max(x_plus_residual(bw));
    }
    let mut sorted = beta_omegas.to_vec();
    sorted.sort_by(f64::total_cmp);
    let x_plus_monotone =
        sorted.windows(2).all(|w| sufficient_bound_for(w[1]).x_plus <= sufficient_bound_for(w[0]).x_plus);

    let n = 6000;
    let mut log_bound_violation: f64 = 0.0;
    for i in 1..=n {
        let x = -1.0 + 6.0 * i as f64 / n as f64;
        let (lo, hi) = log_bounds(x);
        let l = x.ln_1p();
        log_bound_violation = log_bound_violation.max(lo - l).max(l - hi);
    }

    BoundOrdering { max_violation, closing_inequality_min, max_root_residual, x_plus_monotone, log_bound_violation }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit_thermal::RateFunction;

    fn grid(n: usize, t_max: f64) -> Vec<f64> {
        (1..=n).map(|i| t_max * i as f64 / n as f64).collect()
    }

    #[test]
    fn gap_values() {
        assert!(potential_gap_from_gamma(50.0, 1.0).unwrap() <= 1e-20);
        let g = potential_gap_from_gamma(2f64.ln() / 2.0, 0.0).unwrap();
        assert!((g - 3f64.ln()).abs() < 1e-14);
        assert!(matches!(potential_gap_from_gamma(0.0, 1.0), Err(Error::DivergentAtZeroGamma)));
    }

    #[test]
    fn gap_agrees_with_z_form() {
        let m = QubitThermalModel::default_scenario(0.8).unwrap();
        for t in [0.3, 1.0, 2.5] {
            let z = m.z_at(1.0, t).unwrap();
            let direct = ((1.0 + z) / (1.0 - z)).ln() + m.beta_omega();
            assert!((potential_gap(&m, t).unwrap() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn necessary_values() {
        assert!((necessary_bound_for(2f64.ln()) - 2f64.ln()).abs() < 1e-15);
        assert!((necessary_bound_for(800.0) - 0.5 * 2f64.ln()).abs() < 1e-15);
        assert_eq!(necessary_bound_for(0.0), f64::INFINITY);
        // equivalent to z ≥ 0 on the z₀ = 1 branch
        let bw = 1.3;
        let zi = -(bw / 2.0f64).tanh();
        let g = necessary_bound_for(bw);
        let z = (-2.0 * g).exp() * (1.0 - zi) + zi;
        assert!(z.abs() < 1e-15);
    }

    #[test]
    fn sufficient_values() {
        let s = sufficient_bound_for(0.0);
        assert!((s.x_plus - 0.8f64.sqrt()).abs() < 1e-15);
        assert!((0.0555..=0.0562).contains(&s.gamma_star));
        assert!((sufficient_bound_for(f64::INFINITY).x_plus - 0.8).abs() < 1e-12);
        assert!(x_plus_residual(1.0) < 1e-10);
        assert!(s.x_minus < 0.0);
    }

    #[test]
    fn log_bound_points() {
        let (lo, hi) = log_bounds(1.0);
        assert!((lo - 2.0 / 3.0).abs() < 1e-15 && (hi - 0.75).abs() < 1e-15);
        assert!(lo <= 2f64.ln() && 2f64.ln() <= hi);
        let (lo, hi) = log_bounds(-0.5);
        assert!(lo <= 0.5f64.ln() && 0.5f64.ln() <= hi);
    }

    #[test]
    fn ordering_holds() {
        let r = verify_bound_ordering(&[0.1, 0.5, 1.0, 2.0, 5.0, 10.0]);
        assert!(r.max_violation < 0.0);
        assert!(r.closing_inequality_min > 0.0);
        assert!(r.max_root_residual < 1e-10);
        assert!(r.x_plus_monotone);
        assert!(r.log_bound_violation <= 0.0);
    }

    #[test]
    fn markovian_has_no_windows() {
        let m = QubitThermalModel::new(0.5, 1.0, RateFunction::Constant { gamma0: 1.0 }).unwrap();
        let r = scan(&m, &grid(500, 10.0)).unwrap();
        assert!(r.windows.is_empty() && r.mitigating_count() == 0);
    }

    #[test]
    fn default_scenario_mitigates() {
        let m = QubitThermalModel::default_scenario(0.5).unwrap();
        let r = scan(&m, &grid(2000, 10.0)).unwrap();
        assert!(!r.windows.is_empty());
        assert_eq!(r.guarantee_violations, 0);
        let guaranteed: Vec<_> = r.points.iter().filter(|p| p.flags.gamma_negative && p.flags.sufficient_met).collect();
        assert!(!guaranteed.is_empty());
        assert!(guaranteed.iter().all(|p| p.flags.mitigating));
        for p in &r.points {
            if p.flags.mitigating {
                assert!(p.flags.gamma_negative && p.flags.z_nonneg && p.flags.necessary_met);
            }
            if !p.flags.z_nonneg {
                assert!(!p.flags.mitigating);
            }
        }
        for w in &r.windows {
            assert!(w.t_end >= w.t_start);
            let mid = 0.5 * (w.t_start + w.t_end);
            assert!(m.mean_entropy_rate(mid).unwrap() < 0.0 && m.variance_rate(mid).unwrap() < 0.0);
        }
    }

    #[test]
    fn rejects_bad_grid() {
        let m = QubitThermalModel::default_scenario(0.5).unwrap();
        assert!(scan(&m, &[1.0, 1.0]).is_err());
    }
}
