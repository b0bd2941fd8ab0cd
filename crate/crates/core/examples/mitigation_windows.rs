use entroflux::mitigation::scan;
use entroflux::qubit_thermal::{QubitThermalModel, RateFunction};
use entroflux::Result;

fn main() -> Result<()> {
    let grid: Vec<f64> = (1..=2000).map(|i| 10.0 * i as f64 / 2000.0).collect();
    show("default damped rate", &QubitThermalModel::default_scenario(0.5)?, &grid)?;
    show("constant rate", &QubitThermalModel::new(0.5, 1.0, RateFunction::Constant { gamma0: 1.0 })?, &grid)?;

    // Faster oscillation turns γ negative while Γ is still below Γ*, where
    // the sufficient condition guarantees mitigation.
    let fast = RateFunction::DampedOscillatory { gamma0: 1.0, amplitude: 1.5, frequency: 20.0, decay_time: 2.0 };
    let fine: Vec<f64> = (1..=2000).map(|i| 0.5 * i as f64 / 2000.0).collect();
    show("fast oscillation", &QubitThermalModel::new(0.5, 1.0, fast)?, &fine)
}

fn show(name: &str, model: &QubitThermalModel, grid: &[f64]) -> Result<()> {
    let rep = scan(model, grid)?;
    let guaranteed = rep.points.iter().filter(|p| p.flags.gamma_negative && p.flags.sufficient_met).count();
    println!(
        "{name}: Γ* = {:.4}, necessary Γ bound = {:.4}",
        rep.bounds.sufficient_gamma_bound, rep.bounds.necessary_gamma_bound
    );
    println!(
        "  {} mitigating points, {guaranteed} with γ < 0 and Γ < Γ*, {} guarantee violations",
        rep.mitigating_count(),
        rep.guarantee_violations
    );
    for w in &rep.windows {
        println!("  window [{:.6}, {:.6}]", w.t_start, w.t_end);
    }
    Ok(())
}
