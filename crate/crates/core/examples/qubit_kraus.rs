use entroflux::qubit_thermal::{bloch_superoperator, QubitThermalModel};
use entroflux::reversal::{build_potential, classify_kraus};
use entroflux::{tol, Result};

fn main() -> Result<()> {
    let model = QubitThermalModel::default_scenario(1.0)?;
    let t = 0.8;
    let map = model.kraus_at(t)?;
    let g = model.gamma_integral(t)?;
    for (i, e) in map.operators().iter().enumerate() {
        println!("E{} = {:?}", i + 1, e.rows());
    }
    let diff = map.to_superoperator().max_abs_diff(&bloch_superoperator(g, model.omega * t, model.z_inf()));
    println!("superoperator vs Bloch dynamics: {diff:.2e}");

    let pot = build_potential(&model.thermal_state())?;
    let cls = classify_kraus(&map, &pot, tol::CLASSIFY);
    println!("ΔΦ per operator: {:?}", cls.delta_phis());

    let lam = model.lambda_constraints_check(t)?;
    println!("λ-matrix min eigenvalue {:.4}, max constraint residual {:.2e}", lam.min_eigenvalue, lam.max_residual());
    Ok(())
}
