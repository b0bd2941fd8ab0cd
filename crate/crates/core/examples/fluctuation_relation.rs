use entroflux::linalg::DensityMatrix;
use entroflux::qubit_thermal::kraus_for;
use entroflux::tpm::{run_protocol, MeasuredObservable, ProtocolOptions};
use entroflux::Result;

fn main() -> Result<()> {
    let beta_omega = 1.0_f64;
    let map = kraus_for(0.5, 0.4, -(beta_omega / 2.0).tanh())?;
    let z = MeasuredObservable::pauli_z();
    let rho0 = DensityMatrix::from_bloch(0.0, 0.0, 0.6)?;
    let rep = run_protocol(&rho0, &map, &z, &z, &ProtocolOptions::default())?;

    println!("p_F[k][m] = {:?}", rep.result.p_forward);
    println!("p_B[m][k] = {:?}", rep.result.p_backward);
    println!("Δσ[k][m]  = {:?}", rep.result.delta_sigma);
    if let Some(f) = &rep.fluctuation {
        println!("max |p_F - e^Δσ p_B| = {:.2e}", f.max_residual);
        println!("|⟨e^-Δσ⟩ - 1|        = {:.2e}", f.integral_residual);
    }
    println!("⟨Δσ⟩ = {:.6}, Var = {:.6}", rep.mean().unwrap_or(f64::NAN), rep.variance().unwrap_or(f64::NAN));
    Ok(())
}
