use entroflux::linalg::DensityMatrix;
use entroflux::qubit_thermal::kraus_for;
use entroflux::tpm::{run_protocol, MeasuredObservable, ProtocolOptions};
use entroflux::Result;

// σx projectors do not commute with the thermal state: the ratio ln p_F/p_B
// is still defined, but the closed form in terms of Φ no longer applies.
fn main() -> Result<()> {
    let map = kraus_for(0.5, 0.0, -(0.5_f64).tanh())?;
    let rho0 = DensityMatrix::from_bloch(1.0, 0.0, 0.0)?;
    for (name, obs) in [("σz", MeasuredObservable::pauli_z()), ("σx", MeasuredObservable::pauli_x())] {
        let rep = run_protocol(&rho0, &map, &obs, &obs, &ProtocolOptions::default())?;
        println!("{name}: assumption (ii) {}, closed form {}", rep.assumption_ii_satisfied, rep.closed_form.is_some());
        println!("  Δσ direct = {:?}", rep.result.delta_sigma);
        println!("  ⟨Δσ⟩ = {:.6}", rep.mean().unwrap_or(f64::NAN));
    }
    Ok(())
}
