use entroflux::linalg::DensityMatrix;
use entroflux::qubit_thermal::kraus_for;
use entroflux::tpm::{run_protocol, MeasuredObservable, ProtocolOptions};
use entroflux::Result;

// ⟨Δσ⟩ equals S(ρ₀‖π) − S(E(ρ₀)‖π) on dephased states, so it never goes negative.
fn main() -> Result<()> {
    let z = MeasuredObservable::pauli_z();
    println!("{:>5} {:>5} {:>12} {:>12}", "βω", "Γ", "direct", "rel. ent.");
    for beta_omega in [0.0, 0.5, 2.0] {
        for gamma in [0.1, 1.0, 3.0] {
            let map = kraus_for(gamma, 0.0, -(beta_omega / 2.0_f64).tanh())?;
            let rep = run_protocol(&DensityMatrix::basis_state(2, 0), &map, &z, &z, &ProtocolOptions::default())?;
            println!(
                "{beta_omega:>5} {gamma:>5} {:>12.8} {:>12.8}",
                rep.mean().unwrap_or(f64::NAN),
                rep.mean_relative_entropy.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
