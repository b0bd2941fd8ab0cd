use entroflux::qubit_thermal::QubitThermalModel;
use entroflux::Result;

fn main() -> Result<()> {
    let model = QubitThermalModel::default_scenario(0.5)?;
    println!("{:>6} {:>10} {:>10} {:>11} {:>11}", "t", "mean", "var", "d mean/dt", "d var/dt");
    for i in 1..=12 {
        let t = 0.1 * i as f64;
        println!(
            "{t:>6.2} {:>10.6} {:>10.6} {:>11.6} {:>11.6}",
            model.mean_entropy(t, 1.0)?,
            model.variance_entropy(t)?,
            model.mean_entropy_rate(t)?,
            model.variance_rate(t)?,
        );
    }
    // Mixed initial populations use the TPM final marginal.
    println!("p0 = 0.7 at t = 1: {:.6}", model.mean_entropy(1.0, 0.7)?);
    Ok(())
}
