use entroflux::cptp::KrausMap;
use entroflux::linalg::{c64, pauli, ComplexMatrix};
use entroflux::Result;

fn main() -> Result<()> {
    let p = 0.2_f64;
    let flip = KrausMap::new(vec![
        ComplexMatrix::identity(2).scale_real((1.0 - p).sqrt()),
        pauli::sigma_x().scale_real(p.sqrt()),
    ])?;
    report("bit flip", &flip)?;

    // Amplitude damping: TP and CP, but not unital.
    let g = 0.3_f64;
    let damping = KrausMap::new(vec![
        ComplexMatrix::diag(&[1.0, (1.0 - g).sqrt()]),
        ComplexMatrix::from_fn(2, |i, j| if (i, j) == (0, 1) { c64(g.sqrt(), 0.0) } else { c64(0.0, 0.0) }),
    ])?;
    report("amplitude damping", &damping)?;

    let leaky = KrausMap::new(vec![ComplexMatrix::diag(&[1.0, 0.5])])?;
    report("leaky (not TP)", &leaky)
}

fn report(name: &str, map: &KrausMap) -> Result<()> {
    let v = map.validate();
    println!("{name}: tp={} cp={} unital={}", v.trace_preserving, v.completely_positive, v.unital);
    println!("  tp residual {:.2e}, min Choi eigenvalue {:.4}", v.tp_residual, v.choi_min_eigenvalue);
    if v.is_cptp() {
        match map.invariant_state() {
            Ok(pi) => println!("  invariant spectrum {:?}", pi.spectrum().eigenvalues),
            Err(e) => println!("  invariant state: {e}"),
        }
    }
    Ok(())
}
