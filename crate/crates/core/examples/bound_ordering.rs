use entroflux::mitigation::{log_bounds, necessary_bound_for, sufficient_bound_for, verify_bound_ordering};

fn main() {
    println!("{:>6} {:>10} {:>10} {:>10}", "βω", "Γ*", "necessary", "x₊");
    for bw in [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, f64::INFINITY] {
        let s = sufficient_bound_for(bw);
        println!("{bw:>6} {:>10.6} {:>10.6} {:>10.6}", s.gamma_star, necessary_bound_for(bw), s.x_plus);
    }
    println!("Γ*(β=0) ≈ {:.3}; the corresponding bound for unital maps is 0.091", sufficient_bound_for(0.0).gamma_star);
    let (lo, hi) = log_bounds(0.5);
    println!("{lo:.6} <= ln 1.5 = {:.6} <= {hi:.6}", 1.5_f64.ln());
    let r = verify_bound_ordering(&[0.1, 0.5, 1.0, 2.0, 5.0, 10.0]);
    println!("{r:?}");
}
