use proptest::prelude::*;
use rand::Rng;

use entroflux::linalg::{ComplexMatrix, DensityMatrix};
use entroflux::random::{
    random_complex_matrix, random_density_matrix, random_detailed_balance_map, random_kraus_map,
    random_mixed_unitary_map, random_unitary, seeded,
};
use entroflux::reversal::{build_potential, classify_kraus, dual_map, time_reverse, time_reverse_state};
use entroflux::tol;
use entroflux::tpm::{run_backward, run_forward, run_protocol, MeasuredObservable, ProtocolOptions};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_maps_are_cptp(seed in any::<u64>(), d in 2usize..=4) {
        let mut rng = seeded(seed);
        let count = rng.random_range(1..=d * d);
        let map = random_kraus_map(d, count, &mut rng);
        let v = map.validate();
        prop_assert!(v.is_cptp());
        prop_assert!(map.choi().partial_trace_output().max_abs_diff(&ComplexMatrix::identity(d)) < 1e-10);
        let out = map.apply(&random_density_matrix(d, &mut rng)).unwrap();
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn joint_tables_have_consistent_marginals(seed in any::<u64>(), d in 2usize..=4) {
        let mut rng = seeded(seed);
        let (map, pi) = random_detailed_balance_map(d, &mut rng);
        let rho0 = random_density_matrix(d, &mut rng);
        let o_in = MeasuredObservable::from_basis(&random_unitary(d, &mut rng)).unwrap();
        let o_fin = MeasuredObservable::computational(d);
        let f = run_forward(&rho0, &map, &o_in, &o_fin).unwrap();
        let pb = run_backward(&map, &pi, &o_in, &o_fin, &f.p_fin).unwrap();
        for m in 0..d {
            let s: f64 = (0..d).map(|k| f.p_forward[k][m]).sum();
            prop_assert!((s - f.p_in[m]).abs() < 1e-12);
        }
        for k in 0..d {
            prop_assert!((f.p_forward[k].iter().sum::<f64>() - f.p_fin[k]).abs() < 1e-12);
            prop_assert!(((0..d).map(|m| pb[m][k]).sum::<f64>() - f.p_fin[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn mean_entropy_production_is_nonnegative(seed in any::<u64>(), d in 2usize..=4) {
        let mut rng = seeded(seed);
        let (map, pi) = random_detailed_balance_map(d, &mut rng);
        let pot = build_potential(&pi).unwrap();
        let obs = MeasuredObservable::invariant_eigenbasis(&pot).unwrap();
        let rho0 = random_density_matrix(d, &mut rng);
        let opts = ProtocolOptions { invariant_state: Some(pi), ..ProtocolOptions::default() };
        let rep = run_protocol(&rho0, &map, &obs, &obs, &opts).unwrap();
        prop_assert!(rep.closed_form.is_some());
        prop_assert!(rep.mean().unwrap() >= -1e-10);
        let f = rep.fluctuation.unwrap();
        prop_assert!(f.max_residual < 1e-9);
    }

    #[test]
    fn unital_maps_have_flat_potential(seed in any::<u64>(), d in 2usize..=4) {
        let mut rng = seeded(seed);
        let count = rng.random_range(1..=4);
        let map = random_mixed_unitary_map(d, count, &mut rng);
        let mixed = DensityMatrix::maximally_mixed(d);
        prop_assert!(map.apply(&mixed).unwrap().matrix().max_abs_diff(mixed.matrix()) < 1e-12);
        let pot = build_potential(&mixed).unwrap();
        let dphi = classify_kraus(&map, &pot, tol::CLASSIFY).delta_phis().unwrap();
        prop_assert!(dphi.iter().all(|x| x.abs() < 1e-10));
    }

    #[test]
    fn time_reversal_conjugates_trace(seed in any::<u64>(), d in 2usize..=4) {
        let mut rng = seeded(seed);
        let a = random_complex_matrix(d, &mut rng);
        prop_assert!((time_reverse(&a).trace() - a.trace().conj()).norm() < 1e-12);
        let rho = random_density_matrix(d, &mut rng);
        let rev = time_reverse_state(&rho);
        prop_assert!((rev.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(time_reverse(rev.matrix()).max_abs_diff(rho.matrix()) < 1e-14);
    }

    #[test]
    fn dual_of_dual_recovers_map(seed in any::<u64>(), d in 2usize..=4) {
        let mut rng = seeded(seed);
        let count = rng.random_range(2..=d * d);
        let map = random_kraus_map(d, count, &mut rng);
        let pi = map.invariant_state().unwrap();
        let dual = dual_map(&map, &pi).unwrap();
        prop_assert!(dual.validate().is_cptp());
        let back = dual_map(&dual, &time_reverse_state(&pi)).unwrap();
        prop_assert!(back.to_superoperator().max_abs_diff(&map.to_superoperator()) < 1e-9);
    }
}
