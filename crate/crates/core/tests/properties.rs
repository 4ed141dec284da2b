//! Property-based invariants across modules.

use catrand::bounds::{classical_lower_bound, quantum_epsilon_limit, quantum_lower_bound, rank_witness};
use catrand::dephaser::{build_dephasing_unitary, pinch, transition_channel, Mode, NoisyChannel};
use catrand::expander::{
    classical_step, distance_to_uniform, expander_channel_step, margulis_contraction, margulis_maps, state_from_wigner,
    wigner_from_state,
};
use catrand::pqc::{pqc_decode, pqc_encode, PqcKey};
use catrand::qcore::random::{haar_unitary, random_density_matrix, random_majorizing_pair, random_probabilities, trial_rng};
use catrand::qcore::{majorizes, trace_norm, DensityMatrix};
use catrand::weylops::{omega_power, tau_power, weyl_operator, OrthonormalBasis};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 32, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn dephasing_is_exact_and_catalytic(d in 2usize..=10, seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 0);
        let basis = OrthonormalBasis::new(haar_unitary(d, &mut rng).into_matrix()).unwrap();
        let ch = build_dephasing_unitary(d, &basis).unwrap();
        let rho = random_density_matrix(d, &mut rng);
        let out = ch.apply(&rho).unwrap();
        let target = pinch(&rho, &basis).unwrap();
        prop_assert!(trace_norm(&(out.matrix() - target.matrix())) < 1e-10);
        prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
        let m = ch.randomness_dim();
        prop_assert!(m * m >= d && (m - 1) * (m - 1) < d);
        let anc = ch.ancilla_output(&rho).unwrap();
        prop_assert!(trace_norm(&(anc.matrix() - DensityMatrix::maximally_mixed(m).matrix())) < 1e-10);
    }

    #[test]
    fn pinch_is_idempotent(d in 2usize..=8, seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 1);
        let basis = OrthonormalBasis::new(haar_unitary(d, &mut rng).into_matrix()).unwrap();
        let once = pinch(&random_density_matrix(d, &mut rng), &basis).unwrap();
        let twice = pinch(&once, &basis).unwrap();
        prop_assert!((once.matrix() - twice.matrix()).max_abs() < 1e-12);
    }

    #[test]
    fn transitions_reach_majorized_targets(d in 2usize..=6, seed in any::<u64>(), quantum in any::<bool>()) {
        let (rho, target) = random_majorizing_pair(d, &mut trial_rng(seed, 2));
        prop_assert!(majorizes(&rho, &target).unwrap());
        let mode = if quantum { Mode::Quantum } else { Mode::Classical };
        let ch = transition_channel(&rho, &target, mode).unwrap();
        prop_assert!(trace_norm(&(ch.apply(&rho).unwrap().matrix() - target.matrix())) < 1e-8);
    }

    #[test]
    fn weyl_operators_are_unitary_with_exact_phases(m in 2usize..=7, r in -20i64..20, s in -20i64..20) {
        let u = weyl_operator(m, r, s).unwrap();
        prop_assert!(u.matrix().is_unitary(1e-12));
        prop_assert!((omega_power(m, r) - omega_power(m, r + m as i64)).norm() < 1e-14);
        prop_assert!((tau_power(m, r) * tau_power(m, s) - tau_power(m, r + s)).norm() < 1e-12);
    }

    #[test]
    fn classical_walk_is_doubly_stochastic_and_contracts(e in prop::sample::select(vec![3usize, 5, 7]), seed in any::<u64>()) {
        let p = random_probabilities(e * e, &mut trial_rng(seed, 3));
        let s = classical_step(&p, e).unwrap();
        prop_assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(s.iter().all(|&x| x >= 0.0));
        prop_assert!(distance_to_uniform(&s) <= margulis_contraction() * distance_to_uniform(&p) + 1e-15);
        for map in margulis_maps(e).unwrap() {
            prop_assert_eq!(map.inverse().inverse(), map);
        }
    }

    #[test]
    fn wigner_round_trip_and_parseval(d in prop::sample::select(vec![3usize, 5, 7, 9]), seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 4);
        let rho = random_density_matrix(d, &mut rng);
        let sigma = random_density_matrix(d, &mut rng);
        let (wr, ws) = (wigner_from_state(&rho).unwrap(), wigner_from_state(&sigma).unwrap());
        prop_assert!((state_from_wigner(&wr).unwrap() - rho.matrix().clone()).max_abs() < 1e-10);
        prop_assert!((wr.total() - 1.0).abs() < 1e-12);
        let hs = (rho.matrix() - sigma.matrix()).frobenius_norm().powi(2);
        prop_assert!((hs - d as f64 * wr.distance(&ws).powi(2)).abs() < 1e-9);
    }

    #[test]
    fn expander_step_conserves_columns_and_commutes_with_pinch(seed in any::<u64>()) {
        let rho = random_density_matrix(9, &mut trial_rng(seed, 5));
        let w = wigner_from_state(&rho).unwrap();
        let stepped = expander_channel_step(&w).unwrap();
        for (a, b) in stepped.column_sums().iter().zip(w.column_sums()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        prop_assert!(stepped.pinched().distance(&w.pinched()) < 1e-10);
        let m = state_from_wigner(&stepped).unwrap();
        prop_assert!(m.is_hermitian(1e-12));
        prop_assert!((m.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lower_bounds_are_monotone(d in 2usize..=64, e1 in 0.0f64..=2.0, e2 in 0.0f64..=2.0) {
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        prop_assert!(classical_lower_bound(d, hi).unwrap() <= classical_lower_bound(d, lo).unwrap());
        prop_assert!(classical_lower_bound(d, lo).unwrap() <= classical_lower_bound(d + 1, lo).unwrap());
        let (ql, qh) = (lo * quantum_epsilon_limit() / 2.0, hi * quantum_epsilon_limit() / 2.0);
        prop_assert!(quantum_lower_bound(d, qh).unwrap() <= quantum_lower_bound(d, ql).unwrap() + 1e-12);
        prop_assert!(quantum_lower_bound(d, ql).unwrap() <= quantum_lower_bound(d + 1, ql).unwrap());
    }

    #[test]
    fn mixtures_have_rank_at_most_m(d in 2usize..=8, m in 1usize..=8, seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 6);
        let ch = NoisyChannel::classical((0..m).map(|_| haar_unitary(d, &mut rng)).collect()).unwrap();
        let w = rank_witness(&ch).unwrap();
        prop_assert!(w.rank <= m);
    }

    #[test]
    fn pqc_hides_and_returns_any_message(seed in any::<u64>()) {
        let key = PqcKey::new(2).unwrap();
        let rho = random_density_matrix(4, &mut trial_rng(seed, 7));
        let sent = pqc_encode(&rho, &key).unwrap();
        let flat = DensityMatrix::maximally_mixed(4);
        prop_assert!(trace_norm(&(sent.message().unwrap().matrix() - flat.matrix())) < 1e-10);
        let out = pqc_decode(&sent, &key).unwrap();
        prop_assert!(trace_norm(&(out.message.matrix() - rho.matrix())) < 1e-10);
        prop_assert!(out.key_fidelity > 1.0 - 1e-10);
    }
}
