use klr_hopfield::analysis::spectrum::{gram_spectrum, participation_ratio};
use klr_hopfield::dynamics::{flip_count, recall_noisy, run_to_convergence, sequence_success};
use klr_hopfield::harness::model_io::{model_from_json, model_to_json};
use klr_hopfield::harness::rng::derive_u64;
use klr_hopfield::model::TrainingMeta;
use klr_hopfield::pattern::sign;
use klr_hopfield::{
    gram_matrix, local_field, pseudo_energy, rbf_kernel, DualWeights, KernelConfig, NetworkState,
    PatternSet, TrainingMode,
};
use ndarray::{Array1, Array2};
use proptest::prelude::*;

fn bipolar(n: usize) -> impl Strategy<Value = Vec<i8>> {
    prop::collection::vec(prop::bool::ANY.prop_map(|b| if b { 1i8 } else { -1 }), n)
}

fn pattern_set(n: usize, p: usize) -> impl Strategy<Value = PatternSet> {
    prop::collection::vec(bipolar(n), p).prop_map(|rows| PatternSet::from_rows(&rows).unwrap())
}

fn matrix(p: usize, n: usize) -> impl Strategy<Value = Array2<f64>> {
    prop::collection::vec(-3.0f64..3.0, p * n).prop_map(move |v| Array2::from_shape_vec((p, n), v).unwrap())
}

fn gamma() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.02), Just(5.0), 0.001f64..2.0]
}

fn state(v: &[i8]) -> NetworkState {
    NetworkState::new(Array1::from_iter(v.iter().map(|&x| x as f64))).unwrap()
}

fn weights(alpha: Array2<f64>, gamma: f64) -> DualWeights {
    DualWeights::new(alpha, KernelConfig::new(gamma).unwrap(), TrainingMode::Auto, TrainingMeta::untrained()).unwrap()
}

proptest! {
    #[test]
    fn kernel_bounded_and_symmetric(x in bipolar(12), y in bipolar(12), g in gamma()) {
        let cfg = KernelConfig::new(g).unwrap();
        let (x, y) = (state(&x), state(&y));
        let k = rbf_kernel(&x, &y, &cfg).unwrap();
        prop_assert!(k > 0.0 || g * 48.0 > 700.0);
        prop_assert!(k <= 1.0);
        prop_assert_eq!(k, rbf_kernel(&y, &x, &cfg).unwrap());
        prop_assert_eq!(rbf_kernel(&x, &x, &cfg).unwrap(), 1.0);
    }

    #[test]
    fn gram_symmetric_unit_diagonal(p in pattern_set(9, 5), g in gamma()) {
        let k = gram_matrix(&p, &KernelConfig::new(g).unwrap()).unwrap();
        for a in 0..5 {
            prop_assert_eq!(k[[a, a]], 1.0);
            for b in 0..5 {
                prop_assert_eq!(k[[a, b]], k[[b, a]]);
            }
        }
    }

    #[test]
    fn field_linear_in_alpha(
        p in pattern_set(7, 4),
        a1 in matrix(4, 7),
        a2 in matrix(4, 7),
        c in -2.0f64..2.0,
        s in bipolar(7),
    ) {
        let s = state(&s);
        let h1 = local_field(&s, &p, &weights(a1.clone(), 0.3)).unwrap();
        let h2 = local_field(&s, &p, &weights(a2.clone(), 0.3)).unwrap();
        let h = local_field(&s, &p, &weights(&a1 + &(&a2 * c), 0.3)).unwrap();
        for i in 0..7 {
            let want = h1[i] + c * h2[i];
            prop_assert!((h[i] - want).abs() <= 1e-9 * (1.0 + want.abs()));
        }
    }

    #[test]
    fn energy_is_minus_s_dot_h(p in pattern_set(7, 4), a in matrix(4, 7), s in bipolar(7), g in gamma()) {
        let w = weights(a, g);
        let s = state(&s);
        let h = local_field(&s, &p, &w).unwrap();
        prop_assert_eq!(pseudo_energy(&s, &p, &w).unwrap(), -s.view().dot(&h));
    }

    #[test]
    fn participation_ratio_scale_invariant(ev in prop::collection::vec(0.0f64..10.0, 1..20), c in 0.01f64..100.0) {
        prop_assume!(ev.iter().any(|&l| l > 1e-6));
        let pr = participation_ratio(&ev).unwrap();
        let scaled: Vec<f64> = ev.iter().map(|l| l * c).collect();
        prop_assert!((participation_ratio(&scaled).unwrap() - pr).abs() <= 1e-12 * pr);
        prop_assert!(pr >= 1.0 - 1e-12 && pr <= ev.len() as f64 + 1e-12);
    }

    #[test]
    fn effective_dimension_within_bounds(p in pattern_set(10, 8), g in gamma()) {
        let s = gram_spectrum(&gram_matrix(&p, &KernelConfig::new(g).unwrap()).unwrap()).unwrap();
        prop_assert!(s.d_eff >= 1.0 - 1e-9 && s.d_eff <= 8.0 + 1e-9);
        prop_assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(s.eigenvalues.iter().all(|&l| l >= 0.0));
    }

    #[test]
    fn sign_never_zero(x in prop::num::f64::ANY) {
        prop_assume!(!x.is_nan());
        let s = sign(x);
        prop_assert!(s == 1.0 || s == -1.0);
        prop_assert_eq!(s == 1.0, x >= 0.0);
    }

    #[test]
    fn flips_change_exactly_the_chosen_bits(x in bipolar(40), idx in prop::collection::btree_set(0usize..40, 0..40)) {
        let s = state(&x);
        let idx: Vec<usize> = idx.into_iter().collect();
        prop_assert_eq!(s.flipped(&idx).hamming(&s).unwrap(), idx.len());
    }

    #[test]
    fn flip_count_rounds(f in 0.0f64..=1.0, n in 1usize..500) {
        let k = flip_count(f, n);
        prop_assert!(k <= n);
        prop_assert!((k as f64 - f * n as f64).abs() <= 0.5 + 1e-9);
    }

    #[test]
    fn zero_noise_recall_of_fixed_point(p in pattern_set(12, 2), seed in any::<u64>()) {
        // Zero weights give h = 0 and sign(0) = +1, so the all-ones pattern
        // is the only fixed point.
        let ones = PatternSet::from_rows(&[vec![1i8; 12], p.to_rows()[1].clone()]).unwrap();
        let w = weights(Array2::zeros((2, 12)), 0.02);
        for t in recall_noisy(&ones, &w, 0, 0.0, 3, seed, 5).unwrap() {
            prop_assert!(t.success);
            prop_assert_eq!(t.status.steps, 1);
        }
    }

    #[test]
    fn run_status_bounded(p in pattern_set(6, 3), a in matrix(3, 6), s in bipolar(6), max in 1usize..20) {
        let (_, st) = run_to_convergence(&state(&s), &p, &weights(a, 0.5), max).unwrap();
        prop_assert!(st.steps >= 1 && st.steps <= max);
    }

    #[test]
    fn sequence_success_needs_full_window(p in 1usize..10, pre in 0usize..20, run in 0usize..30, noise in 0.0f64..0.99) {
        let mut trace = vec![noise; pre];
        trace.extend(std::iter::repeat_n(1.0, run));
        trace.push(noise);
        prop_assert_eq!(sequence_success(&trace, p), run >= p);
    }

    #[test]
    fn model_round_trip_is_exact(p in pattern_set(5, 3), a in prop::collection::vec(prop::num::f64::NORMAL, 15), g in 0.0001f64..50.0) {
        let w = weights(Array2::from_shape_vec((3, 5), a).unwrap(), g);
        let (back, pats) = model_from_json(&model_to_json(&w, &p).unwrap()).unwrap();
        prop_assert_eq!(back, w);
        prop_assert_eq!(pats, p);
    }

    #[test]
    fn derived_seeds_separate_streams(master in any::<u64>(), a in any::<u64>(), b in any::<u64>()) {
        prop_assume!(a != b);
        prop_assert_eq!(derive_u64(master, "patterns", &[a]), derive_u64(master, "patterns", &[a]));
        prop_assert_ne!(derive_u64(master, "patterns", &[a]), derive_u64(master, "patterns", &[b]));
        prop_assert_ne!(derive_u64(master, "patterns", &[a]), derive_u64(master, "morph", &[a]));
    }
}
