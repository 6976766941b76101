use proptest::prelude::*;

use swaf::formulation::{acr_apply, bch_compare, pbh_map};
use swaf::rules::{deps_select, rc_select};
use swaf::{
    builtin, Bounds, Comparator, DeployerNetwork, DeployerParams, GoodnessPair, RngStream, RuleId,
    SwarmConfig,
};

fn pair() -> impl Strategy<Value = GoodnessPair> {
    (-1e3..1e3f64, prop_oneof![Just(0.0), 0.0..10.0f64]).prop_map(|(o, c)| GoodnessPair::new(o, c))
}

proptest! {
    #[test]
    fn pbh_lands_in_box_and_is_idempotent(
        lo in -100.0..100.0f64,
        span in 1e-3..50.0f64,
        x in prop::collection::vec(-1e4..1e4f64, 1..6),
    ) {
        let bounds = vec![Bounds::new(lo, lo + span).unwrap(); x.len()];
        let z = pbh_map(&x, &bounds);
        for (v, b) in z.iter().zip(&bounds) {
            prop_assert!(b.contains(*v));
        }
        prop_assert_eq!(pbh_map(&z, &bounds), z);
    }

    #[test]
    fn bch_is_total(a in pair(), b in pair()) {
        prop_assert!(bch_compare(&a, &b).first_wins() || bch_compare(&b, &a).first_wins());
    }

    #[test]
    fn relaxing_never_lowers_violation(a in pair(), eps in 0.0..20.0f64) {
        let r = acr_apply(&a, eps);
        prop_assert!(r.f_con >= a.f_con && r.f_con >= eps);
        prop_assert_eq!(r.f_obj, a.f_obj);
    }

    #[test]
    fn loose_threshold_compares_objectives_only(a in pair(), b in pair()) {
        let cmp = Comparator::relaxed(10.0);
        prop_assert_eq!(cmp.better_or_equal(&a, &b), a.f_obj <= b.f_obj);
    }

    #[test]
    fn deps_alternates(t in 1usize..10_000) {
        prop_assert_eq!(deps_select(t), RuleId(if t % 2 == 1 { 0 } else { 1 }));
        prop_assert_eq!(deps_select(t), deps_select(t + 2));
    }

    #[test]
    fn random_combination_skips_zero_weights(
        weights in prop::collection::vec(prop_oneof![Just(0.0), 0.1..5.0f64], 1..12),
        seed in any::<u64>(),
    ) {
        prop_assume!(weights.iter().any(|w| *w > 0.0));
        let mut rng = RngStream::new(seed);
        for _ in 0..50 {
            let RuleId(k) = rc_select(&weights, &mut rng).unwrap();
            prop_assert!(weights[k] > 0.0);
        }
    }

    #[test]
    fn best_ranked_agents_keep_their_weights(seed in any::<u64>(), steps in 1usize..300) {
        let params = DeployerParams { t_l: 7, ..DeployerParams::for_rules(4) };
        let mut rng = RngStream::new(seed);
        let mut net = DeployerNetwork::new(&params, &mut rng).unwrap();
        let (w1, w2) = (net.w1.clone(), net.w2.clone());
        for _ in 0..steps {
            net.deploy_step(&params, 0.0, &mut rng).unwrap();
        }
        prop_assert_eq!(&net.w1, &w1);
        prop_assert_eq!(&net.w2, &w2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn engine_runs_are_consistent(
        id in prop::sample::select(vec!["GP", "BR", "G1", "G8", "G11"]),
        rule in prop::sample::select(vec!["ps", "de:CR=0.5", "deps:CR=0.9", "rc", "nn:[de:CR=*];TL=3"]),
        acr in any::<bool>(),
        n in 2usize..8,
        t in 0usize..25,
        seed in any::<u64>(),
    ) {
        let problem = builtin(id).unwrap();
        let mut config = SwarmConfig::new(n, t, rule.parse().unwrap()).with_seed(seed);
        if acr {
            config = config.with_formulation("acr".parse().unwrap());
        }
        let a = swaf::run(&problem, config.clone()).unwrap();
        prop_assert_eq!(a.evaluations, (n * t) as u64);
        prop_assert_eq!(a.initial_evaluations, n as u64);
        prop_assert_eq!(a.history.len(), t + 1);
        for (v, b) in a.solution.iter().zip(problem.bounds()) {
            prop_assert!(b.contains(*v));
        }
        // Relaxing changes the comparator, so only plain runs are monotone.
        if !acr {
            for w in a.history.windows(2) {
                prop_assert!(Comparator::BASIC.better_or_equal(&w[1].best, &w[0].best));
            }
        }
        let b = swaf::run(&problem, config).unwrap();
        prop_assert_eq!(a.history, b.history);
    }
}
