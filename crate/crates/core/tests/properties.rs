use diffasym::algorithms::{combine, update_factor, AlgorithmKind, AlgorithmSpec};
use diffasym::config::ExperimentConfig;
use diffasym::metrics::MsdCurve;
use diffasym::noise::{sample_alpha_stable, AlphaStableParams};
use diffasym::rng::{substream, Purpose};
use diffasym::topology::{build_probability_graph, build_radius_graph, distance, uniform_combination};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn probability_graphs_are_symmetric_connected_and_stochastic(n in 2usize..25, p in 0.3f64..1.0, seed in any::<u64>()) {
        let t = build_probability_graph(n, p, seed).unwrap();
        prop_assert!(t.is_connected());
        prop_assert_eq!(&t, &build_probability_graph(n, p, seed).unwrap());
        let c = uniform_combination(&t);
        for l in 0..n {
            prop_assert!(t.is_neighbor(l, l));
            for k in 0..n {
                prop_assert_eq!(t.is_neighbor(l, k), t.is_neighbor(k, l));
            }
            prop_assert!((c.column_sum(l) - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn radius_edges_match_distances(n in 2usize..20, r in 0.35f64..1.5, seed in any::<u64>()) {
        let t = build_radius_graph(n, r, seed).unwrap();
        let xy = t.coordinates().unwrap();
        for l in 0..n {
            for k in 0..n {
                if l != k {
                    prop_assert_eq!(t.is_neighbor(l, k), distance(xy[l], xy[k]) <= r);
                }
            }
        }
    }

    #[test]
    fn combination_is_max_norm_nonexpansive(seed in any::<u64>(), vals in prop::collection::vec(-1e3f64..1e3, 30)) {
        let t = build_probability_graph(10, 0.3, seed).unwrap();
        let phis: Vec<Vec<f64>> = vals.chunks(3).map(<[f64]>::to_vec).collect();
        let max_in = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let out = combine(&phis, &uniform_combination(&t)).unwrap();
        prop_assert!(out.iter().flatten().all(|v| v.abs() <= max_in * (1.0 + 1e-12)));
    }

    #[test]
    fn equal_cutoffs_reduce_to_symmetric_rules(e in -1e4f64..1e4, c in 0.01f64..10.0, mu in 0.001f64..2.0) {
        let llc = AlgorithmSpec::new(AlgorithmKind::Dllclms, mu, c, c).unwrap();
        let se = AlgorithmSpec::baseline(AlgorithmKind::Dselms, mu * c).unwrap();
        prop_assert_eq!(update_factor(&llc, e, 50.0).factor, update_factor(&se, e, 50.0).factor);
        let qqc = AlgorithmSpec::new(AlgorithmKind::Dqqclms, mu, c, c).unwrap();
        let lms = AlgorithmSpec::baseline(AlgorithmKind::Dlms, mu * c).unwrap();
        prop_assert_eq!(update_factor(&qqc, e, 50.0).factor, update_factor(&lms, e, 50.0).factor);
    }

    #[test]
    fn stable_streams_replay(alpha in 0.1f64..=2.0, beta in -1.0f64..=1.0, seed in any::<u64>()) {
        let p = AlphaStableParams::new(alpha, beta, 1.0, 0.0).unwrap();
        let mut a = substream(seed, Purpose::Noise, 1, 2, 3);
        let mut b = substream(seed, Purpose::Noise, 1, 2, 3);
        for _ in 0..16 {
            prop_assert_eq!(sample_alpha_stable(&p, &mut a).to_bits(), sample_alpha_stable(&p, &mut b).to_bits());
        }
    }

    #[test]
    fn adding_the_mean_trial_keeps_the_curve(trials in prop::collection::vec(prop::collection::vec(1e-6f64..1e3, 5), 1..6)) {
        let base = MsdCurve::aggregate(AlgorithmKind::Dlms, trials.iter().map(|t| Some(t.as_slice()))).unwrap();
        let mean = base.values_linear.clone();
        let more = MsdCurve::aggregate(
            AlgorithmKind::Dlms,
            trials.iter().map(|t| Some(t.as_slice())).chain(std::iter::once(Some(mean.as_slice()))),
        )
        .unwrap();
        for (x, y) in base.values_db.iter().zip(&more.values_db) {
            prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }

    #[test]
    fn config_echo_is_a_fixed_point(nodes in 2usize..30, taps in 1usize..20, seed in 0u64..(i64::MAX as u64), mu in 0.01f64..1.0) {
        let text = format!(
            "[network]\nnodes = {nodes}\nparam = 1.0\n[system]\ntaps = {taps}\n[[algorithms]]\nname = \"DQQCLMS\"\nmu = {mu}\n[run]\nmaster_seed = {seed}\n"
        );
        let c = ExperimentConfig::parse(&text, None).unwrap();
        let echo = c.echo();
        let again = ExperimentConfig::parse(&echo, None).unwrap();
        prop_assert_eq!(again.echo(), echo);
        prop_assert_eq!(again.specs().unwrap(), c.specs().unwrap());
    }
}
