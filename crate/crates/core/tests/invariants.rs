//! Structural laws the library promises on arbitrary inputs: step weights
//! are distributions, encodings round-trip, success is linear in the
//! target, bias is affine in the resource distribution and splits expected
//! success, mixtures act pointwise, and conservation has no exceptions.

use blackbox_search::scalar::sum;
use blackbox_search::{
    bias, enumerate_resources, make_algorithm, marginal_success, random_binary_resources,
    random_futility_fixture, standard_specs, verify_nfl, AlgorithmSpec, AlphaWeighting,
    DecomposableMetric, EstimationMode, Exact, InformationResource, ResourceDistribution, Scalar,
    TargetFamily, TargetSet,
};
use proptest::prelude::*;

fn exact(num: i64, den: i64) -> Exact {
    Exact::from_ratio(num, den)
}

fn fp_metric<S: Scalar>(steps: usize) -> DecomposableMetric<S> {
    DecomposableMetric::from_algorithm(
        make_algorithm(&AlgorithmSpec::FitnessProportional { temperature: 1.0 }).unwrap(),
        steps,
        AlphaWeighting::PerQuery,
        EstimationMode::Exact,
    )
}

proptest! {
    #[test]
    fn step_weights_form_a_distribution(steps in 1usize..=64, ratio in 0.05f64..=0.95) {
        for alpha in [
            AlphaWeighting::PerQuery,
            AlphaWeighting::FinalQuery,
            AlphaWeighting::Geometric { ratio },
        ] {
            let w: Vec<Exact> = alpha.weights(steps).unwrap();
            prop_assert_eq!(w.len(), steps);
            prop_assert!(w.iter().all(|x| *x >= exact(0, 1)));
            prop_assert_eq!(sum(&w), exact(1, 1));
            let wf: Vec<f64> = alpha.weights(steps).unwrap();
            prop_assert!((wf.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn custom_step_weights_normalize_exactly(raw in prop::collection::vec(0.01f64..1.0, 1..=16)) {
        let total: f64 = raw.iter().sum();
        let normalized: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let steps = normalized.len();
        let alpha = AlphaWeighting::Custom(normalized);
        let w: Vec<Exact> = alpha.weights(steps).unwrap();
        prop_assert_eq!(sum(&w), exact(1, 1));
        prop_assert!(alpha.weights::<f64>(steps + 1).is_err());
    }

    #[test]
    fn resource_codes_round_trip(
        raw in prop::collection::vec(0u32..1000, 1..=10),
        alphabet in 2u32..=4,
    ) {
        let evals: Vec<u32> = raw.iter().map(|x| x % alphabet).collect();
        let f = InformationResource::new(evals.clone(), alphabet).unwrap();
        let back = InformationResource::decode(f.n(), alphabet, f.encode()).unwrap();
        prop_assert_eq!(back.evaluations(), &evals[..]);
        let from_hex =
            InformationResource::decode_hex(f.n(), alphabet, &f.encode_hex()).unwrap();
        prop_assert_eq!(from_hex.evaluations(), &evals[..]);
    }

    #[test]
    fn success_is_additive_over_disjoint_targets(mask_a in 1u32..16, mask_b in 1u32..16) {
        let disjoint_b = mask_b & !mask_a;
        prop_assume!(disjoint_b != 0);
        let metric = fp_metric::<Exact>(2);
        let f = InformationResource::binary(vec![0, 1, 0, 0]).unwrap();
        let a = TargetSet::from_bitmask(4, mask_a).unwrap();
        let b = TargetSet::from_bitmask(4, disjoint_b).unwrap();
        let union = TargetSet::from_bitmask(4, mask_a | disjoint_b).unwrap();
        prop_assert_eq!(
            metric.evaluate(&union, &f).unwrap(),
            metric.evaluate(&a, &f).unwrap() + metric.evaluate(&b, &f).unwrap()
        );
    }

    #[test]
    fn mixture_evaluates_to_convex_combination(lam_num in 0i64..=8, mask in 1u32..8) {
        let lam = lam_num as f64 / 8.0;
        let sharp = fp_metric::<Exact>(2);
        let flat = DecomposableMetric::<Exact>::uniform();
        let mixed = DecomposableMetric::mixture(vec![
            (lam, sharp.clone()),
            (1.0 - lam, flat.clone()),
        ])
        .unwrap();
        let f = InformationResource::binary(vec![0, 1, 0]).unwrap();
        let t = TargetSet::from_bitmask(3, mask).unwrap();
        let expected = Exact::from_f64_lossless(lam) * sharp.evaluate(&t, &f).unwrap()
            + Exact::from_f64_lossless(1.0 - lam) * flat.evaluate(&t, &f).unwrap();
        prop_assert_eq!(mixed.evaluate(&t, &f).unwrap(), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bias_is_affine_in_the_resource_distribution(
        c1 in proptest::array::uniform4(1i64..=8),
        c2 in proptest::array::uniform4(1i64..=8),
        lam_num in 0i64..=8,
        mask in 1u32..4,
    ) {
        let support: Vec<InformationResource> = enumerate_resources(2, 2).unwrap().collect();
        let weighted = |counts: &[i64; 4]| {
            let total: i64 = counts.iter().sum();
            ResourceDistribution::<Exact>::new(
                support
                    .iter()
                    .cloned()
                    .zip(counts)
                    .map(|(f, c)| (f, exact(*c, total)))
                    .collect(),
            )
            .unwrap()
        };
        let d1 = weighted(&c1);
        let d2 = weighted(&c2);
        let lam = exact(lam_num, 8);
        let co = exact(1, 1) - lam.clone();
        let total1: i64 = c1.iter().sum();
        let total2: i64 = c2.iter().sum();
        let mixed = ResourceDistribution::<Exact>::new(
            support
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, f)| {
                    let w = lam.clone() * exact(c1[i], total1) + co.clone() * exact(c2[i], total2);
                    (f, w)
                })
                .collect(),
        )
        .unwrap();
        let metric = fp_metric::<Exact>(2);
        let t = TargetSet::from_bitmask(2, mask).unwrap();
        let lhs = bias(&metric, &mixed, &t).unwrap();
        let rhs = lam * bias(&metric, &d1, &t).unwrap() + co * bias(&metric, &d2, &t).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn expected_success_splits_into_baseline_plus_bias(seed in any::<u64>()) {
        let fixture = random_futility_fixture::<Exact>(seed).unwrap();
        let b = bias(&fixture.metric, &fixture.resources, &fixture.target).unwrap();
        let m = marginal_success(&fixture.metric, &fixture.resources, &fixture.target).unwrap();
        let p = exact(fixture.target.k() as i64, fixture.target.n() as i64);
        prop_assert_eq!(m, p + b);
    }

    #[test]
    fn conservation_has_no_exceptions_on_random_instances(
        spec_index in 0usize..6,
        k in 1usize..=3,
        steps in 1usize..=2,
        seed in any::<u64>(),
    ) {
        let spec = &standard_specs()[spec_index];
        let metric = DecomposableMetric::<Exact>::from_algorithm(
            make_algorithm(spec).unwrap(),
            steps,
            AlphaWeighting::PerQuery,
            EstimationMode::Exact,
        );
        let family = TargetFamily::all_k_subsets(4, k).unwrap();
        let resources = random_binary_resources(4, 2, seed).unwrap();
        let report = verify_nfl(&metric, &family, &resources).unwrap();
        prop_assert!(report.passed, "{}", report.summary_line());
        prop_assert_eq!(report.observed, 0.0);
    }
}
