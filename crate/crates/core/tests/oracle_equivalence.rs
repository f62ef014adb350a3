//! The production strategy estimator walks a shared-prefix history tree
//! with zero-probability pruning. These tests pin it against a brute-force
//! route that enumerates every visit sequence independently, plus a few
//! hand-derived frozen vectors.

mod common;

use blackbox_search::{
    make_algorithm, standard_resources, standard_specs, strategy_vector, AlgorithmSpec,
    AlphaWeighting, EstimationMode, Exact, InformationResource, Scalar,
};
use common::oracle_strategy;

fn weightings() -> [AlphaWeighting; 3] {
    [
        AlphaWeighting::PerQuery,
        AlphaWeighting::FinalQuery,
        AlphaWeighting::Geometric { ratio: 0.5 },
    ]
}

#[test]
fn tree_walk_matches_flat_enumeration_in_float_mode() {
    for resource in standard_resources() {
        let max_steps = if resource.n() <= 4 { 3 } else { 2 };
        for spec in standard_specs() {
            let algorithm = make_algorithm::<f64>(&spec).unwrap();
            for steps in 1..=max_steps {
                for alpha in weightings() {
                    let expected = oracle_strategy(&algorithm, &resource, steps, &alpha);
                    let got =
                        strategy_vector(&algorithm, &resource, steps, &alpha, EstimationMode::Exact)
                            .unwrap();
                    for (i, (g, e)) in got.vector.weights().iter().zip(&expected).enumerate() {
                        assert!(
                            (g - e).abs() < 1e-12,
                            "{} on f={}, steps {steps}, {alpha:?}, coord {i}: {g} vs {e}",
                            spec.name(),
                            resource.encode_hex()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn tree_walk_matches_flat_enumeration_exactly_in_rationals() {
    for resource in standard_resources().into_iter().filter(|f| f.n() <= 4) {
        for spec in standard_specs() {
            let algorithm = make_algorithm::<Exact>(&spec).unwrap();
            for steps in 1..=3 {
                for alpha in weightings() {
                    let expected = oracle_strategy(&algorithm, &resource, steps, &alpha);
                    let got =
                        strategy_vector(&algorithm, &resource, steps, &alpha, EstimationMode::Exact)
                            .unwrap();
                    assert_eq!(
                        got.vector.weights(),
                        &expected[..],
                        "{} on f={}, steps {steps}, {alpha:?}",
                        spec.name(),
                        resource.encode_hex()
                    );
                }
            }
        }
    }
}

fn assert_close(got: &[f64], want: &[f64], label: &str) {
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        assert!((g - w).abs() < 1e-12, "{label} coord {i}: {g} vs {w}");
    }
}

#[test]
fn frozen_expected_strategies_on_the_peak_table() {
    // Evaluations (0, 1, 0): one strict peak in the middle.
    let f = InformationResource::binary(vec![0, 1, 0]).unwrap();
    let e = std::f64::consts::E;
    let uniform = [1.0 / 3.0; 3];
    let softmax = [1.0 / (2.0 + e), e / (2.0 + e), 1.0 / (2.0 + e)];
    let point = [1.0, 0.0, 0.0];
    let frozen = |spec: &AlgorithmSpec, steps: usize, alpha: AlphaWeighting| {
        strategy_vector(
            &make_algorithm::<f64>(spec).unwrap(),
            &f,
            steps,
            &alpha,
            EstimationMode::Exact,
        )
        .unwrap()
        .vector
        .weights()
        .to_vec()
    };

    for steps in 1..=3 {
        for alpha in weightings() {
            // A greedy chain revisits its first sample forever, and pure
            // history avoidance is exchangeable, so both average to
            // uniform at any horizon and weighting.
            assert_close(
                &frozen(&AlgorithmSpec::Uniform, steps, alpha.clone()),
                &uniform,
                "uniform",
            );
            assert_close(
                &frozen(&AlgorithmSpec::Greedy, steps, alpha.clone()),
                &uniform,
                "greedy",
            );
            assert_close(
                &frozen(&AlgorithmSpec::HistoryAvoiding, steps, alpha.clone()),
                &uniform,
                "history-avoiding",
            );
            assert_close(
                &frozen(&AlgorithmSpec::PointMass(0), steps, alpha.clone()),
                &point,
                "point-mass",
            );
            assert_close(
                &frozen(
                    &AlgorithmSpec::FitnessProportional { temperature: 1.0 },
                    steps,
                    alpha.clone(),
                ),
                &softmax,
                "fitness-proportional",
            );
        }
    }

    // Exploration only breaks the greedy uniformity once a history can
    // hold two distinct elements: at the third step the peak has been
    // seen more often than chance, so its mass exceeds one third.
    let eg = AlgorithmSpec::EpsilonGreedy { epsilon: 0.25 };
    for steps in 1..=2 {
        assert_close(&frozen(&eg, steps, AlphaWeighting::PerQuery), &uniform, "eg");
    }
    assert_close(
        &frozen(&eg, 3, AlphaWeighting::FinalQuery),
        &[1.0 / 3.0, 3.0 / 8.0, 7.0 / 24.0],
        "eg-step-3",
    );
}
