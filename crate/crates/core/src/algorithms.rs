//! Built-in black-box algorithms.
//!
//! Each kind is a pure rule from (history, resource) to the next query
//! distribution. `AlgorithmSpec` is the serializable description; call
//! `make_algorithm` to instantiate it for a numeric type.

use crate::error::{Error, Result};
use crate::prob::ProbabilityVector;
use crate::scalar::Scalar;
use crate::search::{SearchAlgorithm, SearchHistory};
use crate::space::InformationResource;

/// Description of a built-in algorithm with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgorithmSpec {
    /// Uniform over the space at every step.
    Uniform,
    /// All mass on one fixed element at every step.
    PointMass(usize),
    /// Uniform before any observation; afterwards all mass on the best
    /// element seen so far (ties broken toward the lowest index).
    Greedy,
    /// Softmax of the full evaluation table with the given temperature,
    /// independent of history.
    FitnessProportional { temperature: f64 },
    /// Uniform over elements not yet sampled; uniform over everything once
    /// the whole space has been visited.
    HistoryAvoiding,
    /// Mixture: epsilon times uniform plus (1 - epsilon) times the greedy
    /// rule.
    EpsilonGreedy { epsilon: f64 },
}

impl AlgorithmSpec {
    pub fn name(&self) -> String {
        match self {
            AlgorithmSpec::Uniform => "uniform".into(),
            AlgorithmSpec::PointMass(i) => format!("point-mass({i})"),
            AlgorithmSpec::Greedy => "greedy".into(),
            AlgorithmSpec::FitnessProportional { temperature } => {
                format!("fitness-proportional(t={temperature})")
            }
            AlgorithmSpec::HistoryAvoiding => "history-avoiding".into(),
            AlgorithmSpec::EpsilonGreedy { epsilon } => {
                format!("epsilon-greedy(e={epsilon})")
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            AlgorithmSpec::FitnessProportional { temperature } => {
                if !(temperature.is_finite() && *temperature > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "temperature must be finite and positive, got {temperature}"
                    )));
                }
            }
            AlgorithmSpec::EpsilonGreedy { epsilon } => {
                if !(epsilon.is_finite() && (0.0..=1.0).contains(epsilon)) {
                    return Err(Error::InvalidParameter(format!(
                        "epsilon must lie in [0, 1], got {epsilon}"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// Best element observed so far: highest evaluation, then lowest index.
fn best_seen(history: &SearchHistory) -> Option<usize> {
    let mut best: Option<(usize, u32)> = None;
    for &(element, value) in history.steps() {
        best = match best {
            None => Some((element, value)),
            Some((be, bv)) => {
                if value > bv || (value == bv && element < be) {
                    Some((element, value))
                } else {
                    Some((be, bv))
                }
            }
        };
    }
    best.map(|(e, _)| e)
}

fn greedy_distribution<S: Scalar>(
    history: &SearchHistory,
    resource: &InformationResource,
) -> Result<ProbabilityVector<S>> {
    match best_seen(history) {
        None => Ok(ProbabilityVector::uniform(resource.n())),
        Some(element) => ProbabilityVector::point_mass(resource.n(), element),
    }
}

fn fitness_proportional_distribution<S: Scalar>(
    resource: &InformationResource,
    temperature: f64,
) -> Result<ProbabilityVector<S>> {
    let weights: Vec<S> = (0..resource.n())
        .map(|i| {
            let w = (f64::from(resource.evaluate(i)) / temperature).exp();
            S::from_f64_lossless(w)
        })
        .collect();
    ProbabilityVector::normalized(weights)
}

fn history_avoiding_distribution<S: Scalar>(
    history: &SearchHistory,
    resource: &InformationResource,
) -> Result<ProbabilityVector<S>> {
    let n = resource.n();
    let mut visited = vec![false; n];
    for element in history.sampled() {
        if element < n {
            visited[element] = true;
        }
    }
    let fresh = visited.iter().filter(|v| !**v).count();
    if fresh == 0 {
        return Ok(ProbabilityVector::uniform(n));
    }
    let share = S::from_ratio(1, fresh as i64);
    let weights = visited
        .iter()
        .map(|&v| if v { S::zero() } else { share.clone() })
        .collect();
    Ok(ProbabilityVector::from_weights_unchecked(weights))
}

/// Instantiates a spec as a runnable algorithm over the chosen numeric type.
pub fn make_algorithm<S: Scalar>(spec: &AlgorithmSpec) -> Result<SearchAlgorithm<S>> {
    spec.validate()?;
    let name = spec.name();
    let alg = match spec.clone() {
        AlgorithmSpec::Uniform => SearchAlgorithm::from_rule(name, |_, f| {
            Ok(ProbabilityVector::uniform(f.n()))
        }),
        AlgorithmSpec::PointMass(index) => SearchAlgorithm::from_rule(name, move |_, f| {
            ProbabilityVector::point_mass(f.n(), index)
        }),
        AlgorithmSpec::Greedy => {
            SearchAlgorithm::from_rule(name, greedy_distribution::<S>)
        }
        AlgorithmSpec::FitnessProportional { temperature } => {
            SearchAlgorithm::from_rule(name, move |_, f| {
                fitness_proportional_distribution(f, temperature)
            })
        }
        AlgorithmSpec::HistoryAvoiding => {
            SearchAlgorithm::from_rule(name, history_avoiding_distribution::<S>)
        }
        AlgorithmSpec::EpsilonGreedy { epsilon } => {
            SearchAlgorithm::from_rule(name, move |h, f| {
                let uniform = ProbabilityVector::uniform(f.n());
                let greedy = greedy_distribution::<S>(h, f)?;
                uniform.mix(&greedy, S::from_f64_lossless(epsilon))
            })
        }
    };
    Ok(alg)
}

/// The six built-in kinds with representative parameters.
pub fn standard_specs() -> Vec<AlgorithmSpec> {
    vec![
        AlgorithmSpec::Uniform,
        AlgorithmSpec::PointMass(0),
        AlgorithmSpec::Greedy,
        AlgorithmSpec::FitnessProportional { temperature: 1.0 },
        AlgorithmSpec::HistoryAvoiding,
        AlgorithmSpec::EpsilonGreedy { epsilon: 0.25 },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn resource_010() -> InformationResource {
        InformationResource::binary(vec![0, 1, 0]).unwrap()
    }

    fn history(steps: &[(usize, u32)]) -> SearchHistory {
        let mut h = SearchHistory::empty();
        for &(i, e) in steps {
            h.push(i, e);
        }
        h
    }

    #[test]
    fn greedy_is_uniform_before_observations() {
        let alg = make_algorithm::<f64>(&AlgorithmSpec::Greedy).unwrap();
        let d = alg
            .next_distribution(&SearchHistory::empty(), &resource_010())
            .unwrap();
        assert_eq!(d.weights(), &[1.0 / 3.0; 3]);
    }

    #[test]
    fn greedy_locks_onto_best_seen() {
        let alg = make_algorithm::<f64>(&AlgorithmSpec::Greedy).unwrap();
        let d = alg
            .next_distribution(&history(&[(0, 0), (1, 1), (2, 0)]), &resource_010())
            .unwrap();
        assert_eq!(d.weights(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn greedy_breaks_ties_toward_lowest_index() {
        let f = InformationResource::binary(vec![1, 1, 0]).unwrap();
        let alg = make_algorithm::<f64>(&AlgorithmSpec::Greedy).unwrap();
        let d = alg
            .next_distribution(&history(&[(1, 1), (0, 1)]), &f)
            .unwrap();
        assert_eq!(d.weights(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn fitness_proportional_orders_mass_by_evaluation() {
        let f = InformationResource::new(vec![0, 2, 1], 3).unwrap();
        let alg =
            make_algorithm::<f64>(&AlgorithmSpec::FitnessProportional { temperature: 1.0 })
                .unwrap();
        let d = alg.next_distribution(&SearchHistory::empty(), &f).unwrap();
        assert!(d.weights()[1] > d.weights()[2]);
        assert!(d.weights()[2] > d.weights()[0]);
        let z = 1.0 + 2.0f64.exp() + 1.0f64.exp();
        assert!((d.weights()[1] - 2.0f64.exp() / z).abs() < 1e-12);
    }

    #[test]
    fn fitness_proportional_ignores_history() {
        let f = resource_010();
        let alg =
            make_algorithm::<f64>(&AlgorithmSpec::FitnessProportional { temperature: 0.5 })
                .unwrap();
        let before = alg.next_distribution(&SearchHistory::empty(), &f).unwrap();
        let after = alg
            .next_distribution(&history(&[(1, 1), (1, 1)]), &f)
            .unwrap();
        assert_eq!(before.weights(), after.weights());
    }

    #[test]
    fn fitness_proportional_exact_mode_sums_to_one() {
        let f = InformationResource::new(vec![0, 3, 1, 2], 4).unwrap();
        let alg = make_algorithm::<Exact>(&AlgorithmSpec::FitnessProportional {
            temperature: 1.0,
        })
        .unwrap();
        let d = alg.next_distribution(&SearchHistory::empty(), &f).unwrap();
        let total = crate::scalar::sum(d.weights());
        assert_eq!(total, Exact::from_ratio(1, 1));
    }

    #[test]
    fn history_avoiding_excludes_visited_elements() {
        let alg = make_algorithm::<f64>(&AlgorithmSpec::HistoryAvoiding).unwrap();
        let f = InformationResource::binary(vec![0, 0, 1, 0]).unwrap();
        let d = alg
            .next_distribution(&history(&[(0, 0), (2, 1)]), &f)
            .unwrap();
        assert_eq!(d.weights(), &[0.0, 0.5, 0.0, 0.5]);
    }

    #[test]
    fn history_avoiding_resets_once_space_is_exhausted() {
        let alg = make_algorithm::<f64>(&AlgorithmSpec::HistoryAvoiding).unwrap();
        let f = InformationResource::binary(vec![0, 1]).unwrap();
        let d = alg
            .next_distribution(&history(&[(0, 0), (1, 1)]), &f)
            .unwrap();
        assert_eq!(d.weights(), &[0.5, 0.5]);
    }

    #[test]
    fn epsilon_greedy_blends_uniform_and_greedy() {
        let alg =
            make_algorithm::<f64>(&AlgorithmSpec::EpsilonGreedy { epsilon: 0.25 }).unwrap();
        let d = alg
            .next_distribution(&history(&[(1, 1)]), &resource_010())
            .unwrap();
        let u = 0.25 / 3.0;
        assert!((d.weights()[0] - u).abs() < 1e-12);
        assert!((d.weights()[1] - (u + 0.75)).abs() < 1e-12);
        assert!((d.weights()[2] - u).abs() < 1e-12);
    }

    #[test]
    fn epsilon_one_is_uniform_epsilon_zero_is_greedy() {
        let f = resource_010();
        let h = history(&[(1, 1)]);
        let all_explore =
            make_algorithm::<f64>(&AlgorithmSpec::EpsilonGreedy { epsilon: 1.0 }).unwrap();
        assert_eq!(
            all_explore.next_distribution(&h, &f).unwrap().weights(),
            &[1.0 / 3.0; 3]
        );
        let all_exploit =
            make_algorithm::<f64>(&AlgorithmSpec::EpsilonGreedy { epsilon: 0.0 }).unwrap();
        assert_eq!(
            all_exploit.next_distribution(&h, &f).unwrap().weights(),
            &[0.0, 1.0, 0.0]
        );
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(make_algorithm::<f64>(&AlgorithmSpec::FitnessProportional {
            temperature: 0.0
        })
        .is_err());
        assert!(make_algorithm::<f64>(&AlgorithmSpec::FitnessProportional {
            temperature: -1.0
        })
        .is_err());
        assert!(
            make_algorithm::<f64>(&AlgorithmSpec::EpsilonGreedy { epsilon: 1.5 }).is_err()
        );
        assert!(
            make_algorithm::<f64>(&AlgorithmSpec::EpsilonGreedy { epsilon: -0.1 }).is_err()
        );
        assert!(make_algorithm::<f64>(&AlgorithmSpec::PointMass(5))
            .unwrap()
            .next_distribution(&SearchHistory::empty(), &resource_010())
            .is_err());
    }
}
