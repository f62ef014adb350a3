//! Conservation of total success across a constant-coverage target family.
//!
//! When every element of the space sits in the same number `c` of family
//! targets, the family-wide sum of success probabilities equals `c` for any
//! strategy-based metric and any resource: the sum telescopes through the
//! strategy vector, whose mass is one. No choice of algorithm can raise the
//! total; gains on some targets are paid for on others.

use crate::error::{Error, Result};
use crate::metrics::DecomposableMetric;
use crate::scalar::Scalar;
use crate::space::InformationResource;
use crate::verify::{mode_name, DetailRow, TargetFamily, VerificationReport};

/// Per-resource deviation tolerance: exact arithmetic admits none, floating
/// point an accumulation allowance proportional to the family size.
fn deviation_tolerance<S: Scalar>(family_size: usize) -> f64 {
    if S::EXACT {
        0.0
    } else {
        1e-9 * family_size.max(1) as f64
    }
}

/// Checks that the family-wide success total equals the coverage constant
/// for every given resource.
pub fn verify_nfl<S: Scalar>(
    metric: &DecomposableMetric<S>,
    family: &TargetFamily,
    resources: &[InformationResource],
) -> Result<VerificationReport> {
    if resources.is_empty() {
        return Err(Error::InvalidParameter(
            "conservation check needs at least one resource".into(),
        ));
    }
    let coverage = family.is_closed_under_permutation().ok_or_else(|| {
        Error::HypothesisViolation(
            "conservation requires a family covering every element equally often".into(),
        )
    })?;
    let conserved = S::from_ratio(coverage as i64, 1);
    let tolerance = deviation_tolerance::<S>(family.len());

    let mut max_deviation = 0.0f64;
    let mut details = Vec::new();
    for resource in resources {
        if resource.n() != family.n() {
            return Err(Error::DimensionMismatch {
                expected: family.n(),
                actual: resource.n(),
            });
        }
        let strategy = metric.strategy(resource)?;
        let mut total = S::zero();
        for target in family.targets() {
            total = total + target.dot(&strategy)?;
        }
        let deviation = (total.clone() - conserved.clone()).abs_val().to_f64();
        max_deviation = max_deviation.max(deviation);
        if details.len() < 16 {
            details.push(DetailRow::new(
                format!("sum[f={}]", resource.encode_hex()),
                total.to_f64(),
            ));
        }
    }
    details.push(DetailRow::new("conserved-total", coverage as f64));
    details.push(DetailRow::new("resources", resources.len() as f64));

    Ok(VerificationReport {
        id: "no-free-lunch",
        instance: format!(
            "{} over {} targets (coverage {}), {} resources, n={}",
            metric.label(),
            family.len(),
            coverage,
            resources.len(),
            family.n()
        ),
        mode: mode_name::<S>(),
        observed: max_deviation,
        bound: tolerance,
        passed: max_deviation <= tolerance,
        details,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{make_algorithm, AlgorithmSpec};
    use crate::metrics::{AlphaWeighting, EstimationMode};
    use crate::scalar::Exact;
    use crate::space::{enumerate_resources, TargetSet};

    fn metric<S: Scalar>(spec: &AlgorithmSpec) -> DecomposableMetric<S> {
        DecomposableMetric::from_algorithm(
            make_algorithm(spec).unwrap(),
            2,
            AlphaWeighting::PerQuery,
            EstimationMode::Exact,
        )
    }

    #[test]
    fn conservation_is_exact_for_k_subset_families() {
        let family = TargetFamily::all_k_subsets(4, 2).unwrap();
        let resources: Vec<_> = enumerate_resources(4, 2).unwrap().collect();
        for spec in [
            AlgorithmSpec::Greedy,
            AlgorithmSpec::FitnessProportional { temperature: 1.0 },
            AlgorithmSpec::EpsilonGreedy { epsilon: 0.25 },
        ] {
            let report = verify_nfl(&metric::<Exact>(&spec), &family, &resources).unwrap();
            assert!(report.passed, "{}", report.summary_line());
            assert_eq!(report.observed, 0.0);
            assert_eq!(report.bound, 0.0);
        }
    }

    #[test]
    fn conservation_holds_in_float_mode_within_tolerance() {
        let family = TargetFamily::all_subsets(4).unwrap();
        let resources: Vec<_> = enumerate_resources(4, 2).unwrap().collect();
        let report = verify_nfl(
            &metric::<f64>(&AlgorithmSpec::HistoryAvoiding),
            &family,
            &resources,
        )
        .unwrap();
        assert!(report.passed, "{}", report.summary_line());
        assert!(report.bound > 0.0);
    }

    #[test]
    fn lopsided_family_is_refused() {
        let family = TargetFamily::new(vec![
            TargetSet::from_indices(3, &[0]).unwrap(),
            TargetSet::from_indices(3, &[0, 1]).unwrap(),
        ])
        .unwrap();
        let f = InformationResource::binary(vec![0, 1, 0]).unwrap();
        let err = verify_nfl(&metric::<f64>(&AlgorithmSpec::Uniform), &family, &[f]).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolation(_)));
    }

    #[test]
    fn non_conserving_functional_is_caught() {
        // A "metric" whose strategy leaks mass breaks the invariant the
        // checker relies on; the report must come back failed, not error.
        let leaky = DecomposableMetric::<f64>::from_fn("leaky", |f| {
            Ok(crate::prob::ProbabilityVector::from_weights_unchecked(
                vec![0.4; f.n()],
            ))
        });
        let family = TargetFamily::all_k_subsets(3, 1).unwrap();
        let f = InformationResource::binary(vec![0, 1, 0]).unwrap();
        let report = verify_nfl(&leaky, &family, &[f]).unwrap();
        assert!(!report.passed);
        assert!(report.slack() < 0.0);
    }

    #[test]
    fn mismatched_resource_length_is_rejected() {
        let family = TargetFamily::all_k_subsets(3, 1).unwrap();
        let f = InformationResource::binary(vec![0, 1]).unwrap();
        assert!(matches!(
            verify_nfl(&metric::<f64>(&AlgorithmSpec::Uniform), &family, &[f]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
