//! Distributions over information resources, and how far a metric's average
//! performance sits from the uniform baseline.
//!
//! `bias` averages the strategy vectors first and then takes the target dot
//! product; `marginal_success` takes the dot product per resource and then
//! averages. The two routes are algebraically equal up to the baseline term,
//! which is exactly what the identity checks exercise.

use crate::error::{Error, Result};
use crate::metrics::{DecomposableMetric, WEIGHT_TOLERANCE};
use crate::prob::{ProbabilityVector, WeightedAccumulator};
use crate::scalar::{sum, Scalar};
use crate::space::{InformationResource, TargetSet};
use std::collections::BTreeSet;

/// A finitely supported distribution over information resources of one
/// common length.
#[derive(Debug, Clone)]
pub struct ResourceDistribution<S: Scalar> {
    entries: Vec<(InformationResource, S)>,
    n: usize,
}

impl<S: Scalar> ResourceDistribution<S> {
    /// Validates support and weights, then normalizes exactly so the mass
    /// sums to one in `S` arithmetic.
    pub fn new(entries: Vec<(InformationResource, S)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter(
                "resource distribution needs nonempty support".into(),
            ));
        }
        let n = entries[0].0.n();
        let mut seen: BTreeSet<(u32, u128)> = BTreeSet::new();
        for (resource, weight) in &entries {
            if resource.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: resource.n(),
                });
            }
            if !seen.insert((resource.alphabet(), resource.encode())) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate resource {} in support",
                    resource.encode_hex()
                )));
            }
            if *weight < S::zero() {
                return Err(Error::InvalidProbabilityVector(
                    "resource weights must be nonnegative".into(),
                ));
            }
        }
        let weights: Vec<S> = entries.iter().map(|(_, w)| w.clone()).collect();
        let total = sum(&weights);
        if !total.close_to(&S::one(), WEIGHT_TOLERANCE) {
            return Err(Error::InvalidProbabilityVector(format!(
                "resource weights must sum to 1, got {}",
                total.to_f64()
            )));
        }
        let entries = entries
            .into_iter()
            .map(|(f, w)| (f, w / total.clone()))
            .collect();
        Ok(Self { entries, n })
    }

    /// Equal weight on each of the given resources.
    pub fn uniform(resources: Vec<InformationResource>) -> Result<Self> {
        let m = resources.len();
        if m == 0 {
            return Err(Error::InvalidParameter(
                "resource distribution needs nonempty support".into(),
            ));
        }
        let w = S::from_ratio(1, m as i64);
        Self::new(resources.into_iter().map(|f| (f, w.clone())).collect())
    }

    /// All mass on a single resource.
    pub fn point_mass(resource: InformationResource) -> Self {
        let n = resource.n();
        Self {
            entries: vec![(resource, S::one())],
            n,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(InformationResource, S)] {
        &self.entries
    }
}

/// The expected strategy vector under a distribution over resources.
pub fn average_strategy<S: Scalar>(
    metric: &DecomposableMetric<S>,
    resources: &ResourceDistribution<S>,
) -> Result<ProbabilityVector<S>> {
    let mut acc = WeightedAccumulator::zeros(resources.n());
    for (resource, weight) in resources.entries() {
        let strategy = metric.strategy(resource)?;
        if strategy.len() != resources.n() {
            return Err(Error::DimensionMismatch {
                expected: resources.n(),
                actual: strategy.len(),
            });
        }
        acc.add_scaled(weight, &strategy);
    }
    acc.into_probability_vector()
}

/// Expected success minus the uniform baseline `|target| / n`, computed by
/// averaging strategies before the dot product.
pub fn bias<S: Scalar>(
    metric: &DecomposableMetric<S>,
    resources: &ResourceDistribution<S>,
    target: &TargetSet,
) -> Result<S> {
    let average = average_strategy(metric, resources)?;
    let baseline = S::from_ratio(target.k() as i64, resources.n() as i64);
    Ok(target.dot(&average)? - baseline)
}

/// Expected success, computed by evaluating the metric per resource and then
/// averaging.
pub fn marginal_success<S: Scalar>(
    metric: &DecomposableMetric<S>,
    resources: &ResourceDistribution<S>,
    target: &TargetSet,
) -> Result<S> {
    let mut total = S::zero();
    for (resource, weight) in resources.entries() {
        total = total + weight.clone() * metric.evaluate(target, resource)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{make_algorithm, AlgorithmSpec};
    use crate::metrics::{AlphaWeighting, EstimationMode};
    use crate::scalar::Exact;

    fn fp_metric<S: Scalar>() -> DecomposableMetric<S> {
        let alg = make_algorithm(&AlgorithmSpec::FitnessProportional { temperature: 1.0 })
            .unwrap();
        DecomposableMetric::from_algorithm(
            alg,
            2,
            AlphaWeighting::PerQuery,
            EstimationMode::Exact,
        )
    }

    fn mirrored_pair() -> (InformationResource, InformationResource) {
        (
            InformationResource::binary(vec![1, 0]).unwrap(),
            InformationResource::binary(vec![0, 1]).unwrap(),
        )
    }

    #[test]
    fn mirrored_resources_cancel_bias_exactly() {
        let (f1, f2) = mirrored_pair();
        let d = ResourceDistribution::<Exact>::uniform(vec![f1, f2]).unwrap();
        let t = TargetSet::from_indices(2, &[0]).unwrap();
        let b = bias(&fp_metric::<Exact>(), &d, &t).unwrap();
        assert_eq!(b, Exact::from_ratio(0, 1));
        let avg = average_strategy(&fp_metric::<Exact>(), &d).unwrap();
        assert_eq!(avg.weights(), vec![Exact::from_ratio(1, 2); 2]);
    }

    #[test]
    fn point_mass_on_informative_resource_has_positive_bias() {
        let (f1, _) = mirrored_pair();
        let d = ResourceDistribution::<f64>::point_mass(f1);
        let t = TargetSet::from_indices(2, &[0]).unwrap();
        let b = bias(&fp_metric::<f64>(), &d, &t).unwrap();
        assert!(b > 0.0);
        let e = 1.0f64.exp();
        assert!((b - (e / (1.0 + e) - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn marginal_equals_baseline_plus_bias() {
        let (f1, f2) = mirrored_pair();
        let d = ResourceDistribution::<Exact>::new(vec![
            (f1, Exact::from_ratio(1, 3)),
            (f2, Exact::from_ratio(2, 3)),
        ])
        .unwrap();
        let t = TargetSet::from_indices(2, &[0]).unwrap();
        let metric = fp_metric::<Exact>();
        let m = marginal_success(&metric, &d, &t).unwrap();
        let b = bias(&metric, &d, &t).unwrap();
        assert_eq!(m, Exact::from_ratio(1, 2) + b);
    }

    #[test]
    fn uniform_metric_is_never_biased() {
        let (f1, f2) = mirrored_pair();
        let d = ResourceDistribution::<Exact>::new(vec![
            (f1, Exact::from_ratio(1, 4)),
            (f2, Exact::from_ratio(3, 4)),
        ])
        .unwrap();
        for t in crate::space::enumerate_targets(2, None).unwrap() {
            let b = bias(&DecomposableMetric::<Exact>::uniform(), &d, &t).unwrap();
            assert_eq!(b, Exact::from_ratio(0, 1));
        }
    }

    #[test]
    fn validation_rejects_bad_distributions() {
        let (f1, f2) = mirrored_pair();
        let f_long = InformationResource::binary(vec![0, 1, 1]).unwrap();
        assert!(ResourceDistribution::<f64>::new(vec![]).is_err());
        assert!(ResourceDistribution::<f64>::new(vec![
            (f1.clone(), 0.5),
            (f1.clone(), 0.5)
        ])
        .is_err());
        assert!(ResourceDistribution::<f64>::new(vec![
            (f1.clone(), 0.5),
            (f_long, 0.5)
        ])
        .is_err());
        assert!(ResourceDistribution::<f64>::new(vec![
            (f1.clone(), 0.9),
            (f2.clone(), 0.3)
        ])
        .is_err());
        assert!(ResourceDistribution::<f64>::new(vec![
            (f1, 1.5),
            (f2, -0.5)
        ])
        .is_err());
    }

    #[test]
    fn same_evaluations_different_alphabets_are_distinct() {
        let f_bin = InformationResource::binary(vec![0, 1]).unwrap();
        let f_quad = InformationResource::new(vec![0, 1], 4).unwrap();
        let d = ResourceDistribution::<f64>::uniform(vec![f_bin, f_quad]).unwrap();
        assert_eq!(d.support_size(), 2);
    }
}
