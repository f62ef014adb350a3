//! What an unbiased resource distribution can and cannot buy, and how rare
//! favorable ways of weighting resources are.
//!
//! Expected success always splits into baseline plus bias. When the bias
//! term vanishes, expected success pins to the baseline no matter which
//! algorithm produced the metric; and over all ways of weighting a resource
//! support, the mass of weightings whose bias clears a threshold is
//! bounded through the bias of the support's centroid.

use crate::bias::{bias, marginal_success, ResourceDistribution};
use crate::error::{Error, Result};
use crate::metrics::DecomposableMetric;
use crate::scalar::Scalar;
use crate::search::{derive_seed, seeded_rng};
use crate::space::{InformationResource, TargetSet};
use crate::verify::{mode_name, DetailRow, VerificationReport};
use rand::Rng;
use rayon::prelude::*;

/// One-sided z for a 99% upper confidence limit.
const Z_99: f64 = 2.3263478740408408;

/// Fewest simplex samples the measure estimate accepts.
pub const MIN_MEASURE_SAMPLES: usize = 10_000;

/// Checks the split of expected success into baseline plus bias. For an
/// unbiased distribution this pins expected success to the baseline
/// exactly; otherwise the identity itself is checked.
pub fn futility_check<S: Scalar>(
    metric: &DecomposableMetric<S>,
    resources: &ResourceDistribution<S>,
    target: &TargetSet,
) -> Result<VerificationReport> {
    if target.n() != resources.n() {
        return Err(Error::DimensionMismatch {
            expected: resources.n(),
            actual: target.n(),
        });
    }
    let tolerance = if S::EXACT { 0.0 } else { 1e-9 };
    let b = bias(metric, resources, target)?;
    let marginal = marginal_success(metric, resources, target)?;
    let baseline = S::from_ratio(target.k() as i64, resources.n() as i64);
    let bias_free = b.abs_val().to_f64() <= tolerance;
    let deviation = if bias_free {
        (marginal.clone() - baseline.clone()).abs_val()
    } else {
        (marginal.clone() - baseline.clone() - b.clone()).abs_val()
    };
    Ok(VerificationReport {
        id: "futility-of-bias-free-search",
        instance: format!(
            "{} on |t|={} of n={}, support {}{}",
            metric.label(),
            target.k(),
            resources.n(),
            resources.support_size(),
            if bias_free { ", bias-free" } else { ", biased" }
        ),
        mode: mode_name::<S>(),
        observed: deviation.to_f64(),
        bound: tolerance,
        passed: deviation.to_f64() <= tolerance,
        details: vec![
            DetailRow::new("bias", b.to_f64()),
            DetailRow::new("expected-success", marginal.to_f64()),
            DetailRow::new("baseline", baseline.to_f64()),
            DetailRow::new("bias-free", if bias_free { 1.0 } else { 0.0 }),
        ],
    })
}

fn wilson_upper_99(successes: u64, samples: u64) -> f64 {
    let m = samples as f64;
    let p_hat = successes as f64 / m;
    let z2 = Z_99 * Z_99;
    let center = p_hat + z2 / (2.0 * m);
    let spread = Z_99 * (p_hat * (1.0 - p_hat) / m + z2 / (4.0 * m * m)).sqrt();
    ((center + spread) / (1.0 + z2 / m)).min(1.0)
}

/// Estimates the probability that a weighting of the support drawn
/// uniformly from the simplex has bias at least `q_min` toward the target,
/// and checks the 99% upper confidence limit of that probability against
/// the budget of the simplex centroid (the equal weighting). The reported
/// observation is the raw qualifying fraction; the confidence limit decides
/// the verdict and is carried in the details.
pub fn favorable_bias_measure(
    metric: &DecomposableMetric<f64>,
    support: &[InformationResource],
    target: &TargetSet,
    q_min: f64,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    if support.is_empty() {
        return Err(Error::InvalidParameter(
            "measure estimate needs a nonempty support".into(),
        ));
    }
    if samples < MIN_MEASURE_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "measure estimate needs at least {MIN_MEASURE_SAMPLES} samples, got {samples}"
        )));
    }
    if !(q_min.is_finite() && q_min > 0.0 && q_min <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "bias threshold must lie in (0, 1], got {q_min}"
        )));
    }
    let n = target.n();
    let mut values = Vec::with_capacity(support.len());
    for resource in support {
        if resource.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: resource.n(),
            });
        }
        values.push(metric.evaluate(target, resource)?);
    }

    let baseline = target.k() as f64 / n as f64;
    // Centroid success: the budget numerator baseline + bias(centroid).
    let mean_value: f64 = values.iter().sum::<f64>() / values.len() as f64;
    let bound = mean_value / q_min;

    let hits: u64 = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let mut rng = seeded_rng(derive_seed(seed, s));
            // Normalized unit-rate exponentials land uniformly on the
            // simplex over the support.
            let mut total = 0.0f64;
            let mut weighted = 0.0f64;
            let draws: Vec<f64> = (0..values.len())
                .map(|_| {
                    let u: f64 = rng.random();
                    -(1.0 - u).ln()
                })
                .collect();
            for (w, v) in draws.iter().zip(&values) {
                total += w;
                weighted += w * v;
            }
            if total > 0.0 && weighted / total - baseline >= q_min {
                1
            } else {
                0
            }
        })
        .sum();

    let observed_fraction = hits as f64 / samples as f64;
    let upper = wilson_upper_99(hits, samples as u64);
    Ok(VerificationReport {
        id: "famine-favorable-biasing-distributions",
        instance: format!(
            "{} on |t|={} of n={n}, support {}, q_min={q_min}, {samples} samples",
            metric.label(),
            target.k(),
            support.len()
        ),
        mode: format!("monte-carlo(samples={samples}, seed={seed})"),
        observed: observed_fraction,
        bound,
        passed: upper <= bound + 1e-9,
        details: vec![
            DetailRow::new("wilson-upper-99", upper),
            DetailRow::new("hits", hits as f64),
            DetailRow::new("centroid-success", mean_value),
            DetailRow::new("centroid-bias", mean_value - baseline),
            DetailRow::new("baseline", baseline),
        ],
    })
}
