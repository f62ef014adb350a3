//! Scarcity bounds: how rare favorable targets, target/resource pairs, and
//! favorable resources must be.
//!
//! All four checks are counting arguments against the same conserved
//! budget: total success across a family is fixed, so only a bounded
//! fraction of instances can clear any positive threshold.

use crate::bias::{bias, ResourceDistribution};
use crate::error::{Error, Result};
use crate::metrics::DecomposableMetric;
use crate::scalar::Scalar;
use crate::space::{
    binomial_u128, enumerate_resources, enumerate_targets, InformationResource, TargetSet,
    ENUMERATION_CAP,
};
use crate::verify::{mode_name, DetailRow, VerificationReport};

fn famine_tolerance<S: Scalar>() -> f64 {
    if S::EXACT {
        0.0
    } else {
        1e-9
    }
}

fn positive_threshold<S: Scalar>(q_min: f64) -> Result<S> {
    if !(q_min.is_finite() && q_min > 0.0 && q_min <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "success threshold must lie in (0, 1], got {q_min}"
        )));
    }
    Ok(S::from_f64_lossless(q_min))
}

/// Fraction of all `2^n` targets whose success beats uniform sampling by at
/// least `b` bits. The threshold scales with each target's own size, so the
/// comparison is `phi * n >= |t| * 2^b`, and the bound is `2^-b`.
///
/// Holds for every `b >= 3`; smaller advantages are outside the result and
/// refused.
pub fn fraction_favorable_targets<S: Scalar>(
    metric: &DecomposableMetric<S>,
    resource: &InformationResource,
    b: u32,
) -> Result<VerificationReport> {
    if b < 3 {
        return Err(Error::HypothesisViolation(format!(
            "advantage threshold requires b >= 3, got {b}"
        )));
    }
    let n = resource.n();
    if n > ENUMERATION_CAP {
        return Err(Error::EnumerationCapExceeded {
            what: "targets".into(),
            requested: n as u128,
            cap: ENUMERATION_CAP as u128,
        });
    }
    let strategy = metric.strategy(resource)?;
    if strategy.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: strategy.len(),
        });
    }
    let n_s = S::from_ratio(n as i64, 1);
    let mut qualifying: u64 = 0;
    // A target of size k qualifies when phi * n >= k * 2^b, and phi <= 1,
    // so nothing can qualify once 2^b exceeds n.
    if b < 64 && (1u128 << b) <= n as u128 {
        for mask in 1u64..(1u64 << n) {
            let mut phi = S::zero();
            let mut bits = mask;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                phi = phi + strategy.weights()[i].clone();
            }
            let k = mask.count_ones() as i64;
            // phi / (k/n) >= 2^b, cleared of divisions.
            if phi * n_s.clone() >= S::from_ratio(k << b, 1) {
                qualifying += 1;
            }
        }
    }
    let total = 1u128 << n;
    let allowed = if (b as usize) < n {
        1u128 << (n - b as usize)
    } else {
        // The cap 2^(n-b) drops below one whole target; only an empty
        // count can respect it.
        if b as usize == n { 1 } else { 0 }
    };
    let observed = qualifying as f64 / total as f64;
    let bound = 0.5f64.powi(b.min(1_000) as i32);
    Ok(VerificationReport {
        id: "fraction-favorable-targets",
        instance: format!(
            "{} on f={}, n={n}, advantage b={b} bits",
            metric.label(),
            resource.encode_hex()
        ),
        mode: mode_name::<S>(),
        observed,
        bound,
        // Both sides are integer counts, so the comparison is exact in
        // every numeric mode.
        passed: (qualifying as u128) <= allowed,
        details: vec![
            DetailRow::new("qualifying-targets", qualifying as f64),
            DetailRow::new("total-targets", total as f64),
            DetailRow::new("advantage-factor", 2f64.powi(b.min(2_000) as i32)),
        ],
    })
}

/// Fraction of size-`k` targets reaching success `q_min`, bounded by
/// `(k/n) / q_min`.
pub fn famine_favorable_targets<S: Scalar>(
    metric: &DecomposableMetric<S>,
    resource: &InformationResource,
    k: usize,
    q_min: f64,
) -> Result<VerificationReport> {
    let threshold: S = positive_threshold(q_min)?;
    let n = resource.n();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "target size {k} must satisfy 0 < k <= n = {n}"
        )));
    }
    let strategy = metric.strategy(resource)?;
    let mut qualifying: u64 = 0;
    let mut total: u64 = 0;
    for target in enumerate_targets(n, Some(k))? {
        total += 1;
        if target.dot(&strategy)? >= threshold {
            qualifying += 1;
        }
    }
    let fraction = S::from_ratio(qualifying as i64, total as i64);
    let bound = S::from_ratio(k as i64, n as i64) / threshold.clone();
    let tolerance = famine_tolerance::<S>();
    Ok(VerificationReport {
        id: "famine-favorable-targets",
        instance: format!(
            "{} on f={}, n={n}, k={k}, q_min={q_min}",
            metric.label(),
            resource.encode_hex()
        ),
        mode: mode_name::<S>(),
        observed: fraction.to_f64(),
        bound: bound.to_f64(),
        passed: fraction.le_within(&bound, tolerance),
        details: vec![
            DetailRow::new("qualifying-targets", qualifying as f64),
            DetailRow::new("total-targets", total as f64),
            DetailRow::new("baseline", k as f64 / n as f64),
        ],
    })
}

/// Fraction of (target, resource) pairs reaching success `q_min`, over all
/// size-`k` targets and every evaluation table for the given alphabet. The
/// same `(k/n) / q_min` budget binds the pair fraction and, resource by
/// resource, the worst per-resource fraction.
pub fn famine_of_forte<S: Scalar>(
    metric: &DecomposableMetric<S>,
    n: usize,
    k: usize,
    alphabet: u32,
    q_min: f64,
) -> Result<VerificationReport> {
    let threshold: S = positive_threshold(q_min)?;
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "target size {k} must satisfy 0 < k <= n = {n}"
        )));
    }
    let targets: Vec<TargetSet> = enumerate_targets(n, Some(k))?.collect();
    let per_target: u64 = binomial_u128(n as u64, k as u64) as u64;
    let mut resources_seen: u64 = 0;
    let mut qualifying: u64 = 0;
    let mut worst_resource_fraction = 0.0f64;
    for resource in enumerate_resources(n, alphabet)? {
        let strategy = metric.strategy(&resource)?;
        let mut here: u64 = 0;
        for target in &targets {
            if target.dot(&strategy)? >= threshold {
                here += 1;
            }
        }
        qualifying += here;
        worst_resource_fraction = worst_resource_fraction.max(here as f64 / per_target as f64);
        resources_seen += 1;
    }
    let total_pairs = resources_seen * per_target;
    let fraction = S::from_ratio(qualifying as i64, total_pairs as i64);
    let bound = S::from_ratio(k as i64, n as i64) / threshold;
    let tolerance = famine_tolerance::<S>();
    let pairs_ok = fraction.le_within(&bound, tolerance);
    let worst_ok = worst_resource_fraction <= bound.to_f64() + tolerance.max(1e-15);
    Ok(VerificationReport {
        id: "famine-of-forte",
        instance: format!(
            "{} over n={n}, k={k}, alphabet={alphabet}, q_min={q_min}",
            metric.label()
        ),
        mode: mode_name::<S>(),
        observed: fraction.to_f64(),
        bound: bound.to_f64(),
        passed: pairs_ok && worst_ok,
        details: vec![
            DetailRow::new("qualifying-pairs", qualifying as f64),
            DetailRow::new("total-pairs", total_pairs as f64),
            DetailRow::new("resources", resources_seen as f64),
            DetailRow::new("worst-resource-fraction", worst_resource_fraction),
        ],
    })
}

/// Probability mass of resources reaching success `q_min` on a fixed
/// target, under a distribution over resources. The budget is the average
/// success `k/n + bias`, so the mass is bounded by `(k/n + bias) / q_min`.
pub fn famine_favorable_resources<S: Scalar>(
    metric: &DecomposableMetric<S>,
    resources: &ResourceDistribution<S>,
    target: &TargetSet,
    q_min: f64,
) -> Result<VerificationReport> {
    let threshold: S = positive_threshold(q_min)?;
    if target.n() != resources.n() {
        return Err(Error::DimensionMismatch {
            expected: resources.n(),
            actual: target.n(),
        });
    }
    let mut qualifying_mass = S::zero();
    for (resource, weight) in resources.entries() {
        if metric.evaluate(target, resource)? >= threshold {
            qualifying_mass = qualifying_mass + weight.clone();
        }
    }
    let b = bias(metric, resources, target)?;
    let baseline = S::from_ratio(target.k() as i64, resources.n() as i64);
    let bound = (baseline.clone() + b.clone()) / threshold;
    let tolerance = famine_tolerance::<S>();
    Ok(VerificationReport {
        id: "famine-favorable-resources",
        instance: format!(
            "{} on |t|={} of n={}, support {}, q_min={q_min}",
            metric.label(),
            target.k(),
            resources.n(),
            resources.support_size()
        ),
        mode: mode_name::<S>(),
        observed: qualifying_mass.to_f64(),
        bound: bound.to_f64(),
        passed: qualifying_mass.le_within(&bound, tolerance),
        details: vec![
            DetailRow::new("bias", b.to_f64()),
            DetailRow::new("baseline", baseline.to_f64()),
            DetailRow::new("support-size", resources.support_size() as f64),
        ],
    })
}
