//! How much expected success a dependence between target and resource can
//! buy.
//!
//! With the target drawn jointly with the resource, expected success is
//! bounded by the information the resource carries about the target (plus
//! how far the target marginal sits from uniform, plus one bit), measured
//! against the difficulty of a single uniform draw.

use crate::error::{Error, Result};
use crate::info::{endogenous_information, JointDistribution};
use crate::metrics::DecomposableMetric;
use crate::space::binomial_u128;
use crate::verify::{DetailRow, VerificationReport};

/// Checks expected success against the information budget
/// `(I(T;F) + D(P_T || U_T) + 1) / I_Omega`, cross-computing the numerator
/// as `log2 C(n,k) - H(T|F) + 1` as well; the two must agree.
pub fn learning_under_dependence(
    metric: &DecomposableMetric<f64>,
    joint: &JointDistribution,
) -> Result<VerificationReport> {
    let n = joint.n();
    let k = joint.k();
    if k == n {
        return Err(Error::HypothesisViolation(
            "target cannot cover the whole space: a uniform draw already succeeds".into(),
        ));
    }
    let i_omega = endogenous_information(k, n)?;

    let mut expected_success = 0.0;
    for (i, target) in joint.targets().iter().enumerate() {
        for (j, resource) in joint.resources().iter().enumerate() {
            let mass = joint.mass(i, j);
            if mass > 0.0 {
                expected_success += mass * metric.evaluate(target, resource)?;
            }
        }
    }

    let mutual = joint.mutual_information()?;
    let divergence = joint.target_divergence_from_uniform()?;
    let conditional = joint.conditional_target_entropy();
    let bound = (mutual + divergence + 1.0) / i_omega;
    let support_bits = (binomial_u128(n as u64, k as u64) as f64).log2();
    let alternative = (support_bits - conditional + 1.0) / i_omega;
    if (bound - alternative).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "information budget cross-check failed: {bound} vs {alternative}"
        )));
    }

    Ok(VerificationReport {
        id: "learning-under-dependence",
        instance: format!(
            "{} over joint with {} targets x {} resources, n={n}, k={k}",
            metric.label(),
            joint.targets().len(),
            joint.resources().len()
        ),
        mode: "f64".into(),
        observed: expected_success,
        bound,
        passed: expected_success <= bound + 1e-12,
        details: vec![
            DetailRow::new("mutual-information", mutual),
            DetailRow::new("divergence-from-uniform", divergence),
            DetailRow::new("conditional-entropy", conditional),
            DetailRow::new("endogenous-information", i_omega),
            DetailRow::new("alternative-bound", alternative),
        ],
    })
}
