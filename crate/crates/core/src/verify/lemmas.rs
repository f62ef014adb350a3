//! Counting inequalities the famine bounds lean on, checked by exact
//! integer arithmetic against their closed-form caps.

use crate::error::{Error, Result};
use crate::prob::ProbabilityVector;
use crate::scalar::Scalar;
use crate::space::enumerate_targets;
use crate::verify::{mode_name, DetailRow, VerificationReport};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

/// Exact binomial coefficient.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut result = BigUint::one();
    for i in 1..=k {
        // The running product is C(n - k + i, i), so the division is exact.
        result = result * BigUint::from(n - k + i) / BigUint::from(i);
    }
    result
}

fn binomial_prefix_sum(n: u64, d: u64) -> BigUint {
    let mut total = BigUint::ZERO;
    for j in 0..=d {
        total += binomial_big(n, j);
    }
    total
}

/// Prefix sums of binomials against the growth cap `(e n / d)^d`.
pub fn check_sauer_shelah(n: u64, d: u64) -> Result<VerificationReport> {
    if d == 0 || d > n {
        return Err(Error::HypothesisViolation(format!(
            "depth must satisfy 1 <= d <= n, got d = {d}, n = {n}"
        )));
    }
    let sum = binomial_prefix_sum(n, d);
    let bound = (std::f64::consts::E * n as f64 / d as f64).powi(d as i32);
    let observed = sum.to_f64().unwrap_or(f64::INFINITY);
    Ok(VerificationReport {
        id: "sauer-shelah",
        instance: format!("n={n}, d={d}"),
        mode: "integer".into(),
        observed,
        bound,
        passed: observed <= bound,
        details: vec![DetailRow::new("terms", (d + 1) as f64)],
    })
}

/// Short binomial prefix sums against a power of two: summing to `n / 2^b`
/// costs at most `2^(n-b)`, provided `b >= 3` and the range is long enough
/// for the cutoff to exist (`n >= 2^b`). The comparison is exact.
pub fn check_binomial_approx(n: u64, b: u32) -> Result<VerificationReport> {
    if b < 3 {
        return Err(Error::HypothesisViolation(format!(
            "requires b >= 3, got {b}"
        )));
    }
    let scale = 1u64
        .checked_shl(b)
        .filter(|s| *s <= n)
        .ok_or_else(|| {
            Error::HypothesisViolation(format!("requires n >= 2^{b}, got n = {n}"))
        })?;
    let cutoff = n / scale;
    let sum = binomial_prefix_sum(n, cutoff);
    let cap = BigUint::one() << (n - b as u64) as usize;
    let passed = sum <= cap;
    Ok(VerificationReport {
        id: "binomial-approximation",
        instance: format!("n={n}, b={b}, cutoff={cutoff}"),
        mode: "integer".into(),
        observed: sum.to_f64().unwrap_or(f64::INFINITY),
        bound: cap.to_f64().unwrap_or(f64::INFINITY),
        passed,
        details: vec![
            DetailRow::new("cutoff", cutoff as f64),
            DetailRow::new("exponent", (n - b as u64) as f64),
        ],
    })
}

/// Counts size-`k` targets whose mass under a fixed strategy vector reaches
/// `epsilon`; at most `C(n-1, k-1) / epsilon` of them can. At `epsilon = 0`
/// every size-`k` target qualifies and the cap is `C(n, k)`.
pub fn check_max_satisfying_vectors<S: Scalar>(
    strategy: &ProbabilityVector<S>,
    k: usize,
    epsilon: &S,
) -> Result<VerificationReport> {
    let n = strategy.len();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "target size {k} must satisfy 0 < k <= n = {n}"
        )));
    }
    if *epsilon < S::zero() {
        return Err(Error::InvalidParameter(
            "threshold must be nonnegative".into(),
        ));
    }
    strategy.validate()?;
    let mut count: u64 = 0;
    let mut total: u64 = 0;
    for target in enumerate_targets(n, Some(k))? {
        total += 1;
        if target.dot(strategy)? >= *epsilon {
            count += 1;
        }
    }
    let count_s = S::from_ratio(count as i64, 1);
    let slots = binomial_big(n as u64 - 1, k as u64 - 1)
        .to_i64()
        .ok_or_else(|| Error::InvalidParameter("instance too large".into()))?;
    let (bound_s, bound_label) = if *epsilon == S::zero() {
        (S::from_ratio(total as i64, 1), "all-targets")
    } else {
        (S::from_ratio(slots, 1) / epsilon.clone(), "budget-over-threshold")
    };
    let tolerance = if S::EXACT { 0.0 } else { 1e-9 };
    Ok(VerificationReport {
        id: "max-satisfying-vectors",
        instance: format!("n={n}, k={k}, epsilon={}", epsilon.to_f64()),
        mode: mode_name::<S>(),
        observed: count as f64,
        bound: bound_s.to_f64(),
        passed: count_s.le_within(&bound_s, tolerance),
        details: vec![
            DetailRow::new("qualifying-targets", count as f64),
            DetailRow::new("total-targets", total as f64),
            DetailRow::new("per-element-targets", slots as f64),
            DetailRow::new(bound_label, bound_s.to_f64()),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    #[test]
    fn binomials_are_exact() {
        assert_eq!(binomial_big(10, 3), BigUint::from(120u32));
        assert_eq!(binomial_big(0, 0), BigUint::one());
        assert_eq!(binomial_big(5, 7), BigUint::ZERO);
        assert_eq!(
            binomial_big(64, 32),
            BigUint::from(1832624140942590534u64)
        );
        // A value beyond u128: C(200, 100) has 59 digits.
        let big = binomial_big(200, 100);
        assert_eq!(big.to_string().len(), 59);
    }

    #[test]
    fn prefix_sum_cap_reference_case() {
        let report = check_sauer_shelah(10, 3).unwrap();
        assert!(report.passed);
        // 1 + 10 + 45 + 120 against (10e/3)^3.
        assert_eq!(report.observed, 176.0);
        assert!((report.bound - 743.9087749328762).abs() < 1e-9);
    }

    #[test]
    fn prefix_sum_cap_holds_across_range() {
        for n in 1..=40u64 {
            for d in 1..=n {
                let report = check_sauer_shelah(n, d).unwrap();
                assert!(report.passed, "n={n} d={d}: {}", report.summary_line());
            }
        }
        assert!(check_sauer_shelah(5, 0).is_err());
        assert!(check_sauer_shelah(5, 6).is_err());
    }

    #[test]
    fn power_of_two_cap_holds_and_refuses_out_of_range() {
        let report = check_binomial_approx(16, 3).unwrap();
        assert!(report.passed);
        // Cutoff 2: 1 + 16 + 120 = 137 <= 2^13 = 8192.
        assert_eq!(report.observed, 137.0);
        assert_eq!(report.bound, 8192.0);
        for n in [8u64, 9, 24, 50, 200, 300] {
            assert!(check_binomial_approx(n, 3).unwrap().passed, "n={n}");
        }
        assert!(check_binomial_approx(100, 4).unwrap().passed);
        assert!(check_binomial_approx(300, 5).unwrap().passed);
        assert!(matches!(
            check_binomial_approx(16, 2),
            Err(Error::HypothesisViolation(_))
        ));
        assert!(matches!(
            check_binomial_approx(7, 3),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn satisfying_target_count_is_tight_on_uniform() {
        // Uniform mass, k = 3 of n = 10, threshold 3/10: every one of the
        // C(10, 3) = 120 targets sits exactly at the threshold, and the cap
        // C(9, 2) / (3/10) is exactly 120.
        let strategy = ProbabilityVector::<Exact>::uniform(10);
        let report =
            check_max_satisfying_vectors(&strategy, 3, &Exact::from_ratio(3, 10)).unwrap();
        assert!(report.passed);
        assert_eq!(report.observed, 120.0);
        assert_eq!(report.bound, 120.0);
    }

    #[test]
    fn satisfying_target_count_with_zero_threshold_caps_at_all() {
        let strategy = ProbabilityVector::<f64>::uniform(6);
        let report =
            check_max_satisfying_vectors(&strategy, 2, &0.0).unwrap();
        assert!(report.passed);
        assert_eq!(report.observed, 15.0);
        assert_eq!(report.bound, 15.0);
    }

    #[test]
    fn satisfying_target_count_on_skewed_mass() {
        let strategy =
            ProbabilityVector::<f64>::new(vec![0.55, 0.25, 0.1, 0.05, 0.05]).unwrap();
        let report = check_max_satisfying_vectors(&strategy, 2, &0.5).unwrap();
        assert!(report.passed, "{}", report.summary_line());
        // Pairs reaching 0.5: {0,1}, {0,2}, {0,3}, {0,4}.
        assert_eq!(report.observed, 4.0);
        assert!((report.bound - 8.0).abs() < 1e-9);
    }

    #[test]
    fn satisfying_target_count_rejects_bad_input() {
        let strategy = ProbabilityVector::<f64>::uniform(4);
        assert!(check_max_satisfying_vectors(&strategy, 0, &0.5).is_err());
        assert!(check_max_satisfying_vectors(&strategy, 5, &0.5).is_err());
        assert!(check_max_satisfying_vectors(&strategy, 2, &-0.5).is_err());
    }
}
