//! Numeric abstraction over the two arithmetic modes.
//!
//! Every probability computation in this crate is generic over [`Scalar`],
//! instantiated either with `f64` (fast, tolerance-based comparisons) or with
//! [`Exact`] — arbitrary-precision rationals, where equality checks are exact
//! and conservation identities hold bit-for-bit. Conversions from `f64` into
//! a scalar are lossless: every finite double is a rational.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arbitrary-precision rational scalar, the authority for exact-equality checks.
pub type Exact = BigRational;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    /// Whether comparisons in this mode are exact (no tolerance).
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Lossless conversion; panics on NaN/infinite input in exact mode.
    fn from_f64_lossless(x: f64) -> Self;

    fn to_f64(&self) -> f64;

    fn abs_val(&self) -> Self;

    /// `|a - b| <= tol`, where exact mode ignores `tol` and requires equality.
    fn close_to(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            self == other
        } else {
            (self.clone() - other.clone()).abs_val().to_f64() <= tol
        }
    }

    /// `a <= b + tol`; exact mode requires `a <= b`.
    fn le_within(&self, bound: &Self, tol: f64) -> bool {
        if Self::EXACT {
            self <= bound
        } else {
            self.to_f64() <= bound.to_f64() + tol
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64_lossless(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }
}

impl Scalar for Exact {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64_lossless(x: f64) -> Self {
        BigRational::from_f64(x).expect("finite value required in exact mode")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs_val(&self) -> Self {
        Signed::abs(self)
    }
}

/// Sums a slice of scalars in index order (deterministic regardless of caller).
pub fn sum<S: Scalar>(values: &[S]) -> S {
    // Binary splitting keeps floating-point accumulation error growing
    // with the depth of the reduction tree rather than its width; exact
    // types are indifferent to the regrouping.
    if values.len() <= 16 {
        return values.iter().cloned().fold(S::zero(), |acc, v| acc + v);
    }
    let (a, b) = values.split_at(values.len() / 2);
    sum(a) + sum(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_round_trip() {
        let x = f64::from_ratio(3, 10);
        assert!((x - 0.3).abs() < 1e-15);
        let r = Exact::from_ratio(3, 10);
        assert_eq!(r, BigRational::new(BigInt::from(3), BigInt::from(10)));
    }

    #[test]
    fn lossless_f64_to_rational() {
        // 0.1 is not exactly 1/10 in binary; the conversion must preserve the
        // binary value, not round to the decimal.
        let r = Exact::from_f64_lossless(0.1);
        assert_eq!(Scalar::to_f64(&r), 0.1);
        assert_ne!(r, Exact::from_ratio(1, 10));
        let half = Exact::from_f64_lossless(0.5);
        assert_eq!(half, Exact::from_ratio(1, 2));
    }

    #[test]
    fn exact_comparison_ignores_tolerance() {
        let a = Exact::from_ratio(1, 3);
        let b = Exact::from_ratio(1, 3);
        let c = Exact::from_ratio(1, 3) + Exact::from_ratio(1, 1_000_000_000_000);
        assert!(a.close_to(&b, 0.0));
        assert!(!a.close_to(&c, 1.0));
    }
}
