//! Probability vectors over the search space.

use crate::error::{Error, Result};
use crate::scalar::{sum, Scalar};

/// Tolerance for the sum-to-one check in floating-point mode.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// A probability distribution over the `n` elements of the search space:
/// entries are nonnegative and sum to one (exactly, in rational mode).
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector<S: Scalar> {
    weights: Vec<S>,
}

impl<S: Scalar> ProbabilityVector<S> {
    /// Validates and wraps a weight vector.
    pub fn new(weights: Vec<S>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidProbabilityVector("empty vector".into()));
        }
        for (i, w) in weights.iter().enumerate() {
            if *w < S::zero() {
                return Err(Error::InvalidProbabilityVector(format!(
                    "negative entry {:?} at index {i}",
                    w
                )));
            }
        }
        let total = sum(&weights);
        if !total.close_to(&S::one(), SUM_TOLERANCE) {
            return Err(Error::InvalidProbabilityVector(format!(
                "entries sum to {:?}, not 1",
                total
            )));
        }
        Ok(Self { weights })
    }

    /// Wraps weights without validation. `run_search` re-validates whatever an
    /// algorithm rule hands it, so rules built on this constructor still fail
    /// loudly rather than corrupt a trace.
    pub fn from_weights_unchecked(weights: Vec<S>) -> Self {
        Self { weights }
    }

    pub fn uniform(n: usize) -> Self {
        let w = S::from_ratio(1, n as i64);
        Self {
            weights: vec![w; n],
        }
    }

    /// Indicator distribution of a single element.
    pub fn point_mass(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return Err(Error::InvalidParameter(format!(
                "point mass index {index} out of range for n = {n}"
            )));
        }
        let mut weights = vec![S::zero(); n];
        weights[index] = S::one();
        Ok(Self { weights })
    }

    /// Normalizes arbitrary nonnegative weights.
    pub fn normalized(weights: Vec<S>) -> Result<Self> {
        let total = sum(&weights);
        if total <= S::zero() {
            return Err(Error::InvalidProbabilityVector(
                "cannot normalize: weights sum to zero".into(),
            ));
        }
        let weights = weights.into_iter().map(|w| w / total.clone()).collect();
        Self::new(weights)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn get(&self, i: usize) -> &S {
        &self.weights[i]
    }

    /// Returns the validation error for this vector, if any.
    pub fn validate(&self) -> Result<()> {
        Self::new(self.weights.clone()).map(|_| ())
    }

    /// Convex combination `w * self + (1 - w) * other`.
    pub fn mix(&self, other: &Self, weight_self: S) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        let rest = S::one() - weight_self.clone();
        let weights = self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| weight_self.clone() * a.clone() + rest.clone() * b.clone())
            .collect();
        Self::new(weights)
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.weights.iter().map(Scalar::to_f64).collect()
    }
}

/// Accumulator for building an expected distribution one weighted term at a time.
///
/// Used by the history-tree recursion: each visited distribution contributes
/// `coefficient * P` to the running total, and the finished accumulation is a
/// probability vector whenever the coefficients sum to one.
#[derive(Debug, Clone)]
pub struct WeightedAccumulator<S: Scalar> {
    total: Vec<S>,
}

impl<S: Scalar> WeightedAccumulator<S> {
    pub fn zeros(n: usize) -> Self {
        Self {
            total: vec![S::zero(); n],
        }
    }

    pub fn add_scaled(&mut self, coefficient: &S, vector: &ProbabilityVector<S>) {
        debug_assert_eq!(self.total.len(), vector.len());
        for (acc, w) in self.total.iter_mut().zip(vector.weights()) {
            *acc = acc.clone() + coefficient.clone() * w.clone();
        }
    }

    pub fn into_probability_vector(self) -> Result<ProbabilityVector<S>> {
        ProbabilityVector::new(self.total)
    }

    pub fn into_weights(self) -> Vec<S> {
        self.total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    #[test]
    fn uniform_sums_to_one() {
        let p = ProbabilityVector::<f64>::uniform(5);
        assert_eq!(p.weights(), &[0.2; 5]);
        let q = ProbabilityVector::<Exact>::uniform(3);
        q.validate().unwrap();
    }

    #[test]
    fn rejects_negative_entry() {
        let err = ProbabilityVector::new(vec![0.5, -0.1, 0.6]).unwrap_err();
        assert!(matches!(err, Error::InvalidProbabilityVector(_)));
    }

    #[test]
    fn rejects_bad_sum() {
        let err = ProbabilityVector::new(vec![0.5, 0.4]).unwrap_err();
        assert!(matches!(err, Error::InvalidProbabilityVector(_)));
        // Within tolerance is fine.
        ProbabilityVector::new(vec![0.5, 0.5 + 1e-12]).unwrap();
    }

    #[test]
    fn exact_mode_rejects_tolerance_slack() {
        let near_one = vec![
            Exact::from_ratio(1, 2),
            Exact::from_ratio(1, 2) + Exact::from_ratio(1, 1_000_000_000_000),
        ];
        assert!(ProbabilityVector::new(near_one).is_err());
    }

    #[test]
    fn point_mass_bounds() {
        let p = ProbabilityVector::<f64>::point_mass(4, 2).unwrap();
        assert_eq!(p.weights(), &[0.0, 0.0, 1.0, 0.0]);
        assert!(ProbabilityVector::<f64>::point_mass(4, 4).is_err());
    }

    #[test]
    fn mix_is_convex() {
        let a = ProbabilityVector::<f64>::point_mass(2, 0).unwrap();
        let b = ProbabilityVector::<f64>::point_mass(2, 1).unwrap();
        let m = a.mix(&b, 0.25).unwrap();
        assert_eq!(m.weights(), &[0.25, 0.75]);
    }
}
