//! Verifiers for the conservation laws and famine bounds.
//!
//! Every verifier returns a `VerificationReport` whose `observed` and
//! `bound` fields carry the two sides of the inequality (or the deviation
//! and tolerance of an identity) and whose hypothesis checks refuse
//! out-of-scope instances with `Error::HypothesisViolation` rather than
//! reporting a pass or fail.

use crate::error::{Error, Result};
use crate::space::{enumerate_targets, TargetSet};

pub mod conservation;
pub mod dependence;
pub mod famine;
pub mod futility;
pub mod lemmas;

pub use conservation::verify_nfl;
pub use dependence::learning_under_dependence;
pub use famine::{
    famine_favorable_resources, famine_favorable_targets, famine_of_forte,
    fraction_favorable_targets,
};
pub use futility::{favorable_bias_measure, futility_check};
pub use lemmas::{check_binomial_approx, check_max_satisfying_vectors, check_sauer_shelah};

/// One labeled scalar in a report's supporting data.
#[derive(Debug, Clone, PartialEq)]
pub struct DetailRow {
    pub label: String,
    pub value: f64,
}

impl DetailRow {
    pub fn new(label: impl Into<String>, value: f64) -> Self {
        Self {
            label: label.into(),
            value,
        }
    }
}

/// Outcome of one verification: the checked quantity, the bound it must
/// respect, and the supporting numbers.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    /// Stable kebab-case name of the law being checked.
    pub id: &'static str,
    /// The instance the check ran on.
    pub instance: String,
    /// Arithmetic and estimation used, e.g. "rational" or "f64".
    pub mode: String,
    pub observed: f64,
    pub bound: f64,
    pub passed: bool,
    pub details: Vec<DetailRow>,
}

impl VerificationReport {
    /// Bound minus observed; negative exactly when the check failed.
    pub fn slack(&self) -> f64 {
        self.bound - self.observed
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{}: {} observed {:.12e} bound {:.12e} ({})",
            self.id,
            if self.passed { "ok" } else { "VIOLATED" },
            self.observed,
            self.bound,
            self.instance
        )
    }
}

pub(crate) fn mode_name<S: crate::scalar::Scalar>() -> String {
    if S::EXACT {
        "rational".into()
    } else {
        "f64".into()
    }
}

/// A finite family of target sets over one search space.
#[derive(Debug, Clone)]
pub struct TargetFamily {
    targets: Vec<TargetSet>,
    n: usize,
}

impl TargetFamily {
    pub fn new(targets: Vec<TargetSet>) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::InvalidParameter(
                "target family must be nonempty".into(),
            ));
        }
        let n = targets[0].n();
        let mut seen = std::collections::BTreeSet::new();
        for t in &targets {
            if t.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: t.n(),
                });
            }
            if !seen.insert(t.bitmask()) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate target {:#x} in family",
                    t.bitmask()
                )));
            }
        }
        Ok(Self { targets, n })
    }

    /// All subsets of the given cardinality.
    pub fn all_k_subsets(n: usize, k: usize) -> Result<Self> {
        Self::new(enumerate_targets(n, Some(k))?.collect())
    }

    /// Every subset, the empty one included.
    pub fn all_subsets(n: usize) -> Result<Self> {
        Self::new(enumerate_targets(n, None)?.collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn targets(&self) -> &[TargetSet] {
        &self.targets
    }

    /// How often each element appears across the family.
    pub fn coverage(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.n];
        for t in &self.targets {
            for i in t.members() {
                counts[i] += 1;
            }
        }
        counts
    }

    /// The common per-element coverage count of a family that is closed
    /// under relabeling of the space, if the coverage is constant.
    ///
    /// Constant coverage is the structural property the conservation law
    /// rests on; families closed under permutation always have it.
    pub fn is_closed_under_permutation(&self) -> Option<u64> {
        let counts = self.coverage();
        let first = counts[0];
        if counts.iter().all(|&c| c == first) {
            Some(first)
        } else {
            None
        }
    }
}
