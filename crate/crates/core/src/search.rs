//! The iterative black-box sampling loop.
//!
//! An algorithm is a pure rule from (history, resource) to a distribution over
//! the search space. The loop samples an element from each distribution,
//! evaluates it with the information resource, and appends the result to the
//! history before asking the rule for the next distribution.

use crate::error::{Error, Result};
use crate::prob::ProbabilityVector;
use crate::scalar::Scalar;
use crate::space::InformationResource;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// One recorded query: the sampled element and its evaluation.
pub type HistoryStep = (usize, u32);

/// The sequence of (sampled element, evaluation) pairs accumulated so far.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchHistory {
    steps: Vec<HistoryStep>,
}

impl SearchHistory {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn steps(&self) -> &[HistoryStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, element: usize, evaluation: u32) {
        self.steps.push((element, evaluation));
    }

    pub fn pop(&mut self) -> Option<HistoryStep> {
        self.steps.pop()
    }

    /// Elements sampled so far, in order, without evaluations.
    pub fn sampled(&self) -> impl Iterator<Item = usize> + '_ {
        self.steps.iter().map(|&(i, _)| i)
    }
}

/// One simulated search: the distribution the algorithm produced at each step
/// alongside the realized history.
#[derive(Debug, Clone)]
pub struct SearchTrace<S: Scalar> {
    pub distributions: Vec<ProbabilityVector<S>>,
    pub history: SearchHistory,
}

type Rule<S> = dyn Fn(&SearchHistory, &InformationResource) -> Result<ProbabilityVector<S>>
    + Send
    + Sync;

/// A black-box search algorithm: a named, pure rule producing the next query
/// distribution from the history and the information resource.
///
/// Purity is part of the contract — identical inputs must yield identical
/// distributions, which is what makes exact expectations over the history
/// tree well defined.
#[derive(Clone)]
pub struct SearchAlgorithm<S: Scalar> {
    name: String,
    rule: Arc<Rule<S>>,
}

impl<S: Scalar> SearchAlgorithm<S> {
    pub fn from_rule<F>(name: impl Into<String>, rule: F) -> Self
    where
        F: Fn(&SearchHistory, &InformationResource) -> Result<ProbabilityVector<S>>
            + Send
            + Sync
            + 'static,
    {
        Self {
            name: name.into(),
            rule: Arc::new(rule),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Applies the rule and validates the produced distribution.
    pub fn next_distribution(
        &self,
        history: &SearchHistory,
        resource: &InformationResource,
    ) -> Result<ProbabilityVector<S>> {
        let dist = (self.rule)(history, resource)?;
        if dist.len() != resource.n() {
            return Err(Error::DimensionMismatch {
                expected: resource.n(),
                actual: dist.len(),
            });
        }
        dist.validate()?;
        Ok(dist)
    }
}

impl<S: Scalar> std::fmt::Debug for SearchAlgorithm<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SearchAlgorithm")
            .field("name", &self.name)
            .finish()
    }
}

/// Stateless 64-bit mixer (splitmix64 finalizer).
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Derives an independent stream seed from a master seed and a stream index.
/// Used for Monte-Carlo runs so aggregation order never affects results.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    mix64(master ^ mix64(stream.wrapping_add(0x517c_c1b7_2722_0a95)))
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Samples an index from a distribution by inverse transform on `[0, 1)`.
pub fn sample_index<S: Scalar, R: Rng>(dist: &ProbabilityVector<S>, rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, w) in dist.weights().iter().enumerate() {
        acc += w.to_f64();
        if u < acc {
            return i;
        }
    }
    // Rounding left u >= total mass; charge the draw to the last nonzero entry.
    dist.weights()
        .iter()
        .rposition(|w| w.to_f64() > 0.0)
        .unwrap_or(dist.len() - 1)
}

/// Runs the sampling loop for `steps` queries with a seeded generator.
///
/// Identical `(algorithm, resource, steps, seed)` inputs reproduce the trace
/// bit for bit.
pub fn run_search<S: Scalar>(
    algorithm: &SearchAlgorithm<S>,
    resource: &InformationResource,
    steps: usize,
    seed: u64,
) -> Result<SearchTrace<S>> {
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be >= 1".into()));
    }
    let mut rng = seeded_rng(seed);
    let mut history = SearchHistory::empty();
    let mut distributions = Vec::with_capacity(steps);
    for _ in 0..steps {
        let dist = algorithm.next_distribution(&history, resource)?;
        let element = sample_index(&dist, &mut rng);
        history.push(element, resource.evaluate(element));
        distributions.push(dist);
    }
    Ok(SearchTrace {
        distributions,
        history,
    })
}
