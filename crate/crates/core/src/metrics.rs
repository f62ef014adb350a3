//! Success metrics that decompose as a dot product between the target
//! indicator and a per-resource strategy vector.
//!
//! The strategy vector is the expectation, over realized search histories, of
//! the weighted average of the per-step query distributions. It can be
//! computed exactly by walking the full history tree or estimated by
//! Monte-Carlo simulation; both estimators share the same per-trace
//! arithmetic, so they agree in expectation by construction.

use crate::error::{Error, Result};
use crate::prob::{ProbabilityVector, WeightedAccumulator};
use crate::scalar::{sum, Scalar};
use crate::search::{derive_seed, run_search, SearchAlgorithm, SearchHistory};
use crate::space::{enumerate_targets, InformationResource, TargetSet};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Tolerance for weight vectors that must sum to one (step weights, mixture
/// coefficients, joint distributions).
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

/// Largest history tree the exact walker will expand (leaf count).
pub const HISTORY_TREE_CAP: u128 = 1_000_000;

/// How the per-step query distributions are averaged into one strategy
/// vector.
#[derive(Debug, Clone, PartialEq)]
pub enum AlphaWeighting {
    /// Every step weighted equally.
    PerQuery,
    /// All weight on the last step.
    FinalQuery,
    /// Weight proportional to `ratio^step` (step 0 heaviest for ratio < 1).
    Geometric { ratio: f64 },
    /// Explicit nonnegative weights, one per step, summing to one.
    Custom(Vec<f64>),
}

impl AlphaWeighting {
    /// Materializes the weights for a horizon of `steps` queries.
    ///
    /// The result is exactly normalized in `S` arithmetic, so in rational
    /// mode downstream sums telescope to exactly one.
    pub fn weights<S: Scalar>(&self, steps: usize) -> Result<Vec<S>> {
        if steps == 0 {
            return Err(Error::InvalidParameter("steps must be >= 1".into()));
        }
        match self {
            AlphaWeighting::PerQuery => {
                Ok(vec![S::from_ratio(1, steps as i64); steps])
            }
            AlphaWeighting::FinalQuery => {
                let mut w = vec![S::zero(); steps];
                w[steps - 1] = S::one();
                Ok(w)
            }
            AlphaWeighting::Geometric { ratio } => {
                if !(ratio.is_finite() && *ratio > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "geometric ratio must be finite and positive, got {ratio}"
                    )));
                }
                let mut w = Vec::with_capacity(steps);
                let mut term = S::one();
                let r = S::from_f64_lossless(*ratio);
                for _ in 0..steps {
                    w.push(term.clone());
                    term = term * r.clone();
                }
                Self::normalize(w)
            }
            AlphaWeighting::Custom(raw) => {
                if raw.len() != steps {
                    return Err(Error::DimensionMismatch {
                        expected: steps,
                        actual: raw.len(),
                    });
                }
                if raw.iter().any(|w| !w.is_finite() || *w < 0.0) {
                    return Err(Error::InvalidParameter(
                        "step weights must be finite and nonnegative".into(),
                    ));
                }
                let total: f64 = raw.iter().sum();
                if (total - 1.0).abs() > WEIGHT_TOLERANCE {
                    return Err(Error::InvalidParameter(format!(
                        "step weights must sum to 1, got {total}"
                    )));
                }
                Self::normalize(raw.iter().map(|w| S::from_f64_lossless(*w)).collect())
            }
        }
    }

    fn normalize<S: Scalar>(w: Vec<S>) -> Result<Vec<S>> {
        let total = sum(&w);
        if total <= S::zero() {
            return Err(Error::InvalidParameter(
                "step weights must have positive total".into(),
            ));
        }
        Ok(w.into_iter().map(|x| x / total.clone()).collect())
    }
}

/// How the expectation over histories is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimationMode {
    /// Full history-tree expansion; exact up to the numeric type.
    Exact,
    /// Seeded simulation; `runs` independent traces with per-run derived
    /// seeds, aggregated in run order.
    MonteCarlo { runs: usize, seed: u64 },
}

/// A strategy vector with, for Monte-Carlo estimates, the per-coordinate
/// standard error of the mean.
#[derive(Debug, Clone)]
pub struct StrategyVector<S: Scalar> {
    pub vector: ProbabilityVector<S>,
    pub std_error: Option<Vec<f64>>,
}

impl<S: Scalar> StrategyVector<S> {
    /// Standard error of `target . vector` under independent coordinates:
    /// the root of the summed squared coordinate errors.
    pub fn dot_std_error(&self, target: &TargetSet) -> Option<f64> {
        self.std_error.as_ref().map(|se| {
            target
                .members()
                .map(|i| se[i] * se[i])
                .sum::<f64>()
                .sqrt()
        })
    }
}

fn check_tree_size(n: usize, steps: usize) -> Result<()> {
    let leaves = (n as u128)
        .checked_pow(steps as u32)
        .ok_or(Error::HistoryTreeCapExceeded {
            leaves: u128::MAX,
            cap: HISTORY_TREE_CAP,
        })?;
    if leaves > HISTORY_TREE_CAP {
        return Err(Error::HistoryTreeCapExceeded {
            leaves,
            cap: HISTORY_TREE_CAP,
        });
    }
    Ok(())
}

/// Visits every reachable history prefix; calls `visit(depth, path_prob,
/// dist)` for the distribution produced at each prefix. Branches with zero
/// probability are pruned, so the traversal cost tracks the reachable tree.
fn walk_history_tree<S: Scalar>(
    algorithm: &SearchAlgorithm<S>,
    resource: &InformationResource,
    steps: usize,
    history: &mut SearchHistory,
    path_prob: S,
    visit: &mut dyn FnMut(usize, &S, &ProbabilityVector<S>),
) -> Result<()> {
    let depth = history.len();
    let dist = algorithm.next_distribution(history, resource)?;
    visit(depth, &path_prob, &dist);
    if depth + 1 == steps {
        return Ok(());
    }
    for (element, weight) in dist.weights().iter().enumerate() {
        if *weight <= S::zero() {
            continue;
        }
        let branch = path_prob.clone() * weight.clone();
        history.push(element, resource.evaluate(element));
        walk_history_tree(algorithm, resource, steps, history, branch, visit)?;
        history.pop();
    }
    Ok(())
}

fn exact_strategy<S: Scalar>(
    algorithm: &SearchAlgorithm<S>,
    resource: &InformationResource,
    steps: usize,
    alpha: &[S],
) -> Result<Vec<S>> {
    check_tree_size(resource.n(), steps)?;
    let mut acc = WeightedAccumulator::zeros(resource.n());
    let mut history = SearchHistory::empty();
    walk_history_tree(
        algorithm,
        resource,
        steps,
        &mut history,
        S::one(),
        &mut |depth, path_prob, dist| {
            let coeff = path_prob.clone() * alpha[depth].clone();
            if coeff > S::zero() {
                acc.add_scaled(&coeff, dist);
            }
        },
    )?;
    Ok(acc.into_weights())
}

/// Strategy vector of one simulated trace: the alpha-weighted average of the
/// distributions the algorithm actually produced.
fn trace_strategy<S: Scalar>(
    algorithm: &SearchAlgorithm<S>,
    resource: &InformationResource,
    steps: usize,
    alpha: &[S],
    seed: u64,
) -> Result<Vec<S>> {
    let trace = run_search(algorithm, resource, steps, seed)?;
    let mut acc = WeightedAccumulator::zeros(resource.n());
    for (a, dist) in alpha.iter().zip(&trace.distributions) {
        acc.add_scaled(a, dist);
    }
    Ok(acc.into_weights())
}

/// Coordinate-wise sum of equal-length rows by binary splitting; `rows`
/// must be nonempty.
fn pairwise_vector_sum<S: Scalar>(rows: &[Vec<S>]) -> Vec<S> {
    if rows.len() <= 8 {
        let mut acc = rows[0].clone();
        for row in &rows[1..] {
            for (a, x) in acc.iter_mut().zip(row) {
                *a = a.clone() + x.clone();
            }
        }
        return acc;
    }
    let (a, b) = rows.split_at(rows.len() / 2);
    let left = pairwise_vector_sum(a);
    let right = pairwise_vector_sum(b);
    left.into_iter().zip(right).map(|(x, y)| x + y).collect()
}

fn monte_carlo_strategy<S: Scalar>(
    algorithm: &SearchAlgorithm<S>,
    resource: &InformationResource,
    steps: usize,
    alpha: &[S],
    runs: usize,
    seed: u64,
) -> Result<(Vec<S>, Vec<f64>)> {
    if runs == 0 {
        return Err(Error::InvalidParameter("runs must be >= 1".into()));
    }
    let per_run: Vec<Vec<S>> = (0..runs)
        .into_par_iter()
        .map(|run| {
            trace_strategy(algorithm, resource, steps, alpha, derive_seed(seed, run as u64))
        })
        .collect::<Result<Vec<_>>>()?;

    // Aggregation reduces run vectors in a fixed binary-splitting order,
    // so the result does not depend on the parallel schedule and the
    // rounding error stays logarithmic in the number of runs.
    let n = resource.n();
    let runs_s = S::from_ratio(runs as i64, 1);
    let mut mean = pairwise_vector_sum(&per_run);
    for m in mean.iter_mut() {
        *m = m.clone() / runs_s.clone();
    }

    let mean_f64: Vec<f64> = mean.iter().map(Scalar::to_f64).collect();
    let mut sq_dev = vec![0.0f64; n];
    for run_vec in &per_run {
        for ((s, x), m) in sq_dev.iter_mut().zip(run_vec).zip(&mean_f64) {
            let d = x.to_f64() - m;
            *s += d * d;
        }
    }
    let se = if runs > 1 {
        let denom = (runs * (runs - 1)) as f64;
        sq_dev.into_iter().map(|s| (s / denom).sqrt()).collect()
    } else {
        vec![0.0; n]
    };
    Ok((mean, se))
}

/// The expected alpha-weighted average of the per-step query distributions.
pub fn strategy_vector<S: Scalar>(
    algorithm: &SearchAlgorithm<S>,
    resource: &InformationResource,
    steps: usize,
    alpha: &AlphaWeighting,
    mode: EstimationMode,
) -> Result<StrategyVector<S>> {
    let alpha_w: Vec<S> = alpha.weights(steps)?;
    match mode {
        EstimationMode::Exact => {
            let weights = exact_strategy(algorithm, resource, steps, &alpha_w)?;
            Ok(StrategyVector {
                vector: ProbabilityVector::new(weights)?,
                std_error: None,
            })
        }
        EstimationMode::MonteCarlo { runs, seed } => {
            let (weights, se) =
                monte_carlo_strategy(algorithm, resource, steps, &alpha_w, runs, seed)?;
            Ok(StrategyVector {
                vector: ProbabilityVector::new(weights)?,
                std_error: Some(se),
            })
        }
    }
}

/// Success probability as the dot product of the target indicator with the
/// strategy vector.
pub fn success_probability<S: Scalar>(
    target: &TargetSet,
    strategy: &ProbabilityVector<S>,
) -> Result<S> {
    target.dot(strategy)
}

/// Success under equal step weights.
pub fn per_query_success<S: Scalar>(
    algorithm: &SearchAlgorithm<S>,
    resource: &InformationResource,
    target: &TargetSet,
    steps: usize,
    mode: EstimationMode,
) -> Result<S> {
    let sv = strategy_vector(algorithm, resource, steps, &AlphaWeighting::PerQuery, mode)?;
    success_probability(target, &sv.vector)
}

/// Success under all weight on the final step.
pub fn final_query_success<S: Scalar>(
    algorithm: &SearchAlgorithm<S>,
    resource: &InformationResource,
    target: &TargetSet,
    steps: usize,
    mode: EstimationMode,
) -> Result<S> {
    let sv = strategy_vector(algorithm, resource, steps, &AlphaWeighting::FinalQuery, mode)?;
    success_probability(target, &sv.vector)
}

/// Success computed without materializing the strategy vector: the tree walk
/// (or each simulated trace) accumulates target mass directly. Used to
/// cross-check the dot-product route.
pub fn success_via_history<S: Scalar>(
    algorithm: &SearchAlgorithm<S>,
    resource: &InformationResource,
    target: &TargetSet,
    steps: usize,
    alpha: &AlphaWeighting,
    mode: EstimationMode,
) -> Result<S> {
    let alpha_w: Vec<S> = alpha.weights(steps)?;
    match mode {
        EstimationMode::Exact => {
            check_tree_size(resource.n(), steps)?;
            let mut total = S::zero();
            let mut history = SearchHistory::empty();
            walk_history_tree(
                algorithm,
                resource,
                steps,
                &mut history,
                S::one(),
                &mut |depth, path_prob, dist| {
                    let mut mass = S::zero();
                    for i in target.members() {
                        mass = mass + dist.weights()[i].clone();
                    }
                    total = total.clone() + path_prob.clone() * alpha_w[depth].clone() * mass;
                },
            )?;
            Ok(total)
        }
        EstimationMode::MonteCarlo { runs, seed } => {
            if runs == 0 {
                return Err(Error::InvalidParameter("runs must be >= 1".into()));
            }
            let per_run: Vec<S> = (0..runs)
                .into_par_iter()
                .map(|run| -> Result<S> {
                    let trace = run_search(
                        algorithm,
                        resource,
                        steps,
                        derive_seed(seed, run as u64),
                    )?;
                    let mut acc = S::zero();
                    for (a, dist) in alpha_w.iter().zip(&trace.distributions) {
                        let mut mass = S::zero();
                        for i in target.members() {
                            mass = mass + dist.weights()[i].clone();
                        }
                        acc = acc + a.clone() * mass;
                    }
                    Ok(acc)
                })
                .collect::<Result<Vec<_>>>()?;
            let total = sum(&per_run);
            Ok(total / S::from_ratio(runs as i64, 1))
        }
    }
}

type StrategyFn<S> =
    dyn Fn(&InformationResource) -> Result<ProbabilityVector<S>> + Send + Sync;

/// A success metric presented through its per-resource strategy vector, so
/// that evaluation on any target is the dot product with that vector.
#[derive(Clone)]
pub struct DecomposableMetric<S: Scalar> {
    label: String,
    strategy: Arc<StrategyFn<S>>,
}

impl<S: Scalar> DecomposableMetric<S> {
    pub fn from_fn<F>(label: impl Into<String>, strategy: F) -> Self
    where
        F: Fn(&InformationResource) -> Result<ProbabilityVector<S>> + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            strategy: Arc::new(strategy),
        }
    }

    /// The metric induced by running an algorithm for a fixed horizon under
    /// the given step weighting and estimation mode.
    pub fn from_algorithm(
        algorithm: SearchAlgorithm<S>,
        steps: usize,
        alpha: AlphaWeighting,
        mode: EstimationMode,
    ) -> Self {
        let label = format!("{}[steps={steps}]", algorithm.name());
        Self::from_fn(label, move |resource| {
            Ok(strategy_vector(&algorithm, resource, steps, &alpha, mode)?.vector)
        })
    }

    /// A metric defined by an explicit strategy table keyed by resource
    /// encoding. Resources outside the table are rejected.
    pub fn from_table(
        label: impl Into<String>,
        entries: Vec<(InformationResource, ProbabilityVector<S>)>,
    ) -> Result<Self> {
        let mut table: BTreeMap<u128, ProbabilityVector<S>> = BTreeMap::new();
        for (resource, vector) in entries {
            if vector.len() != resource.n() {
                return Err(Error::DimensionMismatch {
                    expected: resource.n(),
                    actual: vector.len(),
                });
            }
            vector.validate()?;
            table.insert(resource.encode(), vector);
        }
        Ok(Self::from_fn(label, move |resource| {
            table.get(&resource.encode()).cloned().ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "no strategy tabled for resource {}",
                    resource.encode_hex()
                ))
            })
        }))
    }

    /// The resource-independent uniform baseline.
    pub fn uniform() -> Self {
        Self::from_fn("uniform-baseline", |resource| {
            Ok(ProbabilityVector::uniform(resource.n()))
        })
    }

    /// Convex combination of metrics. Rejects coefficient vectors that are
    /// not convex, since those do not preserve decomposability.
    pub fn mixture(components: Vec<(f64, DecomposableMetric<S>)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter(
                "mixture needs at least one component".into(),
            ));
        }
        if components
            .iter()
            .any(|(w, _)| !w.is_finite() || *w < 0.0)
        {
            return Err(Error::InvalidParameter(
                "mixture coefficients must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = components.iter().map(|(w, _)| *w).sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "mixture coefficients must sum to 1, got {total}"
            )));
        }
        let label = format!(
            "mixture({})",
            components
                .iter()
                .map(|(w, m)| format!("{w}*{}", m.label()))
                .collect::<Vec<_>>()
                .join(" + ")
        );
        let parts: Vec<(S, DecomposableMetric<S>)> = components
            .into_iter()
            .map(|(w, m)| (S::from_f64_lossless(w), m))
            .collect();
        // Renormalize exactly so rational-mode sums close.
        let total_s = sum(&parts.iter().map(|(w, _)| w.clone()).collect::<Vec<_>>());
        Ok(Self::from_fn(label, move |resource| {
            let mut acc = WeightedAccumulator::zeros(resource.n());
            for (w, m) in &parts {
                let v = m.strategy(resource)?;
                if v.len() != resource.n() {
                    return Err(Error::DimensionMismatch {
                        expected: resource.n(),
                        actual: v.len(),
                    });
                }
                acc.add_scaled(&(w.clone() / total_s.clone()), &v);
            }
            acc.into_probability_vector()
        }))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The per-resource strategy vector.
    pub fn strategy(&self, resource: &InformationResource) -> Result<ProbabilityVector<S>> {
        (self.strategy)(resource)
    }

    /// Success probability on a target: indicator dot strategy.
    pub fn evaluate(&self, target: &TargetSet, resource: &InformationResource) -> Result<S> {
        target.dot(&self.strategy(resource)?)
    }
}

impl<S: Scalar> std::fmt::Debug for DecomposableMetric<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DecomposableMetric")
            .field("label", &self.label)
            .finish()
    }
}

/// Tests whether a target-indexed functional is a dot product with a single
/// per-resource vector: reconstructs the candidate vector from singleton
/// targets, then replays every subset of the space against it.
///
/// Returns the reconstruction on success, `None` with `false` on the first
/// violation.
pub fn decomposability_check<S: Scalar>(
    functional: &dyn Fn(&TargetSet, &InformationResource) -> Result<S>,
    resource: &InformationResource,
    tolerance: f64,
) -> Result<(bool, Option<Vec<S>>)> {
    let n = resource.n();
    let mut reconstruction = Vec::with_capacity(n);
    for i in 0..n {
        let singleton = TargetSet::from_indices(n, &[i])?;
        reconstruction.push(functional(&singleton, resource)?);
    }
    for target in enumerate_targets(n, None)? {
        let direct = functional(&target, resource)?;
        let mut rebuilt = S::zero();
        for i in target.members() {
            rebuilt = rebuilt + reconstruction[i].clone();
        }
        if !direct.close_to(&rebuilt, tolerance) {
            return Ok((false, None));
        }
    }
    Ok((true, Some(reconstruction)))
}

/// Bits of success gained over uniform random sampling: `-log2(p / phi)`.
/// Zero success gives negative infinity; a zero baseline is rejected.
pub fn active_information(phi: f64, p: f64) -> Result<f64> {
    if !(p.is_finite() && p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "baseline probability must lie in (0, 1], got {p}"
        )));
    }
    if !(phi.is_finite() && (0.0..=1.0).contains(&phi)) {
        return Err(Error::InvalidParameter(format!(
            "success probability must lie in [0, 1], got {phi}"
        )));
    }
    if phi == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(-(p / phi).log2())
}
