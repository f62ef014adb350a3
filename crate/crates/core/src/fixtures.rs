//! Canonical instances shared across the test and verification suites:
//! small fixed evaluation tables, hand-built metrics with known biases,
//! and seeded random generators for larger sweeps.

use crate::algorithms::{make_algorithm, standard_specs};
use crate::bias::ResourceDistribution;
use crate::error::{Error, Result};
use crate::info::JointDistribution;
use crate::metrics::{AlphaWeighting, DecomposableMetric, EstimationMode};
use crate::prob::ProbabilityVector;
use crate::scalar::Scalar;
use crate::search::{derive_seed, seeded_rng};
use crate::space::{enumerate_targets, InformationResource, TargetSet};
use rand::Rng;
use std::collections::BTreeSet;

/// Small evaluation tables paired with every standard algorithm in the
/// suites: binary tables on three to six elements plus one with a larger
/// alphabet, all with at least one strict maximum so sharp algorithms have
/// something to find.
pub fn standard_resources() -> Vec<InformationResource> {
    vec![
        InformationResource::binary(vec![0, 1, 0]).unwrap(),
        InformationResource::binary(vec![0, 1, 0, 0]).unwrap(),
        InformationResource::binary(vec![1, 1, 0, 0]).unwrap(),
        InformationResource::new(vec![0, 1, 2, 3], 4).unwrap(),
        InformationResource::binary(vec![0, 0, 1, 0, 1, 0]).unwrap(),
    ]
}

/// Mirror-image binary tables on two elements. Under any algorithm that
/// reacts only to evaluations, their strategies swap coordinates, so the
/// equal weighting of the pair is bias-free for every target.
pub fn mirrored_pair() -> (InformationResource, InformationResource) {
    (
        InformationResource::binary(vec![1, 0]).unwrap(),
        InformationResource::binary(vec![0, 1]).unwrap(),
    )
}

/// A table metric over the mirrored pair whose per-resource biases toward
/// the target `{0}` are +1/4 and -1/4. No weighting of the support can
/// push the bias past 1/4, and the equal weighting has bias zero.
pub fn opposed_bias_fixture() -> (DecomposableMetric<f64>, Vec<InformationResource>, TargetSet) {
    let (f1, f2) = mirrored_pair();
    let metric = DecomposableMetric::from_table(
        "opposed-quarters",
        vec![
            (f1.clone(), ProbabilityVector::new(vec![0.75, 0.25]).unwrap()),
            (f2.clone(), ProbabilityVector::new(vec![0.25, 0.75]).unwrap()),
        ],
    )
    .unwrap();
    let target = TargetSet::from_indices(2, &[0]).unwrap();
    (metric, vec![f1, f2], target)
}

/// The singleton target `{i}` in a space of `n` elements.
pub fn singleton_target(n: usize, i: usize) -> Result<TargetSet> {
    TargetSet::from_indices(n, &[i])
}

/// The binary table that evaluates to 1 exactly at `i`.
pub fn indicator_resource(n: usize, i: usize) -> Result<InformationResource> {
    if i >= n {
        return Err(Error::InvalidParameter(format!(
            "indicator position {i} outside space of {n} elements"
        )));
    }
    let mut evals = vec![0u32; n];
    evals[i] = 1;
    InformationResource::binary(evals)
}

/// Puts all mass on the highest evaluation, lowest index on ties.
pub fn argmax_metric<S: Scalar>() -> DecomposableMetric<S> {
    DecomposableMetric::from_fn("argmax", |f| {
        let best = (0..f.n())
            .max_by(|&a, &b| f.evaluate(a).cmp(&f.evaluate(b)).then(b.cmp(&a)))
            .unwrap();
        ProbabilityVector::point_mass(f.n(), best)
    })
}

/// The joint distribution that pairs each singleton target `{i}` with its
/// indicator table, uniformly over `i`. The resource determines the target,
/// so the mutual information is the full `log2 n` bits.
pub fn informative_joint(n: usize) -> Result<JointDistribution> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "informative joint needs at least 2 elements, got {n}"
        )));
    }
    let p = 1.0 / n as f64;
    let entries = (0..n)
        .map(|i| Ok((singleton_target(n, i)?, indicator_resource(n, i)?, p)))
        .collect::<Result<Vec<_>>>()?;
    JointDistribution::new(entries)
}

/// `count` distinct random binary tables on `n` elements, reproducible from
/// the seed.
pub fn random_binary_resources(
    n: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<InformationResource>> {
    if n == 0 || count == 0 {
        return Err(Error::InvalidParameter(
            "random resources need a nonempty space and a positive count".into(),
        ));
    }
    let capacity = 1u128.checked_shl(n as u32).unwrap_or(u128::MAX);
    if count as u128 > capacity {
        return Err(Error::InvalidParameter(format!(
            "cannot draw {count} distinct binary tables on {n} elements"
        )));
    }
    let mut rng = seeded_rng(seed);
    let mut seen: BTreeSet<u128> = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let evals: Vec<u32> = (0..n).map(|_| rng.random_range(0..2u32)).collect();
        let resource = InformationResource::binary(evals)?;
        if seen.insert(resource.encode()) {
            out.push(resource);
        }
    }
    Ok(out)
}

/// A random joint distribution over all size-`k` targets and the given
/// resources, with cell mass drawn uniformly from the simplex.
pub fn random_joint(
    n: usize,
    k: usize,
    resources: &[InformationResource],
    seed: u64,
) -> Result<JointDistribution> {
    if resources.is_empty() {
        return Err(Error::InvalidParameter(
            "random joint needs a nonempty resource family".into(),
        ));
    }
    let targets: Vec<TargetSet> = enumerate_targets(n, Some(k))?.collect();
    let mut rng = seeded_rng(seed);
    let raw: Vec<f64> = (0..targets.len() * resources.len())
        .map(|_| {
            let u: f64 = rng.random();
            -(1.0 - u).ln()
        })
        .collect();
    let total: f64 = raw.iter().sum();
    let mut entries = Vec::with_capacity(raw.len());
    let mut idx = 0;
    for target in &targets {
        for resource in resources {
            entries.push((target.clone(), resource.clone(), raw[idx] / total));
            idx += 1;
        }
    }
    JointDistribution::new(entries)
}

/// A seeded metric, weighted resource support, and target, drawn together
/// for identity checks that must hold on arbitrary instances.
pub struct FutilityFixture<S: Scalar> {
    pub metric: DecomposableMetric<S>,
    pub resources: ResourceDistribution<S>,
    pub target: TargetSet,
}

/// Draws a random algorithm metric (standard algorithm, horizon up to 3,
/// random step weighting, exact mode), a support of up to four distinct
/// binary tables with rational weights, and a random nonempty target, all
/// derived from the seed.
pub fn random_futility_fixture<S: Scalar>(seed: u64) -> Result<FutilityFixture<S>> {
    let mut rng = seeded_rng(derive_seed(seed, 1));
    let n = rng.random_range(2..=5usize);
    let steps = rng.random_range(1..=3usize);
    let specs = standard_specs();
    let spec = &specs[rng.random_range(0..specs.len())];
    let alpha = match rng.random_range(0..3u32) {
        0 => AlphaWeighting::PerQuery,
        1 => AlphaWeighting::FinalQuery,
        _ => AlphaWeighting::Geometric { ratio: 0.5 },
    };
    let metric = DecomposableMetric::from_algorithm(
        make_algorithm(spec)?,
        steps,
        alpha,
        EstimationMode::Exact,
    );

    let support_size = rng.random_range(1..=4usize);
    let support = random_binary_resources(n, support_size, derive_seed(seed, 2))?;
    let counts: Vec<i64> = (0..support_size)
        .map(|_| rng.random_range(1..=8i64))
        .collect();
    let total: i64 = counts.iter().sum();
    let entries = support
        .into_iter()
        .zip(&counts)
        .map(|(f, c)| (f, S::from_ratio(*c, total)))
        .collect();
    let resources = ResourceDistribution::new(entries)?;

    let mask = rng.random_range(1..(1u64 << n)) as u32;
    let target = TargetSet::from_bitmask(n, mask)?;
    Ok(FutilityFixture {
        metric,
        resources,
        target,
    })
}
