//! Shared helpers for the integration suites.

#![allow(dead_code)]

use blackbox_search::{
    AlphaWeighting, InformationResource, Scalar, SearchAlgorithm, SearchHistory,
};

/// Expected strategy vector by flat enumeration of every full visit
/// sequence, with no branch sharing or pruning. Relies only on the chain
/// rule: a sequence's mass is the product of one-step probabilities along
/// it, and the chance that step `j` lands on `x` is the total mass of
/// sequences whose `j`-th visit is `x`.
pub fn oracle_strategy<S: Scalar>(
    algorithm: &SearchAlgorithm<S>,
    resource: &InformationResource,
    steps: usize,
    alpha: &AlphaWeighting,
) -> Vec<S> {
    let n = resource.n();
    let alpha_weights: Vec<S> = alpha.weights(steps).unwrap();
    let mut acc = vec![S::zero(); n];
    let mut seq = vec![0usize; steps];
    loop {
        let mut history = SearchHistory::empty();
        let mut mass = S::one();
        for &x in &seq {
            let dist = algorithm.next_distribution(&history, resource).unwrap();
            mass = mass * dist.weights()[x].clone();
            history.push(x, resource.evaluate(x));
        }
        // Summing full-sequence mass per visited coordinate reproduces the
        // per-step marginals: suffix probabilities always total one.
        for (j, &x) in seq.iter().enumerate() {
            acc[x] = acc[x].clone() + alpha_weights[j].clone() * mass.clone();
        }
        if !advance(&mut seq, n) {
            break;
        }
    }
    acc
}

fn advance(seq: &mut [usize], n: usize) -> bool {
    for d in (0..seq.len()).rev() {
        seq[d] += 1;
        if seq[d] < n {
            return true;
        }
        seq[d] = 0;
    }
    false
}
