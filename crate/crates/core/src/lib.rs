//! Black-box search over finite spaces, with exact and Monte-Carlo
//! estimation of decomposable success metrics and verifiers for the
//! conservation and famine bounds that govern them.

pub mod algorithms;
pub mod bias;
pub mod error;
pub mod fixtures;
pub mod info;
pub mod metrics;
pub mod prob;
pub mod scalar;
pub mod search;
pub mod space;
pub mod verify;

pub use algorithms::{make_algorithm, standard_specs, AlgorithmSpec};
pub use bias::{average_strategy, bias, marginal_success, ResourceDistribution};
pub use error::{Error, Result};
pub use fixtures::{
    argmax_metric, indicator_resource, informative_joint, mirrored_pair, opposed_bias_fixture,
    random_binary_resources, random_futility_fixture, random_joint, singleton_target,
    standard_resources, FutilityFixture,
};
pub use info::{
    endogenous_information, entropy, kl_divergence, JointDistribution,
};
pub use metrics::{
    active_information, decomposability_check, final_query_success, per_query_success,
    strategy_vector, success_probability, success_via_history, AlphaWeighting,
    DecomposableMetric, EstimationMode, StrategyVector,
};
pub use prob::ProbabilityVector;
pub use scalar::{Exact, Scalar};
pub use search::{derive_seed, run_search, SearchAlgorithm, SearchHistory, SearchTrace};
pub use space::{
    enumerate_resources, enumerate_targets, InformationResource, SearchSpace, TargetSet,
};
pub use verify::{
    check_binomial_approx, check_max_satisfying_vectors, check_sauer_shelah,
    famine_favorable_resources, famine_favorable_targets, famine_of_forte,
    favorable_bias_measure, fraction_favorable_targets, futility_check,
    learning_under_dependence, verify_nfl, DetailRow, TargetFamily, VerificationReport,
};
