//! One executor per subcommand. Each returns the CSV table to emit, the
//! verification reports whose conjunction decides the exit status, and an
//! optional threshold-sweep curve.

use std::fs::File;
use std::io::BufReader;

use blackbox_search::{
    bias, check_binomial_approx, check_max_satisfying_vectors, check_sauer_shelah, derive_seed,
    famine_favorable_resources, famine_favorable_targets, famine_of_forte, favorable_bias_measure,
    fraction_favorable_targets, futility_check, learning_under_dependence, make_algorithm,
    marginal_success, run_search, strategy_vector, success_probability, success_via_history,
    verify_nfl, AlgorithmSpec, DecomposableMetric, EstimationMode, Exact, JointDistribution,
    ProbabilityVector, Scalar, TargetFamily, VerificationReport,
};

use crate::config::{CliError, CliResult, Experiment, Mode};
use crate::output::{report_table, sig12, Table};

pub struct Outcome {
    pub table: Table,
    pub reports: Vec<VerificationReport>,
    pub plot: Option<Vec<(f64, f64)>>,
}

impl Outcome {
    fn reports_only(reports: Vec<VerificationReport>) -> Self {
        Outcome {
            table: report_table(&reports),
            reports,
            plot: None,
        }
    }

    fn with_plot(reports: Vec<VerificationReport>, plot: Option<Vec<(f64, f64)>>) -> Self {
        Outcome {
            table: report_table(&reports),
            reports,
            plot,
        }
    }
}

/// Seed streams, fixed so that every consumer draws from a distinct derived
/// seed regardless of which other consumers a run configures.
const STREAM_METRIC: u64 = 1 << 32;
const STREAM_CROSS_CHECK: u64 = (1 << 32) + 1024;
const STREAM_MEASURE: u64 = (1 << 33) + 1;

pub fn execute(name: &str, exp: &Experiment) -> CliResult<Outcome> {
    match name {
        "simulate" => dispatch_scalar(exp, simulate::<Exact>, simulate::<f64>),
        "strategy" => dispatch_scalar(exp, strategy::<Exact>, strategy::<f64>),
        "success" => dispatch_scalar(exp, success::<Exact>, success::<f64>),
        "bias" => dispatch_scalar(exp, bias_summary::<Exact>, bias_summary::<f64>),
        "verify-nfl" => dispatch_scalar(exp, nfl::<Exact>, nfl::<f64>),
        "verify-favorable-targets" => {
            dispatch_scalar(exp, favorable_targets::<Exact>, favorable_targets::<f64>)
        }
        "verify-famine-targets" => {
            dispatch_scalar(exp, famine_targets::<Exact>, famine_targets::<f64>)
        }
        "verify-forte" => dispatch_scalar(exp, forte::<Exact>, forte::<f64>),
        "verify-lud" => lud(exp),
        "verify-famine-resources" => {
            dispatch_scalar(exp, famine_resources::<Exact>, famine_resources::<f64>)
        }
        "verify-futility" => dispatch_scalar(exp, futility::<Exact>, futility::<f64>),
        "verify-bias-measure" => bias_measure(exp),
        "check-lemmas" => check_lemmas(exp),
        other => Err(CliError::Config(format!("unknown subcommand '{other}'"))),
    }
}

fn dispatch_scalar(
    exp: &Experiment,
    exact: impl Fn(&Experiment) -> CliResult<Outcome>,
    float: impl Fn(&Experiment) -> CliResult<Outcome>,
) -> CliResult<Outcome> {
    match exp.mode {
        Mode::Exact => exact(exp),
        Mode::Float | Mode::MonteCarlo => float(exp),
    }
}

/// Estimation mode for the `stream`-th estimator of the run.
fn estimation(exp: &Experiment, stream: u64) -> EstimationMode {
    match exp.mode {
        Mode::Exact | Mode::Float => EstimationMode::Exact,
        Mode::MonteCarlo => EstimationMode::MonteCarlo {
            runs: exp.runs(),
            seed: derive_seed(exp.seed, stream),
        },
    }
}

fn metric_for<S: Scalar>(
    exp: &Experiment,
    spec: &AlgorithmSpec,
    stream: u64,
) -> CliResult<DecomposableMetric<S>> {
    Ok(DecomposableMetric::from_algorithm(
        make_algorithm(spec)?,
        exp.steps,
        exp.alpha()?,
        estimation(exp, stream),
    ))
}

fn simulate<S: Scalar>(exp: &Experiment) -> CliResult<Outcome> {
    let algorithm = make_algorithm::<S>(exp.first_algorithm()?)?;
    let resource = exp.first_resource()?;
    let mut table = Table::new(vec!["trace", "step", "element", "evaluation"]);
    for trace_idx in 0..exp.traces() {
        let trace = run_search(
            &algorithm,
            &resource,
            exp.steps,
            derive_seed(exp.seed, trace_idx as u64),
        )?;
        for (step, &(element, evaluation)) in trace.history.steps().iter().enumerate() {
            table.rows.push(vec![
                trace_idx.to_string(),
                step.to_string(),
                element.to_string(),
                evaluation.to_string(),
            ]);
        }
    }
    Ok(Outcome {
        table,
        reports: Vec::new(),
        plot: None,
    })
}

fn strategy<S: Scalar>(exp: &Experiment) -> CliResult<Outcome> {
    let algorithm = make_algorithm::<S>(exp.first_algorithm()?)?;
    let resource = exp.first_resource()?;
    let sv = strategy_vector(
        &algorithm,
        &resource,
        exp.steps,
        &exp.alpha()?,
        estimation(exp, STREAM_METRIC),
    )?;
    let mut table = Table::new(vec!["element", "probability", "std-error"]);
    for (i, w) in sv.vector.weights().iter().enumerate() {
        let se = sv
            .std_error
            .as_ref()
            .map(|errors| sig12(errors[i]))
            .unwrap_or_default();
        table.rows.push(vec![i.to_string(), sig12(w.to_f64()), se]);
    }
    Ok(Outcome {
        table,
        reports: Vec::new(),
        plot: None,
    })
}

fn success<S: Scalar>(exp: &Experiment) -> CliResult<Outcome> {
    let spec = exp.first_algorithm()?;
    let algorithm = make_algorithm::<S>(spec)?;
    let resource = exp.first_resource()?;
    let target = exp.target()?;
    let sv = strategy_vector(
        &algorithm,
        &resource,
        exp.steps,
        &exp.alpha()?,
        estimation(exp, STREAM_METRIC),
    )?;
    let phi = success_probability(&target, &sv.vector)?;
    let via_history = success_via_history(
        &algorithm,
        &resource,
        &target,
        exp.steps,
        &exp.alpha()?,
        estimation(exp, STREAM_CROSS_CHECK),
    )?;
    let mut table = Table::new(vec![
        "algorithm",
        "resource",
        "target",
        "steps",
        "alpha",
        "mode",
        "success",
        "success-via-history",
    ]);
    table.rows.push(vec![
        spec.name(),
        resource.encode_hex(),
        format!("{:x}", target.bitmask()),
        exp.steps.to_string(),
        exp.alpha_label().to_string(),
        exp.mode.label().to_string(),
        sig12(phi.to_f64()),
        sig12(via_history.to_f64()),
    ]);
    Ok(Outcome {
        table,
        reports: Vec::new(),
        plot: None,
    })
}

fn bias_summary<S: Scalar>(exp: &Experiment) -> CliResult<Outcome> {
    let spec = exp.first_algorithm()?;
    let metric: DecomposableMetric<S> = metric_for(exp, spec, STREAM_METRIC)?;
    let distribution = exp.distribution::<S>()?;
    let target = exp.target()?;
    let b = bias(&metric, &distribution, &target)?;
    let marginal = marginal_success(&metric, &distribution, &target)?;
    let baseline = target.k() as f64 / target.n() as f64;
    let mut table = Table::new(vec![
        "algorithm",
        "mode",
        "target",
        "support-size",
        "baseline",
        "marginal-success",
        "bias",
    ]);
    table.rows.push(vec![
        spec.name(),
        exp.mode.label().to_string(),
        format!("{:x}", target.bitmask()),
        distribution.support_size().to_string(),
        sig12(baseline),
        sig12(marginal.to_f64()),
        sig12(b.to_f64()),
    ]);
    Ok(Outcome {
        table,
        reports: Vec::new(),
        plot: None,
    })
}

fn nfl<S: Scalar>(exp: &Experiment) -> CliResult<Outcome> {
    let family = TargetFamily::all_k_subsets(exp.require_n()?, exp.require_k()?)?;
    let resources = exp.resource_list()?;
    let mut reports = Vec::new();
    for (i, spec) in exp.algorithms()?.iter().enumerate() {
        let metric: DecomposableMetric<S> = metric_for(exp, spec, STREAM_METRIC + i as u64)?;
        reports.push(verify_nfl(&metric, &family, &resources)?);
    }
    Ok(Outcome::reports_only(reports))
}

fn favorable_targets<S: Scalar>(exp: &Experiment) -> CliResult<Outcome> {
    let metric: DecomposableMetric<S> = metric_for(exp, exp.first_algorithm()?, STREAM_METRIC)?;
    let resource = exp.first_resource()?;
    let report = fraction_favorable_targets(&metric, &resource, exp.require_b()?)?;
    Ok(Outcome::reports_only(vec![report]))
}

/// Runs `check` once at the configured threshold, and across the sweep grid
/// when plot data was requested. Sweep reports join the conjunction.
fn with_threshold_sweep(
    exp: &Experiment,
    check: impl Fn(f64) -> CliResult<VerificationReport>,
) -> CliResult<Outcome> {
    let mut reports = vec![check(exp.require_q_min()?)?];
    let plot = if exp.plot_data.is_some() {
        let mut points = Vec::new();
        for threshold in exp.thresholds() {
            let report = check(threshold)?;
            points.push((threshold, report.observed));
            reports.push(report);
        }
        Some(points)
    } else {
        None
    };
    Ok(Outcome::with_plot(reports, plot))
}

fn famine_targets<S: Scalar>(exp: &Experiment) -> CliResult<Outcome> {
    let metric: DecomposableMetric<S> = metric_for(exp, exp.first_algorithm()?, STREAM_METRIC)?;
    let resource = exp.first_resource()?;
    let k = exp.require_k()?;
    with_threshold_sweep(exp, |q_min| {
        Ok(famine_favorable_targets(&metric, &resource, k, q_min)?)
    })
}

fn forte<S: Scalar>(exp: &Experiment) -> CliResult<Outcome> {
    let metric: DecomposableMetric<S> = metric_for(exp, exp.first_algorithm()?, STREAM_METRIC)?;
    let n = exp.require_n()?;
    let k = exp.require_k()?;
    with_threshold_sweep(exp, |q_min| {
        Ok(famine_of_forte(&metric, n, k, exp.alphabet, q_min)?)
    })
}

fn famine_resources<S: Scalar>(exp: &Experiment) -> CliResult<Outcome> {
    let metric: DecomposableMetric<S> = metric_for(exp, exp.first_algorithm()?, STREAM_METRIC)?;
    let distribution = exp.distribution::<S>()?;
    let target = exp.target()?;
    with_threshold_sweep(exp, |q_min| {
        Ok(famine_favorable_resources(
            &metric,
            &distribution,
            &target,
            q_min,
        )?)
    })
}

fn futility<S: Scalar>(exp: &Experiment) -> CliResult<Outcome> {
    let metric: DecomposableMetric<S> = metric_for(exp, exp.first_algorithm()?, STREAM_METRIC)?;
    let distribution = exp.distribution::<S>()?;
    let target = exp.target()?;
    let report = futility_check(&metric, &distribution, &target)?;
    Ok(Outcome::reports_only(vec![report]))
}

/// Mutual-information bound; the information quantities are computed in
/// double precision, so the metric always is too.
fn lud(exp: &Experiment) -> CliResult<Outcome> {
    let metric: DecomposableMetric<f64> =
        metric_for(exp, exp.first_algorithm()?, STREAM_METRIC)?;
    let path = exp.joint.as_ref().ok_or_else(|| {
        CliError::Config("a joint distribution CSV is required ([verify].joint or --joint)".into())
    })?;
    let file = File::open(path).map_err(|e| {
        CliError::Config(format!("cannot read joint CSV {}: {e}", path.display()))
    })?;
    let joint = JointDistribution::from_csv(BufReader::new(file), exp.require_n()?, exp.alphabet)?;
    let report = learning_under_dependence(&metric, &joint)?;
    Ok(Outcome::reports_only(vec![report]))
}

/// Measure of weightings whose bias clears the threshold; inherently a
/// double-precision sampling estimate.
fn bias_measure(exp: &Experiment) -> CliResult<Outcome> {
    let metric: DecomposableMetric<f64> =
        metric_for(exp, exp.first_algorithm()?, STREAM_METRIC)?;
    let support = exp.resource_list()?;
    let target = exp.target()?;
    let samples = exp.samples;
    with_threshold_sweep(exp, |q_min| {
        Ok(favorable_bias_measure(
            &metric,
            &support,
            &target,
            q_min,
            samples,
            derive_seed(exp.seed, STREAM_MEASURE),
        )?)
    })
}

/// The three counting lemmas on their reference instances, overridable.
fn check_lemmas(exp: &Experiment) -> CliResult<Outcome> {
    let prefix_n = exp.n.map(|n| n as u64).unwrap_or(10);
    let depth = exp.d.unwrap_or(3);
    let growth_n = exp.n.map(|n| n as u64).unwrap_or(16);
    let bits = exp.b.unwrap_or(4);
    let vectors_n = exp.n.unwrap_or(10);
    let k = exp.k.unwrap_or(3);
    let epsilon = exp.epsilon.unwrap_or(0.3);
    let strategy = ProbabilityVector::<f64>::uniform(vectors_n);
    let reports = vec![
        check_sauer_shelah(prefix_n, depth)?,
        check_binomial_approx(growth_n, bits)?,
        check_max_satisfying_vectors(&strategy, k, &epsilon)?,
    ];
    Ok(Outcome::reports_only(reports))
}
