//! `bbsearch`: black-box search metrics, conservation laws, and famine
//! bounds from the command line.
//!
//! Exit status: 0 when every contained verification passes, 1 when any
//! bound is violated (the offending report goes to stderr), 2 on
//! configuration errors — bad flags, missing inputs, cap or hypothesis
//! violations.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{CliResult, Experiment, Overrides};

#[derive(Parser)]
#[command(
    name = "bbsearch",
    version,
    about = "Black-box search metrics and their conservation-law verifiers",
    long_about = "Runs search algorithms over finite spaces, computes decomposable \
                  probability-of-success metrics exactly or by seeded Monte-Carlo \
                  estimation, and verifies the conservation laws and famine bounds \
                  that constrain them. Every subcommand accepts a TOML manifest via \
                  --config; flags override manifest values. Results are CSV with a \
                  header row, 12-significant-digit probabilities, and hex-encoded \
                  resources."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample search traces and emit element/evaluation rows
    Simulate(Overrides),
    /// Expected step-weighted query distribution of an algorithm
    Strategy(Overrides),
    /// Success probability of an algorithm on one target, two ways
    Success(Overrides),
    /// Bias of a resource distribution for a target
    Bias(Overrides),
    /// Conservation of success across a target family (per algorithm)
    VerifyNfl(Overrides),
    /// Fraction of targets favored by at least b bits
    VerifyFavorableTargets(Overrides),
    /// Famine bound for fixed-size targets on one resource
    VerifyFamineTargets(Overrides),
    /// Famine bound over target/resource pairs
    VerifyForte(Overrides),
    /// Information budget for success under target/resource dependence
    VerifyLud(Overrides),
    /// Famine bound for favorable resource distributions
    VerifyFamineResources(Overrides),
    /// Baseline-plus-bias split of expected success
    VerifyFutility(Overrides),
    /// Measure of resource weightings whose bias clears a threshold
    VerifyBiasMeasure(Overrides),
    /// The three counting lemmas on reference instances
    CheckLemmas(Overrides),
}

impl Command {
    fn parts(&self) -> (&'static str, &Overrides) {
        match self {
            Command::Simulate(o) => ("simulate", o),
            Command::Strategy(o) => ("strategy", o),
            Command::Success(o) => ("success", o),
            Command::Bias(o) => ("bias", o),
            Command::VerifyNfl(o) => ("verify-nfl", o),
            Command::VerifyFavorableTargets(o) => ("verify-favorable-targets", o),
            Command::VerifyFamineTargets(o) => ("verify-famine-targets", o),
            Command::VerifyForte(o) => ("verify-forte", o),
            Command::VerifyLud(o) => ("verify-lud", o),
            Command::VerifyFamineResources(o) => ("verify-famine-resources", o),
            Command::VerifyFutility(o) => ("verify-futility", o),
            Command::VerifyBiasMeasure(o) => ("verify-bias-measure", o),
            Command::CheckLemmas(o) => ("check-lemmas", o),
        }
    }
}

fn run(name: &'static str, flags: &Overrides) -> CliResult<bool> {
    let exp = Experiment::assemble(flags, name)?;
    let outcome = commands::execute(name, &exp)?;

    output::write_table(&outcome.table, exp.output.as_deref())?;
    match (&outcome.plot, &exp.plot_data) {
        (Some(points), Some(path)) => {
            output::write_table(&output::plot_table(points), Some(path))?;
        }
        (None, Some(_)) => {
            return Err(config::CliError::Config(format!(
                "subcommand '{name}' produces no plot data"
            )));
        }
        _ => {}
    }

    Ok(conjunction(&outcome.reports))
}

/// Exit status is the conjunction of every contained report; each violated
/// bound is announced on stderr with its full summary line.
fn conjunction(reports: &[blackbox_search::VerificationReport]) -> bool {
    let mut all_passed = true;
    for report in reports {
        if !report.passed {
            all_passed = false;
            eprintln!("bound violated -- {}", report.summary_line());
        }
    }
    all_passed
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, flags) = cli.command.parts();
    match run(name, flags) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("configuration error: {err}");
            ExitCode::from(2)
        }
    }
}
