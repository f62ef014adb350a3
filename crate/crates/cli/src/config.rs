//! Experiment configuration: an optional TOML manifest merged with
//! command-line flags (flags win), validated into the concrete inputs each
//! subcommand needs before anything runs.

use std::fmt;
use std::fs;
use std::path::PathBuf;

use clap::Args;
use serde::Deserialize;

use blackbox_search::{
    AlgorithmSpec, AlphaWeighting, InformationResource, ResourceDistribution, Scalar, TargetSet,
};

/// Errors that prevent an experiment from producing a verdict; they all map
/// to exit status 2.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(blackbox_search::Error),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::Core(err) => write!(f, "{err}"),
            CliError::Io(err) => write!(f, "i/o failure: {err}"),
        }
    }
}

impl From<blackbox_search::Error> for CliError {
    fn from(err: blackbox_search::Error) -> Self {
        CliError::Core(err)
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err)
    }
}

impl From<csv::Error> for CliError {
    fn from(err: csv::Error) -> Self {
        CliError::Config(format!("csv write failed: {err}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn config_err<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Config(msg.into()))
}

/// Numeric regime for an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Arbitrary-precision rationals with full history-tree enumeration.
    #[default]
    Exact,
    /// Double precision with full history-tree enumeration.
    Float,
    /// Double precision with seeded sampling.
    MonteCarlo,
}

impl Mode {
    fn parse(s: &str) -> CliResult<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            "monte-carlo" => Ok(Mode::MonteCarlo),
            other => config_err(format!(
                "unknown mode '{other}' (expected exact, float, or monte-carlo)"
            )),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
            Mode::MonteCarlo => "monte-carlo",
        }
    }
}

/// Command-line overrides shared by every subcommand. Any value given here
/// takes precedence over the manifest named by `--config`.
#[derive(Args, Debug, Clone, Default)]
pub struct Overrides {
    /// TOML experiment manifest; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed; every random draw derives from it
    #[arg(long)]
    pub seed: Option<u64>,
    /// Numeric regime: exact, float, or monte-carlo
    #[arg(long)]
    pub mode: Option<String>,
    /// Monte-Carlo run count (also the trace count for simulate)
    #[arg(long)]
    pub runs: Option<usize>,
    /// Search-space size
    #[arg(long)]
    pub n: Option<usize>,
    /// Target cardinality
    #[arg(long)]
    pub k: Option<usize>,
    /// Query horizon
    #[arg(long)]
    pub steps: Option<usize>,
    /// Step weighting: per-query, final-query, geometric, or custom
    #[arg(long)]
    pub alpha: Option<String>,
    /// Ratio for the geometric weighting
    #[arg(long)]
    pub ratio: Option<f64>,
    /// Comma-separated custom step weights summing to 1, e.g. 0.25,0.75
    #[arg(long)]
    pub alpha_weights: Option<String>,
    /// Algorithm as kind[:parameter], e.g. uniform, point-mass:0,
    /// epsilon-greedy:0.25; repeat for several
    #[arg(long = "algorithm")]
    pub algorithms: Vec<String>,
    /// Hex-encoded evaluation table; repeat for several
    #[arg(long = "resource")]
    pub resources: Vec<String>,
    /// Enumerate every evaluation table over the alphabet instead of
    /// listing them
    #[arg(long)]
    pub enumerate: bool,
    /// Evaluation alphabet size (default 2)
    #[arg(long)]
    pub alphabet: Option<u32>,
    /// Comma-separated resource weights (normalized automatically)
    #[arg(long)]
    pub weights: Option<String>,
    /// Comma-separated target element indices, e.g. 0,3
    #[arg(long)]
    pub target: Option<String>,
    /// Success threshold in (0, 1]
    #[arg(long)]
    pub q_min: Option<f64>,
    /// Advantage threshold in bits (>= 3)
    #[arg(long)]
    pub b: Option<u32>,
    /// Simplex sample count for the bias-measure verifier (>= 10000)
    #[arg(long)]
    pub samples: Option<usize>,
    /// Prefix depth for the first counting lemma
    #[arg(long)]
    pub d: Option<u64>,
    /// Per-target threshold for the satisfying-vector lemma
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// CSV file with target,resource,probability rows for verify-lud
    #[arg(long)]
    pub joint: Option<PathBuf>,
    /// Write the CSV table here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Write a threshold-sweep curve (two-column CSV) here
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
    /// Comma-separated thresholds for the sweep (default 0.05..0.95)
    #[arg(long)]
    pub plot_thresholds: Option<String>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub subcommand: Option<String>,
    pub seed: Option<u64>,
    pub mode: Option<String>,
    pub runs: Option<usize>,
    pub output: Option<PathBuf>,
    pub plot_data: Option<PathBuf>,
    pub target: Option<Vec<usize>>,
    pub space: Option<SpaceSection>,
    pub metric: Option<MetricSection>,
    pub algorithms: Option<Vec<AlgorithmEntry>>,
    pub resources: Option<ResourceSection>,
    pub verify: Option<VerifySection>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SpaceSection {
    pub n: Option<usize>,
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct MetricSection {
    pub steps: Option<usize>,
    pub alpha: Option<String>,
    pub ratio: Option<f64>,
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct AlgorithmEntry {
    pub kind: String,
    pub index: Option<usize>,
    pub epsilon: Option<f64>,
    pub temperature: Option<f64>,
}

impl AlgorithmEntry {
    fn to_spec(&self) -> CliResult<AlgorithmSpec> {
        let extra = |field: &str, ok: bool| {
            if ok {
                Ok(())
            } else {
                config_err::<()>(format!(
                    "algorithm kind '{}' does not take '{field}'",
                    self.kind
                ))
            }
        };
        match self.kind.as_str() {
            "uniform" | "greedy" | "history-avoiding" => {
                extra("index", self.index.is_none())?;
                extra("epsilon", self.epsilon.is_none())?;
                extra("temperature", self.temperature.is_none())?;
                Ok(match self.kind.as_str() {
                    "uniform" => AlgorithmSpec::Uniform,
                    "greedy" => AlgorithmSpec::Greedy,
                    _ => AlgorithmSpec::HistoryAvoiding,
                })
            }
            "point-mass" => {
                extra("epsilon", self.epsilon.is_none())?;
                extra("temperature", self.temperature.is_none())?;
                match self.index {
                    Some(index) => Ok(AlgorithmSpec::PointMass(index)),
                    None => config_err("algorithm 'point-mass' needs an 'index'"),
                }
            }
            "epsilon-greedy" => {
                extra("index", self.index.is_none())?;
                extra("temperature", self.temperature.is_none())?;
                match self.epsilon {
                    Some(epsilon) => Ok(AlgorithmSpec::EpsilonGreedy { epsilon }),
                    None => config_err("algorithm 'epsilon-greedy' needs an 'epsilon'"),
                }
            }
            "fitness-proportional" => {
                extra("index", self.index.is_none())?;
                extra("epsilon", self.epsilon.is_none())?;
                match self.temperature {
                    Some(temperature) => {
                        Ok(AlgorithmSpec::FitnessProportional { temperature })
                    }
                    None => {
                        config_err("algorithm 'fitness-proportional' needs a 'temperature'")
                    }
                }
            }
            other => config_err(format!(
                "unknown algorithm kind '{other}' (expected uniform, point-mass, greedy, \
                 history-avoiding, epsilon-greedy, or fitness-proportional)"
            )),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ResourceSection {
    pub enumerate: Option<bool>,
    pub alphabet: Option<u32>,
    pub explicit: Option<Vec<String>>,
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct VerifySection {
    pub b: Option<u32>,
    pub q_min: Option<f64>,
    pub samples: Option<usize>,
    pub d: Option<u64>,
    pub epsilon: Option<f64>,
    pub joint: Option<PathBuf>,
    pub plot_thresholds: Option<Vec<f64>>,
}

fn parse_algorithm_flag(s: &str) -> CliResult<AlgorithmSpec> {
    let (kind, param) = match s.split_once(':') {
        Some((k, p)) => (k, Some(p)),
        None => (s, None),
    };
    let need = |what: &str| -> CliResult<&str> {
        param.ok_or_else(|| {
            CliError::Config(format!("algorithm '{kind}' needs a parameter: {kind}:{what}"))
        })
    };
    let bare = |spec: AlgorithmSpec| -> CliResult<AlgorithmSpec> {
        if param.is_some() {
            config_err(format!("algorithm '{kind}' takes no parameter"))
        } else {
            Ok(spec)
        }
    };
    match kind {
        "uniform" => bare(AlgorithmSpec::Uniform),
        "greedy" => bare(AlgorithmSpec::Greedy),
        "history-avoiding" => bare(AlgorithmSpec::HistoryAvoiding),
        "point-mass" => {
            let p = need("INDEX")?;
            let index = p
                .parse()
                .map_err(|e| CliError::Config(format!("bad point-mass index '{p}': {e}")))?;
            Ok(AlgorithmSpec::PointMass(index))
        }
        "epsilon-greedy" => {
            let p = need("EPSILON")?;
            let epsilon = p
                .parse()
                .map_err(|e| CliError::Config(format!("bad epsilon '{p}': {e}")))?;
            Ok(AlgorithmSpec::EpsilonGreedy { epsilon })
        }
        "fitness-proportional" => {
            let p = need("TEMPERATURE")?;
            let temperature = p
                .parse()
                .map_err(|e| CliError::Config(format!("bad temperature '{p}': {e}")))?;
            Ok(AlgorithmSpec::FitnessProportional { temperature })
        }
        other => config_err(format!(
            "unknown algorithm kind '{other}' (expected uniform, point-mass, greedy, \
             history-avoiding, epsilon-greedy, or fitness-proportional)"
        )),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> CliResult<Vec<T>>
where
    T::Err: fmt::Display,
{
    s.split(',')
        .map(|item| {
            item.trim().parse::<T>().map_err(|e| {
                CliError::Config(format!("bad {what} entry '{}': {e}", item.trim()))
            })
        })
        .collect()
}

/// A fully merged experiment description. Fields that a subcommand does not
/// need may stay empty; the accessors below enforce presence with a message
/// naming both the manifest key and the flag.
#[derive(Debug, Default)]
pub struct Experiment {
    pub seed: u64,
    pub mode: Mode,
    runs: Option<usize>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub steps: usize,
    alpha_name: String,
    ratio: Option<f64>,
    alpha_weights: Option<Vec<f64>>,
    algorithms: Vec<AlgorithmSpec>,
    resource_codes: Vec<String>,
    pub enumerate: bool,
    pub alphabet: u32,
    resource_weights: Option<Vec<f64>>,
    target_indices: Option<Vec<usize>>,
    pub q_min: Option<f64>,
    pub b: Option<u32>,
    pub samples: usize,
    pub d: Option<u64>,
    pub epsilon: Option<f64>,
    pub joint: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub plot_data: Option<PathBuf>,
    plot_thresholds: Option<Vec<f64>>,
}

impl Experiment {
    /// Merges the manifest (if any) with the flags; flags take precedence.
    pub fn assemble(flags: &Overrides, subcommand: &str) -> CliResult<Self> {
        let file: FileConfig = match &flags.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    CliError::Config(format!("cannot read config {}: {e}", path.display()))
                })?;
                toml::from_str(&text).map_err(|e| {
                    CliError::Config(format!("bad config {}: {e}", path.display()))
                })?
            }
            None => FileConfig::default(),
        };
        if let Some(declared) = &file.subcommand {
            if declared != subcommand {
                return config_err(format!(
                    "manifest declares subcommand '{declared}' but '{subcommand}' was invoked"
                ));
            }
        }

        let space = file.space.unwrap_or_default();
        let metric = file.metric.unwrap_or_default();
        let res = file.resources.unwrap_or_default();
        let verify = file.verify.unwrap_or_default();

        let mut algorithms = Vec::new();
        if !flags.algorithms.is_empty() {
            for s in &flags.algorithms {
                algorithms.push(parse_algorithm_flag(s)?);
            }
        } else if let Some(entries) = &file.algorithms {
            for entry in entries {
                algorithms.push(entry.to_spec()?);
            }
        }

        let mode = match flags.mode.as_deref().or(file.mode.as_deref()) {
            Some(s) => Mode::parse(s)?,
            None => Mode::Exact,
        };

        let alpha_weights = match &flags.alpha_weights {
            Some(s) => Some(parse_list::<f64>(s, "alpha weight")?),
            None => metric.weights,
        };
        let resource_weights = match &flags.weights {
            Some(s) => Some(parse_list::<f64>(s, "resource weight")?),
            None => res.weights,
        };
        let target_indices = match &flags.target {
            Some(s) => Some(parse_list::<usize>(s, "target index")?),
            None => file.target,
        };
        let plot_thresholds = match &flags.plot_thresholds {
            Some(s) => Some(parse_list::<f64>(s, "plot threshold")?),
            None => verify.plot_thresholds,
        };

        Ok(Experiment {
            seed: flags.seed.or(file.seed).unwrap_or(0),
            mode,
            runs: flags.runs.or(file.runs),
            n: flags.n.or(space.n),
            k: flags.k.or(space.k),
            steps: flags.steps.or(metric.steps).unwrap_or(1),
            alpha_name: flags
                .alpha
                .clone()
                .or(metric.alpha)
                .unwrap_or_else(|| "per-query".into()),
            ratio: flags.ratio.or(metric.ratio),
            alpha_weights,
            algorithms,
            resource_codes: if flags.resources.is_empty() {
                res.explicit.unwrap_or_default()
            } else {
                flags.resources.clone()
            },
            enumerate: flags.enumerate || res.enumerate.unwrap_or(false),
            alphabet: flags.alphabet.or(res.alphabet).unwrap_or(2),
            resource_weights,
            target_indices,
            q_min: flags.q_min.or(verify.q_min),
            b: flags.b.or(verify.b),
            samples: flags.samples.or(verify.samples).unwrap_or(100_000),
            d: flags.d.or(verify.d),
            epsilon: flags.epsilon.or(verify.epsilon),
            joint: flags.joint.clone().or(verify.joint),
            output: flags.output.clone().or(file.output),
            plot_data: flags.plot_data.clone().or(file.plot_data),
            plot_thresholds,
        })
    }

    pub fn require_n(&self) -> CliResult<usize> {
        self.n
            .ok_or_else(|| CliError::Config("space size is required ([space].n or --n)".into()))
    }

    pub fn require_k(&self) -> CliResult<usize> {
        self.k.ok_or_else(|| {
            CliError::Config("target cardinality is required ([space].k or --k)".into())
        })
    }

    pub fn require_q_min(&self) -> CliResult<f64> {
        self.q_min.ok_or_else(|| {
            CliError::Config("success threshold is required ([verify].q-min or --q-min)".into())
        })
    }

    pub fn require_b(&self) -> CliResult<u32> {
        self.b.ok_or_else(|| {
            CliError::Config("advantage threshold is required ([verify].b or --b)".into())
        })
    }

    /// Monte-Carlo run count with the estimator default.
    pub fn runs(&self) -> usize {
        self.runs.unwrap_or(100_000)
    }

    /// Trace count for simulate: one unless asked for more.
    pub fn traces(&self) -> usize {
        self.runs.unwrap_or(1)
    }

    pub fn alpha(&self) -> CliResult<AlphaWeighting> {
        match self.alpha_name.as_str() {
            "per-query" => Ok(AlphaWeighting::PerQuery),
            "final-query" => Ok(AlphaWeighting::FinalQuery),
            "geometric" => match self.ratio {
                Some(ratio) => Ok(AlphaWeighting::Geometric { ratio }),
                None => config_err(
                    "geometric weighting needs a ratio ([metric].ratio or --ratio)",
                ),
            },
            "custom" => match &self.alpha_weights {
                Some(w) if w.len() == self.steps => {
                    Ok(AlphaWeighting::Custom(w.clone()))
                }
                Some(w) => config_err(format!(
                    "custom weighting needs exactly {} weights (one per step), got {}",
                    self.steps,
                    w.len()
                )),
                None => config_err(
                    "custom weighting needs weights ([metric].weights or --alpha-weights)",
                ),
            },
            other => config_err(format!(
                "unknown step weighting '{other}' (expected per-query, final-query, \
                 geometric, or custom)"
            )),
        }
    }

    pub fn alpha_label(&self) -> &str {
        &self.alpha_name
    }

    pub fn algorithms(&self) -> CliResult<&[AlgorithmSpec]> {
        if self.algorithms.is_empty() {
            config_err("at least one algorithm is required ([[algorithms]] or --algorithm)")
        } else {
            Ok(&self.algorithms)
        }
    }

    pub fn first_algorithm(&self) -> CliResult<&AlgorithmSpec> {
        Ok(&self.algorithms()?[0])
    }

    /// The configured resource list: explicit hex codes, or the full
    /// enumeration over the alphabet.
    pub fn resource_list(&self) -> CliResult<Vec<InformationResource>> {
        if !self.resource_codes.is_empty() {
            let n = self.require_n()?;
            return self
                .resource_codes
                .iter()
                .map(|code| {
                    InformationResource::decode_hex(n, self.alphabet, code)
                        .map_err(CliError::from)
                })
                .collect();
        }
        if self.enumerate {
            let n = self.require_n()?;
            let resources: Vec<InformationResource> =
                blackbox_search::enumerate_resources(n, self.alphabet)?.collect();
            return Ok(resources);
        }
        config_err(
            "no resources configured ([resources].explicit, [resources].enumerate, \
             --resource, or --enumerate)",
        )
    }

    pub fn first_resource(&self) -> CliResult<InformationResource> {
        let mut list = self.resource_list()?;
        Ok(list.swap_remove(0))
    }

    /// Resource distribution over the configured list: explicit weights
    /// normalized in the target arithmetic, uniform otherwise.
    pub fn distribution<S: Scalar>(&self) -> CliResult<ResourceDistribution<S>> {
        let resources = self.resource_list()?;
        match &self.resource_weights {
            None => Ok(ResourceDistribution::uniform(resources)?),
            Some(raw) => {
                if raw.len() != resources.len() {
                    return config_err(format!(
                        "got {} resource weights for {} resources",
                        raw.len(),
                        resources.len()
                    ));
                }
                if raw.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
                    return config_err("resource weights must be finite and nonnegative");
                }
                let total: S = blackbox_search::scalar::sum(
                    &raw.iter()
                        .map(|w| S::from_f64_lossless(*w))
                        .collect::<Vec<S>>(),
                );
                if total.to_f64() <= 0.0 {
                    return config_err("resource weights must not all be zero");
                }
                let weights: Vec<S> = raw
                    .iter()
                    .map(|w| S::from_f64_lossless(*w) / total.clone())
                    .collect();
                Ok(ResourceDistribution::new(
                    resources.into_iter().zip(weights).collect(),
                )?)
            }
        }
    }

    pub fn target(&self) -> CliResult<TargetSet> {
        let n = self.require_n()?;
        match &self.target_indices {
            Some(indices) => Ok(TargetSet::from_indices(n, indices)?),
            None => config_err("a target is required (target = [..] or --target)"),
        }
    }

    /// Thresholds for plot sweeps; the default grid covers (0, 1).
    pub fn thresholds(&self) -> Vec<f64> {
        match &self.plot_thresholds {
            Some(list) => list.clone(),
            None => (1..=19).map(|i| f64::from(i) / 20.0).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags() -> Overrides {
        Overrides::default()
    }

    #[test]
    fn defaults_fill_in() {
        let exp = Experiment::assemble(&flags(), "strategy").unwrap();
        assert_eq!(exp.seed, 0);
        assert_eq!(exp.mode, Mode::Exact);
        assert_eq!(exp.steps, 1);
        assert_eq!(exp.alphabet, 2);
        assert_eq!(exp.traces(), 1);
        assert_eq!(exp.runs(), 100_000);
        assert!(exp.algorithms().is_err());
        assert!(exp.target().is_err());
    }

    #[test]
    fn algorithm_flag_parsing() {
        assert_eq!(
            parse_algorithm_flag("uniform").unwrap(),
            AlgorithmSpec::Uniform
        );
        assert_eq!(
            parse_algorithm_flag("point-mass:3").unwrap(),
            AlgorithmSpec::PointMass(3)
        );
        assert_eq!(
            parse_algorithm_flag("epsilon-greedy:0.25").unwrap(),
            AlgorithmSpec::EpsilonGreedy { epsilon: 0.25 }
        );
        assert!(parse_algorithm_flag("uniform:1").is_err());
        assert!(parse_algorithm_flag("point-mass").is_err());
        assert!(parse_algorithm_flag("annealing").is_err());
    }

    #[test]
    fn flags_override_nothing_burns() {
        let mut ov = flags();
        ov.n = Some(4);
        ov.algorithms = vec!["greedy".into()];
        ov.resources = vec!["3".into()];
        let exp = Experiment::assemble(&ov, "strategy").unwrap();
        assert_eq!(exp.require_n().unwrap(), 4);
        let list = exp.resource_list().unwrap();
        assert_eq!(list.len(), 1);
        assert_eq!(list[0].encode_hex(), "3");
    }

    #[test]
    fn custom_alpha_requires_matching_length() {
        let mut ov = flags();
        ov.alpha = Some("custom".into());
        ov.alpha_weights = Some("0.5,0.5".into());
        ov.steps = Some(2);
        let exp = Experiment::assemble(&ov, "strategy").unwrap();
        assert!(exp.alpha().is_ok());
        ov.steps = Some(3);
        let exp = Experiment::assemble(&ov, "strategy").unwrap();
        assert!(exp.alpha().is_err());
    }

    #[test]
    fn mode_names() {
        assert_eq!(Mode::parse("exact").unwrap(), Mode::Exact);
        assert_eq!(Mode::parse("float").unwrap(), Mode::Float);
        assert_eq!(Mode::parse("monte-carlo").unwrap(), Mode::MonteCarlo);
        assert!(Mode::parse("quantum").is_err());
    }
}
