use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use qkr_core::experiment::ExperimentParams;
use qkr_core::{MidpointMode, OrderMetric};
use serde::Deserialize;

use crate::error::CliError;

/// Flags shared by the simulation subcommands.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Number of kicks N (even)
    #[arg(long)]
    pub kicks: Option<usize>,
    /// Detuning ε from 4π; repeat for sweeps
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Vec<f64>,
    /// Kick strength φ_d
    #[arg(long)]
    pub phi: Option<f64>,
    /// Initial momentum width σ_p, recoils
    #[arg(long = "sigma-bec")]
    pub sigma_bec: Option<f64>,
    /// Resolution σ_res, recoils (default: calibrated to an initial width of 0.43)
    #[arg(long)]
    pub resolution: Option<f64>,
    /// Ensemble members M (odd)
    #[arg(long)]
    pub members: Option<usize>,
    /// Ladder half-size n_max
    #[arg(long)]
    pub nmax: Option<usize>,
    /// replace | append
    #[arg(long = "midpoint-mode")]
    pub midpoint_mode: Option<String>,
    /// height | integrated
    #[arg(long)]
    pub metric: Option<String>,
    /// Measure P(0) on the unconvolved distribution
    #[arg(long = "p0-unconvolved")]
    pub p0_unconvolved: bool,
    /// Output CSV path (default: stdout)
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// JSON file with any of the above as flat keys
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

/// Flat JSON config file; every key optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    kicks: Option<usize>,
    epsilon: Option<OneOrMany>,
    phi: Option<f64>,
    sigma_bec: Option<f64>,
    resolution: Option<f64>,
    members: Option<usize>,
    nmax: Option<usize>,
    midpoint_mode: Option<String>,
    metric: Option<String>,
    p0_unconvolved: Option<bool>,
    output: Option<PathBuf>,
}

impl FileConfig {
    fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    fn epsilons(&self) -> Option<Vec<f64>> {
        match &self.epsilon {
            Some(OneOrMany::One(x)) => Some(vec![*x]),
            Some(OneOrMany::Many(xs)) => Some(xs.clone()),
            None => None,
        }
    }
}

/// Fully resolved run configuration: flags over config file over defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ExperimentParams,
    pub epsilons: Vec<f64>,
    pub output: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<MidpointMode, CliError> {
    s.parse()
        .map_err(|e: qkr_core::QkrError| CliError::Usage(e.to_string()))
}

fn parse_metric(s: &str) -> Result<OrderMetric, CliError> {
    s.parse()
        .map_err(|e: qkr_core::QkrError| CliError::Usage(e.to_string()))
}

impl RunConfig {
    pub fn resolve(args: &RunArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let defaults = ExperimentParams::default();

        let epsilons = if !args.epsilon.is_empty() {
            args.epsilon.clone()
        } else if let Some(list) = file.epsilons() {
            list
        } else {
            vec![defaults.epsilon]
        };
        if epsilons.is_empty() {
            return Err(CliError::Usage("epsilon list is empty".into()));
        }

        let midpoint_mode = match args
            .midpoint_mode
            .as_deref()
            .or(file.midpoint_mode.as_deref())
        {
            Some(s) => parse_mode(s)?,
            None => defaults.midpoint_mode,
        };
        let metric = match args.metric.as_deref().or(file.metric.as_deref()) {
            Some(s) => parse_metric(s)?,
            None => defaults.metric,
        };
        let p0_unconvolved = args.p0_unconvolved || file.p0_unconvolved.unwrap_or(false);

        let params = ExperimentParams {
            kicks: args.kicks.or(file.kicks).unwrap_or(defaults.kicks),
            epsilon: epsilons[0],
            phi: args.phi.or(file.phi).unwrap_or(defaults.phi),
            sigma_p: args
                .sigma_bec
                .or(file.sigma_bec)
                .unwrap_or(defaults.sigma_p),
            sigma_res: args.resolution.or(file.resolution).or(defaults.sigma_res),
            members: args.members.or(file.members).unwrap_or(defaults.members),
            n_max: args.nmax.or(file.nmax).unwrap_or(defaults.n_max),
            midpoint_mode,
            metric,
            convolve_p0: !p0_unconvolved,
        };
        params
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        if epsilons.iter().any(|e| !e.is_finite()) {
            return Err(CliError::Usage("epsilon values must be finite".into()));
        }
        Ok(RunConfig {
            params,
            epsilons,
            output: args.output.clone().or(file.output),
        })
    }

    /// For commands that take exactly one ε.
    pub fn require_single_epsilon(&self) -> Result<(), CliError> {
        if self.epsilons.len() == 1 {
            Ok(())
        } else {
            Err(CliError::Usage(format!(
                "this command takes a single --epsilon, got {}",
                self.epsilons.len()
            )))
        }
    }
}
