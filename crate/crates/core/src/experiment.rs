//! The three experiment families: echo distribution, per-kick `P(0)`, and
//! the FWHM sweep over ε.

use crate::distribution::{AnalysisResult, MomentumDistribution, OrderMetric};
use crate::ensemble::{ensemble_distribution, InitialEnsemble, DEFAULT_INITIAL_WIDTH};
use crate::error::{QkrError, Result};
use crate::sequence::{loschmidt_train_with, MidpointMode, PulseTrain};

pub const MIN_N_MAX: usize = 16;
pub const MAX_N_MAX: usize = 4096;

/// Parameters shared by all experiment runs.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentParams {
    pub kicks: usize,
    pub epsilon: f64,
    pub phi: f64,
    /// Initial momentum width, single-photon recoils.
    pub sigma_p: f64,
    /// Resolution width; `None` calibrates it so the convolved initial
    /// distribution has σ = 0.43 recoils.
    pub sigma_res: Option<f64>,
    pub members: usize,
    pub n_max: usize,
    pub midpoint_mode: MidpointMode,
    pub metric: OrderMetric,
    /// Measure `P(0)` on the convolved distribution.
    pub convolve_p0: bool,
}

impl Default for ExperimentParams {
    fn default() -> Self {
        ExperimentParams {
            kicks: 10,
            epsilon: 1.0,
            phi: 2.0,
            sigma_p: 0.05,
            sigma_res: None,
            members: 201,
            n_max: 128,
            midpoint_mode: MidpointMode::Replace,
            metric: OrderMetric::Height,
            convolve_p0: true,
        }
    }
}

impl ExperimentParams {
    pub fn validate(&self) -> Result<()> {
        if self.kicks < 2 || !self.kicks.is_multiple_of(2) {
            return Err(QkrError::Argument(format!(
                "kicks must be even and >= 2, got {}",
                self.kicks
            )));
        }
        if self.members == 0 || self.members.is_multiple_of(2) {
            return Err(QkrError::Argument(format!(
                "members must be odd and >= 1, got {}",
                self.members
            )));
        }
        if !(MIN_N_MAX..=MAX_N_MAX).contains(&self.n_max) {
            return Err(QkrError::Argument(format!(
                "nmax must lie in [{MIN_N_MAX}, {MAX_N_MAX}], got {}",
                self.n_max
            )));
        }
        if !(self.sigma_p.is_finite() && self.sigma_p >= 0.0) {
            return Err(QkrError::Argument(format!(
                "sigma_p must be >= 0, got {}",
                self.sigma_p
            )));
        }
        if let Some(s) = self.sigma_res {
            if !(s.is_finite() && s >= 0.0) {
                return Err(QkrError::Argument(format!(
                    "resolution must be >= 0, got {s}"
                )));
            }
        }
        if !self.epsilon.is_finite() || !self.phi.is_finite() {
            return Err(QkrError::Argument("epsilon and phi must be finite".into()));
        }
        Ok(())
    }

    pub fn ensemble(&self) -> Result<InitialEnsemble> {
        InitialEnsemble::gaussian(self.sigma_p, self.members)
    }

    pub fn train(&self) -> Result<PulseTrain> {
        self.train_at(self.epsilon)
    }

    fn train_at(&self, epsilon: f64) -> Result<PulseTrain> {
        loschmidt_train_with(self.kicks, epsilon, self.phi, self.midpoint_mode)
    }

    /// The resolution width actually used.
    pub fn resolution(&self, ensemble: &InitialEnsemble) -> Result<f64> {
        match self.sigma_res {
            Some(s) => Ok(s),
            None => ensemble.calibrate_resolution(DEFAULT_INITIAL_WIDTH),
        }
    }
}

/// Everything the echo run produces.
#[derive(Debug, Clone)]
pub struct EchoOutput {
    pub sigma_res: f64,
    pub initial: MomentumDistribution,
    pub initial_convolved: MomentumDistribution,
    pub final_raw: MomentumDistribution,
    pub final_wp: MomentumDistribution,
    pub final_convolved: MomentumDistribution,
    /// Analysis of the convolved final distribution. `fwhm` is NaN when no
    /// central peak can be measured.
    pub analysis: AnalysisResult,
    pub fwhm_unconvolved: f64,
    pub fwhm_initial_convolved: f64,
    pub kernel_under_resolved: bool,
}

fn fwhm_or_nan(d: &MomentumDistribution) -> f64 {
    d.fwhm_central_peak().unwrap_or(f64::NAN)
}

/// Runs the Loschmidt train over the ensemble and analyses the result.
pub fn echo(params: &ExperimentParams) -> Result<EchoOutput> {
    params.validate()?;
    let ensemble = params.ensemble()?;
    let sigma_res = params.resolution(&ensemble)?;
    let initial = ensemble.initial_distribution(params.n_max)?;
    let run = ensemble_distribution(&params.train()?, &ensemble, params.n_max, false)?;
    let final_raw = run.final_distribution;
    let final_wp = final_raw.normalize_w(&initial)?;
    let conv_final = final_raw.convolve_resolution(sigma_res)?;
    let conv_initial = initial.convolve_resolution(sigma_res)?;
    let final_convolved = conv_final.distribution;

    let p0_source = if params.convolve_p0 {
        &final_convolved
    } else {
        &final_raw
    };
    let order_heights = p0_source.order_heights(params.metric);
    let analysis = AnalysisResult {
        fwhm: fwhm_or_nan(&final_convolved),
        p0_fraction: p0_source.p0_fraction(params.metric),
        order_heights,
        per_kick: None,
    };
    Ok(EchoOutput {
        sigma_res,
        fwhm_unconvolved: fwhm_or_nan(&final_raw),
        fwhm_initial_convolved: fwhm_or_nan(&conv_initial.distribution),
        kernel_under_resolved: conv_final.kernel_under_resolved,
        initial_convolved: conv_initial.distribution,
        initial,
        final_raw,
        final_wp,
        final_convolved,
        analysis,
    })
}

/// `P(0)` after every kick of the train, as `(kick index from 1, fraction)`.
pub fn p0_sequence(params: &ExperimentParams) -> Result<Vec<(usize, f64)>> {
    params.validate()?;
    let ensemble = params.ensemble()?;
    let sigma_res = params.resolution(&ensemble)?;
    let run = ensemble_distribution(&params.train()?, &ensemble, params.n_max, true)?;
    run.per_kick
        .iter()
        .enumerate()
        .map(|(k, dist)| {
            let p0 = if params.convolve_p0 {
                dist.convolve_resolution(sigma_res)?
                    .distribution
                    .p0_fraction(params.metric)
            } else {
                dist.p0_fraction(params.metric)
            };
            Ok((k + 1, p0))
        })
        .collect()
}

/// One row of an ε sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub epsilon: f64,
    pub fwhm_convolved: f64,
    pub fwhm_unconvolved: f64,
    pub p0_fraction: f64,
}

/// Central-peak widths for each ε, in input order.
pub fn fwhm_sweep(params: &ExperimentParams, epsilons: &[f64]) -> Result<Vec<SweepRow>> {
    params.validate()?;
    if epsilons.is_empty() {
        return Err(QkrError::Argument("epsilon list is empty".into()));
    }
    let ensemble = params.ensemble()?;
    let sigma_res = params.resolution(&ensemble)?;
    epsilons
        .iter()
        .map(|&epsilon| {
            let run =
                ensemble_distribution(&params.train_at(epsilon)?, &ensemble, params.n_max, false)?;
            let raw = run.final_distribution;
            let conv = raw.convolve_resolution(sigma_res)?.distribution;
            let p0_source = if params.convolve_p0 { &conv } else { &raw };
            Ok(SweepRow {
                epsilon,
                fwhm_convolved: conv.fwhm_central_peak()?,
                fwhm_unconvolved: raw.fwhm_central_peak()?,
                p0_fraction: p0_source.p0_fraction(params.metric),
            })
        })
        .collect()
}
