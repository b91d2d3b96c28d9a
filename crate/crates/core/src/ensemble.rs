//! Incoherent quasimomentum ensembles standing in for the finite momentum
//! width of the initial condensate.
//!
//! Member `j` of an `M`-member ensemble has quasimomentum
//! `β_j = −½ + (j + ½)/M` and Gaussian weight in `p = 2β_j` recoils. After
//! evolution its populations land at `p = 2(n + β_j)`, so the members
//! interleave into a single uniform grid of spacing `2/M` recoils.

use crate::distribution::{MomentumDistribution, Normalization};
use crate::error::{QkrError, Result};
use crate::propagator::SplitOperator;
use crate::sequence::{run_with, PulseTrain, Trajectory};
use crate::state::QuantumState;

/// Convolved initial width the default resolution is calibrated to, in recoils.
pub const DEFAULT_INITIAL_WIDTH: f64 = 0.43;

#[derive(Debug, Clone, PartialEq)]
pub struct InitialEnsemble {
    sigma_p: f64,
    betas: Vec<f64>,
    weights: Vec<f64>,
}

impl InitialEnsemble {
    /// `members` odd so that `β = 0` is sampled; `sigma_p` in single-photon recoils.
    pub fn gaussian(sigma_p: f64, members: usize) -> Result<Self> {
        if members == 0 || members.is_multiple_of(2) {
            return Err(QkrError::Argument(format!(
                "ensemble size must be odd and positive, got {members}"
            )));
        }
        if !sigma_p.is_finite() || sigma_p < 0.0 {
            return Err(QkrError::Domain(format!(
                "sigma_p must be finite and >= 0, got {sigma_p}"
            )));
        }
        let m = members as f64;
        let betas: Vec<f64> = (0..members).map(|j| -0.5 + (j as f64 + 0.5) / m).collect();
        let raw: Vec<f64> = if sigma_p == 0.0 {
            betas
                .iter()
                .map(|&b| if b == 0.0 { 1.0 } else { 0.0 })
                .collect()
        } else {
            betas
                .iter()
                .map(|&b| {
                    let p = 2.0 * b;
                    (-p * p / (2.0 * sigma_p * sigma_p)).exp()
                })
                .collect()
        };
        let total: f64 = raw.iter().sum();
        let weights = raw.into_iter().map(|w| w / total).collect();
        Ok(InitialEnsemble {
            sigma_p,
            betas,
            weights,
        })
    }

    /// Same quasimomentum grid with caller-supplied weights, renormalized to sum 1.
    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.betas.len() {
            return Err(QkrError::Shape(format!(
                "{} weights for {} members",
                weights.len(),
                self.betas.len()
            )));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(QkrError::Domain("weights must be finite and >= 0".into()));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(QkrError::Domain("weights sum to zero".into()));
        }
        Ok(InitialEnsemble {
            sigma_p: self.sigma_p,
            betas: self.betas.clone(),
            weights: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn sigma_p(&self) -> f64 {
        self.sigma_p
    }

    pub fn members(&self) -> usize {
        self.betas.len()
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Grid spacing of the combined distribution, `2/M` recoils.
    pub fn spacing(&self) -> f64 {
        2.0 / self.members() as f64
    }

    /// Standard deviation of the sampled weights in recoils.
    pub fn sampled_width(&self) -> f64 {
        let mean: f64 = self
            .betas
            .iter()
            .zip(&self.weights)
            .map(|(b, w)| 2.0 * b * w)
            .sum();
        self.betas
            .iter()
            .zip(&self.weights)
            .map(|(b, w)| (2.0 * b - mean).powi(2) * w)
            .sum::<f64>()
            .sqrt()
    }

    /// Gaussian resolution that widens the sampled initial distribution to
    /// standard deviation `target` (variances add under convolution).
    pub fn calibrate_resolution(&self, target: f64) -> Result<f64> {
        let own = self.sampled_width();
        if !target.is_finite() || target < own {
            return Err(QkrError::Domain(format!(
                "target width {target} is below the ensemble's own width {own}"
            )));
        }
        Ok((target * target - own * own).sqrt())
    }

    /// The ensemble before any kick, on the grid used for `n_max`.
    pub fn initial_distribution(&self, n_max: usize) -> Result<MomentumDistribution> {
        Ok(ensemble_distribution(&PulseTrain::empty(), self, n_max, false)?.final_distribution)
    }
}

/// Combined distribution after a train, plus one distribution per kick when recorded.
#[derive(Debug, Clone)]
pub struct EnsembleRun {
    pub final_distribution: MomentumDistribution,
    pub per_kick: Vec<MomentumDistribution>,
}

fn member_grid(ens: &InitialEnsemble, n_max: usize) -> Vec<f64> {
    let m = ens.members();
    let mut grid = Vec::with_capacity(2 * n_max * m);
    for n in -(n_max as i64)..n_max as i64 {
        for &b in ens.betas() {
            grid.push(2.0 * (n as f64 + b));
        }
    }
    grid
}

fn evolve_member(
    op: &mut SplitOperator,
    train: &PulseTrain,
    beta: f64,
    n_max: usize,
    record: bool,
) -> Result<Trajectory> {
    let state = QuantumState::plane_wave(0, beta, n_max)?;
    run_with(op, state, train, record)
}

#[cfg(feature = "parallel")]
fn evolve_all(
    train: &PulseTrain,
    ens: &InitialEnsemble,
    n_max: usize,
    record: bool,
) -> Vec<Option<Result<Trajectory>>> {
    use rayon::prelude::*;
    ens.betas()
        .par_iter()
        .zip(ens.weights().par_iter())
        .map_init(
            || SplitOperator::new(n_max),
            |op, (&beta, &w)| (w > 0.0).then(|| evolve_member(op, train, beta, n_max, record)),
        )
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn evolve_all(
    train: &PulseTrain,
    ens: &InitialEnsemble,
    n_max: usize,
    record: bool,
) -> Vec<Option<Result<Trajectory>>> {
    let mut op = SplitOperator::new(n_max);
    ens.betas()
        .iter()
        .zip(ens.weights())
        .map(|(&beta, &w)| (w > 0.0).then(|| evolve_member(&mut op, train, beta, n_max, record)))
        .collect()
}

/// Evolves every member from `|0 + β_j⟩` through `train` and deposits
/// `w_j |c_n|² / Δp` at `p = 2(n + β_j)`.
///
/// Members may be evolved in parallel; the deposit runs in member order.
pub fn ensemble_distribution(
    train: &PulseTrain,
    ens: &InitialEnsemble,
    n_max: usize,
    record: bool,
) -> Result<EnsembleRun> {
    if n_max == 0 {
        return Err(QkrError::Argument("n_max must be positive".into()));
    }
    let m = ens.members();
    let spacing = ens.spacing();
    let len = 2 * n_max * m;
    let kicks = if record { train.kick_count() } else { 0 };

    let mut final_density = vec![0.0; len];
    let mut kick_densities = vec![vec![0.0; len]; kicks];

    let results = evolve_all(train, ens, n_max, record);
    for (j, result) in results.into_iter().enumerate() {
        let Some(result) = result else { continue };
        let traj = result.map_err(|e| QkrError::AtMember {
            member: j,
            source: Box::new(e),
        })?;
        let w = ens.weights()[j] / spacing;
        for (i, pop) in traj.state.populations().into_iter().enumerate() {
            final_density[i * m + j] = w * pop;
        }
        for (dens, snap) in kick_densities.iter_mut().zip(&traj.snapshots) {
            for (i, pop) in snap.iter().enumerate() {
                dens[i * m + j] = w * pop;
            }
        }
    }

    let grid = member_grid(ens, n_max);
    let wrap = |density| {
        MomentumDistribution::from_parts_unchecked(
            grid.clone(),
            density,
            spacing,
            Normalization::Raw,
        )
    };
    Ok(EnsembleRun {
        per_kick: kick_densities.into_iter().map(wrap).collect(),
        final_distribution: wrap(final_density),
    })
}
