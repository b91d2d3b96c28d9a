//! Split-operator propagation: the kick is diagonal on the position grid,
//! the free drift is diagonal on the momentum ladder.
//!
//! Sign convention: the potential `-V₀ cos(k_L x)` with forward phase
//! `exp(-iVt/ħ)` gives the kick factor `exp(+iφ_d cos θ)`. Populations do
//! not depend on this choice.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{QkrError, Result};
use crate::state::QuantumState;

/// Population allowed in the two outermost orders on either edge.
pub const EDGE_POPULATION_LIMIT: f64 = 1e-8;
const EDGE_ORDERS: usize = 2;

/// Reusable FFT plans and buffers for one ladder size.
pub struct SplitOperator {
    n_max: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    cos_theta: Vec<f64>,
    buffer: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl std::fmt::Debug for SplitOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SplitOperator")
            .field("n_max", &self.n_max)
            .finish()
    }
}

impl SplitOperator {
    pub fn new(n_max: usize) -> Self {
        let len = 2 * n_max;
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        let cos_theta = (0..len)
            .map(|j| (2.0 * std::f64::consts::PI * j as f64 / len as f64).cos())
            .collect();
        SplitOperator {
            n_max,
            forward,
            inverse,
            cos_theta,
            buffer: vec![Complex64::new(0.0, 0.0); len],
            scratch: vec![Complex64::new(0.0, 0.0); scratch_len],
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Applies `exp(iφ cos θ)` on the `2·n_max`-point position grid.
    ///
    /// On an aliasing error the state has already been kicked and should be
    /// discarded.
    pub fn kick(&mut self, state: &mut QuantumState, phi: f64) -> Result<()> {
        if !phi.is_finite() {
            return Err(QkrError::Domain(format!(
                "kick strength must be finite, got {phi}"
            )));
        }
        if state.n_max() != self.n_max {
            return Err(QkrError::Shape(format!(
                "operator built for n_max = {}, state has {}",
                self.n_max,
                state.n_max()
            )));
        }
        if phi == 0.0 {
            return Ok(());
        }
        let len = 2 * self.n_max;
        let amps = state.amplitudes_mut();
        // Ladder index i carries order i - n_max, which lives in FFT bin (i + n_max) mod len.
        for (k, slot) in self.buffer.iter_mut().enumerate() {
            *slot = amps[(k + self.n_max) % len];
        }
        self.inverse
            .process_with_scratch(&mut self.buffer, &mut self.scratch);
        for (psi, &c) in self.buffer.iter_mut().zip(&self.cos_theta) {
            *psi *= Complex64::from_polar(1.0, phi * c);
        }
        self.forward
            .process_with_scratch(&mut self.buffer, &mut self.scratch);
        let scale = 1.0 / len as f64;
        for (k, &v) in self.buffer.iter().enumerate() {
            amps[(k + self.n_max) % len] = v * scale;
        }
        check_edges(state)
    }
}

fn check_edges(state: &QuantumState) -> Result<()> {
    let amps = state.amplitudes();
    let low: f64 = amps[..EDGE_ORDERS].iter().map(|c| c.norm_sqr()).sum();
    let high: f64 = amps[amps.len() - EDGE_ORDERS..]
        .iter()
        .map(|c| c.norm_sqr())
        .sum();
    let edge = low.max(high);
    if edge > EDGE_POPULATION_LIMIT {
        return Err(QkrError::Aliasing {
            edge_population: edge,
            n_max: state.n_max(),
        });
    }
    Ok(())
}

/// Free evolution for scaled time `τ`: `c_n ← c_n exp(-iτ(n+β)²/2)`.
pub fn drift(state: &mut QuantumState, tau: f64) -> Result<()> {
    if !tau.is_finite() || tau < 0.0 {
        return Err(QkrError::Domain(format!(
            "drift duration must be finite and >= 0, got {tau}"
        )));
    }
    if tau == 0.0 {
        return Ok(());
    }
    let lo = state.min_order();
    let beta = state.beta();
    for (i, c) in state.amplitudes_mut().iter_mut().enumerate() {
        let k = (lo + i as i64) as f64 + beta;
        *c *= Complex64::from_polar(1.0, -tau * k * k / 2.0);
    }
    Ok(())
}

/// One kick of strength `φ_d`, returning the new state.
pub fn apply_kick(state: &QuantumState, phi: f64) -> Result<QuantumState> {
    let mut out = state.clone();
    SplitOperator::new(state.n_max()).kick(&mut out, phi)?;
    Ok(out)
}

/// Free drift for scaled time `τ`, returning the new state.
pub fn free_evolve(state: &QuantumState, tau: f64) -> Result<QuantumState> {
    let mut out = state.clone();
    drift(&mut out, tau)?;
    Ok(out)
}
