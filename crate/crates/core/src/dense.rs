//! Dense-matrix reference propagator.
//!
//! The kick is the truncated Jacobi–Anger matrix `K_mn = i^(m-n) J_(m-n)(φ)`,
//! built independently of the FFT path and used to cross-check it.

use num_complex::Complex64;

use crate::bessel::bessel_j_table;
use crate::error::{QkrError, Result};
use crate::propagator::drift;
use crate::state::QuantumState;

/// Largest ladder half-size the dense path accepts.
pub const DENSE_LIMIT: usize = 64;

fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Row-major `2n_max × 2n_max` kick matrix.
#[derive(Debug, Clone)]
pub struct KickMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl KickMatrix {
    pub fn new(n_max: usize, phi: f64) -> Result<Self> {
        if n_max > DENSE_LIMIT {
            return Err(QkrError::TooLarge {
                n_max,
                limit: DENSE_LIMIT,
            });
        }
        let dim = 2 * n_max;
        let table = bessel_j_table(dim, phi);
        let j = |k: i64| {
            let v = table[k.unsigned_abs() as usize];
            if k < 0 && k % 2 != 0 {
                -v
            } else {
                v
            }
        };
        let mut entries = Vec::with_capacity(dim * dim);
        for m in 0..dim as i64 {
            for n in 0..dim as i64 {
                entries.push(i_pow(m - n) * j(m - n));
            }
        }
        Ok(KickMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    /// Euclidean norm of column `col`.
    pub fn column_norm(&self, col: usize) -> f64 {
        (0..self.dim)
            .map(|r| self.get(r, col).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn apply(&self, amps: &[Complex64]) -> Vec<Complex64> {
        self.entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(amps).map(|(k, c)| k * c).sum())
            .collect()
    }
}

/// Kick of strength `φ` followed by a drift of `τ`, computed with the dense
/// Bessel matrix instead of the FFT.
pub fn dense_step_oracle(state: &QuantumState, phi: f64, tau: f64) -> Result<QuantumState> {
    let matrix = KickMatrix::new(state.n_max(), phi)?;
    let kicked = matrix.apply(state.amplitudes());
    let mut out = state.clone();
    out.amplitudes_mut().copy_from_slice(&kicked);
    drift(&mut out, tau)?;
    Ok(out)
}
