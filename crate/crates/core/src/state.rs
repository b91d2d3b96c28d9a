use num_complex::Complex64;

use crate::error::{QkrError, Result};

/// Matter-wave state on the momentum ladder `p = (n + β) · 2ħk_L`.
///
/// Amplitudes are stored for orders `n ∈ [-n_max, n_max)`; index `i` holds
/// order `n = i - n_max`. The quasimomentum `β` is a label that no
/// evolution operator touches.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: Vec<Complex64>,
    beta: f64,
    n_max: usize,
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && (-0.5..0.5).contains(&beta) {
        Ok(())
    } else {
        Err(QkrError::Domain(format!(
            "quasimomentum must lie in [-0.5, 0.5), got {beta}"
        )))
    }
}

impl QuantumState {
    /// Momentum eigenstate `|n0 + β⟩`.
    pub fn plane_wave(n0: i64, beta: f64, n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(QkrError::Argument("n_max must be positive".into()));
        }
        check_beta(beta)?;
        let half = n_max as i64;
        if n0 < -half || n0 >= half {
            return Err(QkrError::Range { order: n0, n_max });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 2 * n_max];
        amplitudes[(n0 + half) as usize] = Complex64::new(1.0, 0.0);
        Ok(QuantumState {
            amplitudes,
            beta,
            n_max,
        })
    }

    /// Builds a state from raw amplitudes, rescaling them to unit norm.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        if amplitudes.is_empty() || !amplitudes.len().is_multiple_of(2) {
            return Err(QkrError::Shape(format!(
                "amplitude array length must be a positive even number, got {}",
                amplitudes.len()
            )));
        }
        let norm = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(QkrError::Domain(
                "amplitudes have zero or non-finite norm".into(),
            ));
        }
        let n_max = amplitudes.len() / 2;
        let amplitudes = amplitudes.into_iter().map(|c| c / norm).collect();
        Ok(QuantumState {
            amplitudes,
            beta,
            n_max,
        })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    /// Lowest order on the ladder, `-n_max`.
    pub fn min_order(&self) -> i64 {
        -(self.n_max as i64)
    }

    /// Amplitude of order `n`, or zero outside the grid.
    pub fn amplitude(&self, n: i64) -> Complex64 {
        self.index_of(n)
            .map(|i| self.amplitudes[i])
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    /// `|c_n|²`, zero outside the grid.
    pub fn population(&self, n: i64) -> f64 {
        self.amplitude(n).norm_sqr()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    fn index_of(&self, n: i64) -> Option<usize> {
        let i = n + self.n_max as i64;
        (0..self.amplitudes.len() as i64)
            .contains(&i)
            .then_some(i as usize)
    }

    /// Ladder orders paired with amplitudes, lowest order first.
    pub fn orders(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let lo = self.min_order();
        self.amplitudes
            .iter()
            .enumerate()
            .map(move |(i, c)| (lo + i as i64, *c))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &QuantumState) -> Result<Complex64> {
        self.check_compatible(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨a|b⟩|²`.
    pub fn fidelity(&self, other: &QuantumState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Mean kinetic energy `Σ |c_n|² (n + β)² / 2` in scaled units.
    ///
    /// One ladder step is two single-photon recoils, so the momentum in
    /// recoils is `2(n + β)`.
    pub fn kinetic_energy(&self) -> f64 {
        self.orders()
            .map(|(n, c)| {
                let k = n as f64 + self.beta;
                c.norm_sqr() * k * k / 2.0
            })
            .sum()
    }

    pub(crate) fn check_compatible(&self, other: &QuantumState) -> Result<()> {
        if self.n_max != other.n_max {
            return Err(QkrError::Shape(format!(
                "n_max differs: {} vs {}",
                self.n_max, other.n_max
            )));
        }
        if self.beta.to_bits() != other.beta.to_bits() {
            return Err(QkrError::Shape(format!(
                "quasimomentum differs: {} vs {}",
                self.beta, other.beta
            )));
        }
        Ok(())
    }
}

/// `|⟨a|b⟩|²` for states on the same ladder.
pub fn fidelity(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    a.fidelity(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_wave_at_origin() {
        let s = QuantumState::plane_wave(0, 0.0, 64).unwrap();
        assert_eq!(s.amplitudes().len(), 128);
        assert_eq!(s.amplitude(0), Complex64::new(1.0, 0.0));
        assert_eq!(s.norm_sqr(), 1.0);
        assert_eq!(s.populations().iter().filter(|&&p| p != 0.0).count(), 1);
    }

    #[test]
    fn plane_wave_keeps_beta() {
        let s = QuantumState::plane_wave(0, 0.25, 64).unwrap();
        assert_eq!(s.beta(), 0.25);
        assert_eq!(s.population(0), 1.0);
    }

    #[test]
    fn plane_wave_range() {
        assert!(matches!(
            QuantumState::plane_wave(64, 0.0, 64),
            Err(QkrError::Range {
                order: 64,
                n_max: 64
            })
        ));
        assert!(QuantumState::plane_wave(-64, 0.0, 64).is_ok());
        assert!(QuantumState::plane_wave(-65, 0.0, 64).is_err());
        assert!(QuantumState::plane_wave(0, 0.5, 64).is_err());
    }

    #[test]
    fn fidelity_cases() {
        let a = QuantumState::plane_wave(0, 0.0, 16).unwrap();
        let b = QuantumState::plane_wave(1, 0.0, 16).unwrap();
        assert_eq!(fidelity(&a, &a).unwrap(), 1.0);
        assert_eq!(fidelity(&a, &b).unwrap(), 0.0);
        let c = QuantumState::plane_wave(0, 0.1, 16).unwrap();
        assert!(matches!(fidelity(&a, &c), Err(QkrError::Shape(_))));
        let d = QuantumState::plane_wave(0, 0.0, 32).unwrap();
        assert!(fidelity(&a, &d).is_err());
    }

    #[test]
    fn kinetic_energy_of_plane_waves() {
        assert_eq!(
            QuantumState::plane_wave(0, 0.0, 8)
                .unwrap()
                .kinetic_energy(),
            0.0
        );
        assert_eq!(
            QuantumState::plane_wave(3, 0.0, 8)
                .unwrap()
                .kinetic_energy(),
            4.5
        );
        let e = QuantumState::plane_wave(1, 0.25, 8)
            .unwrap()
            .kinetic_energy();
        assert!((e - 1.5625 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn from_amplitudes_normalizes() {
        let amps = vec![Complex64::new(3.0, 0.0), Complex64::new(0.0, 4.0)];
        let s = QuantumState::from_amplitudes(amps, 0.0).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        assert_eq!(s.n_max(), 1);
        assert!(QuantumState::from_amplitudes(vec![Complex64::new(1.0, 0.0); 3], 0.0).is_err());
    }
}
