//! Conversions between laboratory parameters and the dimensionless
//! quantities the simulator consumes (kick strength and scaled period).

use std::f64::consts::PI;

use crate::error::{QkrError, Result};

/// Reduced Planck constant (J s), CODATA 2018.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Unified atomic mass unit (kg), CODATA 2018.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
/// Mass of ⁸⁷Rb in atomic mass units.
pub const RB87_MASS_U: f64 = 86.909_180_527;

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(QkrError::Domain(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

/// Standing-wave wavenumber `k_L = 2π/λ` (rad/m).
pub fn wave_number(wavelength: f64) -> Result<f64> {
    positive("wavelength", wavelength)?;
    Ok(2.0 * PI / wavelength)
}

/// Recoil frequency `ω_R = ħ k_L² / (2m)` (rad/s) for laser wavelength `λ` (m)
/// and atomic mass `m` (kg).
pub fn recoil_frequency(wavelength: f64, mass: f64) -> Result<f64> {
    positive("mass", mass)?;
    let k = wave_number(wavelength)?;
    Ok(HBAR * k * k / (2.0 * mass))
}

/// Scaled kick period `k̄ = 8 ω_R T`.
pub fn scaled_period(period: f64, recoil_frequency: f64) -> Result<f64> {
    if !period.is_finite() || period < 0.0 {
        return Err(QkrError::Domain(format!(
            "kick period must be >= 0, got {period}"
        )));
    }
    positive("recoil frequency", recoil_frequency)?;
    Ok(8.0 * recoil_frequency * period)
}

/// Inverse of [`scaled_period`]: the laboratory period giving scaled period `k̄`.
pub fn period_for_scaled(scaled: f64, recoil_frequency: f64) -> Result<f64> {
    if !scaled.is_finite() || scaled < 0.0 {
        return Err(QkrError::Domain(format!(
            "scaled period must be >= 0, got {scaled}"
        )));
    }
    positive("recoil frequency", recoil_frequency)?;
    Ok(scaled / (8.0 * recoil_frequency))
}

/// On-resonance Rabi frequency `Ω = d E / (2ħ)`.
pub fn rabi_frequency(dipole_moment: f64, field_amplitude: f64) -> Result<f64> {
    if !dipole_moment.is_finite() || !field_amplitude.is_finite() {
        return Err(QkrError::Domain(
            "dipole moment and field must be finite".into(),
        ));
    }
    Ok(dipole_moment * field_amplitude / (2.0 * HBAR))
}

/// Kick strength `φ_d = τ_p Ω² / (4Δ)`. Resonant light (`Δ = 0`) is not modeled.
pub fn kick_strength(pulse_duration: f64, rabi_frequency: f64, detuning: f64) -> Result<f64> {
    if detuning == 0.0 {
        return Err(QkrError::Domain(
            "detuning is zero; kick strength diverges".into(),
        ));
    }
    if !(pulse_duration.is_finite() && rabi_frequency.is_finite() && detuning.is_finite()) {
        return Err(QkrError::Domain(
            "kick-strength inputs must be finite".into(),
        ));
    }
    Ok(pulse_duration * rabi_frequency * rabi_frequency / (4.0 * detuning))
}

/// Laboratory description of one kicked-rotor realization. Any field may be
/// left unset; [`PhysicalParams::complete`] fills the ones derivable from
/// the others.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhysicalParams {
    pub wavelength: Option<f64>,
    pub atom_mass: Option<f64>,
    pub recoil_frequency: Option<f64>,
    pub wave_number: Option<f64>,
    pub pulse_duration: Option<f64>,
    pub rabi_frequency: Option<f64>,
    pub detuning: Option<f64>,
    pub laser_frequency: Option<f64>,
    pub resonance_frequency: Option<f64>,
    pub dipole_moment: Option<f64>,
    pub field_amplitude: Option<f64>,
    pub kick_period: Option<f64>,
}

impl PhysicalParams {
    /// ⁸⁷Rb in a 780 nm standing wave.
    pub fn rubidium_780() -> Self {
        PhysicalParams {
            wavelength: Some(780e-9),
            atom_mass: Some(RB87_MASS_U * ATOMIC_MASS_UNIT),
            ..Default::default()
        }
    }

    /// Fills every derived field whose inputs are present.
    pub fn complete(mut self) -> Result<Self> {
        if let (Some(l), None) = (self.wavelength, self.wave_number) {
            self.wave_number = Some(wave_number(l)?);
        }
        if let (Some(k), Some(m), None) = (self.wave_number, self.atom_mass, self.recoil_frequency)
        {
            positive("mass", m)?;
            self.recoil_frequency = Some(HBAR * k * k / (2.0 * m));
        }
        if let (Some(wl), Some(w0), None) = (
            self.laser_frequency,
            self.resonance_frequency,
            self.detuning,
        ) {
            self.detuning = Some(wl - w0);
        }
        if let (Some(d), Some(e), None) = (
            self.dipole_moment,
            self.field_amplitude,
            self.rabi_frequency,
        ) {
            self.rabi_frequency = Some(rabi_frequency(d, e)?);
        }
        Ok(self)
    }

    /// Checks the relations between populated fields.
    pub fn validate(&self) -> Result<()> {
        if let (Some(k), Some(m), Some(wr)) =
            (self.wave_number, self.atom_mass, self.recoil_frequency)
        {
            let want = HBAR * k * k / (2.0 * m);
            if ((wr - want) / want).abs() > 1e-12 {
                return Err(QkrError::Domain(format!(
                    "recoil frequency {wr} inconsistent with ħk²/2m = {want}"
                )));
            }
        }
        if let (Some(wl), Some(w0), Some(d)) = (
            self.laser_frequency,
            self.resonance_frequency,
            self.detuning,
        ) {
            let want = wl - w0;
            if (d - want).abs() > 1e-12 * want.abs().max(d.abs()) {
                return Err(QkrError::Domain(format!(
                    "detuning {d} inconsistent with ω_L − ω₀ = {want}"
                )));
            }
        }
        Ok(())
    }

    /// `φ_d` from pulse duration, Rabi frequency and detuning.
    pub fn kick_strength(&self) -> Result<f64> {
        match (self.pulse_duration, self.rabi_frequency, self.detuning) {
            (Some(t), Some(o), Some(d)) => kick_strength(t, o, d),
            _ => Err(QkrError::Domain(
                "kick strength needs pulse duration, Rabi frequency and detuning".into(),
            )),
        }
    }

    /// `k̄` from the kick period and recoil frequency.
    pub fn scaled_period(&self) -> Result<f64> {
        match (self.kick_period, self.recoil_frequency) {
            (Some(t), Some(wr)) => scaled_period(t, wr),
            _ => Err(QkrError::Domain(
                "scaled period needs kick period and recoil frequency".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rb_recoil() -> f64 {
        recoil_frequency(780e-9, RB87_MASS_U * ATOMIC_MASS_UNIT).unwrap()
    }

    #[test]
    fn recoil_scales_inverse_square_with_wavelength() {
        let m = RB87_MASS_U * ATOMIC_MASS_UNIT;
        let a = recoil_frequency(780e-9, m).unwrap();
        let b = recoil_frequency(1560e-9, m).unwrap();
        assert!((b / a - 0.25).abs() < 1e-14);
    }

    #[test]
    fn recoil_rejects_non_positive() {
        assert!(recoil_frequency(0.0, 1.0).is_err());
        assert!(recoil_frequency(780e-9, -1.0).is_err());
    }

    #[test]
    fn scaled_period_special_points() {
        let wr = rb_recoil();
        assert_eq!(scaled_period(0.0, wr).unwrap(), 0.0);
        let res = scaled_period(PI / (2.0 * wr), wr).unwrap();
        assert!((res - 4.0 * PI).abs() < 1e-12);
        let anti = scaled_period(PI / (4.0 * wr), wr).unwrap();
        assert!((anti - 2.0 * PI).abs() < 1e-12);
        assert!(scaled_period(-1e-6, wr).is_err());
    }

    #[test]
    fn kick_strength_formula() {
        assert_eq!(kick_strength(1.0, 2.0, 1.0).unwrap(), 1.0);
        assert_eq!(kick_strength(1.0, 0.0, 1.0).unwrap(), 0.0);
        assert!(kick_strength(1.0, 2.0, 0.0).is_err());
        let detuning = 2.0 * PI * 2.45e9;
        let phi = kick_strength(1e-6, 2.0 * PI * 10e6, detuning).unwrap();
        assert!(phi.is_finite() && phi > 0.0);
    }

    #[test]
    fn rabi_frequency_formula() {
        let o = rabi_frequency(2.0 * HBAR, 3.0).unwrap();
        assert!((o - 3.0).abs() < 1e-12);
    }

    #[test]
    fn complete_fills_and_validates() {
        let p = PhysicalParams {
            laser_frequency: Some(10.0),
            resonance_frequency: Some(4.0),
            ..PhysicalParams::rubidium_780()
        }
        .complete()
        .unwrap();
        assert_eq!(p.detuning, Some(6.0));
        p.validate().unwrap();
        let bad = PhysicalParams {
            recoil_frequency: Some(1.0),
            ..p
        };
        assert!(bad.validate().is_err());
    }
}
