//! Self-checks of the propagator against exact results: Bessel
//! diffraction, resonance, anti-resonance, echo return and agreement with
//! the dense propagator.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bessel::bessel_j;
use crate::dense::KickMatrix;
use crate::error::Result;
use crate::propagator::{drift, SplitOperator};
use crate::sequence::{loschmidt_train, MIDPOINT_WAIT};
use crate::state::QuantumState;

/// Kick and drift implementations under test.
pub trait Stepper {
    fn kick(&mut self, state: &mut QuantumState, phi: f64) -> Result<()>;
    fn drift(&mut self, state: &mut QuantumState, tau: f64) -> Result<()>;
}

/// The production split-operator path.
#[derive(Debug, Default)]
pub struct SpectralStepper {
    op: Option<SplitOperator>,
}

impl Stepper for SpectralStepper {
    fn kick(&mut self, state: &mut QuantumState, phi: f64) -> Result<()> {
        if self.op.as_ref().map(SplitOperator::n_max) != Some(state.n_max()) {
            self.op = Some(SplitOperator::new(state.n_max()));
        }
        self.op
            .as_mut()
            .expect("operator initialized above")
            .kick(state, phi)
    }

    fn drift(&mut self, state: &mut QuantumState, tau: f64) -> Result<()> {
        drift(state, tau)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub expected: String,
    pub actual: String,
    pub tolerance: String,
    pub passed: bool,
}

/// SplitMix64; enough for reproducible random test states.
#[derive(Debug, Clone)]
pub struct SplitMix(u64);

impl SplitMix {
    pub fn new(seed: u64) -> Self {
        SplitMix(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Random normalized state supported on `|n| <= support`.
pub fn random_state(
    rng: &mut SplitMix,
    n_max: usize,
    support: i64,
    beta: f64,
) -> Result<QuantumState> {
    let amps = (-(n_max as i64)..n_max as i64)
        .map(|n| {
            if n.abs() <= support {
                Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    QuantumState::from_amplitudes(amps, beta)
}

fn check(
    name: &'static str,
    expected: String,
    actual: String,
    tolerance: String,
    passed: bool,
) -> Check {
    Check {
        name,
        expected,
        actual,
        tolerance,
        passed,
    }
}

fn failed(name: &'static str, expected: String, err: impl std::fmt::Display) -> Check {
    check(name, expected, format!("error: {err}"), "-".into(), false)
}

/// Spectral kick + drift against the dense Bessel matrix with its own drift
/// phases. Each trial starts from a fresh random state on `|n| <= 6`.
pub fn dense_equivalence(stepper: &mut dyn Stepper, trials: usize, seed: u64) -> Result<f64> {
    let n_max = 32;
    let mut rng = SplitMix::new(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let phi = 5.0 * rng.next_f64();
        let tau = 4.0 * PI * rng.next_f64();
        let start = random_state(&mut rng, n_max, 6, 0.0)?;
        let mut spectral = start.clone();
        stepper.kick(&mut spectral, phi)?;
        stepper.drift(&mut spectral, tau)?;

        let kicked = KickMatrix::new(n_max, phi)?.apply(start.amplitudes());
        for ((n, c), s) in (-(n_max as i64)..).zip(kicked).zip(spectral.amplitudes()) {
            let phase = Complex64::from_polar(1.0, -tau * (n as f64) * (n as f64) / 2.0);
            worst = worst.max((c * phase - s).norm());
        }
    }
    Ok(worst)
}

/// Smallest fidelity with the initial state after kick, 2π drift, kick.
pub fn anti_resonance(stepper: &mut dyn Stepper, phis: &[f64]) -> Result<f64> {
    let mut worst: f64 = 1.0;
    for &phi in phis {
        let start = QuantumState::plane_wave(0, 0.0, 128)?;
        let mut s = start.clone();
        stepper.kick(&mut s, phi)?;
        stepper.drift(&mut s, 2.0 * PI)?;
        stepper.kick(&mut s, phi)?;
        worst = worst.min(start.fidelity(&s)?);
    }
    Ok(worst)
}

/// Largest relative deviation of the energy after `N` resonant kicks from `(Nφ)²/4`.
pub fn resonance_growth(stepper: &mut dyn Stepper, phi: f64, max_kicks: usize) -> Result<f64> {
    let mut s = QuantumState::plane_wave(0, 0.0, 128)?;
    let mut worst: f64 = 0.0;
    for n in 1..=max_kicks {
        if n > 1 {
            stepper.drift(&mut s, 4.0 * PI)?;
        }
        stepper.kick(&mut s, phi)?;
        let want = (n as f64 * phi).powi(2) / 4.0;
        worst = worst.max((s.kinetic_energy() - want).abs() / want);
    }
    Ok(worst)
}

/// Largest `| |c_n|² − J_n(φ)² |` after one kick of the zero-momentum state.
pub fn single_kick(stepper: &mut dyn Stepper, phi: f64) -> Result<(f64, f64)> {
    let mut s = QuantumState::plane_wave(0, 0.0, 128)?;
    stepper.kick(&mut s, phi)?;
    let worst = s
        .orders()
        .map(|(n, c)| (c.norm_sqr() - bessel_j(n, phi).powi(2)).abs())
        .fold(0.0, f64::max);
    Ok((worst, s.population(0)))
}

/// `|‖ψ‖² − 1|` after 1000 alternating kicks and drifts with random parameters.
pub fn norm_drift(stepper: &mut dyn Stepper, seed: u64) -> Result<f64> {
    let mut rng = SplitMix::new(seed);
    let mut s = QuantumState::plane_wave(0, 0.17, 128)?;
    for i in 0..1000 {
        if i % 2 == 0 {
            stepper.kick(&mut s, 0.5 * rng.next_f64())?;
        } else {
            stepper.drift(&mut s, 4.0 * PI * rng.next_f64())?;
        }
    }
    Ok((s.norm_sqr() - 1.0).abs())
}

/// Zero-order population after kick `N/2` and after the full echo train.
pub fn echo_return(
    stepper: &mut dyn Stepper,
    kicks: usize,
    epsilon: f64,
    phi: f64,
) -> Result<(f64, f64)> {
    let train = loschmidt_train(kicks, epsilon, phi)?;
    let mut s = QuantumState::plane_wave(0, 0.0, 128)?;
    let mut seen = 0;
    let mut midpoint = f64::NAN;
    for event in train.events() {
        match *event {
            crate::PulseEvent::Kick(p) => {
                stepper.kick(&mut s, p)?;
                seen += 1;
                if seen == kicks / 2 {
                    midpoint = s.population(0);
                }
            }
            crate::PulseEvent::Drift(t) => stepper.drift(&mut s, t)?,
        }
    }
    debug_assert!(train
        .events()
        .contains(&crate::PulseEvent::Drift(MIDPOINT_WAIT)));
    Ok((midpoint, s.population(0)))
}

/// Runs every check with the production propagator.
pub fn run_checks() -> Vec<Check> {
    run_checks_with(&mut SpectralStepper::default())
}

/// Runs every check with the given kick/drift implementation.
pub fn run_checks_with(stepper: &mut dyn Stepper) -> Vec<Check> {
    let mut out = Vec::new();

    let name = "dense equivalence (n_max=32, 100 trials)";
    out.push(match dense_equivalence(stepper, 100, 0x5EED) {
        Ok(d) => check(
            name,
            "0".into(),
            format!("{d:.3e}"),
            "1e-10".into(),
            d <= 1e-10,
        ),
        Err(e) => failed(name, "0".into(), e),
    });

    let name = "anti-resonance return (phi 0.5,1,2,3)";
    out.push(match anti_resonance(stepper, &[0.5, 1.0, 2.0, 3.0]) {
        Ok(f) => check(
            name,
            "1".into(),
            format!("{f:.15}"),
            "1e-10".into(),
            f >= 1.0 - 1e-10,
        ),
        Err(e) => failed(name, "1".into(), e),
    });

    let name = "resonance energy (N phi)^2/4, N=1..10";
    out.push(match resonance_growth(stepper, 1.0, 10) {
        Ok(r) => check(
            name,
            "0 rel".into(),
            format!("{r:.3e}"),
            "1e-6".into(),
            r <= 1e-6,
        ),
        Err(e) => failed(name, "0 rel".into(), e),
    });

    for (phi, name) in [
        (1.0, "single kick |c_n|^2 = J_n(1)^2"),
        (2.0, "single kick |c_n|^2 = J_n(2)^2"),
        (2.405, "single kick |c_n|^2 = J_n(2.405)^2"),
    ] {
        out.push(match single_kick(stepper, phi) {
            Ok((d, _)) => check(
                name,
                "0".into(),
                format!("{d:.3e}"),
                "1e-10".into(),
                d <= 1e-10,
            ),
            Err(e) => failed(name, "0".into(), e),
        });
    }

    let name = "first zero of J_0: |c_0|^2 at phi=2.405";
    out.push(match single_kick(stepper, 2.405) {
        Ok((_, p0)) => check(
            name,
            "< 1e-6".into(),
            format!("{p0:.3e}"),
            "1e-6".into(),
            p0 < 1e-6,
        ),
        Err(e) => failed(name, "< 1e-6".into(), e),
    });

    let name = "norm after 1000 operations";
    out.push(match norm_drift(stepper, 7) {
        Ok(d) => check(
            name,
            "1".into(),
            format!("|dev| {d:.3e}"),
            "1e-10".into(),
            d <= 1e-10,
        ),
        Err(e) => failed(name, "1".into(), e),
    });

    let name = "echo return N=10 eps=2 phi=2.5 beta=0";
    out.push(match echo_return(stepper, 10, 2.0, 2.5) {
        Ok((mid, end)) => check(
            name,
            ">= 0.9 and > midpoint".into(),
            format!("{end:.12} (midpoint {mid:.6})"),
            "-".into(),
            end >= 0.9 && end > mid,
        ),
        Err(e) => failed(name, ">= 0.9".into(), e),
    });

    out
}
