//! Pulse trains as explicit event lists, and running them on a state.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{QkrError, Result};
use crate::propagator::{drift, SplitOperator};
use crate::state::QuantumState;

/// Scaled time of the primary quantum resonance.
pub const RESONANCE: f64 = 4.0 * PI;
/// Scaled time of the anti-resonance.
pub const ANTI_RESONANCE: f64 = 2.0 * PI;
/// Wait inserted between the two halves of a Loschmidt train.
pub const MIDPOINT_WAIT: f64 = 6.0 * PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseEvent {
    /// Instantaneous kick of strength `φ_d`.
    Kick(f64),
    /// Free evolution for a scaled time.
    Drift(f64),
}

impl PulseEvent {
    fn validate(&self) -> Result<()> {
        match *self {
            PulseEvent::Kick(phi) if !phi.is_finite() => Err(QkrError::Argument(format!(
                "kick strength must be finite, got {phi}"
            ))),
            PulseEvent::Drift(tau) if !tau.is_finite() || tau < 0.0 => Err(QkrError::Argument(
                format!("drift must be finite and >= 0, got {tau}"),
            )),
            _ => Ok(()),
        }
    }
}

/// How the 6π wait enters a Loschmidt train.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MidpointMode {
    /// The wait takes the place of the drift between the two halves.
    #[default]
    Replace,
    /// The wait follows a regular first-half period.
    Append,
}

impl FromStr for MidpointMode {
    type Err = QkrError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "replace" => Ok(MidpointMode::Replace),
            "append" => Ok(MidpointMode::Append),
            other => Err(QkrError::Argument(format!(
                "midpoint mode must be 'replace' or 'append', got '{other}'"
            ))),
        }
    }
}

impl fmt::Display for MidpointMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MidpointMode::Replace => "replace",
            MidpointMode::Append => "append",
        })
    }
}

/// An immutable, ordered list of kicks and drifts.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseTrain {
    events: Vec<PulseEvent>,
    label: String,
}

impl PulseTrain {
    pub fn new(label: impl Into<String>, events: Vec<PulseEvent>) -> Result<Self> {
        for e in &events {
            e.validate()?;
        }
        Ok(PulseTrain {
            events,
            label: label.into(),
        })
    }

    pub fn empty() -> Self {
        PulseTrain {
            events: Vec::new(),
            label: "empty".into(),
        }
    }

    pub fn events(&self) -> &[PulseEvent] {
        &self.events
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kick_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, PulseEvent::Kick(_)))
            .count()
    }

    /// Sum of all drift durations.
    pub fn total_duration(&self) -> f64 {
        self.events
            .iter()
            .map(|e| match e {
                PulseEvent::Drift(t) => *t,
                PulseEvent::Kick(_) => 0.0,
            })
            .sum()
    }

    /// Compact text form, `K:<φ>;D:<τ>;...`, with round-trip float formatting.
    pub fn encode_events(&self) -> String {
        self.events
            .iter()
            .map(|e| match e {
                PulseEvent::Kick(p) => format!("K:{p:?}"),
                PulseEvent::Drift(t) => format!("D:{t:?}"),
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Parses the output of [`PulseTrain::encode_events`].
    pub fn decode_events(label: &str, text: &str) -> Result<Self> {
        let events = text
            .split(';')
            .filter(|s| !s.is_empty())
            .map(|item| {
                let (kind, value) = item
                    .split_once(':')
                    .ok_or_else(|| QkrError::Argument(format!("malformed event '{item}'")))?;
                let v: f64 = value
                    .parse()
                    .map_err(|_| QkrError::Argument(format!("bad number in '{item}'")))?;
                match kind {
                    "K" => Ok(PulseEvent::Kick(v)),
                    "D" => Ok(PulseEvent::Drift(v)),
                    _ => Err(QkrError::Argument(format!(
                        "unknown event kind in '{item}'"
                    ))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        PulseTrain::new(label, events)
    }
}

/// `N` kicks of strength `φ_d` separated by drifts of `k̄`.
pub fn periodic_train(kicks: usize, scaled_period: f64, phi: f64) -> Result<PulseTrain> {
    if kicks == 0 {
        return Err(QkrError::Argument(
            "periodic train needs at least one kick".into(),
        ));
    }
    let mut events = vec![PulseEvent::Kick(phi)];
    for _ in 1..kicks {
        events.push(PulseEvent::Drift(scaled_period));
        events.push(PulseEvent::Kick(phi));
    }
    PulseTrain::new(
        format!("periodic N={kicks} kbar={scaled_period} phi={phi}"),
        events,
    )
}

/// Loschmidt echo train with the wait replacing the midpoint drift.
pub fn loschmidt_train(kicks: usize, epsilon: f64, phi: f64) -> Result<PulseTrain> {
    loschmidt_train_with(kicks, epsilon, phi, MidpointMode::Replace)
}

/// `N/2` kicks at period `4π+ε`, a `6π` wait, then `N/2` kicks at `4π−ε`.
pub fn loschmidt_train_with(
    kicks: usize,
    epsilon: f64,
    phi: f64,
    mode: MidpointMode,
) -> Result<PulseTrain> {
    if kicks < 2 || !kicks.is_multiple_of(2) {
        return Err(QkrError::Argument(format!(
            "Loschmidt train needs an even kick count >= 2, got {kicks}"
        )));
    }
    if !epsilon.is_finite() {
        return Err(QkrError::Argument(format!(
            "epsilon must be finite, got {epsilon}"
        )));
    }
    let half = kicks / 2;
    let (first, second) = (RESONANCE + epsilon, RESONANCE - epsilon);
    let mut events = Vec::with_capacity(2 * kicks);
    events.push(PulseEvent::Kick(phi));
    for _ in 1..half {
        events.push(PulseEvent::Drift(first));
        events.push(PulseEvent::Kick(phi));
    }
    if mode == MidpointMode::Append {
        events.push(PulseEvent::Drift(first));
    }
    events.push(PulseEvent::Drift(MIDPOINT_WAIT));
    events.push(PulseEvent::Kick(phi));
    for _ in 1..half {
        events.push(PulseEvent::Drift(second));
        events.push(PulseEvent::Kick(phi));
    }
    PulseTrain::new(
        format!("loschmidt N={kicks} eps={epsilon} phi={phi} midpoint={mode}"),
        events,
    )
}

/// Final state and, when requested, the populations right after every kick.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub state: QuantumState,
    pub snapshots: Vec<Vec<f64>>,
}

/// Runs `train` on `state`.
pub fn run(state: &QuantumState, train: &PulseTrain, record: bool) -> Result<Trajectory> {
    let mut op = SplitOperator::new(state.n_max());
    run_with(&mut op, state.clone(), train, record)
}

/// As [`run`], reusing an operator and taking the state by value.
pub fn run_with(
    op: &mut SplitOperator,
    mut state: QuantumState,
    train: &PulseTrain,
    record: bool,
) -> Result<Trajectory> {
    let mut snapshots = Vec::new();
    for (index, event) in train.events().iter().enumerate() {
        let step = match *event {
            PulseEvent::Kick(phi) => op.kick(&mut state, phi),
            PulseEvent::Drift(tau) => drift(&mut state, tau),
        };
        step.map_err(|e| QkrError::AtEvent {
            event: index,
            source: Box::new(e),
        })?;
        if record && matches!(event, PulseEvent::Kick(_)) {
            snapshots.push(state.populations());
        }
    }
    Ok(Trajectory { state, snapshots })
}
