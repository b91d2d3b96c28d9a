//! Simulation of the atom-optics quantum δ-kicked rotor.
//!
//! The state lives on a momentum ladder with a conserved quasimomentum,
//! kicks and drifts are applied with the split-operator method, and pulse
//! trains (periodic, resonant, Loschmidt echo) are run over incoherent
//! quasimomentum ensembles to produce momentum distributions and the
//! observables derived from them: `W_p`, the central-peak FWHM and the
//! zero-order fraction `P(0)`.

pub mod bessel;
pub mod dense;
pub mod distribution;
pub mod ensemble;
pub mod error;
pub mod experiment;
pub mod propagator;
pub mod sequence;
pub mod state;
pub mod units;
pub mod verify;

pub use dense::{dense_step_oracle, KickMatrix};
pub use distribution::{
    AnalysisResult, Convolved, MomentumDistribution, Normalization, OrderMetric,
};
pub use ensemble::{ensemble_distribution, EnsembleRun, InitialEnsemble};
pub use error::{QkrError, Result};
pub use propagator::{apply_kick, drift, free_evolve, SplitOperator};
pub use sequence::{
    loschmidt_train, periodic_train, run, MidpointMode, PulseEvent, PulseTrain, Trajectory,
};
pub use state::{fidelity, QuantumState};
