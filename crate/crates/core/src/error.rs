use thiserror::Error;

/// Errors raised by the simulator and the analysis layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QkrError {
    /// A physical or numerical argument outside its valid domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A momentum order outside the ladder `[-n_max, n_max)`.
    #[error("momentum order {order} is outside the grid [-{n_max}, {n_max})")]
    Range { order: i64, n_max: usize },

    /// Population reached the ladder edge; the grid would wrap around.
    #[error(
        "aliasing: {edge_population:.3e} of the population sits in the outermost orders \
         (n_max = {n_max}); increase n_max"
    )]
    Aliasing { edge_population: f64, n_max: usize },

    /// Aliasing raised while running a pulse train, tagged with the event index.
    #[error("event {event}: {source}")]
    AtEvent {
        event: usize,
        #[source]
        source: Box<QkrError>,
    },

    /// Aliasing raised while evolving one ensemble member.
    #[error("ensemble member {member}: {source}")]
    AtMember {
        member: usize,
        #[source]
        source: Box<QkrError>,
    },

    /// States or distributions that do not share a grid.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Invalid builder argument (kick count, member count, ...).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The dense oracle refuses grids above its cost guard.
    #[error("dense propagator refused: n_max = {n_max} exceeds {limit}")]
    TooLarge { n_max: usize, limit: usize },

    /// A peak-shape analysis that could not find what it looks for.
    #[error("analysis error: {0}")]
    Analysis(String),
}

impl QkrError {
    /// True when the root cause is a numerical guard (aliasing) rather than bad input.
    pub fn is_numerical_guard(&self) -> bool {
        match self {
            QkrError::Aliasing { .. } => true,
            QkrError::AtEvent { source, .. } | QkrError::AtMember { source, .. } => {
                source.is_numerical_guard()
            }
            _ => false,
        }
    }
}

pub type Result<T, E = QkrError> = std::result::Result<T, E>;
