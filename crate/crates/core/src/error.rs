use thiserror::Error;

pub type Result<T, E = HisdError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum HisdError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite {quantity} at step {step}{}", eigen_index.map(|i| format!(" (eigen-index {i})")).unwrap_or_default())]
    NonFinite {
        quantity: &'static str,
        step: usize,
        eigen_index: Option<usize>,
    },

    #[error("degenerate retraction at step {step}: |x~| = {norm:e}")]
    DegenerateRetraction { step: usize, norm: f64 },

    #[error("degenerate frame: residual norm of direction {index} is {residual:e}")]
    DegenerateFrame { index: usize, residual: f64 },

    #[error("initialization failed: {0}")]
    Initialization(String),

    #[error("internal consistency violated at step {step}: {detail}")]
    InternalConsistency { step: usize, detail: String },

    #[error("at t = {t}: {source}")]
    AtTime {
        t: f64,
        #[source]
        source: Box<HisdError>,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl HisdError {
    pub(crate) fn at_time(self, t: f64) -> Self {
        match self {
            already @ HisdError::AtTime { .. } => already,
            other => HisdError::AtTime {
                t,
                source: Box::new(other),
            },
        }
    }

    /// True for failures raised by the numerical scheme itself (as opposed to
    /// argument validation or output).
    pub fn is_numerical(&self) -> bool {
        match self {
            HisdError::AtTime { source, .. } => source.is_numerical(),
            HisdError::NonFinite { .. }
            | HisdError::DegenerateRetraction { .. }
            | HisdError::DegenerateFrame { .. }
            | HisdError::InternalConsistency { .. } => true,
            _ => false,
        }
    }

    pub fn is_io(&self) -> bool {
        match self {
            HisdError::AtTime { source, .. } => source.is_io(),
            HisdError::Io(_) => true,
            HisdError::Csv(e) => e.is_io_error(),
            _ => false,
        }
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(HisdError::DimensionMismatch { expected, found })
    }
}
