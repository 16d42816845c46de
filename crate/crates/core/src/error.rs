use thiserror::Error;

/// Errors raised by the solver and the experiment drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KsError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Picard iteration stopped contracting; the time window is too long for the data.
    #[error(
        "Picard iteration failed to contract on [{window_start}, {window_end}] \
         after {iterations} iterations (last distance {last_distance:e})"
    )]
    NonContraction {
        window_start: f64,
        window_end: f64,
        iterations: usize,
        last_distance: f64,
    },

    #[error("solution blew up at t = {time} (max mode magnitude {magnitude:e})")]
    BlowUp { time: f64, magnitude: f64 },

    #[error("quadrature did not converge at xi = {xi}: relative change {relative_change:e}")]
    QuadratureNonConvergence { xi: f64, relative_change: f64 },

    /// A failure inside a parameter scan, tagged with the failing point.
    #[error("{name} = {value}: {source}")]
    AtParameter {
        name: String,
        value: f64,
        source: Box<KsError>,
    },
}

impl KsError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        KsError::InvalidParameter(msg.into())
    }

    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        match self {
            KsError::InvalidParameter(_) => false,
            KsError::AtParameter { source, .. } => source.is_numerical(),
            _ => true,
        }
    }

    pub(crate) fn at(self, name: &str, value: f64) -> Self {
        KsError::AtParameter {
            name: name.to_string(),
            value,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, KsError>;
