use thiserror::Error;

/// Errors raised by the simulation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The adaptive quadrature exhausted its subdivision budget. This is a
    /// failure of the oracle itself, not a closed-form mismatch.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error {error:e})"
    )]
    OracleFailure {
        subdivisions: usize,
        estimate: f64,
        error: f64,
    },

    #[error("matrix is not Hermitian (asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("trajectory has {0} points, need at least 3")]
    TrajectoryTooShort(usize),

    #[error("time grid is not uniform: {0}")]
    NonUniformGrid(String),

    #[error("unknown sweep axis `{0}`")]
    UnknownAxis(String),

    #[error("sweep axis `{axis}` does not apply to a {bath} bath")]
    AxisNotApplicable { axis: &'static str, bath: &'static str },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 {
        Ok(())
    } else {
        Err(Error::NegativeTime(t))
    }
}
