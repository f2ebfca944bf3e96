use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("singular evaluation: {what} (distance {distance:e})")]
    Singular { what: &'static str, distance: f64 },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("numerical nonconvergence: {0}")]
    NonConvergence(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("scan point D = {distance} failed: {source}")]
    ScanPoint {
        distance: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True when the failure came from a quadrature or root solve rather than bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NonConvergence(_) => true,
            Error::ScanPoint { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
