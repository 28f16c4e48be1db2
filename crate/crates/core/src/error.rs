use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised while reading data or evaluating density functionals.
///
/// Variants split into two families: data errors (malformed input, invalid
/// parameters) and numerical failures (quadrature, normalization, bounds).
/// [`Error::is_numerical`] tells them apart.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("duplicate atom Z={0}")]
    DuplicateAtom(u32),

    #[error("line {line}: occupancy {occupancy} exceeds the capacity {capacity} of an l={l} subshell")]
    OccupancyExceedsCapacity {
        line: usize,
        l: u32,
        occupancy: f64,
        capacity: f64,
    },

    #[error("line {line}: orbital exponent must be positive, got {zeta}")]
    NonPositiveExponent { line: usize, zeta: f64 },

    #[error("ionization table line {line}: {message}")]
    IonizationTable { line: usize, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("atom {0} not found in basis data")]
    AtomNotFound(String),

    #[error("STO principal quantum number n={0} is not supported (maximum 12)")]
    UnsupportedPrincipal(u32),

    #[error("densities live in different spaces")]
    SpaceMismatch,

    #[error("momentum space is not available for model density `{0}`")]
    MomentumUnsupported(String),

    #[error("support mismatch: reference density vanishes where the other does not (near x={at:e})")]
    SupportMismatch { at: f64 },

    #[error("{what}: quadrature did not converge (estimate {value:e}, error {error:e})")]
    Quadrature { what: &'static str, value: f64, error: f64 },

    #[error("density normalization residual {residual:.3e} exceeds {tolerance:.1e}")]
    Normalization { residual: f64, tolerance: f64 },

    #[error("entropy bound violated: {0}")]
    BoundViolation(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the input data.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Quadrature { .. }
            | Error::Normalization { .. }
            | Error::BoundViolation(_)
            | Error::SupportMismatch { .. } => true,
            Error::Stage { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    /// Attach the offending path to an I/O failure.
    pub fn file(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Error {
        Error::File {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub(crate) fn at_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
