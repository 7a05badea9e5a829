use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("branching ratios out of level {level} sum to {sum}, expected 1")]
    Branching { level: usize, sum: f64 },

    #[error("hamiltonian is not hermitian (deviation {deviation:e})")]
    NonHermitian { deviation: f64 },

    #[error("steady-state system is singular (pivot ratio {pivot_ratio:e})")]
    SingularSystem { pivot_ratio: f64 },

    #[error("invalid velocity grid: {0}")]
    InvalidGrid(String),

    #[error("velocity cutoff {cutoff:e} rad/s excludes every node")]
    EmptyGrid { cutoff: f64 },

    #[error("reference absorption {absorption:e} is not positive")]
    DegenerateReference { absorption: f64 },

    #[error("no feature exceeds the noise floor")]
    NoFeature,

    #[error("spectrum and baseline do not share a detuning axis")]
    AxisMismatch,

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("integrator step too large: {0}")]
    StepTooLarge(String),

    #[error("at velocity {velocity} m/s: {source}")]
    AtVelocity {
        velocity: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("at probe detuning {detuning_mhz} MHz: {source}")]
    AtDetuning {
        detuning_mhz: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Strips velocity/detuning context and returns the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtVelocity { source, .. } | Error::AtDetuning { source, .. } => source.root(),
            other => other,
        }
    }
}
