use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failure modes of the solvers.
///
/// Every variant corresponds to a condition the numerics can detect on its
/// own; none of them is recoverable by retrying with the same inputs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid parity: Simpson quadrature needs an even interval count, got {0}")]
    GridParity(usize),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("domain: {0}")]
    Domain(String),

    #[error("profile blow-up: |q| = {value:.3e} at r = {radius:.6}")]
    ProfileBlowUp { radius: f64, value: f64 },

    #[error("resonant mode l = {l}: discrete operator has eigenvalue {sigma:.3e} near zero")]
    ResonantMode { l: usize, sigma: f64 },

    #[error("no bracket: f(a) = {fa:.6e} and f(b) = {fb:.6e} have the same sign")]
    NoBracket { fa: f64, fb: f64 },

    #[error("no steady state at this A = {0}")]
    NoSteadyState(f64),

    #[error("{count} roots in lambda found for A = {a}; the shooting endpoint is not monotone")]
    MultipleRoots { a: f64, count: usize },

    #[error("beyond fold: lambda = {lambda} is not below the branch maximum {lambda_max}")]
    BeyondFold { lambda: f64, lambda_max: f64 },

    #[error("positivity violation: sigma[{n},{l}] = {sigma:.6e}")]
    PositivityViolation { n: usize, l: usize, sigma: f64 },

    #[error("extend branch: bifurcation functional has no sign change on the traced A-window")]
    ExtendBranch,

    #[error("exceptional beta: beta = {beta} is within {gap:.1e} of beta_{l} = {beta_l}")]
    ExceptionalBeta {
        l: usize,
        beta: f64,
        beta_l: f64,
        gap: f64,
    },

    #[error("not enough points: {0}")]
    InsufficientPoints(String),

    #[error("validity cap: |V| = {0} exceeds 0.5")]
    ValidityCap(f64),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, err: impl std::fmt::Display) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            message: err.to_string(),
        }
    }
}
