use core::fmt;

/// A violated standing assumption on the problem data.
#[derive(Debug, Clone, PartialEq)]
pub enum ValidationError {
    /// `-1 < h1 < h2 < 1` does not hold.
    BreakpointOrder { h1: f64, h2: f64 },
    /// One of `omega1..omega3` is not strictly positive.
    NonPositiveOmega { index: usize, value: f64 },
    /// `beta1' = beta2' = 0`.
    DegenerateBetaPrime,
    /// `beta1 = beta2 = 0`.
    DegenerateBeta,
    /// `rho = beta1' beta2 - beta1 beta2'` is not positive.
    NonPositiveRho { rho: f64 },
    /// A transmission constant `gamma_i` or `delta_i` is zero.
    ZeroTransmission { name: &'static str, index: usize },
    /// A coefficient is NaN or infinite.
    NonFinite { field: &'static str },
    /// A solver setting is out of range.
    SolverConfig { field: &'static str, value: f64 },
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BreakpointOrder { h1, h2 } => {
                write!(f, "breakpoints must satisfy -1 < h1 < h2 < 1 (h1 = {h1}, h2 = {h2})")
            }
            Self::NonPositiveOmega { index, value } => {
                write!(f, "omega{index} must be positive (got {value})")
            }
            Self::DegenerateBetaPrime => write!(f, "degenerate (β₁′,β₂′): both are zero"),
            Self::DegenerateBeta => write!(f, "degenerate (β₁,β₂): both are zero"),
            Self::NonPositiveRho { rho } => write!(f, "ρ ≤ 0 (ρ = β₁′β₂ − β₁β₂′ = {rho})"),
            Self::ZeroTransmission { name, index } => {
                write!(f, "transmission constant {name}{index} must be nonzero")
            }
            Self::NonFinite { field } => write!(f, "{field} must be finite"),
            Self::SolverConfig { field, value } => {
                write!(f, "solver setting {field} out of range (got {value})")
            }
        }
    }
}

/// Errors raised by evaluation, integration and root finding.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    Validation(ValidationError),
    /// Position outside `[-1, 1]`.
    OutOfDomain { x: f64 },
    /// Evaluation exactly at a transmission point without a side tag.
    OneSidedValueRequired { x: f64 },
    /// The adaptive integrator could not make progress.
    StiffOrInvalid { x: f64, step: f64 },
    /// Wronskian of two solutions built at different spectral parameters.
    LambdaMismatch { a: f64, b: f64 },
    /// The right-launched solution vanished (the record is not a root).
    DegenerateEigenfunction { lambda: f64 },
    /// An asymptotic formula was requested for a case it does not cover.
    WrongCase,
    /// A decay check asked for an index that the records do not contain.
    MissingIndex { n: usize },
    /// Two Hilbert-space elements were sampled on different grids.
    IncompatibleGrids,
    /// Computed roots do not align with asymptotic indices by one shift.
    MisalignedIndices { first: i64, other: i64, at: usize },
    /// An argument violates a documented precondition.
    InvalidArgument(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Validation(e) => write!(f, "invalid problem: {e}"),
            Self::OutOfDomain { x } => write!(f, "position {x} lies outside [-1, 1]"),
            Self::OneSidedValueRequired { x } => {
                write!(f, "one-sided value required at transmission point x = {x}")
            }
            Self::StiffOrInvalid { x, step } => write!(
                f,
                "stiff or invalid coefficients: step size underflow (h = {step:e}) at x = {x}"
            ),
            Self::LambdaMismatch { a, b } => {
                write!(f, "solutions built at different λ ({a} vs {b})")
            }
            Self::DegenerateEigenfunction { lambda } => {
                write!(f, "eigenfunction at λ = {lambda} is numerically zero")
            }
            Self::WrongCase => write!(f, "formula not available for this asymptotic case"),
            Self::MissingIndex { n } => write!(f, "no computed eigenvalue for asymptotic index {n}"),
            Self::IncompatibleGrids => write!(f, "elements are sampled on different grids"),
            Self::MisalignedIndices { first, other, at } => write!(
                f,
                "index offset is not constant: {first} at the first aligned root, {other} at record {at}"
            ),
            Self::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl From<ValidationError> for Error {
    fn from(e: ValidationError) -> Self {
        Self::Validation(e)
    }
}

impl core::error::Error for ValidationError {}
impl core::error::Error for Error {}
