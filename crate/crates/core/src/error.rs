//! Error type shared by every stage of the toolkit.
//!
//! Variants carry enough context to be actionable in CLI diagnostics and in
//! per-country failure reports, and each maps to a stable class name via
//! [`Error::class`] so scripted callers can match on it.

use crate::quarterly::Quarter;

/// Everything that can go wrong while assembling series, decomposing them,
/// fitting probits, or evaluating forecasts.
#[derive(Debug, Clone, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    /// A quarter token did not parse as `YYYY:Q[1-4]`.
    #[error("invalid quarter token `{token}` (expected YYYY:Q1..YYYY:Q4)")]
    InvalidQuarter { token: String },

    /// A selection criterion name was not one of the known four.
    #[error("unknown selection criterion `{token}` (expected rmse, mae, mape, or mcfadden)")]
    InvalidCriterion { token: String },

    /// A series was constructed or an operation was attempted with no data.
    #[error("empty input: {context}")]
    EmptyInput { context: &'static str },

    /// A value that must be finite was NaN or infinite.
    #[error("non-finite value at {quarter}: {context}")]
    NonFiniteValue {
        quarter: Quarter,
        context: &'static str,
    },

    /// Two series have no overlapping quarters.
    #[error("series ranges do not overlap ({context})")]
    EmptyIntersection { context: &'static str },

    /// Logs or ratios were requested of a value that must be positive.
    #[error("non-positive value {value} at {quarter}: {context}")]
    NonPositiveInput {
        quarter: Quarter,
        value: f64,
        context: &'static str,
    },

    /// An elementwise operation was given series on different calendar ranges.
    #[error("misaligned series: {left_start}..{left_end} vs {right_start}..{right_end}")]
    MisalignedSeries {
        left_start: Quarter,
        left_end: Quarter,
        right_start: Quarter,
        right_end: Quarter,
    },

    /// A lag of `lag` quarters would leave no observations.
    #[error("lag of {lag} quarters exceeds series length {len}")]
    LagTooLarge { lag: usize, len: usize },

    /// The smoothing penalty must be strictly positive.
    #[error("smoothing parameter lambda must be > 0, got {lambda}")]
    NonPositiveLambda { lambda: f64 },

    /// Trend extraction needs at least four observations.
    #[error("series has {len} observations; trend extraction needs at least {min}")]
    SeriesTooShort { len: usize, min: usize },

    /// Response vector entries must be 0 or 1.
    #[error("response entry {value} at row {row} is not 0/1")]
    InvalidResponse { row: usize, value: u8 },

    /// A regressor cell was NaN or infinite.
    #[error("non-finite regressor value in column `{column}` at row {row}")]
    NonFiniteRegressor { row: usize, column: String },

    /// The response is all zeros or all ones, so the model is unidentified.
    #[error(
        "degenerate below-trend dummy ({context}): single-class response, no probit can be fit"
    )]
    DegenerateDummy { all_ones: bool, context: String },

    /// Estimates diverged: the likelihood keeps improving as coefficients
    /// grow without bound, the signature of perfectly separated data.
    #[error(
        "perfect separation detected after {iterations} iterations (|beta| = {beta_norm:.3e})"
    )]
    PerfectSeparation { iterations: usize, beta_norm: f64 },

    /// The observed information matrix is numerically singular.
    #[error(
        "observed information matrix is numerically singular (condition estimate {condition:.3e})"
    )]
    SingularInformation { condition: f64 },

    /// Newton iterations hit the cap without meeting either tolerance.
    #[error("probit estimation did not converge after {iterations} iterations (gradient norm {gradient_norm:.3e})")]
    NotConverged {
        iterations: usize,
        gradient_norm: f64,
    },

    /// Rows, columns, or index sets do not line up.
    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// The restricted block of the covariance matrix cannot be inverted.
    #[error("restricted covariance block is singular; cannot form Wald statistic")]
    SingularSubcovariance,

    /// Paired vectors of unequal length.
    #[error("length mismatch: actual has {actual} entries, forecast has {forecast}")]
    LengthMismatch { actual: usize, forecast: usize },

    /// Every actual is zero, so percentage errors are undefined.
    #[error("all actual values are zero; MAPE is undefined under the skip-zero convention")]
    AllActualsZero,

    /// The effective estimation sample is too small to trust.
    #[error("effective sample of {got} observations after lagging is below the minimum {min}")]
    SampleTooSmall { got: usize, min: usize },

    /// No candidate model clears the significance filter.
    #[error("no candidate clears the {threshold} significance filter (smallest p-value {smallest_p:.4})")]
    NoSignificantModel { threshold: f64, smallest_p: f64 },
}

impl Error {
    /// Stable one-word class name used in CLI diagnostics (`error[Class]: ...`).
    pub fn class(&self) -> &'static str {
        match self {
            Error::InvalidQuarter { .. } => "InvalidQuarter",
            Error::InvalidCriterion { .. } => "InvalidCriterion",
            Error::EmptyInput { .. } => "EmptyInput",
            Error::NonFiniteValue { .. } => "NonFiniteValue",
            Error::EmptyIntersection { .. } => "EmptyIntersection",
            Error::NonPositiveInput { .. } => "NonPositiveInput",
            Error::MisalignedSeries { .. } => "MisalignedSeries",
            Error::LagTooLarge { .. } => "LagTooLarge",
            Error::NonPositiveLambda { .. } => "NonPositiveLambda",
            Error::SeriesTooShort { .. } => "SeriesTooShort",
            Error::InvalidResponse { .. } => "InvalidResponse",
            Error::NonFiniteRegressor { .. } => "NonFiniteRegressor",
            Error::DegenerateDummy { .. } => "DegenerateDummy",
            Error::PerfectSeparation { .. } => "PerfectSeparation",
            Error::SingularInformation { .. } => "SingularInformation",
            Error::NotConverged { .. } => "NotConverged",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::SingularSubcovariance => "SingularSubcovariance",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::AllActualsZero => "AllActualsZero",
            Error::SampleTooSmall { .. } => "SampleTooSmall",
            Error::NoSignificantModel { .. } => "NoSignificantModel",
        }
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
