//! Core algorithms for forecasting below-trend output from the yield
//! spread on quarterly macro panels.
//!
//! The crate is organized along the pipeline:
//!
//! - [`quarterly`]: calendar-indexed series and panel assembly (deflation,
//!   logs, lags, spreads, range alignment);
//! - [`hp`]: penalized trend/cycle decomposition and the below-trend dummy;
//! - [`probit`]: maximum likelihood probit with analytic derivatives, Wald
//!   tests, and the numerically careful normal CDF under [`probit::normal`];
//! - [`eval`]: RMSE / MAE / MAPE forecast accuracy metrics;
//! - [`pipeline`]: candidate-lag grids, significance-filtered model
//!   selection, augmented fits, probability paths, and multi-country runs;
//! - [`synthetic`]: deterministic synthetic panels for demos and tests.
//!
//! The commonly used types are re-exported at the crate root.

pub mod error;
pub mod eval;
pub mod hp;
pub mod pipeline;
pub mod probit;
pub mod quarterly;
pub mod synthetic;

pub use error::{Error, Result};
pub use eval::EvaluationReport;
pub use hp::{HpDecomposition, LambdaSweep, RecessionDummy, DEFAULT_LAMBDA, DEFAULT_LAMBDA_SWEEP};
pub use pipeline::{
    CandidateGrid, CandidateModel, CountryStudy, ModelSpec, PreparedPanel, SelectionCriterion,
    SelectionOutcome, StudyOptions, StudyReport, VariableSummary,
};
pub use probit::{DesignMatrix, ProbitFit, WaldTest};
pub use quarterly::{CountryPanel, Quarter, QuarterlySeries};
