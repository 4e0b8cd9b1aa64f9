//! The full study pipeline: from a raw country panel to a selected
//! forecasting model with diagnostics.
//!
//! Stages, per country: deflate GDP and take logs; extract the cycle and
//! the below-trend dummy; fit one probit per candidate spread lag on that
//! lag's maximal sample; filter candidates by the significance of the
//! spread term and pick the best forecaster among the survivors; then
//! augment the chosen model with lagged unemployment and the lagged log
//! stock index on the identical sample and test whether the additions
//! matter. Countries are processed independently: one country's failure
//! is recorded and the rest of the study proceeds.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::eval::{self, EvaluationReport};
use crate::hp::{
    below_trend_dummy, hp_decompose, lambda_sweep, HpDecomposition, LambdaSweep, RecessionDummy,
    DEFAULT_LAMBDA, DEFAULT_LAMBDA_SWEEP,
};
use crate::probit::{fit_probit, predict_prob, wald_test, DesignMatrix, ProbitFit, WaldTest};
use crate::quarterly::{real_log_gdp, spread, CountryPanel, Quarter, QuarterlySeries};

/// Smallest estimation sample a candidate model may be fit on.
pub const MIN_EFFECTIVE_SAMPLE: usize = 20;

/// What "best" means when ranking significant candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionCriterion {
    /// Smallest root mean squared error (the default).
    Rmse,
    /// Smallest mean absolute error.
    Mae,
    /// Smallest mean absolute percentage error.
    Mape,
    /// Largest McFadden pseudo R-squared.
    McFadden,
}

impl SelectionCriterion {
    /// Value of this criterion for a candidate.
    fn value(&self, candidate: &CandidateModel) -> f64 {
        match self {
            SelectionCriterion::Rmse => candidate.eval.rmse,
            SelectionCriterion::Mae => candidate.eval.mae,
            SelectionCriterion::Mape => candidate.eval.mape,
            SelectionCriterion::McFadden => candidate.fit.mcfadden_r2,
        }
    }

    /// True when smaller values are better.
    fn minimizes(&self) -> bool {
        !matches!(self, SelectionCriterion::McFadden)
    }
}

impl fmt::Display for SelectionCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SelectionCriterion::Rmse => "rmse",
            SelectionCriterion::Mae => "mae",
            SelectionCriterion::Mape => "mape",
            SelectionCriterion::McFadden => "mcfadden",
        };
        f.write_str(s)
    }
}

impl FromStr for SelectionCriterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rmse" => Ok(SelectionCriterion::Rmse),
            "mae" => Ok(SelectionCriterion::Mae),
            "mape" => Ok(SelectionCriterion::Mape),
            "mcfadden" => Ok(SelectionCriterion::McFadden),
            _ => Err(Error::InvalidCriterion {
                token: s.to_string(),
            }),
        }
    }
}

/// Everything configurable about a study run.
#[derive(Debug, Clone)]
pub struct StudyOptions {
    /// Smoothing penalty for the headline decomposition.
    pub lambda: f64,
    /// Penalties for the robustness sweep.
    pub lambda_sweep: Vec<f64>,
    /// Largest candidate spread lag, in quarters.
    pub max_lag: usize,
    /// Significance level the spread term must clear.
    pub significance_threshold: f64,
    /// Fallback level when nothing clears the strict one; selections made
    /// here are flagged.
    pub relaxed_threshold: f64,
    /// Ranking rule among significant candidates.
    pub criterion: SelectionCriterion,
    /// When true, candidate `h` enters spread lags `1..=h` jointly and
    /// significance means the joint Wald test of all of them.
    pub joint_lags: bool,
}

impl Default for StudyOptions {
    fn default() -> Self {
        StudyOptions {
            lambda: DEFAULT_LAMBDA,
            lambda_sweep: DEFAULT_LAMBDA_SWEEP.to_vec(),
            max_lag: 6,
            significance_threshold: 0.01,
            relaxed_threshold: 0.10,
            criterion: SelectionCriterion::Rmse,
            joint_lags: false,
        }
    }
}

impl StudyOptions {
    /// Checks the numeric ranges; call before a run to fail fast.
    pub fn validate(&self) -> Result<()> {
        if self.lambda <= 0.0 || !self.lambda.is_finite() {
            return Err(Error::NonPositiveLambda {
                lambda: self.lambda,
            });
        }
        if self.lambda_sweep.is_empty() {
            return Err(Error::EmptyInput {
                context: "lambda sweep list",
            });
        }
        for &l in &self.lambda_sweep {
            if l <= 0.0 || !l.is_finite() {
                return Err(Error::NonPositiveLambda { lambda: l });
            }
        }
        if self.max_lag == 0 {
            return Err(Error::EmptyInput {
                context: "candidate lag range (max_lag must be >= 1)",
            });
        }
        for t in [self.significance_threshold, self.relaxed_threshold] {
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::EmptyInput {
                    context: "significance thresholds must lie strictly inside (0, 1)",
                });
            }
        }
        if self.relaxed_threshold < self.significance_threshold {
            return Err(Error::EmptyInput {
                context: "relaxed threshold must not be stricter than the primary one",
            });
        }
        Ok(())
    }
}

/// A panel reduced to the derived series every model draws from, all on
/// the panel's common calendar range.
#[derive(Debug, Clone)]
pub struct PreparedPanel {
    country: String,
    log_real_gdp: QuarterlySeries,
    decomposition: HpDecomposition,
    dummy: RecessionDummy,
    spread: QuarterlySeries,
    unemployment: QuarterlySeries,
    log_stock: QuarterlySeries,
}

impl PreparedPanel {
    pub fn new(panel: &CountryPanel, lambda: f64) -> Result<Self> {
        let p = panel.restrict_to_common_range();
        let log_real_gdp = real_log_gdp(p.nominal_gdp(), p.deflator())?;
        let decomposition = hp_decompose(&log_real_gdp, lambda)?;
        let dummy = below_trend_dummy(&decomposition);
        let spread = spread(p.rate_long(), p.rate_short())?;
        let log_stock = p.stock_index().ln()?;
        Ok(PreparedPanel {
            country: p.country().to_string(),
            log_real_gdp,
            decomposition,
            dummy,
            spread,
            unemployment: p.unemployment().clone(),
            log_stock,
        })
    }

    pub fn country(&self) -> &str {
        &self.country
    }

    pub fn log_real_gdp(&self) -> &QuarterlySeries {
        &self.log_real_gdp
    }

    pub fn decomposition(&self) -> &HpDecomposition {
        &self.decomposition
    }

    pub fn dummy(&self) -> &RecessionDummy {
        &self.dummy
    }

    pub fn spread(&self) -> &QuarterlySeries {
        &self.spread
    }

    pub fn unemployment(&self) -> &QuarterlySeries {
        &self.unemployment
    }

    pub fn log_stock(&self) -> &QuarterlySeries {
        &self.log_stock
    }

    /// Number of quarters on the common range.
    pub fn len(&self) -> usize {
        self.dummy.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dummy.is_empty()
    }

    fn start(&self) -> Quarter {
        self.dummy.start()
    }
}

/// Which regressors a model carries; used to rebuild designs for
/// prediction so fits and panels cannot silently drift apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelSpec {
    /// Forecast horizon: the spread enters at lag `spread_lag`.
    pub spread_lag: usize,
    /// All spread lags `1..=spread_lag` instead of the single one.
    pub joint_lags: bool,
    /// Adds lagged unemployment and lagged log stock index.
    pub augmented: bool,
}

/// Builds the estimation design for `spec` over the maximal sample the
/// lags allow, returning it with the first sample quarter.
fn build_design(prepared: &PreparedPanel, spec: ModelSpec) -> Result<(DesignMatrix, Quarter)> {
    let h = spec.spread_lag;
    if h == 0 {
        return Err(Error::EmptyInput {
            context: "spread lag must be at least one quarter",
        });
    }
    let total = prepared.len();
    if h >= total {
        return Err(Error::LagTooLarge { lag: h, len: total });
    }
    let n = total - h;
    if n < MIN_EFFECTIVE_SAMPLE {
        return Err(Error::SampleTooSmall {
            got: n,
            min: MIN_EFFECTIVE_SAMPLE,
        });
    }
    let sample_start = prepared.start().offset(h as i64);
    let sample_end = prepared.dummy.end();

    let response_window = prepared.dummy.slice(sample_start, sample_end)?;
    if !response_window.has_both_classes() {
        return Err(Error::DegenerateDummy {
            all_ones: response_window.ones() == response_window.len(),
            context: format!("{}: lag {h} estimation sample", prepared.country),
        });
    }
    let response = response_window.values().to_vec();

    let mut columns: Vec<(String, Vec<f64>)> = Vec::new();
    let lags: Vec<usize> = if spec.joint_lags {
        (1..=h).collect()
    } else {
        vec![h]
    };
    for lag in lags {
        // The regressor at sample index i (quarter start+h+i) is the
        // spread observed `lag` quarters earlier.
        let values = prepared.spread.values()[h - lag..total - lag].to_vec();
        columns.push((format!("spread_l{lag}"), values));
    }
    if spec.augmented {
        columns.push((
            "unemp_l1".to_string(),
            prepared.unemployment.values()[h - 1..total - 1].to_vec(),
        ));
        columns.push((
            "log_stock_l1".to_string(),
            prepared.log_stock.values()[h - 1..total - 1].to_vec(),
        ));
    }
    Ok((
        DesignMatrix::with_intercept(columns, response)?,
        sample_start,
    ))
}

/// One fitted candidate from the lag grid.
#[derive(Debug, Clone)]
pub struct CandidateModel {
    pub spread_lag: usize,
    pub fit: ProbitFit,
    /// Significance of the spread term: the coefficient p-value in
    /// single-lag mode, the joint Wald p-value of all spread lags in
    /// joint mode.
    pub significance_p: f64,
    /// In-sample forecast accuracy of the fitted probabilities against
    /// the dummy.
    pub eval: EvaluationReport,
    pub sample_start: Quarter,
    pub n_obs: usize,
}

/// All candidate lags for one country. Lags whose fit failed are kept as
/// diagnostics; they do not abort the rest of the grid.
#[derive(Debug, Clone)]
pub struct CandidateGrid {
    pub country: String,
    pub lambda: f64,
    pub joint_lags: bool,
    /// Successful candidates in ascending lag order.
    pub candidates: Vec<CandidateModel>,
    /// `(lag, error)` for candidates that could not be fit.
    pub failures: Vec<(usize, Error)>,
}

/// Fits one probit per candidate spread lag `1..=max_lag`.
pub fn build_candidate_grid(panel: &CountryPanel, options: &StudyOptions) -> Result<CandidateGrid> {
    options.validate()?;
    let prepared = PreparedPanel::new(panel, options.lambda)?;
    grid_from_prepared(&prepared, options)
}

/// Same as [`build_candidate_grid`] for an already-prepared panel.
pub fn grid_from_prepared(
    prepared: &PreparedPanel,
    options: &StudyOptions,
) -> Result<CandidateGrid> {
    let mut candidates = Vec::new();
    let mut failures = Vec::new();
    for h in 1..=options.max_lag {
        match fit_candidate(prepared, h, options) {
            Ok(c) => candidates.push(c),
            Err(e) => failures.push((h, e)),
        }
    }
    if candidates.is_empty() {
        // Nothing fit at any lag; surface the first failure as the cause.
        let (_, first) = failures
            .into_iter()
            .next()
            .expect("max_lag >= 1 so at least one attempt was made");
        return Err(first);
    }
    Ok(CandidateGrid {
        country: prepared.country.clone(),
        lambda: prepared.decomposition.lambda(),
        joint_lags: options.joint_lags,
        candidates,
        failures,
    })
}

fn fit_candidate(
    prepared: &PreparedPanel,
    h: usize,
    options: &StudyOptions,
) -> Result<CandidateModel> {
    let spec = ModelSpec {
        spread_lag: h,
        joint_lags: options.joint_lags,
        augmented: false,
    };
    let (design, sample_start) = build_design(prepared, spec)?;
    let fit = fit_probit(&design)?;
    let significance_p = if options.joint_lags && h > 1 {
        let restricted: Vec<usize> = (1..=h).collect();
        wald_test(&fit, &restricted)?.chi2_p_value
    } else {
        fit.p_values[1]
    };
    let actual: Vec<f64> = design.response().iter().map(|&v| f64::from(v)).collect();
    let eval = eval::evaluate(&actual, &fit.fitted_probabilities)?;
    Ok(CandidateModel {
        spread_lag: h,
        n_obs: fit.n_obs,
        fit,
        significance_p,
        eval,
        sample_start,
    })
}

/// The chosen forecast window and how it was chosen.
#[derive(Debug, Clone)]
pub struct SelectionOutcome {
    pub selected_lag: usize,
    /// Threshold the winning model actually cleared.
    pub threshold_used: f64,
    /// True when only the relaxed threshold produced a selection.
    pub relaxed: bool,
    pub criterion: SelectionCriterion,
    /// Lags clearing `threshold_used`, ascending.
    pub significant_lags: Vec<usize>,
}

/// Filters the grid to candidates significant at `threshold`, then picks
/// the best by `criterion`; ties go to the shorter lag.
pub fn select_window(
    grid: &CandidateGrid,
    threshold: f64,
    criterion: SelectionCriterion,
) -> Result<SelectionOutcome> {
    if grid.candidates.is_empty() {
        return Err(Error::EmptyInput {
            context: "selection over an empty candidate grid",
        });
    }
    let significant: Vec<&CandidateModel> = grid
        .candidates
        .iter()
        .filter(|c| c.significance_p <= threshold)
        .collect();
    if significant.is_empty() {
        let smallest_p = grid
            .candidates
            .iter()
            .map(|c| c.significance_p)
            .fold(f64::INFINITY, f64::min);
        return Err(Error::NoSignificantModel {
            threshold,
            smallest_p,
        });
    }
    // Candidates are in ascending lag order, so requiring a strict
    // improvement to displace the incumbent resolves ties downward.
    let mut best = significant[0];
    for c in &significant[1..] {
        let better = if criterion.minimizes() {
            criterion.value(c) < criterion.value(best)
        } else {
            criterion.value(c) > criterion.value(best)
        };
        if better {
            best = c;
        }
    }
    Ok(SelectionOutcome {
        selected_lag: best.spread_lag,
        threshold_used: threshold,
        relaxed: false,
        criterion,
        significant_lags: significant.iter().map(|c| c.spread_lag).collect(),
    })
}

/// [`select_window`] at the strict threshold, falling back to the relaxed
/// one (and flagging the result) when nothing clears it.
pub fn select_window_with_relaxation(
    grid: &CandidateGrid,
    options: &StudyOptions,
) -> Result<SelectionOutcome> {
    match select_window(grid, options.significance_threshold, options.criterion) {
        Err(Error::NoSignificantModel { .. }) => {
            let mut outcome = select_window(grid, options.relaxed_threshold, options.criterion)?;
            outcome.relaxed = true;
            Ok(outcome)
        }
        other => other,
    }
}

/// The augmented model next to its spread-only twin on the identical
/// sample, with the joint test of the added regressors.
#[derive(Debug, Clone)]
pub struct AugmentedComparison {
    pub spread_lag: usize,
    pub augmented_fit: ProbitFit,
    pub augmented_eval: EvaluationReport,
    /// Spread-only refit on exactly the augmented model's sample, so the
    /// two likelihoods are nested and directly comparable.
    pub spread_only_fit: ProbitFit,
    pub spread_only_eval: EvaluationReport,
    /// Wald test that the unemployment and stock-index terms are jointly
    /// zero in the augmented model.
    pub wald_augmenting: WaldTest,
    /// `ll(augmented) - ll(spread only)`; non-negative up to solver
    /// tolerance because the models are nested.
    pub ll_gain: f64,
    pub sample_start: Quarter,
    pub n_obs: usize,
}

/// Fits `{1, spread_lag(s), unemployment(t-1), ln stock(t-1)}` at the
/// selected lag and the spread-only model on the same sample.
pub fn fit_augmented(
    prepared: &PreparedPanel,
    spread_lag: usize,
    options: &StudyOptions,
) -> Result<AugmentedComparison> {
    let aug_spec = ModelSpec {
        spread_lag,
        joint_lags: options.joint_lags,
        augmented: true,
    };
    let base_spec = ModelSpec {
        augmented: false,
        ..aug_spec
    };
    let (aug_design, aug_start) = build_design(prepared, aug_spec)?;
    let (base_design, base_start) = build_design(prepared, base_spec)?;
    // The added regressors enter at lag 1 <= spread_lag, so both designs
    // cover the same quarters by construction.
    debug_assert_eq!(aug_start, base_start);
    debug_assert_eq!(aug_design.n(), base_design.n());

    let augmented_fit = fit_probit(&aug_design)?;
    let spread_only_fit = fit_probit(&base_design)?;

    let k = augmented_fit.coefficients.len();
    let wald_augmenting = wald_test(&augmented_fit, &[k - 2, k - 1])?;

    let actual: Vec<f64> = aug_design
        .response()
        .iter()
        .map(|&v| f64::from(v))
        .collect();
    let augmented_eval = eval::evaluate(&actual, &augmented_fit.fitted_probabilities)?;
    let spread_only_eval = eval::evaluate(&actual, &spread_only_fit.fitted_probabilities)?;
    let ll_gain = augmented_fit.log_likelihood - spread_only_fit.log_likelihood;

    Ok(AugmentedComparison {
        spread_lag,
        n_obs: augmented_fit.n_obs,
        augmented_fit,
        augmented_eval,
        spread_only_fit,
        spread_only_eval,
        wald_augmenting,
        ll_gain,
        sample_start: aug_start,
    })
}

/// Fitted below-trend probabilities as a calendar series, rebuilt from
/// the panel so a fit can never be paired with the wrong data.
pub fn probability_path(
    fit: &ProbitFit,
    prepared: &PreparedPanel,
    spec: ModelSpec,
) -> Result<QuarterlySeries> {
    let (design, sample_start) = build_design(prepared, spec)?;
    if design.names() != fit.names.as_slice() {
        return Err(Error::DimensionMismatch {
            context: "fit coefficients vs rebuilt design columns",
            expected: design.k(),
            got: fit.coefficients.len(),
        });
    }
    let mut probs = Vec::with_capacity(design.n());
    for t in 0..design.n() {
        let row: Vec<f64> = (1..design.k()).map(|j| design.matrix()[(t, j)]).collect();
        probs.push(predict_prob(fit, &row)?);
    }
    QuarterlySeries::new(sample_start, probs)
}

/// Location, spread, and shape summary of one variable.
#[derive(Debug, Clone)]
pub struct VariableSummary {
    pub variable: String,
    pub mean: f64,
    pub median: f64,
    pub max: f64,
    pub min: f64,
    /// Sample standard deviation (n-1 denominator).
    pub std_dev: f64,
    /// Third standardized moment; `None` when the variable is constant.
    pub skewness: Option<f64>,
    /// Fourth standardized moment (not excess); `None` when constant.
    pub kurtosis: Option<f64>,
    pub observations: usize,
}

/// Summarizes a slice of observations.
pub fn summarize(variable: impl Into<String>, values: &[f64]) -> Result<VariableSummary> {
    if values.is_empty() {
        return Err(Error::EmptyInput {
            context: "summary of an empty variable",
        });
    }
    let n = values.len();
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;

    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite by construction"));
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };

    let m2 = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / nf;
    let m3 = values.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / nf;
    let m4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / nf;
    let std_dev = if n > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0)).sqrt()
    } else {
        0.0
    };
    let (skewness, kurtosis) = if m2 > 0.0 {
        (Some(m3 / m2.powf(1.5)), Some(m4 / (m2 * m2)))
    } else {
        // A constant variable has no defined shape moments.
        (None, None)
    };

    Ok(VariableSummary {
        variable: variable.into(),
        mean,
        median,
        max: sorted[n - 1],
        min: sorted[0],
        std_dev,
        skewness,
        kurtosis,
        observations: n,
    })
}

/// Summary rows for the four derived variables the models use, on the
/// panel's common range.
pub fn summarize_panel(panel: &CountryPanel, lambda: f64) -> Result<Vec<VariableSummary>> {
    let prepared = PreparedPanel::new(panel, lambda)?;
    Ok(vec![
        summarize("log_real_gdp", prepared.log_real_gdp.values())?,
        summarize("spread", prepared.spread.values())?,
        summarize("unemployment", prepared.unemployment.values())?,
        summarize("log_stock_index", prepared.log_stock.values())?,
    ])
}

/// Everything produced for one country.
#[derive(Debug, Clone)]
pub struct CountryStudy {
    pub country: String,
    pub summary: Vec<VariableSummary>,
    pub decomposition: HpDecomposition,
    pub dummy: RecessionDummy,
    pub sweep: LambdaSweep,
    pub grid: CandidateGrid,
    pub selection: SelectionOutcome,
    pub augmented: AugmentedComparison,
    /// Below-trend probabilities from the augmented (final) model.
    pub probability_path: QuarterlySeries,
    /// Same quarters, from the spread-only model refit on that sample.
    pub spread_probability_path: QuarterlySeries,
}

/// Runs every stage for one country.
pub fn country_study(panel: &CountryPanel, options: &StudyOptions) -> Result<CountryStudy> {
    options.validate()?;
    let prepared = PreparedPanel::new(panel, options.lambda)?;
    let summary = vec![
        summarize("log_real_gdp", prepared.log_real_gdp.values())?,
        summarize("spread", prepared.spread.values())?,
        summarize("unemployment", prepared.unemployment.values())?,
        summarize("log_stock_index", prepared.log_stock.values())?,
    ];
    let sweep = lambda_sweep(&prepared.log_real_gdp, &options.lambda_sweep)?;
    let grid = grid_from_prepared(&prepared, options)?;
    let selection = select_window_with_relaxation(&grid, options)?;
    let augmented = fit_augmented(&prepared, selection.selected_lag, options)?;
    let probability_path = probability_path(
        &augmented.augmented_fit,
        &prepared,
        ModelSpec {
            spread_lag: selection.selected_lag,
            joint_lags: options.joint_lags,
            augmented: true,
        },
    )?;
    let spread_probability_path = probability_path_for_base(&prepared, &augmented, options)?;
    Ok(CountryStudy {
        country: prepared.country.clone(),
        summary,
        decomposition: prepared.decomposition.clone(),
        dummy: prepared.dummy.clone(),
        sweep,
        grid,
        selection,
        augmented,
        probability_path,
        spread_probability_path,
    })
}

fn probability_path_for_base(
    prepared: &PreparedPanel,
    augmented: &AugmentedComparison,
    options: &StudyOptions,
) -> Result<QuarterlySeries> {
    probability_path(
        &augmented.spread_only_fit,
        prepared,
        ModelSpec {
            spread_lag: augmented.spread_lag,
            joint_lags: options.joint_lags,
            augmented: false,
        },
    )
}

/// A whole multi-country run. Failures stay attached to their country.
#[derive(Debug)]
pub struct StudyReport {
    pub options: StudyOptions,
    /// Per-country outcome, sorted by country name.
    pub outcomes: Vec<(String, Result<CountryStudy>)>,
}

impl StudyReport {
    /// Number of countries whose study completed.
    pub fn completed(&self) -> usize {
        self.outcomes.iter().filter(|(_, r)| r.is_ok()).count()
    }
}

/// Runs [`country_study`] per panel, isolating failures, with results
/// ordered by country name for deterministic output.
pub fn run_full_study(panels: &[CountryPanel], options: &StudyOptions) -> Result<StudyReport> {
    if panels.is_empty() {
        return Err(Error::EmptyInput {
            context: "study over zero panels",
        });
    }
    options.validate()?;
    let mut order: Vec<usize> = (0..panels.len()).collect();
    order.sort_by(|&a, &b| panels[a].country().cmp(panels[b].country()));
    let outcomes = order
        .into_iter()
        .map(|i| {
            let panel = &panels[i];
            (panel.country().to_string(), country_study(panel, options))
        })
        .collect();
    Ok(StudyReport {
        options: options.clone(),
        outcomes,
    })
}
