//! Builders for every emitted artifact. Each function renders a complete
//! file as a `String` with `\n` line endings and fixed column precision,
//! so identical inputs always produce identical bytes.
//!
//! Precision follows the printed analogues the files imitate: selection
//! tables carry three decimals (two for the significance probability),
//! the augmented-model comparison two, summary statistics two, and
//! figure-data files (decomposition, probability paths) enough digits to
//! reconstruct the series they plot.

use std::fmt::Write as _;

use cycleprobe_core::hp::{HpDecomposition, LambdaSweep, RecessionDummy};
use cycleprobe_core::pipeline::{
    AugmentedComparison, CandidateGrid, CountryStudy, SelectionOutcome, StudyOptions,
    VariableSummary,
};
use cycleprobe_core::quarterly::QuarterlySeries;

use crate::config::MAPE_CONVENTION;

/// Trend/cycle figure data; 12 decimals keep the round-trip error of
/// `trend + cycle` against the input far below the 1e-9 contract.
pub fn decomposition_csv(
    log_real_gdp: &QuarterlySeries,
    decomposition: &HpDecomposition,
    dummy: &RecessionDummy,
) -> String {
    let mut out = String::from("quarter,log_real_gdp,trend,cycle,below_trend\n");
    for (i, (quarter, y)) in log_real_gdp.iter().enumerate() {
        let _ = writeln!(
            out,
            "{quarter},{:.12},{:.12},{:.12},{}",
            y,
            decomposition.trend().values()[i],
            decomposition.cycle().values()[i],
            dummy.values()[i],
        );
    }
    out
}

/// Cycles under every sweep penalty, one column per lambda.
pub fn lambda_sweep_csv(sweep: &LambdaSweep) -> String {
    let decompositions = sweep.decompositions();
    let mut out = String::from("quarter");
    for d in decompositions {
        let _ = write!(out, ",cycle_lambda{}", d.lambda());
    }
    out.push('\n');
    let first = decompositions[0].cycle();
    for (i, (quarter, _)) in first.iter().enumerate() {
        let _ = write!(out, "{quarter}");
        for d in decompositions {
            let _ = write!(out, ",{:.12}", d.cycle().values()[i]);
        }
        out.push('\n');
    }
    out
}

/// Pairwise share of quarters on which two penalties agree about the
/// below-trend sign; upper triangle only.
pub fn lambda_agreement_csv(sweep: &LambdaSweep) -> String {
    let decompositions = sweep.decompositions();
    let agreement = sweep.sign_agreement();
    let mut out = String::from("lambda_a,lambda_b,sign_agreement\n");
    for i in 0..decompositions.len() {
        for j in i + 1..decompositions.len() {
            let _ = writeln!(
                out,
                "{},{},{:.6}",
                decompositions[i].lambda(),
                decompositions[j].lambda(),
                agreement[i][j]
            );
        }
    }
    out
}

/// Per-lag candidate table: the spread coefficient, its significance
/// probability, the forecasting criteria, and an asterisk on the selected
/// row.
pub fn candidate_grid_csv(grid: &CandidateGrid, selection: &SelectionOutcome) -> String {
    let mut out = String::from(
        "lag,coefficient,p_value,rmse,mae,mape,mape_skipped,mcfadden_r2,n_obs,selected\n",
    );
    for c in &grid.candidates {
        let marker = if c.spread_lag == selection.selected_lag {
            "*"
        } else {
            ""
        };
        // Joint-lag candidates carry several spread coefficients; the
        // headline column reports the one at the candidate's own horizon
        // (the last), which is the single coefficient in the default mode.
        let coefficient = *c.fit.coefficients.last().expect("fit has coefficients");
        let _ = writeln!(
            out,
            "{},{:.3},{:.2},{:.3},{:.3},{:.3},{},{:.3},{},{marker}",
            c.spread_lag,
            coefficient,
            c.significance_p,
            c.eval.rmse,
            c.eval.mae,
            c.eval.mape,
            c.eval.n_skipped_zero_actual,
            c.fit.mcfadden_r2,
            c.n_obs,
        );
    }
    out
}

/// Joint hypothesis test that the augmenting coefficients are zero, in
/// both the chi-squared and F forms.
pub fn wald_csv(augmented: &AugmentedComparison) -> String {
    let w = &augmented.wald_augmenting;
    let mut out =
        String::from("restriction,chi2_stat,chi2_p,f_stat,f_p,df_restrictions,df_residual\n");
    let _ = writeln!(
        out,
        "unemployment_and_stock_zero,{:.3},{:.3},{:.3},{:.3},{},{}",
        w.chi2_stat, w.chi2_p_value, w.f_stat, w.f_p_value, w.df_restrictions, w.df_residual
    );
    out
}

/// Spread-only versus augmented model on the shared sample.
pub fn augmented_csv(augmented: &AugmentedComparison) -> String {
    let mut out = String::from(
        "model,spread_lag,log_likelihood,mcfadden_r2,rmse,mae,mape,mape_skipped,n_obs\n",
    );
    for (label, fit, eval) in [
        (
            "spread_only",
            &augmented.spread_only_fit,
            &augmented.spread_only_eval,
        ),
        (
            "augmented",
            &augmented.augmented_fit,
            &augmented.augmented_eval,
        ),
    ] {
        let _ = writeln!(
            out,
            "{label},{},{:.2},{:.2},{:.2},{:.2},{:.2},{},{}",
            augmented.spread_lag,
            fit.log_likelihood,
            fit.mcfadden_r2,
            eval.rmse,
            eval.mae,
            eval.mape,
            eval.n_skipped_zero_actual,
            fit.n_obs,
        );
    }
    out
}

/// Coefficient tables for both final models.
pub fn coefficients_csv(augmented: &AugmentedComparison) -> String {
    let mut out = String::from("model,term,estimate,std_error,z,p_value\n");
    for (label, fit) in [
        ("spread_only", &augmented.spread_only_fit),
        ("augmented", &augmented.augmented_fit),
    ] {
        for i in 0..fit.names.len() {
            let _ = writeln!(
                out,
                "{label},{},{:.4},{:.4},{:.4},{:.4}",
                fit.names[i],
                fit.coefficients[i],
                fit.std_errors[i],
                fit.z_stats[i],
                fit.p_values[i]
            );
        }
    }
    out
}

/// Figure data: the below-trend indicator next to both models' fitted
/// probabilities over the estimation sample.
pub fn probability_path_csv(study: &CountryStudy) -> String {
    let path = &study.probability_path;
    let dummy = study
        .dummy
        .slice(path.start(), path.end())
        .expect("probability path lies inside the sample");
    let mut out =
        String::from("quarter,below_trend,probability_augmented,probability_spread_only\n");
    for (i, (quarter, p_augmented)) in path.iter().enumerate() {
        let _ = writeln!(
            out,
            "{quarter},{},{:.6},{:.6}",
            dummy.values()[i],
            p_augmented,
            study.spread_probability_path.values()[i],
        );
    }
    out
}

/// Statistical summary of the model variables, two decimals; shape
/// moments are blank for constant series, for which they are undefined.
pub fn summary_csv(summaries: &[VariableSummary]) -> String {
    let mut out =
        String::from("variable,mean,median,max,min,std_dev,skewness,kurtosis,observations\n");
    for s in summaries {
        let moment = |m: Option<f64>| m.map(|v| format!("{v:.2}")).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{:.2},{:.2},{:.2},{:.2},{:.2},{},{},{}",
            s.variable,
            s.mean,
            s.median,
            s.max,
            s.min,
            s.std_dev,
            moment(s.skewness),
            moment(s.kurtosis),
            s.observations,
        );
    }
    out
}

/// The one-line convention banner every command prints.
pub fn conventions_banner(options: &StudyOptions) -> String {
    format!(
        "mape convention: {MAPE_CONVENTION} (quarters whose actual value is zero are \
         excluded from MAPE; the excluded count is reported alongside)\n\
         significance thresholds: strict {}, relaxed fallback {}\n",
        options.significance_threshold, options.relaxed_threshold
    )
}

/// One line per country describing the selection that was made.
pub fn selection_line(country: &str, selection: &SelectionOutcome) -> String {
    let mode = if selection.relaxed {
        "relaxed"
    } else {
        "strict"
    };
    format!(
        "{country}: selected lag {} by {} (threshold used {}, {mode})\n",
        selection.selected_lag, selection.criterion, selection.threshold_used
    )
}

/// A country's failure as carried into the report: stable class plus the
/// human-readable message.
#[derive(Debug, Clone)]
pub struct FailureNote {
    pub class: String,
    pub message: String,
}

/// Aligned plain-text report over every country in the run.
pub fn report_txt(
    options: &StudyOptions,
    outcomes: &[(String, Result<CountryStudy, FailureNote>)],
) -> String {
    let mut out = String::new();
    out.push_str("below-trend probability study\n");
    out.push_str("=============================\n\n");
    out.push_str(&conventions_banner(options));
    let sweep_tokens: Vec<String> = options.lambda_sweep.iter().map(|l| l.to_string()).collect();
    let _ = writeln!(
        out,
        "smoothing penalty: {} (sweep: {})",
        options.lambda,
        sweep_tokens.join(", ")
    );
    let _ = writeln!(
        out,
        "candidate lags: 1..{}; selection criterion: {}",
        options.max_lag, options.criterion
    );
    out.push('\n');

    for (country, outcome) in outcomes {
        let _ = writeln!(out, "country: {country}");
        let _ = writeln!(out, "{}", "-".repeat(9 + country.len()));
        match outcome {
            Ok(study) => report_country(&mut out, study),
            Err(note) => {
                let _ = writeln!(out, "failed: error[{}]: {}\n", note.class, note.message);
            }
        }
    }
    out
}

fn report_country(out: &mut String, study: &CountryStudy) {
    let dummy = &study.dummy;
    let _ = writeln!(
        out,
        "sample: {} quarters from {} to {}; below trend in {}",
        dummy.len(),
        dummy.start(),
        dummy.end(),
        dummy.ones()
    );

    out.push_str("\nsummary statistics\n");
    let _ = writeln!(
        out,
        "  {:<16} {:>8} {:>8} {:>8} {:>8} {:>7} {:>6} {:>6} {:>4}",
        "variable", "mean", "median", "max", "min", "std", "skew", "kurt", "n"
    );
    for s in &study.summary {
        let moment = |m: Option<f64>| m.map(|v| format!("{v:.2}")).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "  {:<16} {:>8.2} {:>8.2} {:>8.2} {:>8.2} {:>7.2} {:>6} {:>6} {:>4}",
            s.variable,
            s.mean,
            s.median,
            s.max,
            s.min,
            s.std_dev,
            moment(s.skewness),
            moment(s.kurtosis),
            s.observations
        );
    }

    out.push_str("\ncandidate models (* marks the selected lag)\n");
    let _ = writeln!(
        out,
        "    {:>3} {:>8} {:>6} {:>7} {:>7} {:>8} {:>9} {:>4}",
        "lag", "coef", "prob", "rmse", "mae", "mape", "mcfadden", "n"
    );
    for c in &study.grid.candidates {
        let marker = if c.spread_lag == study.selection.selected_lag {
            "*"
        } else {
            " "
        };
        let _ = writeln!(
            out,
            "  {marker} {:>3} {:>8.3} {:>6.2} {:>7.3} {:>7.3} {:>8.3} {:>9.3} {:>4}",
            c.spread_lag,
            c.fit.coefficients.last().expect("fit has coefficients"),
            c.significance_p,
            c.eval.rmse,
            c.eval.mae,
            c.eval.mape,
            c.fit.mcfadden_r2,
            c.n_obs
        );
    }
    let mode = if study.selection.relaxed {
        "relaxed"
    } else {
        "strict"
    };
    let _ = writeln!(
        out,
        "selected lag {} at threshold {} ({mode})",
        study.selection.selected_lag, study.selection.threshold_used
    );
    if study.selection.relaxed {
        let _ = writeln!(
            out,
            "note: no lag cleared the strict threshold; the selection fell back to the relaxed one"
        );
    }

    let w = &study.augmented.wald_augmenting;
    out.push_str("\njoint test of zero augmenting coefficients (unemployment, stock index)\n");
    let _ = writeln!(
        out,
        "  chi2 = {:.3} (p = {:.3}); F = {:.3} (p = {:.3}); df = ({}, {})",
        w.chi2_stat, w.chi2_p_value, w.f_stat, w.f_p_value, w.df_restrictions, w.df_residual
    );
    if w.chi2_p_value > 0.05 {
        let _ = writeln!(
            out,
            "note: the joint test does not reject zero augmenting coefficients at the 5% level;\n\
             the augmented model is reported anyway, and the comparison below should be read\n\
             with that in mind"
        );
    }

    out.push_str("\nspread-only vs augmented (criteria at two decimals)\n");
    let _ = writeln!(
        out,
        "  {:<12} {:>9} {:>9} {:>6} {:>6} {:>7}",
        "model", "loglik", "mcfadden", "rmse", "mae", "mape"
    );
    for (label, fit, eval) in [
        (
            "spread_only",
            &study.augmented.spread_only_fit,
            &study.augmented.spread_only_eval,
        ),
        (
            "augmented",
            &study.augmented.augmented_fit,
            &study.augmented.augmented_eval,
        ),
    ] {
        let _ = writeln!(
            out,
            "  {label:<12} {:>9.2} {:>9.2} {:>6.2} {:>6.2} {:>7.2}",
            fit.log_likelihood, fit.mcfadden_r2, eval.rmse, eval.mae, eval.mape
        );
    }
    let _ = writeln!(
        out,
        "log-likelihood gain from augmentation: {:.4}",
        study.augmented.ll_gain
    );
    out.push('\n');
}
