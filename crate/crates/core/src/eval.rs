//! Forecast accuracy metrics: RMSE, MAE, and MAPE with an explicit
//! convention for zero actuals.
//!
//! MAPE divides by the actual value, which is undefined at zero. Here
//! observations with a zero actual are skipped and counted, the count is
//! surfaced in [`EvaluationReport`], and an input whose actuals are all
//! zero is an error rather than a silent NaN.

use crate::error::{Error, Result};

/// All three metrics over one actual/forecast pairing.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub rmse: f64,
    pub mae: f64,
    /// Mean absolute percentage error, in percent.
    pub mape: f64,
    /// Observations entering the MAPE average.
    pub n_evaluated: usize,
    /// Observations skipped by MAPE because the actual was exactly zero.
    /// `n_evaluated + n_skipped_zero_actual` is the sample size; RMSE and
    /// MAE always use the full sample.
    pub n_skipped_zero_actual: usize,
}

fn check_lengths(actual: &[f64], forecast: &[f64]) -> Result<()> {
    if actual.is_empty() {
        return Err(Error::EmptyInput {
            context: "forecast evaluation over zero observations",
        });
    }
    if actual.len() != forecast.len() {
        return Err(Error::LengthMismatch {
            actual: actual.len(),
            forecast: forecast.len(),
        });
    }
    Ok(())
}

/// Root mean squared error.
pub fn rmse(actual: &[f64], forecast: &[f64]) -> Result<f64> {
    check_lengths(actual, forecast)?;
    let n = actual.len() as f64;
    let ss: f64 = actual
        .iter()
        .zip(forecast)
        .map(|(a, f)| (a - f) * (a - f))
        .sum();
    Ok((ss / n).sqrt())
}

/// Mean absolute error.
pub fn mae(actual: &[f64], forecast: &[f64]) -> Result<f64> {
    check_lengths(actual, forecast)?;
    let n = actual.len() as f64;
    let sum: f64 = actual
        .iter()
        .zip(forecast)
        .map(|(a, f)| (a - f).abs())
        .sum();
    Ok(sum / n)
}

/// Mean absolute percentage error in percent, skipping zero actuals.
/// Returns the metric and the number of skipped observations.
pub fn mape(actual: &[f64], forecast: &[f64]) -> Result<(f64, usize)> {
    check_lengths(actual, forecast)?;
    let mut sum = 0.0;
    let mut used = 0usize;
    for (a, f) in actual.iter().zip(forecast) {
        if *a == 0.0 {
            continue;
        }
        sum += ((a - f) / a).abs();
        used += 1;
    }
    if used == 0 {
        return Err(Error::AllActualsZero);
    }
    Ok((100.0 * sum / used as f64, actual.len() - used))
}

/// Bundles all three metrics for one pairing.
pub fn evaluate(actual: &[f64], forecast: &[f64]) -> Result<EvaluationReport> {
    let rmse = rmse(actual, forecast)?;
    let mae = mae(actual, forecast)?;
    let (mape, skipped) = mape(actual, forecast)?;
    Ok(EvaluationReport {
        rmse,
        mae,
        mape,
        n_evaluated: actual.len() - skipped,
        n_skipped_zero_actual: skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_binary_case_is_exact() {
        // Errors of 0.5 each way: both RMSE and MAE equal exactly 0.5,
        // representable in binary.
        let actual = [1.0, 0.0];
        let forecast = [0.5, 0.5];
        assert_eq!(rmse(&actual, &forecast).unwrap(), 0.5);
        assert_eq!(mae(&actual, &forecast).unwrap(), 0.5);
        // MAPE sees only the first observation: |1 - 0.5| / 1 = 50%.
        let (m, skipped) = mape(&actual, &forecast).unwrap();
        assert_eq!(m, 50.0);
        assert_eq!(skipped, 1);
    }

    #[test]
    fn perfect_forecast_scores_zero() {
        let a = [0.2, -0.4, 1.5];
        let report = evaluate(&a, &a).unwrap();
        assert_eq!(report.rmse, 0.0);
        assert_eq!(report.mae, 0.0);
        assert_eq!(report.mape, 0.0);
        assert_eq!(report.n_evaluated, 3);
        assert_eq!(report.n_skipped_zero_actual, 0);
    }

    #[test]
    fn rmse_never_falls_below_mae() {
        let actual = [1.0, 2.0, -0.5, 3.0, 0.25];
        let forecast = [0.8, 2.6, 0.0, 2.1, 0.5];
        let r = rmse(&actual, &forecast).unwrap();
        let m = mae(&actual, &forecast).unwrap();
        assert!(r >= m);
    }

    #[test]
    fn equal_errors_make_rmse_equal_mae() {
        let actual = [1.0, 2.0, 3.0];
        let forecast = [1.25, 1.75, 3.25];
        let r = rmse(&actual, &forecast).unwrap();
        let m = mae(&actual, &forecast).unwrap();
        assert!((r - m).abs() <= 1e-15);
        assert!((r - 0.25).abs() <= 1e-15);
    }

    #[test]
    fn mape_counts_skips_and_reports_percent() {
        let actual = [2.0, 0.0, -1.0, 0.0];
        let forecast = [1.0, 5.0, -1.5, 0.0];
        let (m, skipped) = mape(&actual, &forecast).unwrap();
        // |1/2| and |-0.5/-1| both 50%.
        assert!((m - 50.0).abs() <= 1e-12);
        assert_eq!(skipped, 2);
        let report = evaluate(&actual, &forecast).unwrap();
        assert_eq!(report.n_evaluated + report.n_skipped_zero_actual, 4);
    }

    #[test]
    fn all_zero_actuals_is_an_error() {
        assert!(matches!(
            mape(&[0.0, 0.0], &[1.0, 2.0]),
            Err(Error::AllActualsZero)
        ));
    }

    #[test]
    fn shape_errors_are_reported() {
        assert!(matches!(rmse(&[], &[]), Err(Error::EmptyInput { .. })));
        assert!(matches!(
            mae(&[1.0], &[1.0, 2.0]),
            Err(Error::LengthMismatch {
                actual: 1,
                forecast: 2
            })
        ));
    }
}
