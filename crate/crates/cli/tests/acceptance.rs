//! Release gate for the whole toolkit: nine checks, one test (and one
//! pass/fail line) each, with pinned tolerances.
//!
//! The checks cover filter/oracle equivalence, filter limit behaviour,
//! estimator recovery and calibration, closed-form special cases, metric
//! identities, planted-signal selection, and end-to-end determinism of
//! the shipped binary on the bundled panels. The final check reproduces
//! published reference figures and only runs when the original source
//! data is supplied; it is ignored by default.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use cycleprobe_core::eval::{evaluate, mae, rmse};
use cycleprobe_core::hp::hp_decompose;
use cycleprobe_core::pipeline::{build_candidate_grid, country_study, select_window, StudyOptions};
use cycleprobe_core::probit::normal::std_normal_cdf;
use cycleprobe_core::probit::{fit_probit, log_likelihood, score, wald_test, DesignMatrix};
use cycleprobe_core::quarterly::{Quarter, QuarterlySeries};
use cycleprobe_core::synthetic::{env_seed, planted_signal_panel};

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use statrs::distribution::ContinuousCDF;

// ---------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------

/// A plausible quarterly level series: a slow trend plus an AR(1)
/// deviation, deterministic for a fixed seed.
fn walk_series(len: usize, seed: u64) -> QuarterlySeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut deviation = 0.0_f64;
    let mut values = Vec::with_capacity(len);
    for t in 0..len {
        let shock: f64 = StandardNormal.sample(&mut rng);
        deviation = 0.7 * deviation + 0.3 * shock;
        values.push(10.0 + 0.02 * t as f64 + 0.2 * deviation);
    }
    QuarterlySeries::new(Quarter::new(1980, 1).unwrap(), values).unwrap()
}

/// Reference trend: solve `(I + lambda D'D) tau = y` with a dense LU
/// factorization, no banded shortcuts.
fn dense_trend(y: &[f64], lambda: f64) -> Vec<f64> {
    let t = y.len();
    let mut a = DMatrix::<f64>::identity(t, t);
    if t >= 3 {
        let mut d = DMatrix::<f64>::zeros(t - 2, t);
        for i in 0..t - 2 {
            d[(i, i)] = 1.0;
            d[(i, i + 1)] = -2.0;
            d[(i, i + 2)] = 1.0;
        }
        a += lambda * d.transpose() * d;
    }
    let rhs = DVector::from_column_slice(y);
    let solution = a.lu().solve(&rhs).expect("SPD system is solvable");
    solution.iter().copied().collect()
}

/// Central finite difference of the log-likelihood in each coordinate.
fn numerical_score(design: &DesignMatrix, beta: &[f64]) -> Vec<f64> {
    let h = 1e-6;
    (0..beta.len())
        .map(|j| {
            let mut up = beta.to_vec();
            let mut down = beta.to_vec();
            up[j] += h;
            down[j] -= h;
            (log_likelihood(design, &up).unwrap() - log_likelihood(design, &down).unwrap())
                / (2.0 * h)
        })
        .collect()
}

/// Probit data with standard-normal regressors, deterministic per seed.
fn simulate(rng: &mut ChaCha8Rng, beta: &[f64], n: usize) -> (Vec<(String, Vec<f64>)>, Vec<u8>) {
    let k = beta.len();
    let mut columns: Vec<(String, Vec<f64>)> = (1..k)
        .map(|j| (format!("x{j}"), Vec::with_capacity(n)))
        .collect();
    let mut response = Vec::with_capacity(n);
    for _ in 0..n {
        let mut eta = beta[0];
        for (j, column) in columns.iter_mut().enumerate() {
            let x: f64 = StandardNormal.sample(rng);
            eta += beta[j + 1] * x;
            column.1.push(x);
        }
        let u: f64 = rng.random();
        response.push(u8::from(u < std_normal_cdf(eta)));
    }
    (columns, response)
}

fn data_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel)
}

// ---------------------------------------------------------------------
// The gate
// ---------------------------------------------------------------------

#[test]
fn acceptance_01_banded_filter_matches_a_dense_oracle_and_is_fast() {
    let seed = env_seed(11);
    for (i, &t) in [4usize, 10, 61, 200].iter().enumerate() {
        let series = walk_series(t, seed + i as u64);
        for &lambda in &[1.0, 1000.0, 1600.0, 2200.0, 1e6] {
            let banded = hp_decompose(&series, lambda).unwrap();
            let dense = dense_trend(series.values(), lambda);
            for (a, b) in banded.trend().values().iter().zip(&dense) {
                assert!(
                    (a - b).abs() <= 1e-8,
                    "T={t} lambda={lambda}: banded {a} vs dense {b}"
                );
            }
        }
    }

    // The banded solve is linear-time; even unoptimized it has three
    // orders of magnitude of headroom against this budget.
    let series = walk_series(200, seed);
    let best = (0..5)
        .map(|_| {
            let clock = Instant::now();
            std::hint::black_box(hp_decompose(&series, 1600.0).unwrap());
            clock.elapsed()
        })
        .min()
        .unwrap();
    assert!(
        best.as_millis() < 10,
        "T=200 decomposition took {best:?}, budget 10 ms"
    );
}

#[test]
fn acceptance_02_filter_limits_are_the_series_and_the_least_squares_line() {
    let series = walk_series(61, env_seed(12));
    let y = series.values();

    // Vanishing penalty: the trend is the series itself.
    let loose = hp_decompose(&series, 1e-8).unwrap();
    let max_gap = loose
        .trend()
        .values()
        .iter()
        .zip(y)
        .map(|(t, v)| (t - v).abs())
        .fold(0.0_f64, f64::max);
    assert!(max_gap <= 1e-6, "lambda=1e-8 trend strays {max_gap}");

    // Infinite penalty: the trend is the least-squares line on t.
    let n = y.len() as f64;
    let t_mean = (y.len() as f64 - 1.0) / 2.0;
    let y_mean = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (t, v) in y.iter().enumerate() {
        sxy += (t as f64 - t_mean) * (v - y_mean);
        sxx += (t as f64 - t_mean) * (t as f64 - t_mean);
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * t_mean;
    let stiff = hp_decompose(&series, 1e12).unwrap();
    let scale = y.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    for (t, tr) in stiff.trend().values().iter().enumerate() {
        let line = intercept + slope * t as f64;
        assert!(
            (tr - line).abs() <= 1e-4 * scale,
            "lambda=1e12 trend {tr} vs line {line} at t={t}"
        );
    }
}

#[test]
fn acceptance_03_estimator_recovers_known_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(env_seed(13));
    let truth = [-0.5, 1.2];
    let (columns, response) = simulate(&mut rng, &truth, 200);
    let design = DesignMatrix::with_intercept(columns, response).unwrap();
    let fit = fit_probit(&design).unwrap();

    assert!(fit.converged, "fit did not converge");
    assert!(fit.iterations <= 25, "took {} iterations", fit.iterations);
    for (j, &target) in truth.iter().enumerate() {
        assert!(
            (fit.coefficients[j] - target).abs() <= 3.0 * fit.std_errors[j],
            "coefficient {j}: {} vs truth {} (SE {})",
            fit.coefficients[j],
            target,
            fit.std_errors[j]
        );
    }

    // The analytic gradient is the derivative of the likelihood it
    // claims to maximize, at truth and at the origin.
    for point in [truth.to_vec(), vec![0.0, 0.0]] {
        let analytic = score(&design, &point).unwrap();
        let numeric = numerical_score(&design, &point);
        for (a, b) in analytic.iter().zip(&numeric) {
            assert!(
                (a - b).abs() <= 1e-5 * a.abs().max(1.0),
                "gradient {a} vs finite difference {b}"
            );
        }
    }
}

#[test]
fn acceptance_04_intercept_only_fit_has_its_closed_form() {
    // 13 successes in 40 trials: the MLE of the intercept is the normal
    // quantile of the success share, and the fit explains nothing beyond
    // the null model by construction.
    let response: Vec<u8> = (0..40).map(|i| u8::from(i % 3 == 0)).collect();
    let ones = response.iter().filter(|&&v| v == 1).count();
    let pbar = ones as f64 / response.len() as f64;
    let design = DesignMatrix::with_intercept(Vec::new(), response).unwrap();
    let fit = fit_probit(&design).unwrap();

    let quantile = statrs::distribution::Normal::standard().inverse_cdf(pbar);
    assert!(
        (fit.coefficients[0] - quantile).abs() <= 1e-4,
        "intercept {} vs quantile {}",
        fit.coefficients[0],
        quantile
    );
    assert_eq!(
        fit.mcfadden_r2, 0.0,
        "single-coefficient fit must have R2 = 0"
    );
}

#[test]
fn acceptance_05_wald_is_z_squared_and_calibrated_under_the_null() {
    let mut rng = ChaCha8Rng::seed_from_u64(env_seed(14));

    // Identity: a one-restriction Wald statistic is the squared z-stat.
    let (columns, response) = simulate(&mut rng, &[-0.2, 0.8], 150);
    let design = DesignMatrix::with_intercept(columns, response).unwrap();
    let fit = fit_probit(&design).unwrap();
    let wald = wald_test(&fit, &[1]).unwrap();
    let z2 = fit.z_stats[1] * fit.z_stats[1];
    assert!(
        (wald.chi2_stat - z2).abs() <= 1e-10 * z2.max(1.0),
        "wald {} vs z^2 {z2}",
        wald.chi2_stat
    );

    // Calibration: with the restricted coefficient truly zero, its Wald
    // p-values over many replications are uniform.
    let reps = 500;
    let mut p_values = Vec::with_capacity(reps);
    let mut skipped = 0usize;
    while p_values.len() < reps {
        let (columns, response) = simulate(&mut rng, &[-0.3, 0.7, 0.0], 120);
        let design = match DesignMatrix::with_intercept(columns, response) {
            Ok(d) => d,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        match fit_probit(&design) {
            Ok(fit) => p_values.push(wald_test(&fit, &[2]).unwrap().chi2_p_value),
            Err(_) => skipped += 1,
        }
        assert!(skipped <= reps / 50, "too many degenerate draws: {skipped}");
    }
    p_values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let ks = p_values
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let low = i as f64 / reps as f64;
            let high = (i + 1) as f64 / reps as f64;
            (p - low).abs().max((p - high).abs())
        })
        .fold(0.0_f64, f64::max);
    assert!(ks < 0.08, "KS distance from uniform {ks} >= 0.08");
}

#[test]
fn acceptance_06_error_metrics_satisfy_their_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(env_seed(15));

    // RMSE dominates MAE (power-mean inequality) on random vectors.
    for _ in 0..1000 {
        let n = rng.random_range(1..=30);
        let actual: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let forecast: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let r = rmse(&actual, &forecast).unwrap();
        let m = mae(&actual, &forecast).unwrap();
        assert!(r >= m - 1e-12 * m.abs(), "rmse {r} fell below mae {m}");
    }

    // Perfect forecasts score zero in every metric.
    let actual = [0.3, 0.9, 0.2, 1.0];
    let report = evaluate(&actual, &actual).unwrap();
    assert_eq!(report.rmse, 0.0);
    assert_eq!(report.mae, 0.0);
    assert_eq!(report.mape, 0.0);

    // Hand-computed case, exact in binary floating point.
    assert_eq!(rmse(&[1.0, 0.0], &[0.5, 0.5]).unwrap(), 0.5);
    assert_eq!(mae(&[1.0, 0.0], &[0.5, 0.5]).unwrap(), 0.5);
}

#[test]
fn acceptance_07_selection_finds_the_planted_lag_and_augmentation_helps() {
    let (panel, planted_lag) = planted_signal_panel();
    let options = StudyOptions::default();
    let grid = build_candidate_grid(&panel, &options).unwrap();
    let selection =
        select_window(&grid, options.significance_threshold, options.criterion).unwrap();
    assert_eq!(
        selection.selected_lag, planted_lag,
        "selection missed the planted horizon"
    );

    let study = country_study(&panel, &options).unwrap();
    assert_eq!(study.selection.selected_lag, planted_lag);
    assert!(
        study.augmented.augmented_fit.log_likelihood
            > study.augmented.spread_only_fit.log_likelihood,
        "augmented log-likelihood {} did not exceed spread-only {}",
        study.augmented.augmented_fit.log_likelihood,
        study.augmented.spread_only_fit.log_likelihood
    );
}

#[test]
fn acceptance_08_bundled_study_is_fast_shaped_and_byte_stable() {
    let config = data_path("study.toml");
    let out_a = tempfile::tempdir().unwrap();
    let out_b = tempfile::tempdir().unwrap();

    let clock = Instant::now();
    let first = Command::new(env!("CARGO_BIN_EXE_cycleprobe"))
        .args([
            "study",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out_a.path().to_str().unwrap(),
        ])
        .output()
        .expect("binary runs");
    let elapsed = clock.elapsed();
    assert!(first.status.success(), "study failed: {:?}", first);
    assert!(
        elapsed.as_secs() < 10,
        "bundled study took {elapsed:?}, budget 10 s"
    );

    // Six candidate rows per country, thirty across the bundled five.
    let countries = ["alpha", "bravo", "charlie", "delta", "echo"];
    let mut total_rows = 0;
    for name in countries {
        let grid = std::fs::read_to_string(out_a.path().join(name).join("candidate_grid.csv"))
            .expect("grid artifact");
        let rows = grid.lines().count() - 1;
        assert_eq!(rows, 6, "{name} grid has {rows} rows");
        total_rows += rows;
    }
    assert_eq!(total_rows, 30);

    // A second run reproduces the whole output tree byte for byte.
    let second = Command::new(env!("CARGO_BIN_EXE_cycleprobe"))
        .args([
            "study",
            "--config",
            config.to_str().unwrap(),
            "--out",
            out_b.path().to_str().unwrap(),
        ])
        .output()
        .expect("binary runs");
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout);

    let tree = |root: &std::path::Path| -> Vec<(String, Vec<u8>)> {
        let mut files: Vec<(String, Vec<u8>)> = walkdir::WalkDir::new(root)
            .into_iter()
            .map(|e| e.unwrap())
            .filter(|e| e.file_type().is_file())
            .map(|e| {
                let rel = e
                    .path()
                    .strip_prefix(root)
                    .unwrap()
                    .to_string_lossy()
                    .into_owned();
                (rel, std::fs::read(e.path()).unwrap())
            })
            .collect();
        files.sort();
        files
    };
    let a = tree(out_a.path());
    let b = tree(out_b.path());
    assert_eq!(a.len(), b.len(), "output trees differ in file count");
    assert_eq!(
        a.len(),
        5 * 9 + 1,
        "expected 9 files per country plus the report"
    );
    for ((path_a, bytes_a), (path_b, bytes_b)) in a.iter().zip(&b) {
        assert_eq!(path_a, path_b);
        assert_eq!(bytes_a, bytes_b, "{path_a} differs between reruns");
    }
}

/// Reproduces published reference figures from the original source data,
/// which is proprietary and not distributed here. Point
/// `CYCLEPROBE_ORIGINAL_DATA` at a directory containing `france.csv` and
/// `germany.csv` in the standard panel format and run with `--ignored`.
///
/// Caveat on MAPE: this toolkit skips zero actuals and reports how many
/// were skipped. A source that instead dropped those quarters earlier in
/// the pipeline, or kept them with a different convention, shifts MAPE
/// while leaving RMSE and MAE untouched; the ±0.01 band assumes the
/// skip-zero-actual convention.
#[test]
#[ignore = "needs the original source data; set CYCLEPROBE_ORIGINAL_DATA and run with --ignored"]
fn acceptance_09_reference_rows_reproduce_on_the_original_data() {
    let root = match std::env::var("CYCLEPROBE_ORIGINAL_DATA") {
        Ok(dir) => PathBuf::from(dir),
        Err(_) => {
            eprintln!(
                "acceptance_09 skipped: CYCLEPROBE_ORIGINAL_DATA is not set, \
                 nothing to compare against"
            );
            return;
        }
    };
    let options = StudyOptions::default();

    // France, three-quarter horizon: forecast metrics and fit.
    let france = cycleprobe_cli::panel_csv::read_panel("france", &root.join("france.csv")).unwrap();
    let grid = build_candidate_grid(&france, &options).unwrap();
    let lag3 = grid
        .candidates
        .iter()
        .find(|c| c.spread_lag == 3)
        .expect("lag-3 candidate");
    assert!(
        (lag3.eval.rmse - 0.404).abs() <= 0.01,
        "rmse {}",
        lag3.eval.rmse
    );
    assert!(
        (lag3.eval.mae - 0.329).abs() <= 0.01,
        "mae {}",
        lag3.eval.mae
    );
    assert!(
        (lag3.eval.mape - 16.605).abs() <= 0.01,
        "mape {}",
        lag3.eval.mape
    );
    assert!(
        (lag3.fit.mcfadden_r2 - 0.284).abs() <= 0.02,
        "mcfadden {}",
        lag3.fit.mcfadden_r2
    );

    // Germany: joint test that the augmenting terms are zero.
    let germany =
        cycleprobe_cli::panel_csv::read_panel("germany", &root.join("germany.csv")).unwrap();
    let study = country_study(&germany, &options).unwrap();
    let wald = &study.augmented.wald_augmenting;
    assert!(
        (wald.f_p_value - 0.012).abs() <= 0.005,
        "F p-value {}",
        wald.f_p_value
    );
    assert!(
        (wald.chi2_p_value - 0.008).abs() <= 0.005,
        "chi2 p-value {}",
        wald.chi2_p_value
    );
}
