//! Command implementations, shared by the binary and the test suite.

use std::fmt::Write as _;
use std::path::Path;

use cycleprobe_core::hp::{below_trend_dummy, hp_decompose, lambda_sweep};
use cycleprobe_core::pipeline::{
    build_candidate_grid, run_full_study, select_window_with_relaxation, summarize_panel,
};
use cycleprobe_core::quarterly::real_log_gdp;
use cycleprobe_core::CountryPanel;

use crate::config::ResolvedConfig;
use crate::emit;
use crate::error::{CliError, Result};
use crate::panel_csv;

/// What a command wants printed: regular output and warning lines.
#[derive(Debug, Default)]
pub struct RunOutput {
    pub stdout: String,
    pub warnings: Vec<String>,
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|source| CliError::Io {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    std::fs::write(path, content).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Trend/cycle decomposition plus the robustness sweep, per country.
pub fn run_decompose(config: &ResolvedConfig) -> Result<RunOutput> {
    let mut out = RunOutput {
        stdout: emit::conventions_banner(&config.options),
        ..RunOutput::default()
    };
    for (name, path) in &config.countries {
        let panel = panel_csv::read_panel(name, path)?;
        let restricted = panel.restrict_to_common_range();
        let log_gdp = real_log_gdp(restricted.nominal_gdp(), restricted.deflator())
            .map_err(CliError::Core)?;
        let decomposition =
            hp_decompose(&log_gdp, config.options.lambda).map_err(CliError::Core)?;
        let dummy = below_trend_dummy(&decomposition);
        let sweep = lambda_sweep(&log_gdp, &config.options.lambda_sweep).map_err(CliError::Core)?;

        let dir = config.output_directory.join(name);
        write_file(
            &dir.join("decomposition.csv"),
            &emit::decomposition_csv(&log_gdp, &decomposition, &dummy),
        )?;
        write_file(
            &dir.join("lambda_sweep.csv"),
            &emit::lambda_sweep_csv(&sweep),
        )?;
        write_file(
            &dir.join("lambda_agreement.csv"),
            &emit::lambda_agreement_csv(&sweep),
        )?;
        let _ = writeln!(
            out.stdout,
            "{name}: {} quarters, below trend in {}, lambda {}",
            dummy.len(),
            dummy.ones(),
            config.options.lambda
        );
    }
    Ok(out)
}

/// Candidate models per lag with the selected window marked.
pub fn run_grid(config: &ResolvedConfig) -> Result<RunOutput> {
    let mut out = RunOutput {
        stdout: emit::conventions_banner(&config.options),
        ..RunOutput::default()
    };
    for (name, path) in &config.countries {
        let panel = panel_csv::read_panel(name, path)?;
        let grid = build_candidate_grid(&panel, &config.options).map_err(CliError::Core)?;
        let selection =
            select_window_with_relaxation(&grid, &config.options).map_err(CliError::Core)?;
        write_file(
            &config
                .output_directory
                .join(name)
                .join("candidate_grid.csv"),
            &emit::candidate_grid_csv(&grid, &selection),
        )?;
        out.stdout.push_str(&emit::selection_line(name, &selection));
    }
    Ok(out)
}

/// Summary statistics of the model variables, per country.
pub fn run_summary(config: &ResolvedConfig) -> Result<RunOutput> {
    let mut out = RunOutput {
        stdout: emit::conventions_banner(&config.options),
        ..RunOutput::default()
    };
    for (name, path) in &config.countries {
        let panel = panel_csv::read_panel(name, path)?;
        let summaries = summarize_panel(&panel, config.options.lambda).map_err(CliError::Core)?;
        write_file(
            &config.output_directory.join(name).join("summary_stats.csv"),
            &emit::summary_csv(&summaries),
        )?;
        let observations = summaries.first().map(|s| s.observations).unwrap_or(0);
        let _ = writeln!(
            out.stdout,
            "{name}: {} variables over {} quarters",
            summaries.len(),
            observations
        );
    }
    Ok(out)
}

/// The full pipeline. Countries fail independently: a country that cannot
/// be loaded or estimated becomes a warning and a report entry while the
/// rest of the study proceeds, and the command only errors out when no
/// country completes at all.
pub fn run_study(config: &ResolvedConfig) -> Result<RunOutput> {
    let mut load_failures: Vec<(String, CliError)> = Vec::new();
    let mut panels: Vec<CountryPanel> = Vec::new();
    for (name, path) in &config.countries {
        match panel_csv::read_panel(name, path) {
            Ok(panel) => panels.push(panel),
            Err(e) => load_failures.push((name.clone(), e)),
        }
    }
    if panels.is_empty() {
        let (_, first) = load_failures
            .into_iter()
            .next()
            .expect("config guarantees at least one country");
        return Err(first);
    }

    let report = run_full_study(&panels, &config.options).map_err(CliError::Core)?;

    // Per-country failures are isolated as warnings, but a study in which
    // no country completed is a failure in its own right: surface the
    // first error instead of an empty report.
    if report.outcomes.iter().all(|(_, o)| o.is_err()) {
        let (_, first) = report
            .outcomes
            .into_iter()
            .next()
            .expect("loaded panels produce outcomes");
        return Err(CliError::Core(first.expect_err("all outcomes failed")));
    }

    let mut outcomes: Vec<(String, std::result::Result<_, emit::FailureNote>)> = report
        .outcomes
        .into_iter()
        .map(|(name, outcome)| {
            (
                name,
                outcome.map_err(|e| emit::FailureNote {
                    class: e.class().to_string(),
                    message: e.to_string(),
                }),
            )
        })
        .collect();
    for (name, e) in load_failures {
        let note = emit::FailureNote {
            class: e.class().to_string(),
            message: e.to_string(),
        };
        outcomes.push((name, Err(note)));
    }
    outcomes.sort_by(|a, b| a.0.cmp(&b.0));

    let mut out = RunOutput {
        stdout: emit::conventions_banner(&config.options),
        ..RunOutput::default()
    };
    let mut completed = 0usize;
    for (name, outcome) in &outcomes {
        match outcome {
            Ok(study) => {
                completed += 1;
                let dir = config.output_directory.join(name);
                // The figure-data CSV reports the input series itself, not
                // its reconstruction from trend + cycle, so recompute it
                // from the panel that produced the study.
                let panel = panels
                    .iter()
                    .find(|p| p.country() == name)
                    .expect("completed study has a panel");
                let restricted = panel.restrict_to_common_range();
                let log_gdp = real_log_gdp(restricted.nominal_gdp(), restricted.deflator())
                    .map_err(CliError::Core)?;
                write_file(
                    &dir.join("decomposition.csv"),
                    &emit::decomposition_csv(&log_gdp, &study.decomposition, &study.dummy),
                )?;
                write_file(
                    &dir.join("lambda_sweep.csv"),
                    &emit::lambda_sweep_csv(&study.sweep),
                )?;
                write_file(
                    &dir.join("lambda_agreement.csv"),
                    &emit::lambda_agreement_csv(&study.sweep),
                )?;
                write_file(
                    &dir.join("candidate_grid.csv"),
                    &emit::candidate_grid_csv(&study.grid, &study.selection),
                )?;
                write_file(&dir.join("wald.csv"), &emit::wald_csv(&study.augmented))?;
                write_file(
                    &dir.join("augmented.csv"),
                    &emit::augmented_csv(&study.augmented),
                )?;
                write_file(
                    &dir.join("coefficients.csv"),
                    &emit::coefficients_csv(&study.augmented),
                )?;
                write_file(
                    &dir.join("probability_path.csv"),
                    &emit::probability_path_csv(study),
                )?;
                write_file(
                    &dir.join("summary_stats.csv"),
                    &emit::summary_csv(&study.summary),
                )?;
                out.stdout
                    .push_str(&emit::selection_line(name, &study.selection));
            }
            Err(note) => {
                out.warnings
                    .push(format!("warning[{}]: {name}: {}", note.class, note.message));
            }
        }
    }
    write_file(
        &config.output_directory.join("report.txt"),
        &emit::report_txt(&config.options, &outcomes),
    )?;
    let _ = writeln!(
        out.stdout,
        "completed {completed} of {} countries",
        outcomes.len()
    );
    Ok(out)
}
