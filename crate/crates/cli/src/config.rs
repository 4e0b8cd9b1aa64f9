//! Declarative study configuration: one TOML file collecting every knob,
//! with command-line flags overriding individual values.

use std::path::{Path, PathBuf};

use cycleprobe_core::pipeline::{SelectionCriterion, StudyOptions};
use serde::Deserialize;

use crate::error::{CliError, Result};

/// The only MAPE convention this toolkit implements: quarters whose
/// actual value is zero are excluded from the mean and counted separately.
pub const MAPE_CONVENTION: &str = "skip-zero-actual";

/// Raw TOML shape; every scalar is optional and falls back to a default.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    lambda: Option<f64>,
    lambda_sweep: Option<Vec<f64>>,
    max_lag: Option<usize>,
    significance_threshold: Option<f64>,
    relaxed_threshold: Option<f64>,
    selection_criterion: Option<String>,
    mape_convention: Option<String>,
    output_directory: Option<PathBuf>,
    countries: Vec<RawCountry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCountry {
    name: String,
    file: PathBuf,
}

/// Fully resolved configuration: defaults applied, flags merged, paths
/// anchored at the config file's directory, countries sorted by name.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub options: StudyOptions,
    pub output_directory: PathBuf,
    /// `(country name, panel CSV path)` in name order.
    pub countries: Vec<(String, PathBuf)>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub lambda: Option<f64>,
    pub max_lag: Option<usize>,
    pub threshold: Option<f64>,
    pub criterion: Option<String>,
    pub out: Option<PathBuf>,
}

pub fn load_config(path: &Path, overrides: &Overrides) -> Result<ResolvedConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let raw: RawConfig = toml::from_str(&text).map_err(|e| CliError::ConfigParse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    resolve(raw, path, overrides)
}

fn resolve(raw: RawConfig, config_path: &Path, overrides: &Overrides) -> Result<ResolvedConfig> {
    let defaults = StudyOptions::default();

    if let Some(convention) = &raw.mape_convention {
        if convention != MAPE_CONVENTION {
            return Err(CliError::ConfigInvalid {
                message: format!(
                    "mape_convention must be \"{MAPE_CONVENTION}\" (the only implemented \
                     convention), got \"{convention}\""
                ),
            });
        }
    }

    let criterion_token = overrides
        .criterion
        .clone()
        .or(raw.selection_criterion)
        .unwrap_or_else(|| defaults.criterion.to_string());
    let criterion: SelectionCriterion = criterion_token.parse().map_err(CliError::Core)?;

    let significance_threshold = overrides
        .threshold
        .or(raw.significance_threshold)
        .unwrap_or(defaults.significance_threshold);
    let options = StudyOptions {
        lambda: overrides.lambda.or(raw.lambda).unwrap_or(defaults.lambda),
        lambda_sweep: raw.lambda_sweep.unwrap_or(defaults.lambda_sweep),
        max_lag: overrides
            .max_lag
            .or(raw.max_lag)
            .unwrap_or(defaults.max_lag),
        significance_threshold,
        // A strict threshold pushed above the configured fallback drags the
        // fallback along; the relaxed level may never be the stricter one.
        relaxed_threshold: raw
            .relaxed_threshold
            .unwrap_or(defaults.relaxed_threshold)
            .max(significance_threshold),
        criterion,
        joint_lags: false,
    };
    options.validate().map_err(CliError::Core)?;

    if raw.countries.is_empty() {
        return Err(CliError::ConfigInvalid {
            message: "configuration lists no countries".to_string(),
        });
    }
    let base = config_path.parent().unwrap_or_else(|| Path::new("."));
    let mut countries: Vec<(String, PathBuf)> = raw
        .countries
        .into_iter()
        .map(|c| {
            let path = if c.file.is_absolute() {
                c.file
            } else {
                base.join(c.file)
            };
            (c.name, path)
        })
        .collect();
    countries.sort_by(|a, b| a.0.cmp(&b.0));
    for (name, _) in &countries {
        // Country names become output subdirectory names.
        let clean = !name.is_empty()
            && name
                .bytes()
                .all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-');
        if !clean {
            return Err(CliError::ConfigInvalid {
                message: format!(
                    "country name \"{name}\" must be nonempty and use only letters, \
                     digits, '-' or '_' (it names an output directory)"
                ),
            });
        }
    }
    for pair in countries.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(CliError::ConfigInvalid {
                message: format!("country \"{}\" is listed twice", pair[0].0),
            });
        }
    }

    let output_directory = overrides
        .out
        .clone()
        .or(raw.output_directory)
        .unwrap_or_else(|| PathBuf::from("out"));

    Ok(ResolvedConfig {
        options,
        output_directory,
        countries,
    })
}
