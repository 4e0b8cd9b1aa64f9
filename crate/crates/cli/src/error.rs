//! Front-end errors: file and format problems layered over the library's
//! own error type, each with a stable machine-readable class for scripts
//! that match on `error[Class]` diagnostics.

use std::fmt;
use std::path::PathBuf;

use cycleprobe_core::Quarter;

#[derive(Debug)]
pub enum CliError {
    /// Anything surfaced by the underlying library.
    Core(cycleprobe_core::Error),
    /// Filesystem trouble; the path names the file involved.
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// The TOML configuration could not be parsed.
    ConfigParse { path: PathBuf, message: String },
    /// The configuration parsed but violates an invariant.
    ConfigInvalid { message: String },
    /// A CSV cell or header could not be interpreted; one-based line and
    /// column point at the offender.
    CsvParse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    /// Consecutive rows skip one or more quarters.
    GapInSeries {
        path: PathBuf,
        line: usize,
        missing: Quarter,
    },
    /// The same quarter appears on two rows.
    DuplicateQuarter {
        path: PathBuf,
        line: usize,
        quarter: Quarter,
    },
    /// A column that must be strictly positive is not.
    NonPositiveValue {
        path: PathBuf,
        line: usize,
        column: String,
        value: f64,
    },
}

impl CliError {
    /// Stable class token printed inside `error[...]` diagnostics.
    pub fn class(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.class(),
            CliError::Io { .. } => "Io",
            CliError::ConfigParse { .. } => "ConfigParse",
            CliError::ConfigInvalid { .. } => "ConfigInvalid",
            CliError::CsvParse { .. } => "ParseError",
            CliError::GapInSeries { .. } => "GapInSeries",
            CliError::DuplicateQuarter { .. } => "DuplicateQuarter",
            CliError::NonPositiveValue { .. } => "NonPositiveValue",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => e.fmt(f),
            CliError::Io { path, source } => {
                write!(f, "{}: {source}", path.display())
            }
            CliError::ConfigParse { path, message } => {
                write!(f, "{}: {message}", path.display())
            }
            CliError::ConfigInvalid { message } => f.write_str(message),
            CliError::CsvParse {
                path,
                line,
                column,
                message,
            } => write!(f, "{}:{line}:{column}: {message}", path.display()),
            CliError::GapInSeries {
                path,
                line,
                missing,
            } => write!(
                f,
                "{}:{line}: series skips {missing}; quarters must be consecutive",
                path.display()
            ),
            CliError::DuplicateQuarter {
                path,
                line,
                quarter,
            } => write!(
                f,
                "{}:{line}: quarter {quarter} appears more than once",
                path.display()
            ),
            CliError::NonPositiveValue {
                path,
                line,
                column,
                value,
            } => write!(
                f,
                "{}:{line}: column {column} must be strictly positive, got {value}",
                path.display()
            ),
        }
    }
}

impl std::error::Error for CliError {}

impl From<cycleprobe_core::Error> for CliError {
    fn from(e: cycleprobe_core::Error) -> Self {
        CliError::Core(e)
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
