//! Panel ingestion: one CSV per country, fixed column order, strict
//! validation with file/line/column diagnostics.
//!
//! Format: header `quarter,nominal_gdp,deflator,rate_long_1y,
//! rate_short_3m,unemployment,stock_index`, quarter tokens `YYYY:Q[1-4]`
//! on consecutive quarters, period decimal separator, UTF-8. Gaps,
//! duplicates, unreadable cells, and non-positive levels are rejected
//! rather than repaired.

use std::path::Path;

use cycleprobe_core::{CountryPanel, Quarter, QuarterlySeries};

use crate::error::{CliError, Result};

/// Expected header cells, in order.
pub const HEADER: [&str; 7] = [
    "quarter",
    "nominal_gdp",
    "deflator",
    "rate_long_1y",
    "rate_short_3m",
    "unemployment",
    "stock_index",
];

/// Columns that must be strictly positive (levels that are logged or
/// divided by downstream).
const POSITIVE_COLUMNS: [usize; 3] = [1, 2, 6];

/// Reads and validates one country's panel.
pub fn read_panel(name: &str, path: &Path) -> Result<CountryPanel> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::None)
        .from_reader(text.as_bytes());

    let headers = reader.headers().map_err(|e| csv_error(path, &e))?.clone();
    let got: Vec<&str> = headers.iter().collect();
    if got != HEADER {
        return Err(CliError::CsvParse {
            path: path.to_path_buf(),
            line: 1,
            column: 1,
            message: format!(
                "header must be exactly \"{}\", got \"{}\"",
                HEADER.join(","),
                got.join(",")
            ),
        });
    }

    let mut start: Option<Quarter> = None;
    let mut previous: Option<Quarter> = None;
    let mut columns: [Vec<f64>; 6] = Default::default();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, &e))?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() != HEADER.len() {
            return Err(CliError::CsvParse {
                path: path.to_path_buf(),
                line,
                column: record.len().min(HEADER.len()),
                message: format!("expected {} cells, got {}", HEADER.len(), record.len()),
            });
        }

        let quarter: Quarter = record[0].parse().map_err(|e| CliError::CsvParse {
            path: path.to_path_buf(),
            line,
            column: 1,
            message: format!("{e}"),
        })?;
        match (start, previous) {
            (None, _) => start = Some(quarter),
            (Some(first), Some(prev)) => {
                let expected = prev.offset(1);
                if quarter == expected {
                    // Consecutive, as required.
                } else if quarter > expected {
                    return Err(CliError::GapInSeries {
                        path: path.to_path_buf(),
                        line,
                        missing: expected,
                    });
                } else if quarter >= first {
                    // At or before `prev` but inside the covered range:
                    // necessarily a repeat of an earlier row.
                    return Err(CliError::DuplicateQuarter {
                        path: path.to_path_buf(),
                        line,
                        quarter,
                    });
                } else {
                    return Err(CliError::CsvParse {
                        path: path.to_path_buf(),
                        line,
                        column: 1,
                        message: format!(
                            "quarter {quarter} is out of chronological order (before {first})"
                        ),
                    });
                }
            }
            (Some(_), None) => unreachable!("previous is set whenever start is"),
        }
        previous = Some(quarter);

        for (slot, cell_index) in (1..HEADER.len()).enumerate() {
            let cell = &record[cell_index];
            let value: f64 = cell.parse().map_err(|_| CliError::CsvParse {
                path: path.to_path_buf(),
                line,
                column: cell_index + 1,
                message: format!("cannot read \"{cell}\" as a number"),
            })?;
            if !value.is_finite() {
                return Err(CliError::CsvParse {
                    path: path.to_path_buf(),
                    line,
                    column: cell_index + 1,
                    message: format!("\"{cell}\" is not a finite number"),
                });
            }
            if POSITIVE_COLUMNS.contains(&cell_index) && value <= 0.0 {
                return Err(CliError::NonPositiveValue {
                    path: path.to_path_buf(),
                    line,
                    column: HEADER[cell_index].to_string(),
                    value,
                });
            }
            columns[slot].push(value);
        }
    }

    let start = start.ok_or_else(|| CliError::CsvParse {
        path: path.to_path_buf(),
        line: 2,
        column: 1,
        message: "file contains no data rows".to_string(),
    })?;
    let [nominal, deflator, long, short, unemployment, stock] = columns;
    let series = |values: Vec<f64>| QuarterlySeries::new(start, values).map_err(CliError::Core);
    CountryPanel::new(
        name,
        series(nominal)?,
        series(deflator)?,
        series(long)?,
        series(short)?,
        series(unemployment)?,
        series(stock)?,
    )
    .map_err(CliError::Core)
}

fn csv_error(path: &Path, e: &csv::Error) -> CliError {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    CliError::CsvParse {
        path: path.to_path_buf(),
        line,
        column: 1,
        message: e.to_string(),
    }
}

/// Serializes a panel back to the input format, restricted to the common
/// calendar range. Values print through `f64`'s shortest round-trip
/// formatting, so reading the file back reproduces them bit for bit.
pub fn panel_to_csv(panel: &CountryPanel) -> String {
    let p = panel.restrict_to_common_range();
    let mut out = String::new();
    out.push_str(&HEADER.join(","));
    out.push('\n');
    let n = p.nominal_gdp().len();
    for i in 0..n {
        let quarter = p.nominal_gdp().start().offset(i as i64);
        let row = [
            p.nominal_gdp().values()[i],
            p.deflator().values()[i],
            p.rate_long().values()[i],
            p.rate_short().values()[i],
            p.unemployment().values()[i],
            p.stock_index().values()[i],
        ];
        out.push_str(&quarter.to_string());
        for v in row {
            out.push(',');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}
