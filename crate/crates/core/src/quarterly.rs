//! Calendar-indexed quarterly series and the transformations used to build
//! regression inputs: deflation, logs, lags, spreads, and range alignment.
//!
//! A [`QuarterlySeries`] is a contiguous run of finite values anchored at a
//! starting [`Quarter`]; gaps are impossible by construction. A
//! [`CountryPanel`] bundles the six raw columns for one country and
//! guarantees at construction that they share a non-empty calendar
//! intersection and that deflator and stock index are strictly positive.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A calendar quarter, ordered chronologically.
///
/// The textual form is `YYYY:Q1` .. `YYYY:Q4` (e.g. `1994:Q1`), and
/// [`FromStr`] accepts exactly that shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quarter {
    year: i32,
    quarter: u8,
}

impl Quarter {
    /// Builds a quarter; `quarter` must be 1..=4.
    pub fn new(year: i32, quarter: u8) -> Result<Self> {
        if !(1..=4).contains(&quarter) {
            return Err(Error::InvalidQuarter {
                token: format!("{year}:Q{quarter}"),
            });
        }
        Ok(Quarter { year, quarter })
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    /// Quarter within the year, 1..=4.
    pub fn quarter(&self) -> u8 {
        self.quarter
    }

    /// Monotone index: consecutive quarters differ by exactly 1.
    fn index(&self) -> i64 {
        i64::from(self.year) * 4 + i64::from(self.quarter) - 1
    }

    fn from_index(idx: i64) -> Self {
        Quarter {
            year: i32::try_from(idx.div_euclid(4)).expect("quarter index in range"),
            quarter: (idx.rem_euclid(4) + 1) as u8,
        }
    }

    /// The quarter `offset` steps later (earlier when negative).
    pub fn offset(&self, offset: i64) -> Self {
        Self::from_index(self.index() + offset)
    }

    /// Signed number of quarters from `earlier` to `self`.
    pub fn quarters_since(&self, earlier: Quarter) -> i64 {
        self.index() - earlier.index()
    }
}

impl fmt::Display for Quarter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:Q{}", self.year, self.quarter)
    }
}

impl FromStr for Quarter {
    type Err = Error;

    /// Parses `YYYY:Q[1-4]`. The year must be all digits (an optional
    /// leading `-` is accepted for completeness); no surrounding
    /// whitespace is tolerated, so CSV inputs stay byte-exact.
    fn from_str(s: &str) -> Result<Self> {
        let invalid = || Error::InvalidQuarter {
            token: s.to_string(),
        };
        let (year_part, q_part) = s.split_once(":Q").ok_or_else(invalid)?;
        if year_part.is_empty()
            || !year_part
                .strip_prefix('-')
                .unwrap_or(year_part)
                .bytes()
                .all(|b| b.is_ascii_digit())
        {
            return Err(invalid());
        }
        let year: i32 = year_part.parse().map_err(|_| invalid())?;
        let quarter: u8 = match q_part {
            "1" => 1,
            "2" => 2,
            "3" => 3,
            "4" => 4,
            _ => return Err(invalid()),
        };
        Ok(Quarter { year, quarter })
    }
}

/// A gap-free run of finite `f64` observations starting at a fixed quarter.
#[derive(Debug, Clone, PartialEq)]
pub struct QuarterlySeries {
    start: Quarter,
    values: Vec<f64>,
}

impl QuarterlySeries {
    /// Builds a series; rejects empty input and non-finite values.
    pub fn new(start: Quarter, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput {
                context: "quarterly series must hold at least one observation",
            });
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue {
                    quarter: start.offset(i as i64),
                    context: "series construction",
                });
            }
        }
        Ok(QuarterlySeries { start, values })
    }

    pub fn start(&self) -> Quarter {
        self.start
    }

    /// Last covered quarter (inclusive).
    pub fn end(&self) -> Quarter {
        self.start.offset(self.values.len() as i64 - 1)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at `quarter`, or `None` outside the covered range.
    pub fn get(&self, quarter: Quarter) -> Option<f64> {
        let off = quarter.quarters_since(self.start);
        if off < 0 {
            return None;
        }
        self.values.get(off as usize).copied()
    }

    /// Iterates `(quarter, value)` pairs in calendar order.
    pub fn iter(&self) -> impl Iterator<Item = (Quarter, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.start.offset(i as i64), v))
    }

    /// Restriction to `[first, last]`; errs if that window lies outside
    /// the covered range or is empty.
    pub fn slice(&self, first: Quarter, last: Quarter) -> Result<Self> {
        if last < first {
            return Err(Error::EmptyIntersection {
                context: "requested window is empty",
            });
        }
        let lo = first.quarters_since(self.start);
        let hi = last.quarters_since(self.start);
        if lo < 0 || hi >= self.values.len() as i64 {
            return Err(Error::EmptyIntersection {
                context: "requested window exceeds the covered range",
            });
        }
        Ok(QuarterlySeries {
            start: first,
            values: self.values[lo as usize..=hi as usize].to_vec(),
        })
    }

    /// Shifts the series forward in time by `lag` quarters: the result at
    /// quarter `t` holds the input's value at `t - lag`. The calendar
    /// coverage shifts accordingly; no observations are dropped.
    pub fn lag(&self, lag: usize) -> Result<Self> {
        if lag >= self.values.len() {
            // A lag this large leaves no overlap with the original range,
            // which is never what a regression alignment wants.
            return Err(Error::LagTooLarge {
                lag,
                len: self.values.len(),
            });
        }
        Ok(QuarterlySeries {
            start: self.start.offset(lag as i64),
            values: self.values.clone(),
        })
    }

    /// Natural log, elementwise; every value must be strictly positive.
    pub fn ln(&self) -> Result<Self> {
        let mut out = Vec::with_capacity(self.values.len());
        for (q, v) in self.iter() {
            if v <= 0.0 {
                return Err(Error::NonPositiveInput {
                    quarter: q,
                    value: v,
                    context: "natural log",
                });
            }
            out.push(v.ln());
        }
        Ok(QuarterlySeries {
            start: self.start,
            values: out,
        })
    }

    /// Elementwise combination over the exact common range; errs when the
    /// calendars are identical in neither start nor end (use
    /// [`common_range`] + [`QuarterlySeries::slice`] to align first).
    fn zip_aligned(
        &self,
        other: &QuarterlySeries,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<QuarterlySeries> {
        if self.start != other.start || self.len() != other.len() {
            return Err(Error::MisalignedSeries {
                left_start: self.start,
                left_end: self.end(),
                right_start: other.start,
                right_end: other.end(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(QuarterlySeries {
            start: self.start,
            values,
        })
    }

    /// Elementwise difference `self - other` on identical calendars.
    pub fn minus(&self, other: &QuarterlySeries) -> Result<QuarterlySeries> {
        self.zip_aligned(other, |a, b| a - b)
    }
}

/// Largest calendar window covered by every series; errs when any pair of
/// ranges is disjoint.
pub fn common_range(series: &[&QuarterlySeries]) -> Result<(Quarter, Quarter)> {
    let mut iter = series.iter();
    let first = iter.next().ok_or(Error::EmptyInput {
        context: "common range of zero series",
    })?;
    let mut lo = first.start();
    let mut hi = first.end();
    for s in iter {
        lo = lo.max(s.start());
        hi = hi.min(s.end());
    }
    if hi < lo {
        return Err(Error::EmptyIntersection {
            context: "no quarter is covered by every series",
        });
    }
    Ok((lo, hi))
}

/// Log of real GDP from nominal GDP and a deflator (base-100 index):
/// `ln(100 * nominal / deflator)`, computed on the common range.
///
/// Both inputs must be strictly positive wherever they enter the result.
pub fn real_log_gdp(
    nominal_gdp: &QuarterlySeries,
    deflator: &QuarterlySeries,
) -> Result<QuarterlySeries> {
    let (lo, hi) = common_range(&[nominal_gdp, deflator])?;
    let nominal = nominal_gdp.slice(lo, hi)?;
    let defl = deflator.slice(lo, hi)?;
    for (q, v) in nominal.iter() {
        if v <= 0.0 {
            return Err(Error::NonPositiveInput {
                quarter: q,
                value: v,
                context: "nominal GDP",
            });
        }
    }
    for (q, v) in defl.iter() {
        if v <= 0.0 {
            return Err(Error::NonPositiveInput {
                quarter: q,
                value: v,
                context: "GDP deflator",
            });
        }
    }
    // ln(100 n / d) = ln n - ln d + ln 100; dividing first keeps the
    // argument near the real level rather than forming big intermediates.
    nominal.zip_aligned(&defl, |n, d| (100.0 * n / d).ln())
}

/// Yield spread: long rate minus short rate on the common range.
pub fn spread(long: &QuarterlySeries, short: &QuarterlySeries) -> Result<QuarterlySeries> {
    let (lo, hi) = common_range(&[long, short])?;
    long.slice(lo, hi)?.minus(&short.slice(lo, hi)?)
}

/// The six raw columns for one country.
///
/// Construction validates that all six share a non-empty calendar
/// intersection, that the deflator and the stock index are strictly
/// positive everywhere (they are denominators / log arguments), and that
/// nominal GDP is strictly positive.
#[derive(Debug, Clone)]
pub struct CountryPanel {
    country: String,
    nominal_gdp: QuarterlySeries,
    deflator: QuarterlySeries,
    rate_long: QuarterlySeries,
    rate_short: QuarterlySeries,
    unemployment: QuarterlySeries,
    stock_index: QuarterlySeries,
}

impl CountryPanel {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        country: impl Into<String>,
        nominal_gdp: QuarterlySeries,
        deflator: QuarterlySeries,
        rate_long: QuarterlySeries,
        rate_short: QuarterlySeries,
        unemployment: QuarterlySeries,
        stock_index: QuarterlySeries,
    ) -> Result<Self> {
        common_range(&[
            &nominal_gdp,
            &deflator,
            &rate_long,
            &rate_short,
            &unemployment,
            &stock_index,
        ])?;
        for (series, context) in [
            (&nominal_gdp, "nominal GDP"),
            (&deflator, "GDP deflator"),
            (&stock_index, "stock index"),
        ] {
            for (q, v) in series.iter() {
                if v <= 0.0 {
                    return Err(Error::NonPositiveInput {
                        quarter: q,
                        value: v,
                        context,
                    });
                }
            }
        }
        Ok(CountryPanel {
            country: country.into(),
            nominal_gdp,
            deflator,
            rate_long,
            rate_short,
            unemployment,
            stock_index,
        })
    }

    pub fn country(&self) -> &str {
        &self.country
    }

    pub fn nominal_gdp(&self) -> &QuarterlySeries {
        &self.nominal_gdp
    }

    pub fn deflator(&self) -> &QuarterlySeries {
        &self.deflator
    }

    pub fn rate_long(&self) -> &QuarterlySeries {
        &self.rate_long
    }

    pub fn rate_short(&self) -> &QuarterlySeries {
        &self.rate_short
    }

    pub fn unemployment(&self) -> &QuarterlySeries {
        &self.unemployment
    }

    pub fn stock_index(&self) -> &QuarterlySeries {
        &self.stock_index
    }

    /// Largest window covered by all six columns. Guaranteed non-empty by
    /// construction.
    pub fn common_range(&self) -> (Quarter, Quarter) {
        common_range(&[
            &self.nominal_gdp,
            &self.deflator,
            &self.rate_long,
            &self.rate_short,
            &self.unemployment,
            &self.stock_index,
        ])
        .expect("validated at construction")
    }

    /// Copy of the panel with every column cut to the common range.
    pub fn restrict_to_common_range(&self) -> CountryPanel {
        let (lo, hi) = self.common_range();
        let cut = |s: &QuarterlySeries| s.slice(lo, hi).expect("common range is covered");
        CountryPanel {
            country: self.country.clone(),
            nominal_gdp: cut(&self.nominal_gdp),
            deflator: cut(&self.deflator),
            rate_long: cut(&self.rate_long),
            rate_short: cut(&self.rate_short),
            unemployment: cut(&self.unemployment),
            stock_index: cut(&self.stock_index),
        }
    }
}
