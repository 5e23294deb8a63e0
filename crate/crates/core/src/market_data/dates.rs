use chrono::{Months, NaiveDate};

use crate::error::{Error, Result};

/// ACT/365-fixed denominator, used for every time measurement in the crate.
pub const DAYS_PER_YEAR: f64 = 365.0;

/// ACT/365-fixed year fraction between two dates. Fails if `d2 < d1`.
pub fn year_fraction(d1: NaiveDate, d2: NaiveDate) -> Result<f64> {
    if d2 < d1 {
        return Err(Error::InvalidInput(format!("year_fraction: {d2} precedes {d1}")));
    }
    Ok(year_fraction_unchecked(d1, d2))
}

/// Signed ACT/365-fixed year fraction.
#[inline]
pub fn year_fraction_unchecked(d1: NaiveDate, d2: NaiveDate) -> f64 {
    (d2 - d1).num_days() as f64 / DAYS_PER_YEAR
}

pub fn parse_date(s: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(s.trim(), "%Y-%m-%d")
        .map_err(|e| Error::InvalidInput(format!("bad ISO-8601 date {s:?}: {e}")))
}

/// Shifts a date by a signed number of months, clamping to month end.
pub fn add_months(d: NaiveDate, months: i32) -> NaiveDate {
    let shifted = if months >= 0 {
        d.checked_add_months(Months::new(months as u32))
    } else {
        d.checked_sub_months(Months::new(months.unsigned_abs()))
    };
    shifted.expect("date arithmetic within chrono range")
}
