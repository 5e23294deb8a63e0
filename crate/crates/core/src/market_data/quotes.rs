use std::io::Read;
use std::path::Path;

use chrono::NaiveDate;

use super::dates::{parse_date, year_fraction_unchecked};
use super::schedule::PaymentSchedule;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CdsQuote {
    pub maturity: NaiveDate,
    /// Running spread in basis points.
    pub spread_bps: f64,
    /// Recovery rate in `[0, 1)`.
    pub recovery: f64,
}

impl CdsQuote {
    pub fn spread(&self) -> f64 {
        self.spread_bps * 1e-4
    }

    pub fn lgd(&self) -> f64 {
        1.0 - self.recovery
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CdsQuoteSet {
    pub valuation_date: NaiveDate,
    pub quotes: Vec<CdsQuote>,
    /// Premium payments per year.
    pub premium_frequency: u32,
}

impl CdsQuoteSet {
    pub fn new(valuation_date: NaiveDate, quotes: Vec<CdsQuote>, premium_frequency: u32) -> Result<Self> {
        if quotes.is_empty() {
            return Err(Error::InvalidInput("quote set is empty".into()));
        }
        if premium_frequency == 0 || 12 % premium_frequency != 0 {
            return Err(Error::InvalidInput(format!(
                "premium frequency {premium_frequency} does not divide 12"
            )));
        }
        let mut prev = valuation_date;
        for (i, q) in quotes.iter().enumerate() {
            if q.maturity <= prev {
                return Err(Error::InvalidInput(format!(
                    "quote #{}: maturity {} not after {prev}",
                    i + 1,
                    q.maturity
                )));
            }
            if !(q.spread_bps >= 0.0) || !q.spread_bps.is_finite() {
                return Err(Error::InvalidInput(format!("quote #{}: negative spread", i + 1)));
            }
            if !(0.0..1.0).contains(&q.recovery) {
                return Err(Error::InvalidInput(format!("quote #{}: recovery outside [0, 1)", i + 1)));
            }
            prev = q.maturity;
        }
        Ok(CdsQuoteSet { valuation_date, quotes, premium_frequency })
    }

    /// Parses CSV `maturity_date,spread_bps,recovery` with a header row.
    pub fn from_csv_reader<R: Read>(
        reader: R,
        source_name: &str,
        valuation_date: NaiveDate,
        premium_frequency: u32,
    ) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut quotes = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let row = i + 2;
            let err = |reason: String| Error::Ingest {
                source_name: source_name.to_string(),
                row,
                reason,
            };
            let rec = rec.map_err(|e| err(e.to_string()))?;
            if rec.len() != 3 {
                return Err(err(format!("expected 3 fields, found {}", rec.len())));
            }
            let maturity = parse_date(&rec[0]).map_err(|e| err(e.to_string()))?;
            let spread_bps: f64 = rec[1].parse().map_err(|_| err(format!("malformed spread {:?}", &rec[1])))?;
            let recovery: f64 = rec[2].parse().map_err(|_| err(format!("malformed recovery {:?}", &rec[2])))?;
            quotes.push(CdsQuote { maturity, spread_bps, recovery });
        }
        Self::new(valuation_date, quotes, premium_frequency)
    }

    pub fn maturities(&self) -> Vec<f64> {
        self.quotes
            .iter()
            .map(|q| year_fraction_unchecked(self.valuation_date, q.maturity))
            .collect()
    }

    /// Premium schedule of quote `i`, rolled backward from its maturity.
    pub fn schedule(&self, i: usize) -> PaymentSchedule<f64> {
        PaymentSchedule::backward(self.valuation_date, self.quotes[i].maturity, self.premium_frequency)
            .expect("maturity after valuation date")
    }

    pub fn len(&self) -> usize {
        self.quotes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotes.is_empty()
    }

    /// Tenor label such as `3y`, rounded to whole years.
    pub fn tenor_label(&self, i: usize) -> String {
        let t = year_fraction_unchecked(self.valuation_date, self.quotes[i].maturity);
        if t >= 0.75 {
            format!("{}y", t.round() as i64)
        } else {
            format!("{}m", (t * 12.0).round() as i64)
        }
    }
}

/// Loads quarterly-paying CDS quotes valued at `valuation_date`.
pub fn load_cds_quotes(path: impl AsRef<Path>, valuation_date: NaiveDate) -> Result<CdsQuoteSet> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    CdsQuoteSet::from_csv_reader(file, &path.display().to_string(), valuation_date, 4)
}
