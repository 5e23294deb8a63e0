use std::io::Read;
use std::path::Path;

use chrono::NaiveDate;

use super::dates::{parse_date, year_fraction_unchecked};
use crate::error::{Error, Result};
use crate::piecewise::PiecewiseConstant;
use crate::real::Real;

/// Anything that returns a discount factor `P(0, t)` for a year fraction `t`.
pub trait Discount<T> {
    fn discount(&self, t: T) -> T;
}

/// Adapter turning a closure into a [`Discount`] or survival curve.
#[derive(Debug, Clone, Copy)]
pub struct FnCurve<F>(pub F);

impl<T, F: Fn(T) -> T> Discount<T> for FnCurve<F> {
    #[inline]
    fn discount(&self, t: T) -> T {
        (self.0)(t)
    }
}

impl<T, D: Discount<T> + ?Sized> Discount<T> for &D {
    #[inline]
    fn discount(&self, t: T) -> T {
        (**self).discount(t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveNode<T> {
    pub date: NaiveDate,
    pub t: T,
    pub discount: T,
    /// Decimal text the value was read from; written back verbatim.
    pub text: String,
}

/// Dated discount factors with log-linear interpolation (piecewise-flat
/// instantaneous forwards) and flat-forward extrapolation past the last node.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscountCurve<T> {
    nodes: Vec<CurveNode<T>>,
    log_df: Vec<T>,
}

impl<T: Real> DiscountCurve<T> {
    /// Builds a curve from `(date, discount)` pairs; the first date is the anchor.
    pub fn new(nodes: &[(NaiveDate, T)]) -> Result<Self> {
        let nodes = nodes
            .iter()
            .map(|&(date, df)| (date, df, format!("{df}")))
            .collect::<Vec<_>>();
        Self::from_parts("curve", nodes)
    }

    fn from_parts(source: &str, rows: Vec<(NaiveDate, T, String)>) -> Result<Self> {
        let err = |row: usize, reason: String| Error::Ingest {
            source_name: source.to_string(),
            row,
            reason,
        };
        let (anchor, first) = match rows.first() {
            Some(r) => (r.0, r.1),
            None => return Err(err(1, "curve has no rows".into())),
        };
        if first != T::one() {
            return Err(err(2, format!("anchor discount must be 1, got {first}")));
        }
        let mut nodes: Vec<CurveNode<T>> = Vec::with_capacity(rows.len());
        for (i, (date, df, text)) in rows.into_iter().enumerate() {
            let row = i + 2;
            if !(df > T::zero() && df <= T::one()) {
                return Err(err(row, format!("discount {df} outside (0, 1]")));
            }
            if let Some(prev) = nodes.last() {
                if date <= prev.date {
                    return Err(err(row, format!("date {date} not after {}", prev.date)));
                }
                if df > prev.discount {
                    return Err(err(row, format!("discount {df} increases over {}", prev.discount)));
                }
            }
            nodes.push(CurveNode {
                date,
                t: T::lit(year_fraction_unchecked(anchor, date)),
                discount: df,
                text,
            });
        }
        let log_df = nodes.iter().map(|n| n.discount.ln()).collect();
        Ok(DiscountCurve { nodes, log_df })
    }

    /// Parses CSV `date,discount` with a header row.
    pub fn from_csv_reader<R: Read>(reader: R, source_name: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut rows = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let row = i + 2;
            let err = |reason: String| Error::Ingest {
                source_name: source_name.to_string(),
                row,
                reason,
            };
            let rec = rec.map_err(|e| err(e.to_string()))?;
            if rec.len() != 2 {
                return Err(err(format!("expected 2 fields, found {}", rec.len())));
            }
            let date = parse_date(&rec[0]).map_err(|e| err(e.to_string()))?;
            let text = rec[1].to_string();
            let df: f64 = text
                .parse()
                .map_err(|_| err(format!("malformed discount {text:?}")))?;
            rows.push((date, T::lit(df), text));
        }
        Self::from_parts(source_name, rows)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_csv_reader(file, &path.display().to_string())
    }

    /// Writes the curve back as `date,discount` CSV, preserving the original
    /// decimal text of every node.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("date,discount\n");
        for n in &self.nodes {
            out.push_str(&format!("{},{}\n", n.date.format("%Y-%m-%d"), n.text));
        }
        out
    }

    pub fn anchor(&self) -> NaiveDate {
        self.nodes[0].date
    }

    pub fn nodes(&self) -> &[CurveNode<T>] {
        &self.nodes
    }

    pub fn year_fraction_to(&self, date: NaiveDate) -> T {
        T::lit(year_fraction_unchecked(self.anchor(), date))
    }

    /// `P(0, t)`. Exact at nodes; `t <= 0` gives 1.
    pub fn discount_factor(&self, t: T) -> T {
        if t <= T::zero() {
            return T::one();
        }
        let n = self.nodes.len();
        if n == 1 {
            return T::one();
        }
        let i = self.nodes.partition_point(|node| node.t < t);
        if i < n && self.nodes[i].t == t {
            return self.nodes[i].discount;
        }
        if i >= n {
            let f = self.last_forward();
            let last = &self.nodes[n - 1];
            return (self.log_df[n - 1] - f * (t - last.t)).exp();
        }
        let (t0, t1) = (self.nodes[i - 1].t, self.nodes[i].t);
        let w = (t - t0) / (t1 - t0);
        (self.log_df[i - 1] + w * (self.log_df[i] - self.log_df[i - 1])).exp()
    }

    pub fn discount_at_date(&self, date: NaiveDate) -> T {
        self.discount_factor(self.year_fraction_to(date))
    }

    fn last_forward(&self) -> T {
        let n = self.nodes.len();
        if n < 2 {
            return T::zero();
        }
        (self.log_df[n - 2] - self.log_df[n - 1]) / (self.nodes[n - 1].t - self.nodes[n - 2].t)
    }

    /// Instantaneous forward rate `r_t` implied by the interpolation scheme.
    pub fn forward_curve(&self) -> PiecewiseConstant<T> {
        if self.nodes.len() < 2 {
            return PiecewiseConstant::constant(T::zero());
        }
        let pieces: Vec<(T, T)> = self
            .nodes
            .windows(2)
            .zip(self.log_df.windows(2))
            .map(|(w, l)| (w[1].t, (l[0] - l[1]) / (w[1].t - w[0].t)))
            .collect();
        PiecewiseConstant::new(&pieces).expect("curve node times are strictly increasing")
    }
}

impl<T: Real> Discount<T> for DiscountCurve<T> {
    #[inline]
    fn discount(&self, t: T) -> T {
        self.discount_factor(t)
    }
}

/// Loads an `f64` discount curve from a CSV file.
pub fn load_discount_curve(path: impl AsRef<Path>) -> Result<DiscountCurve<f64>> {
    DiscountCurve::load(path)
}

/// Simply-compounded forward rate `(P(0,T_prev)/P(0,T_next) - 1) / (T_next - T_prev)`.
pub fn forward_libor<T: Real, D: Discount<T>>(curve: &D, t_prev: T, t_next: T) -> Result<T> {
    if !(t_next > t_prev) {
        return Err(Error::InvalidInput(format!(
            "forward_libor: need t_prev < t_next, got {t_prev} >= {t_next}"
        )));
    }
    let alpha = t_next - t_prev;
    Ok((curve.discount(t_prev) / curve.discount(t_next) - T::one()) / alpha)
}
