use chrono::NaiveDate;

use super::dates::{add_months, year_fraction_unchecked};
use crate::error::{Error, Result};
use crate::real::Real;

/// Payment dates `T_1 < ... < T_b` as year fractions, with implicit `T_0 = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PaymentSchedule<T> {
    times: Vec<T>,
}

impl<T: Real> PaymentSchedule<T> {
    pub fn new(times: Vec<T>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::InvalidInput("empty payment schedule".into()));
        }
        let mut prev = T::zero();
        for (i, &t) in times.iter().enumerate() {
            if !(t > prev) {
                return Err(Error::InvalidInput(format!(
                    "schedule dates must be strictly increasing and positive (T_{} = {t})",
                    i + 1
                )));
            }
            prev = t;
        }
        Ok(PaymentSchedule { times })
    }

    /// Dates rolled backward from `maturity` every `12 / frequency` months
    /// until the valuation date; the first period may be a stub.
    pub fn backward_dates(valuation: NaiveDate, maturity: NaiveDate, frequency: u32) -> Vec<NaiveDate> {
        assert!(frequency > 0 && 12 % frequency == 0, "frequency must divide 12");
        let step = (12 / frequency) as i32;
        let mut dates = Vec::new();
        let mut k = 0;
        loop {
            let d = add_months(maturity, -step * k);
            if d <= valuation {
                break;
            }
            dates.push(d);
            k += 1;
        }
        dates.reverse();
        dates
    }

    pub fn from_dates(valuation: NaiveDate, dates: &[NaiveDate]) -> Result<Self> {
        Self::new(
            dates
                .iter()
                .map(|&d| T::lit(year_fraction_unchecked(valuation, d)))
                .collect(),
        )
    }

    /// Backward-generated schedule from valuation date to maturity.
    pub fn backward(valuation: NaiveDate, maturity: NaiveDate, frequency: u32) -> Result<Self> {
        Self::from_dates(valuation, &Self::backward_dates(valuation, maturity, frequency))
    }

    /// Regular schedule `i / frequency` up to `maturity` years (last period
    /// shortened if needed).
    pub fn regular(maturity: T, frequency: u32) -> Result<Self> {
        if !(maturity > T::zero()) || frequency == 0 {
            return Err(Error::InvalidInput("regular schedule needs maturity > 0, frequency > 0".into()));
        }
        let step = T::one() / T::lit(frequency as f64);
        let mut times = Vec::new();
        let mut i = 1;
        loop {
            let t = step * T::lit(i as f64);
            if t >= maturity - T::lit(1e-9) {
                times.push(maturity);
                break;
            }
            times.push(t);
            i += 1;
        }
        Self::new(times)
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    /// Number of payment dates `b`.
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn maturity(&self) -> T {
        *self.times.last().expect("non-empty schedule")
    }

    /// `T_i` for `i` in `0..=b`.
    #[inline]
    pub fn date(&self, i: usize) -> T {
        if i == 0 {
            T::zero()
        } else {
            self.times[i - 1]
        }
    }

    /// Accrual `α_i = T_i - T_{i-1}` for `i` in `1..=b`.
    #[inline]
    pub fn accrual(&self, i: usize) -> T {
        self.date(i) - self.date(i - 1)
    }

    /// Index of the first `T_i >= t`, clamped to `1..=b+1` (`b+1` past maturity).
    #[inline]
    pub fn beta_idx(&self, t: T) -> usize {
        self.times.partition_point(|&ti| ti < t) + 1
    }

    /// `T_{β(t)-1}`: start of the accrual period containing `t`.
    #[inline]
    pub fn period_start(&self, t: T) -> T {
        let i = self.beta_idx(t).min(self.times.len() + 1);
        self.date(i - 1)
    }
}
