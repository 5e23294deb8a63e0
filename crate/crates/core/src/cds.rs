//! Running (RCDS) and postponed (PRCDS) credit default swap pricing under an
//! arbitrary survival curve and deterministic discounting.
//!
//! Prices are the value to the protection buyer per unit notional:
//! `LGD · protection − R · (premium annuity + accrual on default)`, which is
//! zero at the fair running spread.

use crate::error::{Error, Result};
use crate::market_data::{Discount, PaymentSchedule};
use crate::real::Real;
use crate::survival::SurvivalCurve;

/// Width of the default-leg integration cells, one week.
pub const DEFAULT_GRID_STEP: f64 = 7.0 / 365.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CdsConvention {
    /// Protection paid at the default time, premium accrued up to default.
    #[default]
    Running,
    /// Protection postponed to the next premium date, no accrual term.
    Postponed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CdsContract<T> {
    pub schedule: PaymentSchedule<T>,
    pub spread: T,
    pub lgd: T,
    pub convention: CdsConvention,
}

impl<T: Real> CdsContract<T> {
    pub fn new(schedule: PaymentSchedule<T>, spread: T, lgd: T, convention: CdsConvention) -> Result<Self> {
        if !(lgd >= T::zero() && lgd <= T::one()) {
            return Err(Error::InvalidInput(format!("LGD {lgd} outside [0, 1]")));
        }
        if !(spread >= T::zero()) {
            return Err(Error::InvalidInput(format!("negative spread {spread}")));
        }
        Ok(CdsContract { schedule, spread, lgd, convention })
    }

    pub fn running(schedule: PaymentSchedule<T>, spread: T, lgd: T) -> Result<Self> {
        Self::new(schedule, spread, lgd, CdsConvention::Running)
    }
}

/// The three building blocks of a CDS value, each per unit of its multiplier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdsLegs<T> {
    /// `∫ P(0,t) dQ(τ <= t)` (or its postponed version), per unit LGD.
    pub protection: T,
    /// `Σ P(0,T_i) α_i Q(τ > T_i)`, per unit spread.
    pub premium_annuity: T,
    /// `∫ P(0,t) (t − T_{β(t)-1}) dQ(τ <= t)`, per unit spread.
    pub accrual: T,
}

impl<T: Real> CdsLegs<T> {
    /// Protection-buyer value.
    #[inline]
    pub fn value(&self, spread: T, lgd: T) -> T {
        lgd * self.protection - spread * (self.premium_annuity + self.accrual)
    }

    pub fn fair_spread(&self, lgd: T) -> Result<T> {
        let annuity = self.premium_annuity + self.accrual;
        if !(annuity > T::zero()) {
            return Err(Error::Domain("premium annuity is zero".into()));
        }
        Ok(lgd * self.protection / annuity)
    }
}

/// Evaluates the legs on a grid made of all premium dates plus every multiple
/// of `step`. Each cell uses the exact survival increment with the midpoint
/// discount factor and midpoint accrual time.
pub fn cds_legs_with_step<T, S, D>(
    schedule: &PaymentSchedule<T>,
    convention: CdsConvention,
    survival: &S,
    discount: &D,
    step: T,
) -> CdsLegs<T>
where
    T: Real,
    S: SurvivalCurve<T> + ?Sized,
    D: Discount<T> + ?Sized,
{
    let half = T::lit(0.5);
    let mut protection = T::zero();
    let mut annuity = T::zero();
    let mut accrual = T::zero();
    let mut q_prev = survival.survival(T::zero());

    for i in 1..=schedule.len() {
        let start = schedule.date(i - 1);
        let end = schedule.date(i);
        let q_end;
        match convention {
            CdsConvention::Running => {
                let mut left = start;
                let mut q_left = q_prev;
                let mut k = (start / step).floor().to_usize().unwrap_or(0) + 1;
                loop {
                    let grid_pt = step * T::lit(k as f64);
                    let right = if grid_pt < end - T::lit(1e-12) { grid_pt } else { end };
                    if right > left {
                        let q_right = survival.survival(right);
                        let dq = q_left - q_right;
                        let mid = half * (left + right);
                        let df = discount.discount(mid);
                        protection = protection + df * dq;
                        accrual = accrual + df * (mid - start) * dq;
                        q_left = q_right;
                        left = right;
                    }
                    if right >= end {
                        break;
                    }
                    k += 1;
                }
                q_end = q_left;
            }
            CdsConvention::Postponed => {
                q_end = survival.survival(end);
                protection = protection + discount.discount(end) * (q_prev - q_end);
            }
        }
        annuity = annuity + discount.discount(end) * schedule.accrual(i) * q_end;
        q_prev = q_end;
    }
    CdsLegs { protection, premium_annuity: annuity, accrual }
}

pub fn cds_legs<T, S, D>(schedule: &PaymentSchedule<T>, convention: CdsConvention, survival: &S, discount: &D) -> CdsLegs<T>
where
    T: Real,
    S: SurvivalCurve<T> + ?Sized,
    D: Discount<T> + ?Sized,
{
    cds_legs_with_step(schedule, convention, survival, discount, T::lit(DEFAULT_GRID_STEP))
}

/// Protection-buyer value per unit notional.
pub fn cds_price<T, S, D>(contract: &CdsContract<T>, survival: &S, discount: &D) -> Result<T>
where
    T: Real,
    S: SurvivalCurve<T> + ?Sized,
    D: Discount<T> + ?Sized,
{
    if contract.schedule.is_empty() {
        return Err(Error::InvalidInput("empty CDS schedule".into()));
    }
    let legs = cds_legs(&contract.schedule, contract.convention, survival, discount);
    Ok(legs.value(contract.spread, contract.lgd))
}

/// Running spread that zeroes the contract value, in closed form.
pub fn fair_spread<T, S, D>(
    survival: &S,
    discount: &D,
    schedule: &PaymentSchedule<T>,
    lgd: T,
    convention: CdsConvention,
) -> Result<T>
where
    T: Real,
    S: SurvivalCurve<T> + ?Sized,
    D: Discount<T> + ?Sized,
{
    cds_legs(schedule, convention, survival, discount).fair_spread(lgd)
}
