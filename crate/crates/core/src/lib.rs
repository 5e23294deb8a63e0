//! Structural credit modelling with the analytically tractable first-passage
//! (AT1P) model.
//!
//! The closed-form pieces (survival probabilities, barrier diagnostics, CDS
//! legs, intensity curves) are generic over [`Real`] so they run in `f32` or
//! `f64`. Calibration, Monte Carlo and the equity swap work in `f64`.

// `!(x > y)` is used on purpose so that NaN inputs fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod at1p_model;
pub mod calibration;
pub mod cds;
pub mod equity_swap;
pub mod error;
pub mod intensity;
pub mod market_data;
pub mod monte_carlo;
pub mod normal;
pub mod piecewise;
pub mod real;
pub mod solver;
pub mod survival;

pub use at1p_model::{psi, survival_from_variance, At1pParams, ConfidenceBand, FirmValueDynamics};
pub use calibration::{calibrate, bootstrap_volatility, credit_spread_h, excursion_protection_h, iterative_h, check_debt_covenant, CalibrationConfig, CalibrationResult, HMethod, HOrigin};
pub use cds::{cds_legs, cds_price, fair_spread, CdsContract, CdsConvention, CdsLegs};
pub use equity_swap::{price_equity_swap, fair_equity_swap_spread, EquitySwapContract, EquitySwapPrice, EquitySwapSimulation, JointDynamics};
pub use error::{Error, Result};
pub use intensity::{calibrate_intensity, IntensityCurve};
pub use market_data::{load_cds_quotes, load_discount_curve, CdsQuote, CdsQuoteSet, DiscountCurve, PaymentSchedule};
pub use monte_carlo::{mc_cds_values, mc_survival, McCdsContract, McConfig, McEstimate};
pub use real::Real;
pub use survival::SurvivalCurve;

pub type At1pParamsF64 = At1pParams<f64>;
pub type At1pParamsF32 = At1pParams<f32>;
pub type DiscountCurveF64 = DiscountCurve<f64>;
pub type DiscountCurveF32 = DiscountCurve<f32>;
pub type IntensityCurveF64 = IntensityCurve<f64>;
pub type IntensityCurveF32 = IntensityCurve<f32>;
pub type FirmValueDynamicsF64 = FirmValueDynamics<f64>;
