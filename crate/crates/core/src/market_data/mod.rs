//! Discount curves, CDS quotes, payment schedules and day counting.

mod curve;
mod dates;
mod quotes;
mod schedule;

pub use curve::{forward_libor, load_discount_curve, CurveNode, Discount, DiscountCurve, FnCurve};
pub use dates::{add_months, parse_date, year_fraction, year_fraction_unchecked, DAYS_PER_YEAR};
pub use quotes::{load_cds_quotes, CdsQuote, CdsQuoteSet};
pub use schedule::PaymentSchedule;
