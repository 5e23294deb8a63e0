//! AT1P calibration: sequential volatility bootstrap to CDS quotes and the
//! choice of the normalized barrier `h = H / V0`.

use crate::at1p_model::{psi, At1pParams};
use crate::cds::{cds_legs, CdsConvention};
use crate::error::{Error, Result};
use crate::intensity::calibrate_intensity;
use crate::market_data::{CdsQuoteSet, Discount, DiscountCurve};
use crate::piecewise::PiecewiseConstant;
use crate::solver::{bisect, brent_with_values, SolverOptions};
use crate::survival::SurvivalCurve;

/// Search interval for `h` whenever it is solved for.
pub const H_BRACKET: (f64, f64) = (1e-4, 1.0 - 1e-6);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HMethod {
    /// Match the 1y intensity-model survival with the equity volatility.
    CreditSpread,
    /// `h = REC` of the first quote.
    ExcursionProtection,
    /// Fixed point between the first-piece volatility and the equity volatility.
    Iterative,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationConfig {
    pub beta: f64,
    pub h_method: HMethod,
    /// Equity volatility over the first year; required by `CreditSpread` and
    /// `Iterative`.
    pub equity_vol_1y: Option<f64>,
    pub vol_bounds: (f64, f64),
    pub price_tol: f64,
    /// Retry with `Iterative` when `CreditSpread` fails.
    pub fallback_to_iterative: bool,
    pub h_initial: f64,
    pub max_iter: usize,
    pub h_tol: f64,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        CalibrationConfig {
            beta: 0.5,
            h_method: HMethod::Fixed(0.5),
            equity_vol_1y: None,
            vol_bounds: (1e-4, 10.0),
            price_tol: 1e-10,
            fallback_to_iterative: false,
            h_initial: 0.5,
            max_iter: 100,
            h_tol: 1e-10,
        }
    }
}

impl CalibrationConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.vol_bounds;
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::InvalidInput(format!("bad volatility bounds ({lo}, {hi})")));
        }
        if !(self.price_tol > 0.0) {
            return Err(Error::InvalidInput("price tolerance must be positive".into()));
        }
        if !self.beta.is_finite() {
            return Err(Error::InvalidInput("beta must be finite".into()));
        }
        if let Some(s) = self.equity_vol_1y {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::InvalidInput(format!("equity volatility {s} must be positive")));
            }
        }
        Ok(())
    }

    fn equity_vol(&self) -> Result<f64> {
        self.equity_vol_1y
            .ok_or_else(|| Error::InvalidInput("equity_vol_1y is required by this barrier method".into()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaturityDiagnostics {
    pub maturity: f64,
    pub sigma: f64,
    /// CDS value at the solved volatility (protection buyer, unit notional).
    pub residual: f64,
    pub iterations: usize,
    /// Zero spread: the piece was set to the lower volatility bound.
    pub zero_spread: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum HOrigin {
    Fixed,
    CreditSpread { target_survival: f64 },
    ExcursionProtection,
    Iterative { iterations: usize, trace: Vec<(f64, f64)> },
    /// Credit-spread route failed and the iterative route produced `h`.
    IterativeFallback { reason: String, iterations: usize, trace: Vec<(f64, f64)> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationResult {
    pub params: At1pParams<f64>,
    pub diagnostics: Vec<MaturityDiagnostics>,
    pub h: f64,
    pub h_origin: HOrigin,
}

impl CalibrationResult {
    pub fn vols(&self) -> Vec<f64> {
        self.diagnostics.iter().map(|d| d.sigma).collect()
    }

    pub fn survival_at_maturities(&self) -> Vec<f64> {
        self.diagnostics
            .iter()
            .map(|d| self.params.survival_probability(d.maturity))
            .collect()
    }

    pub fn max_abs_residual(&self) -> f64 {
        self.diagnostics.iter().fold(0.0, |m, d| m.max(d.residual.abs()))
    }
}

fn check_h(h: f64) -> Result<()> {
    if h > 0.0 && h < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("normalized barrier h={h} outside (0, 1)")))
    }
}

/// Value of quote `k` under trial volatility nodes.
fn quote_value(quotes: &CdsQuoteSet, k: usize, curve: &DiscountCurve<f64>, params: &At1pParams<f64>) -> f64 {
    let q = &quotes.quotes[k];
    cds_legs(&quotes.schedule(k), CdsConvention::Running, params, curve).value(q.spread(), q.lgd())
}

/// Solves `σ` on `(T_{k-1}, T_k]` with earlier pieces fixed.
fn solve_piece(
    quotes: &CdsQuoteSet,
    k: usize,
    curve: &DiscountCurve<f64>,
    h: f64,
    beta: f64,
    fixed: &[(f64, f64)],
    bounds: (f64, f64),
) -> Result<(f64, f64, usize)> {
    let t_k = quotes.maturities()[k];
    let value_at = |sigma: f64| -> f64 {
        let mut nodes = fixed.to_vec();
        nodes.push((t_k, sigma));
        let params = At1pParams::new(h, beta, &nodes).expect("validated inputs");
        quote_value(quotes, k, curve, &params)
    };
    let opts = SolverOptions { f_tol: 1e-12, x_tol: 1e-15, max_iter: 300 };
    let no_root = Error::NoRootInBracket { maturity: t_k, index: k };

    let (mut lo, mut hi) = bounds;
    let mut f_lo = value_at(lo);
    let mut f_hi = value_at(hi);
    if f_lo.signum() == f_hi.signum() && f_lo.abs() > opts.f_tol && f_hi.abs() > opts.f_tol {
        // one widening attempt before giving up
        lo /= 10.0;
        hi *= 10.0;
        f_lo = value_at(lo);
        f_hi = value_at(hi);
        if f_lo.signum() == f_hi.signum() && f_lo.abs() > opts.f_tol && f_hi.abs() > opts.f_tol {
            return Err(no_root);
        }
    }
    let root = brent_with_values(value_at, lo, f_lo, hi, f_hi, opts).map_err(|_| no_root)?;
    Ok((root.x, root.fx, root.iterations))
}

/// Sequential bootstrap of one volatility per quote for fixed `h` and `β`.
/// `pinned_first_vol` only centres the first search; that piece is still
/// solved.
pub fn bootstrap_volatility(
    quotes: &CdsQuoteSet,
    curve: &DiscountCurve<f64>,
    h: f64,
    beta: f64,
    pinned_first_vol: Option<f64>,
    config: &CalibrationConfig,
) -> Result<CalibrationResult> {
    check_h(h)?;
    config.validate()?;
    let maturities = quotes.maturities();
    let mut nodes: Vec<(f64, f64)> = Vec::with_capacity(quotes.len());
    let mut diagnostics = Vec::with_capacity(quotes.len());

    for (k, q) in quotes.quotes.iter().enumerate() {
        let t_k = maturities[k];
        if q.spread_bps == 0.0 {
            let sigma = config.vol_bounds.0;
            let mut trial = nodes.clone();
            trial.push((t_k, sigma));
            let params = At1pParams::new(h, beta, &trial)?;
            diagnostics.push(MaturityDiagnostics {
                maturity: t_k,
                sigma,
                residual: quote_value(quotes, k, curve, &params),
                iterations: 0,
                zero_spread: true,
            });
            nodes.push((t_k, sigma));
            continue;
        }
        let bounds = match (k, pinned_first_vol) {
            (0, Some(s)) => {
                let (lo, hi) = config.vol_bounds;
                match solve_piece(quotes, k, curve, h, beta, &nodes, ((0.5 * s).max(lo), (2.0 * s).min(hi))) {
                    Ok((sigma, residual, iterations)) => {
                        diagnostics.push(MaturityDiagnostics { maturity: t_k, sigma, residual, iterations, zero_spread: false });
                        nodes.push((t_k, sigma));
                        continue;
                    }
                    Err(_) => config.vol_bounds,
                }
            }
            _ => config.vol_bounds,
        };
        let (sigma, residual, iterations) = solve_piece(quotes, k, curve, h, beta, &nodes, bounds)?;
        diagnostics.push(MaturityDiagnostics { maturity: t_k, sigma, residual, iterations, zero_spread: false });
        nodes.push((t_k, sigma));
    }
    let params = At1pParams::new(h, beta, &nodes)?;
    Ok(CalibrationResult { params, diagnostics, h, h_origin: HOrigin::Fixed })
}

/// Solves `ψ(h; β, T, σ) = target` by bisection after checking that `ψ`
/// decreases in `h` on a grid (it saturates at 1 in floating point for
/// small `h`, so flat steps are allowed there).
pub fn solve_h_for_survival(target: f64, beta: f64, t: f64, sigma: f64) -> Result<f64> {
    let (lo, hi) = H_BRACKET;
    let grid: Vec<f64> = (0..=64).map(|i| lo + (hi - lo) * i as f64 / 64.0).collect();
    let values: Vec<f64> = grid.iter().map(|&h| psi(h, beta, t, sigma)).collect();
    if values.windows(2).any(|w| !(w[1] < w[0] || (w[1] == w[0] && w[0] == 1.0))) {
        return Err(Error::Domain(format!(
            "psi not strictly decreasing in h (beta={beta}, t={t}, sigma={sigma})"
        )));
    }
    let (high, low) = (values[0], values[values.len() - 1]);
    if !(target <= high && target >= low) {
        return Err(Error::TargetOutOfRange { target, low, high });
    }
    let root = bisect(|h| psi(h, beta, t, sigma) - target, lo, hi, 1e-14, 200)?;
    Ok(root.x)
}

/// Barrier from the intensity model: the full intensity curve is stripped,
/// then `h` matches its survival to the first maturity under the equity
/// volatility.
pub fn credit_spread_h(
    quotes: &CdsQuoteSet,
    curve: &DiscountCurve<f64>,
    beta: f64,
    equity_vol_1y: f64,
) -> Result<(f64, f64)> {
    let intensity = calibrate_intensity(quotes, curve)?;
    let t1 = quotes.maturities()[0];
    let target = intensity.survival(t1);
    Ok((solve_h_for_survival(target, beta, t1, equity_vol_1y)?, target))
}

/// `h = REC`: the barrier sits where the residual firm value equals the
/// recovery.
pub fn excursion_protection_h(recovery: f64) -> Result<f64> {
    if recovery > 0.0 && recovery < 1.0 {
        Ok(recovery)
    } else {
        Err(Error::InvalidInput(format!("recovery {recovery} gives a degenerate barrier")))
    }
}

/// Fixed point between `h` and the first-piece volatility. Returns the final
/// `h`, the number of updates and the `(h_i, σ_i)` trace.
pub fn iterative_h(
    quotes: &CdsQuoteSet,
    curve: &DiscountCurve<f64>,
    beta: f64,
    equity_vol_1y: f64,
    h_initial: f64,
    max_iter: usize,
    h_tol: f64,
    config: &CalibrationConfig,
) -> Result<(f64, usize, Vec<(f64, f64)>)> {
    check_h(h_initial)?;
    let t1 = quotes.maturities()[0];
    let mut h = h_initial;
    let mut trace = Vec::new();
    for iter in 1..=max_iter {
        let (sigma, _, _) = solve_piece(quotes, 0, curve, h, beta, &[], config.vol_bounds)?;
        trace.push((h, sigma));
        if (sigma - equity_vol_1y).abs() < 1e-6 {
            return Ok((h, iter, trace));
        }
        let survival = psi(h, beta, t1, sigma);
        let next = solve_h_for_survival(survival, beta, t1, equity_vol_1y)?;
        if (next - h).abs() < h_tol {
            return Ok((next, iter, trace));
        }
        h = next;
    }
    let text = trace
        .iter()
        .map(|(h, s)| format!("h={h:.8} sigma={s:.8}"))
        .collect::<Vec<_>>()
        .join("; ");
    Err(Error::NoConvergence { iterations: max_iter, trace: text })
}

/// Picks `h` according to `config.h_method` and bootstraps all volatilities.
pub fn calibrate(quotes: &CdsQuoteSet, curve: &DiscountCurve<f64>, config: &CalibrationConfig) -> Result<CalibrationResult> {
    config.validate()?;
    let beta = config.beta;
    let (h, origin, pin) = match config.h_method {
        HMethod::Fixed(h) => (h, HOrigin::Fixed, None),
        HMethod::ExcursionProtection => (excursion_protection_h(quotes.quotes[0].recovery)?, HOrigin::ExcursionProtection, None),
        HMethod::CreditSpread => {
            let sigma_eq = config.equity_vol()?;
            match credit_spread_h(quotes, curve, beta, sigma_eq) {
                Ok((h, target)) => (h, HOrigin::CreditSpread { target_survival: target }, Some(sigma_eq)),
                Err(e) if config.fallback_to_iterative => {
                    let (h, iterations, trace) =
                        iterative_h(quotes, curve, beta, sigma_eq, config.h_initial, config.max_iter, config.h_tol, config)?;
                    (h, HOrigin::IterativeFallback { reason: e.to_string(), iterations, trace }, Some(sigma_eq))
                }
                Err(e) => return Err(e),
            }
        }
        HMethod::Iterative => {
            let sigma_eq = config.equity_vol()?;
            let (h, iterations, trace) =
                iterative_h(quotes, curve, beta, sigma_eq, config.h_initial, config.max_iter, config.h_tol, config)?;
            (h, HOrigin::Iterative { iterations, trace }, Some(sigma_eq))
        }
    };
    let mut result = bootstrap_volatility(quotes, curve, h, beta, pin, config)?;
    result.h_origin = origin;
    Ok(result)
}

/// Sufficient debt-covenant check `H <= L P(0, T̄)` (with `V0 = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovenantCheck {
    pub satisfied: bool,
    /// `L P(0, T̄) - h`.
    pub margin: f64,
    /// `q + (1 + 2β) σ²/2 > 0` on every volatility piece; the check is only
    /// sufficient when this holds.
    pub round_bracket_positive: bool,
}

pub fn check_debt_covenant<D: Discount<f64>>(
    h: f64,
    beta: f64,
    sigma: &PiecewiseConstant<f64>,
    q: f64,
    debt_face: f64,
    curve: &D,
    t_bar: f64,
) -> Result<CovenantCheck> {
    if !(debt_face > 0.0 && t_bar > 0.0) {
        return Err(Error::InvalidInput("debt face value and maturity must be positive".into()));
    }
    let margin = debt_face * curve.discount(t_bar) - h;
    let round_bracket_positive = sigma
        .values()
        .iter()
        .all(|&s| q + (1.0 + 2.0 * beta) * 0.5 * s * s > 0.0);
    Ok(CovenantCheck { satisfied: margin >= 0.0, margin, round_bracket_positive })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetaScanPoint {
    pub beta: f64,
    pub h: Option<f64>,
    pub failure: Option<Error>,
}

impl BetaScanPoint {
    pub fn feasible(&self) -> bool {
        self.failure.is_none()
    }
}

/// Runs the configured calibration for each `β` and records which succeed.
pub fn scan_beta_feasibility(
    quotes: &CdsQuoteSet,
    curve: &DiscountCurve<f64>,
    config: &CalibrationConfig,
    betas: &[f64],
) -> Vec<BetaScanPoint> {
    betas
        .iter()
        .map(|&beta| {
            let cfg = CalibrationConfig { beta, ..config.clone() };
            match calibrate(quotes, curve, &cfg) {
                Ok(r) => BetaScanPoint { beta, h: Some(r.h), failure: None },
                Err(e) => BetaScanPoint { beta, h: None, failure: Some(e) },
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market_data::{CdsQuote, FnCurve};
    use chrono::NaiveDate;

    fn date(s: &str) -> NaiveDate {
        crate::market_data::parse_date(s).unwrap()
    }

    fn flat_curve() -> DiscountCurve<f64> {
        let v = date("2004-01-01");
        let nodes: Vec<_> = (0..=12)
            .map(|y| {
                let d = crate::market_data::add_months(v, 12 * y);
                let t = crate::market_data::year_fraction(v, d).unwrap();
                (d, (-0.03 * t).exp())
            })
            .collect();
        DiscountCurve::new(&nodes).unwrap()
    }

    fn quotes(spreads: &[f64]) -> CdsQuoteSet {
        let v = date("2004-01-01");
        let q = spreads
            .iter()
            .enumerate()
            .map(|(i, &s)| CdsQuote {
                maturity: crate::market_data::add_months(v, 12 * [1, 3, 5][i]),
                spread_bps: s,
                recovery: 0.4,
            })
            .collect();
        CdsQuoteSet::new(v, q, 4).unwrap()
    }

    #[test]
    fn bootstrap_reprices_every_quote() {
        let curve = flat_curve();
        let qs = quotes(&[50.0, 80.0, 100.0]);
        let r = bootstrap_volatility(&qs, &curve, 0.5, 0.5, None, &CalibrationConfig::default()).unwrap();
        assert!(r.max_abs_residual() < 1e-10, "{:?}", r.diagnostics);
        for k in 0..qs.len() {
            assert!(quote_value(&qs, k, &curve, &r.params).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_spread_pins_lower_bound() {
        let curve = flat_curve();
        let qs = quotes(&[0.0]);
        let cfg = CalibrationConfig::default();
        let r = bootstrap_volatility(&qs, &curve, 0.5, 0.5, None, &cfg).unwrap();
        assert!(r.diagnostics[0].zero_spread);
        assert_eq!(r.diagnostics[0].sigma, cfg.vol_bounds.0);
    }

    #[test]
    fn unreachable_quote_is_no_root() {
        // the first piece already implies more default than the 3y quote allows
        let curve = flat_curve();
        let qs = quotes(&[2000.0, 10.0]);
        let err = bootstrap_volatility(&qs, &curve, 0.5, 0.5, None, &CalibrationConfig::default()).unwrap_err();
        assert_eq!(err.kind(), "NoRootInBracket");
    }

    #[test]
    fn excursion_is_recovery() {
        assert_eq!(excursion_protection_h(0.4).unwrap(), 0.4);
        assert_eq!(excursion_protection_h(0.15).unwrap(), 0.15);
        assert_eq!(excursion_protection_h(0.5).unwrap(), 0.5);
        assert!(excursion_protection_h(0.0).is_err());
    }

    #[test]
    fn psi_inversion_round_trip() {
        let h = solve_h_for_survival(psi(0.77, 0.5, 1.0, 0.2), 0.5, 1.0, 0.2).unwrap();
        assert!((h - 0.77).abs() < 1e-10);
        assert_eq!(solve_h_for_survival(1.5, 0.5, 1.0, 0.2).unwrap_err().kind(), "TargetOutOfRange");
    }

    #[test]
    fn consistent_guess_stops_at_once() {
        let curve = flat_curve();
        let qs = quotes(&[150.0]);
        let cfg = CalibrationConfig::default();
        let r = bootstrap_volatility(&qs, &curve, 0.6, 0.5, None, &cfg).unwrap();
        let sigma = r.vols()[0];
        let (h, iters, _) = iterative_h(&qs, &curve, 0.5, sigma, 0.6, 50, 1e-10, &cfg).unwrap();
        assert_eq!(iters, 1);
        assert_eq!(h, 0.6);
    }

    #[test]
    fn iterative_converges_to_equity_vol() {
        let curve = flat_curve();
        let qs = quotes(&[300.0, 280.0]);
        let cfg = CalibrationConfig::default();
        let (h, _, trace) = iterative_h(&qs, &curve, 0.5, 0.3, 0.5, 100, 1e-12, &cfg).unwrap();
        let r = bootstrap_volatility(&qs, &curve, h, 0.5, None, &cfg).unwrap();
        assert!((r.vols()[0] - 0.3).abs() < 1e-5, "{trace:?}");
    }

    #[test]
    fn covenant_arithmetic() {
        let vol = PiecewiseConstant::constant(0.2);
        let p = FnCurve(|_t: f64| 0.75);
        let c = check_debt_covenant(0.5, 0.5, &vol, 0.0, 1.0, &p, 10.0).unwrap();
        assert!(c.satisfied && (c.margin - 0.25).abs() < 1e-15 && c.round_bracket_positive);
        assert!(!check_debt_covenant(0.9, 0.5, &vol, 0.0, 1.0, &p, 10.0).unwrap().satisfied);
        let edge = check_debt_covenant(0.75, 0.5, &vol, 0.0, 1.0, &p, 10.0).unwrap();
        assert!(edge.satisfied && edge.margin == 0.0);
        let neg = check_debt_covenant(0.5, -2.0, &vol, 0.0, 1.0, &p, 10.0).unwrap();
        assert!(!neg.round_bracket_positive);
    }
}
