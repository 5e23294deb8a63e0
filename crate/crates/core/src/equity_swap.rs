//! Equity return swap with counterparty default risk.
//!
//! We pay the equity performance and dividends of `K` shares of "C" and
//! receive LIBOR plus a spread `X` from counterparty "B". With deterministic
//! rates and dividend yield the price splits into a default-free annuity term
//! and a short call on the residual NPV at the counterparty default time:
//!
//! `price(X) = K S0 X Σ α_i P(0,T_i) − LGD E[1{τ ≤ T_b} (P(0,τ) NPV(τ))⁺]`
//!
//! The firm value of "B" follows the calibrated AT1P dynamics. The equity is
//! only needed at `τ`; its Brownian driver there is `ρ W_B(τ) + √(1−ρ²) W_2(τ)`
//! and `W_2(τ)` is drawn once per defaulting path. `W_B(τ)` is the value that
//! puts the firm exactly on the barrier at the recorded default time.

use rayon::prelude::*;

use crate::at1p_model::At1pParams;
use crate::error::{Error, Result};
use crate::market_data::{Discount, PaymentSchedule};
use crate::monte_carlo::{bridge_crossing_probability, open_uniform, path_rng, std_normal, FirmGrid, McConfig, McEstimate};

#[derive(Debug, Clone, PartialEq)]
pub struct EquitySwapContract {
    pub k_shares: f64,
    pub s0: f64,
    pub maturity: f64,
    /// LIBOR resets per year.
    pub frequency: u32,
    pub spread_x: f64,
    pub recovery: f64,
    /// Continuous dividend yield of the underlying.
    pub dividend_yield: f64,
}

impl Default for EquitySwapContract {
    fn default() -> Self {
        EquitySwapContract {
            k_shares: 1.0,
            s0: 20.0,
            maturity: 5.0,
            frequency: 2,
            spread_x: 0.0,
            recovery: 0.4,
            dividend_yield: 0.008,
        }
    }
}

impl EquitySwapContract {
    pub fn validate(&self) -> Result<()> {
        if !(self.s0 > 0.0 && self.maturity > 0.0 && self.k_shares > 0.0) {
            return Err(Error::InvalidInput("s0, maturity and k_shares must be positive".into()));
        }
        if self.frequency == 0 {
            return Err(Error::InvalidInput("LIBOR frequency must be at least 1".into()));
        }
        // REC = 1 is accepted: it switches the counterparty term off.
        if !(0.0..=1.0).contains(&self.recovery) {
            return Err(Error::InvalidInput(format!("recovery {} outside [0, 1]", self.recovery)));
        }
        if !self.dividend_yield.is_finite() || !self.spread_x.is_finite() {
            return Err(Error::InvalidInput("dividend yield and spread must be finite".into()));
        }
        Ok(())
    }

    pub fn lgd(&self) -> f64 {
        1.0 - self.recovery
    }

    pub fn with_spread(&self, spread_x: f64) -> Self {
        EquitySwapContract { spread_x, ..self.clone() }
    }

    /// `T_i = i / frequency`.
    pub fn schedule(&self) -> Result<PaymentSchedule<f64>> {
        PaymentSchedule::regular(self.maturity, self.frequency)
    }

    /// `K S0 Σ α_i P(0,T_i)`: value of one unit of spread without default.
    pub fn spread_annuity<D: Discount<f64>>(&self, curve: &D) -> Result<f64> {
        let s = self.schedule()?;
        let sum: f64 = (1..=s.len()).map(|i| s.accrual(i) * curve.discount(s.date(i))).sum();
        Ok(self.k_shares * self.s0 * sum)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointDynamics {
    pub counterparty: At1pParams<f64>,
    pub equity_vol: f64,
    pub rho: f64,
}

impl JointDynamics {
    pub fn validate(&self) -> Result<()> {
        if !(-1.0..=1.0).contains(&self.rho) {
            return Err(Error::InvalidInput(format!("correlation {} outside [-1, 1]", self.rho)));
        }
        if !(self.equity_vol >= 0.0 && self.equity_vol.is_finite()) {
            return Err(Error::InvalidInput("equity volatility must be non-negative".into()));
        }
        Ok(())
    }
}

/// `β(τ)`: index of the first `T_i` strictly after `τ`, so `τ ∈ [T_{β−1}, T_β)`.
fn first_date_after(schedule: &PaymentSchedule<f64>, tau: f64) -> usize {
    schedule.times().partition_point(|&t| t <= tau) + 1
}

/// `P(0,τ) NPV(τ) = a X + b` with `a = K S0 Σ_{i≥β(τ)} P(0,T_i) α_i` and
/// `b = K S0 P(0,T_{β(τ)−1}) − K P(0,τ) S_τ`.
fn npv_coefficients<D: Discount<f64>>(
    tau: f64,
    s_tau: f64,
    contract: &EquitySwapContract,
    schedule: &PaymentSchedule<f64>,
    curve: &D,
) -> (f64, f64) {
    let ks0 = contract.k_shares * contract.s0;
    let beta = first_date_after(schedule, tau);
    let a: f64 = (beta..=schedule.len())
        .map(|i| curve.discount(schedule.date(i)) * schedule.accrual(i))
        .sum::<f64>()
        * ks0;
    let start = schedule.date((beta - 1).min(schedule.len()));
    let b = ks0 * curve.discount(start) - contract.k_shares * curve.discount(tau) * s_tau;
    (a, b)
}

/// Discounted NPV of the remaining swap at the counterparty default time.
pub fn npv_at_default_discounted<D: Discount<f64>>(
    tau: f64,
    s_tau: f64,
    contract: &EquitySwapContract,
    curve: &D,
) -> Result<f64> {
    contract.validate()?;
    if !(tau > 0.0 && tau <= contract.maturity) {
        return Err(Error::InvalidInput(format!("default time {tau} outside (0, {}]", contract.maturity)));
    }
    let schedule = contract.schedule()?;
    let (a, b) = npv_coefficients(tau, s_tau, contract, &schedule, curve);
    Ok(a * contract.spread_x + b)
}

/// One simulated counterparty path, reduced to what the pricer needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapPathSample {
    /// `None` when "B" survives past maturity.
    pub default: Option<DefaultState>,
    /// Raw-payoff ingredients; zero unless the simulation ran in raw mode.
    pub raw: RawPath,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefaultState {
    pub tau: f64,
    pub s_tau: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RawPath {
    /// Pathwise PV of dividends paid up to `min(τ, T_b)`.
    pub dividends_pv: f64,
    /// `S_{T_b}` on surviving paths.
    pub s_end: f64,
}

/// Equity swap paths held in memory so every spread is priced on the same
/// scenarios.
#[derive(Debug, Clone)]
pub struct EquitySwapSimulation {
    pub contract: EquitySwapContract,
    pub samples: Vec<SwapPathSample>,
    schedule: PaymentSchedule<f64>,
    /// `1 − Q(τ > T_b)` from the closed form.
    default_probability: f64,
    annuity: f64,
    /// Per-path `(a, b)` of the discounted NPV, zero for survivors.
    npv_coef: Vec<Option<(f64, f64)>>,
    discounts: Vec<f64>,
    raw: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquitySwapPrice {
    pub price: f64,
    /// Control-variate standard error (`None` for a single path).
    pub std_err: Option<f64>,
    /// Standard error of the plain estimator.
    pub std_err_plain: Option<f64>,
    pub default_free: f64,
    /// `−LGD E[...]` estimate after the control variate.
    pub option_leg: f64,
    pub cv_coefficient: f64,
    /// Sample correlation between the option-leg payoff and the default indicator.
    pub cv_correlation: f64,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

impl EquitySwapSimulation {
    /// Runs the joint simulation of "B"'s firm value and the equity of "C".
    /// With `raw` the equity is stepped along the whole path as well, to
    /// evaluate the undecomposed payoff.
    pub fn run<D: Discount<f64> + Sync>(
        contract: &EquitySwapContract,
        dynamics: &JointDynamics,
        curve: &D,
        cfg: &McConfig,
        raw: bool,
    ) -> Result<Self> {
        contract.validate()?;
        dynamics.validate()?;
        let cfg = McConfig { horizon: contract.maturity, ..cfg.clone() };
        cfg.validate()?;
        let schedule = contract.schedule()?;
        let grid = FirmGrid::new(&dynamics.counterparty, contract.maturity, cfg.step, schedule.times());
        let ln_df: Vec<f64> = grid.times.iter().map(|&t| curve.discount(t).ln()).collect();
        let steps = grid.steps();
        let dt: Vec<f64> = grid.times.windows(2).map(|w| w[1] - w[0]).collect();
        let sqrt_dt: Vec<f64> = dt.iter().map(|d| d.sqrt()).collect();

        let (rho, sig_c, q, s0) = (dynamics.rho, dynamics.equity_vol, contract.dividend_yield, contract.s0);
        let rho_perp = (1.0 - rho * rho).max(0.0).sqrt();
        let degenerate = rho_perp == 0.0;
        let ln_s_at = |k_ln_df: f64, t: f64, w_c: f64| -> f64 {
            // ln S_t = ln S0 + ∫r − (q + σ_C²/2) t + σ_C W_C(t)
            s0.ln() - k_ln_df - (q + 0.5 * sig_c * sig_c) * t + sig_c * w_c
        };
        let log_h = grid.log_h;
        let seed = cfg.seed;
        let bridge = cfg.bridge;

        let simulate = |path: usize| -> SwapPathSample {
            let mut rng = path_rng(seed, path);
            let mut x = 0.0;
            let mut w_b = 0.0;
            // raw mode keeps the equity driver and a dividend integral
            let mut w_2 = 0.0;
            let mut s_prev = s0;
            let mut div_pv = 0.0;
            for k in 0..steps {
                let z = std_normal(&mut rng);
                let w_b_next = w_b + sqrt_dt[k] * z;
                let next = x + grid.drift[k] + grid.sd[k] * z;
                let mut s_next = 0.0;
                let mut w_2_next = w_2;
                if raw {
                    if !degenerate {
                        w_2_next = w_2 + sqrt_dt[k] * std_normal(&mut rng);
                    }
                    let w_c = rho * w_b_next + rho_perp * w_2_next;
                    s_next = ln_s_at(ln_df[k + 1], grid.times[k + 1], w_c).exp();
                }
                let mut hit: Option<f64> = None;
                if next <= log_h {
                    hit = Some(1.0);
                } else if bridge {
                    let p = bridge_crossing_probability(x, next, log_h, grid.var[k]);
                    if p > 0.0 && open_uniform(&mut rng) < p {
                        hit = Some(0.5);
                    }
                }
                if let Some(frac) = hit {
                    let tau = if frac == 1.0 {
                        grid.times[k + 1]
                    } else {
                        0.5 * (grid.times[k] + grid.times[k + 1])
                    };
                    // the firm value sits on the barrier at τ, which fixes W_B(τ)
                    let sigma_k = grid.sd[k] / sqrt_dt[k];
                    let elapsed = (tau - grid.times[k]) / dt[k];
                    let w_b_tau = w_b + (log_h - x - grid.drift[k] * elapsed) / sigma_k;
                    let ln_df_tau = if frac == 1.0 { ln_df[k + 1] } else { curve.discount(tau).ln() };
                    let w_2_tau = if degenerate {
                        0.0
                    } else if raw {
                        if frac == 1.0 { w_2_next } else { 0.5 * (w_2 + w_2_next) }
                    } else {
                        tau.sqrt() * std_normal(&mut rng)
                    };
                    let s_tau = ln_s_at(ln_df_tau, tau, rho * w_b_tau + rho_perp * w_2_tau).exp();
                    if raw {
                        let df_prev = ln_df[k].exp();
                        let df_tau = ln_df_tau.exp();
                        div_pv += 0.5 * q * (tau - grid.times[k]) * (df_prev * s_prev + df_tau * s_tau);
                    }
                    return SwapPathSample {
                        default: Some(DefaultState { tau, s_tau }),
                        raw: RawPath { dividends_pv: div_pv, s_end: 0.0 },
                    };
                }
                if raw {
                    let df_prev = ln_df[k].exp();
                    let df_next = ln_df[k + 1].exp();
                    div_pv += 0.5 * q * dt[k] * (df_prev * s_prev + df_next * s_next);
                    s_prev = s_next;
                    w_2 = w_2_next;
                }
                x = next;
                w_b = w_b_next;
            }
            SwapPathSample { default: None, raw: RawPath { dividends_pv: div_pv, s_end: s_prev } }
        };

        let mut builder = rayon::ThreadPoolBuilder::new();
        if cfg.workers > 0 {
            builder = builder.num_threads(cfg.workers);
        }
        let pool = builder.build().map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
        let samples: Vec<SwapPathSample> = pool.install(|| (0..cfg.n_paths).into_par_iter().map(simulate).collect());

        let npv_coef = samples
            .iter()
            .map(|s| s.default.map(|d| npv_coefficients(d.tau, d.s_tau, contract, &schedule, curve)))
            .collect();
        let discounts = (0..=schedule.len()).map(|i| curve.discount(schedule.date(i))).collect();
        Ok(EquitySwapSimulation {
            contract: contract.clone(),
            default_probability: 1.0 - dynamics.counterparty.survival_probability(contract.maturity),
            annuity: contract.spread_annuity(curve)?,
            samples,
            schedule,
            npv_coef,
            discounts,
            raw,
        })
    }

    pub fn n_paths(&self) -> usize {
        self.samples.len()
    }

    pub fn spread_annuity(&self) -> f64 {
        self.annuity
    }

    /// Option-leg payoff `−LGD (a X + b)⁺` per path.
    fn option_payoffs(&self, x: f64) -> Vec<f64> {
        let lgd = self.contract.lgd();
        self.npv_coef
            .iter()
            .map(|c| match c {
                Some((a, b)) => -lgd * (a * x + b).max(0.0),
                None => 0.0,
            })
            .collect()
    }

    fn indicators(&self) -> Vec<f64> {
        self.samples.iter().map(|s| if s.default.is_some() { 1.0 } else { 0.0 }).collect()
    }

    /// Price at spread `x` with the default indicator as control variate.
    pub fn price(&self, x: f64) -> EquitySwapPrice {
        let y = self.option_payoffs(x);
        let ind = self.indicators();
        let n = y.len() as f64;
        let my = mean(&y);
        let mi = mean(&ind);
        let (mut syy, mut sii, mut syi) = (0.0, 0.0, 0.0);
        for (a, b) in y.iter().zip(&ind) {
            syy += (a - my) * (a - my);
            sii += (b - mi) * (b - mi);
            syi += (a - my) * (b - mi);
        }
        let mut c = if sii > 0.0 { -syi / sii } else { 0.0 };
        // residual sum of squares after the control: syy + 2c syi + c² sii
        let mut ss_cv = syy + 2.0 * c * syi + c * c * sii;
        if !(ss_cv <= syy) {
            c = 0.0;
            ss_cv = syy;
        }
        let option_leg = my + c * (mi - self.default_probability);
        let se = |ss: f64| if n > 1.0 { Some((ss.max(0.0) / (n - 1.0)).sqrt() / n.sqrt()) } else { None };
        let cv_correlation = if syy > 0.0 && sii > 0.0 { syi / (syy * sii).sqrt() } else { 0.0 };
        let default_free = self.annuity * x;
        EquitySwapPrice {
            price: default_free + option_leg,
            std_err: se(ss_cv),
            std_err_plain: se(syy),
            default_free,
            option_leg,
            cv_coefficient: c,
            cv_correlation,
        }
    }

    /// Spread making the price vanish, by secant iteration on the stored
    /// paths. Stops once `|price| < 0.05 bp · K S0`.
    pub fn fair_spread(&self) -> Result<f64> {
        let tol = 0.05e-4 * self.contract.k_shares * self.contract.s0;
        let mut x0 = 0.0;
        let mut p0 = self.price(x0).price;
        if p0.abs() < tol {
            return Ok(x0);
        }
        let mut x1 = if self.annuity > 0.0 { -p0 / self.annuity } else { 1e-3 };
        if x1 == x0 {
            x1 = 1e-4;
        }
        let mut p1 = self.price(x1).price;
        for _ in 0..50 {
            if p1.abs() < tol {
                return Ok(x1);
            }
            let slope = (p1 - p0) / (x1 - x0);
            if !(slope.is_finite() && slope != 0.0) {
                break;
            }
            let x2 = x1 - p1 / slope;
            x0 = x1;
            p0 = p1;
            x1 = x2;
            p1 = self.price(x1).price;
        }
        if p1.abs() < tol {
            return Ok(x1);
        }
        Err(Error::NoConvergence { iterations: 50, trace: format!("last spread {x1}, price {p1}") })
    }

    /// Plain Monte Carlo mean and standard error of the undecomposed payoff
    /// (dividends, LIBOR leg, final exchange, close-out at default). Needs a
    /// simulation run in raw mode.
    pub fn raw_payoff(&self, x: f64) -> Result<(f64, Option<f64>)> {
        let c = &self.contract;
        let (k, ks0) = (c.k_shares, c.k_shares * c.s0);
        let d = &self.discounts;
        let b = self.schedule.len();
        // Σ_{i=1}^{m} P(0,T_i) α_i (L_i + X) = 1 − P(0,T_m) + X Σ P α
        let coupons = |m: usize| -> f64 {
            let fixed: f64 = (1..=m).map(|i| d[i] * self.schedule.accrual(i)).sum();
            ks0 * (d[0] - d[m] + x * fixed)
        };
        let all = coupons(b);
        if !self.raw {
            return Err(Error::InvalidInput("raw payoff needs a raw-mode simulation".into()));
        }
        let mut vals = Vec::with_capacity(self.samples.len());
        for (s, coef) in self.samples.iter().zip(&self.npv_coef) {
            let v = match (s.default, coef) {
                (None, _) => -k * s.raw.dividends_pv + all + d[b] * (ks0 - k * s.raw.s_end),
                (Some(def), Some((a, bb))) => {
                    let beta = first_date_after(&self.schedule, def.tau);
                    let npv = a * x + bb;
                    -k * s.raw.dividends_pv + coupons(beta - 1) + c.recovery * npv.max(0.0) - (-npv).max(0.0)
                }
                (Some(_), None) => unreachable!("defaulted paths carry NPV coefficients"),
            };
            vals.push(v);
        }
        let e = McEstimate::from_samples(&vals);
        Ok((e.mean, e.std_err))
    }
}

/// Prices one contract (its `spread_x`) on a fresh simulation.
pub fn price_equity_swap<D: Discount<f64> + Sync>(
    contract: &EquitySwapContract,
    dynamics: &JointDynamics,
    curve: &D,
    cfg: &McConfig,
) -> Result<EquitySwapPrice> {
    Ok(EquitySwapSimulation::run(contract, dynamics, curve, cfg, false)?.price(contract.spread_x))
}

pub fn fair_equity_swap_spread<D: Discount<f64> + Sync>(
    contract: &EquitySwapContract,
    dynamics: &JointDynamics,
    curve: &D,
    cfg: &McConfig,
) -> Result<f64> {
    EquitySwapSimulation::run(contract, dynamics, curve, cfg, false)?.fair_spread()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market_data::{forward_libor, FnCurve};

    fn curve() -> FnCurve<impl Fn(f64) -> f64 + Copy + Sync> {
        FnCurve(|t: f64| (-(0.02 * t + 0.002 * t * t)).exp())
    }

    fn dynamics(rho: f64) -> JointDynamics {
        JointDynamics {
            counterparty: At1pParams::new(0.5, 0.5, &[(1.0, 0.25), (3.0, 0.13), (5.0, 0.13)]).unwrap(),
            equity_vol: 0.2,
            rho,
        }
    }

    /// Discounted NPV at default built from its definition: forward LIBOR
    /// coupons, dividends from the yield, forward price of the final
    /// delivery.
    fn npv_oracle<D: Discount<f64>>(tau: f64, s_tau: f64, c: &EquitySwapContract, curve: &D) -> f64 {
        let s = c.schedule().unwrap();
        let p = |t: f64| curve.discount(t);
        let p_tau = |t: f64| p(t) / p(tau);
        let rem = c.maturity - tau;
        let div = s_tau * (1.0 - (-c.dividend_yield * rem).exp());
        let expected_final = s_tau * (-c.dividend_yield * rem).exp() / p_tau(c.maturity);
        let mut coupons = 0.0;
        for i in 1..=s.len() {
            if s.date(i) > tau {
                let l = forward_libor(curve, s.date(i - 1), s.date(i)).unwrap();
                coupons += p_tau(s.date(i)) * s.accrual(i) * (l + c.spread_x);
            }
        }
        let npv = -c.k_shares * div + c.k_shares * c.s0 * coupons
            + (c.k_shares * c.s0 - c.k_shares * expected_final) * p_tau(c.maturity);
        p(tau) * npv
    }

    #[test]
    fn npv_matches_definition() {
        let c = EquitySwapContract { spread_x: 0.0015, k_shares: 3.0, ..Default::default() };
        for &(tau, s) in &[(0.1, 19.0), (0.5, 22.0), (1.3, 18.5), (2.5, 21.0), (4.99, 30.0), (5.0, 12.0)] {
            let got = npv_at_default_discounted(tau, s, &c, &curve()).unwrap();
            let want = npv_oracle(tau, s, &c, &curve());
            assert!((got - want).abs() < 1e-10, "tau {tau}: {got} vs {want}");
        }
    }

    #[test]
    fn npv_trivial_limits() {
        let c = EquitySwapContract::default();
        let v = npv_at_default_discounted(1e-12, c.s0, &c, &curve()).unwrap();
        assert!(v.abs() < 1e-9);
        let tau = 1.7;
        let s_tau = c.s0 * curve().discount(1.5) / curve().discount(tau);
        assert!(npv_at_default_discounted(tau, s_tau, &c, &curve()).unwrap().abs() < 1e-12);
        assert!(npv_at_default_discounted(5.1, 20.0, &c, &curve()).is_err());
    }

    fn small_cfg(n: usize) -> McConfig {
        McConfig { n_paths: n, seed: 11, ..Default::default() }
    }

    #[test]
    fn zero_lgd_is_default_free_annuity() {
        let c = EquitySwapContract { recovery: 1.0, spread_x: 0.001, ..Default::default() };
        let p = price_equity_swap(&c, &dynamics(0.3), &curve(), &small_cfg(2000)).unwrap();
        assert_eq!(p.price, c.spread_annuity(&curve()).unwrap() * 0.001);
        assert_eq!(p.std_err, Some(0.0));
    }

    #[test]
    fn perfectly_anti_correlated_needs_no_spread() {
        let c = EquitySwapContract::default();
        let sim = EquitySwapSimulation::run(&c, &dynamics(-1.0), &curve(), &small_cfg(20_000), false).unwrap();
        let p = sim.price(0.0);
        assert_eq!(p.price, 0.0);
        assert_eq!(p.std_err, Some(0.0));
        assert_eq!(sim.fair_spread().unwrap(), 0.0);
    }

    #[test]
    fn price_increases_with_spread_and_cv_helps() {
        let c = EquitySwapContract::default();
        let sim = EquitySwapSimulation::run(&c, &dynamics(0.5), &curve(), &small_cfg(20_000), false).unwrap();
        let mut last = f64::NEG_INFINITY;
        for i in 0..10 {
            let p = sim.price(i as f64 * 5e-4);
            assert!(p.price > last);
            assert!(p.std_err.unwrap() <= p.std_err_plain.unwrap());
            assert!(p.option_leg <= 0.0 || p.cv_coefficient != 0.0);
            last = p.price;
        }
        let x = sim.fair_spread().unwrap();
        assert!(sim.price(x).price.abs() < 0.05e-4 * 20.0);
    }

    #[test]
    fn raw_payoff_agrees_with_decomposition() {
        let c = EquitySwapContract { spread_x: 0.0015, ..Default::default() };
        let sim = EquitySwapSimulation::run(&c, &dynamics(0.5), &curve(), &small_cfg(40_000), true).unwrap();
        let (raw, raw_se) = sim.raw_payoff(c.spread_x).unwrap();
        let p = sim.price(c.spread_x);
        let se = raw_se.unwrap().hypot(p.std_err.unwrap());
        assert!((raw - p.price).abs() < 3.0 * se, "raw {raw} ± {} vs {}", raw_se.unwrap(), p.price);
        assert!(raw_se.unwrap() > p.std_err.unwrap());
    }

    #[test]
    fn worker_count_does_not_matter() {
        let c = EquitySwapContract::default();
        let a = McConfig { workers: 1, ..small_cfg(3000) };
        let b = McConfig { workers: 3, ..small_cfg(3000) };
        let pa = price_equity_swap(&c, &dynamics(0.2), &curve(), &a).unwrap();
        let pb = price_equity_swap(&c, &dynamics(0.2), &curve(), &b).unwrap();
        assert_eq!(pa, pb);
    }
}
