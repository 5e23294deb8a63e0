//! Closed-form analytics of the analytically tractable first-passage model.
//!
//! The firm value `V` follows a GBM with piecewise-constant volatility and
//! default happens when `V` first touches the curved safety barrier `Ĥ(t)`.
//! With the barrier shape fixed by `β`, survival probabilities only depend on
//! the normalized barrier `h = H / V₀`, `β` and the cumulative variance
//! `Σ(T) = ∫₀ᵀ σ²(s) ds`.

use crate::error::{Error, Result};
use crate::market_data::DiscountCurve;
use crate::normal::norm_cdf;
use crate::piecewise::PiecewiseConstant;
use crate::real::Real;
use crate::survival::SurvivalCurve;

/// Normalized barrier, barrier shape and piecewise-constant firm volatility.
#[derive(Debug, Clone, PartialEq)]
pub struct At1pParams<T> {
    h: T,
    beta: T,
    vol: PiecewiseConstant<T>,
}

impl<T: Real> At1pParams<T> {
    /// `vol_nodes` are `(t_end, sigma)` pairs; the last sigma extends flat.
    pub fn new(h: T, beta: T, vol_nodes: &[(T, T)]) -> Result<Self> {
        Self::from_vol_curve(h, beta, PiecewiseConstant::new(vol_nodes)?)
    }

    pub fn from_vol_curve(h: T, beta: T, vol: PiecewiseConstant<T>) -> Result<Self> {
        if !(h > T::zero() && h < T::one()) {
            return Err(Error::InvalidInput(format!("normalized barrier h={h} outside (0, 1)")));
        }
        if !beta.is_finite() {
            return Err(Error::InvalidInput("beta must be finite".into()));
        }
        if vol.values().iter().any(|&s| s < T::zero()) {
            return Err(Error::InvalidInput("volatility must be non-negative".into()));
        }
        Ok(At1pParams { h, beta, vol })
    }

    /// Constant volatility over all maturities.
    pub fn flat(h: T, beta: T, sigma: T) -> Result<Self> {
        Self::from_vol_curve(h, beta, PiecewiseConstant::constant(sigma))
    }

    pub fn h(&self) -> T {
        self.h
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn vol(&self) -> &PiecewiseConstant<T> {
        &self.vol
    }

    /// `Σ(t) = ∫₀ᵗ σ²(s) ds`.
    #[inline]
    pub fn cumulative_variance(&self, t: T) -> T {
        self.vol.integral_sq(t)
    }

    /// `Q(τ > t)`.
    #[inline]
    pub fn survival_probability(&self, t: T) -> T {
        if t <= T::zero() {
            return T::one();
        }
        survival_from_variance(self.h, self.beta, self.cumulative_variance(t))
    }

    /// Survival with absolute firm value and barrier; only their ratio matters.
    pub fn survival_with_levels(&self, v0: T, barrier: T, t: T) -> T {
        if t <= T::zero() {
            return T::one();
        }
        survival_from_variance(barrier / v0, self.beta, self.cumulative_variance(t))
    }

    /// Default probability mass `Q(t_{k-1} < τ <= t_k)` for each cell of a
    /// sorted grid starting at 0. Increments telescope to `1 - Q(τ > t_N)`.
    pub fn default_leg_density_grid(&self, grid: &[T]) -> Result<Vec<T>> {
        if grid.first().map_or(true, |&t| t != T::zero()) {
            return Err(Error::InvalidInput("grid must start at 0".into()));
        }
        if grid.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidInput("grid must be sorted".into()));
        }
        let q: Vec<T> = grid.iter().map(|&t| self.survival_probability(t)).collect();
        Ok(q.windows(2).map(|w| w[0] - w[1]).collect())
    }
}

impl<T: Real> SurvivalCurve<T> for At1pParams<T> {
    #[inline]
    fn survival(&self, t: T) -> T {
        self.survival_probability(t)
    }
}

/// Survival probability for normalized barrier `h`, shape `beta` and
/// cumulative variance `var`:
/// `Φ((ln(1/h) + βΣ)/√Σ) − h^{2β} Φ((ln h + βΣ)/√Σ)`. Returns 1 when `Σ = 0`.
#[inline]
pub fn survival_from_variance<T: Real>(h: T, beta: T, var: T) -> T {
    if var <= T::zero() {
        return T::one();
    }
    let sd = var.sqrt();
    let ln_h = h.ln();
    let drift = beta * var;
    let q = norm_cdf((drift - ln_h) / sd) - (T::lit(2.0) * beta * ln_h).exp() * norm_cdf((ln_h + drift) / sd);
    q.max(T::zero()).min(T::one())
}

/// One-period survival `ψ(h; β, T, σ)` under a constant volatility.
pub fn psi<T: Real>(h: T, beta: T, t: T, sigma: T) -> T {
    if t <= T::zero() {
        return T::one();
    }
    survival_from_variance(h, beta, sigma * sigma * t)
}

/// Mean and one-standard-deviation band of the firm value at a horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceBand<T> {
    pub expected: T,
    pub lower: T,
    pub upper: T,
}

/// Risk-neutral firm-value dynamics `dV = V (r − q) dt + V σ dW`.
///
/// `payout` is the true payout ratio `q` for barrier and band computations,
/// and is read as the free `q*` by [`FirmValueDynamics::dob_price`] and
/// [`FirmValueDynamics::optimal_beta`].
#[derive(Debug, Clone, PartialEq)]
pub struct FirmValueDynamics<T> {
    pub rate: PiecewiseConstant<T>,
    pub payout: PiecewiseConstant<T>,
    pub vol: PiecewiseConstant<T>,
    pub beta: T,
    pub v0: T,
}

impl<T: Real> FirmValueDynamics<T> {
    /// Short rate from the curve forwards, zero payout, normalized `V₀ = 1`.
    pub fn from_curve(curve: &DiscountCurve<T>, params: &At1pParams<T>) -> Self {
        FirmValueDynamics {
            rate: curve.forward_curve(),
            payout: PiecewiseConstant::constant(T::zero()),
            vol: params.vol.clone(),
            beta: params.beta,
            v0: T::one(),
        }
    }

    pub fn with_payout(mut self, payout: PiecewiseConstant<T>) -> Self {
        self.payout = payout;
        self
    }

    #[inline]
    fn variance(&self, t: T) -> T {
        self.vol.integral_sq(t)
    }

    /// `Ĥ(t) = H exp(−∫₀ᵗ (q − r + (1+2β)σ²/2) ds)`.
    pub fn true_barrier(&self, barrier: T, t: T) -> T {
        let k = (T::one() + T::lit(2.0) * self.beta) * T::lit(0.5);
        let exponent = self.payout.integral(t) - self.rate.integral(t) + k * self.variance(t);
        barrier * (-exponent).exp()
    }

    /// Same barrier written as `(H/V₀) E[V_t] exp(−(1+2β)/2 Σ(t))`.
    pub fn true_barrier_explicit(&self, barrier: T, t: T) -> T {
        let k = (T::one() + T::lit(2.0) * self.beta) * T::lit(0.5);
        barrier / self.v0 * self.expected_value(t) * (-k * self.variance(t)).exp()
    }

    /// `E[V_t] = V₀ exp(∫₀ᵗ (r − q) ds)`.
    pub fn expected_value(&self, t: T) -> T {
        self.v0 * (self.rate.integral(t) - self.payout.integral(t)).exp()
    }

    /// First point of `0, step, 2 step, ...` up to `horizon` where the lower
    /// band reaches the true barrier.
    pub fn band_hit_time(&self, barrier: T, horizon: T, step: T) -> Option<T> {
        let n = (horizon / step).ceil().to_usize().unwrap_or(0);
        (1..=n)
            .map(|k| (step * T::lit(k as f64)).min(horizon))
            .find(|&t| self.confidence_band(t).lower <= self.true_barrier(barrier, t))
    }

    /// `E[V_t]` and `exp(E[ln V_t] ∓ Std[ln V_t])`.
    pub fn confidence_band(&self, t: T) -> ConfidenceBand<T> {
        let var = self.variance(t);
        let mean_log = self.v0.ln() + self.rate.integral(t) - self.payout.integral(t) - T::lit(0.5) * var;
        let sd = var.max(T::zero()).sqrt();
        ConfidenceBand {
            expected: self.expected_value(t),
            lower: (mean_log - sd).exp(),
            upper: (mean_log + sd).exp(),
        }
    }

    /// Down-and-out bond price against the curved barrier
    /// `H*(t) = H exp(−∫ₜᵀ (r − q* − (1+2β)σ²/2) ds)`, with `payout` as `q*`.
    pub fn dob_price(&self, barrier: T, maturity: T) -> Result<T> {
        let two = T::lit(2.0);
        let k = (T::one() + two * self.beta) * T::lit(0.5);
        let int_r = self.rate.integral(maturity);
        let int_q = self.payout.integral(maturity);
        let var = self.variance(maturity);
        let h_star0 = barrier * (-(int_r - int_q - k * var)).exp();
        if !(self.v0 > h_star0) {
            return Err(Error::Domain(format!(
                "firm value {} not above initial barrier {h_star0}",
                self.v0
            )));
        }
        let discount = (-int_r).exp();
        if var <= T::zero() {
            return Ok(discount);
        }
        let int_v = int_r - int_q - T::lit(0.5) * var;
        let sd = var.sqrt();
        let d1 = ((self.v0 / barrier).ln() + int_v) / sd;
        let d2 = ((h_star0 * h_star0 / (self.v0 * barrier)).ln() + int_v) / sd;
        let reflect = (h_star0 / self.v0).powf(two * self.beta);
        Ok(discount * (norm_cdf(d1) - reflect * norm_cdf(d2)))
    }

    /// `β` keeping the curved barrier as flat as possible over `[0, T]`, with
    /// `payout` as `q*`. Integrals are exact on the piecewise structure.
    pub fn optimal_beta(&self, maturity: T) -> Result<T> {
        if !(maturity > T::zero()) {
            return Err(Error::InvalidInput("optimal_beta needs a positive horizon".into()));
        }
        let half = T::lit(0.5);
        let g = |t: T| self.rate.integral(t) - self.payout.integral(t) - half * self.variance(t);
        let g_end = g(maturity);
        let v_end = self.variance(maturity);
        let a = |t: T| g_end - g(t);
        let b = |t: T| v_end - self.variance(t);

        let mut knots: Vec<T> = vec![T::zero(), maturity];
        knots.extend(self.rate.breakpoints_before(maturity));
        knots.extend(self.payout.breakpoints_before(maturity));
        knots.extend(self.vol.breakpoints_before(maturity));
        knots.sort_by(|x, y| x.partial_cmp(y).expect("finite knots"));
        knots.dedup();

        // A and B are linear on each segment, so Simpson's rule is exact.
        let six = T::lit(6.0);
        let four = T::lit(4.0);
        let (mut num, mut den) = (T::zero(), T::zero());
        for w in knots.windows(2) {
            let (l, r) = (w[0], w[1]);
            let m = half * (l + r);
            let width = r - l;
            let (al, am, ar) = (a(l), a(m), a(r));
            let (bl, bm, br) = (b(l), b(m), b(r));
            num = num + width / six * (al * bl + four * am * bm + ar * br);
            den = den + width / six * (bl * bl + four * bm * bm + br * br);
        }
        if den <= T::zero() {
            return Err(Error::Domain("volatility identically zero on [0, T]".into()));
        }
        Ok(num / den)
    }
}
