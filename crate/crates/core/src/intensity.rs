//! Deterministic default intensity with piecewise-linear `λ(t)`.

use crate::cds::{cds_legs, CdsConvention};
use crate::error::{Error, Result};
use crate::market_data::{CdsQuoteSet, DiscountCurve};
use crate::real::Real;
use crate::solver::{brent, SolverOptions};
use crate::survival::SurvivalCurve;

/// `λ(t)` linear between nodes, flat after the last node. The first node is
/// at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityCurve<T> {
    times: Vec<T>,
    lambdas: Vec<T>,
    cum: Vec<T>,
}

impl<T: Real> IntensityCurve<T> {
    /// Nodes `(t, λ)`; the first must be at `t = 0`. Negative `λ` is accepted
    /// here (the bootstrap uses it to detect infeasible quotes).
    pub fn new(nodes: &[(T, T)]) -> Result<Self> {
        match nodes.first() {
            Some(&(t0, _)) if t0 == T::zero() => {}
            _ => return Err(Error::InvalidInput("intensity curve must start with a node at t=0".into())),
        }
        let mut cum = vec![T::zero()];
        for w in nodes.windows(2) {
            let (t0, l0) = w[0];
            let (t1, l1) = w[1];
            if !(t1 > t0) {
                return Err(Error::InvalidInput("intensity node times must increase".into()));
            }
            let prev = *cum.last().expect("seeded");
            cum.push(prev + T::lit(0.5) * (l0 + l1) * (t1 - t0));
        }
        Ok(IntensityCurve {
            times: nodes.iter().map(|n| n.0).collect(),
            lambdas: nodes.iter().map(|n| n.1).collect(),
            cum,
        })
    }

    pub fn constant(lambda: T) -> Self {
        Self::new(&[(T::zero(), lambda)]).expect("single node at zero")
    }

    pub fn nodes(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.times.iter().copied().zip(self.lambdas.iter().copied())
    }

    pub fn lambda_at(&self, t: T) -> T {
        let n = self.times.len();
        let i = self.times.partition_point(|&x| x <= t);
        if i >= n {
            return self.lambdas[n - 1];
        }
        if i == 0 {
            return self.lambdas[0];
        }
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let w = (t - t0) / (t1 - t0);
        self.lambdas[i - 1] + w * (self.lambdas[i] - self.lambdas[i - 1])
    }

    /// `∫₀ᵗ λ(s) ds`, exact trapezoids on the linear pieces.
    pub fn integrated(&self, t: T) -> T {
        if t <= T::zero() {
            return T::zero();
        }
        let n = self.times.len();
        let i = self.times.partition_point(|&x| x <= t);
        if i >= n {
            return self.cum[n - 1] + self.lambdas[n - 1] * (t - self.times[n - 1]);
        }
        let t0 = self.times[i - 1];
        let l0 = self.lambdas[i - 1];
        let lt = self.lambda_at(t);
        self.cum[i - 1] + T::lit(0.5) * (l0 + lt) * (t - t0)
    }

    /// `Q(τ > t) = exp(−∫₀ᵗ λ)`.
    #[inline]
    pub fn survival_from_intensity(&self, t: T) -> T {
        (-self.integrated(t)).exp()
    }
}

impl<T: Real> SurvivalCurve<T> for IntensityCurve<T> {
    #[inline]
    fn survival(&self, t: T) -> T {
        self.survival_from_intensity(t)
    }
}

/// Bootstraps node intensities at each quote maturity so that every running
/// CDS reprices to zero, earlier nodes held fixed. The node at `t = 0`
/// repeats the first solved value.
///
/// Fails with [`Error::NegativeIntensity`] when a quote can only be matched
/// by a negative node value (or cannot be matched at all in `[-1, 10]`).
pub fn calibrate_intensity(quotes: &CdsQuoteSet, curve: &DiscountCurve<f64>) -> Result<IntensityCurve<f64>> {
    let maturities = quotes.maturities();
    let opts = SolverOptions { f_tol: 1e-12, x_tol: 1e-15, max_iter: 200 };
    let mut nodes: Vec<(f64, f64)> = Vec::with_capacity(maturities.len() + 1);
    for (k, q) in quotes.quotes.iter().enumerate() {
        let schedule = quotes.schedule(k);
        let t_k = maturities[k];
        let trial = |x: f64| -> f64 {
            let mut trial_nodes = if k == 0 { vec![(0.0, x)] } else { nodes.clone() };
            trial_nodes.push((t_k, x));
            let c = IntensityCurve::new(&trial_nodes).expect("increasing nodes");
            cds_legs(&schedule, CdsConvention::Running, &c, curve).value(q.spread(), q.lgd())
        };
        let fail = Error::NegativeIntensity { maturity: t_k, index: k };
        let root = brent(trial, -1.0, 10.0, opts).map_err(|_| fail.clone())?;
        if root.x < -1e-12 {
            return Err(fail);
        }
        let lambda = root.x.max(0.0);
        if k == 0 {
            nodes.push((0.0, lambda));
        }
        nodes.push((t_k, lambda));
    }
    IntensityCurve::new(&nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_intensity_survives() {
        let c = IntensityCurve::constant(0.0_f64);
        for i in 0..10 {
            assert_eq!(c.survival_from_intensity(i as f64), 1.0);
        }
    }

    #[test]
    fn constant_hazard_closed_form() {
        let c = IntensityCurve::constant(0.01_f64);
        assert_relative_eq!(c.survival_from_intensity(2.0), (-0.02_f64).exp(), max_relative = 1e-15);
    }

    #[test]
    fn trapezoid_integral_with_flat_tail() {
        let c = IntensityCurve::new(&[(0.0, 0.01), (1.0, 0.01), (3.0, 0.03)]).unwrap();
        assert_relative_eq!(c.integrated(1.0), 0.01, max_relative = 1e-15);
        assert_relative_eq!(c.integrated(2.0), 0.01 + 0.5 * (0.01 + 0.02), max_relative = 1e-14);
        assert_relative_eq!(c.integrated(3.0), 0.01 + 0.04, max_relative = 1e-14);
        assert_relative_eq!(c.integrated(5.0), 0.05 + 0.06, max_relative = 1e-14);
        assert_relative_eq!(c.lambda_at(2.0), 0.02, max_relative = 1e-14);
    }

    #[test]
    fn needs_node_at_zero() {
        assert!(IntensityCurve::new(&[(1.0_f64, 0.01)]).is_err());
    }
}
