//! Piecewise-constant functions of time, used for volatilities, short rates
//! and payout ratios.

use crate::error::{Error, Result};
use crate::real::Real;

/// `f(t) = values[i]` on `(ends[i-1], ends[i]]` with `ends[-1] = 0`; the last
/// value extends flat to infinity. A time exactly at a node belongs to the
/// earlier piece.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseConstant<T> {
    ends: Vec<T>,
    values: Vec<T>,
    // cumulative integrals of f and f^2 up to each end
    cum: Vec<T>,
    cum_sq: Vec<T>,
}

impl<T: Real> PiecewiseConstant<T> {
    pub fn new(nodes: &[(T, T)]) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidInput("piecewise function needs at least one node".into()));
        }
        let mut prev = T::zero();
        let mut ends = Vec::with_capacity(nodes.len());
        let mut values = Vec::with_capacity(nodes.len());
        let mut cum = Vec::with_capacity(nodes.len());
        let mut cum_sq = Vec::with_capacity(nodes.len());
        let (mut acc, mut acc_sq) = (T::zero(), T::zero());
        for (i, &(t, v)) in nodes.iter().enumerate() {
            if !(t > prev) || !t.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "node times must be positive and strictly increasing (node {i}: {t})"
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite value at node {i}")));
            }
            acc = acc + v * (t - prev);
            acc_sq = acc_sq + v * v * (t - prev);
            ends.push(t);
            values.push(v);
            cum.push(acc);
            cum_sq.push(acc_sq);
            prev = t;
        }
        Ok(PiecewiseConstant { ends, values, cum, cum_sq })
    }

    /// Constant function.
    pub fn constant(v: T) -> Self {
        Self::new(&[(T::one(), v)]).expect("valid constant node")
    }

    pub fn ends(&self) -> &[T] {
        &self.ends
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn nodes(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.ends.iter().copied().zip(self.values.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.ends.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ends.is_empty()
    }

    /// Index of the piece containing `t` (earlier piece at nodes).
    #[inline]
    pub fn piece_index(&self, t: T) -> usize {
        let idx = self.ends.partition_point(|&e| e < t);
        idx.min(self.ends.len() - 1)
    }

    #[inline]
    pub fn value_at(&self, t: T) -> T {
        self.values[self.piece_index(t)]
    }

    fn integral_impl(&self, t: T, cum: &[T], sq: bool) -> T {
        if t <= T::zero() {
            return T::zero();
        }
        let i = self.ends.partition_point(|&e| e < t);
        if i >= self.ends.len() {
            let last = self.ends.len() - 1;
            let v = self.values[last];
            let v = if sq { v * v } else { v };
            return cum[last] + v * (t - self.ends[last]);
        }
        let (base, start) = if i == 0 {
            (T::zero(), T::zero())
        } else {
            (cum[i - 1], self.ends[i - 1])
        };
        let v = self.values[i];
        let v = if sq { v * v } else { v };
        base + v * (t - start)
    }

    /// `∫_0^t f(s) ds`, exact.
    #[inline]
    pub fn integral(&self, t: T) -> T {
        self.integral_impl(t, &self.cum, false)
    }

    /// `∫_0^t f(s)^2 ds`, exact.
    #[inline]
    pub fn integral_sq(&self, t: T) -> T {
        self.integral_impl(t, &self.cum_sq, true)
    }

    /// Node times strictly inside `(0, horizon)`.
    pub fn breakpoints_before(&self, horizon: T) -> impl Iterator<Item = T> + '_ {
        self.ends.iter().copied().filter(move |&e| e < horizon)
    }
}
