//! First-passage Monte Carlo for the AT1P firm value.
//!
//! Under the consistency condition the scaled process `V*` has log-drift
//! `βσ²` and faces the flat barrier `h`, so each step is sampled exactly and
//! crossings between grid points are caught with the Brownian-bridge
//! probability. Every path owns a ChaCha stream keyed by `(seed, path)`, so
//! results do not depend on how paths are spread over threads.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::at1p_model::At1pParams;
use crate::error::{Error, Result};
use crate::market_data::{Discount, PaymentSchedule};
use crate::normal::norm_inv_cdf;

/// Five calendar days.
pub const DEFAULT_STEP: f64 = 5.0 / 365.0;

const GRID_EPS: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    pub n_paths: usize,
    pub step: f64,
    pub seed: u64,
    pub horizon: f64,
    /// Worker threads; 0 lets the pool pick.
    pub workers: usize,
    /// Brownian-bridge crossing check between grid points. Off means only
    /// grid-point crossings count.
    pub bridge: bool,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig { n_paths: 250_000, step: DEFAULT_STEP, seed: 20040310, horizon: 10.0, workers: 0, bridge: true }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(Error::InvalidInput("n_paths must be at least 1".into()));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidInput(format!("simulation step {} must be positive", self.step)));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::InvalidInput(format!("horizon {} must be positive", self.horizon)));
        }
        Ok(())
    }
}

/// Sample mean with its standard error (`None` for a single path).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_err: Option<f64>,
}

impl McEstimate {
    /// Sequential summation, so the value depends only on the sample order.
    pub fn from_samples(samples: &[f64]) -> McEstimate {
        let n = samples.len();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let std_err = if n > 1 {
            let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
            Some((ss / (n as f64 - 1.0)).sqrt() / (n as f64).sqrt())
        } else {
            None
        };
        McEstimate { mean, std_err }
    }

    pub fn within_std_errs(&self, target: f64, k: f64) -> bool {
        match self.std_err {
            Some(se) => (self.mean - target).abs() <= k * se,
            None => false,
        }
    }
}

/// Probability that a Brownian bridge between two log levels above `log_h`
/// dips below it during a step with variance `variance_step`.
#[inline]
pub fn bridge_crossing_probability(log_v_start: f64, log_v_end: f64, log_h: f64, variance_step: f64) -> f64 {
    let a = log_v_start - log_h;
    let b = log_v_end - log_h;
    if a <= 0.0 || b <= 0.0 {
        return 1.0;
    }
    if variance_step <= 0.0 {
        return 0.0;
    }
    (-2.0 * a * b / variance_step).exp()
}

/// Uniform on (0, 1) from the top 53 bits, never 0 or 1.
#[inline]
pub(crate) fn open_uniform(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

#[inline]
pub(crate) fn std_normal(rng: &mut ChaCha8Rng) -> f64 {
    norm_inv_cdf(open_uniform(rng))
}

pub(crate) fn path_rng(seed: u64, path: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path as u64);
    rng
}

/// Multiples of `step` up to `horizon` merged with `forced` times inside
/// `(0, horizon]`. Starts at 0 and ends at `horizon`.
pub fn simulation_grid(horizon: f64, step: f64, forced: &[f64]) -> Vec<f64> {
    let mut times: Vec<f64> = Vec::new();
    let n = (horizon / step).floor() as usize;
    times.extend((0..=n).map(|k| k as f64 * step));
    times.push(horizon);
    times.extend(forced.iter().copied().filter(|&t| t > 0.0 && t < horizon));
    times.sort_by(|a, b| a.partial_cmp(b).expect("finite grid times"));
    let mut out: Vec<f64> = Vec::with_capacity(times.len());
    for t in times {
        match out.last_mut() {
            Some(last) if t - *last <= GRID_EPS => {
                // keep exact forced values over rounded multiples
                if forced.contains(&t) || t == horizon {
                    *last = t;
                }
            }
            _ => out.push(t),
        }
    }
    out
}

/// Per-step constants of the scaled firm value on a fixed grid.
#[derive(Debug, Clone)]
pub struct FirmGrid {
    pub times: Vec<f64>,
    pub log_h: f64,
    /// `βσ²Δt` per step.
    pub drift: Vec<f64>,
    /// `σ√Δt` per step.
    pub sd: Vec<f64>,
    /// `σ²Δt` per step.
    pub var: Vec<f64>,
}

impl FirmGrid {
    /// Volatility node times are added to `forced` so every step has a single
    /// volatility.
    pub fn new(params: &At1pParams<f64>, horizon: f64, step: f64, forced: &[f64]) -> FirmGrid {
        let mut all: Vec<f64> = forced.to_vec();
        all.extend(params.vol().ends().iter().copied());
        let times = simulation_grid(horizon, step, &all);
        let beta = params.beta();
        let mut drift = Vec::with_capacity(times.len() - 1);
        let mut sd = Vec::with_capacity(times.len() - 1);
        let mut var = Vec::with_capacity(times.len() - 1);
        for w in times.windows(2) {
            // exact step variance even if a node sits a rounding error off the grid
            let v = params.cumulative_variance(w[1]) - params.cumulative_variance(w[0]);
            drift.push(beta * v);
            sd.push(v.sqrt());
            var.push(v);
        }
        FirmGrid { times, log_h: params.h().ln(), drift, sd, var }
    }

    pub fn steps(&self) -> usize {
        self.drift.len()
    }

    /// Default time of one path, or `None` if it survives the whole grid.
    pub fn default_time(&self, rng: &mut ChaCha8Rng, bridge: bool) -> Option<f64> {
        let mut x = 0.0;
        for k in 0..self.steps() {
            let next = x + self.drift[k] + self.sd[k] * std_normal(rng);
            if next <= self.log_h {
                return Some(self.times[k + 1]);
            }
            if bridge {
                let p = bridge_crossing_probability(x, next, self.log_h, self.var[k]);
                if p > 0.0 && open_uniform(rng) < p {
                    return Some(0.5 * (self.times[k] + self.times[k + 1]));
                }
            }
            x = next;
        }
        None
    }
}

fn run_in_pool<T: Send, F>(workers: usize, f: F) -> Result<T>
where
    F: FnOnce() -> T + Send,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if workers > 0 {
        builder = builder.num_threads(workers);
    }
    let pool = builder.build().map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Simulated default times in path order. `forced` adds grid points (premium
/// dates, report times).
pub fn simulate_default_times(params: &At1pParams<f64>, cfg: &McConfig, forced: &[f64]) -> Result<Vec<Option<f64>>> {
    cfg.validate()?;
    let grid = FirmGrid::new(params, cfg.horizon, cfg.step, forced);
    let (seed, bridge) = (cfg.seed, cfg.bridge);
    run_in_pool(cfg.workers, || {
        (0..cfg.n_paths)
            .into_par_iter()
            .map(|i| grid.default_time(&mut path_rng(seed, i), bridge))
            .collect()
    })
}

/// Estimated `Q(τ > t)` at each of `times`.
pub fn mc_survival(params: &At1pParams<f64>, cfg: &McConfig, times: &[f64]) -> Result<Vec<McEstimate>> {
    let taus = simulate_default_times(params, cfg, times)?;
    Ok(times
        .iter()
        .map(|&t| {
            let s: Vec<f64> = taus.iter().map(|tau| if tau.map_or(true, |x| x > t) { 1.0 } else { 0.0 }).collect();
            McEstimate::from_samples(&s)
        })
        .collect())
}

/// A running CDS as seen by the simulation: value to the protection buyer.
#[derive(Debug, Clone, PartialEq)]
pub struct McCdsContract {
    pub schedule: PaymentSchedule<f64>,
    pub spread: f64,
    pub lgd: f64,
}

/// Discounted protection-buyer payoff of a running CDS for one default time.
pub fn cds_payoff<D: Discount<f64>>(c: &McCdsContract, tau: Option<f64>, curve: &D) -> f64 {
    let maturity = c.schedule.maturity();
    let mut premium = 0.0;
    for i in 1..=c.schedule.len() {
        let t_i = c.schedule.date(i);
        match tau {
            Some(t) if t <= t_i => {
                let start = c.schedule.date(i - 1);
                premium += curve.discount(t) * (t - start);
                break;
            }
            _ => premium += curve.discount(t_i) * c.schedule.accrual(i),
        }
    }
    let protection = match tau {
        Some(t) if t <= maturity => c.lgd * curve.discount(t),
        _ => 0.0,
    };
    protection - c.spread * premium
}

/// Values several CDS contracts on one simulation that runs to the longest
/// maturity.
pub fn mc_cds_values<D: Discount<f64>>(
    params: &At1pParams<f64>,
    contracts: &[McCdsContract],
    curve: &D,
    cfg: &McConfig,
) -> Result<Vec<McEstimate>> {
    let mut forced: Vec<f64> = Vec::new();
    for c in contracts {
        forced.extend_from_slice(c.schedule.times());
    }
    if contracts.is_empty() {
        return Ok(Vec::new());
    }
    let horizon = contracts.iter().map(|c| c.schedule.maturity()).fold(0.0, f64::max);
    let cfg = McConfig { horizon, ..cfg.clone() };
    let taus = simulate_default_times(params, &cfg, &forced)?;
    Ok(contracts
        .iter()
        .map(|c| {
            let s: Vec<f64> = taus.iter().map(|&tau| cds_payoff(c, tau, curve)).collect();
            McEstimate::from_samples(&s)
        })
        .collect())
}

pub fn mc_cds_value<D: Discount<f64>>(
    params: &At1pParams<f64>,
    contract: &McCdsContract,
    curve: &D,
    cfg: &McConfig,
) -> Result<McEstimate> {
    Ok(mc_cds_values(params, std::slice::from_ref(contract), curve, cfg)?[0])
}
