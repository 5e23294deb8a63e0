//! Flat `key = value` run configuration.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use at1p::market_data::parse_date;
use at1p::HMethod;
use chrono::NaiveDate;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Directory relative paths are resolved against.
    pub base_dir: PathBuf,
    pub curve_file: Option<PathBuf>,
    pub quotes_file: Option<PathBuf>,
    /// Defaults to the curve anchor date.
    pub valuation: Option<NaiveDate>,
    pub premium_frequency: u32,

    pub beta: f64,
    pub h_method: HMethod,
    pub h_fallback: bool,
    pub h_initial: f64,
    pub h_max_iter: usize,
    pub equity_vol_1y: Option<f64>,
    /// Skips calibration and uses a constant volatility with `h_value`.
    pub flat_vol: Option<f64>,

    pub mc_paths: usize,
    pub mc_step_days: f64,
    pub mc_bridge: bool,
    pub seed: u64,
    pub workers: usize,
    pub output_dir: PathBuf,

    pub plot_horizon_years: f64,
    pub plot_step_days: f64,
    pub band_hit_horizon_years: f64,

    pub rho: f64,
    pub eq_s0: f64,
    pub eq_k_shares: f64,
    pub eq_maturity: f64,
    pub eq_frequency: u32,
    pub eq_spread_bps: f64,
    pub eq_recovery: f64,
    pub eq_dividend_yield: f64,
    pub eq_vol: f64,
}

const KEYS: &[&str] = &[
    "curve_file",
    "quotes_file",
    "valuation",
    "premium_frequency",
    "beta",
    "h_method",
    "h_value",
    "h_fallback",
    "h_initial",
    "h_max_iter",
    "equity_vol_1y",
    "flat_vol",
    "mc_paths",
    "mc_step_days",
    "mc_bridge",
    "seed",
    "workers",
    "output_dir",
    "plot_horizon_years",
    "plot_step_days",
    "band_hit_horizon_years",
    "rho",
    "eq_s0",
    "eq_k_shares",
    "eq_maturity",
    "eq_frequency",
    "eq_spread_bps",
    "eq_recovery",
    "eq_dividend_yield",
    "eq_vol",
];

impl RunConfig {
    pub fn defaults(base_dir: PathBuf) -> Self {
        RunConfig {
            output_dir: base_dir.clone(),
            base_dir,
            curve_file: None,
            quotes_file: None,
            valuation: None,
            premium_frequency: 4,
            beta: 0.5,
            h_method: HMethod::Fixed(0.5),
            h_fallback: false,
            h_initial: 0.5,
            h_max_iter: 100,
            equity_vol_1y: None,
            flat_vol: None,
            mc_paths: 250_000,
            mc_step_days: 5.0,
            mc_bridge: true,
            seed: 20040310,
            workers: 0,
            plot_horizon_years: 10.0,
            plot_step_days: 1.0,
            band_hit_horizon_years: 30.0,
            rho: 0.0,
            eq_s0: 20.0,
            eq_k_shares: 1.0,
            eq_maturity: 5.0,
            eq_frequency: 2,
            eq_spread_bps: 0.0,
            eq_recovery: 0.4,
            eq_dividend_yield: 0.008,
            eq_vol: 0.2,
        }
    }

    /// Reads a config file and applies `overrides` (in order) on top of it.
    pub fn load(path: &Path, overrides: &[(String, String)]) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let base = if base.as_os_str().is_empty() { PathBuf::from(".") } else { base };
        let mut cfg = Self::parse(&text, base).map_err(|e| format!("{}: {e}", path.display()))?;
        for (k, v) in overrides {
            cfg.set(k, v).map_err(|e| format!("override {k}: {e}"))?;
        }
        cfg.check()?;
        Ok(cfg)
    }

    pub fn parse(text: &str, base_dir: PathBuf) -> Result<Self, String> {
        let mut cfg = Self::defaults(base_dir);
        let mut seen = HashSet::new();
        let mut h_value = None;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
            let (k, v) = (k.trim(), v.trim());
            if !seen.insert(k.to_string()) {
                return Err(format!("line {}: duplicate key {k}", i + 1));
            }
            // h_value only makes sense once h_method is known, which may come later
            if k == "h_value" {
                h_value = Some(num(v).map_err(|e| format!("line {}: {e}", i + 1))?);
                continue;
            }
            cfg.set(k, v).map_err(|e| format!("line {}: {e}", i + 1))?;
        }
        if let Some(h) = h_value {
            cfg.set_h_value(h)?;
        }
        Ok(cfg)
    }

    fn set_h_value(&mut self, h: f64) -> Result<(), String> {
        match self.h_method {
            HMethod::Fixed(_) => {
                self.h_method = HMethod::Fixed(h);
                Ok(())
            }
            _ => Err("h_value is only used with h_method = fixed".into()),
        }
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<(), String> {
        match key {
            "curve_file" => self.curve_file = Some(self.base_dir.join(v)),
            "quotes_file" => self.quotes_file = Some(self.base_dir.join(v)),
            "output_dir" => self.output_dir = self.base_dir.join(v),
            "valuation" => self.valuation = Some(parse_date(v).map_err(|e| e.to_string())?),
            "premium_frequency" => self.premium_frequency = int(v)?,
            "beta" => self.beta = num(v)?,
            "h_method" => {
                let keep = match self.h_method {
                    HMethod::Fixed(h) => h,
                    _ => 0.5,
                };
                self.h_method = parse_h_method(v, keep)?;
            }
            "h_value" => self.set_h_value(num(v)?)?,
            "h_fallback" => self.h_fallback = flag(v)?,
            "h_initial" => self.h_initial = num(v)?,
            "h_max_iter" => self.h_max_iter = int(v)?,
            "equity_vol_1y" => self.equity_vol_1y = Some(num(v)?),
            "flat_vol" => self.flat_vol = Some(num(v)?),
            "mc_paths" => self.mc_paths = int(v)?,
            "mc_step_days" => self.mc_step_days = num(v)?,
            "mc_bridge" => self.mc_bridge = flag(v)?,
            "seed" => self.seed = int(v)?,
            "workers" => self.workers = int(v)?,
            "plot_horizon_years" => self.plot_horizon_years = num(v)?,
            "plot_step_days" => self.plot_step_days = num(v)?,
            "band_hit_horizon_years" => self.band_hit_horizon_years = num(v)?,
            "rho" => self.rho = num(v)?,
            "eq_s0" => self.eq_s0 = num(v)?,
            "eq_k_shares" => self.eq_k_shares = num(v)?,
            "eq_maturity" => self.eq_maturity = num(v)?,
            "eq_frequency" => self.eq_frequency = int(v)?,
            "eq_spread_bps" => self.eq_spread_bps = num(v)?,
            "eq_recovery" => self.eq_recovery = num(v)?,
            "eq_dividend_yield" => self.eq_dividend_yield = num(v)?,
            "eq_vol" => self.eq_vol = num(v)?,
            _ => return Err(format!("unknown key {key:?} (known: {})", KEYS.join(", "))),
        }
        Ok(())
    }

    /// Checks that referenced files exist and that numbers are in range.
    pub fn check(&self) -> Result<(), String> {
        for (name, p) in [("curve_file", &self.curve_file), ("quotes_file", &self.quotes_file)] {
            match p {
                None => return Err(format!("{name} is required")),
                Some(p) if !p.is_file() => return Err(format!("{name} {} does not exist", p.display())),
                _ => {}
            }
        }
        let positive = [
            ("mc_step_days", self.mc_step_days),
            ("plot_horizon_years", self.plot_horizon_years),
            ("plot_step_days", self.plot_step_days),
            ("band_hit_horizon_years", self.band_hit_horizon_years),
            ("eq_maturity", self.eq_maturity),
            ("eq_s0", self.eq_s0),
        ];
        for (name, x) in positive {
            if !(x > 0.0 && x.is_finite()) {
                return Err(format!("{name} must be positive, got {x}"));
            }
        }
        if self.mc_paths == 0 {
            return Err("mc_paths must be at least 1".into());
        }
        if !(-1.0..=1.0).contains(&self.rho) {
            return Err(format!("rho {} outside [-1, 1]", self.rho));
        }
        if let Some(s) = self.flat_vol {
            if !matches!(self.h_method, HMethod::Fixed(_)) {
                return Err("flat_vol needs h_method = fixed".into());
            }
            if !(s >= 0.0 && s.is_finite()) {
                return Err(format!("flat_vol {s} must be non-negative"));
            }
        }
        Ok(())
    }

    pub fn curve_path(&self) -> &Path {
        self.curve_file.as_deref().expect("checked")
    }

    pub fn quotes_path(&self) -> &Path {
        self.quotes_file.as_deref().expect("checked")
    }
}

fn num(v: &str) -> Result<f64, String> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("not a number: {v:?}"))
}

fn int<T: std::str::FromStr>(v: &str) -> Result<T, String> {
    v.replace('_', "").parse().map_err(|_| format!("not a non-negative integer: {v:?}"))
}

fn flag(v: &str) -> Result<bool, String> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(format!("not a boolean: {v:?}")),
    }
}

fn parse_h_method(v: &str, fixed_h: f64) -> Result<HMethod, String> {
    let norm: String = v.chars().filter(|c| *c != '_' && *c != '-').collect::<String>().to_ascii_lowercase();
    match norm.as_str() {
        "fixed" => Ok(HMethod::Fixed(fixed_h)),
        "creditspread" => Ok(HMethod::CreditSpread),
        "excursion" | "excursionprotection" => Ok(HMethod::ExcursionProtection),
        "iterative" => Ok(HMethod::Iterative),
        _ => Err(format!("unknown h_method {v:?} (fixed, credit_spread, excursion, iterative)")),
    }
}

/// Splits a `KEY=VALUE` command-line override.
pub fn parse_override(s: &str) -> Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, got {s:?}"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}
