use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use at1p::calibration::MaturityDiagnostics;
use at1p::equity_swap::{EquitySwapContract, EquitySwapSimulation, JointDynamics};
use at1p::market_data::DAYS_PER_YEAR;
use at1p::monte_carlo::{mc_cds_values, McCdsContract, McConfig};
use at1p::{
    calibrate, calibrate_intensity, At1pParams, CalibrationConfig, CalibrationResult, CdsQuoteSet, DiscountCurve,
    Error, FirmValueDynamics, HOrigin, SurvivalCurve,
};

use crate::config::RunConfig;

/// How a command failed; decides the exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad config, flags or input files (exit 2).
    Usage(String),
    /// Numerical failure (exit 1) with the tenor it happened at, if any.
    Numerical { error: Error, tenor: Option<String> },
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numerical { .. } => 1,
        }
    }

    /// `ERROR <kind> <tenor>` for numerical failures.
    pub fn error_line(&self) -> Option<String> {
        match self {
            Failure::Usage(_) => None,
            Failure::Numerical { error, tenor } => {
                Some(format!("ERROR {} {}", error.kind(), tenor.as_deref().unwrap_or("NA")))
            }
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Numerical { error, .. } => error.to_string(),
        }
    }

    fn from_core(error: Error, quotes: Option<&CdsQuoteSet>) -> Failure {
        match error {
            Error::InvalidInput(_) | Error::Ingest { .. } | Error::Io(_) => Failure::Usage(error.to_string()),
            _ => {
                let index = match &error {
                    Error::NegativeIntensity { index, .. } | Error::NoRootInBracket { index, .. } => Some(*index),
                    _ => None,
                };
                let tenor = match (index, quotes) {
                    (Some(i), Some(q)) if i < q.len() => Some(q.tenor_label(i)),
                    _ => error.maturity().map(|t| format!("{t:.4}y")),
                };
                Failure::Numerical { error, tenor }
            }
        }
    }
}

type CmdResult<T> = Result<T, Failure>;

struct Market {
    curve: DiscountCurve<f64>,
    quotes: CdsQuoteSet,
}

fn load_market(cfg: &RunConfig) -> CmdResult<Market> {
    let usage = |e: Error| Failure::Usage(e.to_string());
    let curve = at1p::load_discount_curve(cfg.curve_path()).map_err(usage)?;
    let valuation = cfg.valuation.unwrap_or(curve.anchor());
    if valuation != curve.anchor() {
        return Err(Failure::Usage(format!(
            "valuation {valuation} differs from the curve anchor {}",
            curve.anchor()
        )));
    }
    let path = cfg.quotes_path();
    let file = std::fs::File::open(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let quotes = CdsQuoteSet::from_csv_reader(file, &path.display().to_string(), valuation, cfg.premium_frequency)
        .map_err(usage)?;
    Ok(Market { curve, quotes })
}

fn calibration_config(cfg: &RunConfig) -> CalibrationConfig {
    CalibrationConfig {
        beta: cfg.beta,
        h_method: cfg.h_method,
        equity_vol_1y: cfg.equity_vol_1y,
        fallback_to_iterative: cfg.h_fallback,
        h_initial: cfg.h_initial,
        max_iter: cfg.h_max_iter,
        ..CalibrationConfig::default()
    }
}

fn run_calibration(cfg: &RunConfig, m: &Market) -> CmdResult<CalibrationResult> {
    if cfg.flat_vol.is_some() {
        return Err(Failure::Usage("flat_vol replaces calibration; this command needs a calibration".into()));
    }
    calibrate(&m.quotes, &m.curve, &calibration_config(cfg)).map_err(|e| Failure::from_core(e, Some(&m.quotes)))
}

/// Calibrated parameters, or the constant-volatility model when `flat_vol` is set.
fn model_params(cfg: &RunConfig, m: &Market) -> CmdResult<(At1pParams<f64>, String)> {
    match (cfg.flat_vol, cfg.h_method) {
        (Some(s), at1p::HMethod::Fixed(h)) => {
            let p = At1pParams::flat(h, cfg.beta, s).map_err(|e| Failure::from_core(e, None))?;
            Ok((p, format!("flat volatility {s}")))
        }
        _ => {
            let r = run_calibration(cfg, m)?;
            let what = format!("calibrated h={:.4} ({})", r.h, origin_label(&r.h_origin));
            Ok((r.params, what))
        }
    }
}

fn origin_label(o: &HOrigin) -> String {
    match o {
        HOrigin::Fixed => "fixed".into(),
        HOrigin::CreditSpread { target_survival } => format!("credit spread, 1y target survival {target_survival:.6}"),
        HOrigin::ExcursionProtection => "excursion/protection".into(),
        HOrigin::Iterative { iterations, .. } => format!("iterative, {iterations} iterations"),
        HOrigin::IterativeFallback { reason, iterations, .. } => {
            format!("iterative fallback after credit-spread failure [{reason}], {iterations} iterations")
        }
    }
}

fn mc_config(cfg: &RunConfig) -> McConfig {
    McConfig {
        n_paths: cfg.mc_paths,
        step: cfg.mc_step_days / DAYS_PER_YEAR,
        seed: cfg.seed,
        workers: cfg.workers,
        bridge: cfg.mc_bridge,
        ..McConfig::default()
    }
}

fn write_output(cfg: &RunConfig, name: &str, body: &str) -> CmdResult<PathBuf> {
    std::fs::create_dir_all(&cfg.output_dir)
        .map_err(|e| Failure::Usage(format!("{}: {e}", cfg.output_dir.display())))?;
    let path = cfg.output_dir.join(name);
    std::fs::write(&path, body).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn daily_grid(horizon: f64, step_days: f64) -> Vec<f64> {
    let step = step_days / DAYS_PER_YEAR;
    let n = (horizon / step - 1e-9).ceil() as usize;
    (0..=n).map(|k| (k as f64 * step).min(horizon)).collect()
}

fn pct(x: f64) -> String {
    format!("{:.3}", x * 100.0)
}

fn bps_or_na(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), |v| format!("{:.3}", v * 1e4))
}

fn shown(p: &Path) -> String {
    p.display().to_string()
}

pub fn calibrate_cmd(cfg: &RunConfig) -> CmdResult<()> {
    let m = load_market(cfg)?;
    let r = run_calibration(cfg, &m)?;
    let surv = r.survival_at_maturities();
    let mut table = String::from("maturity,spread_bps,vol_pct,survival_pct\n");
    for ((q, d), s) in m.quotes.quotes.iter().zip(&r.diagnostics).zip(&surv) {
        writeln!(table, "{},{:.3},{},{}", q.maturity, q.spread_bps, pct(d.sigma), pct(*s)).unwrap();
    }
    let last = r.diagnostics.last().map_or(0.0, |d| d.maturity);
    let mut curve = String::from("t,Q\n");
    for t in daily_grid(last, 1.0) {
        writeln!(curve, "{t:.6},{:.8}", r.params.survival_probability(t)).unwrap();
    }
    let a = write_output(cfg, "calibration.csv", &table)?;
    let b = write_output(cfg, "survival.csv", &curve)?;
    println!("h {:.4} beta {} ({})", r.h, cfg.beta, origin_label(&r.h_origin));
    print_diagnostics(&m.quotes, &r.diagnostics);
    println!("max |residual| {:.3e}", r.max_abs_residual());
    println!("wrote {} {}", shown(&a), shown(&b));
    Ok(())
}

fn print_diagnostics(quotes: &CdsQuoteSet, diags: &[MaturityDiagnostics]) {
    for (i, d) in diags.iter().enumerate() {
        let note = if d.zero_spread { " (zero spread)" } else { "" };
        println!("  {:>4} vol {}%{note}", quotes.tenor_label(i), pct(d.sigma));
    }
}

pub fn strip_intensity_cmd(cfg: &RunConfig) -> CmdResult<()> {
    let m = load_market(cfg)?;
    let ic = calibrate_intensity(&m.quotes, &m.curve).map_err(|e| Failure::from_core(e, Some(&m.quotes)))?;
    let ts = m.quotes.maturities();
    let mut table = String::from("maturity,spread_bps,lambda_pct,survival_pct\n");
    for (q, &t) in m.quotes.quotes.iter().zip(&ts) {
        writeln!(table, "{},{:.3},{},{}", q.maturity, q.spread_bps, pct(ic.lambda_at(t)), pct(ic.survival(t))).unwrap();
    }
    let a = write_output(cfg, "intensity.csv", &table)?;
    println!("intensity nodes (%):");
    for (i, &t) in ts.iter().enumerate() {
        println!("  {:>4} {}", m.quotes.tenor_label(i), pct(ic.lambda_at(t)));
    }
    // the AT1P side of the comparison is optional: report and carry on if it fails
    match run_calibration(cfg, &m) {
        Ok(r) => {
            let mut cmp = String::from("maturity,t,at1p_survival_pct,intensity_survival_pct,diff_pct\n");
            let mut worst: f64 = 0.0;
            for (q, &t) in m.quotes.quotes.iter().zip(&ts) {
                let (sa, si) = (r.params.survival_probability(t), ic.survival(t));
                worst = worst.max((sa - si).abs());
                writeln!(cmp, "{},{t:.6},{},{},{}", q.maturity, pct(sa), pct(si), pct(sa - si)).unwrap();
            }
            let b = write_output(cfg, "survival_compare.csv", &cmp)?;
            println!("max |AT1P - intensity| survival {}%", pct(worst));
            println!("wrote {} {}", shown(&a), shown(&b));
        }
        Err(f) => {
            eprintln!("note: AT1P calibration for the comparison failed: {}", f.message());
            println!("wrote {}", shown(&a));
        }
    }
    Ok(())
}

pub fn barrier_plot_cmd(cfg: &RunConfig) -> CmdResult<()> {
    let m = load_market(cfg)?;
    let (params, what) = model_params(cfg, &m)?;
    let dynamics = FirmValueDynamics::from_curve(&m.curve, &params);
    let h = params.h();
    let mut series = String::from("t,barrier,expected_V,band_lo,band_hi\n");
    for t in daily_grid(cfg.plot_horizon_years, cfg.plot_step_days) {
        let band = dynamics.confidence_band(t);
        writeln!(
            series,
            "{t:.6},{:.8},{:.8},{:.8},{:.8}",
            dynamics.true_barrier(h, t),
            band.expected,
            band.lower,
            band.upper
        )
        .unwrap();
    }
    let a = write_output(cfg, "barrier.csv", &series)?;
    println!("{what}; V0 = 1");
    let step = cfg.plot_step_days / DAYS_PER_YEAR;
    match dynamics.band_hit_time(h, cfg.band_hit_horizon_years, step) {
        Some(t) => println!("band_hit_years {t:.3}"),
        None => println!("band_hit_years none (searched {}y)", cfg.band_hit_horizon_years),
    }
    println!("wrote {}", shown(&a));
    Ok(())
}

pub fn mc_check_cmd(cfg: &RunConfig) -> CmdResult<()> {
    let m = load_market(cfg)?;
    let (params, what) = model_params(cfg, &m)?;
    let contracts: Vec<McCdsContract> = m
        .quotes
        .quotes
        .iter()
        .enumerate()
        .map(|(i, q)| McCdsContract { schedule: m.quotes.schedule(i), spread: q.spread(), lgd: q.lgd() })
        .collect();
    let est = mc_cds_values(&params, &contracts, &m.curve, &mc_config(cfg)).map_err(|e| Failure::from_core(e, None))?;
    let mut table = String::from("maturity,mc_value_bps,std_err_bps\n");
    println!("{what}; {} paths, {} day step, bridge {}", cfg.mc_paths, cfg.mc_step_days, cfg.mc_bridge);
    for (i, (q, e)) in m.quotes.quotes.iter().zip(&est).enumerate() {
        writeln!(table, "{},{},{}", q.maturity, bps_or_na(Some(e.mean)), bps_or_na(e.std_err)).unwrap();
        let z = e.std_err.map_or_else(|| "NA".into(), |se| format!("{:.2}", e.mean / se));
        println!("  {:>4} {} bp  se {} bp  z {z}", m.quotes.tenor_label(i), bps_or_na(Some(e.mean)), bps_or_na(e.std_err));
    }
    let a = write_output(cfg, "mc_check.csv", &table)?;
    println!("wrote {}", shown(&a));
    Ok(())
}

pub fn price_eqswap_cmd(cfg: &RunConfig, solve_fair: bool) -> CmdResult<()> {
    let m = load_market(cfg)?;
    let (params, what) = model_params(cfg, &m)?;
    let contract = EquitySwapContract {
        k_shares: cfg.eq_k_shares,
        s0: cfg.eq_s0,
        maturity: cfg.eq_maturity,
        frequency: cfg.eq_frequency,
        spread_x: cfg.eq_spread_bps * 1e-4,
        recovery: cfg.eq_recovery,
        dividend_yield: cfg.eq_dividend_yield,
    };
    let dynamics = JointDynamics { counterparty: params, equity_vol: cfg.eq_vol, rho: cfg.rho };
    let sim = EquitySwapSimulation::run(&contract, &dynamics, &m.curve, &mc_config(cfg), false)
        .map_err(|e| Failure::from_core(e, None))?;
    let x = if solve_fair {
        sim.fair_spread().map_err(|e| Failure::from_core(e, None))?
    } else {
        contract.spread_x
    };
    let p = sim.price(x);
    let notional = contract.k_shares * contract.s0;
    let per_notional = |v: Option<f64>| bps_or_na(v.map(|v| v / notional));
    let mut table = String::from("rho,spread_bps,price_bps,std_err_bps,std_err_plain_bps\n");
    writeln!(
        table,
        "{},{:.3},{},{},{}",
        cfg.rho,
        x * 1e4,
        per_notional(Some(p.price)),
        per_notional(p.std_err),
        per_notional(p.std_err_plain)
    )
    .unwrap();
    let a = write_output(cfg, "eqswap.csv", &table)?;
    println!("{what}; {} paths, rho {}", cfg.mc_paths, cfg.rho);
    if solve_fair {
        println!("fair_spread_bps {:.3}", x * 1e4);
    }
    println!(
        "price_bps {} se {} (plain {}) at spread {:.3} bp",
        per_notional(Some(p.price)),
        per_notional(p.std_err),
        per_notional(p.std_err_plain),
        x * 1e4
    );
    println!("wrote {}", shown(&a));
    Ok(())
}
