//! Fixture loading and the invariant properties shared by the property suite
//! and the acceptance run.

#![allow(dead_code)]

use std::path::PathBuf;

use at1p::cds::cds_legs_with_step;
use at1p::market_data::{forward_libor, parse_date, Discount};
use at1p::piecewise::PiecewiseConstant;
use at1p::{
    calibrate, load_cds_quotes, load_discount_curve, At1pParams, CalibrationConfig, CalibrationResult, CdsConvention,
    CdsQuoteSet, DiscountCurve, FirmValueDynamics, HMethod, PaymentSchedule,
};
use chrono::Duration;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn market(date: &str, issuer: &str) -> (DiscountCurve<f64>, CdsQuoteSet) {
    let curve = load_discount_curve(data_path(&format!("curve_{date}.csv"))).unwrap();
    let quotes = load_cds_quotes(data_path(&format!("quotes_{issuer}_{date}.csv")), parse_date(date).unwrap()).unwrap();
    (curve, quotes)
}

pub struct Fixture {
    pub name: String,
    pub curve: DiscountCurve<f64>,
    pub quotes: CdsQuoteSet,
    pub config: CalibrationConfig,
}

impl Fixture {
    pub fn calibrate(&self) -> CalibrationResult {
        calibrate(&self.quotes, &self.curve, &self.config).unwrap_or_else(|e| panic!("{}: {e}", self.name))
    }
}

/// Every calibration setup shipped in the fixtures.
pub fn fixtures() -> Vec<Fixture> {
    let make = |name: &str, date: &str, issuer: &str, config: CalibrationConfig| {
        let (curve, quotes) = market(date, issuer);
        Fixture { name: name.to_string(), curve, quotes, config }
    };
    let cs = |beta, vol| CalibrationConfig {
        beta,
        h_method: HMethod::CreditSpread,
        equity_vol_1y: Some(vol),
        ..CalibrationConfig::default()
    };
    let excursion = CalibrationConfig { beta: 0.08, h_method: HMethod::ExcursionProtection, ..CalibrationConfig::default() };
    let mut out = vec![
        make("Vodafone h=0.5", "2004-03-10", "vodafone", CalibrationConfig::default()),
        make("Parmalat 2003-09-10 credit spread", "2003-09-10", "parmalat", cs(0.5, 0.05)),
        make("Parmalat 2003-11-28 credit spread", "2003-11-28", "parmalat", cs(0.5, 0.14)),
        make("Parmalat 2003-12-08 credit spread", "2003-12-08", "parmalat", cs(0.5, 0.20)),
        make("Parmalat 2003-09-10 credit spread beta=0.08", "2003-09-10", "parmalat", cs(0.08, 0.05)),
        make(
            "Parmalat 2003-12-10 iterative",
            "2003-12-10",
            "parmalat",
            CalibrationConfig { h_method: HMethod::Iterative, ..cs(0.5, 0.5) },
        ),
    ];
    for date in ["2003-09-10", "2003-11-28", "2003-12-08", "2003-12-10"] {
        out.push(make(&format!("Parmalat {date} excursion"), date, "parmalat", excursion.clone()));
    }
    out
}

fn vol_curve(vols: &[f64], spacing: f64) -> PiecewiseConstant<f64> {
    let nodes: Vec<(f64, f64)> = vols.iter().enumerate().map(|(i, &s)| ((i + 1) as f64 * spacing, s)).collect();
    PiecewiseConstant::new(&nodes).unwrap()
}

fn params() -> impl Strategy<Value = At1pParams<f64>> {
    (0.05..0.95_f64, 0.0..2.0_f64, prop::collection::vec(0.01..1.0_f64, 1..6), 0.5..3.0_f64)
        .prop_map(|(h, beta, vols, spacing)| At1pParams::from_vol_curve(h, beta, vol_curve(&vols, spacing)).unwrap())
}

pub type Property = fn(&mut TestRunner) -> Result<(), String>;

fn report<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

pub fn survival_monotone_in_t(runner: &mut TestRunner) -> Result<(), String> {
    report(runner.run(&(params(), 0.0..15.0_f64, 0.0..5.0_f64), |(p, t, dt)| {
        let (q1, q2) = (p.survival_probability(t), p.survival_probability(t + dt));
        prop_assert!(q2 <= q1 + 1e-14, "Q({t})={q1} < Q({})={q2}", t + dt);
        prop_assert!((0.0..=1.0).contains(&q2));
        Ok(())
    }))
}

pub fn survival_monotone_in_h(runner: &mut TestRunner) -> Result<(), String> {
    report(runner.run(&(params(), 0.05..0.95_f64, 0.0..0.9_f64, 0.01..15.0_f64), |(p, h1, frac, t)| {
        let h2 = h1 + frac * (0.99 - h1);
        let q = |h| At1pParams::from_vol_curve(h, p.beta(), p.vol().clone()).unwrap().survival_probability(t);
        prop_assert!(q(h2) <= q(h1) + 1e-14, "h {h1} -> {h2}: {} < {}", q(h1), q(h2));
        Ok(())
    }))
}

/// Scaling firm value and barrier by the same power of two is exact in
/// floating point, so survival must not change by a single bit.
pub fn ratio_invariance(runner: &mut TestRunner) -> Result<(), String> {
    report(runner.run(&(params(), 0.1..100.0_f64, -30..30_i32, 0.01..15.0_f64), |(p, v0, k, t)| {
        let barrier = p.h() * v0;
        let s = 2.0_f64.powi(k);
        let base = p.survival_with_levels(v0, barrier, t);
        prop_assert_eq!(p.survival_with_levels(v0 * s, barrier * s, t).to_bits(), base.to_bits());
        Ok(())
    }))
}

/// Larger beta lowers the true barrier at every positive time.
pub fn beta_lowers_barrier(runner: &mut TestRunner) -> Result<(), String> {
    let strategy = (
        prop::collection::vec(0.01..0.8_f64, 1..5),
        -0.02..0.08_f64,
        0.0..0.05_f64,
        0.0..2.0_f64,
        0.0..2.0_f64,
        0.001..12.0_f64,
    );
    report(runner.run(&strategy, |(vols, r, q, b1, db, t)| {
        let dynamics = |beta| FirmValueDynamics {
            rate: PiecewiseConstant::constant(r),
            payout: PiecewiseConstant::constant(q),
            vol: vol_curve(&vols, 1.5),
            beta,
            v0: 1.0,
        };
        let (lo, hi) = (dynamics(b1), dynamics(b1 + db + 1e-3));
        prop_assert!(hi.true_barrier(0.7, t) < lo.true_barrier(0.7, t));
        Ok(())
    }))
}

/// `Σ α_i F_i P(0,T_i) = P(0,T_0) − P(0,T_b)` on random log-linear curves.
pub fn libor_telescoping(runner: &mut TestRunner) -> Result<(), String> {
    let strategy = (prop::collection::vec(0.0..0.12_f64, 2..8), 0.5..12.0_f64, prop::sample::select(vec![1_u32, 2, 4, 12]));
    report(runner.run(&strategy, |(rates, maturity, freq)| {
        let anchor = parse_date("2004-03-10").unwrap();
        let mut nodes = vec![(anchor, 1.0)];
        let mut ln_df = 0.0;
        for (i, r) in rates.iter().enumerate() {
            ln_df -= r * 2.0;
            nodes.push((anchor + Duration::days(730 * (i as i64 + 1)), ln_df.exp()));
        }
        let curve = DiscountCurve::new(&nodes).unwrap();
        let s = PaymentSchedule::regular(maturity, freq).unwrap();
        let mut sum = 0.0;
        for i in 1..=s.len() {
            let f = forward_libor(&curve, s.date(i - 1), s.date(i)).unwrap();
            sum += s.accrual(i) * f * curve.discount(s.date(i));
        }
        let target = curve.discount(0.0) - curve.discount(s.maturity());
        prop_assert!((sum - target).abs() < 1e-12, "{sum} vs {target}");
        Ok(())
    }))
}

/// Halving the default-leg grid moves a CDS value by less than 0.05 bp, for
/// any contract written on a calibrated fixture (the quoted ones included).
pub fn cds_grid_halving(runner: &mut TestRunner) -> Result<(), String> {
    let calibrated: Vec<(Fixture, At1pParams<f64>)> = fixtures()
        .into_iter()
        .map(|f| {
            let p = f.calibrate().params;
            (f, p)
        })
        .collect();
    let step = 7.0 / 365.0;
    for (f, p) in &calibrated {
        for i in 0..f.quotes.len() {
            let q = &f.quotes.quotes[i];
            let value = |h: f64| {
                cds_legs_with_step(&f.quotes.schedule(i), CdsConvention::Running, p, &f.curve, h).value(q.spread(), q.lgd())
            };
            let (coarse, fine) = (value(step), value(step / 2.0));
            if (coarse - fine).abs() >= 0.05e-4 {
                return Err(format!("{} quote {}: {coarse} vs {fine}", f.name, i + 1));
            }
        }
    }
    let strategy = (0..calibrated.len(), 0.0..0.06_f64, 0.1..1.0_f64, 1..41_usize, prop::sample::select(vec![1_u32, 2, 4]));
    report(runner.run(&strategy, |(k, spread, lgd, quarters, freq)| {
        let (f, p) = &calibrated[k];
        let schedule = PaymentSchedule::regular(quarters as f64 * 0.25, freq).unwrap();
        let value = |h: f64| cds_legs_with_step(&schedule, CdsConvention::Running, p, &f.curve, h).value(spread, lgd);
        let (coarse, fine) = (value(step), value(step / 2.0));
        prop_assert!((coarse - fine).abs() < 0.05e-4, "{}: {coarse} vs {fine}", f.name);
        Ok(())
    }))
}

pub const PROPERTIES: &[(&str, Property)] = &[
    ("survival monotone in T", survival_monotone_in_t),
    ("survival monotone in h", survival_monotone_in_h),
    ("(V0, H) ratio invariance", ratio_invariance),
    ("beta lowers the barrier", beta_lowers_barrier),
    ("forward LIBOR telescoping", libor_telescoping),
    ("CDS grid halving", cds_grid_halving),
];

/// Deterministic runner so every run checks the same cases.
pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config { cases, failure_persistence: None, ..Config::default() },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    )
}
