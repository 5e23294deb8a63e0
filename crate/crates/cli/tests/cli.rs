use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

/// Writes a config into a fresh directory; outputs land in the same directory.
fn setup(date: &str, issuer: &str, extra: &str) -> (TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    let body = format!(
        "curve_file = {}\nquotes_file = {}\n{extra}\n",
        data(&format!("curve_{date}.csv")).display(),
        data(&format!("quotes_{issuer}_{date}.csv")).display(),
    );
    std::fs::write(&cfg, body).unwrap();
    (dir, cfg)
}

fn at1p(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_at1p")).args(args).output().unwrap()
}

fn run(cmd: &str, cfg: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "--config", cfg.to_str().unwrap()];
    args.extend_from_slice(extra);
    at1p(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn column(path: &Path, col: usize) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(col).unwrap().to_string())
        .collect()
}

fn numbers(path: &Path, col: usize) -> Vec<f64> {
    column(path, col).iter().map(|s| s.parse().unwrap()).collect()
}

#[test]
fn calibrate_vodafone_tables() {
    let (dir, cfg) = setup("2004-03-10", "vodafone", "h_method = fixed\nh_value = 0.5\nbeta = 0.5");
    let o = run("calibrate", &cfg, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let table = dir.path().join("calibration.csv");
    let header = std::fs::read_to_string(&table).unwrap();
    assert!(header.starts_with("maturity,spread_bps,vol_pct,survival_pct\n"));
    let vols = numbers(&table, 2);
    let surv = numbers(&table, 3);
    for (v, p) in vols.iter().zip([24.343, 12.664, 12.766, 12.659, 15.271]) {
        assert!((v - p).abs() < 1.5, "{v} vs {p}");
    }
    for (s, p) in surv.iter().zip([99.625, 98.315, 96.352, 94.204, 89.645]) {
        assert!((s - p).abs() < 0.5, "{s} vs {p}");
    }
    // three decimals, as in the published tables
    assert!(column(&table, 2).iter().all(|s| s.split('.').nth(1).map(str::len) == Some(3)));
    let q = numbers(&dir.path().join("survival.csv"), 1);
    assert_eq!(q[0], 1.0);
    assert!(q.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn empty_quotes_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let quotes = dir.path().join("q.csv");
    std::fs::write(&quotes, "maturity_date,spread_bps,recovery\n").unwrap();
    let cfg = dir.path().join("c.conf");
    let curve = data("curve_2004-03-10.csv");
    std::fs::write(&cfg, format!("curve_file = {}\nquotes_file = q.csv\n", curve.display())).unwrap();
    let o = run("calibrate", &cfg, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!stdout(&o).contains("ERROR"));
}

#[test]
fn config_errors_exit_2() {
    let (_dir, cfg) = setup("2004-03-10", "vodafone", "colour = blue");
    assert_eq!(run("calibrate", &cfg, &[]).status.code(), Some(2));
    let (_dir, cfg) = setup("2004-03-10", "vodafone", "");
    assert_eq!(run("calibrate", &cfg, &["--set", "beta=x"]).status.code(), Some(2));
    assert_eq!(run("calibrate", &cfg, &["--set", "quotes_file=missing.csv"]).status.code(), Some(2));
    assert_eq!(at1p(&["calibrate"]).status.code(), Some(2));
    // credit-spread barrier without an equity volatility
    assert_eq!(run("calibrate", &cfg, &["--set", "h_method=credit_spread"]).status.code(), Some(2));
}

#[test]
fn parmalat_dec10_intensity_failure_and_fallback() {
    let (_dir, cfg) = setup("2003-12-10", "parmalat", "h_method = credit_spread\nequity_vol_1y = 0.5");
    let o = run("calibrate", &cfg, &[]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "ERROR NegativeIntensity 3y");

    let o = run("strip-intensity", &cfg, &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("ERROR NegativeIntensity"));

    let (dir, cfg) = setup("2003-12-10", "parmalat", "h_method = credit_spread\nequity_vol_1y = 0.5\nh_fallback = true");
    let o = run("calibrate", &cfg, &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("iterative fallback"));
    let vols = numbers(&dir.path().join("calibration.csv"), 2);
    for (v, p) in vols.iter().zip([50.000, 4.325, 19.950, 24.063, 37.422]) {
        assert!((v - p).abs() < 3.0, "{v} vs {p}");
    }
}

#[test]
fn strip_intensity_vodafone_and_comparison() {
    let (dir, cfg) = setup("2004-03-10", "vodafone", "");
    let o = run("strip-intensity", &cfg, &[]);
    assert_eq!(o.status.code(), Some(0));
    let lambdas = numbers(&dir.path().join("intensity.csv"), 2);
    for (l, p) in lambdas.iter().zip([0.357, 0.952, 1.033, 1.189, 2.104]) {
        assert!((l - p).abs() < 0.15, "{l} vs {p}");
    }
    let diff = numbers(&dir.path().join("survival_compare.csv"), 4);
    assert_eq!(diff.len(), 5);
    assert!(diff.iter().all(|d| d.abs() < 0.5));
}

#[test]
fn zero_spreads_strip_to_zero_intensity() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("q.csv"),
        "maturity_date,spread_bps,recovery\n2005-03-21,0,0.4\n2009-03-20,0,0.4\n",
    )
    .unwrap();
    let cfg = dir.path().join("c.conf");
    let curve = data("curve_2004-03-10.csv");
    std::fs::write(&cfg, format!("curve_file = {}\nquotes_file = q.csv\n", curve.display())).unwrap();
    assert_eq!(run("strip-intensity", &cfg, &[]).status.code(), Some(0));
    assert_eq!(numbers(&dir.path().join("intensity.csv"), 2), vec![0.0, 0.0]);
}

fn band_hit(out: &Output) -> Option<f64> {
    stdout(out)
        .lines()
        .find_map(|l| l.strip_prefix("band_hit_years "))
        .and_then(|v| v.parse().ok())
}

#[test]
fn barrier_plot_band_hits() {
    let (dir, cfg) = setup("2003-09-10", "parmalat", "h_method = credit_spread\nequity_vol_1y = 0.05");
    let o = run("barrier-plot", &cfg, &[]);
    assert_eq!(o.status.code(), Some(0));
    let hit = band_hit(&o).expect("Sep 10 band meets the barrier");
    assert!((9.0..11.0).contains(&hit), "{hit}");
    let t = numbers(&dir.path().join("barrier.csv"), 0);
    assert_eq!(t.len(), 3651);
    assert!((t[3650] - 10.0).abs() < 1e-9);

    let (_dir, cfg) =
        setup("2003-12-10", "parmalat", "h_method = credit_spread\nequity_vol_1y = 0.5\nh_fallback = true");
    let hit = band_hit(&run("barrier-plot", &cfg, &[])).unwrap();
    assert!(hit < 1.0, "{hit}");
}

#[test]
fn barrier_plot_zero_vol_has_no_band() {
    let (dir, cfg) = setup("2004-03-10", "vodafone", "flat_vol = 0\nh_value = 0.5");
    assert_eq!(run("barrier-plot", &cfg, &[]).status.code(), Some(0));
    let path = dir.path().join("barrier.csv");
    let (lo, hi, mid) = (numbers(&path, 3), numbers(&path, 4), numbers(&path, 2));
    for i in 0..lo.len() {
        assert_eq!(lo[i], hi[i]);
        assert_eq!(lo[i], mid[i]);
    }
    // flat_vol is not a calibration
    assert_eq!(run("calibrate", &cfg, &[]).status.code(), Some(2));
}

#[test]
fn mc_check_single_path_reports_na() {
    let (dir, cfg) = setup("2004-03-10", "vodafone", "mc_paths = 1");
    let o = run("mc-check", &cfg, &[]);
    assert_eq!(o.status.code(), Some(0));
    let se = column(&dir.path().join("mc_check.csv"), 2);
    assert_eq!(se.len(), 5);
    assert!(se.iter().all(|s| s == "NA"));
}

#[test]
fn mc_check_deterministic_across_runs_and_workers() {
    let (dir, cfg) = setup("2004-03-10", "vodafone", "mc_paths = 3000\nseed = 7");
    let path = dir.path().join("mc_check.csv");
    let mut outputs = Vec::new();
    for workers in ["1", "1", "3"] {
        assert_eq!(run("mc-check", &cfg, &["--workers", workers]).status.code(), Some(0));
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn mc_check_standard_error_scaling() {
    // quadrupling N halves the standard error
    let (dir, cfg) = setup("2004-03-10", "vodafone", "");
    let path = dir.path().join("mc_check.csv");
    run("mc-check", &cfg, &["--paths", "10000"]);
    let se1 = numbers(&path, 2);
    run("mc-check", &cfg, &["--paths", "40000", "--seed", "99"]);
    let se2 = numbers(&path, 2);
    for (a, b) in se1.iter().zip(&se2) {
        let r = b / a;
        assert!((r - 0.5).abs() < 0.1, "ratio {r}");
    }
}

fn fair_spread(out: &Output) -> f64 {
    stdout(out)
        .lines()
        .find_map(|l| l.strip_prefix("fair_spread_bps "))
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn price_eqswap_limits() {
    let (dir, cfg) = setup("2004-03-10", "vodafone", "h_value = 0.5\nmc_paths = 20000");
    let o = run("price-eqswap", &cfg, &["--rho", "-1", "--solve-fair"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fair_spread(&o), 0.0);
    let row = column(&dir.path().join("eqswap.csv"), 3);
    assert_eq!(row, vec!["0.000"]);

    let o = run("price-eqswap", &cfg, &["--rho", "0.5", "--set", "eq_recovery=1", "--solve-fair"]);
    assert_eq!(fair_spread(&o), 0.0);

    let o = run("price-eqswap", &cfg, &["--rho", "1", "--solve-fair"]);
    let x = fair_spread(&o);
    assert!((x - 24.4).abs() < 4.0, "{x}");

    // pricing at a given spread, with the flag overriding the config
    let o = run("price-eqswap", &cfg, &["--rho", "1", "--spread-bps", "24.4"]);
    assert_eq!(o.status.code(), Some(0));
    let spread = column(&dir.path().join("eqswap.csv"), 1);
    assert_eq!(spread, vec!["24.400"]);
}
