//! `at1p`: calibrate, verify and use the AT1P structural credit model from
//! flat config files.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Failure;
use config::{parse_override, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "at1p", version, about = "AT1P structural credit model toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bootstrap piecewise-constant volatilities to the CDS quotes.
    Calibrate(Common),
    /// Strip piecewise-linear default intensities and compare survival with AT1P.
    StripIntensity(Common),
    /// Write the default barrier and the firm-value confidence band.
    BarrierPlot(Common),
    /// Reprice the quoted CDS by first-passage Monte Carlo.
    McCheck(Common),
    /// Price an equity return swap under counterparty default risk.
    PriceEqswap {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        rho: Option<f64>,
        /// Spread X in basis points.
        #[arg(long, allow_negative_numbers = true)]
        spread_bps: Option<f64>,
        /// Solve for the spread giving a zero price.
        #[arg(long)]
        solve_fair: bool,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Override a config key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", value_parser = parse_override)]
    overrides: Vec<(String, String)>,
    #[arg(long)]
    output_dir: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    workers: Option<usize>,
}

impl Common {
    fn load(&self, extra: Vec<(String, String)>) -> Result<RunConfig, Failure> {
        let mut all = self.overrides.clone();
        let flags = [
            ("output_dir", self.output_dir.clone()),
            ("seed", self.seed.map(|v| v.to_string())),
            ("mc_paths", self.paths.map(|v| v.to_string())),
            ("workers", self.workers.map(|v| v.to_string())),
        ];
        all.extend(flags.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), v))));
        all.extend(extra);
        let mut cfg = RunConfig::load(&self.config, &all).map_err(Failure::Usage)?;
        // paths given on the command line are relative to the working directory
        if let Some(d) = &self.output_dir {
            cfg.output_dir = PathBuf::from(d);
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Calibrate(c) => commands::calibrate_cmd(&c.load(vec![])?),
        Command::StripIntensity(c) => commands::strip_intensity_cmd(&c.load(vec![])?),
        Command::BarrierPlot(c) => commands::barrier_plot_cmd(&c.load(vec![])?),
        Command::McCheck(c) => commands::mc_check_cmd(&c.load(vec![])?),
        Command::PriceEqswap { common, rho, spread_bps, solve_fair } => {
            let extra = [("rho", rho), ("eq_spread_bps", spread_bps)]
                .into_iter()
                .filter_map(|(k, v)| v.map(|v| (k.to_string(), v.to_string())))
                .collect();
            commands::price_eqswap_cmd(&common.load(extra)?, solve_fair)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Some(line) = f.error_line() {
                println!("{line}");
            }
            eprintln!("at1p: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
