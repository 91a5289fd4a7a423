//! `heavytail` — fit heavy-tailed risk-factor models, price options,
//! simulate Value-at-Risk and run rolling backtests from the shell.
//!
//! Exit codes: 0 success, 2 input error, 3 numerical failure.

mod commands;
mod config;
mod data;
mod error;
mod output;

use clap::{Parser, Subcommand};
use config::{parse_betas, FlagOverrides, RunConfig};
use error::{CliError, Result};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "heavytail",
    version,
    about = "Heavy-tailed multivariate risk models, option pricing and VaR backtesting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Default)]
struct CommonFlags {
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Model family: gaussian, stable-like, t-like, meta-stable, meta-t,
    /// meta-stable-degenerate, meta-t-degenerate.
    #[arg(long)]
    model: Option<String>,
    /// Portfolio: nll, nls, nldc, or file:PATH.
    #[arg(long)]
    portfolio: Option<String>,
    /// Comma-separated confidence levels, e.g. 0.95,0.99.
    #[arg(long)]
    beta: Option<String>,
    /// Rolling window length in days.
    #[arg(long)]
    window: Option<usize>,
    /// Monte Carlo paths per VaR estimate.
    #[arg(long)]
    paths: Option<usize>,
    /// Loss mapping: full or quad.
    #[arg(long)]
    revaluation: Option<String>,
    /// Risk-free rate (per annum).
    #[arg(long)]
    rate: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Refit cadence in days (1 = every day).
    #[arg(long)]
    refit_every: Option<usize>,
}

impl CommonFlags {
    fn resolve(&self) -> Result<RunConfig> {
        let overrides = FlagOverrides {
            model: self
                .model
                .as_deref()
                .map(|s| s.parse().map_err(CliError::input))
                .transpose()?,
            portfolio: self.portfolio.clone(),
            betas: self.beta.as_deref().map(parse_betas).transpose()?,
            window: self.window,
            paths: self.paths,
            revaluation: self
                .revaluation
                .as_deref()
                .map(|s| s.parse().map_err(CliError::input))
                .transpose()?,
            rate: self.rate,
            seed: self.seed,
            refit_every: self.refit_every,
        };
        RunConfig::resolve(self.config.as_ref(), overrides)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Fit a model family to a price history and write it as JSON.
    Fit {
        /// Price CSV: date column plus one column per ticker.
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        common: CommonFlags,
        /// Fit on the trailing N returns only (default: all).
        #[arg(long)]
        fit_window: Option<usize>,
        /// Output model file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate portfolio VaR for the latest window of a price history.
    Var {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        common: CommonFlags,
        /// Load a fitted model JSON instead of fitting.
        #[arg(long)]
        model_file: Option<PathBuf>,
        /// Optional JSON output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rolling-window backtest with the Kupiec proportion-of-failures test.
    Backtest {
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        common: CommonFlags,
        /// Report JSON output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Price one option (flags or a JSON request) and print its Greeks.
    Price {
        /// JSON file with {"spec": ..., "market": ...}.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Option kind, e.g. call, down-and-out-call, cash-or-nothing-put.
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        strike: Option<f64>,
        #[arg(long)]
        barrier: Option<f64>,
        /// Cash payout for binary kinds.
        #[arg(long)]
        cash: Option<f64>,
        /// Time to expiry in years.
        #[arg(long)]
        expiry: Option<f64>,
        #[arg(long)]
        spot: Option<f64>,
        /// Volatility per annum.
        #[arg(long)]
        vol: Option<f64>,
        #[arg(long, default_value_t = 0.03)]
        rate: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-ticker kurtosis and Jarque-Bera statistics of the log-returns.
    Stats {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the signed-moment curve f_p on [0, 0.99] as CSV.
    PlotFp {
        /// Fractional moment order.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Fit { data, common, fit_window, out } => {
            let cfg = common.resolve()?;
            commands::cmd_fit(&data, &cfg, fit_window, &out)
        }
        Command::Var { data, common, model_file, out } => {
            let cfg = common.resolve()?;
            commands::cmd_var(&data, &cfg, model_file.as_ref(), out.as_ref())
        }
        Command::Backtest { data, common, out } => {
            let cfg = common.resolve()?;
            commands::cmd_backtest(&data, &cfg, out.as_ref())
        }
        Command::Price {
            json,
            kind,
            strike,
            barrier,
            cash,
            expiry,
            spot,
            vol,
            rate,
            out,
        } => commands::cmd_price(
            json.as_ref(),
            kind.as_ref(),
            strike,
            barrier,
            cash,
            expiry,
            spot,
            vol,
            rate,
            out.as_ref(),
        ),
        Command::Stats { data, out } => commands::cmd_stats(&data, out.as_ref()),
        Command::PlotFp { p, out } => commands::cmd_plot_fp(p, &out),
    }
}

fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
