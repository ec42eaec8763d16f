//! Command-line front end: the figure, the demos and the verify suite.

pub mod config;
pub mod demo;
pub mod error;
pub mod fig1;
pub mod output;
pub mod reference;
pub mod scenarios;
pub mod verify;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::{Config, GridSpec, Overrides};
use crate::demo::Demo;
use crate::error::CliError;

/// Env var capping the worker threads; `0` or unset picks automatically.
pub const THREADS_ENV: &str = "WIGNER_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "wigner-lab",
    version,
    about = "Phase-space pictures of position measurements"
)]
pub struct Cli {
    /// JSON config file; flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Grid size `NxM` (`N` in q, `M` in p).
    #[arg(long, global = true, value_name = "NxM")]
    pub grid: Option<GridSpec>,
    /// Width of the Gaussian state.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Width of the position window.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Run the fast subset of the verify suite.
    #[arg(long, global = true)]
    pub quick: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Projected Gaussian WF over the figure viewport: CSV, JSON report, gnuplot script.
    Fig1,
    /// Run a demonstration: uncertainty, nonfactor, properness, hudson or rankN.
    Demo { name: String },
    /// Run the invariant suite and write verify_report.json.
    Verify {
        /// Replace a check's tolerance, `NAME=VALUE`; repeatable.
        #[arg(long = "inject-tolerance", hide = true, value_name = "NAME=VALUE")]
        inject_tolerance: Vec<String>,
    },
}

/// Sizes the global thread pool from [`THREADS_ENV`].
pub fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Threads(raw.clone()))?;
    if n > 0 {
        // a pool may already exist when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(())
}

fn parse_injections(items: &[String]) -> Result<BTreeMap<String, f64>, CliError> {
    items
        .iter()
        .map(|s| {
            let parsed = s.split_once('=').and_then(|(k, v)| {
                v.trim()
                    .parse::<f64>()
                    .ok()
                    .map(|v| (k.trim().to_string(), v))
            });
            parsed.ok_or_else(|| {
                CliError::Config(error::ConfigInvalid {
                    source: "command line".into(),
                    field: "inject-tolerance".into(),
                    line: None,
                    message: format!("expected NAME=VALUE, got {s:?}"),
                })
            })
        })
        .collect()
}

/// Executes one invocation and prints a one-line summary.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    init_threads()?;
    let overrides = Overrides {
        grid: cli.grid,
        sigma: cli.sigma,
        a: cli.a,
        out: cli.out.clone(),
    };
    match &cli.command {
        Command::Fig1 => {
            let cfg = Config::resolve(cli.config.as_deref(), &overrides)?;
            let r = fig1::run(&cfg)?;
            println!(
                "fig1: min W = {:.12} at (q, p) = ({}, {}); wrote {} in {}",
                r.negativity.min_value,
                r.negativity.argmin.0,
                r.negativity.argmin.1,
                [fig1::CSV_NAME, fig1::REPORT_NAME, fig1::SCRIPT_NAME].join(", "),
                cfg.out.display()
            );
            Ok(())
        }
        Command::Demo { name } => {
            let demo: Demo = name.parse()?;
            let cfg = Config::resolve(cli.config.as_deref(), &overrides)?;
            let passed = demo::run(demo, &cfg)?;
            println!(
                "demo {demo}: {}; wrote {}",
                if passed { "pass" } else { "FAIL" },
                demo.file_name()
            );
            if passed {
                Ok(())
            } else {
                Err(CliError::CheckFailed {
                    name: format!("demo {demo}"),
                    detail: format!("see {}", demo.file_name()),
                })
            }
        }
        Command::Verify { inject_tolerance } => {
            let cfg = Config::resolve(cli.config.as_deref(), &overrides)?;
            let injected = parse_injections(inject_tolerance)?;
            let report = verify::run(&cfg, cli.quick, &injected)?;
            println!(
                "verify: {} checks passed in {:.2} s; wrote {}",
                report.checks.len(),
                report.total_seconds,
                verify::REPORT_NAME
            );
            Ok(())
        }
    }
}
