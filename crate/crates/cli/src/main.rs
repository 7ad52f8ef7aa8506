//! `photon-resonance <subcommand> --config <file> [--out <dir>] [--threads N]`
//!
//! Exit status: 0 on success, 1 for configuration or usage errors, 2 when a
//! solver did not converge (partial CSV rows and the manifest are still
//! written).

// `!(x > 0.0)` is the NaN-rejecting form used throughout input validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod experiments;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use config::{Experiment, RunConfig};
use experiments::{Outcome, Status};

const THREADS_ENV: &str = "PHOTON_RESONANCE_THREADS";
const MANIFEST: &str = "manifest.json";

#[derive(Parser, Debug)]
#[command(name = "photon-resonance", version, about = "Resonances and bound states of a photon in an atomic cloud")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output` in the config (default `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; PHOTON_RESONANCE_THREADS takes precedence.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate the Green's function over dimensions, wave numbers and radii.
    GreensTable(Common),
    /// Leading resonances for one inclusion.
    Resonances(Common),
    /// Follow each mode along a decreasing ε grid.
    TraceEpsilon(Common),
    /// Bound states below zero frequency.
    BoundStates(Common),
    /// Numerical resonances against the small-ε expansions.
    AsymptoticsCompare(Common),
    /// 1D time evolution with mass and survival diagnostics.
    Dynamics(Common),
}

impl Command {
    fn split(&self) -> (Experiment, &Common) {
        match self {
            Self::GreensTable(c) => (Experiment::GreensTable, c),
            Self::Resonances(c) => (Experiment::Resonances, c),
            Self::TraceEpsilon(c) => (Experiment::TraceEpsilon, c),
            Self::BoundStates(c) => (Experiment::BoundStates, c),
            Self::AsymptoticsCompare(c) => (Experiment::AsymptoticsCompare, c),
            Self::Dynamics(c) => (Experiment::Dynamics, c),
        }
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    experiment: &'static str,
    config_file: String,
    threads: usize,
    status: &'static str,
    outputs: Vec<String>,
    rows: usize,
    diagnostics: &'a [String],
    config: &'a RunConfig,
}

fn threads(cli: Option<usize>) -> Result<usize, String> {
    let n = match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| format!("{THREADS_ENV} = {v:?} is not a thread count"))?,
        Err(_) => cli.unwrap_or(1),
    };
    if n == 0 {
        return Err("thread count must be at least 1".into());
    }
    Ok(n)
}

fn write_csv(path: &Path, out: &Outcome) -> Result<(), String> {
    let mut w = csv::Writer::from_path(path).map_err(|e| format!("{}: {e}", path.display()))?;
    w.write_record(out.header).map_err(|e| e.to_string())?;
    for r in &out.rows {
        w.write_record(r).map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| format!("{}: {e}", path.display()))
}

fn execute(cli: Cli) -> Result<Status, String> {
    let (exp, common) = cli.command.split();
    let threads = threads(common.threads)?;
    let src = fs::read_to_string(&common.config).map_err(|e| format!("{}: {e}", common.config.display()))?;
    let cfg = RunConfig::parse(&src, &common.config).map_err(|e| e.to_string())?;
    if let Some(named) = cfg.experiment {
        if named != exp {
            return Err(format!(
                "{}: config is for `{}` but the subcommand is `{}`",
                common.config.display(),
                named.name(),
                exp.name()
            ));
        }
    }
    let dir = common.out.clone().or_else(|| cfg.output.clone()).unwrap_or_else(|| PathBuf::from("out"));
    fs::create_dir_all(&dir).map_err(|e| format!("{}: {e}", dir.display()))?;

    let outcome = experiments::run(exp, &cfg, threads)?;
    let csv_name = exp.csv_name();
    write_csv(&dir.join(&csv_name), &outcome)?;
    let manifest = Manifest {
        tool: "photon-resonance",
        version: photon_resonance::VERSION,
        experiment: exp.name(),
        config_file: common.config.display().to_string(),
        threads,
        status: match outcome.status {
            Status::Ok => "ok",
            Status::NonConvergence => "non_convergence",
        },
        outputs: vec![csv_name.clone(), MANIFEST.to_string()],
        rows: outcome.rows.len(),
        diagnostics: &outcome.diagnostics,
        config: &cfg,
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| e.to_string())?;
    fs::write(dir.join(MANIFEST), json + "\n").map_err(|e| format!("{}: {e}", dir.display()))?;

    for d in &outcome.diagnostics {
        eprintln!("note: {d}");
    }
    println!("{}: {} rows -> {}", exp.name(), outcome.rows.len(), dir.join(csv_name).display());
    Ok(outcome.status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::NonConvergence) => {
            eprintln!("error: solver did not converge; partial results written");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
