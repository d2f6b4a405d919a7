//! Command-line front end for `qcinterp`.
//!
//! Every subcommand reads one JSON scenario file, computes a table, and
//! writes it as CSV (with `#` metadata lines) or JSON. A single
//! [`RunReport`] line goes to stderr. Exit codes: 0 success, 1 tolerance
//! failure, 2 config, parse or IO error, 3 solver failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
mod error;
pub mod output;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

pub use commands::{Flags, Outcome};
pub use config::LoadedConfig;
pub use error::{exit, CliError, CliResult};
pub use output::{format_float, Format, Table};
pub use report::{RunReport, Status};

pub const THREADS_ENV: &str = "QCINTERP_THREADS";

#[derive(Debug, Parser)]
#[command(name = "qcinterp", version, about = "Quantum-classical interpolation: spectra, tunneling, thermodynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Grid eigenvalues against closed forms, per λ.
    Spectrum(CommonArgs),
    /// Double-well tunneling quench: two-level model and grid doublet.
    Doublewell(CommonArgs),
    /// F/kT and S/k against u = ħω/kT, per λ.
    Thermo(CommonArgs),
    /// Crank-Nicolson evolution with optional Bohmian trajectories.
    Evolve(CommonArgs),
    /// LDL/HDL series under the drive λ(t) = |sin Ωt|.
    Oscillate(CommonArgs),
    /// Entropy-enthalpy compensation residuals of a measured table.
    Compensation(CommonArgs),
}

#[derive(Debug, Args, Clone)]
pub struct CommonArgs {
    /// Scenario file (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; stdout when neither this nor the config names one.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Overrides the command's numeric tolerance.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Comma-separated trajectory seeds for `evolve`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub seed_positions: Option<Vec<f64>>,
    /// Input table for `compensation`.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Doublewell(_) => "doublewell",
            Command::Thermo(_) => "thermo",
            Command::Evolve(_) => "evolve",
            Command::Oscillate(_) => "oscillate",
            Command::Compensation(_) => "compensation",
        }
    }

    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Spectrum(a)
            | Command::Doublewell(a)
            | Command::Thermo(a)
            | Command::Evolve(a)
            | Command::Oscillate(a)
            | Command::Compensation(a) => a,
        }
    }
}

/// Result of one invocation: the report and, when no output file was
/// requested, the rendered table for stdout.
#[derive(Debug, Clone)]
pub struct Execution {
    pub report: RunReport,
    pub stdout: Option<Vec<u8>>,
}

/// Sizes rayon's global pool from `QCINTERP_THREADS` (0 or unset = auto).
pub fn configure_threads() -> CliResult<()> {
    let n = match std::env::var(THREADS_ENV) {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Config(format!("{THREADS_ENV} must be a non-negative integer, got `{s}`")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

pub fn version_string() -> String {
    format!("qcinterp-cli {} (qcinterp {})", env!("CARGO_PKG_VERSION"), qcinterp::VERSION)
}

fn dispatch(cmd: &Command, cfg: &LoadedConfig, flags: &Flags) -> CliResult<Outcome> {
    match cmd {
        Command::Spectrum(_) => commands::spectrum::run(cfg, flags),
        Command::Doublewell(_) => commands::doublewell::run(cfg, flags),
        Command::Thermo(_) => commands::thermo::run(cfg, flags),
        Command::Evolve(_) => commands::evolve::run(cfg, flags),
        Command::Oscillate(_) => commands::oscillate::run(cfg, flags),
        Command::Compensation(_) => commands::compensation::run(cfg, flags),
    }
}

/// Loads, computes and writes; never panics on bad input.
pub fn execute(cmd: &Command) -> Execution {
    let start = Instant::now();
    let args = cmd.args();
    let mut report = RunReport::new(cmd.name());
    report.inputs = json!({
        "config": args.config.display().to_string(),
        "out": args.out.as_ref().map(|p| p.display().to_string()),
        "format": match args.format { Format::Csv => "csv", Format::Json => "json" },
        "tolerance": args.tolerance,
        "seed_positions": args.seed_positions,
        "input": args.input.as_ref().map(|p| p.display().to_string()),
    });
    let mut stdout = None;
    let result = (|| -> CliResult<Outcome> {
        let cfg = LoadedConfig::load(&args.config)?;
        report.inputs["config_sha256"] = json!(cfg.sha256);
        report.inputs["scenario"] = cfg.raw.clone();
        let flags = Flags {
            tolerance: args.tolerance,
            seed_positions: args.seed_positions.clone(),
            input: args.input.clone(),
        };
        if let Some(t) = flags.tolerance {
            config::positive("--tolerance", t)?;
        }
        let outcome = dispatch(cmd, &cfg, &flags)?;

        let mut table = Table::new(outcome.table.columns.clone());
        table.meta("command", cmd.name());
        table.meta("config_sha256", cfg.sha256.clone());
        table.meta("version", version_string());
        table.metadata.extend(outcome.table.metadata.iter().cloned());
        table.rows = outcome.table.rows.clone();
        let bytes = table.render(args.format)?;

        let target = args.out.clone().or_else(|| cfg.scenario.output.as_ref().map(|p| cfg.resolve(p)));
        match target {
            Some(path) => {
                output::write_atomic(&path, &bytes)?;
                report.outputs.push(path.display().to_string());
            }
            None => {
                stdout = Some(bytes);
                report.outputs.push("<stdout>".into());
            }
        }
        Ok(outcome)
    })();

    match result {
        Ok(o) => {
            report.warnings = o.warnings;
            report.events = o.events;
            report.failures = o.failures;
            if report.failures.is_empty() {
                report.status = Status::Ok;
                report.exit_code = exit::OK;
            } else {
                report.status = Status::ToleranceFailure;
                report.exit_code = exit::TOLERANCE;
            }
        }
        Err(e) => {
            report.status = Status::Error;
            report.exit_code = e.exit_code();
            report.error = Some(e.to_string());
        }
    }
    report.wall_time_s = start.elapsed().as_secs_f64();
    Execution { report, stdout }
}

/// Parses arguments, runs, and returns the process exit code. Usage errors
/// exit with 2 and still produce a report.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    use std::io::Write;
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return exit::OK;
            }
            let _ = e.print();
            let mut report = RunReport::new("unknown");
            report.status = Status::Error;
            report.exit_code = exit::CONFIG;
            report.error = Some(e.kind().to_string());
            eprintln!("{}", report.to_line());
            return exit::CONFIG;
        }
    };
    let exec = match configure_threads() {
        Ok(()) => execute(&cli.command),
        Err(e) => {
            let mut report = RunReport::new(cli.command.name());
            report.status = Status::Error;
            report.exit_code = e.exit_code();
            report.error = Some(e.to_string());
            Execution { report, stdout: None }
        }
    };
    if let Some(bytes) = &exec.stdout {
        let mut out = std::io::stdout().lock();
        if out.write_all(bytes).and_then(|_| out.flush()).is_err() {
            eprintln!("{}", exec.report.to_line());
            return exit::CONFIG;
        }
    }
    eprintln!("{}", exec.report.to_line());
    exec.report.exit_code
}
