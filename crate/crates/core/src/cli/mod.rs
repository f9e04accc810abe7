//! Batch front end: `casimir <subcommand> --config run.toml`.
//!
//! Each run writes `<task>.csv` or `<task>.json`, a `<task>.dat` plot file
//! when the task has curves, and `manifest.json`. The output directory is
//! `--out`, else `$CASIMIR_OUT_DIR`, else `output_dir` from the config,
//! else the current directory.
//!
//! Exit status: 0 on success, 1 for invalid input, 2 when the numerics fail
//! to converge.

pub mod config;
pub mod output;
pub mod tasks;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use config::{Format, RunConfig, Task};
pub use output::{emit_plotdata, write_csv, write_json, Manifest, Report};
pub use tasks::{execute, Outcome};

use crate::error::{Error, Result};

pub const OUT_DIR_ENV: &str = "CASIMIR_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "casimir", version, about = "Casimir energy, stress and fluctuation spectra of planar stacks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Run description (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Relative tolerance of all integrals and series.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Run the task named in the config.
    Compute,
    /// Run the config's `[sweep]`.
    Sweep,
    /// Run the config's `[spectra]`.
    Spectra,
    /// Check every material for passivity and causality.
    ValidateMaterial,
    /// Compare the main pipeline with the independent references.
    Oracle,
}

impl Command {
    fn task(&self) -> Option<Task> {
        match self {
            Command::Compute => None,
            Command::Sweep => Some(Task::Sweep),
            Command::Spectra => Some(Task::Spectra),
            Command::ValidateMaterial => Some(Task::Validate),
            Command::Oracle => Some(Task::OracleCompare),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        2
    } else {
        1
    }
}

/// Runs a parsed command line and returns the files written.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>> {
    let path = cli.config.as_deref().ok_or_else(|| Error::Config("--config: a run description is required".into()))?;
    let bytes = std::fs::read(path).map_err(|e| Error::Config(format!("--config {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Error::Config(format!("--config {}: not UTF-8", path.display())))?;
    let mut raw: toml::Table = toml::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
    if let Some(task) = cli.command.task() {
        raw.insert("task".into(), toml::Value::String(task.name().into()));
    }
    if let Some(tol) = cli.tolerance {
        let entry = raw.entry("tolerances").or_insert_with(|| toml::Value::Table(toml::Table::new()));
        let toml::Value::Table(t) = entry else {
            return Err(Error::Config("tolerances: must be a table".into()));
        };
        t.insert("relative".into(), toml::Value::Float(tol));
    }
    let config = RunConfig::from_table(raw.clone())?;
    let base = path.parent().unwrap_or(Path::new("."));
    let format = cli.format.unwrap_or(config.format);
    let out = cli
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .or_else(|| config.output_dir.as_ref().map(|d| base.join(d)))
        .unwrap_or_else(|| PathBuf::from("."));
    let settings = config.tolerances.settings();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("--threads: {e}")))?;
    let outcome = pool.install(|| execute(&config, &raw, base, &settings))?;
    let manifest = Manifest::new(config.task.name(), &bytes, config.tolerances.relative, settings);
    let written = output::write_all(&out, &outcome.report, format, manifest)?;
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(written),
    }
}

/// Parses `args` (program name first), runs, and returns the exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn main() -> i32 {
    main_with(std::env::args_os())
}
