//! `k3lab`: lattice certificates and finite-field K3 constructions from the
//! command line. JSON goes to stdout, a short summary to stderr.
//!
//! Exit codes: 0 success, 1 malformed input or usage error, 2 certificate
//! FAIL or replay mismatch, 3 retry exhaustion.

mod construct;
mod lattice;

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use k3lab::constructions::ConstructionConfig;
use serde::Deserialize;

#[derive(Parser, Debug)]
#[command(name = "k3lab", version, about = "K3 lattice certificates and Grassmannian constructions")]
struct Cli {
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true, env = "K3LAB_THREADS")]
    threads: Option<usize>,
    /// JSON file overriding the built-in defaults
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lattice arithmetic and certificates
    Lattice {
        #[command(subcommand)]
        op: lattice::LatticeCmd,
    },
    /// Run a construction pipeline and emit its report
    Construct(construct::ConstructArgs),
    /// Replay a report from its seed and compare
    Verify(construct::VerifyArgs),
    /// Summarize a stored report
    Report(construct::ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Malformed = 1,
    Fail = 2,
    Exhausted = 3,
}

impl From<Exit> for ExitCode {
    fn from(e: Exit) -> Self {
        ExitCode::from(e as u8)
    }
}

/// An error that ends the command with a given exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: Exit,
    pub message: String,
}

impl Failure {
    pub fn malformed(msg: impl Display) -> Self {
        Failure { code: Exit::Malformed, message: msg.to_string() }
    }
}

pub type CmdResult = Result<Exit, Failure>;

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u32,
    #[serde(default = "one")]
    pub k: u32,
}

fn one() -> u32 {
    1
}

/// Defaults that a `--config` file may override; command-line flags win.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub field: Option<FieldSpec>,
    pub seed: Option<u64>,
    pub retry_bound: Option<usize>,
    pub point_cap: Option<u128>,
    pub dmax: Option<usize>,
    pub output: Option<PathBuf>,
}

impl Config {
    fn load(path: &Path) -> Result<Config, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))?;
        let cfg: Config =
            serde_json::from_str(&text).map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))?;
        if cfg.point_cap == Some(0) || cfg.retry_bound == Some(0) {
            return Err(Failure::malformed("caps and retry bound must be positive"));
        }
        if cfg.dmax.is_some_and(|d| d < 2) {
            return Err(Failure::malformed("dmax must be at least 2"));
        }
        if let Some(f) = cfg.field {
            k3lab::exactlin::FiniteField::new(f.p, f.k).map_err(Failure::malformed)?;
        }
        Ok(cfg)
    }

    pub fn construction(&self) -> ConstructionConfig {
        let d = ConstructionConfig::default();
        ConstructionConfig {
            retry_bound: self.retry_bound.unwrap_or(d.retry_bound),
            point_cap: self.point_cap.unwrap_or(d.point_cap),
            dmax: self.dmax.unwrap_or(d.dmax),
        }
    }
}

/// Pretty JSON on stdout.
pub fn emit<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("output serializes"));
}

fn run(cli: Cli) -> CmdResult {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::malformed("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(Failure::malformed)?;
    }
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    match cli.command {
        Command::Lattice { op } => lattice::run(op),
        Command::Construct(args) => construct::construct(args, &config),
        Command::Verify(args) => construct::verify(args, &config),
        Command::Report(args) => construct::report(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Exit::Malformed } else { Exit::Ok };
            let _ = e.print();
            return code.into();
        }
    };
    match run(cli) {
        Ok(code) => code.into(),
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code.into()
        }
    }
}
