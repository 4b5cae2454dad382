//! Command-line front end: flags, presets, CSV and manifest output.
//!
//! Exit codes: 0 on success, 64 for usage errors (bad flags, config keys or
//! preset names), 2 for I/O failures, 1 for anything else.

pub mod config;
pub mod csv;
pub mod manifest;
pub mod preset;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

use crate::channel::Scheme;
use crate::error::{Error, Result};
pub use config::{parse_config, parse_config_str, Overrides, ResolvedConfig};
pub use manifest::RunManifest;
pub use preset::{run_custom, run_preset, Preset, PresetReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Full-duplex massive MIMO self-interference simulator.
#[derive(Debug, Parser)]
#[command(name = "fdsim", version)]
pub struct Args {
    /// fig2-uplink | fig2-downlink | lemma1 | theorem1 | propositions
    #[arg(long)]
    pub preset: Option<String>,
    /// Flat key=value config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Comma-separated ascending antenna counts.
    #[arg(long = "m-list")]
    pub m_list: Option<String>,
    /// zf | mrt
    #[arg(long)]
    pub scheme: Option<String>,
    /// Worker threads (0: one per core). Output does not depend on it.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

impl Args {
    pub fn overrides(&self) -> Result<Overrides> {
        Ok(Overrides {
            seed: self.seed,
            trials: self.trials,
            m_values: self.m_list.as_deref().map(config::parse_m_list).transpose()?,
            scheme: self.scheme.as_deref().map(str::parse::<Scheme>).transpose()?,
        })
    }
}

/// Runs `work` on a dedicated pool of `workers` threads (0: rayon default).
pub fn with_workers<T: Send>(workers: usize, work: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(work))
}

/// Executes parsed arguments.
pub fn execute(args: &Args) -> Result<PresetReport> {
    let preset = args.preset.as_deref().map(str::parse::<Preset>).transpose()?;
    let cfg = parse_config(args.config.as_deref(), &args.overrides()?)?;
    with_workers(args.workers, || match preset {
        Some(p) => run_preset(p, &cfg, &args.out, args.workers),
        None => run_custom(&cfg, &args.out, args.workers),
    })?
}

/// Entry point shared by the binary: parses `argv`, runs, reports, and
/// returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(&args) {
        Ok(report) => {
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            for c in &report.crossings {
                let m = c.m_star.map_or_else(|| "not found".to_string(), |m| format!("{m:.1}"));
                println!("{} {} {} c={} crosses {} dB at M* = {m}", c.link, c.scheme, c.term, c.c_value, c.level_db);
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("fdsim: {e}");
            e.exit_code()
        }
    }
}
