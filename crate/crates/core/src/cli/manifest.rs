use std::fmt::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::error::{Error, Result};
use crate::montecarlo::SweepConfig;

/// Fully resolved description of one run, written as `manifest.txt`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub preset: String,
    pub version: String,
    pub timestamp_unix: u64,
    pub workers: usize,
    pub config: SweepConfig,
    /// False when a preset ran every scheme; the `scheme` line is then
    /// commented out so re-running from the manifest does the same.
    pub scheme_fixed: bool,
    /// Preset-specific facts (swept values, output files, redraw counts).
    pub notes: Vec<(String, String)>,
}

impl RunManifest {
    pub fn new(preset: &str, config: &SweepConfig, workers: usize) -> Self {
        Self {
            preset: preset.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            workers,
            config: config.clone(),
            scheme_fixed: true,
            notes: Vec::new(),
        }
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl ToString) {
        self.notes.push((key.into(), value.to_string()));
    }

    /// `key=value` lines. Run metadata and notes are written as `# key=value`
    /// comments, so the whole file is a valid `--config` input that
    /// reproduces the run.
    pub fn to_text(&self) -> String {
        let c = &self.config;
        let p = &c.params;
        let join = |v: &[f64]| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",");
        let mut s = String::new();
        let _ = writeln!(s, "# run manifest");
        let _ = writeln!(s, "# preset={}", self.preset);
        let _ = writeln!(s, "# version={}", self.version);
        let _ = writeln!(s, "# timestamp_unix={}", self.timestamp_unix);
        let _ = writeln!(s, "# workers={}", self.workers);
        let _ = writeln!(s, "seed={}", c.master_seed);
        let _ = writeln!(s, "trials={}", c.trials);
        let _ = writeln!(
            s,
            "M_values={}",
            c.m_values.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")
        );
        let _ = writeln!(
            s,
            "links={}",
            c.links.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(",")
        );
        let _ = writeln!(s, "normalize={}", c.normalize);
        let _ = writeln!(s, "K={}", p.users);
        let _ = writeln!(s, "beta_k={}", join(&p.beta_k));
        let _ = writeln!(s, "beta_si={}", p.beta_si);
        let _ = writeln!(s, "beta_prime={}", p.beta_prime);
        let _ = writeln!(s, "c_direct={}", p.c_direct);
        let _ = writeln!(s, "c_prime={}", p.c_prime);
        let _ = writeln!(s, "p_u={}", p.p_u);
        let _ = writeln!(s, "p_d={}", p.p_d);
        let comment = if self.scheme_fixed { "" } else { "# " };
        let _ = writeln!(s, "{comment}scheme={}", p.scheme);
        let _ = writeln!(s, "downlink_si_uses_uplink_power={}", p.downlink_si_uses_uplink_power);
        let _ = writeln!(s, "ue_reflected_amplitude_convention={}", p.ue_reflected_amplitude.as_str());
        for (k, v) in &self.notes {
            let _ = writeln!(s, "# {k}={v}");
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}
