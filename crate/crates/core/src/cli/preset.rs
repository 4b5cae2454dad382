//! Named experiment presets.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;

use super::config::ResolvedConfig;
use super::csv::{write_csv, CrossingRow, Crossings, CrossingsByTerm, DecaySummary};
use super::manifest::RunManifest;
use crate::asymptotics::{
    lemma1_decay_sweep, orthogonality_sweep, projection_decay_sweep, proposition_convergence, BKind, DecaySeries,
    PropositionKind, QuadraticPair, SiComponent,
};
use crate::channel::{Scheme, SystemParams};
use crate::error::{Error, Result};
use crate::montecarlo::{find_crossing, run_sweep, Link, PowerTable, SweepConfig, Term};
use crate::numerics::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Uplink powers for `c in {0.5, 0.9}`.
    Fig2Uplink,
    /// Downlink powers for `c' in {0.6, 0.7}`.
    Fig2Downlink,
    Lemma1,
    Theorem1,
    Propositions,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Fig2Uplink,
        Preset::Fig2Downlink,
        Preset::Lemma1,
        Preset::Theorem1,
        Preset::Propositions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2Uplink => "fig2-uplink",
            Preset::Fig2Downlink => "fig2-downlink",
            Preset::Lemma1 => "lemma1",
            Preset::Theorem1 => "theorem1",
            Preset::Propositions => "propositions",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            let names: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
            Error::usage(format!("unknown preset `{s}` (expected one of {})", names.join(", ")))
        })
    }
}

/// Direct-path coefficients swept by the uplink preset. The first is paired
/// with the SI crossing, the second with the total interference-plus-noise
/// crossing.
pub const UPLINK_C_VALUES: [f64; 2] = [0.5, 0.9];
/// User-side coupling coefficients swept by the downlink preset, paired the
/// same way.
pub const DOWNLINK_C_VALUES: [f64; 2] = [0.6, 0.7];
/// Grid used by the convergence presets unless `M_values` is set.
pub const DECAY_M_GRID: [usize; 3] = [64, 256, 1024];
/// Coefficient used for the direct path in the `theorem1` preset unless
/// `c_direct` is set.
pub const THEOREM1_C_DIRECT: f64 = 0.9;
/// Noise-floor level for crossing detection.
pub const CROSSING_LEVEL_DB: f64 = 0.0;

/// Files written and crossings found by a preset run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PresetReport {
    pub files: Vec<PathBuf>,
    pub crossings: Vec<CrossingRow>,
    pub decay: Vec<DecaySeries>,
    pub tables: Vec<(f64, PowerTable)>,
}

fn schemes(cfg: &ResolvedConfig) -> Vec<Scheme> {
    if cfg.is_explicit("scheme") {
        vec![cfg.sweep.params.scheme]
    } else {
        Scheme::ALL.to_vec()
    }
}

fn ensure_dir(out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))
}

fn decay_config(cfg: &ResolvedConfig) -> SweepConfig {
    let mut sweep = cfg.sweep.clone();
    if !cfg.is_explicit("M_values") {
        sweep.m_values = DECAY_M_GRID.to_vec();
    }
    sweep.params.antennas = sweep.m_values[0];
    sweep
}

fn c_label(c: f64) -> String {
    format!("{c}")
}

/// Runs one preset into `out_dir`: data CSVs, `manifest.txt`, and for the
/// power presets `crossings.csv` plus `crossings_by_term.csv`.
pub fn run_preset(preset: Preset, cfg: &ResolvedConfig, out_dir: &Path, workers: usize) -> Result<PresetReport> {
    ensure_dir(out_dir)?;
    match preset {
        Preset::Fig2Uplink => run_power_preset(preset, Link::Uplink, cfg, out_dir, workers),
        Preset::Fig2Downlink => run_power_preset(preset, Link::Downlink, cfg, out_dir, workers),
        Preset::Lemma1 => {
            let sweep = decay_config(cfg);
            let root = RngStream::new(sweep.master_seed, 0).derive(1);
            let kinds = [
                BKind::Identity,
                BKind::DeterministicAllEqual(Complex64::new(1.0, 0.0)),
                BKind::RandomIid(1.0),
            ];
            let mut series = Vec::new();
            for (i, kind) in kinds.into_iter().enumerate() {
                for (j, pair) in [QuadraticPair::XBxConj, QuadraticPair::XBy].into_iter().enumerate() {
                    let rng = root.derive((i * 2 + j) as u64);
                    series.push(lemma1_decay_sweep(kind, pair, &sweep.m_values, sweep.trials, &rng)?);
                }
            }
            write_decay(preset, &sweep, cfg.is_explicit("scheme"), series, out_dir, workers)
        }
        Preset::Theorem1 => {
            let mut sweep = decay_config(cfg);
            if !cfg.is_explicit("c_direct") {
                sweep.params.c_direct = Complex64::new(THEOREM1_C_DIRECT, 0.0);
            }
            let root = RngStream::new(sweep.master_seed, 0).derive(2);
            let p = &sweep.params;
            let series = vec![
                projection_decay_sweep(SiComponent::Direct, p, &sweep.m_values, sweep.trials, &root.derive(0))?,
                projection_decay_sweep(SiComponent::Reflected, p, &sweep.m_values, sweep.trials, &root.derive(1))?,
                orthogonality_sweep(p, &sweep.m_values, sweep.trials, &root.derive(2))?,
            ];
            write_decay(preset, &sweep, cfg.is_explicit("scheme"), series, out_dir, workers)
        }
        Preset::Propositions => {
            let sweep = decay_config(cfg);
            let root = RngStream::new(sweep.master_seed, 0).derive(3);
            let mut series = Vec::new();
            for scheme in schemes(cfg) {
                let p = sweep.params.with_scheme(scheme);
                for kind in [PropositionKind::UplinkP1, PropositionKind::DownlinkP2] {
                    let rng = root.derive_path(&[scheme as u64, kind as u64]);
                    series.push(proposition_convergence(kind, &p, &sweep.m_values, sweep.trials, &rng)?);
                }
            }
            write_decay(preset, &sweep, cfg.is_explicit("scheme"), series, out_dir, workers)
        }
    }
}

fn write_decay(
    preset: Preset,
    sweep: &SweepConfig,
    scheme_fixed: bool,
    series: Vec<DecaySeries>,
    out_dir: &Path,
    workers: usize,
) -> Result<PresetReport> {
    let data = out_dir.join(format!("{}.csv", preset.name()));
    let summary = out_dir.join(format!("{}_summary.csv", preset.name()));
    write_csv(&series[..], &data)?;
    write_csv(&DecaySummary(&series), &summary)?;
    let mut manifest = RunManifest::new(preset.name(), sweep, workers);
    manifest.scheme_fixed = scheme_fixed;
    manifest.note("statistics", series.iter().map(|s| s.statistic.as_str()).collect::<Vec<_>>().join(","));
    manifest.note("files", format!("{},{}", file_name(&data), file_name(&summary)));
    let manifest_path = out_dir.join("manifest.txt");
    manifest.write(&manifest_path)?;
    Ok(PresetReport {
        files: vec![data, summary, manifest_path],
        decay: series,
        ..Default::default()
    })
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn set_c(params: &mut SystemParams, link: Link, c: f64) {
    match link {
        Link::Uplink => params.c_direct = Complex64::new(c, 0.0),
        Link::Downlink => params.c_prime = Complex64::new(c, 0.0),
    }
}

/// Crossings of `si_total` and `total_int_plus_noise` for one table.
pub fn table_crossings(table: &PowerTable, link: Link, scheme: Scheme, c_value: f64) -> Vec<CrossingRow> {
    [Term::SiTotal, Term::TotalIntPlusNoise]
        .into_iter()
        .map(|term| CrossingRow {
            link,
            scheme,
            term,
            c_value,
            level_db: CROSSING_LEVEL_DB,
            m_star: find_crossing(&table.series(link, scheme, term), CROSSING_LEVEL_DB),
        })
        .collect()
}

fn run_power_preset(
    preset: Preset,
    link: Link,
    cfg: &ResolvedConfig,
    out_dir: &Path,
    workers: usize,
) -> Result<PresetReport> {
    let c_values = match link {
        Link::Uplink => UPLINK_C_VALUES,
        Link::Downlink => DOWNLINK_C_VALUES,
    };
    let mut base = cfg.sweep.clone();
    base.links = vec![link];
    let mut manifest = RunManifest::new(preset.name(), &base, workers);
    manifest.scheme_fixed = cfg.is_explicit("scheme");
    manifest.note("swept_c", c_values.map(c_label).join(","));
    manifest.note("schemes", schemes(cfg).iter().map(|s| s.as_str()).collect::<Vec<_>>().join(","));

    let mut report = PresetReport::default();
    let mut all_crossings = Vec::new();
    for (ci, &c) in c_values.iter().enumerate() {
        let mut table = PowerTable::default();
        for scheme in schemes(cfg) {
            let mut sweep = base.clone();
            sweep.params.scheme = scheme;
            set_c(&mut sweep.params, link, c);
            let outcome = run_sweep(&sweep)?;
            let total: usize = outcome.redraws.iter().map(|(_, n)| n).sum();
            manifest.note(format!("redraws_{}_c{}", scheme, c_label(c)), total);
            let crossings = table_crossings(&outcome.table, link, scheme, c);
            // First c value reports the SI crossing, second the total.
            let headline = if ci == 0 { Term::SiTotal } else { Term::TotalIntPlusNoise };
            report
                .crossings
                .extend(crossings.iter().filter(|r| r.term == headline).cloned());
            all_crossings.extend(crossings);
            table.extend(outcome.table);
        }
        let path = out_dir.join(format!("{}_c{}.csv", preset.name().replace('-', "_"), c_label(c)));
        write_csv(&table, &path)?;
        report.files.push(path);
        report.tables.push((c, table));
    }

    let crossings_path = out_dir.join("crossings.csv");
    write_csv(&Crossings(&report.crossings), &crossings_path)?;
    let by_term_path = out_dir.join("crossings_by_term.csv");
    write_csv(&CrossingsByTerm(&all_crossings), &by_term_path)?;
    report.files.push(crossings_path);
    report.files.push(by_term_path);

    manifest.note(
        "files",
        report.files.iter().map(|p| file_name(p)).collect::<Vec<_>>().join(","),
    );
    let manifest_path = out_dir.join("manifest.txt");
    manifest.write(&manifest_path)?;
    report.files.push(manifest_path);
    Ok(report)
}

/// Sweep without a preset: writes `sweep.csv`, crossings for the configured
/// coefficients, and the manifest.
pub fn run_custom(cfg: &ResolvedConfig, out_dir: &Path, workers: usize) -> Result<PresetReport> {
    ensure_dir(out_dir)?;
    let sweep = &cfg.sweep;
    let outcome = run_sweep(sweep)?;
    let path = out_dir.join("sweep.csv");
    write_csv(&outcome.table, &path)?;

    let scheme = sweep.params.scheme;
    let mut crossings = Vec::new();
    for &link in &sweep.links {
        let c = match link {
            Link::Uplink => sweep.params.c_direct.re,
            Link::Downlink => sweep.params.c_prime.re,
        };
        crossings.extend(table_crossings(&outcome.table, link, scheme, c));
    }
    let crossings_path = out_dir.join("crossings.csv");
    let headline: Vec<CrossingRow> = crossings.iter().filter(|r| r.term == Term::SiTotal).cloned().collect();
    write_csv(&Crossings(&headline), &crossings_path)?;
    let by_term_path = out_dir.join("crossings_by_term.csv");
    write_csv(&CrossingsByTerm(&crossings), &by_term_path)?;

    let mut manifest = RunManifest::new("custom", sweep, workers);
    let total: usize = outcome.redraws.iter().map(|(_, n)| n).sum();
    manifest.note("redraws", total);
    manifest.note("files", "sweep.csv,crossings.csv,crossings_by_term.csv");
    let manifest_path = out_dir.join("manifest.txt");
    manifest.write(&manifest_path)?;
    Ok(PresetReport {
        files: vec![path, crossings_path, by_term_path, manifest_path],
        crossings: headline,
        tables: vec![(f64::NAN, outcome.table)],
        ..Default::default()
    })
}
