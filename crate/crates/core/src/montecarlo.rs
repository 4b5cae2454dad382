//! Power-versus-M sweeps and 0 dB crossing detection.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::channel::{linear_to_db, ChannelRealization, Scheme, SystemParams};
use crate::error::{Error, Result};
use crate::numerics::RngStream;
use crate::processing::{downlink_normalization, uplink_normalization, LinearProcessing, TermBreakdown};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Link {
    Uplink,
    Downlink,
}

impl Link {
    pub const ALL: [Link; 2] = [Link::Uplink, Link::Downlink];

    pub fn as_str(self) -> &'static str {
        match self {
            Link::Uplink => "uplink",
            Link::Downlink => "downlink",
        }
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Link {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uplink" => Ok(Link::Uplink),
            "downlink" => Ok(Link::Downlink),
            _ => Err(Error::usage_key("links", None, format!("unknown link `{s}`"))),
        }
    }
}

/// Power-table term. `SiTotal` and `TotalIntPlusNoise` are powers of complex
/// sums, not sums of powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Desired,
    InterUser,
    SiDirect,
    SiReflected,
    SiTotal,
    Noise,
    TotalIntPlusNoise,
}

impl Term {
    pub const ALL: [Term; 7] = [
        Term::Desired,
        Term::InterUser,
        Term::SiDirect,
        Term::SiReflected,
        Term::SiTotal,
        Term::Noise,
        Term::TotalIntPlusNoise,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Term::Desired => "desired",
            Term::InterUser => "inter_user",
            Term::SiDirect => "si_direct",
            Term::SiReflected => "si_reflected",
            Term::SiTotal => "si_total",
            Term::Noise => "noise",
            Term::TotalIntPlusNoise => "total_int_plus_noise",
        }
    }

    fn values(self, t: &TermBreakdown) -> Vec<num_complex::Complex64> {
        match self {
            Term::Desired => t.desired.clone(),
            Term::InterUser => t.inter_user.clone(),
            Term::SiDirect => t.si_direct.clone(),
            Term::SiReflected => t.si_reflected.clone(),
            Term::SiTotal => t.si_total(),
            Term::Noise => t.noise.clone(),
            Term::TotalIntPlusNoise => t.interference_plus_noise(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Term::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::usage(format!("unknown term `{s}`")))
    }
}

/// One sweep: fixed parameters, a grid of array sizes, a trial count.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Scenario; `antennas` is replaced by each grid value.
    pub params: SystemParams,
    pub m_values: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
    pub links: Vec<Link>,
    /// Divide uplink MRC terms by `M beta_k` and downlink terms by `rho_k`.
    pub normalize: bool,
}

/// Log-spaced grid from 64 to 1024 (ratio sqrt 2).
pub const DEFAULT_M_GRID: [usize; 9] = [64, 91, 128, 181, 256, 362, 512, 724, 1024];
pub const DEFAULT_TRIALS: usize = 500;

impl SweepConfig {
    pub fn new(params: SystemParams) -> Self {
        Self {
            params,
            m_values: DEFAULT_M_GRID.to_vec(),
            trials: DEFAULT_TRIALS,
            master_seed: 1,
            links: Link::ALL.to_vec(),
            normalize: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.m_values.is_empty() {
            return Err(Error::InvalidParameter("m_values is empty".into()));
        }
        if self.m_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("m_values must be strictly ascending".into()));
        }
        if self.links.is_empty() {
            return Err(Error::InvalidParameter("no links selected".into()));
        }
        for &m in &self.m_values {
            self.params.with_antennas(m).validate()?;
        }
        Ok(())
    }
}

/// One CSV row of the power table.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerRow {
    pub link: Link,
    pub scheme: Scheme,
    pub term: Term,
    pub m: usize,
    pub power_linear: f64,
    /// `10 log10(power_linear)`, `-inf` for zero power.
    pub power_db: f64,
    pub stderr_db: f64,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PowerTable {
    pub rows: Vec<PowerRow>,
}

impl PowerTable {
    /// `(M, power_db)` points for one series, ascending in M.
    pub fn series(&self, link: Link, scheme: Scheme, term: Term) -> Vec<(f64, f64)> {
        let mut pts: Vec<_> = self
            .rows
            .iter()
            .filter(|r| r.link == link && r.scheme == scheme && r.term == term)
            .map(|r| (r.m as f64, r.power_db))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts
    }

    pub fn row(&self, link: Link, scheme: Scheme, term: Term, m: usize) -> Option<&PowerRow> {
        self.rows
            .iter()
            .find(|r| r.link == link && r.scheme == scheme && r.term == term && r.m == m)
    }

    pub fn extend(&mut self, other: PowerTable) {
        self.rows.extend(other.rows);
    }
}

/// Mean-square estimate of one term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermPower {
    pub power_linear: f64,
    pub stderr_db: f64,
}

impl TermPower {
    pub fn power_db(&self) -> f64 {
        power_to_db(self.power_linear)
    }
}

/// Per-term powers at one M for one link.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerReport {
    pub trials: usize,
    terms: Vec<(Term, TermPower)>,
}

impl PowerReport {
    pub fn get(&self, term: Term) -> TermPower {
        self.terms
            .iter()
            .find(|(t, _)| *t == term)
            .map(|(_, p)| *p)
            .expect("every term is estimated")
    }
}

/// `10 log10(p)`, with `-inf` for zero.
pub fn power_to_db(p: f64) -> f64 {
    if p == 0.0 {
        f64::NEG_INFINITY
    } else {
        linear_to_db(p)
    }
}

/// Mean over trials and users of `|term|^2`. The standard error comes from
/// the sample standard deviation of the per-trial means and is mapped to dB
/// to first order: `stderr_db = 10 / ln 10 * stderr / power`.
pub fn estimate_powers(samples: &[TermBreakdown]) -> Result<PowerReport> {
    if samples.is_empty() {
        return Err(Error::usage("estimate_powers needs at least one sample"));
    }
    let n = samples.len();
    let terms = Term::ALL
        .into_iter()
        .map(|term| {
            let per_trial: Vec<f64> = samples
                .iter()
                .map(|s| {
                    let v = term.values(s);
                    v.iter().map(|z| z.norm_sqr()).sum::<f64>() / v.len() as f64
                })
                .collect();
            let mean = per_trial.iter().sum::<f64>() / n as f64;
            let stderr_db = if n > 1 && mean > 0.0 {
                let var = per_trial.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
                let stderr = (var / n as f64).sqrt();
                10.0 / std::f64::consts::LN_10 * stderr / mean
            } else {
                0.0
            };
            (
                term,
                TermPower {
                    power_linear: mean,
                    stderr_db,
                },
            )
        })
        .collect();
    Ok(PowerReport { trials: n, terms })
}

/// Result of [`run_sweep`]: the table plus the singular-draw count per M.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub table: PowerTable,
    pub redraws: Vec<(usize, usize)>,
}

const SWEEP_STREAM_TAG: u64 = 0x53_5745_4550; // "SWEEP"
/// Redraw budget of a single cell before the sweep gives up.
const MAX_CELL_REDRAWS: u64 = 16;

struct CellResult {
    uplink: Option<TermBreakdown>,
    downlink: Option<TermBreakdown>,
    redraws: usize,
}

/// Stream owned by cell `(M, trial)`; `attempt` > 0 selects a redraw.
pub fn cell_stream(master_seed: u64, m: usize, trial: usize, attempt: u64) -> RngStream {
    RngStream::new(master_seed, 0).derive_path(&[SWEEP_STREAM_TAG, m as u64, trial as u64, attempt])
}

fn run_cell(config: &SweepConfig, params: &SystemParams, m: usize, trial: usize) -> Result<CellResult> {
    let want_up = config.links.contains(&Link::Uplink);
    let want_down = config.links.contains(&Link::Downlink);
    let mut attempt = 0;
    let (real, proc) = loop {
        let real = ChannelRealization::sample(params, &cell_stream(config.master_seed, m, trial, attempt), want_up)?;
        match LinearProcessing::new(&real.g, params) {
            Ok(proc) => break (real, proc),
            Err(Error::Singular { .. }) if attempt < MAX_CELL_REDRAWS => attempt += 1,
            Err(Error::Singular { .. }) => {
                return Err(Error::RedrawLimit {
                    m,
                    redraws: attempt as usize,
                    trials: config.trials,
                })
            }
            Err(e) => return Err(e),
        }
    };
    let uplink = if want_up {
        let t = proc.uplink_terms(&real, params)?;
        Some(if config.normalize {
            t.normalized(&uplink_normalization(params))
        } else {
            t
        })
    } else {
        None
    };
    let downlink = if want_down {
        let t = proc.downlink_terms(&real, params)?;
        Some(if config.normalize {
            t.normalized(&downlink_normalization(params)?)
        } else {
            t
        })
    } else {
        None
    };
    Ok(CellResult {
        uplink,
        downlink,
        redraws: attempt as usize,
    })
}

/// Estimates every term power at every grid point.
///
/// Each `(M, trial)` cell draws from its own stream (see [`cell_stream`]), so
/// the table depends only on the configuration, not on scheduling. Cells run
/// on the current rayon pool.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutcome> {
    config.validate()?;
    let cells: Vec<(usize, usize)> = config
        .m_values
        .iter()
        .flat_map(|&m| (0..config.trials).map(move |t| (m, t)))
        .collect();
    let results = cells
        .par_iter()
        .map(|&(m, t)| run_cell(config, &config.params.with_antennas(m), m, t))
        .collect::<Result<Vec<CellResult>>>()?;

    let scheme = config.params.scheme;
    let mut redraws = Vec::with_capacity(config.m_values.len());
    let mut reports: Vec<(Link, usize, PowerReport)> = Vec::new();
    for (&m, chunk) in config.m_values.iter().zip(results.chunks(config.trials)) {
        let count: usize = chunk.iter().map(|c| c.redraws).sum();
        if count * 100 > config.trials {
            return Err(Error::RedrawLimit {
                m,
                redraws: count,
                trials: config.trials,
            });
        }
        redraws.push((m, count));
        for link in Link::ALL.into_iter().filter(|l| config.links.contains(l)) {
            let samples: Vec<TermBreakdown> = chunk
                .iter()
                .filter_map(|c| match link {
                    Link::Uplink => c.uplink.clone(),
                    Link::Downlink => c.downlink.clone(),
                })
                .collect();
            reports.push((link, m, estimate_powers(&samples)?));
        }
    }

    let mut rows = Vec::with_capacity(reports.len() * Term::ALL.len());
    for link in Link::ALL {
        for term in Term::ALL {
            for (_, m, report) in reports.iter().filter(|(l, _, _)| *l == link) {
                let p = report.get(term);
                rows.push(PowerRow {
                    link,
                    scheme,
                    term,
                    m: *m,
                    power_linear: p.power_linear,
                    power_db: p.power_db(),
                    stderr_db: p.stderr_db,
                    trials: report.trials,
                    seed: config.master_seed,
                });
            }
        }
    }
    Ok(SweepOutcome {
        table: PowerTable { rows },
        redraws,
    })
}

/// First downward crossing of `level_db`, interpolated linearly in
/// `(log10 M, dB)`. A point exactly at the level is returned as is.
/// `series` must be sorted by M.
pub fn find_crossing(series: &[(f64, f64)], level_db: f64) -> Option<f64> {
    for (i, &(m, db)) in series.iter().enumerate() {
        if db == level_db {
            return Some(m);
        }
        let Some(&(m1, db1)) = series.get(i + 1) else {
            break;
        };
        if db > level_db && db1 < level_db {
            let (x0, x1) = (m.log10(), m1.log10());
            let frac = if db1.is_finite() { (db - level_db) / (db - db1) } else { 0.0 };
            return Some(10f64.powf(x0 + (x1 - x0) * frac));
        }
    }
    None
}
