//! CSV output.
//!
//! All files are UTF-8 with LF line endings and no quoting (no field
//! contains a comma). Reals are written as `{:.16e}` (17 significant digits,
//! lossless for f64); zero power in dB is the literal token `-inf` and a
//! missing crossing is `nan`.

use std::fmt::Write as _;
use std::path::Path;

use crate::asymptotics::DecaySeries;
use crate::channel::Scheme;
use crate::error::{Error, Result};
use crate::montecarlo::{Link, PowerRow, PowerTable, Term};

pub const POWER_TABLE_HEADER: &str = "link,scheme,term,M,power_linear,power_db,stderr_db,trials,seed";
pub const DECAY_HEADER: &str = "statistic,M,trial,magnitude";
pub const DECAY_SUMMARY_HEADER: &str = "statistic,M,trials,median,lower_quartile,upper_quartile";
pub const CROSSINGS_HEADER: &str = "link,scheme,c_value,level_db,m_star";
pub const CROSSINGS_BY_TERM_HEADER: &str = "link,scheme,term,c_value,level_db,m_star";

/// Formats a real for CSV output.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else {
        format!("{x:.16e}")
    }
}

/// Anything that can be written as one CSV file.
pub trait CsvTable {
    fn header(&self) -> &'static str;
    fn write_rows(&self, out: &mut String);
}

impl CsvTable for PowerTable {
    fn header(&self) -> &'static str {
        POWER_TABLE_HEADER
    }

    fn write_rows(&self, out: &mut String) {
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.link,
                r.scheme,
                r.term,
                r.m,
                format_real(r.power_linear),
                format_real(r.power_db),
                format_real(r.stderr_db),
                r.trials,
                r.seed
            );
        }
    }
}

impl CsvTable for [DecaySeries] {
    fn header(&self) -> &'static str {
        DECAY_HEADER
    }

    fn write_rows(&self, out: &mut String) {
        for s in self {
            for (m, row) in s.m_values().iter().zip(s.stats()) {
                for (t, v) in row.iter().enumerate() {
                    let _ = writeln!(out, "{},{m},{t},{}", s.statistic, format_real(*v));
                }
            }
        }
    }
}

/// Per-M quartile summary of decay series.
pub struct DecaySummary<'a>(pub &'a [DecaySeries]);

impl CsvTable for DecaySummary<'_> {
    fn header(&self) -> &'static str {
        DECAY_SUMMARY_HEADER
    }

    fn write_rows(&self, out: &mut String) {
        for s in self.0 {
            let (med, lo, hi) = (s.medians(), s.lower_quartiles(), s.upper_quartiles());
            for (i, m) in s.m_values().iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{m},{},{},{},{}",
                    s.statistic,
                    s.stats()[i].len(),
                    format_real(med[i]),
                    format_real(lo[i]),
                    format_real(hi[i])
                );
            }
        }
    }
}

/// One 0 dB crossing result.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingRow {
    pub link: Link,
    pub scheme: Scheme,
    pub term: Term,
    pub c_value: f64,
    pub level_db: f64,
    /// `None` when the series never crosses inside the grid.
    pub m_star: Option<f64>,
}

/// `crossings.csv`: one row per reported crossing, without a term column.
pub struct Crossings<'a>(pub &'a [CrossingRow]);

/// `crossings_by_term.csv`: every computed crossing, with its term.
pub struct CrossingsByTerm<'a>(pub &'a [CrossingRow]);

impl CsvTable for Crossings<'_> {
    fn header(&self) -> &'static str {
        CROSSINGS_HEADER
    }

    fn write_rows(&self, out: &mut String) {
        for r in self.0 {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.link,
                r.scheme,
                r.c_value,
                r.level_db,
                format_real(r.m_star.unwrap_or(f64::NAN))
            );
        }
    }
}

impl CsvTable for CrossingsByTerm<'_> {
    fn header(&self) -> &'static str {
        CROSSINGS_BY_TERM_HEADER
    }

    fn write_rows(&self, out: &mut String) {
        for r in self.0 {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.link,
                r.scheme,
                r.term,
                r.c_value,
                r.level_db,
                format_real(r.m_star.unwrap_or(f64::NAN))
            );
        }
    }
}

/// Renders a table to CSV text.
pub fn to_csv_string<T: CsvTable + ?Sized>(table: &T) -> String {
    let mut out = String::new();
    out.push_str(table.header());
    out.push('\n');
    table.write_rows(&mut out);
    out
}

/// Writes a table to `path`. An empty table yields a header-only file.
pub fn write_csv<T: CsvTable + ?Sized>(table: &T, path: &Path) -> Result<()> {
    std::fs::write(path, to_csv_string(table)).map_err(|e| Error::io(path, e))
}

fn csv_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Csv {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(path: &Path, line: usize, name: &str, raw: &str) -> Result<T> {
    raw.parse()
        .map_err(|_| csv_err(path, line, format!("bad {name} `{raw}`")))
}

/// Parses a power-table CSV written by [`write_csv`].
pub fn read_power_table(path: &Path) -> Result<PowerTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_power_table(&text, path)
}

pub fn parse_power_table(text: &str, path: &Path) -> Result<PowerTable> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == POWER_TABLE_HEADER => {}
        _ => return Err(csv_err(path, 1, "missing or wrong header")),
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let ln = i + 2;
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 9 {
            return Err(csv_err(path, ln, format!("expected 9 fields, got {}", f.len())));
        }
        rows.push(PowerRow {
            link: f[0].parse().map_err(|_| csv_err(path, ln, "bad link"))?,
            scheme: f[1].parse().map_err(|_| csv_err(path, ln, "bad scheme"))?,
            term: f[2].parse().map_err(|_| csv_err(path, ln, "bad term"))?,
            m: field(path, ln, "M", f[3])?,
            power_linear: field(path, ln, "power_linear", f[4])?,
            power_db: field(path, ln, "power_db", f[5])?,
            stderr_db: field(path, ln, "stderr_db", f[6])?,
            trials: field(path, ln, "trials", f[7])?,
            seed: field(path, ln, "seed", f[8])?,
        });
    }
    Ok(PowerTable { rows })
}

/// Parses a raw decay CSV back into series, preserving file order.
pub fn parse_decay_series(text: &str, path: &Path) -> Result<Vec<DecaySeries>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == DECAY_HEADER => {}
        _ => return Err(csv_err(path, 1, "missing or wrong header")),
    }
    // (statistic, [(M, values)])
    let mut acc: Vec<(String, Vec<(usize, Vec<f64>)>)> = Vec::new();
    for (i, line) in lines.enumerate() {
        let ln = i + 2;
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 4 {
            return Err(csv_err(path, ln, format!("expected 4 fields, got {}", f.len())));
        }
        let m: usize = field(path, ln, "M", f[1])?;
        let v: f64 = field(path, ln, "magnitude", f[3])?;
        if acc.last().map(|(s, _)| s.as_str()) != Some(f[0]) {
            acc.push((f[0].to_string(), Vec::new()));
        }
        let rows = &mut acc.last_mut().expect("pushed above").1;
        match rows.last_mut() {
            Some((last_m, vals)) if *last_m == m => vals.push(v),
            _ => rows.push((m, vec![v])),
        }
    }
    acc.into_iter()
        .map(|(name, rows)| {
            let (ms, stats) = rows.into_iter().unzip();
            DecaySeries::new(name, ms, stats)
        })
        .collect()
}
