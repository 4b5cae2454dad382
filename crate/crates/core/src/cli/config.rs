//! Flat `key=value` configuration files.
//!
//! One assignment per line; `#` starts a comment; blank lines are ignored.
//! Keys:
//!
//! | key | value |
//! |-----|-------|
//! | `M_values` | comma-separated ascending antenna counts |
//! | `K` | user count |
//! | `beta_k` | one value for all users, or `K` comma-separated values |
//! | `beta_si`, `beta_prime` | linear large-scale fading |
//! | `c_direct`, `c_prime` | complex coefficients, e.g. `0.5` or `0.3+0.4i` |
//! | `p_u`, `p_d` | linear powers; `p_u_db`, `p_d_db` take dB |
//! | `scheme` | `zf` or `mrt` |
//! | `trials`, `seed` | integers |
//! | `links` | subset of `uplink,downlink` |
//! | `normalize`, `downlink_si_uses_uplink_power` | `true`/`false` |
//! | `ue_reflected_amplitude_convention` | `sqrt_beta_prime` or `beta_prime` |

use std::collections::BTreeSet;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;

use crate::channel::{db_to_linear, Scheme, SystemParams, UeReflectedAmplitude};
use crate::error::{Error, Result};
use crate::montecarlo::{Link, SweepConfig};

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub m_values: Option<Vec<usize>>,
    pub scheme: Option<Scheme>,
}

/// A fully resolved sweep plus the set of keys the user set explicitly.
/// Presets only fill in keys that are absent from `explicit`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedConfig {
    pub sweep: SweepConfig,
    pub explicit: BTreeSet<String>,
}

impl ResolvedConfig {
    pub fn is_explicit(&self, key: &str) -> bool {
        self.explicit.contains(key)
    }
}

impl Default for ResolvedConfig {
    fn default() -> Self {
        parse_config_str("", &Overrides::default()).expect("defaults are valid")
    }
}

const KEYS: &[&str] = &[
    "M_values",
    "K",
    "beta_k",
    "beta_si",
    "beta_prime",
    "c_direct",
    "c_prime",
    "p_u",
    "p_u_db",
    "p_d",
    "p_d_db",
    "scheme",
    "trials",
    "seed",
    "links",
    "normalize",
    "downlink_si_uses_uplink_power",
    "ue_reflected_amplitude_convention",
];

fn parse_value<T: FromStr>(key: &str, line: usize, raw: &str) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| Error::usage_key(key, Some(line), format!("cannot parse `{}`", raw.trim())))
}

fn parse_list<T: FromStr>(key: &str, line: usize, raw: &str) -> Result<Vec<T>> {
    raw.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_value(key, line, s))
        .collect()
}

/// Parses a comma-separated list of antenna counts.
pub fn parse_m_list(raw: &str) -> Result<Vec<usize>> {
    let v: Vec<usize> = parse_list("M_values", 0, raw).map_err(|_| {
        Error::usage_key("M_values", None, format!("expected comma-separated integers, got `{raw}`"))
    })?;
    Ok(v)
}

/// Reads and resolves a config file (or the defaults when `path` is `None`).
pub fn parse_config(path: Option<&Path>, overrides: &Overrides) -> Result<ResolvedConfig> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?,
        None => String::new(),
    };
    parse_config_str(&text, overrides)
}

/// Resolves config text against the evaluation defaults, then applies
/// `overrides`.
pub fn parse_config_str(text: &str, overrides: &Overrides) -> Result<ResolvedConfig> {
    let mut params = SystemParams::evaluation_defaults(crate::montecarlo::DEFAULT_M_GRID[0]);
    let mut sweep = SweepConfig::new(params.clone());
    let mut explicit = BTreeSet::new();
    let mut beta_k: Option<(Vec<f64>, usize)> = None;
    let mut m_line = None;

    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| Error::Usage {
                key: None,
                line: Some(line),
                message: format!("expected key=value, got `{content}`"),
            })?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(Error::usage_key(key, Some(line), "unknown key"));
        }
        let value = value.trim();
        match key {
            "M_values" => {
                sweep.m_values = parse_list(key, line, value)?;
                m_line = Some(line);
            }
            "K" => params.users = parse_value(key, line, value)?,
            "beta_k" => beta_k = Some((parse_list(key, line, value)?, line)),
            "beta_si" => params.beta_si = parse_value(key, line, value)?,
            "beta_prime" => params.beta_prime = parse_value(key, line, value)?,
            "c_direct" => params.c_direct = parse_value::<Complex64>(key, line, value)?,
            "c_prime" => params.c_prime = parse_value::<Complex64>(key, line, value)?,
            "p_u" => params.p_u = parse_value(key, line, value)?,
            "p_u_db" => params.p_u = db_to_linear(parse_value(key, line, value)?),
            "p_d" => params.p_d = parse_value(key, line, value)?,
            "p_d_db" => params.p_d = db_to_linear(parse_value(key, line, value)?),
            "scheme" => {
                params.scheme = Scheme::from_str(value).map_err(|_| {
                    Error::usage_key(key, Some(line), format!("unknown scheme `{value}`"))
                })?
            }
            "trials" => sweep.trials = parse_value(key, line, value)?,
            "seed" => sweep.master_seed = parse_value(key, line, value)?,
            "links" => {
                sweep.links = parse_list::<String>(key, line, value)?
                    .iter()
                    .map(|s| {
                        s.parse::<Link>()
                            .map_err(|_| Error::usage_key(key, Some(line), format!("unknown link `{s}`")))
                    })
                    .collect::<Result<_>>()?
            }
            "normalize" => sweep.normalize = parse_value(key, line, value)?,
            "downlink_si_uses_uplink_power" => params.downlink_si_uses_uplink_power = parse_value(key, line, value)?,
            "ue_reflected_amplitude_convention" => {
                params.ue_reflected_amplitude = UeReflectedAmplitude::from_str(value)
                    .map_err(|_| Error::usage_key(key, Some(line), format!("unknown convention `{value}`")))?
            }
            _ => unreachable!("key list and match arms agree"),
        }
        // dB spellings count as the linear key for preset purposes.
        explicit.insert(key.trim_end_matches("_db").to_string());
    }

    if let Some(seed) = overrides.seed {
        sweep.master_seed = seed;
        explicit.insert("seed".into());
    }
    if let Some(trials) = overrides.trials {
        sweep.trials = trials;
        explicit.insert("trials".into());
    }
    if let Some(m) = &overrides.m_values {
        sweep.m_values = m.clone();
        m_line = None;
        explicit.insert("M_values".into());
    }
    if let Some(scheme) = overrides.scheme {
        params.scheme = scheme;
        explicit.insert("scheme".into());
    }

    params.beta_k = match beta_k {
        None => vec![crate::channel::DEFAULT_BETA_K; params.users],
        Some((v, _)) if v.len() == 1 => vec![v[0]; params.users],
        Some((v, _)) if v.len() == params.users => v,
        Some((v, line)) => {
            return Err(Error::usage_key(
                "beta_k",
                Some(line),
                format!("{} values given for K={}", v.len(), params.users),
            ))
        }
    };

    if sweep.m_values.is_empty() {
        return Err(Error::usage_key("M_values", m_line, "empty list"));
    }
    if sweep.m_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::usage_key("M_values", m_line, "values must be strictly ascending"));
    }
    if params.users == 0 {
        return Err(Error::usage_key("K", None, "K must be at least 1"));
    }
    if let Some(&m) = sweep.m_values.iter().find(|&&m| m <= params.users) {
        return Err(Error::usage_key(
            "M_values",
            m_line,
            format!("M={m} must exceed K={}", params.users),
        ));
    }
    if sweep.trials == 0 {
        return Err(Error::usage_key("trials", None, "trials must be at least 1"));
    }
    params.antennas = sweep.m_values[0];
    params
        .validate()
        .map_err(|e| Error::usage(e.to_string()))?;
    sweep.params = params;
    Ok(ResolvedConfig { sweep, explicit })
}
