//! System parameters and random draws of the channel model.
//!
//! The user channel is `G = H D^{1/2}` with `H` i.i.d. CN(0, 1) and
//! `D = diag(beta_k)`. The base-station SI channel splits into a
//! deterministic direct-path matrix with every entry equal to `c_direct` and
//! a reflected-path matrix `H_s * sqrt(beta_si)`. The user-side SI matrix
//! `G'_s` is `K x K` with entries `c_prime + a h'` where `a` follows
//! [`UeReflectedAmplitude`].

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{cscg_sample, ComplexMatrix, RngStream};

/// Linear processing pair used at the base station.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// Zero-forcing precoding and zero-forcing reception.
    Zf,
    /// Maximum-ratio transmission and maximum-ratio combining.
    MrtMrc,
}

impl Scheme {
    pub const ALL: [Scheme; 2] = [Scheme::Zf, Scheme::MrtMrc];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Zf => "ZF",
            Scheme::MrtMrc => "MRT_MRC",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zf" => Ok(Scheme::Zf),
            "mrt" | "mrc" | "mrt_mrc" | "mrt/mrc" => Ok(Scheme::MrtMrc),
            _ => Err(Error::usage_key("scheme", None, format!("unknown scheme `{s}` (expected zf|mrt)"))),
        }
    }
}

/// Amplitude applied to the small-scale term of the user-side SI channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UeReflectedAmplitude {
    /// `a = sqrt(beta_prime)`, so each entry has reflected variance `beta_prime`.
    #[default]
    SqrtBetaPrime,
    /// `a = beta_prime`, entry variance `beta_prime^2`.
    BetaPrime,
}

impl UeReflectedAmplitude {
    pub fn as_str(self) -> &'static str {
        match self {
            UeReflectedAmplitude::SqrtBetaPrime => "sqrt_beta_prime",
            UeReflectedAmplitude::BetaPrime => "beta_prime",
        }
    }
}

impl FromStr for UeReflectedAmplitude {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sqrt_beta_prime" => Ok(Self::SqrtBetaPrime),
            "beta_prime" => Ok(Self::BetaPrime),
            _ => Err(Error::usage_key(
                "ue_reflected_amplitude_convention",
                None,
                format!("unknown convention `{s}` (expected sqrt_beta_prime|beta_prime)"),
            )),
        }
    }
}

/// All scenario constants. Powers and fading coefficients are linear.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// Base-station antenna count `M`.
    pub antennas: usize,
    /// Single-antenna user count `K`.
    pub users: usize,
    pub p_u: f64,
    pub p_d: f64,
    /// Per-user large-scale fading, length `K`.
    pub beta_k: Vec<f64>,
    /// Reflected-path SI large-scale fading at the base station.
    pub beta_si: f64,
    /// Direct-path SI coefficient shared by every base-station antenna pair.
    pub c_direct: Complex64,
    /// Direct-path SI coefficient between user terminals.
    pub c_prime: Complex64,
    /// Reflected-path SI large-scale fading between user terminals.
    pub beta_prime: f64,
    pub scheme: Scheme,
    /// Scale the user-side SI by `sqrt(p_u)` (off: unit scaling).
    pub downlink_si_uses_uplink_power: bool,
    pub ue_reflected_amplitude: UeReflectedAmplitude,
}

pub const DEFAULT_USERS: usize = 4;
pub const DEFAULT_BETA_K: f64 = 0.1;
pub const DEFAULT_BETA_SI: f64 = 0.8;
pub const DEFAULT_BETA_PRIME: f64 = 0.7;
pub const DEFAULT_P_U_DB: f64 = 10.0;
pub const DEFAULT_P_D_DB: f64 = 13.0;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

impl SystemParams {
    /// The evaluation setup: `K = 4`, `beta_k = 0.1`, `beta = 0.8`,
    /// `beta' = 0.7`, `p_u = 10 dB`, `p_d = 13 dB`, ZF, `c = 0.5`, `c' = 0.6`.
    pub fn evaluation_defaults(antennas: usize) -> Self {
        Self {
            antennas,
            users: DEFAULT_USERS,
            p_u: db_to_linear(DEFAULT_P_U_DB),
            p_d: db_to_linear(DEFAULT_P_D_DB),
            beta_k: vec![DEFAULT_BETA_K; DEFAULT_USERS],
            beta_si: DEFAULT_BETA_SI,
            c_direct: Complex64::new(0.5, 0.0),
            c_prime: Complex64::new(0.6, 0.0),
            beta_prime: DEFAULT_BETA_PRIME,
            scheme: Scheme::Zf,
            downlink_si_uses_uplink_power: false,
            ue_reflected_amplitude: UeReflectedAmplitude::SqrtBetaPrime,
        }
    }

    pub fn with_antennas(&self, antennas: usize) -> Self {
        Self {
            antennas,
            ..self.clone()
        }
    }

    pub fn with_scheme(&self, scheme: Scheme) -> Self {
        Self {
            scheme,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.users == 0 {
            return bad("K must be at least 1".into());
        }
        if self.antennas <= self.users {
            return bad(format!("M={} must exceed K={}", self.antennas, self.users));
        }
        if self.beta_k.len() != self.users {
            return bad(format!("beta_k has {} entries, expected K={}", self.beta_k.len(), self.users));
        }
        // p_u/p_d = 0 is accepted to switch a link off; negative powers are not.
        for (name, v) in [("p_u", self.p_u), ("p_d", self.p_d)] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(format!("{name} must be finite and non-negative, got {v}"));
            }
        }
        for (i, &b) in self.beta_k.iter().enumerate() {
            if !(b > 0.0 && b.is_finite()) {
                return bad(format!("beta_k[{i}] must be positive, got {b}"));
            }
        }
        for (name, v) in [("beta_si", self.beta_si), ("beta_prime", self.beta_prime)] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(format!("{name} must be finite and non-negative, got {v}"));
            }
        }
        for (name, c) in [("c_direct", self.c_direct), ("c_prime", self.c_prime)] {
            if !(c.re.is_finite() && c.im.is_finite()) {
                return bad(format!("{name} must be finite"));
            }
        }
        Ok(())
    }

    /// `sum_k 1 / beta_k`.
    pub fn sum_inv_beta(&self) -> f64 {
        self.beta_k.iter().map(|b| 1.0 / b).sum()
    }

    /// Amplitude of the user-side reflected SI term.
    pub fn ue_reflected_amplitude_value(&self) -> f64 {
        match self.ue_reflected_amplitude {
            UeReflectedAmplitude::SqrtBetaPrime => self.beta_prime.sqrt(),
            UeReflectedAmplitude::BetaPrime => self.beta_prime,
        }
    }

    /// Scale applied to the user-side SI in the downlink signal.
    pub fn downlink_si_gain(&self) -> f64 {
        if self.downlink_si_uses_uplink_power {
            self.p_u.sqrt()
        } else {
            1.0
        }
    }
}

/// Base-station SI channel split into its two paths.
#[derive(Debug, Clone)]
pub struct SiChannel {
    /// Deterministic direct path, every entry `c_direct`.
    pub direct: ComplexMatrix,
    /// Random reflected path with entry variance `beta_si`.
    pub reflected: ComplexMatrix,
}

/// Transmit symbols and receiver noise for one channel use.
#[derive(Debug, Clone)]
pub struct Symbols {
    pub x_u: ComplexMatrix,
    pub x_d: ComplexMatrix,
    pub n: ComplexMatrix,
    pub n_d: ComplexMatrix,
}

/// One joint draw of every random quantity in the model.
///
/// `uplink_si` is `None` when the draw was made for downlink-only
/// evaluation; the base-station SI matrices do not enter the downlink signal.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    /// `M x K` user channel.
    pub g: ComplexMatrix,
    pub uplink_si: Option<SiChannel>,
    /// `K x K` user-side SI channel.
    pub gs_prime: ComplexMatrix,
    pub x_u: ComplexMatrix,
    pub x_d: ComplexMatrix,
    /// `M x 1` base-station noise.
    pub n: ComplexMatrix,
    /// `K x 1` user noise.
    pub n_d: ComplexMatrix,
}

// Labels for the component sub-streams of one realization.
const STREAM_USER_CHANNEL: u64 = 1;
const STREAM_SI_REFLECTED: u64 = 2;
const STREAM_UE_SI: u64 = 3;
const STREAM_SYMBOLS: u64 = 4;

impl ChannelRealization {
    /// Draws a full realization. Each component reads its own sub-stream
    /// derived from `rng`, so skipping the base-station SI leaves every
    /// other component unchanged.
    pub fn sample(params: &SystemParams, rng: &RngStream, with_uplink_si: bool) -> Result<Self> {
        params.validate()?;
        let g = sample_user_channel(params, &mut rng.derive(STREAM_USER_CHANNEL));
        let uplink_si = with_uplink_si.then(|| sample_si_channel(params, &mut rng.derive(STREAM_SI_REFLECTED)));
        let gs_prime = sample_downlink_si_channel(params, &mut rng.derive(STREAM_UE_SI));
        let Symbols { x_u, x_d, n, n_d } = sample_symbols(params, &mut rng.derive(STREAM_SYMBOLS));
        Ok(Self {
            g,
            uplink_si,
            gs_prime,
            x_u,
            x_d,
            n,
            n_d,
        })
    }

    pub fn antennas(&self) -> usize {
        self.g.rows()
    }

    pub fn users(&self) -> usize {
        self.g.cols()
    }
}

/// `G = H D^{1/2}`: column `k` of CN(0, 1) entries scaled by `sqrt(beta_k)`.
pub fn sample_user_channel(params: &SystemParams, rng: &mut RngStream) -> ComplexMatrix {
    let h = cscg_sample(rng, params.antennas, params.users);
    let amp: Vec<f64> = params.beta_k.iter().map(|b| b.sqrt()).collect();
    ComplexMatrix::from_fn(h.rows(), h.cols(), |i, j| h.get(i, j) * amp[j])
}

/// Direct path (all entries `c_direct`) and reflected path `H_s sqrt(beta_si)`.
pub fn sample_si_channel(params: &SystemParams, rng: &mut RngStream) -> SiChannel {
    let m = params.antennas;
    let amp = params.beta_si.sqrt();
    SiChannel {
        direct: ComplexMatrix::filled(m, m, params.c_direct),
        reflected: ComplexMatrix::from_fn(m, m, |_, _| rng.next_cscg() * amp),
    }
}

/// `G'_s` with entries `c_prime + a h'_pq`.
pub fn sample_downlink_si_channel(params: &SystemParams, rng: &mut RngStream) -> ComplexMatrix {
    let a = params.ue_reflected_amplitude_value();
    let c = params.c_prime;
    ComplexMatrix::from_fn(params.users, params.users, |_, _| c + rng.next_cscg() * a)
}

/// Unit-variance symbols and noise, drawn in the order `x_u, x_d, n, n_d`.
pub fn sample_symbols(params: &SystemParams, rng: &mut RngStream) -> Symbols {
    let (m, k) = (params.antennas, params.users);
    Symbols {
        x_u: cscg_sample(rng, k, 1),
        x_d: cscg_sample(rng, k, 1),
        n: cscg_sample(rng, m, 1),
        n_d: cscg_sample(rng, k, 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean_power(values: &[Complex64]) -> f64 {
        values.iter().map(|z| z.norm_sqr()).sum::<f64>() / values.len() as f64
    }

    #[test]
    fn unit_beta_user_channel_variance() {
        let mut p = SystemParams::evaluation_defaults(100);
        p.beta_k = vec![1.0; 4];
        let mut rng = RngStream::new(11, 0);
        let mut col_power = [0.0; 4];
        let draws = 100;
        for _ in 0..draws {
            let g = sample_user_channel(&p, &mut rng);
            for k in 0..4 {
                col_power[k] += (0..100).map(|m| g.get(m, k).norm_sqr()).sum::<f64>();
            }
        }
        for v in col_power {
            let v = v / (draws * 100) as f64;
            assert!((0.97..=1.03).contains(&v), "column variance {v}");
        }
    }

    #[test]
    fn default_beta_user_channel_variance() {
        let p = SystemParams::evaluation_defaults(250);
        let mut rng = RngStream::new(12, 0);
        let mut all = Vec::new();
        for _ in 0..100 {
            all.extend_from_slice(sample_user_channel(&p, &mut rng).as_slice());
        }
        assert_eq!(all.len(), 100_000);
        let v = mean_power(&all);
        assert!((0.097..=0.103).contains(&v), "E|g|^2 = {v}");
    }

    #[test]
    fn user_channel_is_reproducible() {
        let p = SystemParams::evaluation_defaults(16);
        let a = sample_user_channel(&p, &mut RngStream::new(5, 1));
        let b = sample_user_channel(&p, &mut RngStream::new(5, 1));
        assert_eq!(a, b);
    }

    #[test]
    fn zero_direct_coefficient() {
        let mut p = SystemParams::evaluation_defaults(8);
        p.c_direct = Complex64::new(0.0, 0.0);
        let si = sample_si_channel(&p, &mut RngStream::new(1, 1));
        assert_eq!(si.direct, ComplexMatrix::zeros(8, 8));
    }

    #[test]
    fn reflected_si_variance() {
        let p = SystemParams::evaluation_defaults(317);
        let si = sample_si_channel(&p, &mut RngStream::new(13, 0));
        let v = mean_power(si.reflected.as_slice());
        assert!(si.reflected.as_slice().len() >= 100_000);
        assert!((0.776..=0.824).contains(&v), "E|G~|^2 = {v}");
    }

    #[test]
    fn direct_si_trace_energy() {
        let mut p = SystemParams::evaluation_defaults(32);
        p.c_direct = Complex64::new(0.9, 0.0);
        let si = sample_si_channel(&p, &mut RngStream::new(1, 1));
        let tr = si.direct.matmul(&si.direct.hermitian()).unwrap().trace().unwrap();
        let expected = 32.0 * 32.0 * 0.81;
        assert!((tr.re - expected).abs() < 1e-9 * expected && tr.im.abs() < 1e-9);
    }

    #[test]
    fn ue_si_deterministic_when_no_reflection() {
        let mut p = SystemParams::evaluation_defaults(8);
        p.beta_prime = 0.0;
        p.c_prime = Complex64::new(0.6, 0.0);
        let g = sample_downlink_si_channel(&p, &mut RngStream::new(1, 2));
        assert!(g.as_slice().iter().all(|&z| z == Complex64::new(0.6, 0.0)));
    }

    fn ue_si_variance(conv: UeReflectedAmplitude) -> f64 {
        let mut p = SystemParams::evaluation_defaults(8);
        p.c_prime = Complex64::new(0.0, 0.0);
        p.ue_reflected_amplitude = conv;
        let mut rng = RngStream::new(14, 0);
        let mut all = Vec::new();
        while all.len() < 100_000 {
            all.extend_from_slice(sample_downlink_si_channel(&p, &mut rng).as_slice());
        }
        mean_power(&all)
    }

    #[test]
    fn ue_si_variance_conventions() {
        let v = ue_si_variance(UeReflectedAmplitude::SqrtBetaPrime);
        assert!((0.679..=0.721).contains(&v), "sqrt convention variance {v}");
        let v = ue_si_variance(UeReflectedAmplitude::BetaPrime);
        assert!((0.49 * 0.97..=0.49 * 1.03).contains(&v), "literal convention variance {v}");
    }

    #[test]
    fn symbol_statistics() {
        let p = SystemParams::evaluation_defaults(10);
        let mut rng = RngStream::new(15, 0);
        let draws = 10_000;
        let mut cov = vec![Complex64::new(0.0, 0.0); 16];
        let mut noise = 0.0;
        for _ in 0..draws {
            let s = sample_symbols(&p, &mut rng);
            for i in 0..4 {
                for j in 0..4 {
                    cov[i * 4 + j] += s.x_u.get(i, 0) * s.x_u.get(j, 0).conj();
                }
            }
            noise += mean_power(s.n.as_slice());
        }
        for i in 0..4 {
            for j in 0..4 {
                let c = cov[i * 4 + j] / draws as f64;
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((c - target).norm() < 0.03, "cov[{i}][{j}] = {c}");
            }
        }
        let noise = noise / draws as f64;
        assert!((0.97..=1.03).contains(&noise));
        let a = sample_symbols(&p, &mut RngStream::new(3, 3));
        let b = sample_symbols(&p, &mut RngStream::new(3, 3));
        assert_eq!(a.x_d, b.x_d);
        assert_eq!(a.n_d, b.n_d);
    }

    #[test]
    fn realization_components_are_independent_of_scope() {
        let p = SystemParams::evaluation_defaults(16);
        let rng = RngStream::new(9, 9);
        let full = ChannelRealization::sample(&p, &rng, true).unwrap();
        let dl = ChannelRealization::sample(&p, &rng, false).unwrap();
        assert!(dl.uplink_si.is_none());
        assert_eq!(full.g, dl.g);
        assert_eq!(full.gs_prime, dl.gs_prime);
        assert_eq!(full.x_u, dl.x_u);
        assert_eq!(full.n, dl.n);
    }

    #[test]
    fn validation() {
        let mut p = SystemParams::evaluation_defaults(4);
        assert!(p.validate().is_err());
        p.antennas = 5;
        assert!(p.validate().is_ok());
        p.beta_k = vec![0.1; 3];
        assert!(p.validate().is_err());
        p.beta_k = vec![0.1, 0.1, 0.0, 0.1];
        assert!(p.validate().is_err());
    }

    #[test]
    fn scheme_parsing() {
        assert_eq!("zf".parse::<Scheme>().unwrap(), Scheme::Zf);
        assert_eq!("MRT".parse::<Scheme>().unwrap(), Scheme::MrtMrc);
        assert!("mmse".parse::<Scheme>().is_err());
    }
}
