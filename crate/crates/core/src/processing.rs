//! Precoders, receivers and the per-user decomposition of received signals.
//!
//! With `s = A x_d`, the uplink decoded vector is
//! `r = sqrt(p_u) W^T G x_u + sqrt(p_d) W^T (Gs_direct + Gs_reflected) s + W^T n`
//! and the downlink received vector is
//! `y = sqrt(p_d) G^T A x_d + gamma G'_s x_u + n_d`, where `gamma` is 1 or
//! `sqrt(p_u)` depending on [`SystemParams::downlink_si_uses_uplink_power`].

use num_complex::Complex64;

use crate::channel::{ChannelRealization, Scheme, SystemParams};
use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

/// Per-user complex contributions to a received sample.
#[derive(Debug, Clone, PartialEq)]
pub struct TermBreakdown {
    pub desired: Vec<Complex64>,
    pub inter_user: Vec<Complex64>,
    pub si_direct: Vec<Complex64>,
    pub si_reflected: Vec<Complex64>,
    pub noise: Vec<Complex64>,
}

impl TermBreakdown {
    pub fn users(&self) -> usize {
        self.desired.len()
    }

    /// Sum of all five terms, per user.
    pub fn total(&self) -> Vec<Complex64> {
        (0..self.users())
            .map(|k| self.desired[k] + self.inter_user[k] + self.si_direct[k] + self.si_reflected[k] + self.noise[k])
            .collect()
    }

    /// Combined SI (direct plus reflected) per user.
    pub fn si_total(&self) -> Vec<Complex64> {
        (0..self.users()).map(|k| self.si_direct[k] + self.si_reflected[k]).collect()
    }

    /// Everything except the desired term, per user.
    pub fn interference_plus_noise(&self) -> Vec<Complex64> {
        (0..self.users())
            .map(|k| self.inter_user[k] + self.si_direct[k] + self.si_reflected[k] + self.noise[k])
            .collect()
    }

    /// Every term of user `k` divided by `divisors[k]`.
    pub fn normalized(&self, divisors: &[f64]) -> TermBreakdown {
        assert_eq!(divisors.len(), self.users(), "one divisor per user");
        let scale = |v: &[Complex64]| v.iter().zip(divisors).map(|(z, d)| z / d).collect();
        TermBreakdown {
            desired: scale(&self.desired),
            inter_user: scale(&self.inter_user),
            si_direct: scale(&self.si_direct),
            si_reflected: scale(&self.si_reflected),
            noise: scale(&self.noise),
        }
    }
}

/// Precoder normalization `alpha` giving `E{s^H s} = 1`.
///
/// ZF: `sqrt((M - K) / sum_k 1/beta_k)`. MRT: `sqrt(1 / (M sum_k beta_k))`.
pub fn normalization_factor(scheme: Scheme, params: &SystemParams) -> Result<f64> {
    let (m, k) = (params.antennas as f64, params.users as f64);
    match scheme {
        Scheme::Zf => {
            if params.antennas <= params.users {
                return Err(Error::InvalidParameter(format!(
                    "ZF needs M > K, got M={} K={}",
                    params.antennas, params.users
                )));
            }
            Ok(((m - k) / params.sum_inv_beta()).sqrt())
        }
        Scheme::MrtMrc => {
            let sum_beta: f64 = params.beta_k.iter().sum();
            if !(sum_beta > 0.0) || params.antennas == 0 {
                return Err(Error::InvalidParameter("MRT normalization needs M >= 1 and sum beta_k > 0".into()));
            }
            Ok((1.0 / (m * sum_beta)).sqrt())
        }
    }
}

/// Effective downlink amplitude `rho_k`: `alpha_ZF` for ZF, `alpha_MRT M beta_k`
/// for MRT.
pub fn processing_gain(scheme: Scheme, params: &SystemParams, k: usize) -> Result<f64> {
    let alpha = normalization_factor(scheme, params)?;
    Ok(match scheme {
        Scheme::Zf => alpha,
        Scheme::MrtMrc => alpha * params.antennas as f64 * params.beta_k[k],
    })
}

/// `A` (`M x K`). ZF: `alpha G^* (G^T G^*)^{-1}`. MRT: `alpha G^*`.
pub fn build_precoder(g: &ComplexMatrix, scheme: Scheme, params: &SystemParams) -> Result<ComplexMatrix> {
    check_channel_shape(g, params)?;
    let alpha = normalization_factor(scheme, params)?;
    let g_conj = g.conjugate();
    match scheme {
        Scheme::Zf => {
            let gram = g.transpose().matmul(&g_conj)?;
            Ok(g_conj.matmul(&gram.invert_small()?)?.scale(alpha))
        }
        Scheme::MrtMrc => Ok(g_conj.scale(alpha)),
    }
}

/// `W^T` (`K x M`). ZF: `(G^H G)^{-1} G^H`. MRC: `G^H`.
pub fn build_receiver(g: &ComplexMatrix, scheme: Scheme) -> Result<ComplexMatrix> {
    let g_h = g.hermitian();
    match scheme {
        Scheme::Zf => {
            let gram = g_h.matmul(g)?;
            gram.invert_small()?.matmul(&g_h)
        }
        Scheme::MrtMrc => Ok(g_h),
    }
}

fn check_channel_shape(g: &ComplexMatrix, params: &SystemParams) -> Result<()> {
    if g.shape() != (params.antennas, params.users) {
        return Err(Error::Shape {
            op: "channel vs params",
            left_rows: g.rows(),
            left_cols: g.cols(),
            right_rows: params.antennas,
            right_cols: params.users,
        });
    }
    Ok(())
}

/// Divisors for the normalized uplink view: 1 for ZF, `M beta_k` for MRC.
pub fn uplink_normalization(params: &SystemParams) -> Vec<f64> {
    match params.scheme {
        Scheme::Zf => vec![1.0; params.users],
        Scheme::MrtMrc => params.beta_k.iter().map(|b| params.antennas as f64 * b).collect(),
    }
}

/// Divisors for the normalized downlink view: `rho_k`.
pub fn downlink_normalization(params: &SystemParams) -> Result<Vec<f64>> {
    (0..params.users).map(|k| processing_gain(params.scheme, params, k)).collect()
}

/// Precoder and receiver built from one channel draw.
#[derive(Debug, Clone)]
pub struct LinearProcessing {
    pub precoder: ComplexMatrix,
    pub receiver: ComplexMatrix,
}

impl LinearProcessing {
    pub fn new(g: &ComplexMatrix, params: &SystemParams) -> Result<Self> {
        Ok(Self {
            precoder: build_precoder(g, params.scheme, params)?,
            receiver: build_receiver(g, params.scheme)?,
        })
    }

    /// Exact five-term split of the uplink decoded signal `r = W^T y_BS`.
    pub fn uplink_terms(&self, real: &ChannelRealization, params: &SystemParams) -> Result<TermBreakdown> {
        let si = real.uplink_si.as_ref().ok_or_else(|| {
            Error::InvalidParameter("realization was drawn without the base-station SI channel".into())
        })?;
        let k_users = real.users();
        let w = &self.receiver;
        let wg = w.matmul(&real.g)?;
        let s = self.precoder.matmul(&real.x_d)?;
        let direct = w.matmul(&si.direct.matmul(&s)?)?;
        let reflected = w.matmul(&si.reflected.matmul(&s)?)?;
        let noise = w.matmul(&real.n)?;

        let (su, sd) = (params.p_u.sqrt(), params.p_d.sqrt());
        let x_u = real.x_u.as_slice();
        let mut out = empty_breakdown(k_users);
        for k in 0..k_users {
            out.desired[k] = wg.get(k, k) * x_u[k] * su;
            out.inter_user[k] = (0..k_users)
                .filter(|&i| i != k)
                .map(|i| wg.get(k, i) * x_u[i])
                .sum::<Complex64>()
                * su;
            out.si_direct[k] = direct.get(k, 0) * sd;
            out.si_reflected[k] = reflected.get(k, 0) * sd;
            out.noise[k] = noise.get(k, 0);
        }
        Ok(out)
    }

    /// Exact split of the downlink received signal at each user.
    ///
    /// The SI term is divided into the coupling part `gamma c' sum_q x_u,q`
    /// (`si_direct`) and the small-scale part (`si_reflected`).
    pub fn downlink_terms(&self, real: &ChannelRealization, params: &SystemParams) -> Result<TermBreakdown> {
        downlink_terms(real, &self.precoder, params)
    }
}

fn empty_breakdown(k: usize) -> TermBreakdown {
    let z = vec![Complex64::new(0.0, 0.0); k];
    TermBreakdown {
        desired: z.clone(),
        inter_user: z.clone(),
        si_direct: z.clone(),
        si_reflected: z.clone(),
        noise: z,
    }
}

/// Uplink decomposition, building the precoder and receiver from `real.g`.
pub fn uplink_terms(real: &ChannelRealization, params: &SystemParams) -> Result<TermBreakdown> {
    LinearProcessing::new(&real.g, params)?.uplink_terms(real, params)
}

/// Downlink decomposition for precoder `a`.
pub fn downlink_terms(real: &ChannelRealization, a: &ComplexMatrix, params: &SystemParams) -> Result<TermBreakdown> {
    let k_users = real.users();
    if a.shape() != real.g.shape() {
        return Err(Error::Shape {
            op: "downlink precoder",
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: real.g.rows(),
            right_cols: real.g.cols(),
        });
    }
    let ga = real.g.transpose().matmul(a)?;
    let sd = params.p_d.sqrt();
    let gamma = params.downlink_si_gain();
    let c = params.c_prime;
    let x_d = real.x_d.as_slice();
    let x_u = real.x_u.as_slice();
    let sum_x_u: Complex64 = x_u.iter().sum();

    let mut out = empty_breakdown(k_users);
    for k in 0..k_users {
        out.desired[k] = ga.get(k, k) * x_d[k] * sd;
        out.inter_user[k] = (0..k_users)
            .filter(|&q| q != k)
            .map(|q| ga.get(k, q) * x_d[q])
            .sum::<Complex64>()
            * sd;
        out.si_direct[k] = c * sum_x_u * gamma;
        out.si_reflected[k] = (0..k_users)
            .map(|q| (real.gs_prime.get(k, q) - c) * x_u[q])
            .sum::<Complex64>()
            * gamma;
        out.noise[k] = real.n_d.get(k, 0);
    }
    Ok(out)
}
