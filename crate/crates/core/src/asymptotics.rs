//! Finite-M evidence for the almost-sure convergence claims.
//!
//! Almost-sure limits cannot be observed at finite `M`; each check instead
//! samples a statistic over many independent trials at a geometric grid of
//! array sizes and reports the per-M median and quartiles. Convergence shows
//! up as a strictly decreasing median.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::channel::{sample_user_channel, ChannelRealization, SiChannel, SystemParams};
use crate::error::{Error, Result};
use crate::numerics::{cscg_sample, quantile_sorted, ComplexMatrix, RngStream};
use crate::processing::{downlink_normalization, uplink_normalization, LinearProcessing};

pub const MIN_SWEEP_TRIALS: usize = 30;

/// Sampled statistic magnitudes per array size.
#[derive(Debug, Clone, PartialEq)]
pub struct DecaySeries {
    /// Name written to the `statistic` CSV column.
    pub statistic: String,
    m_values: Vec<usize>,
    stats: Vec<Vec<f64>>,
}

impl DecaySeries {
    /// `m_values` must be strictly ascending and every row non-empty.
    pub fn new(statistic: impl Into<String>, m_values: Vec<usize>, stats: Vec<Vec<f64>>) -> Result<Self> {
        if m_values.len() != stats.len() {
            return Err(Error::InvalidParameter("one stats row per M value".into()));
        }
        if m_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("m_values must be strictly ascending".into()));
        }
        if stats.iter().any(|row| row.is_empty()) {
            return Err(Error::InvalidParameter("empty stats row".into()));
        }
        Ok(Self {
            statistic: statistic.into(),
            m_values,
            stats,
        })
    }

    pub fn m_values(&self) -> &[usize] {
        &self.m_values
    }

    /// Raw per-trial magnitudes, one row per M, in trial order.
    pub fn stats(&self) -> &[Vec<f64>] {
        &self.stats
    }

    fn quantiles(&self, q: f64) -> Vec<f64> {
        self.stats
            .iter()
            .map(|row| {
                let mut sorted = row.clone();
                sorted.sort_by(f64::total_cmp);
                quantile_sorted(&sorted, q)
            })
            .collect()
    }

    pub fn medians(&self) -> Vec<f64> {
        self.quantiles(0.5)
    }

    pub fn lower_quartiles(&self) -> Vec<f64> {
        self.quantiles(0.25)
    }

    pub fn upper_quartiles(&self) -> Vec<f64> {
        self.quantiles(0.75)
    }

    pub fn median_strictly_decreasing(&self) -> bool {
        self.medians().windows(2).all(|w| w[1] < w[0])
    }

    /// `median(M = small) / median(M = large)`; `None` if either M is absent.
    pub fn median_ratio(&self, small: usize, large: usize) -> Option<f64> {
        let med = self.medians();
        let i = self.m_values.iter().position(|&m| m == small)?;
        let j = self.m_values.iter().position(|&m| m == large)?;
        Some(med[i] / med[j])
    }
}

/// Evaluates `f(m, trial_stream)` on every `(m, trial)` cell in parallel and
/// regroups the results per M in trial order.
fn sweep_cells<F>(rng: &RngStream, m_values: &[usize], trials: usize, f: F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(usize, &RngStream) -> Result<f64> + Sync,
{
    if trials < MIN_SWEEP_TRIALS {
        return Err(Error::InvalidParameter(format!(
            "decay sweeps need at least {MIN_SWEEP_TRIALS} trials, got {trials}"
        )));
    }
    let cells: Vec<(usize, usize)> = m_values
        .iter()
        .flat_map(|&m| (0..trials).map(move |t| (m, t)))
        .collect();
    let values = cells
        .par_iter()
        .map(|&(m, t)| f(m, &rng.derive_path(&[m as u64, t as u64])))
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.chunks(trials).map(<[f64]>::to_vec).collect())
}

/// `x^H B x^* / M^{3/2}`, or `x^H B y / M^{3/2}` when `y` is given.
pub fn lemma1_statistic(x: &ComplexMatrix, b: &ComplexMatrix, y: Option<&ComplexMatrix>) -> Result<Complex64> {
    let m = b.rows();
    if !b.is_square() || x.shape() != (m, 1) {
        return Err(Error::Shape {
            op: "lemma1_statistic",
            left_rows: x.rows(),
            left_cols: x.cols(),
            right_rows: b.rows(),
            right_cols: b.cols(),
        });
    }
    let right = match y {
        Some(y) => {
            if y.shape() != (m, 1) {
                return Err(Error::Shape {
                    op: "lemma1_statistic",
                    left_rows: y.rows(),
                    left_cols: y.cols(),
                    right_rows: m,
                    right_cols: 1,
                });
            }
            y.clone()
        }
        None => x.conjugate(),
    };
    let quad = x.hermitian().matmul(&b.matmul(&right)?)?.get(0, 0);
    Ok(quad / (m as f64).powf(1.5))
}

/// Matrix family used as `B` in the quadratic-form sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BKind {
    /// Every entry equal to the given coefficient (the direct-path SI shape).
    DeterministicAllEqual(Complex64),
    /// Fresh i.i.d. CSCG entries with the given variance each trial.
    RandomIid(f64),
    Identity,
}

impl BKind {
    pub fn label(&self) -> &'static str {
        match self {
            BKind::DeterministicAllEqual(_) => "allequal",
            BKind::RandomIid(_) => "random",
            BKind::Identity => "identity",
        }
    }

    fn build(&self, m: usize, rng: &mut RngStream) -> ComplexMatrix {
        match *self {
            BKind::DeterministicAllEqual(c) => ComplexMatrix::filled(m, m, c),
            BKind::RandomIid(var) => {
                let amp = var.sqrt();
                ComplexMatrix::from_fn(m, m, |_, _| rng.next_cscg() * amp)
            }
            BKind::Identity => ComplexMatrix::identity(m),
        }
    }
}

/// Which quadratic form [`lemma1_decay_sweep`] samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadraticPair {
    /// `x^H B x^*`
    XBxConj,
    /// `x^H B y` with independent `y`
    XBy,
}

impl QuadraticPair {
    pub fn label(&self) -> &'static str {
        match self {
            QuadraticPair::XBxConj => "xBx_conj",
            QuadraticPair::XBy => "xBy",
        }
    }
}

/// Samples `|lemma1_statistic|` with fresh CN(0, 1) vectors and a fresh `B`
/// for every trial.
pub fn lemma1_decay_sweep(
    b_kind: BKind,
    pair: QuadraticPair,
    m_values: &[usize],
    trials: usize,
    rng: &RngStream,
) -> Result<DecaySeries> {
    let stats = sweep_cells(rng, m_values, trials, |m, cell| {
        let mut s = cell.clone();
        let x = cscg_sample(&mut s, m, 1);
        let y = match pair {
            QuadraticPair::XBxConj => None,
            QuadraticPair::XBy => Some(cscg_sample(&mut s, m, 1)),
        };
        let b = b_kind.build(m, &mut s);
        Ok(lemma1_statistic(&x, &b, y.as_ref())?.norm())
    })?;
    DecaySeries::new(
        format!("lemma1_{}_{}", b_kind.label(), pair.label()),
        m_values.to_vec(),
        stats,
    )
}

/// `|| G^H Gs G^* ||_F / M^{3/2}` for one SI component `Gs`.
pub fn si_projection_statistic(g: &ComplexMatrix, gs_component: &ComplexMatrix) -> Result<f64> {
    let m = g.rows();
    if gs_component.shape() != (m, m) {
        return Err(Error::Shape {
            op: "si_projection_statistic",
            left_rows: g.rows(),
            left_cols: g.cols(),
            right_rows: gs_component.rows(),
            right_cols: gs_component.cols(),
        });
    }
    let proj = g.hermitian().matmul(&gs_component.matmul(&g.conjugate())?)?;
    Ok(proj.frobenius_norm() / (m as f64).powf(1.5))
}

/// `|| G^T G^* / M - D ||_F`.
pub fn orthogonality_deviation(g: &ComplexMatrix, params: &SystemParams) -> Result<f64> {
    let m = g.rows() as f64;
    let gram = g.transpose().matmul(&g.conjugate())?.scale(1.0 / m);
    Ok(gram.sub(&ComplexMatrix::diagonal(&params.beta_k))?.frobenius_norm())
}

/// Base-station SI path selected for the projection sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiComponent {
    Direct,
    Reflected,
}

impl SiComponent {
    pub fn label(&self) -> &'static str {
        match self {
            SiComponent::Direct => "direct",
            SiComponent::Reflected => "reflected",
        }
    }

    fn pick(self, si: &SiChannel) -> &ComplexMatrix {
        match self {
            SiComponent::Direct => &si.direct,
            SiComponent::Reflected => &si.reflected,
        }
    }
}

/// Samples [`si_projection_statistic`] for one SI path across `m_values`.
pub fn projection_decay_sweep(
    component: SiComponent,
    params: &SystemParams,
    m_values: &[usize],
    trials: usize,
    rng: &RngStream,
) -> Result<DecaySeries> {
    let stats = sweep_cells(rng, m_values, trials, |m, cell| {
        let p = params.with_antennas(m);
        p.validate()?;
        let g = sample_user_channel(&p, &mut cell.derive(1));
        let si = crate::channel::sample_si_channel(&p, &mut cell.derive(2));
        si_projection_statistic(&g, component.pick(&si))
    })?;
    DecaySeries::new(format!("theorem1_{}", component.label()), m_values.to_vec(), stats)
}

/// Samples [`orthogonality_deviation`] across `m_values`.
pub fn orthogonality_sweep(
    params: &SystemParams,
    m_values: &[usize],
    trials: usize,
    rng: &RngStream,
) -> Result<DecaySeries> {
    let stats = sweep_cells(rng, m_values, trials, |m, cell| {
        let p = params.with_antennas(m);
        p.validate()?;
        let g = sample_user_channel(&p, &mut cell.clone());
        orthogonality_deviation(&g, &p)
    })?;
    DecaySeries::new("orthogonality_deviation", m_values.to_vec(), stats)
}

/// Which decoded-signal limit to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropositionKind {
    /// Uplink: `r_k` (ZF) or `r_k / (M beta_k)` (MRC) tends to `sqrt(p_u) x_u,k`.
    UplinkP1,
    /// Downlink: `y_k / rho_k` tends to `sqrt(p_d) x_d,k`.
    DownlinkP2,
}

impl PropositionKind {
    pub fn label(&self) -> &'static str {
        match self {
            PropositionKind::UplinkP1 => "uplink_p1",
            PropositionKind::DownlinkP2 => "downlink_p2",
        }
    }
}

/// Mean over users of `|normalized decoded sample - target|` for one
/// realization.
pub fn proposition_error(kind: PropositionKind, real: &ChannelRealization, params: &SystemParams) -> Result<f64> {
    let proc = LinearProcessing::new(&real.g, params)?;
    let (decoded, target_scale, symbols) = match kind {
        PropositionKind::UplinkP1 => {
            let t = proc.uplink_terms(real, params)?.normalized(&uplink_normalization(params));
            (t.total(), params.p_u.sqrt(), &real.x_u)
        }
        PropositionKind::DownlinkP2 => {
            let t = proc.downlink_terms(real, params)?.normalized(&downlink_normalization(params)?);
            (t.total(), params.p_d.sqrt(), &real.x_d)
        }
    };
    let k = decoded.len();
    Ok(decoded
        .iter()
        .zip(symbols.as_slice())
        .map(|(r, x)| (r - x * target_scale).norm())
        .sum::<f64>()
        / k as f64)
}

/// Redraw budget per cell when a ZF Gram matrix is singular.
const MAX_REDRAWS: u64 = 8;

/// Samples [`proposition_error`] across `m_values`.
pub fn proposition_convergence(
    kind: PropositionKind,
    params: &SystemParams,
    m_values: &[usize],
    trials: usize,
    rng: &RngStream,
) -> Result<DecaySeries> {
    let with_uplink_si = kind == PropositionKind::UplinkP1;
    let stats = sweep_cells(rng, m_values, trials, |m, cell| {
        let p = params.with_antennas(m);
        let mut attempt = 0;
        loop {
            let real = ChannelRealization::sample(&p, &cell.derive(attempt), with_uplink_si)?;
            match proposition_error(kind, &real, &p) {
                Err(Error::Singular { .. }) if attempt < MAX_REDRAWS => attempt += 1,
                other => return other,
            }
        }
    })?;
    DecaySeries::new(
        format!("{}_{}", kind.label(), params.scheme.as_str()),
        m_values.to_vec(),
        stats,
    )
}
