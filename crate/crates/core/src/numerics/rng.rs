//! Reproducible, splittable random streams.
//!
//! Generator: ChaCha8 (`rand_chacha::ChaCha8Rng`). The 256-bit key holds the
//! master seed as little-endian bytes in its first 8 bytes and zeros
//! elsewhere; the 64-bit ChaCha stream selector is the stream id; the block
//! counter starts at zero. Two streams with the same `(master_seed,
//! stream_id)` emit identical sequences, and distinct stream ids select
//! disjoint ChaCha keystreams.
//!
//! Child streams are derived with [`RngStream::derive`], which hashes the
//! parent id and a label through SplitMix64. Monte Carlo cells key their
//! stream by a label path such as `(experiment, M, trial)`, so the values a
//! cell sees do not depend on execution order or worker count.
//!
//! Uniforms are `((u64 >> 11) + 0.5) * 2^-53`, which lies strictly inside
//! (0, 1). A CN(0, 1) sample is two consecutive standard normals from the
//! Ziggurat sampler of `rand_distr::StandardNormal` (real part first), each
//! scaled by `sqrt(1/2)`, so real and imaginary parts are independent
//! N(0, 1/2). The polar Box-Muller transform costs a logarithm and a
//! sine/cosine pair per sample and made the M x M SI draws the bottleneck.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::ComplexMatrix;

#[derive(Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&master_seed.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(stream_id);
        Self {
            master_seed,
            stream_id,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Fresh stream under the same master seed whose id is a hash of this
    /// stream's id and `label`. Does not advance `self`.
    pub fn derive(&self, label: u64) -> RngStream {
        let id = splitmix64(self.stream_id ^ splitmix64(label.wrapping_add(0x6a09_e667_f3bc_c909)));
        RngStream::new(self.master_seed, id)
    }

    /// Derives through a sequence of labels.
    pub fn derive_path(&self, labels: &[u64]) -> RngStream {
        labels.iter().fold(self.clone(), |s, &l| s.derive(l))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform sample strictly inside (0, 1).
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// One CN(0, 1) sample.
    pub fn next_cscg(&mut self) -> Complex64 {
        let re: f64 = StandardNormal.sample(&mut self.rng);
        let im: f64 = StandardNormal.sample(&mut self.rng);
        Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
    }
}

impl std::fmt::Debug for RngStream {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RngStream")
            .field("master_seed", &self.master_seed)
            .field("stream_id", &self.stream_id)
            .finish_non_exhaustive()
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `rows x cols` matrix of i.i.d. CN(0, 1) entries, filled in row-major order.
pub fn cscg_sample(rng: &mut RngStream, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| rng.next_cscg())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_matrix() {
        let a = cscg_sample(&mut RngStream::new(42, 7), 2, 2);
        let b = cscg_sample(&mut RngStream::new(42, 7), 2, 2);
        assert_eq!(a.as_slice(), b.as_slice());
    }

    #[test]
    fn streams_differ() {
        let a = cscg_sample(&mut RngStream::new(42, 0), 2, 2);
        let b = cscg_sample(&mut RngStream::new(42, 1), 2, 2);
        let c = cscg_sample(&mut RngStream::new(43, 0), 2, 2);
        assert_ne!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn derive_is_pure() {
        let root = RngStream::new(1, 0);
        assert_eq!(root.derive(5).stream_id(), root.derive(5).stream_id());
        assert_ne!(root.derive(5).stream_id(), root.derive(6).stream_id());
        assert_eq!(root.derive_path(&[1, 2]).stream_id(), root.derive(1).derive(2).stream_id());
    }

    #[test]
    fn cscg_moments() {
        let n = 100_000;
        let m = cscg_sample(&mut RngStream::new(2024, 3), n, 1);
        let z = m.as_slice();
        let mean: Complex64 = z.iter().sum::<Complex64>() / n as f64;
        let power = z.iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64;
        let var = power - mean.norm_sqr();
        let pseudo: Complex64 = z.iter().map(|v| v * v).sum::<Complex64>() / n as f64;
        let re_var = z.iter().map(|v| v.re * v.re).sum::<f64>() / n as f64;
        assert!(mean.norm() < 0.02, "mean {mean}");
        assert!((0.97..=1.03).contains(&var), "var {var}");
        assert!((0.97..=1.03).contains(&power), "power {power}");
        assert!(pseudo.norm() < 0.02, "pseudo-variance {pseudo}");
        assert!((0.485..=0.515).contains(&re_var), "real-part variance {re_var}");
    }

    #[test]
    fn open01_bounds() {
        let mut r = RngStream::new(0, 0);
        for _ in 0..10_000 {
            let u = r.next_open01();
            assert!(u > 0.0 && u < 1.0);
        }
    }
}
