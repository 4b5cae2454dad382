//! Medians and quartiles of `|x^H B x^*| / M^{3/2}` and `|x^H B y| / M^{3/2}`
//! for three families of `B`.

use num_complex::Complex64;

use fdmimo::asymptotics::{lemma1_decay_sweep, BKind, QuadraticPair};
use fdmimo::RngStream;

fn main() -> fdmimo::Result<()> {
    let m_values = [64, 256, 1024];
    let root = RngStream::new(5, 0);
    let kinds = [
        BKind::Identity,
        BKind::DeterministicAllEqual(Complex64::new(1.0, 0.0)),
        BKind::RandomIid(1.0),
    ];
    for (i, kind) in kinds.into_iter().enumerate() {
        for (j, pair) in [QuadraticPair::XBxConj, QuadraticPair::XBy].into_iter().enumerate() {
            let s = lemma1_decay_sweep(kind, pair, &m_values, 300, &root.derive_path(&[i as u64, j as u64]))?;
            let (lo, med, hi) = (s.lower_quartiles(), s.medians(), s.upper_quartiles());
            println!("{}", s.statistic);
            for (idx, m) in m_values.iter().enumerate() {
                println!("  M = {m:>4}: median {:.3e}  [{:.3e}, {:.3e}]", med[idx], lo[idx], hi[idx]);
            }
            println!("  median(256) / median(1024) = {:.2}", s.median_ratio(256, 1024).unwrap_or(f64::NAN));
        }
    }
    Ok(())
}
