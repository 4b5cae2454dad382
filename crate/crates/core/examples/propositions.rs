//! Mean per-user distance between the normalized decoded sample and the
//! transmitted symbol, for both links and both schemes.

use fdmimo::asymptotics::{proposition_convergence, PropositionKind};
use fdmimo::{RngStream, Scheme, SystemParams};

fn main() -> fdmimo::Result<()> {
    let m_values = [64, 256, 1024];
    let root = RngStream::new(3, 0);
    println!("{:<24} {:>10} {:>10} {:>10}", "statistic", "M=64", "M=256", "M=1024");
    for scheme in Scheme::ALL {
        let params = SystemParams::evaluation_defaults(64).with_scheme(scheme);
        for kind in [PropositionKind::UplinkP1, PropositionKind::DownlinkP2] {
            let s = proposition_convergence(kind, &params, &m_values, 200, &root.derive_path(&[scheme as u64, kind as u64]))?;
            let med = s.medians();
            println!("{:<24} {:>10.4} {:>10.4} {:>10.4}", s.statistic, med[0], med[1], med[2]);
        }
    }
    Ok(())
}
