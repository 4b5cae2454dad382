//! How fast the SI seen through the user channel, `G^H Gs G^* / M^{3/2}`,
//! vanishes for each SI path, and how close `G^T G^* / M` gets to `D`.

use num_complex::Complex64;

use fdmimo::asymptotics::{orthogonality_sweep, projection_decay_sweep, SiComponent};
use fdmimo::{RngStream, SystemParams};

fn main() -> fdmimo::Result<()> {
    let mut params = SystemParams::evaluation_defaults(64);
    params.c_direct = Complex64::new(0.9, 0.0);
    let m_values = [64, 128, 256, 512, 1024];
    let root = RngStream::new(9, 0);

    let series = [
        projection_decay_sweep(SiComponent::Direct, &params, &m_values, 200, &root.derive(0))?,
        projection_decay_sweep(SiComponent::Reflected, &params, &m_values, 200, &root.derive(1))?,
        orthogonality_sweep(&params, &m_values, 200, &root.derive(2))?,
    ];
    print!("{:>6}", "M");
    for s in &series {
        print!(" {:>24}", s.statistic);
    }
    println!();
    for (i, m) in m_values.iter().enumerate() {
        print!("{m:>6}");
        for s in &series {
            print!(" {:>24.4e}", s.medians()[i]);
        }
        println!();
    }
    Ok(())
}
