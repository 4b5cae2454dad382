//! Draws one channel realization and prints the empirical entry statistics of
//! each matrix next to the configured variances.

use fdmimo::channel::sample_si_channel;
use fdmimo::numerics::ComplexMatrix;
use fdmimo::{ChannelRealization, RngStream, SystemParams};

fn mean_power(m: &ComplexMatrix) -> f64 {
    m.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>() / m.as_slice().len() as f64
}

fn main() -> fdmimo::Result<()> {
    let params = SystemParams::evaluation_defaults(256);
    let rng = RngStream::new(7, 0);
    let real = ChannelRealization::sample(&params, &rng, true)?;
    let si = real.uplink_si.as_ref().expect("drawn with SI");

    println!("M = {}, K = {}", params.antennas, params.users);
    println!("G        {:>3}x{:<4} E|g|^2 = {:.4}  (beta_k = {})", real.g.rows(), real.g.cols(), mean_power(&real.g), params.beta_k[0]);
    println!("Gs_bar   {:>3}x{:<4} every entry = {}", si.direct.rows(), si.direct.cols(), si.direct.get(0, 0));
    println!("Gs_tilde {:>3}x{:<4} E|g|^2 = {:.4}  (beta = {})", si.reflected.rows(), si.reflected.cols(), mean_power(&si.reflected), params.beta_si);

    let c = params.c_prime;
    let centered = real.gs_prime.map(|z| z - c);
    println!(
        "G'_s     {:>3}x{:<4} mean = {:.3}, reflected E|h|^2 = {:.3}  (beta' = {})",
        real.gs_prime.rows(),
        real.gs_prime.cols(),
        real.gs_prime.as_slice().iter().sum::<num_complex::Complex64>() / real.gs_prime.as_slice().len() as f64,
        mean_power(&centered),
        params.beta_prime
    );

    let again = ChannelRealization::sample(&params, &rng, true)?;
    let same = again.g == real.g && again.uplink_si.as_ref().map(|s| &s.reflected) == Some(&si.reflected);
    println!("same stream, same draw: {same}");

    // A deterministic direct path only: c_direct = 0 zeroes it.
    let quiet = SystemParams {
        c_direct: num_complex::Complex64::new(0.0, 0.0),
        ..params.clone()
    };
    let si0 = sample_si_channel(&quiet, &mut rng.derive(99));
    println!("c_direct = 0 gives ||Gs_bar||_F = {}", si0.direct.frobenius_norm());
    Ok(())
}
