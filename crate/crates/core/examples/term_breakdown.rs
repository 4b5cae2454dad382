//! Splits the uplink and downlink received samples of a single draw into
//! desired, inter-user, SI and noise parts for both processing schemes.

use fdmimo::montecarlo::power_to_db;
use fdmimo::processing::{downlink_normalization, processing_gain, uplink_normalization, LinearProcessing};
use fdmimo::{ChannelRealization, RngStream, Scheme, SystemParams, TermBreakdown};

fn row(label: &str, t: &TermBreakdown) {
    let p = |v: &[num_complex::Complex64]| power_to_db(v.iter().map(|z| z.norm_sqr()).sum::<f64>() / v.len() as f64);
    println!(
        "  {label:<10} desired {:>7.2}  inter {:>8.2}  si_direct {:>7.2}  si_reflected {:>7.2}  noise {:>7.2}  (dB)",
        p(&t.desired),
        p(&t.inter_user),
        p(&t.si_direct),
        p(&t.si_reflected),
        p(&t.noise)
    );
}

fn main() -> fdmimo::Result<()> {
    let m: usize = std::env::args().nth(1).map_or(Ok(256), |s| s.parse()).expect("M must be an integer");
    for scheme in Scheme::ALL {
        let params = SystemParams::evaluation_defaults(m).with_scheme(scheme);
        let real = ChannelRealization::sample(&params, &RngStream::new(1, m as u64), true)?;
        let proc = LinearProcessing::new(&real.g, &params)?;
        println!("{scheme}, M = {m}, rho_1 = {:.3}", processing_gain(scheme, &params, 0)?);

        let up = proc.uplink_terms(&real, &params)?;
        row("uplink", &up);
        if scheme == Scheme::MrtMrc {
            row("  / M b_k", &up.normalized(&uplink_normalization(&params)));
        }
        let down = proc.downlink_terms(&real, &params)?;
        row("downlink", &down);
        row("  / rho_k", &down.normalized(&downlink_normalization(&params)?));
    }
    Ok(())
}
