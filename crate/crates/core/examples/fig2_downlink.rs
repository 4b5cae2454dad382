//! Normalized downlink SI power for c' = 0.6 and 0.7 under ZF, compared with
//! the closed form `K (|c'|^2 + beta') / rho^2`.
//!
//! `cargo run --release --example fig2_downlink -- [trials]`

use num_complex::Complex64;

use fdmimo::montecarlo::{find_crossing, power_to_db};
use fdmimo::processing::processing_gain;
use fdmimo::{run_sweep, Link, Scheme, SweepConfig, SystemParams, Term};

fn main() -> fdmimo::Result<()> {
    let trials = std::env::args().nth(1).map_or(1000, |s| s.parse().expect("trials must be an integer"));
    for c in [0.6, 0.7] {
        let mut params = SystemParams::evaluation_defaults(64);
        params.c_prime = Complex64::new(c, 0.0);
        let mut cfg = SweepConfig::new(params.clone());
        cfg.links = vec![Link::Downlink];
        cfg.trials = trials;
        let table = run_sweep(&cfg)?.table;

        let k = params.users as f64;
        let si_var = k * (c * c + params.beta_prime);
        println!("c' = {c} ({trials} trials)");
        println!("  {:>5} {:>10} {:>10} {:>12}", "M", "si_total", "oracle", "int+noise");
        for &m in &cfg.m_values {
            let rho = processing_gain(Scheme::Zf, &params.with_antennas(m), 0)?;
            let db = |t| table.row(Link::Downlink, Scheme::Zf, t, m).map_or(f64::NAN, |r| r.power_db);
            println!(
                "  {m:>5} {:>10.2} {:>10.2} {:>12.2}",
                db(Term::SiTotal),
                power_to_db(si_var / (rho * rho)),
                db(Term::TotalIntPlusNoise)
            );
        }
        let sum_inv = params.sum_inv_beta();
        for (term, oracle) in [
            (Term::SiTotal, si_var * sum_inv + k),
            (Term::TotalIntPlusNoise, (si_var + 1.0) * sum_inv + k),
        ] {
            let m = find_crossing(&table.series(Link::Downlink, Scheme::Zf, term), 0.0);
            let shown = m.map_or_else(|| "none".to_string(), |m| format!("{m:.1}"));
            println!("  {} M* = {shown} (closed form {oracle:.1})", term.as_str());
        }
    }
    Ok(())
}
