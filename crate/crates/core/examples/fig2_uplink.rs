//! Uplink residual SI power against the array size for c = 0.5 and c = 0.9
//! under ZF, with the 0 dB crossings.
//!
//! `cargo run --release --example fig2_uplink -- [trials]`

use num_complex::Complex64;

use fdmimo::montecarlo::find_crossing;
use fdmimo::{run_sweep, Link, Scheme, SweepConfig, SystemParams, Term};

fn main() -> fdmimo::Result<()> {
    let trials = std::env::args().nth(1).map_or(200, |s| s.parse().expect("trials must be an integer"));
    for c in [0.5, 0.9] {
        let mut params = SystemParams::evaluation_defaults(64);
        params.c_direct = Complex64::new(c, 0.0);
        let mut cfg = SweepConfig::new(params);
        cfg.links = vec![Link::Uplink];
        cfg.trials = trials;
        let table = run_sweep(&cfg)?.table;

        println!("c = {c} ({trials} trials)");
        println!("  {:>5} {:>10} {:>10} {:>10} {:>12}", "M", "direct", "reflected", "si_total", "int+noise");
        for &m in &cfg.m_values {
            let db = |t| table.row(Link::Uplink, Scheme::Zf, t, m).map_or(f64::NAN, |r| r.power_db);
            println!(
                "  {m:>5} {:>10.2} {:>10.2} {:>10.2} {:>12.2}",
                db(Term::SiDirect),
                db(Term::SiReflected),
                db(Term::SiTotal),
                db(Term::TotalIntPlusNoise)
            );
        }
        for term in [Term::SiTotal, Term::TotalIntPlusNoise] {
            match find_crossing(&table.series(Link::Uplink, Scheme::Zf, term), 0.0) {
                Some(m) => println!("  {} crosses 0 dB at M* = {m:.0}", term.as_str()),
                None => println!("  {} does not cross 0 dB on this grid", term.as_str()),
            }
        }
    }
    Ok(())
}
