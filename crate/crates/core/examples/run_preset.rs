//! Runs a named preset through the library and lists what it wrote, the
//! same as `fdsim --preset NAME --out DIR`.
//!
//! `cargo run --release --example run_preset -- fig2-downlink out/ [trials]`

use std::path::PathBuf;

use fdmimo::cli::{parse_config_str, run_preset, Overrides, Preset};

fn main() -> fdmimo::Result<()> {
    let mut args = std::env::args().skip(1);
    let preset: Preset = args.next().unwrap_or_else(|| "fig2-downlink".into()).parse()?;
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out".into()));
    let overrides = Overrides {
        trials: Some(args.next().map_or(100, |s| s.parse().expect("trials must be an integer"))),
        ..Default::default()
    };
    // Config text uses the same flat key=value format as --config files.
    let cfg = parse_config_str("# evaluation defaults\nseed=1\n", &overrides)?;

    let report = run_preset(preset, &cfg, &out, 0)?;
    for f in &report.files {
        println!("wrote {}", f.display());
    }
    for c in &report.crossings {
        let m = c.m_star.map_or_else(|| "not found".to_string(), |m| format!("{m:.1}"));
        println!("{} {} {} c={} M* = {m}", c.link, c.scheme, c.term, c.c_value);
    }
    for s in &report.decay {
        let med: Vec<String> = s.medians().iter().map(|v| format!("{v:.3e}")).collect();
        println!("{}: medians {}", s.statistic, med.join(" "));
    }
    Ok(())
}
