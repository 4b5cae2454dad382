//! Reads a power-table CSV written by `fdsim` and recomputes the 0 dB
//! crossing of every series, the way a plotting front end consumes it.
//!
//! `cargo run --release --example crossings_from_csv -- out/fig2_downlink_c0.6.csv [level_db]`

use std::collections::BTreeSet;
use std::path::PathBuf;

use fdmimo::cli::csv::read_power_table;
use fdmimo::montecarlo::find_crossing;

fn main() -> fdmimo::Result<()> {
    let mut args = std::env::args().skip(1);
    let Some(path) = args.next().map(PathBuf::from) else {
        eprintln!("usage: crossings_from_csv FILE.csv [level_db]");
        std::process::exit(64);
    };
    let level: f64 = args.next().map_or(0.0, |s| s.parse().expect("level must be a number"));
    let table = read_power_table(&path)?;
    let keys: BTreeSet<_> = table.rows.iter().map(|r| (r.link, r.scheme, r.term)).collect();
    for (link, scheme, term) in keys {
        let m = find_crossing(&table.series(link, scheme, term), level);
        let shown = m.map_or_else(|| "-".to_string(), |m| format!("{m:.1}"));
        println!("{:<9} {:<8} {:<21} {shown}", link.as_str(), scheme.as_str(), term.as_str());
    }
    Ok(())
}
