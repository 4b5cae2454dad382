//! Acceptance suite. Runs every primary criterion at its stated tolerance and
//! prints one PASS/FAIL line per criterion; exits non-zero if any fails.
//!
//! Run alone with `cargo test --release --test acceptance`.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;

use fdmimo::asymptotics::{
    lemma1_decay_sweep, projection_decay_sweep, proposition_convergence, BKind, PropositionKind, QuadraticPair,
    SiComponent,
};
use fdmimo::montecarlo::{find_crossing, power_to_db, run_sweep};
use fdmimo::numerics::ls_slope;
use fdmimo::processing::{build_receiver, LinearProcessing};
use fdmimo::{ChannelRealization, ComplexMatrix, Link, RngStream, Scheme, SweepConfig, SystemParams, Term};

type Outcome = Result<String, String>;

const SEED: u64 = 20_240_101;
const DECAY_GRID: [usize; 3] = [64, 256, 1024];

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within_pct(value: f64, reference: f64, pct: f64) -> bool {
    ((value - reference) / reference).abs() <= pct / 100.0
}

fn sweep(link: Link, scheme: Scheme, trials: usize, tweak: impl FnOnce(&mut SystemParams)) -> SweepConfig {
    let mut params = SystemParams::evaluation_defaults(64).with_scheme(scheme);
    tweak(&mut params);
    let mut cfg = SweepConfig::new(params);
    cfg.links = vec![link];
    cfg.trials = trials;
    cfg.master_seed = SEED;
    cfg
}

fn crossing(cfg: &SweepConfig, link: Link, term: Term) -> Result<Option<f64>, String> {
    let out = run_sweep(cfg).map_err(|e| e.to_string())?;
    Ok(find_crossing(&out.table.series(link, cfg.params.scheme, term), 0.0))
}

fn fmt_m(m: Option<f64>) -> String {
    m.map_or_else(|| "none".to_string(), |m| format!("{m:.1}"))
}

/// Downlink crossing oracle: `K (|c'|^2 + beta') sum_k 1/beta_k + K`, plus
/// `sum_k 1/beta_k` more when unit noise is included.
fn downlink_oracle(c_prime: f64, with_noise: bool) -> f64 {
    let p = SystemParams::evaluation_defaults(64);
    let k = p.users as f64;
    let si = k * (c_prime * c_prime + p.beta_prime);
    let noise = if with_noise { 1.0 } else { 0.0 };
    (si + noise) * p.sum_inv_beta() + k
}

fn c1_decay_slope() -> Outcome {
    let cfg = sweep(Link::Uplink, Scheme::Zf, 500, |_| {});
    let out = run_sweep(&cfg).map_err(|e| e.to_string())?;
    let series = out.table.series(Link::Uplink, Scheme::Zf, Term::SiTotal);
    let xs: Vec<f64> = series.iter().map(|(m, _)| m.log10()).collect();
    let ys: Vec<f64> = series.iter().map(|(_, db)| db / 10.0).collect();
    let slope = ls_slope(&xs, &ys);
    check((-1.2..=-0.8).contains(&slope), format!("log-log slope {slope:.3}, want [-1.2, -0.8]"))
}

fn c2_downlink_si_crossing() -> Outcome {
    let cfg = sweep(Link::Downlink, Scheme::Zf, 1000, |p| p.c_prime = Complex64::new(0.6, 0.0));
    let m = crossing(&cfg, Link::Downlink, Term::SiTotal)?;
    let oracle = downlink_oracle(0.6, false);
    let ok = m.is_some_and(|m| (120.0..=230.0).contains(&m) && within_pct(m, oracle, 10.0));
    check(ok, format!("M* = {}, window [120, 230], oracle {oracle:.1} +-10%", fmt_m(m)))
}

fn c3_downlink_total_crossing() -> Outcome {
    let cfg = sweep(Link::Downlink, Scheme::Zf, 1000, |p| p.c_prime = Complex64::new(0.7, 0.0));
    let m = crossing(&cfg, Link::Downlink, Term::TotalIntPlusNoise)?;
    let oracle = downlink_oracle(0.7, true);
    let ok = m.is_some_and(|m| (155.0..=300.0).contains(&m) && within_pct(m, oracle, 10.0));
    check(ok, format!("M* = {}, window [155, 300], oracle {oracle:.1} +-10%", fmt_m(m)))
}

fn c4_uplink_crossings() -> Outcome {
    let si = sweep(Link::Uplink, Scheme::Zf, 1000, |p| p.c_direct = Complex64::new(0.5, 0.0));
    let total = sweep(Link::Uplink, Scheme::Zf, 1000, |p| p.c_direct = Complex64::new(0.9, 0.0));
    let m_si = crossing(&si, Link::Uplink, Term::SiTotal)?;
    let m_total = crossing(&total, Link::Uplink, Term::TotalIntPlusNoise)?;
    let ok = m_si.is_some_and(|m| (180.0..=340.0).contains(&m)) && m_total.is_some_and(|m| (300.0..=560.0).contains(&m));
    check(
        ok,
        format!(
            "si_total c=0.5 M* = {} in [180, 340]; total c=0.9 M* = {} in [300, 560]",
            fmt_m(m_si),
            fmt_m(m_total)
        ),
    )
}

fn c5_zf_identities() -> Outcome {
    let params = SystemParams::evaluation_defaults(64);
    let root = RngStream::new(SEED, 5);
    let mut worst = 0.0f64;
    let mut leak = 0.0;
    let mut count = 0usize;
    for t in 0..100u64 {
        let real = ChannelRealization::sample(&params, &root.derive(t), true).map_err(|e| e.to_string())?;
        let w = build_receiver(&real.g, Scheme::Zf).map_err(|e| e.to_string())?;
        let dev = w.matmul(&real.g).and_then(|wg| wg.sub(&ComplexMatrix::identity(params.users)));
        worst = worst.max(dev.map_err(|e| e.to_string())?.frobenius_norm());
        let proc = LinearProcessing::new(&real.g, &params).map_err(|e| e.to_string())?;
        for terms in [
            proc.uplink_terms(&real, &params).map_err(|e| e.to_string())?,
            proc.downlink_terms(&real, &params).map_err(|e| e.to_string())?,
        ] {
            leak += terms.inter_user.iter().map(|z| z.norm_sqr()).sum::<f64>();
            count += terms.users();
        }
    }
    let leak_db = power_to_db(leak / count as f64);
    check(
        worst < 1e-10 && leak_db < -100.0,
        format!("max ||W^T G - I||_F = {worst:.2e}; inter_user power {leak_db:.1} dB"),
    )
}

fn c6_precoder_normalization() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for scheme in Scheme::ALL {
        for m in [64, 256] {
            let params = SystemParams::evaluation_defaults(m).with_scheme(scheme);
            let root = RngStream::new(SEED, 6).derive_path(&[scheme as u64, m as u64]);
            let trials = 10_000;
            let mut acc = 0.0;
            for t in 0..trials {
                let real = ChannelRealization::sample(&params, &root.derive(t), false).map_err(|e| e.to_string())?;
                let a = LinearProcessing::new(&real.g, &params).map_err(|e| e.to_string())?.precoder;
                let s = a.matmul(&real.x_d).map_err(|e| e.to_string())?;
                acc += s.frobenius_norm().powi(2);
            }
            let mean = acc / trials as f64;
            ok &= (0.98..=1.02).contains(&mean);
            details.push(format!("{scheme} M={m}: {mean:.4}"));
        }
    }
    check(ok, format!("E{{s^H s}} {}", details.join(", ")))
}

fn c7_quadratic_forms() -> Outcome {
    let root = RngStream::new(SEED, 7);
    let kinds = [
        BKind::Identity,
        BKind::DeterministicAllEqual(Complex64::new(1.0, 0.0)),
        BKind::RandomIid(1.0),
    ];
    let mut ok = true;
    let mut details = Vec::new();
    for (i, kind) in kinds.into_iter().enumerate() {
        for (j, pair) in [QuadraticPair::XBxConj, QuadraticPair::XBy].into_iter().enumerate() {
            let s = lemma1_decay_sweep(kind, pair, &DECAY_GRID, 500, &root.derive_path(&[i as u64, j as u64]))
                .map_err(|e| e.to_string())?;
            let ratio = s.median_ratio(256, 1024).unwrap_or(f64::NAN);
            let window = match kind {
                BKind::Identity => Some(2.5..=6.5),
                BKind::DeterministicAllEqual(_) => Some(1.5..=2.7),
                BKind::RandomIid(_) => None,
            };
            let this_ok = s.median_strictly_decreasing() && window.is_none_or(|w| w.contains(&ratio));
            ok &= this_ok;
            details.push(format!("{} ratio {ratio:.2}{}", s.statistic, if this_ok { "" } else { " !" }));
        }
    }
    check(ok, details.join("; "))
}

fn c8_si_projection() -> Outcome {
    let mut params = SystemParams::evaluation_defaults(64);
    params.c_direct = Complex64::new(0.9, 0.0);
    let root = RngStream::new(SEED, 8);
    let mut ok = true;
    let mut details = Vec::new();
    for (i, comp) in [SiComponent::Direct, SiComponent::Reflected].into_iter().enumerate() {
        let s = projection_decay_sweep(comp, &params, &DECAY_GRID, 500, &root.derive(i as u64))
            .map_err(|e| e.to_string())?;
        ok &= s.median_strictly_decreasing();
        let med: Vec<String> = s.medians().iter().map(|v| format!("{v:.3e}")).collect();
        details.push(format!("{} medians [{}]", comp.label(), med.join(", ")));
    }
    check(ok, details.join("; "))
}

fn c9_decoded_error() -> Outcome {
    let root = RngStream::new(SEED, 9);
    let mut ok = true;
    let mut details = Vec::new();
    for scheme in Scheme::ALL {
        let params = SystemParams::evaluation_defaults(64).with_scheme(scheme);
        for kind in [PropositionKind::UplinkP1, PropositionKind::DownlinkP2] {
            let s = proposition_convergence(kind, &params, &DECAY_GRID, 500, &root.derive_path(&[scheme as u64, kind as u64]))
                .map_err(|e| e.to_string())?;
            let dec = s.median_strictly_decreasing();
            ok &= dec;
            details.push(format!("{}{}", s.statistic, if dec { "" } else { " not decreasing" }));
        }
    }
    check(ok, details.join(", "))
}

fn run_cli(out: &Path, workers: usize) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_fdsim"))
        .args(["--preset", "fig2-uplink", "--seed", "7", "--trials", "40", "--workers"])
        .arg(workers.to_string())
        .arg("--out")
        .arg(out)
        .stdout(std::process::Stdio::null())
        .status()
        .map_err(|e| e.to_string())?;
    if status.success() {
        Ok(())
    } else {
        Err(format!("fdsim exited with {status}"))
    }
}

fn csv_files(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        if path.extension().is_some_and(|e| e == "csv") {
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            files.push((name, std::fs::read(&path).map_err(|e| e.to_string())?));
        }
    }
    files.sort();
    Ok(files)
}

fn c10_worker_invariance() -> Outcome {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    run_cli(a.path(), 1)?;
    run_cli(b.path(), 3)?;
    let (fa, fb) = (csv_files(a.path())?, csv_files(b.path())?);
    check(
        !fa.is_empty() && fa == fb,
        format!("{} CSV files compared, --workers 1 vs 3 (40 trials)", fa.len()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 ZF uplink SI decays as 1/M", c1_decay_slope),
        ("2 downlink SI crossing c'=0.6", c2_downlink_si_crossing),
        ("3 downlink total crossing c'=0.7", c3_downlink_total_crossing),
        ("4 uplink crossings c=0.5 / c=0.9", c4_uplink_crossings),
        ("5 exact ZF identities", c5_zf_identities),
        ("6 precoder normalization", c6_precoder_normalization),
        ("7 quadratic-form decay", c7_quadratic_forms),
        ("8 SI projection decay", c8_si_projection),
        ("9 decoded-signal convergence", c9_decoded_error),
        ("10 worker-count determinism", c10_worker_invariance),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("PASS criterion {name}: {d} ({secs:.1}s)"),
            Err(d) => {
                failed += 1;
                println!("FAIL criterion {name}: {d} ({secs:.1}s)");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
