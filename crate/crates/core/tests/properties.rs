use num_complex::Complex64;
use proptest::prelude::*;

use fdmimo::asymptotics::si_projection_statistic;
use fdmimo::cli::csv::{parse_decay_series, parse_power_table, to_csv_string};
use fdmimo::montecarlo::{power_to_db, PowerRow};
use fdmimo::asymptotics::DecaySeries;
use fdmimo::numerics::AdjointMode;
use fdmimo::processing::LinearProcessing;
use fdmimo::{ChannelRealization, ComplexMatrix, Link, PowerTable, RngStream, Scheme, SystemParams, Term};

fn complex() -> impl Strategy<Value = Complex64> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(complex(), rows * cols).prop_map(move |v| ComplexMatrix::from_vec(rows, cols, v).unwrap())
}

fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
    a.shape() == b.shape() && a.sub(b).unwrap().frobenius_norm() <= tol * (1.0 + a.frobenius_norm())
}

fn dims() -> impl Strategy<Value = (usize, usize, usize, usize)> {
    (1..6usize, 1..6usize, 1..6usize, 1..6usize)
}

proptest! {
    #[test]
    fn matmul_is_associative(
        (a, b, c) in dims().prop_flat_map(|(m, n, p, q)| (matrix(m, n), matrix(n, p), matrix(p, q)))
    ) {
        let left = a.matmul(&b).unwrap().matmul(&c).unwrap();
        let right = a.matmul(&b.matmul(&c).unwrap()).unwrap();
        prop_assert!(close(&left, &right, 1e-12));
    }

    #[test]
    fn hermitian_of_product_reverses(
        (a, b) in dims().prop_flat_map(|(m, n, p, _)| (matrix(m, n), matrix(n, p)))
    ) {
        let lhs = a.matmul(&b).unwrap().adjoint(AdjointMode::Hermitian);
        let rhs = b.hermitian().matmul(&a.hermitian()).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-12));
        prop_assert_eq!(a.hermitian(), a.transpose().conjugate());
    }

    #[test]
    fn inverse_residual_is_small(n in 1..7usize, seed in any::<u64>()) {
        // Diagonally loaded random matrices are well conditioned.
        let mut rng = RngStream::new(seed, 0);
        let r = fdmimo::numerics::cscg_sample(&mut rng, n, n);
        let a = r.add(&ComplexMatrix::identity(n).scale(3.0 * n as f64)).unwrap();
        let inv = a.invert_small().unwrap();
        let res = a.matmul(&inv).unwrap().sub(&ComplexMatrix::identity(n)).unwrap().frobenius_norm();
        prop_assert!(res < 1e-12, "residual {res}");
    }

    #[test]
    fn power_table_csv_round_trips(
        rows in prop::collection::vec((0usize..2, 0usize..2, 0usize..7, 5usize..2000, 0.0..1e6f64, 0.0..3.0f64, 1usize..5000, any::<u64>()), 0..20)
    ) {
        let table = PowerTable {
            rows: rows
                .into_iter()
                .map(|(l, s, t, m, p, se, trials, seed)| {
                    let power_linear = if t == 3 && m % 5 == 0 { 0.0 } else { p };
                    PowerRow {
                        link: Link::ALL[l],
                        scheme: Scheme::ALL[s],
                        term: Term::ALL[t],
                        m,
                        power_linear,
                        power_db: power_to_db(power_linear),
                        stderr_db: se,
                        trials,
                        seed,
                    }
                })
                .collect(),
        };
        let text = to_csv_string(&table);
        let back = parse_power_table(&text, "mem.csv".as_ref()).unwrap();
        prop_assert_eq!(back, table);
    }

    #[test]
    fn decay_csv_round_trips(values in prop::collection::vec(prop::collection::vec(0.0..1e3f64, 1..6), 1..4)) {
        let m_values: Vec<usize> = (0..values.len()).map(|i| 64 << (2 * i)).collect();
        let series = vec![DecaySeries::new("stat", m_values, values).unwrap()];
        let text = to_csv_string(&series[..]);
        prop_assert_eq!(parse_decay_series(&text, "mem.csv".as_ref()).unwrap(), series);
    }
}

/// Received signals formed directly from the signal model.
fn monolithic(real: &ChannelRealization, a: &ComplexMatrix, w: &ComplexMatrix, p: &SystemParams) -> (ComplexMatrix, ComplexMatrix) {
    let si = real.uplink_si.as_ref().unwrap();
    let gs = si.direct.add(&si.reflected).unwrap();
    let s = a.matmul(&real.x_d).unwrap();
    let y_bs = real
        .g
        .matmul(&real.x_u)
        .unwrap()
        .scale(p.p_u.sqrt())
        .add(&gs.matmul(&s).unwrap().scale(p.p_d.sqrt()))
        .unwrap()
        .add(&real.n)
        .unwrap();
    let y_ue = real
        .g
        .transpose()
        .matmul(&s)
        .unwrap()
        .scale(p.p_d.sqrt())
        .add(&real.gs_prime.matmul(&real.x_u).unwrap().scale(p.downlink_si_gain()))
        .unwrap()
        .add(&real.n_d)
        .unwrap();
    (w.matmul(&y_bs).unwrap(), y_ue)
}

fn params_for(m: usize, scheme: Scheme, gamma_flag: bool, c: f64) -> SystemParams {
    let mut p = SystemParams::evaluation_defaults(m).with_scheme(scheme);
    p.downlink_si_uses_uplink_power = gamma_flag;
    p.c_direct = Complex64::new(c, 0.3);
    p.c_prime = Complex64::new(c, -0.2);
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn term_split_sums_to_received_signal(
        seed in any::<u64>(),
        m in prop::sample::select(vec![16usize, 64, 256]),
        zf in any::<bool>(),
        gamma_flag in any::<bool>(),
        c in 0.0..1.0f64,
    ) {
        let scheme = if zf { Scheme::Zf } else { Scheme::MrtMrc };
        let p = params_for(m, scheme, gamma_flag, c);
        let real = ChannelRealization::sample(&p, &RngStream::new(seed, 11), true).unwrap();
        let proc = LinearProcessing::new(&real.g, &p).unwrap();
        let (r, y_ue) = monolithic(&real, &proc.precoder, &proc.receiver, &p);
        let up = proc.uplink_terms(&real, &p).unwrap().total();
        let down = proc.downlink_terms(&real, &p).unwrap().total();
        let scale = 1.0 + r.frobenius_norm() + y_ue.frobenius_norm();
        for k in 0..p.users {
            prop_assert!((up[k] - r.get(k, 0)).norm() < 1e-9 * scale);
            prop_assert!((down[k] - y_ue.get(k, 0)).norm() < 1e-9 * scale);
        }
    }

    #[test]
    fn downlink_power_scales_only_downlink_driven_terms(seed in any::<u64>(), lambda in 0.1..10.0f64, zf in any::<bool>()) {
        let scheme = if zf { Scheme::Zf } else { Scheme::MrtMrc };
        let p = params_for(32, scheme, false, 0.5);
        let mut q = p.clone();
        q.p_d *= lambda;
        let stream = RngStream::new(seed, 12);
        let real = ChannelRealization::sample(&p, &stream, true).unwrap();
        let proc = LinearProcessing::new(&real.g, &p).unwrap();
        let (u1, u2) = (proc.uplink_terms(&real, &p).unwrap(), proc.uplink_terms(&real, &q).unwrap());
        let (d1, d2) = (proc.downlink_terms(&real, &p).unwrap(), proc.downlink_terms(&real, &q).unwrap());
        let s = lambda.sqrt();
        for k in 0..p.users {
            let tol = 1e-9 * (1.0 + u1.si_direct[k].norm() + u1.si_reflected[k].norm() + d1.desired[k].norm());
            prop_assert!((u2.si_direct[k] - u1.si_direct[k] * s).norm() < tol);
            prop_assert!((u2.si_reflected[k] - u1.si_reflected[k] * s).norm() < tol);
            prop_assert_eq!(u2.desired[k], u1.desired[k]);
            prop_assert_eq!(u2.noise[k], u1.noise[k]);
            prop_assert!((d2.desired[k] - d1.desired[k] * s).norm() < tol);
            prop_assert_eq!(d2.si_direct[k], d1.si_direct[k]);
            prop_assert_eq!(d2.si_reflected[k], d1.si_reflected[k]);
        }
    }

    #[test]
    fn single_user_projection_matches_double_sum(seed in any::<u64>(), m in 2..24usize) {
        let mut rng = RngStream::new(seed, 13);
        let g = fdmimo::numerics::cscg_sample(&mut rng, m, 1);
        let b = fdmimo::numerics::cscg_sample(&mut rng, m, m);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..m {
            for j in 0..m {
                acc += g.get(i, 0).conj() * b.get(i, j) * g.get(j, 0).conj();
            }
        }
        let expected = acc.norm() / (m as f64).powf(1.5);
        let got = si_projection_statistic(&g, &b).unwrap();
        prop_assert!((got - expected).abs() < 1e-10 * (1.0 + expected));
    }
}
