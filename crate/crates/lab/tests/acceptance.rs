//! Acceptance suite on the reference system. Prints one PASS/FAIL line per
//! criterion and exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};
use shub_core::ergodic::{
    birkhoff_compare, central_exponent, contracting_fraction, growth_rate_table, lyapunov_spectrum,
    periodic_discrepancy, random_start, Method, Observable,
};
use shub_core::periodic::{bowen_clusters, census, solve_fiber_fixed_points, FinderConfig, Stability};
use shub_core::perturbation::{integrate_flow, invert_flow};
use shub_core::semiconj::{h_approx, log_residual_slope, residual_sweep, semiconjugacy_residual};
use shub_core::torus::{enumerate_periodic_exact, torus_distance};
use shub_core::{validate_params, FiberChart, IntMatrix2, ProductPoint, RationalPoint, ShubParams, ShubSystem, TorusPoint};
use shub_lab::{run, ExperimentConfig};

type Outcome = (bool, String);

fn reference() -> ShubSystem {
    validate_params(ShubParams::reference()).unwrap()
}

fn unperturbed() -> ShubSystem {
    validate_params(ShubParams::reference().unperturbed()).unwrap()
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let t0 = Instant::now();
    let (ok, detail) = f();
    let el = t0.elapsed();
    let in_time = el < limit;
    (
        ok && in_time,
        format!("{detail}; {:.2}s (limit {}s{})", el.as_secs_f64(), limit.as_secs(), if in_time { "" } else { ", exceeded" }),
    )
}

fn oracle_det(m: [i128; 4], n: u32) -> u128 {
    let mut p = [1i128, 0, 0, 1];
    for _ in 0..n {
        p = [
            p[0] * m[0] + p[1] * m[2],
            p[0] * m[1] + p[1] * m[3],
            p[2] * m[0] + p[3] * m[2],
            p[2] * m[1] + p[3] * m[3],
        ];
    }
    ((p[0] - 1) * (p[3] - 1) - p[1] * p[2]).unsigned_abs()
}

fn c1_lattice_counts() -> Outcome {
    timed(Duration::from_secs(1), || {
        let mut ok = true;
        let mut last = String::new();
        for m in [[3i128, 2, 1, 1], [2, 1, 1, 1]] {
            let mat = IntMatrix2::new(m[0], m[1], m[2], m[3]);
            for n in 1..=8 {
                let got = enumerate_periodic_exact(&mat, n, u128::MAX).unwrap().len() as u128;
                let want = oracle_det(m, n);
                ok &= got == want;
                last = format!("{mat} n=8: {got} = {want}");
            }
        }
        (ok, last)
    })
}

fn c2_da_dichotomy() -> Outcome {
    timed(Duration::from_secs(5), || {
        let s = reference();
        let c = census(&s, 1, &FinderConfig::default()).unwrap();
        let q = RationalPoint::new(0, 1, 2);
        let over_p: Vec<_> = c.classes.iter().filter(|k| k.base_exact == RationalPoint::ORIGIN).collect();
        let over_q: Vec<_> = c.classes.iter().filter(|k| k.base_exact == q).collect();
        let p_ok = over_p.len() == 1
            && over_p[0].len() == 1
            && over_p[0].solutions[0].stability == Stability::SaddleIndex2
            && torus_distance(over_p[0].solutions[0].fiber, TorusPoint::ORIGIN) < 1e-12;
        let mut q_ok = over_q.len() == 1 && over_q[0].len() == 3;
        let mut off_leaf: f64 = 0.0;
        if q_ok {
            let sols = &over_q[0].solutions;
            q_ok &= sols[1].stability == Stability::SourceIndex3
                && torus_distance(sols[1].fiber, TorusPoint::ORIGIN) < 1e-12
                && sols[0].stability == Stability::SaddleIndex2
                && sols[2].stability == Stability::SaddleIndex2;
            for sol in sols {
                off_leaf = off_leaf.max(s.chart().local(TorusPoint::ORIGIN, sol.fiber).u1.abs());
            }
            q_ok &= off_leaf < 1e-6;
        }
        (
            c.total_skew_count == 4 && p_ok && q_ok,
            format!("{} points; over p saddle {p_ok}; over q source + 2 saddles {q_ok}, off-leaf {off_leaf:e}", c.total_skew_count),
        )
    })
}

fn c3_c4_counts() -> (Outcome, Outcome) {
    let s = reference();
    let t0 = Instant::now();
    let cs: Vec<_> = (1..=5).map(|n| census(&s, n, &FinderConfig::default()).unwrap()).collect();
    let el = t0.elapsed();
    let want = [2u128, 60, 800, 8640, 87362];
    let mut ok = el < Duration::from_secs(600);
    let mut detail = Vec::new();
    for (c, w) in cs.iter().zip(want) {
        ok &= c.total_product_count == w && c.sandwich_holds();
        detail.push(format!("{}<={}", c.total_product_count, c.total_skew_count));
    }
    let c3 = (ok, format!("{}; {:.2}s (limit 600s)", detail.join(", "), el.as_secs_f64()));

    let table = growth_rate_table(&s, &cs);
    let target = (2.0 + 3f64.sqrt()).ln() + ((3.0 + 5f64.sqrt()) / 2.0).ln();
    let mut ok = (table.h_top - target).abs() < 1e-12 && (target - 2.27938).abs() < 1e-5;
    let mut detail = Vec::new();
    for r in table.rows.iter().filter(|r| r.n >= 4) {
        let bound = 3f64.ln() / r.n as f64 + 0.02;
        ok &= (r.skew_rate - target).abs() <= bound;
        detail.push(format!("n={}: |{:.5} - {:.5}| <= {:.4}", r.n, r.skew_rate, target, bound));
    }
    (c3, (ok, detail.join(", ")))
}

fn c5_lyapunov() -> Outcome {
    timed(Duration::from_secs(30), || {
        let s = reference();
        let start = random_start(2024, 0);
        let n = 20_000;
        let qr = lyapunov_spectrum(&s, start, n, Method::Qr4d).unwrap();
        let tri = lyapunov_spectrum(&s, start, n, Method::Triangular).unwrap();
        let mut rest = qr.exponents.to_vec();
        let mut matched = true;
        for target in [-1.31696, 0.96242, 1.31696] {
            let (j, d) = rest
                .iter()
                .enumerate()
                .map(|(j, e)| (j, (e - target).abs()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            matched &= d <= 5e-3;
            rest.remove(j);
        }
        let lc = rest[0];
        let in_band = (-0.9625..=0.4378).contains(&lc);
        let agree = qr.max_difference(&tri);
        (
            matched && in_band && agree < 1e-2,
            format!(
                "qr4d {:?}; three values matched {matched}; centre {lc:.5} in [-0.9625, 0.4378] {in_band}; method gap {agree:.1e}",
                qr.exponents.map(|e| (e * 1e5).round() / 1e5)
            ),
        )
    })
}

fn c6_contracting() -> Outcome {
    timed(Duration::from_secs(120), || {
        let f = contracting_fraction(&reference(), 500, 20_000, 6).unwrap();
        let q = ProductPoint::new(TorusPoint::new(0.0, 0.5), TorusPoint::ORIGIN);
        let witness = central_exponent(&reference(), q, 1000).unwrap();
        (f >= 0.95 && witness > 0.0, format!("fraction {f}; centre exponent at (q, theta0) {witness:.5}"))
    })
}

fn c7_semiconj() -> Outcome {
    timed(Duration::from_secs(60), || {
        let s = reference();
        let res = semiconjugacy_residual(&s, 1000, 25, 7).unwrap();
        let rows = residual_sweep(&s, &[10, 15, 20, 25], 1000, 7).unwrap();
        let slope = log_residual_slope(&rows).unwrap_or(f64::NAN);
        let ls = s.l().lambda_s.ln();
        let slope_ok = ((slope - ls) / ls).abs() <= 0.5;
        let class = solve_fiber_fixed_points(&s, RationalPoint::new(0, 1, 2), RationalPoint::ORIGIN, 1, &FinderConfig::default()).unwrap();
        let image_of = |i: usize| h_approx(&s, class.solutions[i].point(class.base_point), 25).unwrap();
        let centre = image_of(1);
        let collapse = image_of(0).distance(&centre).max(image_of(2).distance(&centre));
        (
            res < 1e-9 && slope_ok && collapse < 1e-6,
            format!("residual {res:.2e}; slope {slope:.4} vs {ls:.4}; collapse {collapse:.1e}"),
        )
    })
}

fn c8_equidistribution() -> Outcome {
    let s = reference();
    let vals: Vec<f64> = (3..=5)
        .map(|n| {
            let c = census(&s, n, &FinderConfig::default()).unwrap();
            periodic_discrepancy(&s, &c, 25, 4).unwrap().discrepancy
        })
        .collect();
    let ok = vals[1] < vals[0] && vals[2] < vals[1];
    (ok, format!("discrepancy n=3,4,5: {vals:?}"))
}

fn c9_bowen() -> Outcome {
    let s = reference();
    let mut largest = 0;
    for n in 1..=4 {
        let c = census(&s, n, &FinderConfig::default()).unwrap();
        let clusters = bowen_clusters(&s, &c, 0.02, n as usize).unwrap();
        largest = largest.max(clusters.iter().map(|k| k.size()).max().unwrap());
    }
    (largest <= 3, format!("largest cluster {largest} over n <= 4 at epsilon 0.02"))
}

fn c10_flow_kernel() -> Outcome {
    let s = reference();
    let bump = *s.bump();
    let t = 1.4;
    let start = FiberChart::new(0.003, 0.01);
    let fr = integrate_flow(&bump, 0.0, start, t, 64).unwrap();
    let closed = 0.01 * t.exp();
    let closed_err = ((fr.endpoint.u2 - closed) / closed).abs();
    let jac_closed = ((fr.jacobian[1][1] - t.exp()) / t.exp()).abs();

    let off = FiberChart::new(0.1, 0.12);
    let id = integrate_flow(&bump, 0.0, off, t, 64).unwrap();
    let far = integrate_flow(&bump, 0.2, FiberChart::new(0.0, 0.05), t, 64).unwrap();
    let identity = id.endpoint == off && id.steps_taken == 0 && far.endpoint == FiberChart::new(0.0, 0.05) && far.jacobian == [[1.0, 0.0], [0.0, 1.0]];

    let mut fd_err: f64 = 0.0;
    let mut inv_err: f64 = 0.0;
    for i in 0..50 {
        let a = i as f64 * 2.399_963;
        let r = 0.14 * ((i % 10) as f64 + 0.5) / 10.0;
        let u = FiberChart::new(r * a.cos(), r * a.sin());
        let bd = 0.15 * (i % 7) as f64 / 7.0;
        let f = integrate_flow(&bump, bd, u, t, 64).unwrap();
        let h = 1e-6;
        for j in 0..2 {
            let d = if j == 0 { (h, 0.0) } else { (0.0, h) };
            let p = integrate_flow(&bump, bd, FiberChart::new(u.u1 + d.0, u.u2 + d.1), t, 64).unwrap();
            let m = integrate_flow(&bump, bd, FiberChart::new(u.u1 - d.0, u.u2 - d.1), t, 64).unwrap();
            let fd = (p.endpoint.u2 - m.endpoint.u2) / (2.0 * h);
            let exact = f.jacobian[1][j];
            fd_err = fd_err.max((fd - exact).abs() / exact.abs().max(1.0));
        }
        let back = invert_flow(&bump, bd, f.endpoint, t, 64).unwrap();
        inv_err = inv_err.max((back.u1 - u.u1).hypot(back.u2 - u.u2));
    }
    (
        closed_err < 1e-8 && jac_closed < 1e-8 && identity && fd_err < 1e-5 && inv_err < 1e-9,
        format!("closed form {closed_err:.1e}/{jac_closed:.1e}; identity {identity}; jacobian vs FD {fd_err:.1e}; inverse {inv_err:.1e}"),
    )
}

fn c11_unstable_area() -> Outcome {
    let s = reference();
    let bound = s.phi().lambda_u * s.l().lambda_u;
    let growth: Vec<f64> = (0..1000)
        .map(|i| s.unstable_area_growth(random_start(11, i), 20).unwrap())
        .collect();
    let worst = growth.iter().copied().fold(f64::INFINITY, f64::min);
    let below = growth.iter().filter(|&&g| g < bound * (1.0 - 1e-3)).count();
    let mean_log = growth.iter().map(|g| g.ln()).sum::<f64>() / growth.len() as f64;
    (
        below == 0,
        format!(
            "worst {worst:.4} vs beta1 beta2 = {bound:.4}; {below}/1000 below; mean log growth {mean_log:.5} vs {:.5}",
            bound.ln()
        ),
    )
}

fn c12_birkhoff() -> Outcome {
    let n = 100_000;
    let obs = Observable::default_set();
    let r = birkhoff_compare(&reference(), 20, n, &obs, 12).unwrap();
    let oracle = birkhoff_compare(&unperturbed(), 20, n, &obs, 13).unwrap();
    let bias = oracle.max_bias().into_iter().fold(0.0, f64::max);
    let tol = 3.0 / (n as f64).sqrt();
    (
        r.max_spread < 0.02 && bias < tol,
        format!("spread {:.4}; unperturbed max bias {bias:.4} vs {tol:.4}", r.max_spread),
    )
}

fn csv_hashes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), Sha256::digest(std::fs::read(&p).unwrap()).to_vec()))
        .collect()
}

fn c13_determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let mut runs = Vec::new();
    for (i, threads) in [1, 4, 8, 8].into_iter().enumerate() {
        let mut cfg = ExperimentConfig::default();
        cfg.periodic.n_range = [1, 3];
        cfg.bowen.max_n = 3;
        cfg.lyapunov.horizon = 2000;
        cfg.contracting.samples = 50;
        cfg.contracting.horizon = 2000;
        cfg.semiconj.samples = 200;
        cfg.equidist.n_range = [2, 3];
        cfg.birkhoff.starts = 8;
        cfg.birkhoff.horizon = 5000;
        cfg.thread_count = threads;
        cfg.output_dir = tmp.path().join(format!("run{i}"));
        run(&cfg).unwrap();
        runs.push(csv_hashes(&cfg.output_dir));
    }
    let same = runs.iter().all(|h| h == &runs[0]);
    (same && runs[0].len() >= 10, format!("{} CSVs identical across threads 1, 4, 8, 8: {same}", runs[0].len()))
}

fn main() -> ExitCode {
    let (c3, c4) = c3_c4_counts();
    let results: Vec<(&str, Outcome)> = vec![
        ("1 exact lattice counts", c1_lattice_counts()),
        ("2 DA dichotomy at n=1", c2_da_dichotomy()),
        ("3 count sandwich n=1..5", c3),
        ("4 entropy growth", c4),
        ("5 Lyapunov structure", c5_lyapunov()),
        ("6 mostly contracting", c6_contracting()),
        ("7 semi-conjugacy", c7_semiconj()),
        ("8 equidistribution trend", c8_equidistribution()),
        ("9 Bowen clusters", c9_bowen()),
        ("10 flow kernel", c10_flow_kernel()),
        ("11 unstable Jacobian bound", c11_unstable_area()),
        ("12 physical-measure surrogate", c12_birkhoff()),
        ("13 determinism", c13_determinism()),
    ];
    let mut failed = 0;
    for (name, (ok, detail)) in &results {
        println!("{} criterion {name}: {detail}", if *ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
