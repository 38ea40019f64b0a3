//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (no libtest harness). It always exits 0 so that the
//! rest of the workspace suite still runs; set `QCYCLE_ACCEPTANCE_STRICT=1` to
//! turn any FAIL into a nonzero exit status.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use common::oracle::{AIRY, BESSEL_J};
use qcycle::analytic::{asymptotic_n_exc, glued_width, xi_at_zero};
use qcycle::ermakov::{
    adiabatic_init, integrate_at, integrate_classical_pair, ClassicalInit, Trajectory,
};
use qcycle::kzm::{
    full_cycle, full_cycle_scan, gapped_cycle_scan, gapped_rate_scan, half_cycle_heat_scan,
    log_space, rate_independence_scan, universality_scan, ScanOptions,
};
use qcycle::observables::{excitation_distribution, fidelity, heat, n_exc};
use qcycle::protocols::{p_from_znu, start_time_for_adiabaticity};
use qcycle::specfun::{airy_gen, airy_wronskian, bessel_j};
use qcycle::spherical::{SphericalParams, SphericalSystem};
use qcycle::DriveSpec;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn options() -> ScanOptions {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    ScanOptions {
        workers,
        ..ScanOptions::default()
    }
}

/// The fidelity plateau for zν = 1, as quoted (four digits).
#[allow(clippy::approx_constant)]
const QUOTED_FIDELITY_ZNU1: f64 = 0.7071;

fn universal_plateau() -> Outcome {
    let znus = [0.5, 0.9, 1.3, 1.75, 2.2, 3.0];
    let scan = full_cycle_scan(&znus, 40.0, &options()).unwrap();
    let dn = scan.n_exc.max_relative_deviation();
    let df = scan.fidelity.max_relative_deviation();
    // zν = 1 is checked on its own against 0.7071 and 1
    let one = full_cycle_scan(&[1.0], 40.0, &options()).unwrap();
    let (n1, f1) = (one.n_exc.mean[0], one.fidelity.mean[0]);
    let ok1 = (n1 - 1.0).abs() <= 0.01 && (f1 / QUOTED_FIDELITY_ZNU1 - 1.0).abs() <= 0.01;
    outcome(
        dn <= 0.01 && df <= 0.01 && ok1,
        format!(
            "max rel dev n_exc {dn:.2e}, fidelity {df:.2e}; zν=1: n_exc {n1:.5}, fidelity {f1:.5}"
        ),
    )
}

fn rate_independence() -> Outcome {
    let scan = rate_independence_scan(1.0, &[0.1, 1.0, 10.0], 40.0, &options()).unwrap();
    let spread = scan.relative_spread();
    outcome(
        spread <= 0.005,
        format!(
            "plateaus {:?}, spread {spread:.2e} (≤ 5e-3)",
            round(&scan.mean)
        ),
    )
}

fn kzm_exponent() -> Outcome {
    let deltas = log_space(1e-3, 1e-1, 8);
    let mut pass = true;
    let mut parts = Vec::new();
    for znu in [0.5, 1.0, 2.0] {
        let scan = half_cycle_heat_scan(znu, &deltas, &options()).unwrap();
        let err = (scan.fit.exponent - scan.reference_exponent).abs();
        pass &= err <= 0.02;
        parts.push(format!(
            "zν={znu}: {:.4} vs {:.4}",
            scan.fit.exponent, scan.reference_exponent
        ));
    }
    outcome(pass, parts.join("; "))
}

fn analytic_equivalence() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for znu in [0.5, 1.0, 2.0] {
        let d = DriveSpec::power_law(znu, 1.0).unwrap();
        let init = adiabatic_init(&d, start_time_for_adiabaticity(&d, 1e-6)).unwrap();
        let times: Vec<f64> = (0..=400).map(|i| -20.0 + 0.1 * i as f64).collect();
        let traj = integrate_at(&d, init, &times, 1e-10).unwrap();
        let mut worst = 0.0f64;
        let mut at_zero = None;
        for s in &traj.samples {
            let (xa, _) = glued_width(znu, s.t).unwrap();
            worst = worst.max((s.xi - xa).abs() / xa);
            if s.t == 0.0 {
                at_zero = Some(*s);
            }
        }
        let z = at_zero.unwrap();
        let p = p_from_znu(znu);
        let e_xi = (z.xi * z.xi - xi_at_zero(p).unwrap().powi(2)).abs();
        // approached from t < 0: −cot(pπ) sgn(t) = +cot(pπ)
        let want = -(1.0 / (p * PI).tan()) * (-1.0);
        let e_d = (2.0 * z.xi * z.xi_dot - want).abs();
        pass &= worst <= 1e-6 && e_xi <= 1e-5 && e_d <= 1e-5;
        parts.push(format!(
            "zν={znu}: max rel {worst:.1e}, ξ²(0) {e_xi:.1e}, 2ξξ̇ {e_d:.1e}"
        ));
    }
    outcome(pass, parts.join("; "))
}

fn suite_drives() -> Vec<DriveSpec> {
    vec![
        DriveSpec::power_law(0.5, 1.0).unwrap(),
        DriveSpec::power_law(1.0, 0.1).unwrap(),
        DriveSpec::power_law(3.0, 1.0).unwrap(),
        DriveSpec::gapped(0.5, 1.0, 2.0).unwrap(),
        DriveSpec::gapped(1.0, 0.05, 1.0).unwrap(),
        DriveSpec::corrected(0.5, 1.0, 0.01, 2).unwrap(),
    ]
}

fn suite_trajectories() -> Vec<Trajectory> {
    let opts = ScanOptions {
        samples: 2001,
        ..options()
    };
    suite_drives()
        .iter()
        .map(|d| full_cycle(d, 20.0 / d.delta.powf(d.znu / (1.0 + d.znu)), &opts).unwrap())
        .collect()
}

fn exact_identities() -> Outcome {
    let (mut e_f, mut e_q, mut e_m) = (0.0f64, 0.0f64, 0.0f64);
    let mut checked = 0usize;
    for traj in suite_trajectories() {
        for (i, s) in traj.samples.iter().enumerate() {
            let w = traj.drive.omega(s.t);
            if w == 0.0 {
                continue;
            }
            let n = n_exc(s, w);
            let f = fidelity(s, w);
            e_f = e_f.max((1.0 / (f * f) - n - 1.0).abs() / (1.0 + n));
            e_q = e_q.max((heat(s, w) - w * n).abs() / (w * (1.0 + n)));
            if i % 50 == 0 {
                let mut n_max = 64;
                let dist = loop {
                    let d = excitation_distribution(s, w, n_max).unwrap();
                    if d.moment_tail_bound <= 1e-10 * (1.0 + n) || n_max > 1 << 22 {
                        break d;
                    }
                    n_max *= 2;
                };
                let m = dist.first_moment();
                e_m = e_m.max((m - n).abs().max(dist.moment_tail_bound) / (1.0 + n));
            }
            checked += 1;
        }
    }
    outcome(
        e_f <= 1e-12 && e_q <= 1e-12 && e_m <= 1e-8,
        format!(
            "{checked} samples: |1/f²−n−1| {e_f:.1e}, |Q−ωn| {e_q:.1e} (rel. to 1+n); moment {e_m:.1e}"
        ),
    )
}

fn wronskian_conservation() -> Outcome {
    let mut drift = 0.0f64;
    for d in suite_drives() {
        let t = 20.0 / d.delta.powf(d.znu / (1.0 + d.znu));
        let pair = integrate_classical_pair(
            &d,
            -t,
            ClassicalInit { x: 1.0, v: 0.0 },
            ClassicalInit { x: 0.0, v: 1.0 },
            t,
            1e-13,
        )
        .unwrap();
        drift = drift.max(pair.max_wronskian_drift());
    }
    let mut airy = 0.0f64;
    for i in 1..=50 {
        let p = 0.5 * i as f64 / 50.0;
        let w = airy_wronskian(p);
        for j in 0..=60 {
            let t = 0.1 + 29.9 * j as f64 / 60.0;
            airy = airy.max((airy_gen(p, t).unwrap().wronskian() - w).abs() / w.abs());
        }
    }
    outcome(
        drift <= 1e-8 && airy <= 1e-8,
        format!("classical pair drift {drift:.1e}; generalized Airy identity {airy:.1e}"),
    )
}

fn gapped_cycles() -> Outcome {
    let s0s: Vec<f64> = (0..=10).map(f64::from).collect();
    let mut pass = true;
    let mut parts = Vec::new();
    for znu in [0.5, 1.0] {
        let scan = gapped_cycle_scan(znu, &s0s, 40.0, &options()).unwrap();
        let q = &scan.mean;
        let monotone = q.windows(2).all(|w| w[1] < w[0]);
        let ratio = q[10] / q[0];
        pass &= monotone && ratio <= 0.1;
        parts.push(format!(
            "zν={znu}: Q(0)={:.3e} Q(10)={:.3e} ratio {ratio:.1e} monotone {monotone}",
            q[0], q[10]
        ));
    }
    let opts = ScanOptions {
        tol: 1e-12,
        ..options()
    };
    for znu in [0.5, 1.0] {
        let scan = gapped_rate_scan(znu, 1.0, &log_space(1e-3, 1e-1, 8), 10.0, &opts).unwrap();
        pass &= scan.fit.exponent >= 2.0;
        parts.push(format!("zν={znu}: δ-slope {:.4} (≥ 2)", scan.fit.exponent));
    }
    outcome(pass, parts.join("; "))
}

fn corrected_universality() -> Outcome {
    let scan = universality_scan(0.5, &[0.0, 0.005, 0.01], 2, 40.0, &options()).unwrap();
    let spread = scan.relative_spread();
    let dev = scan.max_relative_deviation();
    outcome(
        spread <= 0.01 && dev <= 0.01,
        format!(
            "plateaus {:?} vs {:.5}: spread {spread:.2e}, max dev {dev:.2e}",
            round(&scan.mean),
            asymptotic_n_exc(0.5)
        ),
    )
}

fn spherical_system(delta: f64, g: f64) -> SphericalSystem {
    SphericalSystem::new(SphericalParams {
        sites: 256,
        alpha: 0.5,
        g,
        coupling: 1.0,
        drive: DriveSpec::power_law(0.5, delta).unwrap(),
    })
    .unwrap()
}

fn spherical_model() -> Outcome {
    let runs: Vec<_> = [0.02, 0.01, 0.005]
        .iter()
        .map(|&d| {
            spherical_system(d, 0.1)
                .run_cycle(40.0, 4001, 1e-3, 0.25, 1e-10)
                .unwrap()
        })
        .collect();
    let slope = |a: usize, b: usize| (runs[a].deviation_at_zero / runs[b].deviation_at_zero).log2();
    let s_main = slope(0, 1);
    let s_next = slope(1, 2);
    let plateau_dev = runs[..2]
        .iter()
        .map(|r| (r.zero_mode.mean / r.reference - 1.0).abs())
        .fold(0.0, f64::max);

    // decoupled limit against independent single-mode integrations
    let free = spherical_system(0.01, 0.0);
    let cycle = free.run_cycle(40.0, 801, 1e-3, 0.25, 1e-13).unwrap();
    let ev = &cycle.evolution;
    let mut worst = 0.0f64;
    for q in 0..=free.sites() / 2 {
        let d = free.decoupled_mode_drive(q).unwrap();
        let init = qcycle::ermakov::wkb_init(&d, cycle.t_start).unwrap();
        let traj = integrate_at(&d, init, &ev.times, 1e-13).unwrap();
        for (s, m) in traj.samples.iter().zip(&ev.modes[q]) {
            worst = worst
                .max((s.xi - m.xi).abs() / m.xi)
                .max((s.xi_dot - m.xi_dot).abs() / m.xi);
        }
    }
    outcome(
        plateau_dev <= 0.05 && (1.8..=2.2).contains(&s_main) && worst <= 1e-9,
        format!(
            "q=0 plateau {:.4}/{:.4} (max dev {plateau_dev:.1e}); deviation slope δ 0.02→0.01 {s_main:.3} (0.01→0.005: {s_next:.3}); g=0 match {worst:.1e}",
            runs[0].zero_mode.mean, runs[1].zero_mode.mean
        ),
    )
}

fn special_functions() -> Outcome {
    let bessel = BESSEL_J
        .iter()
        .filter(|r| r.1 <= 10.0)
        .map(|&(nu, x, want)| ((bessel_j(nu, x).unwrap() - want) / want).abs())
        .fold(0.0, f64::max);
    let airy = AIRY
        .iter()
        .map(|&(t, ai, _, bi, _)| {
            let a = airy_gen(1.0 / 3.0, t).unwrap();
            ((a.ai - ai) / ai).abs().max(((a.bi - bi) / bi).abs())
        })
        .fold(0.0, f64::max);
    outcome(
        bessel <= 1e-10 && airy <= 1e-9,
        format!("J_ν max rel {bessel:.1e}; Ai/Bi at p=1/3 max rel {airy:.1e}"),
    )
}

fn round(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| (x * 1e5).round() / 1e5).collect()
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("universal plateau", universal_plateau),
        ("rate independence", rate_independence),
        ("KZM exponent", kzm_exponent),
        ("analytic-numeric equivalence", analytic_equivalence),
        ("exact identities", exact_identities),
        ("Wronskian conservation", wronskian_conservation),
        ("gapped cycles", gapped_cycles),
        ("universality under corrections", corrected_universality),
        ("spherical model", spherical_model),
        ("special functions", special_functions),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 && std::env::var_os("QCYCLE_ACCEPTANCE_STRICT").is_some_and(|v| v == "1") {
        std::process::exit(1);
    }
}
