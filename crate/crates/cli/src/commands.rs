//! One function per subcommand. Each runs its computation to completion and
//! returns the files to write plus a summary; nothing touches the disk here.

use std::f64::consts::PI;

use qcycle::analytic::{asymptotic_fidelity, asymptotic_n_exc, glued_width, xi_at_zero};
use qcycle::ermakov::{
    adiabatic_init, integrate_at, integrate_classical_pair, ClassicalInit, Trajectory,
};
use qcycle::kzm::{
    cycle_plateaus, full_cycle, gapped_rate_scan, half_cycle_heat_scan, par_map, start_time,
    CyclePlateaus, ScanOptions,
};
use qcycle::observables::{excitation_distribution, fidelity, heat, n_exc};
use qcycle::protocols::{
    freezing_time, p_from_znu, rescale_to_unit_rate, start_time_for_adiabaticity,
};
use qcycle::specfun::{airy_gen, airy_wronskian};
use qcycle::spherical::{SphericalParams, SphericalSystem};
use qcycle::DriveSpec;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{CommandKind, DriveChoice, ModeSelection, RunConfig};
use crate::output::{csv_row, fmt_float, CSV_HEADER};
use crate::CliError;

/// Adiabaticity of the drive where single-mode runs start.
const START_ADIABATICITY: f64 = 1e-3;

pub struct Report {
    pub files: Vec<(String, Vec<String>)>,
    pub results: Value,
    /// `false` when a verification check failed.
    pub passed: bool,
}

pub fn execute(cfg: &RunConfig) -> Result<Report, CliError> {
    match cfg.command {
        CommandKind::HalfCycle => half_cycle(cfg),
        CommandKind::FullCycle => full_cycle_cmd(cfg),
        CommandKind::Gapped => gapped(cfg),
        CommandKind::Universality => universality(cfg),
        CommandKind::KzmFit => kzm_fit(cfg),
        CommandKind::Spherical => spherical(cfg),
        CommandKind::Verify => verify(cfg),
    }
}

fn scan_options(cfg: &RunConfig) -> ScanOptions {
    ScanOptions {
        tol: cfg.tol,
        workers: cfg.workers,
        window: cfg.window,
        start_adiabaticity: START_ADIABATICITY,
        samples: cfg.samples,
    }
}

fn trajectory_csv(traj: &Trajectory, time_scale: f64) -> Vec<String> {
    let mut lines = Vec::with_capacity(traj.samples.len() + 1);
    lines.push(CSV_HEADER.to_string());
    for (s, &phase) in traj.samples.iter().zip(&traj.phase) {
        lines.push(csv_row(s, traj.drive.omega(s.t), phase, time_scale));
    }
    lines
}

fn rel_dev(value: f64, reference: f64) -> f64 {
    ((value - reference) / reference).abs()
}

fn plateau_json(c: &CyclePlateaus) -> Value {
    json!({
        "n_exc": { "mean": c.n_exc.mean, "amplitude": c.n_exc.amplitude },
        "fidelity": { "mean": c.fidelity.mean, "amplitude": c.fidelity.amplitude },
        "heat": { "mean": c.heat.mean, "amplitude": c.heat.amplitude },
        "final_heat": c.final_heat,
        "final_n_exc": c.final_n_exc,
    })
}

fn half_cycle(cfg: &RunConfig) -> Result<Report, CliError> {
    let drive = cfg.drive_spec()?;
    let r = rescale_to_unit_rate(&drive);
    let t_start = start_time(&drive, START_ADIABATICITY);
    let n = cfg.samples;
    let times: Vec<f64> = (0..n)
        .map(|i| t_start * (1.0 - i as f64 / (n - 1) as f64))
        .collect();
    let traj = integrate_at(&drive, adiabatic_init(&drive, t_start)?, &times, cfg.tol)?;
    let end = traj.last();
    let q0 = heat(end, drive.omega(0.0));
    let mut results = json!({
        "t_start": t_start,
        "heat_at_critical_point": q0,
        "xi_squared_at_critical_point": end.xi * end.xi,
        "two_xi_xi_dot_at_critical_point": 2.0 * end.xi * end.xi_dot,
    });
    if cfg.drive == DriveChoice::PowerLaw {
        let p = p_from_znu(cfg.znu);
        let xi2_ref = r.width_scale.powi(2) * xi_at_zero(p)?.powi(2);
        let xxd_ref = r.width_scale.powi(2) / r.time_scale / (p * PI).tan();
        let impulse = drive.omega(freezing_time(&drive)?) / 4.0;
        results["reference"] = json!({
            "xi_squared_at_critical_point": xi2_ref,
            "two_xi_xi_dot_at_critical_point": xxd_ref,
            "impulse_heat": impulse,
            "freezing_time": freezing_time(&drive)?,
        });
        results["relative_deviation"] = json!({
            "xi_squared_at_critical_point": rel_dev(end.xi * end.xi, xi2_ref),
            "two_xi_xi_dot_at_critical_point": rel_dev(2.0 * end.xi * end.xi_dot, xxd_ref),
        });
    }
    Ok(Report {
        files: vec![("trajectory.csv".into(), trajectory_csv(&traj, r.time_scale))],
        results,
        passed: true,
    })
}

fn full_cycle_cmd(cfg: &RunConfig) -> Result<Report, CliError> {
    let drive = cfg.drive_spec()?;
    let r = rescale_to_unit_rate(&drive);
    let traj = full_cycle(&drive, r.physical_time(cfg.s_end), &scan_options(cfg))?;
    let c = cycle_plateaus(&traj, cfg.window)?;
    let mut results = json!({ "horizon": r.physical_time(cfg.s_end), "plateau": plateau_json(&c) });
    if cfg.drive == DriveChoice::PowerLaw {
        let (n_ref, f_ref) = (asymptotic_n_exc(cfg.znu), asymptotic_fidelity(cfg.znu));
        results["reference"] = json!({ "n_exc": n_ref, "fidelity": f_ref });
        results["relative_deviation"] = json!({
            "n_exc": rel_dev(c.n_exc.mean, n_ref),
            "fidelity": rel_dev(c.fidelity.mean, f_ref),
        });
    }
    Ok(Report {
        files: vec![("trajectory.csv".into(), trajectory_csv(&traj, r.time_scale))],
        results,
        passed: true,
    })
}

fn gapped(cfg: &RunConfig) -> Result<Report, CliError> {
    let opts = scan_options(cfg);
    let runs = par_map(cfg.workers, &cfg.offsets, |&s0| {
        let drive = DriveSpec::gapped(cfg.znu, 1.0, s0)?;
        let traj = full_cycle(&drive, cfg.s_end, &opts)?;
        let c = cycle_plateaus(&traj, cfg.window)?;
        Ok((traj, c))
    })?;
    let heats: Vec<f64> = runs.iter().map(|(_, c)| c.final_heat).collect();
    let files = runs
        .iter()
        .enumerate()
        .map(|(i, (traj, _))| (format!("gapped_{i:03}.csv"), trajectory_csv(traj, 1.0)))
        .collect();
    let mut results = json!({
        "offsets": cfg.offsets,
        "final_heat": heats,
        "heat_amplitude": runs.iter().map(|(_, c)| c.heat.amplitude).collect::<Vec<_>>(),
        "final_n_exc": runs.iter().map(|(_, c)| c.final_n_exc).collect::<Vec<_>>(),
        "monotone_decreasing": heats.windows(2).all(|w| w[1] < w[0]),
        "last_to_first_heat_ratio": heats[heats.len() - 1] / heats[0],
        "gapless_reference_final_heat":
            DriveSpec::power_law(cfg.znu, 1.0)?.omega(cfg.s_end) * asymptotic_n_exc(cfg.znu),
    });
    if let Some(deltas) = &cfg.deltas {
        let t0 = if cfg.t0 > 0.0 { cfg.t0 } else { 1.0 };
        let scan = gapped_rate_scan(cfg.znu, t0, deltas, 10.0, &opts)?;
        results["rate_scan"] = json!({
            "t0": t0,
            "deltas": scan.deltas,
            "n_exc": scan.n_exc,
            "kink_reference": scan.reference,
            "fit": scan.fit,
        });
    }
    Ok(Report {
        files,
        results,
        passed: true,
    })
}

fn universality(cfg: &RunConfig) -> Result<Report, CliError> {
    let opts = scan_options(cfg);
    let runs = par_map(cfg.workers, &cfg.gammas, |&gamma| {
        let drive = DriveSpec::corrected(cfg.znu, 1.0, gamma, cfg.n_corr)?;
        let traj = full_cycle(&drive, cfg.s_end, &opts)?;
        let c = cycle_plateaus(&traj, cfg.window)?;
        Ok((traj, c))
    })
    .map_err(|e| match e {
        qcycle::Error::InvalidDrive(m) => CliError::Config(m),
        other => other.into(),
    })?;
    let means: Vec<f64> = runs.iter().map(|(_, c)| c.n_exc.mean).collect();
    let reference = asymptotic_n_exc(cfg.znu);
    let lo = means.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let files = runs
        .iter()
        .enumerate()
        .map(|(i, (traj, _))| (format!("corrected_{i:03}.csv"), trajectory_csv(traj, 1.0)))
        .collect();
    let results = json!({
        "gammas": cfg.gammas,
        "n_exc_plateau": means,
        "n_exc_amplitude": runs.iter().map(|(_, c)| c.n_exc.amplitude).collect::<Vec<_>>(),
        "reference": reference,
        "relative_spread": (hi - lo) / lo,
        "max_relative_deviation": means.iter().map(|&m| rel_dev(m, reference)).fold(0.0, f64::max),
    });
    Ok(Report {
        files,
        results,
        passed: true,
    })
}

fn kzm_fit(cfg: &RunConfig) -> Result<Report, CliError> {
    let deltas = cfg.deltas.as_deref().unwrap_or_default();
    let scan = half_cycle_heat_scan(cfg.znu, deltas, &scan_options(cfg))?;
    let mut lines = vec!["delta,heat,impulse_heat".to_string()];
    for i in 0..scan.deltas.len() {
        lines.push(format!(
            "{},{},{}",
            fmt_float(scan.deltas[i]),
            fmt_float(scan.heat[i]),
            fmt_float(scan.impulse_heat[i])
        ));
    }
    let results = json!({
        "deltas": scan.deltas,
        "heat": scan.heat,
        "impulse_heat": scan.impulse_heat,
        "fit": scan.fit,
        "impulse_fit": scan.impulse_fit,
        "reference_exponent": scan.reference_exponent,
        "exponent_deviation": (scan.fit.exponent - scan.reference_exponent).abs(),
        "start_constant": scan.start_constant,
    });
    Ok(Report {
        files: vec![("heat_scan.csv".into(), lines)],
        results,
        passed: true,
    })
}

fn spherical(cfg: &RunConfig) -> Result<Report, CliError> {
    let drive = cfg.drive_spec()?;
    let sys = SphericalSystem::new(SphericalParams {
        sites: cfg.sites,
        alpha: cfg.alpha,
        g: cfg.g,
        coupling: 1.0,
        drive,
    })?;
    let cycle = sys.run_cycle(
        cfg.s_end,
        cfg.samples,
        START_ADIABATICITY,
        cfg.window,
        cfg.tol,
    )?;
    let ev = &cycle.evolution;
    let time_scale = rescale_to_unit_rate(&drive).time_scale;
    let modes: Vec<usize> = match &cfg.modes {
        ModeSelection::All => (0..sys.sites()).collect(),
        ModeSelection::List(list) => list.clone(),
    };
    let mut files = Vec::with_capacity(modes.len() + 1);
    for &q in &modes {
        let mut lines = vec![CSV_HEADER.to_string()];
        for i in 0..ev.times.len() {
            lines.push(csv_row(
                &ev.modes[q][i],
                ev.omega(q, i),
                ev.phases[q][i],
                time_scale,
            ));
        }
        files.push((format!("mode_{q:04}.csv"), lines));
    }
    let mut mass = vec!["t,s,mu_bare,mu_eff,nonzero_mode_deviation".to_string()];
    for i in 0..ev.times.len() {
        mass.push(format!(
            "{},{},{},{},{}",
            fmt_float(ev.times[i]),
            fmt_float(ev.times[i] / time_scale),
            fmt_float(ev.mu_bare[i]),
            fmt_float(ev.mu_eff[i]),
            fmt_float(ev.nonzero_mode_deviation(i))
        ));
    }
    files.push(("mu_eff.csv".into(), mass));
    let results = json!({
        "mu_c": sys.mu_c,
        "t_start": cycle.t_start,
        "horizon": cycle.horizon,
        "zero_mode_plateau": { "mean": cycle.zero_mode.mean, "amplitude": cycle.zero_mode.amplitude },
        "reference": cycle.reference,
        "relative_deviation": rel_dev(cycle.zero_mode.mean, cycle.reference),
        "nonzero_mode_deviation_at_critical_point": cycle.deviation_at_zero,
        "min_mu_eff": ev.min_mu_eff,
        "self_consistency_residual": ev.self_consistency_residual(),
        "modes_written": modes,
    });
    Ok(Report {
        files,
        results,
        passed: true,
    })
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    value: f64,
    threshold: f64,
    passed: bool,
}

fn check(name: &'static str, value: f64, threshold: f64) -> Check {
    Check {
        name,
        value,
        threshold,
        passed: value <= threshold,
    }
}

fn verify(cfg: &RunConfig) -> Result<Report, CliError> {
    let znu = cfg.znu;
    let p = p_from_znu(znu);
    let unit = DriveSpec::power_law(znu, 1.0)?;
    let mut checks = Vec::new();

    // closed form against direct integration through the crossing
    let init = adiabatic_init(&unit, start_time_for_adiabaticity(&unit, 1e-6))?;
    let times: Vec<f64> = (0..=400).map(|i| -20.0 + 0.1 * i as f64).collect();
    let traj = integrate_at(&unit, init, &times, cfg.tol)?;
    let mut worst = 0.0f64;
    for s in &traj.samples {
        let (xa, _) = glued_width(znu, s.t)?;
        worst = worst.max(rel_dev(s.xi, xa));
    }
    let z = traj.samples[200];
    checks.push(check("analytic_vs_numeric_width", worst, 1e-6));
    checks.push(check(
        "width_squared_at_zero",
        (z.xi * z.xi - xi_at_zero(p)?.powi(2)).abs(),
        1e-5,
    ));
    checks.push(check(
        "two_xi_xi_dot_at_zero",
        (2.0 * z.xi * z.xi_dot - 1.0 / (p * PI).tan()).abs(),
        1e-5,
    ));

    let pair = integrate_classical_pair(
        &unit,
        -20.0,
        ClassicalInit { x: 1.0, v: 0.0 },
        ClassicalInit { x: 0.0, v: 1.0 },
        20.0,
        cfg.tol.min(1e-12),
    )?;
    checks.push(check(
        "classical_wronskian_drift",
        pair.max_wronskian_drift(),
        1e-8,
    ));

    let mut airy = 0.0f64;
    for i in 1..=20 {
        let pp = 0.5 * i as f64 / 20.0;
        let w = airy_wronskian(pp);
        for j in 0..=30 {
            let t = 0.1 + 29.9 * j as f64 / 30.0;
            airy = airy.max(rel_dev(airy_gen(pp, t)?.wronskian(), w));
        }
    }
    checks.push(check("generalized_airy_wronskian", airy, 1e-8));

    let cycle = full_cycle(
        &unit,
        20.0,
        &ScanOptions {
            samples: 2001,
            ..scan_options(cfg)
        },
    )?;
    let (mut e_f, mut e_q, mut e_m) = (0.0f64, 0.0f64, 0.0f64);
    for (i, s) in cycle.samples.iter().enumerate() {
        let w = unit.omega(s.t);
        if w == 0.0 {
            continue;
        }
        let n = n_exc(s, w);
        let f = fidelity(s, w);
        e_f = e_f.max((1.0 / (f * f) - n - 1.0).abs() / (1.0 + n));
        e_q = e_q.max((heat(s, w) - w * n).abs() / (w * (1.0 + n)));
        if i % 100 == 0 {
            let mut n_max = 64;
            let dist = loop {
                let d = excitation_distribution(s, w, n_max)?;
                if d.moment_tail_bound <= 1e-10 * (1.0 + n) || n_max > 1 << 22 {
                    break d;
                }
                n_max *= 2;
            };
            e_m = e_m.max((dist.first_moment() - n).abs().max(dist.moment_tail_bound) / (1.0 + n));
        }
    }
    checks.push(check("fidelity_excitation_duality", e_f, 1e-12));
    checks.push(check("heat_equals_omega_times_n", e_q, 1e-12));
    checks.push(check("distribution_first_moment", e_m, 1e-8));

    let passed = checks.iter().all(|c| c.passed);
    for c in &checks {
        println!(
            "{} {} {:.3e} (limit {:.0e})",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.value,
            c.threshold
        );
    }
    Ok(Report {
        files: Vec::new(),
        results: json!({ "checks": checks, "passed": passed }),
        passed,
    })
}
