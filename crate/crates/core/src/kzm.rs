//! Experiment drivers: half-cycle Kibble-Zurek scans, full-cycle plateaus,
//! gapped cycles, corrected drives and rate invariance.
//!
//! Every scan fans out one independent integration per parameter value onto a
//! dedicated worker pool and collects the results in input order, so the
//! output does not depend on the number of workers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{asymptotic_fidelity, asymptotic_n_exc, kzm_heat_exponent};
use crate::ermakov::{self, adiabatic_init, Trajectory};
use crate::error::{domain, Error, Result};
use crate::observables::{self, plateau, plateau_of_series, Plateau, Quantity, MIN_WINDOW_SAMPLES};
use crate::protocols::{freezing_time, rescale_to_unit_rate, DriveSpec};

/// Least-squares fit of `y = prefactor · x^exponent` in log-log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub exponent: f64,
    pub prefactor: f64,
    /// Root-mean-square residual of `ln y`.
    pub residual: f64,
    pub points_used: usize,
}

/// Plateau values over a parameter sweep, alongside the analytic reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub parameter: Vec<f64>,
    pub mean: Vec<f64>,
    pub amplitude: Vec<f64>,
    pub reference: Vec<f64>,
}

impl ScanResult {
    fn from_plateaus(parameter: Vec<f64>, plateaus: &[Plateau], reference: Vec<f64>) -> Self {
        ScanResult {
            parameter,
            mean: plateaus.iter().map(|p| p.mean).collect(),
            amplitude: plateaus.iter().map(|p| p.amplitude).collect(),
            reference,
        }
    }

    /// Largest `|mean − reference| / reference`.
    pub fn max_relative_deviation(&self) -> f64 {
        self.mean
            .iter()
            .zip(&self.reference)
            .map(|(m, r)| ((m - r) / r).abs())
            .fold(0.0, f64::max)
    }

    /// `(max − min) / min` of the plateau means.
    pub fn relative_spread(&self) -> f64 {
        let lo = self.mean.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.mean.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (hi - lo) / lo
    }
}

/// Numerical settings shared by all scans.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub tol: f64,
    pub workers: usize,
    /// Trailing fraction of a trajectory used for plateau averages.
    pub window: f64,
    /// Adiabaticity `|ω̇|/ω²` of the drive at the start of each run.
    pub start_adiabaticity: f64,
    /// Number of uniformly spaced samples recorded over a full cycle.
    pub samples: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            tol: 1e-10,
            workers: 1,
            window: 0.25,
            start_adiabaticity: 1e-3,
            samples: 8001,
        }
    }
}

/// Maps `f` over `items` on a pool of `workers` threads, preserving order.
pub fn par_map<T, R, F>(workers: usize, items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync,
{
    if workers == 0 {
        return Err(domain("par_map", "worker count must be at least 1"));
    }
    if workers == 1 {
        return items.iter().map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| domain("par_map", e.to_string()))?;
    pool.install(|| items.par_iter().map(&f).collect())
}

/// Ordinary least squares of `ln y` against `ln x`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "power-law fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(&(x, y)) = points.iter().find(|&&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(domain(
            "fit_power_law",
            format!("non-positive point ({x}, {y})"),
        ));
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(domain("fit_power_law", "all abscissae coincide"));
    }
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let ss: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - icpt - slope * x).powi(2))
        .sum();
    Ok(FitResult {
        exponent: slope,
        prefactor: icpt.exp(),
        residual: (ss / n).sqrt(),
        points_used: points.len(),
    })
}

/// `n` log-spaced values from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Time at which a run of `drive` starts: the power-law part of the drive has
/// adiabaticity `eps` there. Gaps and positive corrections only raise `ω`, so
/// the estimate is conservative for every drive kind.
pub fn start_time(drive: &DriveSpec, eps: f64) -> f64 {
    let znu = drive.znu;
    let s = (znu / eps).powf(1.0 / (1.0 + znu));
    -s * drive.delta.powf(-znu / (1.0 + znu))
}

/// `n` (odd, at least 3) uniformly spaced times on `[−horizon, horizon]`
/// with the midpoint exactly at zero.
pub fn symmetric_grid(horizon: f64, n: usize) -> Vec<f64> {
    let n = (n.max(3) - 1) / 2 * 2 + 1;
    let half = (n - 1) / 2;
    let mut grid: Vec<f64> = (0..n)
        .map(|i| horizon * ((i as f64 - half as f64) / half as f64))
        .collect();
    grid[half] = 0.0;
    grid
}

/// A full cycle over the physical window `[−horizon, horizon]`, started in the
/// adiabatic ground state early enough that the adiabaticity is at most
/// `opts.start_adiabaticity`, and sampled on a uniform grid over the window.
pub fn full_cycle(drive: &DriveSpec, horizon: f64, opts: &ScanOptions) -> Result<Trajectory> {
    let t0 = start_time(drive, opts.start_adiabaticity).min(-horizon);
    let init = adiabatic_init(drive, t0)?;
    ermakov::integrate_at_linear(
        drive,
        init,
        &symmetric_grid(horizon, opts.samples),
        opts.tol,
    )
}

/// Full cycle of the unit-rate image of `drive` over `[−s_end, s_end]`.
pub fn unit_rate_full_cycle(
    drive: &DriveSpec,
    s_end: f64,
    opts: &ScanOptions,
) -> Result<Trajectory> {
    full_cycle(&rescale_to_unit_rate(drive).drive, s_end, opts)
}

/// Outcome of one full cycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CyclePlateaus {
    pub n_exc: Plateau,
    pub fidelity: Plateau,
    pub heat: Plateau,
    /// Heat at the last sample.
    pub final_heat: f64,
    /// `n_exc` at the last sample.
    pub final_n_exc: f64,
}

pub fn cycle_plateaus(traj: &Trajectory, window: f64) -> Result<CyclePlateaus> {
    let last = traj.last();
    let w = traj.drive.omega(last.t);
    Ok(CyclePlateaus {
        n_exc: plateau(traj, Quantity::NExc, window)?,
        fidelity: plateau(traj, Quantity::Fidelity, window)?,
        heat: plateau(traj, Quantity::Heat, window)?,
        final_heat: observables::heat(last, w),
        final_n_exc: observables::n_exc(last, w),
    })
}

/// Full-cycle plateaus against the universal asymptotes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullCycleScan {
    pub n_exc: ScanResult,
    pub fidelity: ScanResult,
}

/// Unit-rate power-law full cycles to `s_end` for each `zν`.
pub fn full_cycle_scan(znus: &[f64], s_end: f64, opts: &ScanOptions) -> Result<FullCycleScan> {
    check_horizon(s_end)?;
    let plateaus = par_map(opts.workers, znus, |&znu| {
        let drive = DriveSpec::power_law(znu, 1.0)?;
        cycle_plateaus(&full_cycle(&drive, s_end, opts)?, opts.window)
    })?;
    let n: Vec<Plateau> = plateaus.iter().map(|p| p.n_exc).collect();
    let f: Vec<Plateau> = plateaus.iter().map(|p| p.fidelity).collect();
    Ok(FullCycleScan {
        n_exc: ScanResult::from_plateaus(
            znus.to_vec(),
            &n,
            znus.iter().map(|&z| asymptotic_n_exc(z)).collect(),
        ),
        fidelity: ScanResult::from_plateaus(
            znus.to_vec(),
            &f,
            znus.iter().map(|&z| asymptotic_fidelity(z)).collect(),
        ),
    })
}

fn check_horizon(s_end: f64) -> Result<()> {
    if !(s_end > 0.0) || !s_end.is_finite() {
        return Err(domain(
            "scan",
            format!("horizon must be positive, got {s_end}"),
        ));
    }
    Ok(())
}

/// Power-law full cycles at several rates `δ`, each integrated in physical
/// time over the horizon `s_end` mapped back through the rescaling. The
/// plateau `n_exc` must not depend on `δ`.
pub fn rate_independence_scan(
    znu: f64,
    deltas: &[f64],
    s_end: f64,
    opts: &ScanOptions,
) -> Result<ScanResult> {
    check_horizon(s_end)?;
    let plateaus = par_map(opts.workers, deltas, |&delta| {
        let drive = DriveSpec::power_law(znu, delta)?;
        let horizon = rescale_to_unit_rate(&drive).physical_time(s_end);
        plateau(
            &full_cycle(&drive, horizon, opts)?,
            Quantity::NExc,
            opts.window,
        )
    })?;
    Ok(ScanResult::from_plateaus(
        deltas.to_vec(),
        &plateaus,
        vec![asymptotic_n_exc(znu); deltas.len()],
    ))
}

/// Heat at the critical point after half cycles at several rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfCycleScan {
    pub znu: f64,
    pub deltas: Vec<f64>,
    /// Exact `Q(0)` per rate.
    pub heat: Vec<f64>,
    /// Frozen-state estimate `ω(t*)/4` per rate.
    pub impulse_heat: Vec<f64>,
    pub fit: FitResult,
    pub impulse_fit: FitResult,
    /// The constant `C` of the start times `t_i = −C/δ`.
    pub start_constant: f64,
    pub reference_exponent: f64,
}

/// Start-time constant `C` of a half-cycle scan: at the fastest rate the run
/// starts where the adiabaticity equals `eps`; slower rates start earlier in
/// rescaled time.
pub fn half_cycle_start_constant(znu: f64, delta_max: f64, eps: f64) -> f64 {
    let s_min = (znu / eps).powf(1.0 / (1.0 + znu));
    s_min * delta_max.powf(1.0 / (1.0 + znu))
}

/// `Q(0)` after driving from `t_i = −c/δ` to the critical point.
pub fn half_cycle_heat(drive: &DriveSpec, c: f64, tol: f64) -> Result<f64> {
    let init = adiabatic_init(drive, -c / drive.delta)?;
    let (end, _) = ermakov::propagate(drive, init, 0.0, tol)?;
    Ok(observables::heat(&end, 0.0))
}

/// Impulse-adiabatic estimate of `Q(0)`: the ground state of `H(t*)` frozen
/// until the critical point, where its energy is `ω(t*)/4`.
pub fn impulse_heat_estimate(drive: &DriveSpec) -> Result<f64> {
    Ok(drive.omega(freezing_time(drive)?) / 4.0)
}

/// Half cycles `t ∈ [−C/δ, 0]` over `deltas` and a log-log fit of `Q(0)`.
pub fn half_cycle_heat_scan(znu: f64, deltas: &[f64], opts: &ScanOptions) -> Result<HalfCycleScan> {
    half_cycle_heat_scan_with(znu, deltas, None, opts)
}

/// As [`half_cycle_heat_scan`] with an explicit start-time constant.
pub fn half_cycle_heat_scan_with(
    znu: f64,
    deltas: &[f64],
    start_constant: Option<f64>,
    opts: &ScanOptions,
) -> Result<HalfCycleScan> {
    if deltas.iter().any(|&d| !(d > 0.0)) {
        return Err(domain("half_cycle_heat_scan", "rates must be positive"));
    }
    let lo = deltas.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = deltas.iter().copied().fold(0.0, f64::max);
    if hi / lo < 10f64.powf(1.5) {
        return Err(domain(
            "half_cycle_heat_scan",
            format!("rates must span at least 1.5 decades, got [{lo:e}, {hi:e}]"),
        ));
    }
    let c = start_constant
        .unwrap_or_else(|| half_cycle_start_constant(znu, hi, opts.start_adiabaticity));
    let rows = par_map(opts.workers, deltas, |&delta| {
        let drive = DriveSpec::power_law(znu, delta)?;
        Ok((
            half_cycle_heat(&drive, c, opts.tol)?,
            impulse_heat_estimate(&drive)?,
        ))
    })?;
    let heat: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let impulse_heat: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let pts = |ys: &[f64]| {
        deltas
            .iter()
            .copied()
            .zip(ys.iter().copied())
            .collect::<Vec<_>>()
    };
    Ok(HalfCycleScan {
        znu,
        deltas: deltas.to_vec(),
        fit: fit_power_law(&pts(&heat))?,
        impulse_fit: fit_power_law(&pts(&impulse_heat))?,
        heat,
        impulse_heat,
        start_constant: c,
        reference_exponent: kzm_heat_exponent(znu),
    })
}

/// Unit-rate gapped full cycles `ω² = (s₀ + |s|)^(2zν)` over `[−s_end, s_end]`.
/// Plateau means are end-of-cycle heats; the reference is the heat of the
/// gapless cycle.
pub fn gapped_cycle_scan(
    znu: f64,
    s0s: &[f64],
    s_end: f64,
    opts: &ScanOptions,
) -> Result<ScanResult> {
    check_horizon(s_end)?;
    if s0s.iter().any(|&s| !(s >= 0.0)) {
        return Err(domain("gapped_cycle_scan", "gap offsets must be >= 0"));
    }
    let outcomes = par_map(opts.workers, s0s, |&s0| {
        let drive = DriveSpec::gapped(znu, 1.0, s0)?;
        cycle_plateaus(&full_cycle(&drive, s_end, opts)?, opts.window)
    })?;
    let gapless = {
        let drive = DriveSpec::power_law(znu, 1.0)?;
        let w = drive.omega(s_end);
        // the gapless cycle ends with n_exc at its universal value
        w * asymptotic_n_exc(znu)
    };
    Ok(ScanResult {
        parameter: s0s.to_vec(),
        mean: outcomes.iter().map(|o| o.final_heat).collect(),
        amplitude: outcomes.iter().map(|o| o.heat.amplitude).collect(),
        reference: vec![gapless; s0s.len()],
    })
}

/// End-of-cycle excitation after gapped cycles at fixed offset `t0` and
/// several rates; the runs span `[−c/δ, c/δ]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GappedRateScan {
    pub deltas: Vec<f64>,
    /// `n_exc` averaged over the last quarter of each run.
    pub n_exc: Vec<f64>,
    /// Leading small-`δ` value from the kink of `ω(t)` at the crossing.
    pub reference: Vec<f64>,
    pub fit: FitResult,
}

/// Excitation left by the kink of a gapped drive at small `δ`:
/// `ω̇/ω²` jumps by `2zνδ/t0^(1+zν)` at `t = 0`, which excites the state with
/// amplitude a quarter of the jump, so `n ≈ (zν δ / (2 t0^(1+zν)))²`.
pub fn gapped_kink_excitation(znu: f64, delta: f64, t0: f64) -> f64 {
    (znu * delta / (2.0 * t0.powf(1.0 + znu))).powi(2)
}

/// Gapped cycles at fixed `t0` over `[−c/δ, c/δ]`, started in the
/// second-order adiabatic state. `n_exc` at the end of a finite window carries
/// an oscillating cross term between the crossing excitation and the
/// mismatch of the instantaneous basis; it is removed by averaging `n_exc`
/// over `[3c/(4δ), c/δ]` on `opts.samples` uniform points.
pub fn gapped_rate_scan(
    znu: f64,
    t0: f64,
    deltas: &[f64],
    c: f64,
    opts: &ScanOptions,
) -> Result<GappedRateScan> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(domain(
            "gapped_rate_scan",
            format!("window constant must be positive, got {c}"),
        ));
    }
    let n_exc = par_map(opts.workers, deltas, |&delta| {
        let drive = DriveSpec::gapped(znu, delta, t0)?;
        let t_end = c / delta;
        let init = ermakov::wkb_init(&drive, -t_end)?;
        let m = opts.samples.max(MIN_WINDOW_SAMPLES * 4);
        let times: Vec<f64> = (0..m)
            .map(|i| t_end * (0.5 + 0.5 * i as f64 / (m - 1) as f64))
            .collect();
        let traj = ermakov::integrate_at_linear(&drive, init, &times, opts.tol)?;
        let values: Vec<f64> = traj
            .samples
            .iter()
            .map(|s| observables::n_exc(s, drive.omega(s.t)))
            .collect();
        Ok(plateau_of_series(&times, &values, 0.5)?.mean)
    })?;
    let pts: Vec<(f64, f64)> = deltas.iter().copied().zip(n_exc.iter().copied()).collect();
    Ok(GappedRateScan {
        deltas: deltas.to_vec(),
        reference: deltas
            .iter()
            .map(|&d| gapped_kink_excitation(znu, d, t0))
            .collect(),
        fit: fit_power_law(&pts)?,
        n_exc,
    })
}

/// Unit-rate full cycles of corrected drives `|s|^(2zν) + γ |s|^n` for each
/// `γ`; reference is the universal plateau.
pub fn universality_scan(
    znu: f64,
    gammas: &[f64],
    n_corr: u32,
    s_end: f64,
    opts: &ScanOptions,
) -> Result<ScanResult> {
    check_horizon(s_end)?;
    let plateaus = par_map(opts.workers, gammas, |&gamma| {
        let drive = DriveSpec::corrected(znu, 1.0, gamma, n_corr)?;
        plateau(
            &full_cycle(&drive, s_end, opts)?,
            Quantity::NExc,
            opts.window,
        )
    })?;
    Ok(ScanResult::from_plateaus(
        gammas.to_vec(),
        &plateaus,
        vec![asymptotic_n_exc(znu); gammas.len()],
    ))
}
