//! Large-N O(N) chain with long-range couplings, driven through its critical
//! point.
//!
//! In the large-N limit every Fourier mode `q` is an independent Gaussian
//! oscillator with frequency `ω_q² = ε_q + μ_eff(t)`, where
//! `ε_q = J(0) − J(q)` closes at `q = 0` and all modes share the
//! self-consistent mass
//!
//! ```text
//! μ_eff(t) = μ(t) + (g / 6L) Σ_q ξ_q(t)²,      μ(t) = μ_c + ω_drive(t)².
//! ```
//!
//! Widths follow the crate-wide convention `ξ̈ + ω²ξ = 1/(4ξ³)`, so that
//! `ξ_q² = ⟨φ_q²⟩` and equilibrium is `ξ_q² = 1/(2ω_q)`; a barrier written as
//! `1/ξ³` corresponds to the rescaled width `√2 ξ`. All `L` modes, including the
//! degenerate `±q` pairs, are integrated as one state vector with `μ_eff`
//! evaluated from the instantaneous widths inside every right-hand-side call.

use std::cell::Cell;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::ermakov::{wkb_state, WidthState};
use crate::error::{domain, Error, Result};
use crate::kzm::{start_time, symmetric_grid};
use crate::observables::{self, plateau_of_series, Plateau};
use crate::ode::{self, OdeFailure, OdeSystem, SolverOptions};
use crate::protocols::{p_from_znu, rescale_to_unit_rate, DriveKind, DriveSpec};

/// Largest supported chain.
pub const MAX_SITES: usize = 4096;

/// `J(q_k) = c N⁻¹ Σ_{r=1}^{L/2−1} r^(−α) cos(q_k r)` on `q_k = 2πk/L`, with the
/// Kac factor `N = Σ r^(−α)` for `α ≤ 1` (and `N = 1` otherwise).
pub fn build_dispersion(sites: usize, alpha: f64, coupling: f64) -> Result<Vec<f64>> {
    if !(2..=MAX_SITES).contains(&sites) {
        return Err(domain(
            "build_dispersion",
            format!("site count must lie in [2, {MAX_SITES}], got {sites}"),
        ));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(domain(
            "build_dispersion",
            format!("alpha must be > 0, got {alpha}"),
        ));
    }
    let r_max = sites / 2 - 1;
    let weights: Vec<f64> = (1..=r_max).map(|r| (r as f64).powf(-alpha)).collect();
    let kac = if alpha <= 1.0 {
        weights.iter().sum::<f64>()
    } else {
        1.0
    };
    let norm = if kac > 0.0 { coupling / kac } else { coupling };
    Ok((0..sites)
        .map(|k| {
            let q = 2.0 * PI * k as f64 / sites as f64;
            norm * weights
                .iter()
                .enumerate()
                .map(|(i, w)| w * (q * (i + 1) as f64).cos())
                .sum::<f64>()
        })
        .collect())
}

/// Input parameters of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalParams {
    pub sites: usize,
    pub alpha: f64,
    /// Quartic coupling `g ≥ 0`.
    pub g: f64,
    /// Prefactor of `J_r` before normalization.
    pub coupling: f64,
    /// `μ(t) − μ_c`.
    pub drive: DriveSpec,
}

/// The chain with its spectrum and critical mass resolved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalSystem {
    pub params: SphericalParams,
    /// `J(q)` per mode.
    pub dispersion: Vec<f64>,
    /// `ε_q = J(0) − J(q) ≥ 0`, zero at `q = 0`.
    pub mode_energy: Vec<f64>,
    pub mu_c: f64,
}

impl SphericalSystem {
    pub fn new(params: SphericalParams) -> Result<Self> {
        if !(params.g >= 0.0) || !params.g.is_finite() {
            return Err(domain(
                "spherical",
                format!("g must be >= 0, got {}", params.g),
            ));
        }
        let drive = params.drive.validated()?;
        let dispersion = build_dispersion(params.sites, params.alpha, params.coupling)?;
        let j0 = dispersion[0];
        let mode_energy: Vec<f64> = dispersion.iter().map(|j| (j0 - j).max(0.0)).collect();
        let mut sys = SphericalSystem {
            params: SphericalParams { drive, ..params },
            dispersion,
            mode_energy,
            mu_c: 0.0,
        };
        sys.mu_c = solve_mu_c(&sys)?;
        Ok(sys)
    }

    pub fn sites(&self) -> usize {
        self.mode_energy.len()
    }

    /// `g / (6L)`, the weight of `Σ ξ_q²` in the effective mass.
    pub fn coupling_weight(&self) -> f64 {
        self.params.g / (6.0 * self.sites() as f64)
    }

    /// Bare mass `μ(t) = μ_c + ω_drive(t)²`.
    pub fn mu_bare(&self, t: f64) -> f64 {
        self.mu_c + self.params.drive.omega_squared(t)
    }

    /// `μ(t) + (g/6L) Σ ξ_q²`, summed in mode order.
    pub fn mu_eff(&self, t: f64, xi: &[f64]) -> f64 {
        let s: f64 = xi.iter().map(|x| x * x).sum();
        self.mu_bare(t) + self.coupling_weight() * s
    }

    /// Equilibrium effective mass for a bare mass `mu`: the root of
    /// `m = mu + (g/6L) Σ_q 1/(2 √(ε_q + m))` with `m > 0` (Newton with
    /// bisection safeguard; the left side minus the right is increasing).
    pub fn solve_mu_eff(&self, mu: f64) -> Result<f64> {
        let w = self.coupling_weight();
        let f = |m: f64| {
            let mut s = 0.0;
            let mut ds = 0.0;
            for e in &self.mode_energy {
                let om = (e + m).sqrt();
                s += 0.5 / om;
                ds += 0.25 / (om * om * om);
            }
            (m - mu - w * s, 1.0 + w * ds)
        };
        let mut lo = 0.0f64;
        let mut hi = mu.abs().max(1.0);
        while f(hi).0 < 0.0 {
            hi *= 2.0;
            if hi > 1e300 {
                return Err(Error::NoConvergence("effective mass bracket".into()));
            }
        }
        let mut m = 0.5 * hi;
        for _ in 0..200 {
            let (v, dv) = f(m);
            if v > 0.0 {
                hi = m;
            } else {
                lo = m;
            }
            let mut next = m - v / dv;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - m).abs() <= 1e-15 * m.max(1e-300) || hi - lo <= 1e-15 * hi {
                return Ok(next);
            }
            m = next;
        }
        Err(Error::NoConvergence("effective mass iteration".into()))
    }

    /// Instantaneous adiabatic state of all modes at `t`, to second order in
    /// the drive rate. The self-consistent `μ_eff` and its first two time
    /// derivatives are obtained from the equilibrium response of the widths.
    pub fn equilibrium(&self, t: f64) -> Result<Vec<WidthState>> {
        let drive = &self.params.drive;
        let w = self.coupling_weight();
        let m = self.solve_mu_eff(self.mu_bare(t))?;
        if !(m > 0.0) {
            return Err(Error::DegenerateStart { t });
        }
        // d(Σ ξ²)/dt = −μ̇_eff Σ 1/(4ω³) for equilibrium widths
        let (k, k5): (f64, f64) = self.mode_energy.iter().fold((0.0, 0.0), |(a, b), e| {
            let om = (e + m).sqrt();
            (a + 0.25 / om.powi(3), b + 0.375 / om.powi(5))
        });
        let k = w * k;
        let mu_dot = drive.omega_squared_dot(t) / (1.0 + k);
        let k_dot = -w * k5 * mu_dot;
        let mu_ddot = (drive.omega_squared_ddot(t) - k_dot * mu_dot) / (1.0 + k);
        self.mode_energy
            .iter()
            .map(|e| wkb_state(t, e + m, mu_dot, mu_ddot))
            .collect()
    }

    /// Co-integrates all modes from their adiabatic state at `t_start` and
    /// samples them at `times` (increasing, not before `t_start`).
    pub fn evolve(&self, t_start: f64, times: &[f64], tol: f64) -> Result<SphericalEvolution> {
        if !(tol > 1e-14 && tol < 1e-3) {
            return Err(domain(
                "evolve",
                format!("tolerance {tol:e} outside (1e-14, 1e-3)"),
            ));
        }
        if times.is_empty() || times.windows(2).any(|p| !(p[1] > p[0])) || !(times[0] >= t_start) {
            return Err(domain(
                "evolve",
                "sample times must be non-empty, increasing and not before the start",
            ));
        }
        let l = self.sites();
        let init = self.equilibrium(t_start)?;
        let mut y0 = vec![0.0; 3 * l];
        for (q, s) in init.iter().enumerate() {
            y0[q] = s.xi;
            y0[l + q] = s.xi_dot;
        }
        let mut out = SphericalEvolution {
            mode_energy: self.mode_energy.clone(),
            coupling_weight: self.coupling_weight(),
            times: Vec::with_capacity(times.len()),
            mu_bare: Vec::with_capacity(times.len()),
            mu_eff: Vec::with_capacity(times.len()),
            modes: vec![Vec::with_capacity(times.len()); l],
            phases: vec![Vec::with_capacity(times.len()); l],
            min_mu_eff: f64::INFINITY,
        };
        let mut next = 0;
        let record = |out: &mut SphericalEvolution, t: f64, y: &[f64]| {
            let m = self.mu_eff(t, &y[..l]);
            out.times.push(t);
            out.mu_bare.push(self.mu_bare(t));
            out.mu_eff.push(m);
            for q in 0..l {
                out.modes[q].push(WidthState {
                    t,
                    xi: y[q],
                    xi_dot: y[l + q],
                });
                out.phases[q].push(y[2 * l + q]);
            }
        };
        while next < times.len() && times[next] == t_start {
            record(&mut out, t_start, &y0);
            next += 1;
        }
        if next == times.len() {
            return Ok(out);
        }
        let violation = Cell::new(None);
        let sys = CoupledModes { system: self };
        let opts = SolverOptions::with_tol(tol);
        let mut buf = vec![0.0; 3 * l];
        let t_end = *times.last().unwrap();
        let result = ode::solve(&sys, t_start, &y0, t_end, &[0.0], &opts, |step| {
            let m = self.mu_eff(step.t, &step.y[..l]);
            out.min_mu_eff = out.min_mu_eff.min(m);
            if m < -tol {
                violation.set(Some((step.t, m)));
                return Err(format!("mu_eff = {m} < 0"));
            }
            if step.y[..l].iter().any(|&x| !(x > 0.0)) {
                return Err("a mode width left the positive axis".into());
            }
            while next < times.len() && times[next] <= step.t {
                let ts = times[next];
                if ts == step.t {
                    buf.copy_from_slice(step.y);
                } else {
                    step.interpolate(ts, &mut buf);
                }
                record(&mut out, ts, &buf);
                next += 1;
            }
            Ok(())
        });
        match result {
            Ok(_) => Ok(out),
            Err((e, y, t)) => {
                if let Some((t, mu_eff)) = violation.get() {
                    return Err(Error::SymmetricPhaseViolation { t, mu_eff });
                }
                let reason = match e {
                    OdeFailure::StepUnderflow { h, .. } => {
                        format!("step size underflow (h = {h:e})")
                    }
                    OdeFailure::TooManySteps { .. } => "step budget exhausted".into(),
                    OdeFailure::NonFinite { .. } => "non-finite state".into(),
                    OdeFailure::Stopped { reason, .. } => reason,
                };
                Err(Error::Integration {
                    reason,
                    last: WidthState {
                        t,
                        xi: y[0],
                        xi_dot: y[l],
                    },
                })
            }
        }
    }
}

impl SphericalSystem {
    /// Single-mode drive equivalent to mode `q` when the modes decouple.
    ///
    /// With `g = 0` and a linear power-law mass ramp (`zν = 1/2`) mode `q`
    /// sees `ω_q² = ε_q + δ|t|`, a gapped drive with offset `ε_q`.
    pub fn decoupled_mode_drive(&self, q: usize) -> Result<DriveSpec> {
        let d = &self.params.drive;
        if self.params.g != 0.0 || d.kind != DriveKind::PowerLaw || d.znu != 0.5 {
            return Err(Error::UnsupportedProtocol(
                "decoupled modes need g = 0 and a linear power-law ramp",
            ));
        }
        let e = *self
            .mode_energy
            .get(q)
            .ok_or_else(|| domain("decoupled_mode_drive", format!("no mode {q}")))?;
        if e > 0.0 {
            DriveSpec::gapped(0.5, d.delta, e)
        } else {
            Ok(*d)
        }
    }

    /// A full cycle over the physical image of the unit-rate window
    /// `[−s_end, s_end]`, recorded on `samples` uniform times. The run starts
    /// at the earlier of the window edge and the time where the drive has
    /// adiabaticity `start_adiabaticity`.
    pub fn run_cycle(
        &self,
        s_end: f64,
        samples: usize,
        start_adiabaticity: f64,
        window: f64,
        tol: f64,
    ) -> Result<SphericalCycle> {
        if !(s_end > 0.0) || !s_end.is_finite() {
            return Err(domain(
                "run_cycle",
                format!("horizon must be positive, got {s_end}"),
            ));
        }
        let drive = &self.params.drive;
        let horizon = rescale_to_unit_rate(drive).physical_time(s_end);
        let t_start = start_time(drive, start_adiabaticity).min(-horizon);
        let times = symmetric_grid(horizon, samples);
        let evolution = self.evolve(t_start, &times, tol)?;
        let mid = evolution
            .sample_at(0.0)
            .expect("symmetric grid contains zero");
        let zero_mode = evolution.zero_mode_plateau(window)?;
        let c = 1.0 / (p_from_znu(drive.znu) * PI).tan();
        Ok(SphericalCycle {
            t_start,
            horizon,
            deviation_at_zero: evolution.nonzero_mode_deviation(mid),
            zero_mode,
            reference: c * c,
            evolution,
        })
    }
}

/// Outcome of [`SphericalSystem::run_cycle`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalCycle {
    pub t_start: f64,
    pub horizon: f64,
    /// Nonzero-mode deviation of `μ_eff` at the critical point.
    pub deviation_at_zero: f64,
    /// Plateau of the zero mode's `n_exc` after the crossing.
    pub zero_mode: Plateau,
    /// Universal single-mode plateau `cot²(pπ)`.
    pub reference: f64,
    pub evolution: SphericalEvolution,
}

/// Critical bare mass: the `μ` at which the equilibrium `μ_eff` vanishes,
/// `μ_c = −(g/6L) Σ_{q≠0} 1/(2√ε_q)`.
///
/// The zero mode is left out of the sum: its equilibrium width `1/(2ω_0)`
/// diverges at `μ_eff = 0` on any finite chain, while during a drive its
/// width stays finite and enters `μ_eff` dynamically.
pub fn solve_mu_c(system: &SphericalSystem) -> Result<f64> {
    let w = system.coupling_weight();
    if w == 0.0 {
        return Ok(0.0);
    }
    let mut s = 0.0;
    for (q, &e) in system.mode_energy.iter().enumerate().skip(1) {
        if !(e > 0.0) {
            return Err(domain(
                "solve_mu_c",
                format!("mode {q} is gapless at the critical point; the spectrum is degenerate"),
            ));
        }
        s += 0.5 / e.sqrt();
    }
    let mu_c = -w * s;
    // reinsertion: μ_eff = μ_c + (g/6L) Σ_{q≠0} 1/(2ω_q) at ω_q = √ε_q
    let residual = mu_c + w * s;
    if residual.abs() > 1e-10 {
        return Err(Error::NoConvergence(format!(
            "critical mass residual {residual:e}"
        )));
    }
    Ok(mu_c)
}

struct CoupledModes<'a> {
    system: &'a SphericalSystem,
}

impl OdeSystem for CoupledModes<'_> {
    fn dim(&self) -> usize {
        3 * self.system.sites()
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        let l = self.system.sites();
        let (xi, rest) = y.split_at(l);
        let m = self.system.mu_eff(t, xi);
        dy[..l].copy_from_slice(&rest[..l]);
        for (q, (&x, &e)) in xi.iter().zip(&self.system.mode_energy).enumerate() {
            let x2 = x * x;
            dy[l + q] = -(e + m) * x + 0.25 / (x2 * x);
            dy[2 * l + q] = 0.5 / x2;
        }
    }
}

/// Sampled evolution of the chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalEvolution {
    pub mode_energy: Vec<f64>,
    pub coupling_weight: f64,
    pub times: Vec<f64>,
    pub mu_bare: Vec<f64>,
    pub mu_eff: Vec<f64>,
    /// `modes[q][i]` is the width of mode `q` at `times[i]`.
    pub modes: Vec<Vec<WidthState>>,
    /// Accumulated phase `λ_q` since the start, laid out like `modes`.
    pub phases: Vec<Vec<f64>>,
    /// Smallest `μ_eff` seen at any accepted step.
    pub min_mu_eff: f64,
}

impl SphericalEvolution {
    /// `ω_q` at sample `i`.
    pub fn omega(&self, q: usize, i: usize) -> f64 {
        (self.mode_energy[q] + self.mu_eff[i]).max(0.0).sqrt()
    }

    pub fn n_exc(&self, q: usize, i: usize) -> f64 {
        observables::n_exc(&self.modes[q][i], self.omega(q, i))
    }

    /// Largest `|μ_eff − μ − (g/6L) Σ ξ²|` over the samples.
    pub fn self_consistency_residual(&self) -> f64 {
        (0..self.times.len())
            .map(|i| {
                let s: f64 = self.modes.iter().map(|m| m[i].xi * m[i].xi).sum();
                (self.mu_eff[i] - self.mu_bare[i] - self.coupling_weight * s).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `(g/6L) |Σ_{q≠0} (ξ_q² − 1/(2ω_q))|` at sample `i`: how far the
    /// gapped modes' contribution to `μ_eff` is from instantaneous equilibrium.
    pub fn nonzero_mode_deviation(&self, i: usize) -> f64 {
        let s: f64 = (1..self.modes.len())
            .map(|q| {
                let x = self.modes[q][i].xi;
                x * x - 0.5 / self.omega(q, i)
            })
            .sum();
        self.coupling_weight * s.abs()
    }

    /// Plateau of the zero mode's excitation number over the trailing window.
    pub fn zero_mode_plateau(&self, window: f64) -> Result<Plateau> {
        let values: Vec<f64> = (0..self.times.len()).map(|i| self.n_exc(0, i)).collect();
        plateau_of_series(&self.times, &values, window)
    }

    /// Index of the sample at exactly `t`, if recorded.
    pub fn sample_at(&self, t: f64) -> Option<usize> {
        self.times.iter().position(|&s| s == t)
    }
}
