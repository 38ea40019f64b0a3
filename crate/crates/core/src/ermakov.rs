//! Numerical integration of the Ermakov-Milne equation
//! `ξ̈ + ω(t)² ξ = 1 / (4 ξ³)` and of the associated classical oscillator.
//!
//! The width `ξ` fully determines the Gaussian dynamical ground state; the
//! phase `λ(t) = ∫ dt' / (2 ξ²)` is carried along as a third state component.
//! Integrations always stop exactly at `t = 0`, where `ω²` is not smooth for
//! non-integer `2zν`, and continue from the same `(ξ, ξ̇)`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::ode::{self, OdeFailure, OdeSystem, SolverOptions};
use crate::protocols::DriveSpec;

/// Width and width velocity at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthState {
    pub t: f64,
    pub xi: f64,
    pub xi_dot: f64,
}

/// Sampled solution of the Ermakov equation.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub drive: DriveSpec,
    pub samples: Vec<WidthState>,
    /// Accumulated phase `λ` at each sample, starting from zero.
    pub phase: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> &WidthState {
        self.samples
            .last()
            .expect("trajectory has at least one sample")
    }

    /// Sample closest to `t` from below.
    pub fn at_or_before(&self, t: f64) -> Option<&WidthState> {
        let idx = self.samples.partition_point(|s| s.t <= t);
        idx.checked_sub(1).map(|i| &self.samples[i])
    }

    pub fn t_start(&self) -> f64 {
        self.samples[0].t
    }

    pub fn t_end(&self) -> f64 {
        self.last().t
    }
}

const TOL_MIN: f64 = 1e-14;
const TOL_MAX: f64 = 1e-3;

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > TOL_MIN && tol < TOL_MAX) {
        return Err(Error::Domain {
            func: "ermakov",
            msg: format!("tolerance must lie in ({TOL_MIN:e}, {TOL_MAX:e}), got {tol:e}"),
        });
    }
    Ok(())
}

fn check_times(func: &'static str, t_start: f64, times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InsufficientData("no sample times requested".into()));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) || !(times[0] >= t_start) {
        return Err(domain(
            func,
            "sample times must be strictly increasing and not before the start",
        ));
    }
    Ok(())
}

/// Instantaneous ground state at `t_start`: `ξ = (2ω)^(-1/2)`, `ξ̇ = 0`.
pub fn adiabatic_init(drive: &DriveSpec, t_start: f64) -> Result<WidthState> {
    let w = drive.omega(t_start);
    if !(w > 0.0) {
        return Err(Error::DegenerateStart { t: t_start });
    }
    Ok(WidthState {
        t: t_start,
        xi: (2.0 * w).powf(-0.5),
        xi_dot: 0.0,
    })
}

/// Adiabatic state to second order in the drive rate, from the value and the
/// first two time derivatives of `u = ω²` at `t`.
///
/// The width is `ξ = (2W)^(-1/2)` with the WKB frequency
/// `W ≈ ω + [¾ (ω̇/ω)² − ½ ω̈/ω] / (2ω)`, and `ξ̇ = −ξ Ẇ/(2W)` to leading
/// order. Starting from this state instead of `ξ̇ = 0` removes the spurious
/// oscillation of relative size `|ω̇|/ω²` that a sudden start imprints.
pub fn wkb_state(t: f64, u: f64, u_dot: f64, u_ddot: f64) -> Result<WidthState> {
    if !(u > 0.0) {
        return Err(Error::DegenerateStart { t });
    }
    let w = u.sqrt();
    let w_dot = 0.5 * u_dot / w;
    let w_ddot = 0.5 * u_ddot / w - 0.25 * u_dot * u_dot / (w * w * w);
    let big_w = w + (0.75 * (w_dot / w).powi(2) - 0.5 * w_ddot / w) / (2.0 * w);
    let xi = (2.0 * big_w).powf(-0.5);
    Ok(WidthState {
        t,
        xi,
        xi_dot: -0.5 * xi * w_dot / big_w,
    })
}

/// [`wkb_state`] for a drive protocol.
pub fn wkb_init(drive: &DriveSpec, t_start: f64) -> Result<WidthState> {
    wkb_state(
        t_start,
        drive.omega_squared(t_start),
        drive.omega_squared_dot(t_start),
        drive.omega_squared_ddot(t_start),
    )
}

struct ErmakovRhs<'a> {
    drive: &'a DriveSpec,
}

impl OdeSystem for ErmakovRhs<'_> {
    fn dim(&self) -> usize {
        3
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        let xi = y[0];
        let xi2 = xi * xi;
        dy[0] = y[1];
        dy[1] = -self.drive.omega_squared(t) * xi + 0.25 / (xi2 * xi);
        dy[2] = 0.5 / xi2;
    }
}

fn failure(e: OdeFailure, y: &[f64], t: f64) -> Error {
    let reason = match e {
        OdeFailure::StepUnderflow { h, .. } => format!("step size underflow (h = {h:e})"),
        OdeFailure::TooManySteps { .. } => "step budget exhausted".to_string(),
        OdeFailure::NonFinite { .. } => "non-finite state".to_string(),
        OdeFailure::Stopped { reason, .. } => reason,
    };
    Error::Integration {
        reason,
        last: WidthState {
            t,
            xi: y[0],
            xi_dot: y[1],
        },
    }
}

fn check_positive(y: &[f64]) -> std::result::Result<(), String> {
    if y[0] > 0.0 && y[0].is_finite() {
        Ok(())
    } else {
        Err(format!("width left the positive axis (xi = {})", y[0]))
    }
}

/// Integrates from `init` to `t_end`, recording every accepted step.
pub fn integrate(drive: &DriveSpec, init: WidthState, t_end: f64, tol: f64) -> Result<Trajectory> {
    check_tol(tol)?;
    if !(init.t < t_end) {
        return Err(Error::Domain {
            func: "integrate",
            msg: format!("need t_start < t_end, got {} >= {}", init.t, t_end),
        });
    }
    let sys = ErmakovRhs { drive };
    let mut samples = vec![init];
    let mut phase = vec![0.0];
    let opts = SolverOptions::with_tol(tol);
    ode::solve(
        &sys,
        init.t,
        &[init.xi, init.xi_dot, 0.0],
        t_end,
        &[0.0],
        &opts,
        |step| {
            check_positive(step.y)?;
            samples.push(WidthState {
                t: step.t,
                xi: step.y[0],
                xi_dot: step.y[1],
            });
            phase.push(step.y[2]);
            Ok(())
        },
    )
    .map_err(|(e, y, t)| failure(e, &y, t))?;
    Ok(Trajectory {
        drive: *drive,
        samples,
        phase,
    })
}

/// Integrates from `init` and reports the state at each of `times` (sorted,
/// all `>= init.t`) using the dense output of the integrator.
pub fn integrate_at(
    drive: &DriveSpec,
    init: WidthState,
    times: &[f64],
    tol: f64,
) -> Result<Trajectory> {
    integrate_at_with(drive, init, times, tol, &[0.0])
}

/// As [`integrate_at`], but every requested time is also a step boundary, so
/// no interpolation is involved.
pub fn integrate_at_breakpoints(
    drive: &DriveSpec,
    init: WidthState,
    times: &[f64],
    tol: f64,
) -> Result<Trajectory> {
    let mut bps = times.to_vec();
    bps.push(0.0);
    integrate_at_with(drive, init, times, tol, &bps)
}

fn integrate_at_with(
    drive: &DriveSpec,
    init: WidthState,
    times: &[f64],
    tol: f64,
    breakpoints: &[f64],
) -> Result<Trajectory> {
    check_tol(tol)?;
    check_times("integrate_at", init.t, times)?;
    let sys = ErmakovRhs { drive };
    let mut samples = Vec::with_capacity(times.len());
    let mut phase = Vec::with_capacity(times.len());
    let mut next = 0;
    while next < times.len() && times[next] == init.t {
        samples.push(init);
        phase.push(0.0);
        next += 1;
    }
    let t_end = *times.last().unwrap();
    if next < times.len() {
        let opts = SolverOptions::with_tol(tol);
        let mut buf = [0.0; 3];
        ode::solve(
            &sys,
            init.t,
            &[init.xi, init.xi_dot, 0.0],
            t_end,
            breakpoints,
            &opts,
            |step| {
                check_positive(step.y)?;
                while next < times.len() && times[next] <= step.t {
                    let ts = times[next];
                    if ts == step.t {
                        buf.copy_from_slice(step.y);
                    } else {
                        step.interpolate(ts, &mut buf);
                    }
                    samples.push(WidthState {
                        t: ts,
                        xi: buf[0],
                        xi_dot: buf[1],
                    });
                    phase.push(buf[2]);
                    next += 1;
                }
                Ok(())
            },
        )
        .map_err(|(e, y, t)| failure(e, &y, t))?;
    }
    Ok(Trajectory {
        drive: *drive,
        samples,
        phase,
    })
}

/// Final state only; cheaper than building a full trajectory.
pub fn propagate(
    drive: &DriveSpec,
    init: WidthState,
    t_end: f64,
    tol: f64,
) -> Result<(WidthState, f64)> {
    check_tol(tol)?;
    if !(init.t < t_end) {
        return Err(Error::Domain {
            func: "propagate",
            msg: format!("need t_start < t_end, got {} >= {}", init.t, t_end),
        });
    }
    let sys = ErmakovRhs { drive };
    let opts = SolverOptions::with_tol(tol);
    let (y, _) = ode::solve(
        &sys,
        init.t,
        &[init.xi, init.xi_dot, 0.0],
        t_end,
        &[0.0],
        &opts,
        |step| check_positive(step.y),
    )
    .map_err(|(e, y, t)| failure(e, &y, t))?;
    Ok((
        WidthState {
            t: t_end,
            xi: y[0],
            xi_dot: y[1],
        },
        y[2],
    ))
}

struct LinearRhs<'a> {
    drive: &'a DriveSpec,
}

impl OdeSystem for LinearRhs<'_> {
    fn dim(&self) -> usize {
        4
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        let w2 = self.drive.omega_squared(t);
        dy[0] = y[1];
        dy[1] = -w2 * y[0];
        dy[2] = y[3];
        dy[3] = -w2 * y[2];
    }
}

/// Tracks the unwrapped phase `λ = −arg w`, which only ever increases.
struct PhaseTracker {
    theta: f64,
    lambda: f64,
}

impl PhaseTracker {
    fn advance(&mut self, y: &[f64]) -> f64 {
        let theta = y[2].atan2(y[0]);
        self.lambda += (self.theta - theta).rem_euclid(std::f64::consts::TAU);
        self.theta = theta;
        self.lambda
    }
}

fn width_from_linear(t: f64, y: &[f64]) -> WidthState {
    let xi = y[0].hypot(y[2]);
    WidthState {
        t,
        xi,
        xi_dot: (y[0] * y[1] + y[2] * y[3]) / xi,
    }
}

/// As [`integrate_at`], but the width is obtained as `ξ = |w|` from the
/// complex classical solution `w = x_a + i x_b` of `ẅ + ω² w = 0` with
/// `w = ξ`, `ẇ = ξ̇ − i/(2ξ)` at the start.
///
/// Both formulations describe the same trajectory. This one stays smooth when
/// the state is strongly squeezed, where the `1/(4ξ³)` barrier forces the
/// direct integration into very small steps, so it is the method of choice
/// for long post-crossing horizons. The phase is recovered as `λ = −arg w`;
/// its unwrapping is exact because `arg w` advances by less than `2π` over
/// any interval shorter than `π/ω`, and the tracker is updated at least once
/// per unit of `ω·Δt`.
pub fn integrate_at_linear(
    drive: &DriveSpec,
    init: WidthState,
    times: &[f64],
    tol: f64,
) -> Result<Trajectory> {
    check_tol(tol)?;
    check_times("integrate_at_linear", init.t, times)?;
    if !(init.xi > 0.0) {
        return Err(domain(
            "integrate_at_linear",
            format!("xi must be > 0, got {}", init.xi),
        ));
    }
    let y0 = [init.xi, init.xi_dot, 0.0, -0.5 / init.xi];
    let mut tracker = PhaseTracker {
        theta: 0.0,
        lambda: 0.0,
    };
    let mut samples = Vec::with_capacity(times.len());
    let mut phase = Vec::with_capacity(times.len());
    let mut next = 0;
    while next < times.len() && times[next] == init.t {
        samples.push(init);
        phase.push(0.0);
        next += 1;
    }
    if next < times.len() {
        let t_end = *times.last().unwrap();
        let sys = LinearRhs { drive };
        let opts = SolverOptions::with_tol(tol);
        let mut buf = [0.0; 4];
        ode::solve(&sys, init.t, &y0, t_end, &[0.0], &opts, |step| {
            let h = step.t - step.t_old;
            let w_max = drive.omega(step.t_old).max(drive.omega(step.t));
            let pieces = (h * w_max).ceil().max(1.0) as usize;
            for j in 1..=pieces {
                let tj = if j == pieces {
                    step.t
                } else {
                    step.t_old + h * j as f64 / pieces as f64
                };
                while next < times.len() && times[next] <= tj {
                    let ts = times[next];
                    step.interpolate(ts, &mut buf);
                    if ts == step.t {
                        buf.copy_from_slice(step.y);
                    }
                    let lam = tracker.advance(&buf);
                    samples.push(width_from_linear(ts, &buf));
                    phase.push(lam);
                    next += 1;
                }
                if j == pieces {
                    tracker.advance(step.y);
                } else {
                    step.interpolate(tj, &mut buf);
                    tracker.advance(&buf);
                }
            }
            Ok(())
        })
        .map_err(|(e, y, t)| failure(e, &[y[0].hypot(y[2]), 0.0], t))?;
    }
    Ok(Trajectory {
        drive: *drive,
        samples,
        phase,
    })
}

/// Initial data of one real solution of `ẍ + ω² x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalInit {
    pub x: f64,
    pub v: f64,
}

/// Two classical solutions sampled at every accepted step, with their
/// Wronskian `x₁ẋ₂ − ẋ₁x₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalPairTrajectory {
    pub t: Vec<f64>,
    pub first: Vec<ClassicalInit>,
    pub second: Vec<ClassicalInit>,
    pub wronskian: Vec<f64>,
}

impl ClassicalPairTrajectory {
    /// Largest relative drift of the Wronskian from its initial value.
    pub fn max_wronskian_drift(&self) -> f64 {
        let w0 = self.wronskian[0];
        self.wronskian
            .iter()
            .map(|w| ((w - w0) / w0).abs())
            .fold(0.0, f64::max)
    }
}

struct ClassicalRhs<'a> {
    drive: &'a DriveSpec,
}

impl OdeSystem for ClassicalRhs<'_> {
    fn dim(&self) -> usize {
        4
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        let w2 = self.drive.omega_squared(t);
        dy[0] = y[1];
        dy[1] = -w2 * y[0];
        dy[2] = y[3];
        dy[3] = -w2 * y[2];
    }
}

/// Integrates two real solutions of the classical oscillator from `t_start`
/// to `t_end` with the same adaptive scheme used for the width.
pub fn integrate_classical_pair(
    drive: &DriveSpec,
    t_start: f64,
    first: ClassicalInit,
    second: ClassicalInit,
    t_end: f64,
    tol: f64,
) -> Result<ClassicalPairTrajectory> {
    check_tol(tol)?;
    let w0 = first.x * second.v - first.v * second.x;
    if w0 == 0.0 || !w0.is_finite() {
        return Err(Error::Domain {
            func: "integrate_classical_pair",
            msg: "initial conditions are linearly dependent".into(),
        });
    }
    if !(t_start < t_end) {
        return Err(Error::Domain {
            func: "integrate_classical_pair",
            msg: format!("need t_start < t_end, got {t_start} >= {t_end}"),
        });
    }
    let mut out = ClassicalPairTrajectory {
        t: vec![t_start],
        first: vec![first],
        second: vec![second],
        wronskian: vec![w0],
    };
    let sys = ClassicalRhs { drive };
    let opts = SolverOptions::with_tol(tol);
    ode::solve(
        &sys,
        t_start,
        &[first.x, first.v, second.x, second.v],
        t_end,
        &[0.0],
        &opts,
        |step| {
            let y = step.y;
            out.t.push(step.t);
            out.first.push(ClassicalInit { x: y[0], v: y[1] });
            out.second.push(ClassicalInit { x: y[2], v: y[3] });
            out.wronskian.push(y[0] * y[3] - y[1] * y[2]);
            Ok(())
        },
    )
    .map_err(|(e, y, t)| Error::Integration {
        reason: format!("{e:?}"),
        last: WidthState {
            t,
            xi: (y[0] * y[0] + y[2] * y[2]).sqrt(),
            xi_dot: 0.0,
        },
    })?;
    Ok(out)
}
