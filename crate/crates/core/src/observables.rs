//! Observables of the Gaussian dynamical state.
//!
//! Everything here is a function of the width `(ξ, ξ̇)` and the instantaneous
//! frequency `ω`, through the effective complex frequency
//! `Ω = 1/(2ξ²) − i ξ̇/ξ`. The state overlaps only with even eigenstates of the
//! instantaneous Hamiltonian.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::ermakov::{Trajectory, WidthState};
use crate::error::{domain, Error, Result};

/// Observables at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservableRecord {
    pub t: f64,
    pub omega: f64,
    /// Mean excitation number; `+∞` at an exactly gapless sample.
    pub n_exc: f64,
    /// Ground-state probability `|c₀₀|²`.
    pub fidelity: f64,
    pub heat: f64,
    pub phase: f64,
    /// `Re Ω = 1/(2ξ²)`
    pub eff_freq_re: f64,
    /// `Im Ω = −ξ̇/ξ`
    pub eff_freq_im: f64,
}

impl ObservableRecord {
    pub fn new(state: &WidthState, omega: f64, phase: f64) -> Self {
        let xi2 = state.xi * state.xi;
        ObservableRecord {
            t: state.t,
            omega,
            n_exc: n_exc(state, omega),
            fidelity: fidelity(state, omega),
            heat: heat(state, omega),
            phase,
            eff_freq_re: 0.5 / xi2,
            eff_freq_im: -state.xi_dot / state.xi,
        }
    }
}

/// Observable records for every sample of a trajectory.
pub fn records(traj: &Trajectory) -> Vec<ObservableRecord> {
    traj.samples
        .iter()
        .zip(&traj.phase)
        .map(|(s, &ph)| ObservableRecord::new(s, traj.drive.omega(s.t), ph))
        .collect()
}

/// `ω · n_exc = (ξ²/2) [(1/(2ξ²) − ω)² + (ξ̇/ξ)²]`, finite also at `ω = 0`.
pub fn heat_product(state: &WidthState, omega: f64) -> f64 {
    let xi2 = state.xi * state.xi;
    let u = 0.5 / xi2 - omega;
    let v = state.xi_dot / state.xi;
    0.5 * xi2 * (u * u + v * v)
}

/// Mean number of excitations in the instantaneous eigenbasis,
/// `n = (ξ²/2ω) [(1/(2ξ²) − ω)² + (ξ̇/ξ)²]`.
///
/// At `ω = 0` the excitation number diverges and `+∞` is returned; the heat
/// stays finite, see [`heat`].
pub fn n_exc(state: &WidthState, omega: f64) -> f64 {
    if omega == 0.0 {
        return f64::INFINITY;
    }
    heat_product(state, omega) / omega
}

/// Ground-state fidelity `|c₀₀|² = √(2ω) / (ξ |Ω + ω|)`; zero at `ω = 0`.
pub fn fidelity(state: &WidthState, omega: f64) -> f64 {
    if omega == 0.0 {
        return 0.0;
    }
    let u = 0.5 / (state.xi * state.xi) + omega;
    let v = state.xi_dot / state.xi;
    (2.0 * omega).sqrt() / (state.xi * u.hypot(v))
}

/// Excess energy over the instantaneous ground state,
/// `(ξ̇² + ω²ξ² + 1/(4ξ²))/2 − ω/2`. Equal to `ω · n_exc`.
pub fn heat(state: &WidthState, omega: f64) -> f64 {
    let xi2 = state.xi * state.xi;
    0.5 * (state.xi_dot * state.xi_dot + omega * omega * xi2 + 0.25 / xi2) - 0.5 * omega
}

/// Phase `λ` accumulated between two samples of a trajectory.
pub fn phase_increment(traj: &Trajectory, samples: Range<usize>) -> Result<f64> {
    if samples.start > samples.end || samples.end >= traj.phase.len() {
        return Err(domain(
            "phase_increment",
            format!("sample range {samples:?} outside 0..{}", traj.phase.len()),
        ));
    }
    Ok(traj.phase[samples.end] - traj.phase[samples.start])
}

/// Probabilities `|c_{n0}|²` of the even levels `n = 0, 2, …, n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcitationDistribution {
    /// `even[k]` is the probability of level `2k`.
    pub even: Vec<f64>,
    /// Upper bound on the total probability above `n_max`.
    pub tail_bound: f64,
    /// Upper bound on `Σ_{n > n_max} n |c_{n0}|²`; infinite when the
    /// truncation is too early for the geometric bound to apply.
    pub moment_tail_bound: f64,
    /// `|(Ω − ω)/(Ω + ω)|²`, the asymptotic ratio of successive terms.
    pub ratio: f64,
}

impl ExcitationDistribution {
    /// Probability of level `n`; odd levels are never populated.
    pub fn probability(&self, n: usize) -> f64 {
        if n % 2 == 1 {
            return 0.0;
        }
        self.even.get(n / 2).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.even.iter().sum()
    }

    pub fn first_moment(&self) -> f64 {
        self.even
            .iter()
            .enumerate()
            .map(|(k, p)| 2.0 * k as f64 * p)
            .sum()
    }
}

/// `|c_{n0}|² = ((n−1)!!/n!!) (√(2ω)/(ξ|Ω+ω|)) |(Ω−ω)/(Ω+ω)|ⁿ` for even `n`.
///
/// The double-factorial ratio and the power are accumulated in log space so
/// that large `n_max` does not underflow prematurely.
pub fn excitation_distribution(
    state: &WidthState,
    omega: f64,
    n_max: usize,
) -> Result<ExcitationDistribution> {
    if !(omega > 0.0) {
        return Err(domain(
            "excitation_distribution",
            format!("omega must be > 0, got {omega}"),
        ));
    }
    if n_max % 2 == 1 {
        return Err(domain(
            "excitation_distribution",
            format!("n_max must be even, got {n_max}"),
        ));
    }
    let re = 0.5 / (state.xi * state.xi);
    let im = -state.xi_dot / state.xi;
    let ratio = ((re - omega).powi(2) + im * im) / ((re + omega).powi(2) + im * im);
    let ln_f = fidelity(state, omega).ln();
    let ln_r2 = ratio.ln();

    let kmax = n_max / 2;
    let mut even = Vec::with_capacity(kmax + 1);
    let mut ln_term = ln_f;
    even.push(ln_term.exp());
    for k in 1..=kmax {
        let kf = k as f64;
        ln_term += ((2.0 * kf - 1.0) / (2.0 * kf)).ln() + ln_r2;
        even.push(ln_term.exp());
    }
    let last = ln_term.exp();
    // successive ratios above n_max are ((n+1)/(n+2)) r² < r²
    let tail_bound = if ratio == 0.0 {
        0.0
    } else {
        last * ratio / (1.0 - ratio)
    };
    let n = n_max as f64;
    let rho = (n + 3.0) / (n + 2.0) * ratio;
    let moment_tail_bound = if ratio == 0.0 {
        0.0
    } else if rho < 1.0 {
        (n + 2.0) * last * ratio / (1.0 - rho)
    } else {
        f64::INFINITY
    };
    Ok(ExcitationDistribution {
        even,
        tail_bound,
        moment_tail_bound,
        ratio,
    })
}

/// Quantity averaged by [`plateau`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    NExc,
    Fidelity,
    Heat,
    Width,
}

impl Quantity {
    pub fn eval(self, state: &WidthState, omega: f64) -> f64 {
        match self {
            Quantity::NExc => n_exc(state, omega),
            Quantity::Fidelity => fidelity(state, omega),
            Quantity::Heat => heat(state, omega),
            Quantity::Width => state.xi,
        }
    }
}

/// Time-average and oscillation amplitude over the tail of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plateau {
    pub mean: f64,
    /// Half the peak-to-peak spread inside the window.
    pub amplitude: f64,
    pub samples: usize,
}

/// Minimum number of samples inside the averaging window.
/// Fewest samples a plateau window may hold.
pub const MIN_WINDOW_SAMPLES: usize = 16;

/// Trapezoidal time-average of `quantity` over the trailing fraction `window`
/// of the trajectory's time span.
pub fn plateau(traj: &Trajectory, quantity: Quantity, window: f64) -> Result<Plateau> {
    let times: Vec<f64> = traj.samples.iter().map(|s| s.t).collect();
    let values: Vec<f64> = traj
        .samples
        .iter()
        .map(|s| quantity.eval(s, traj.drive.omega(s.t)))
        .collect();
    plateau_of_series(&times, &values, window)
}

/// [`plateau`] for an arbitrary sampled series with increasing `times`.
pub fn plateau_of_series(times: &[f64], values: &[f64], window: f64) -> Result<Plateau> {
    if !(window > 0.0 && window <= 0.5) {
        return Err(domain(
            "plateau",
            format!("window must lie in (0, 1/2], got {window}"),
        ));
    }
    if times.len() != values.len() {
        return Err(domain("plateau", "times and values differ in length"));
    }
    if times.len() < 2 {
        return Err(Error::InsufficientData(
            "series has fewer than two samples".into(),
        ));
    }
    let (t_first, t_last) = (times[0], times[times.len() - 1]);
    let t_cut = t_last - window * (t_last - t_first);
    let first = times.partition_point(|&t| t < t_cut);
    let (tail_t, tail_v) = (&times[first..], &values[first..]);
    if tail_t.len() < MIN_WINDOW_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "{} samples in the averaging window, need {MIN_WINDOW_SAMPLES}",
            tail_t.len()
        )));
    }
    let mut area = 0.0;
    for i in 1..tail_t.len() {
        area += 0.5 * (tail_v[i] + tail_v[i - 1]) * (tail_t[i] - tail_t[i - 1]);
    }
    let span = tail_t[tail_t.len() - 1] - tail_t[0];
    let (lo, hi) = tail_v
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    Ok(Plateau {
        mean: area / span,
        amplitude: 0.5 * (hi - lo),
        samples: tail_t.len(),
    })
}
