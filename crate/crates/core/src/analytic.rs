//! Closed-form solution of the unit-rate power-law problem.
//!
//! For `ω(t)² = |t|^(2zν)` the Ermakov width is `ξ = |w|` with `w = a x₁ + b x₂`
//! a complex solution of the classical oscillator, where `x₁ = Ai_p(-|t|)`,
//! `x₂ = Bi_p(-|t|)` and `p = 1/(2 + 2zν)`. One coefficient set fixes the
//! adiabatic ground state as `t → -∞`; a second set continues the solution
//! through the critical point with matching `ξ` and `ξ̇`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::protocols::p_from_znu;
use crate::specfun::{airy_gen, airy_wronskian, gamma_fn};

/// Below this distance from `p = 1/2` the closed forms are replaced by their
/// `zν → 0` limits.
const NEAR_HALF: f64 = 1e-9;

/// Which side of the critical point a coefficient set describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    BeforeCrossing,
    AfterCrossing,
}

/// Coefficients of `w = a x₁ + b x₂` with real `a` and complex `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalSolutionPair {
    pub p: f64,
    pub a: f64,
    pub b_re: f64,
    pub b_im: f64,
    pub branch: Branch,
}

impl ClassicalSolutionPair {
    /// `2 a Im(b) W[x₁, x₂]`, equal to one for a properly normalised pair.
    pub fn wronskian_condition(&self) -> f64 {
        2.0 * self.a * self.b_im * airy_wronskian(self.p)
    }
}

fn check_p(func: &'static str, p: f64) -> Result<f64> {
    if !(p > NEAR_HALF && p <= 0.5) {
        return Err(domain(func, format!("p must lie in (0, 1/2], got {p}")));
    }
    // the trigonometric forms are regular at 1/2; snapping just pins the limit
    Ok(if 0.5 - p < NEAR_HALF { 0.5 } else { p })
}

/// Coefficients of the solution that is the adiabatic ground state at `t → -∞`.
pub fn half_cycle_coeffs(p: f64) -> Result<ClassicalSolutionPair> {
    let p = check_p("half_cycle_coeffs", p)?;
    let half = 0.5 * p * PI;
    Ok(ClassicalSolutionPair {
        p,
        a: (PI / (2.0 * p)).sqrt() / (2.0 * half.cos()),
        b_re: 0.0,
        b_im: (PI / 2.0).sqrt() / (2.0 * half.sin()),
        branch: Branch::BeforeCrossing,
    })
}

/// Coefficients continuing the half-cycle solution past `t = 0`.
pub fn full_cycle_coeffs(p: f64) -> Result<ClassicalSolutionPair> {
    let p = check_p("full_cycle_coeffs", p)?;
    let half = 0.5 * p * PI;
    Ok(ClassicalSolutionPair {
        p,
        a: (PI / (2.0 * p)).sqrt() / (2.0 * half.sin()),
        b_re: 0.0,
        b_im: (PI / 2.0).sqrt() / (2.0 * half.cos()),
        branch: Branch::AfterCrossing,
    })
}

/// Exact `(ξ, ξ̇)` at time `t` from a coefficient pair. `ξ̇` is the ordinary
/// time derivative.
pub fn xi_analytic(pair: &ClassicalSolutionPair, t: f64) -> Result<(f64, f64)> {
    let ok = match pair.branch {
        Branch::BeforeCrossing => t <= 0.0,
        Branch::AfterCrossing => t >= 0.0,
    };
    if !ok {
        return Err(domain(
            "xi_analytic",
            format!("t = {t} lies outside the {:?} branch", pair.branch),
        ));
    }
    let tau = t.abs();
    let airy = airy_gen(pair.p, tau)?;
    let (dx1, dx2) = airy.time_derivs();
    let (x1, x2) = (airy.ai, airy.bi);
    let re = pair.a * x1 + pair.b_re * x2;
    let im = pair.b_im * x2;
    let xi2 = re * re + im * im;
    // d/d|t| of ξ²/2, then the chain rule for |t|
    let half_dxi2 = re * (pair.a * dx1 + pair.b_re * dx2) + im * pair.b_im * dx2;
    // d|t|/dt = -1 on the whole left branch, including its endpoint t = 0
    let sign = match pair.branch {
        Branch::BeforeCrossing => -1.0,
        Branch::AfterCrossing => 1.0,
    };
    let xi = xi2.sqrt();
    Ok((xi, sign * half_dxi2 / xi))
}

/// The glued solution of a full unit-rate cycle: half-cycle coefficients for
/// `t ≤ 0` and full-cycle coefficients after.
pub fn glued_width(znu: f64, t: f64) -> Result<(f64, f64)> {
    let p = p_from_znu(znu);
    let pair = if t <= 0.0 {
        half_cycle_coeffs(p)?
    } else {
        full_cycle_coeffs(p)?
    };
    xi_analytic(&pair, t)
}

/// `ξ(0)`, with `ξ(0)² = Γ(p) Γ(p+1) / (2π p^(2p))`.
pub fn xi_at_zero(p: f64) -> Result<f64> {
    let p = check_p("xi_at_zero", p)?;
    let xi2 = gamma_fn(p)? * gamma_fn(p + 1.0)? / (2.0 * PI * p.powf(2.0 * p));
    Ok(xi2.sqrt())
}

/// `2 ξ ξ̇` at the critical point, `cot(pπ)`.
///
/// The limits from both sides coincide, as continuity of the trajectory
/// requires. Written in terms of `|t|` the left limit reads `-cot(pπ) sgn(t)`.
pub fn xixidot_at_zero(p: f64) -> Result<f64> {
    let p = check_p("xixidot_at_zero", p)?;
    Ok(cot(p * PI))
}

fn cot(x: f64) -> f64 {
    x.cos() / x.sin()
}

/// Long-time excitation number of a full unit-rate cycle, `cot²(π/(2+2zν))`.
pub fn asymptotic_n_exc(znu: f64) -> f64 {
    let c = cot(p_from_znu(znu) * PI);
    c * c
}

/// Long-time ground-state fidelity of a full cycle, `sin(π/(2+2zν))`.
pub fn asymptotic_fidelity(znu: f64) -> f64 {
    (p_from_znu(znu) * PI).sin()
}

/// Kibble-Zurek exponent of the heat at the end of a half cycle.
pub fn kzm_heat_exponent(znu: f64) -> f64 {
    znu / (1.0 + znu)
}

/// Leading large-`t` form of `ξ²` after a crossing:
/// `t^(−zν) (1 + cos²(pπ) + 2 cos(pπ) sin(2ζ)) / (2 sin²(pπ))`, `ζ = 2p t^(1/(2p))`.
pub fn large_time_width_squared(znu: f64, t: f64) -> f64 {
    let p = p_from_znu(znu);
    let (s, c) = (p * PI).sin_cos();
    let zeta = 2.0 * p * t.powf(0.5 / p);
    t.powf(-znu) * (1.0 + c * c + 2.0 * c * (2.0 * zeta).sin()) / (2.0 * s * s)
}
