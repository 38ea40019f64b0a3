//! Gamma, Bessel J of fractional order and the generalized Airy pair.
//!
//! Everything here works in plain `f64`. Bessel functions are evaluated from
//! the ascending series below [`BESSEL_SWITCH`] and from the Hankel
//! asymptotic expansion above it.

use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Argument at which [`bessel_j`] switches from the power series to the
/// Hankel expansion.
pub const BESSEL_SWITCH: f64 = 15.0;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for positive real arguments.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(domain(
            "gamma_fn",
            format!("argument must be finite and > 0, got {x}"),
        ));
    }
    Ok(gamma_pos(x))
}

// Lanczos approximation with reflection below 1/2.
fn gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_pos(1.0 - x));
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
}

fn check_order(func: &'static str, order: f64) -> Result<()> {
    if !order.is_finite() || order.abs() >= 1.0 {
        return Err(domain(
            func,
            format!("order must lie in (-1, 1), got {order}"),
        ));
    }
    Ok(())
}

/// Bessel function of the first kind `J_order(x)` for `|order| < 1`, `x >= 0`.
///
/// Negative orders are singular at the origin, so `x = 0` is rejected for them.
pub fn bessel_j(order: f64, x: f64) -> Result<f64> {
    check_order("bessel_j", order)?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain(
            "bessel_j",
            format!("argument must be finite and >= 0, got {x}"),
        ));
    }
    if x == 0.0 {
        return if order > 0.0 {
            Ok(0.0)
        } else if order == 0.0 {
            Ok(1.0)
        } else {
            Err(domain("bessel_j", "negative order diverges at x = 0"))
        };
    }
    if x <= BESSEL_SWITCH {
        Ok(series(order, x))
    } else {
        Ok(hankel(order, x))
    }
}

/// Ascending power series, usable for any `x >= 0` but only accurate up to
/// roughly `x ~ 20` because of cancellation.
pub fn bessel_j_series(order: f64, x: f64) -> Result<f64> {
    check_order("bessel_j_series", order)?;
    if !(x > 0.0) {
        return bessel_j(order, x);
    }
    Ok(series(order, x))
}

/// Hankel asymptotic expansion, truncated at its smallest term.
pub fn bessel_j_asymptotic(order: f64, x: f64) -> Result<f64> {
    check_order("bessel_j_asymptotic", order)?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(
            "bessel_j_asymptotic",
            format!("argument must be > 0, got {x}"),
        ));
    }
    Ok(hankel(order, x))
}

fn series(order: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = half.powf(order) / gamma_pos(order + 1.0);
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + order));
        sum += term;
        if k > half && term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        if k > 500.0 {
            break;
        }
        k += 1.0;
    }
    sum
}

fn hankel(order: f64, x: f64) -> f64 {
    let mu = 4.0 * order * order;
    let eight_x = 8.0 * x;
    // a_k / x^k accumulated incrementally; even k feed P, odd k feed Q.
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut prev = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * eight_x);
        let mag = term.abs();
        if mag > prev {
            break;
        }
        prev = mag;
        // (-1)^floor(k/2) sign pattern of the two interleaved series.
        let signed = if (k / 2) % 2 == 0 { term } else { -term };
        if k % 2 == 0 {
            p += signed;
        } else {
            q += signed;
        }
        if mag < 1e-17 {
            break;
        }
    }
    // cos/sin of x are expanded out so every order shares the same reduction
    // of x; at very large x the phase offsets would otherwise round differently.
    let shift = (0.5 * order + 0.25) * PI;
    let (sx, cx) = x.sin_cos();
    let (ss, cs) = shift.sin_cos();
    let cos_chi = cx * cs + sx * ss;
    let sin_chi = sx * cs - cx * ss;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// Values of the generalized Airy functions `Ai_p(z)`, `Bi_p(z)` at `z = -t`.
///
/// The derivative entries are taken with respect to the argument `z`, so that
/// `ai * bi_deriv - ai_deriv * bi = (2/pi) sqrt(p) sin(p pi)`. Derivatives with
/// respect to the time `t` are the negated entries (see [`AiryPair::time_derivs`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryPair {
    pub ai: f64,
    pub bi: f64,
    pub ai_deriv: f64,
    pub bi_deriv: f64,
}

impl AiryPair {
    pub fn wronskian(&self) -> f64 {
        self.ai * self.bi_deriv - self.ai_deriv * self.bi
    }

    /// `(d/dt Ai_p(-t), d/dt Bi_p(-t))`.
    pub fn time_derivs(&self) -> (f64, f64) {
        (-self.ai_deriv, -self.bi_deriv)
    }
}

/// The constant Wronskian `(2/pi) sqrt(p) sin(p pi)` of the generalized Airy pair.
pub fn airy_wronskian(p: f64) -> f64 {
    2.0 / PI * p.sqrt() * (p * PI).sin()
}

/// Generalized Airy pair at `z = -t` for `p` in `(0, 1/2]` and `t >= 0`.
///
/// Both `Ai_p(-t)` and `Bi_p(-t)` solve `x'' + t^(2 zν) x = 0` in `t`, with
/// `zν = (1 - 2p) / (2p)`. At `t = 0` the finite limits of the leading series
/// terms are returned, including the derivatives.
pub fn airy_gen(p: f64, t: f64) -> Result<AiryPair> {
    if !(p > 0.0 && p <= 0.5) {
        return Err(domain(
            "airy_gen",
            format!("p must lie in (0, 1/2], got {p}"),
        ));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain(
            "airy_gen",
            format!("t must be finite and >= 0, got {t}"),
        ));
    }
    let zeta = 2.0 * p * t.powf(0.5 / p);
    if zeta < 1e-280 {
        let g_minus = gamma_pos(1.0 - p);
        let g_plus = gamma_pos(1.0 + p);
        let pp = p.powf(p);
        return Ok(AiryPair {
            ai: p / pp / g_minus,
            bi: p.sqrt() / pp / g_minus,
            ai_deriv: -p * pp / g_plus,
            bi_deriv: p.sqrt() * pp / g_plus,
        });
    }
    let j_p = bessel_j(p, zeta)?;
    let j_mp = bessel_j(-p, zeta)?;
    let j_pm1 = bessel_j(p - 1.0, zeta)?;
    let j_1mp = bessel_j(1.0 - p, zeta)?;

    let sqrt_t = t.sqrt();
    // f1 = sqrt(t) J_p(zeta), f2 = sqrt(t) J_{-p}(zeta) and their t-derivatives.
    let f1 = sqrt_t * j_p;
    let f2 = sqrt_t * j_mp;
    let scale = zeta / (2.0 * p * sqrt_t);
    let df1 = scale * j_pm1;
    let df2 = -scale * j_1mp;

    let sp = p.sqrt();
    let x1 = p * (f2 + f1);
    let x2 = sp * (f2 - f1);
    let dx1 = p * (df2 + df1);
    let dx2 = sp * (df2 - df1);
    Ok(AiryPair {
        ai: x1,
        bi: x2,
        ai_deriv: -dx1,
        bi_deriv: -dx2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn znu_of(p: f64) -> f64 {
        (1.0 - 2.0 * p) / (2.0 * p)
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn gamma_known_values() {
        assert!(rel(gamma_fn(0.5).unwrap(), PI.sqrt()) < 1e-14);
        assert!(rel(gamma_fn(1.0).unwrap(), 1.0) < 1e-14);
        assert!(rel(gamma_fn(5.0).unwrap(), 24.0) < 1e-13);
    }

    #[test]
    fn gamma_rejects_bad_input() {
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-1.5).is_err());
        assert!(gamma_fn(f64::NAN).is_err());
        assert!(gamma_fn(f64::INFINITY).is_err());
    }

    #[test]
    fn bessel_half_order_closed_form() {
        for &x in &[0.5, 1.0, 5.0, 17.0, 40.0] {
            let want = (2.0 / (PI * x)).sqrt() * x.sin();
            let got = bessel_j(0.5, x).unwrap();
            assert!((got - want).abs() < 1e-13, "x={x}: {got} vs {want}");
            let want_m = (2.0 / (PI * x)).sqrt() * x.cos();
            assert!((bessel_j(-0.5, x).unwrap() - want_m).abs() < 1e-13);
        }
    }

    #[test]
    fn bessel_origin() {
        assert_eq!(bessel_j(0.3, 0.0).unwrap(), 0.0);
        assert!(bessel_j(-0.3, 0.0).is_err());
    }

    #[test]
    fn bessel_domain_errors() {
        assert!(bessel_j(0.3, -1.0).is_err());
        assert!(bessel_j(1.0, 1.0).is_err());
        assert!(bessel_j(-1.2, 1.0).is_err());
    }

    #[test]
    fn bessel_seam_is_continuous() {
        for &nu in &[0.1, 0.25, 1.0 / 3.0, -0.25, -2.0 / 3.0, 0.9] {
            for i in 0..=20 {
                let x = 10.0 + 0.5 * i as f64;
                let s = bessel_j_series(nu, x).unwrap();
                let a = bessel_j_asymptotic(nu, x).unwrap();
                // series cancellation grows like e^x / x past the switch point
                let bound = if x <= BESSEL_SWITCH { 1e-9 } else { 1e-8 };
                assert!((s - a).abs() < bound, "nu={nu} x={x}: {s} vs {a}");
            }
        }
    }

    #[test]
    fn airy_zero_limits_match_series() {
        for &p in &[0.1, 0.25, 1.0 / 3.0, 0.45, 0.5] {
            let at0 = airy_gen(p, 0.0).unwrap();
            let near = airy_gen(p, 1e-6).unwrap();
            assert!((at0.ai - near.ai).abs() < 1e-5);
            assert!((at0.bi - near.bi).abs() < 1e-5);
            assert!((at0.ai_deriv - near.ai_deriv).abs() < 1e-4);
            assert!((at0.wronskian() - airy_wronskian(p)).abs() < 1e-13);
        }
    }

    #[test]
    fn airy_zero_limit_gamma_formula() {
        // Ai(0) = 3^{-2/3} / Gamma(2/3) for the standard Airy function.
        let a = airy_gen(1.0 / 3.0, 0.0).unwrap();
        let want = 3f64.powf(-2.0 / 3.0) / gamma_fn(2.0 / 3.0).unwrap();
        assert!(rel(a.ai, want) < 1e-13);
    }

    #[test]
    fn airy_domain() {
        assert!(airy_gen(0.0, 1.0).is_err());
        assert!(airy_gen(0.6, 1.0).is_err());
        assert!(airy_gen(0.3, -1.0).is_err());
    }

    #[test]
    fn airy_derivatives_match_finite_differences() {
        for &p in &[0.125, 0.25, 1.0 / 3.0, 0.5] {
            for &t in &[0.3_f64, 1.7, 4.0] {
                let omega = t.powf(znu_of(p));
                let h = 1e-4 / (1.0 + omega);
                let a = airy_gen(p, t).unwrap();
                let ap = airy_gen(p, t + h).unwrap();
                let am = airy_gen(p, t - h).unwrap();
                // z = -t, so d/dz = -d/dt
                let fd_ai = -(ap.ai - am.ai) / (2.0 * h);
                let fd_bi = -(ap.bi - am.bi) / (2.0 * h);
                let scale = 1e-7 * (1.0 + omega);
                assert!((fd_ai - a.ai_deriv).abs() < scale, "p={p} t={t}");
                assert!((fd_bi - a.bi_deriv).abs() < scale, "p={p} t={t}");
            }
        }
    }
}
