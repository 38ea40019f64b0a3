//! Dormand-Prince 5(4) with FSAL, PI step control and 4th-order dense output.
//!
//! Integration runs forward or backward in time. Breakpoints are hit exactly;
//! the stage cache is discarded there so a kink in the right-hand side never
//! falls inside a step.

/// A first-order system `y' = f(t, y)`.
pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]);
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on |h|; `f64::INFINITY` for none.
    pub max_step: f64,
    pub max_steps: usize,
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            max_step: f64::INFINITY,
            max_steps: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OdeFailure {
    StepUnderflow {
        t: f64,
        h: f64,
    },
    TooManySteps {
        t: f64,
    },
    NonFinite {
        t: f64,
    },
    /// Raised by the step observer to stop integration.
    Stopped {
        t: f64,
        reason: String,
    },
}

/// Everything known about one accepted step, including its dense output.
pub struct Step<'a> {
    pub t_old: f64,
    pub t: f64,
    pub y: &'a [f64],
    cont: &'a [Vec<f64>; 5],
}

impl Step<'_> {
    /// Dense-output interpolant at `t_old <= t_s <= t` (or reversed for
    /// backward steps).
    pub fn interpolate(&self, t_s: f64, out: &mut [f64]) {
        let h = self.t - self.t_old;
        let theta = (t_s - self.t_old) / h;
        let theta1 = 1.0 - theta;
        let [r1, r2, r3, r4, r5] = self.cont;
        for i in 0..out.len() {
            out[i] = r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// How a failed solve ended: the reason, the last accepted state and its time.
pub type Failed = (OdeFailure, Vec<f64>, f64);

/// Integrates `sys` from `(t0, y0)` to `t_end`, stopping exactly at every
/// breakpoint strictly between them. `observer` sees each accepted step and
/// may abort by returning `Err(reason)`.
pub fn solve<S, F>(
    sys: &S,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    breakpoints: &[f64],
    opts: &SolverOptions,
    mut observer: F,
) -> std::result::Result<(Vec<f64>, SolveStats), Failed>
where
    S: OdeSystem + ?Sized,
    F: FnMut(&Step<'_>) -> Result<(), String>,
{
    let n = sys.dim();
    assert_eq!(y0.len(), n, "state dimension mismatch");
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let mut stops: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&b| (b - t0) * dir > 0.0 && (t_end - b) * dir > 0.0)
        .collect();
    stops.sort_by(|a, b| (a * dir).partial_cmp(&(b * dir)).unwrap());
    stops.dedup();
    stops.push(t_end);

    let mut stats = SolveStats::default();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut ws = Workspace::new(n);
    let mut h_guess: Option<f64> = None;

    for &stop in &stops {
        if t == stop {
            continue;
        }
        let res = segment(
            sys,
            &mut t,
            &mut y,
            stop,
            dir,
            opts,
            &mut ws,
            &mut stats,
            &mut h_guess,
            &mut observer,
        );
        if let Err(e) = res {
            return Err((e, y, t));
        }
    }
    Ok((y, stats))
}

struct Workspace {
    k: [Vec<f64>; 7],
    y1: Vec<f64>,
    ytmp: Vec<f64>,
    err: Vec<f64>,
    cont: [Vec<f64>; 5],
}

impl Workspace {
    fn new(n: usize) -> Self {
        let v = || vec![0.0; n];
        Self {
            k: [v(), v(), v(), v(), v(), v(), v()],
            y1: v(),
            ytmp: v(),
            err: v(),
            cont: [v(), v(), v(), v(), v()],
        }
    }
}

fn norm_scaled(v: &[f64], y0: &[f64], y1: &[f64], opts: &SolverOptions) -> f64 {
    let mut acc = 0.0;
    for i in 0..v.len() {
        let sc = opts.atol + opts.rtol * y0[i].abs().max(y1[i].abs());
        let r = v[i] / sc;
        acc += r * r;
    }
    (acc / v.len() as f64).sqrt()
}

// Hairer's starting step heuristic.
#[allow(clippy::too_many_arguments)]
fn initial_step<S: OdeSystem + ?Sized>(
    sys: &S,
    t: f64,
    y: &[f64],
    f0: &[f64],
    dir: f64,
    span: f64,
    opts: &SolverOptions,
    ws_tmp: &mut [f64],
    f1: &mut [f64],
) -> f64 {
    let n = y.len() as f64;
    let mut dnf = 0.0;
    let mut dny = 0.0;
    for i in 0..y.len() {
        let sk = opts.atol + opts.rtol * y[i].abs();
        dnf += (f0[i] / sk).powi(2);
        dny += (y[i] / sk).powi(2);
    }
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
        1e-6
    } else {
        0.01 * (dny / dnf).sqrt()
    };
    h = h.min(opts.max_step).min(span);
    for i in 0..y.len() {
        ws_tmp[i] = y[i] + dir * h * f0[i];
    }
    sys.rhs(t + dir * h, ws_tmp, f1);
    let mut der2 = 0.0;
    for i in 0..y.len() {
        let sk = opts.atol + opts.rtol * y[i].abs();
        der2 += ((f1[i] - f0[i]) / sk).powi(2);
    }
    let der2 = (der2 / n).sqrt() / h;
    let der12 = der2.max((dnf / n).sqrt());
    let h1 = if der12 <= 1e-15 {
        (h * 1e-3).max(1e-6)
    } else {
        (0.01 / der12).powf(0.2)
    };
    (100.0 * h).min(h1).min(opts.max_step).min(span)
}

#[allow(clippy::too_many_arguments)]
fn segment<S, F>(
    sys: &S,
    t: &mut f64,
    y: &mut Vec<f64>,
    stop: f64,
    dir: f64,
    opts: &SolverOptions,
    ws: &mut Workspace,
    stats: &mut SolveStats,
    h_guess: &mut Option<f64>,
    observer: &mut F,
) -> Result<(), OdeFailure>
where
    S: OdeSystem + ?Sized,
    F: FnMut(&Step<'_>) -> Result<(), String>,
{
    let n = y.len();
    sys.rhs(*t, y, &mut ws.k[0]);
    stats.evaluations += 1;
    let span = (stop - *t).abs();
    let mut h = match *h_guess {
        Some(h) => h.min(span),
        None => {
            let (k0, rest) = ws.k.split_at_mut(1);
            let h0 = initial_step(
                sys,
                *t,
                y,
                &k0[0],
                dir,
                span,
                opts,
                &mut ws.ytmp,
                &mut rest[0],
            );
            stats.evaluations += 1;
            h0
        }
    };
    let mut facold: f64 = 1e-4;
    let mut last_rejected = false;
    const BETA: f64 = 0.04;
    const EXPO1: f64 = 0.2 - BETA * 0.75;
    const SAFE: f64 = 0.9;

    loop {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(OdeFailure::TooManySteps { t: *t });
        }
        let remaining = (stop - *t).abs();
        let mut last = false;
        if h >= remaining * (1.0 - 1e-12) {
            h = remaining;
            last = true;
        } else if h > 0.5 * remaining {
            // avoid a sliver of a final step
            h = 0.5 * remaining;
        }
        if h < 1e-14 * t.abs().max(1.0) {
            return Err(OdeFailure::StepUnderflow { t: *t, h });
        }
        let hs = dir * h;
        let t_new = if last { stop } else { *t + hs };

        let [k1, k2, k3, k4, k5, k6, k7] = &mut ws.k;
        let yt = &mut ws.ytmp;
        for i in 0..n {
            yt[i] = y[i] + hs * A21 * k1[i];
        }
        sys.rhs(*t + C2 * hs, yt, k2);
        for i in 0..n {
            yt[i] = y[i] + hs * (A31 * k1[i] + A32 * k2[i]);
        }
        sys.rhs(*t + C3 * hs, yt, k3);
        for i in 0..n {
            yt[i] = y[i] + hs * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        sys.rhs(*t + C4 * hs, yt, k4);
        for i in 0..n {
            yt[i] = y[i] + hs * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        sys.rhs(*t + C5 * hs, yt, k5);
        for i in 0..n {
            yt[i] =
                y[i] + hs * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        sys.rhs(*t + hs, yt, k6);
        let y1 = &mut ws.y1;
        for i in 0..n {
            y1[i] =
                y[i] + hs * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        sys.rhs(t_new, y1, k7);
        stats.evaluations += 6;

        for i in 0..n {
            ws.err[i] =
                hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let err = norm_scaled(&ws.err, y, y1, opts);
        if !err.is_finite() || y1.iter().any(|v| !v.is_finite()) {
            // shrink hard and retry; non-finite states come from overshooting
            stats.rejected += 1;
            h *= 0.1;
            last_rejected = true;
            continue;
        }

        let fac11 = err.powf(EXPO1);
        if err <= 1.0 {
            stats.accepted += 1;
            let fac = (fac11 / facold.powf(BETA) / SAFE).clamp(0.1, 5.0);
            let mut h_new = h / fac;
            if last_rejected {
                h_new = h_new.min(h);
            }
            facold = err.max(1e-4);

            // dense output coefficients
            let [c1, c2, c3, c4, c5] = &mut ws.cont;
            for i in 0..n {
                let ydiff = y1[i] - y[i];
                let bspl = hs * k1[i] - ydiff;
                c1[i] = y[i];
                c2[i] = ydiff;
                c3[i] = bspl;
                c4[i] = ydiff - hs * k7[i] - bspl;
                c5[i] = hs
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            let t_old = *t;
            *t = t_new;
            y.copy_from_slice(y1);
            k1.copy_from_slice(k7);
            let step = Step {
                t_old,
                t: t_new,
                y,
                cont: &ws.cont,
            };
            observer(&step).map_err(|reason| OdeFailure::Stopped { t: t_new, reason })?;
            h = h_new.min(opts.max_step);
            last_rejected = false;
            if last {
                *h_guess = Some(h);
                return Ok(());
            }
        } else {
            stats.rejected += 1;
            h /= (fac11 / SAFE).min(10.0);
            last_rejected = true;
        }
    }
}
