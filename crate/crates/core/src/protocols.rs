//! Frequency protocols `ω(t)²`, the rate-rescaling map and the freezing time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape of the drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DriveKind {
    /// `(δ|t|)^(2zν)`
    PowerLaw,
    /// `(t0 + δ|t|)^(2zν)`
    Gapped,
    /// `(δ|t|)^(2zν) + γ (δ|t|)^n`
    Corrected,
}

/// A drive protocol `ω(t)²`, even in `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveSpec {
    pub kind: DriveKind,
    pub znu: f64,
    pub delta: f64,
    /// Gap offset, used by [`DriveKind::Gapped`] only.
    pub t0: f64,
    /// Correction amplitude, used by [`DriveKind::Corrected`] only.
    pub gamma: f64,
    /// Correction exponent, used by [`DriveKind::Corrected`] only.
    pub n_corr: u32,
}

impl DriveSpec {
    pub fn power_law(znu: f64, delta: f64) -> Result<Self> {
        Self {
            kind: DriveKind::PowerLaw,
            znu,
            delta,
            t0: 0.0,
            gamma: 0.0,
            n_corr: 0,
        }
        .validated()
    }

    pub fn gapped(znu: f64, delta: f64, t0: f64) -> Result<Self> {
        Self {
            kind: DriveKind::Gapped,
            znu,
            delta,
            t0,
            gamma: 0.0,
            n_corr: 0,
        }
        .validated()
    }

    pub fn corrected(znu: f64, delta: f64, gamma: f64, n_corr: u32) -> Result<Self> {
        Self {
            kind: DriveKind::Corrected,
            znu,
            delta,
            t0: 0.0,
            gamma,
            n_corr,
        }
        .validated()
    }

    /// Checks the invariants of the drive and returns it unchanged.
    pub fn validated(self) -> Result<Self> {
        if !(self.znu > 0.0) || !self.znu.is_finite() {
            return Err(Error::InvalidDrive(format!(
                "znu must be > 0, got {}",
                self.znu
            )));
        }
        if !(self.delta > 0.0) || !self.delta.is_finite() {
            return Err(Error::InvalidDrive(format!(
                "delta must be > 0, got {}",
                self.delta
            )));
        }
        match self.kind {
            DriveKind::PowerLaw => {}
            DriveKind::Gapped => {
                if !(self.t0 >= 0.0) || !self.t0.is_finite() {
                    return Err(Error::InvalidDrive(format!(
                        "t0 must be >= 0, got {}",
                        self.t0
                    )));
                }
            }
            DriveKind::Corrected => {
                if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
                    return Err(Error::InvalidDrive(format!(
                        "gamma must be >= 0, got {}",
                        self.gamma
                    )));
                }
                if f64::from(self.n_corr) <= 2.0 * self.znu {
                    return Err(Error::InvalidDrive(format!(
                        "correction exponent {} must exceed 2 znu = {}",
                        self.n_corr,
                        2.0 * self.znu
                    )));
                }
            }
        }
        Ok(self)
    }

    /// `p = 1 / (2 + 2 zν)`, the order of the Bessel functions solving the
    /// pure power-law problem.
    pub fn p(&self) -> f64 {
        p_from_znu(self.znu)
    }

    /// `ω(t)²`.
    pub fn omega_squared(&self, t: f64) -> f64 {
        let x = self.delta * t.abs();
        let two_znu = 2.0 * self.znu;
        match self.kind {
            DriveKind::PowerLaw => x.powf(two_znu),
            DriveKind::Gapped => (self.t0 + x).powf(two_znu),
            DriveKind::Corrected => x.powf(two_znu) + self.gamma * x.powi(self.n_corr as i32),
        }
    }

    pub fn omega(&self, t: f64) -> f64 {
        self.omega_squared(t).sqrt()
    }

    /// Analytic `d(ω²)/dt`. At `t = 0` the right derivative is returned.
    pub fn omega_squared_dot(&self, t: f64) -> f64 {
        let sign = if t < 0.0 { -1.0 } else { 1.0 };
        let x = self.delta * t.abs();
        let two_znu = 2.0 * self.znu;
        let d = match self.kind {
            DriveKind::PowerLaw => two_znu * x.powf(two_znu - 1.0),
            DriveKind::Gapped => two_znu * (self.t0 + x).powf(two_znu - 1.0),
            DriveKind::Corrected => {
                let n = self.n_corr as i32;
                two_znu * x.powf(two_znu - 1.0) + self.gamma * f64::from(n) * x.powi(n - 1)
            }
        };
        sign * self.delta * d
    }

    /// Analytic `d²(ω²)/dt²` away from `t = 0`.
    pub fn omega_squared_ddot(&self, t: f64) -> f64 {
        let x = self.delta * t.abs();
        let two_znu = 2.0 * self.znu;
        let d2 = self.delta * self.delta;
        let base = match self.kind {
            DriveKind::Gapped => self.t0 + x,
            _ => x,
        };
        // a term linear in |t| has no curvature; skip it to avoid 0 · ∞ at t = 0
        let mut d = if two_znu == 1.0 {
            0.0
        } else {
            two_znu * (two_znu - 1.0) * base.powf(two_znu - 2.0)
        };
        if self.kind == DriveKind::Corrected && self.n_corr >= 2 {
            let n = self.n_corr as i32;
            d += self.gamma * f64::from(n * (n - 1)) * x.powi(n - 2);
        }
        d2 * d
    }

    /// Analytic `dω/dt` for `ω > 0`.
    pub fn omega_dot(&self, t: f64) -> f64 {
        0.5 * self.omega_squared_dot(t) / self.omega(t)
    }
}

pub fn p_from_znu(znu: f64) -> f64 {
    1.0 / (2.0 + 2.0 * znu)
}

pub fn znu_from_p(p: f64) -> f64 {
    (1.0 - 2.0 * p) / (2.0 * p)
}

/// The unit-rate image of a drive plus the scale factors connecting the two
/// problems: `t = time_scale * s` and `ξ(t) = width_scale * ξ̃(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RescaledDrive {
    pub drive: DriveSpec,
    pub time_scale: f64,
    pub width_scale: f64,
}

impl RescaledDrive {
    /// Physical time for rescaled time `s`.
    pub fn physical_time(&self, s: f64) -> f64 {
        self.time_scale * s
    }

    pub fn rescaled_time(&self, t: f64) -> f64 {
        t / self.time_scale
    }

    /// Frequencies scale inversely to times.
    pub fn frequency_scale(&self) -> f64 {
        1.0 / self.time_scale
    }
}

/// Maps a drive of rate `δ` onto the equivalent `δ = 1` problem.
pub fn rescale_to_unit_rate(drive: &DriveSpec) -> RescaledDrive {
    let znu = drive.znu;
    let d = drive.delta;
    let time_scale = d.powf(-znu / (1.0 + znu));
    let width_scale = d.powf(-znu / (2.0 * (znu + 1.0)));
    let mut unit = *drive;
    unit.delta = 1.0;
    match drive.kind {
        DriveKind::PowerLaw => {}
        DriveKind::Gapped => unit.t0 = d.powf(-1.0 / (1.0 + znu)) * drive.t0,
        DriveKind::Corrected => {
            let n = f64::from(drive.n_corr);
            unit.gamma = d.powf((n - 2.0 * znu) / (1.0 + znu)) * drive.gamma;
        }
    }
    RescaledDrive {
        drive: unit,
        time_scale,
        width_scale,
    }
}

/// Positive root of `ω̇(t) = ω(t)²` for a pure power-law drive:
/// `t* = zν^(1/(1+zν)) δ^(-zν/(1+zν))`.
pub fn freezing_time(drive: &DriveSpec) -> Result<f64> {
    if drive.kind != DriveKind::PowerLaw {
        return Err(Error::UnsupportedProtocol("freezing_time"));
    }
    let znu = drive.znu;
    Ok(znu.powf(1.0 / (1.0 + znu)) * drive.delta.powf(-znu / (1.0 + znu)))
}

/// Adiabaticity parameter `|ω̇| / ω²`; equal to one at the freezing time.
pub fn adiabaticity(drive: &DriveSpec, t: f64) -> f64 {
    let w2 = drive.omega_squared(t);
    drive.omega_dot(t).abs() / w2
}

/// Earliest start time `t < 0` at which a power-law drive has adiabaticity
/// parameter `target`: `zν |s|^(-1-zν) = target` in unit-rate time, mapped back
/// to physical time.
pub fn start_time_for_adiabaticity(drive: &DriveSpec, target: f64) -> f64 {
    let znu = drive.znu;
    let s = (znu / target).powf(1.0 / (1.0 + znu));
    let scale = drive.delta.powf(-znu / (1.0 + znu));
    -s * scale
}
