//! Dynamics of a harmonic mode driven through a gapless critical point.
//!
//! The state of a driven oscillator that starts in its ground state stays
//! Gaussian and is fully described by the width `ξ(t)`, which obeys the
//! Ermakov-Milne equation. This crate integrates that equation for a family
//! of drive protocols, evaluates its closed-form solution for power-law
//! drives, derives the physical observables and runs the scans that exhibit
//! Kibble-Zurek scaling on a half cycle and rate-independent excitation on a
//! full cycle. The [`spherical`] module extends the single mode to the
//! self-consistent large-N O(N) chain.

// Guards are written as `!(x > 0.0)` on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod ermakov;
pub mod error;
pub mod kzm;
pub mod observables;
pub mod ode;
pub mod protocols;
pub mod specfun;
pub mod spherical;

pub use ermakov::{Trajectory, WidthState};
pub use error::{Error, Result};
pub use protocols::{DriveKind, DriveSpec};
