use thiserror::Error;

use crate::ermakov::WidthState;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error in {func}: {msg}")]
    Domain { func: &'static str, msg: String },

    #[error("invalid drive: {0}")]
    InvalidDrive(String),

    #[error("unsupported protocol for {0}")]
    UnsupportedProtocol(&'static str),

    #[error("degenerate start: gap vanishes at t = {t}")]
    DegenerateStart { t: f64 },

    #[error("integration failed at t = {}: {reason}", last.t)]
    Integration { reason: String, last: WidthState },

    #[error("solver did not converge: {0}")]
    NoConvergence(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("symmetric phase violated at t = {t}: mu_eff = {mu_eff}")]
    SymmetricPhaseViolation { t: f64, mu_eff: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Error {
    Error::Domain {
        func,
        msg: msg.into(),
    }
}
