//! Special functions and constants shared by the estimators.
//!
//! Γ is evaluated through `statrs`' Lanczos log-gamma; the constants are the
//! full double-precision values of ψ(1) and ψ'(1).

use crate::error::{Error, Result};

/// ψ(1), the digamma function at one (negated Euler–Mascheroni constant).
pub const PSI_1: f64 = -0.577_215_664_901_532_9;

/// ψ'(1) = π²/6, the trigamma function at one.
pub const TRIGAMMA_1: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;

pub const LN_2: f64 = std::f64::consts::LN_2;

/// Bundle of the constants used by the estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialConstants {
    pub psi1: f64,
    pub trigamma1: f64,
    pub log2: f64,
}

impl SpecialConstants {
    pub const VALUES: SpecialConstants = SpecialConstants {
        psi1: PSI_1,
        trigamma1: TRIGAMMA_1,
        log2: LN_2,
    };
}

impl Default for SpecialConstants {
    fn default() -> Self {
        Self::VALUES
    }
}

/// Natural log of Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// Γ(x) for x > 0, failing instead of saturating to infinity.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "gamma argument",
            value: x,
            reason: "must be positive and finite",
        });
    }
    let g = ln_gamma(x).exp();
    if !g.is_finite() {
        return Err(Error::Overflow("gamma function"));
    }
    Ok(g)
}
