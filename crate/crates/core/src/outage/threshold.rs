use std::fmt;

use super::Scheme;

/// SINR threshold below which a link is in outage.
///
/// `Infinite` marks a NOMA power split that can never support the target
/// rate; the outage is then certain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Finite(f64),
    Infinite,
}

impl Threshold {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Threshold::Infinite)
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            Threshold::Finite(g) => Some(g),
            Threshold::Infinite => None,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Finite(g) => write!(f, "{g}"),
            Threshold::Infinite => f.write_str("inf"),
        }
    }
}

/// Per-link rate under the equal-resource comparison: full duplex splits the
/// OMA rate three ways, half-duplex NOMA two ways.
pub fn rate_for(scheme: Scheme, r_oma: f64) -> f64 {
    match scheme {
        Scheme::FdNoma => r_oma / 3.0,
        Scheme::HdNoma => r_oma / 2.0,
        Scheme::HdOma => r_oma,
    }
}

/// 2^rate − 1.
pub fn sinr_threshold(rate: f64) -> f64 {
    rate.exp2() - 1.0
}

/// Folds power-domain NOMA interference into the threshold:
/// γ / (alloc − (1 − alloc)·residual·γ), or `Infinite` when the denominator is
/// not positive.
///
/// `residual` is the SIC leftover fraction (β at the SIC user, 1 at the
/// interference-ignorant user).
pub fn noma_effective_threshold(gamma: f64, alloc: f64, residual: f64) -> Threshold {
    let denominator = alloc - (1.0 - alloc) * residual * gamma;
    if denominator > 0.0 {
        Threshold::Finite(gamma / denominator)
    } else {
        Threshold::Infinite
    }
}
