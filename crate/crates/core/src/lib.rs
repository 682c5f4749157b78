//! Outage probability of full-duplex NOMA, half-duplex NOMA and half-duplex
//! OMA UAV links over Rician shadowed fading.
//!
//! Closed-form truncated series live in [`channel`] and [`outage`]; an
//! independent Monte Carlo simulator of the signal model lives in
//! [`montecarlo`]; [`scenario`] loads configs, runs transmit-power sweeps and
//! writes CSV / plot data.

pub mod channel;
pub mod error;
pub mod montecarlo;
pub mod outage;
pub mod scenario;
pub mod specfun;

pub use error::{Error, Result};
