//! Outage series for a Rician shadowed desired signal against independent
//! interferers and unit noise:
//!
//! P(X₀ ≤ γ(1 + X₁ + … + X_N)) ≈ Σ_{n=0}^{K_tr} α(n, γ) Σ_{l₁+…+l_{N+1}=n+1}
//! multinomial(n+1; l) Π_j E{X_j^{l_j}},
//!
//! where the last composition slot belongs to the noise term and carries
//! moment 1.

use crate::channel::{PowerMoments, RicianShadowedParams, SeriesOutcome};
use crate::error::{Error, Result};
use crate::specfun::{compositions, ln_multinomial, NeumaierSum};

use super::Threshold;

pub fn series_outage(
    desired: &RicianShadowedParams,
    interferers: &[&dyn PowerMoments],
    gamma: Threshold,
    k_tr: u32,
) -> Result<SeriesOutcome> {
    let gamma = match gamma {
        Threshold::Infinite => return Ok(SeriesOutcome::certain()),
        Threshold::Finite(g) if g >= 0.0 && g.is_finite() => g,
        Threshold::Finite(g) => {
            return Err(Error::domain(
                "series_outage",
                format!("threshold must be >= 0, got {g}"),
            ))
        }
    };

    // ln E{X_j^l} for l = 0..=k_tr+1.
    let ln_moments: Vec<Vec<f64>> = interferers
        .iter()
        .map(|x| (0..=k_tr + 1).map(|l| x.ln_moment(l)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;

    let slots = interferers.len() + 1;
    let mut orders = Vec::with_capacity(k_tr as usize + 1);
    for n in 0..=k_tr {
        let (inner, ln_scale) = desired.cdf_series_coeff_parts(n, gamma);
        let mut weight = NeumaierSum::new();
        for c in compositions(n + 1, slots) {
            let parts = c.parts();
            let ln_moment_product: f64 = ln_moments.iter().zip(parts).map(|(table, &l)| table[l as usize]).sum();
            weight.add((ln_scale + ln_multinomial(n + 1, parts) + ln_moment_product).exp());
        }
        orders.push(inner * weight.value());
    }
    Ok(SeriesOutcome::from_orders(&orders))
}
