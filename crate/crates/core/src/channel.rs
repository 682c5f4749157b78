//! Power distributions of the fading links.
//!
//! A Rician shadowed link has a line-of-sight component whose power is
//! Gamma distributed (Nakagami-m amplitude) plus a circularly symmetric
//! Gaussian diffuse component. `mean_power` is the first moment of the
//! squared envelope; K is the ratio of mean LOS power to diffuse power.
//!
//! The residual self-interference estimation error is exponential in power.

use std::f64::consts::TAU;

use rand::distr::Open01;
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};

use crate::error::{Error, Result};
use crate::specfun::{gauss_2f1, ln_factorial, log_gamma, NeumaierSum};

/// Highest moment order served by [`PowerMoments`].
pub const DEFAULT_MAX_MOMENT_ORDER: u32 = 64;

/// Default truncation order of the CDF series.
pub const DEFAULT_TRUNCATION_ORDER: u32 = 40;

/// Largest truncation order accepted anywhere in the crate. Moment-based
/// outage series need moments up to `k_tr + 1`.
pub const MAX_TRUNCATION_ORDER: u32 = DEFAULT_MAX_MOMENT_ORDER - 1;

/// A truncated series is flagged when its last retained order still carries
/// more than this fraction of the partial sum.
pub const SERIES_TAIL_RTOL: f64 = 1e-8;

/// Anything that can report the raw moments E{X^l} of a non-negative power.
pub trait PowerMoments {
    /// ln E{X^l}.
    fn ln_moment(&self, l: u32) -> Result<f64>;

    /// E{X^l}.
    fn moment(&self, l: u32) -> Result<f64> {
        let v = self.ln_moment(l)?.exp();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow("moment"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicianShadowedParams {
    mean_power: f64,
    k_factor: f64,
    m: f64,
}

impl RicianShadowedParams {
    pub fn new(mean_power: f64, k_factor: f64, m: f64) -> Result<Self> {
        if !(mean_power > 0.0 && mean_power.is_finite()) {
            return Err(Error::invalid(format!("mean_power must be > 0, got {mean_power}")));
        }
        if !(k_factor >= 0.0 && k_factor.is_finite()) {
            return Err(Error::invalid(format!("k_factor must be >= 0, got {k_factor}")));
        }
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::invalid(format!("shadowing m must be > 0, got {m}")));
        }
        Ok(RicianShadowedParams {
            mean_power,
            k_factor,
            m,
        })
    }

    pub fn mean_power(&self) -> f64 {
        self.mean_power
    }

    pub fn k_factor(&self) -> f64 {
        self.k_factor
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// Same fading shape, different mean power.
    pub fn with_mean_power(&self, mean_power: f64) -> Result<Self> {
        Self::new(mean_power, self.k_factor, self.m)
    }

    /// E{X^l} = (P̄/(1+K))^l Γ(1+l) (m/(K+m))^(m−1−l) ₂F₁(1−m, 1+l; 1; −K/m).
    pub fn moment(&self, l: u32) -> Result<f64> {
        PowerMoments::moment(self, l)
    }

    /// Coefficient α(n, P̄, K, m, γ) of the CDF power-series expansion, so that
    /// F(γ) = Σ_n α(n, ·, γ). Alternates in sign for n ≥ 1.
    pub fn cdf_series_coeff(&self, n: u32, gamma: f64) -> f64 {
        let (inner, ln_scale) = self.cdf_series_coeff_parts(n, gamma);
        inner * ln_scale.exp()
    }

    /// α split as `inner · exp(ln_scale)` with every factorial-sized factor in
    /// `ln_scale`. Callers multiplying by large moments stay in log space.
    ///
    /// The alternating sum over i is (−1)^n ₂F₁(−n, m; 1; r), r = K/(K+m),
    /// which cancels catastrophically once n is a few tens. It is evaluated
    /// through the Pfaff transform (1−r)^n ₂F₁(−n, 1−m; 1; −K/m), whose terms
    /// C(n,i) (1−m)_i (K/m)^i / i! change sign only while i < m − 1.
    pub(crate) fn cdf_series_coeff_parts(&self, n: u32, gamma: f64) -> (f64, f64) {
        // Power-of-two rescaling is exact.
        let rescale_at = 2f64.powi(600);
        let rescale_by = 2f64.powi(-600);
        let (k, m) = (self.k_factor, self.m);
        let ratio = k / m;
        let nf = f64::from(n);

        let mut term = 1.0;
        let mut ln_offset = 0.0;
        let mut sum = NeumaierSum::new();
        for i in 0..=n {
            sum.add(term);
            if i == n {
                break;
            }
            let fi = f64::from(i);
            term *= (nf - fi) * (1.0 - m + fi) * ratio / ((fi + 1.0) * (fi + 1.0));
            if term == 0.0 {
                break;
            }
            if term.abs() > rescale_at {
                term *= rescale_by;
                sum.scale(rescale_by);
                ln_offset -= rescale_by.ln();
            }
        }
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };

        let ln_rate = ((1.0 + k) / self.mean_power).ln();
        let ln_shape = (m / (k + m)).ln();
        let ln_scale =
            (m + nf) * ln_shape + (nf + 1.0) * (ln_rate + gamma.ln()) - (nf + 1.0).ln() - ln_factorial(n) + ln_offset;
        (sign * sum.value(), ln_scale)
    }

    /// Σ_{n=0}^{k_tr} α(n, ·, γ), clamped to [0, 1].
    pub fn cdf_truncated(&self, gamma: f64, k_tr: u32) -> Result<SeriesOutcome> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::domain(
                "cdf_truncated",
                format!("gamma must be finite and >= 0, got {gamma}"),
            ));
        }
        let orders: Vec<f64> = (0..=k_tr).map(|n| self.cdf_series_coeff(n, gamma)).collect();
        Ok(SeriesOutcome::from_orders(&orders))
    }

    pub fn sampler(&self) -> RicianShadowed {
        RicianShadowed::new(self)
    }

    /// One draw of the received power.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sampler().sample(rng)
    }
}

impl PowerMoments for RicianShadowedParams {
    fn ln_moment(&self, l: u32) -> Result<f64> {
        if l > DEFAULT_MAX_MOMENT_ORDER {
            return Err(Error::domain(
                "rician_shadowed_moment",
                format!("order {l} exceeds {DEFAULT_MAX_MOMENT_ORDER}"),
            ));
        }
        if l == 0 {
            return Ok(0.0);
        }
        let (p, k, m) = (self.mean_power, self.k_factor, self.m);
        let lf = f64::from(l);
        let hyp = gauss_2f1(1.0 - m, 1.0 + lf, 1.0, -k / m)?;
        if !(hyp > 0.0 && hyp.is_finite()) {
            return Err(Error::Overflow("rician_shadowed_moment"));
        }
        Ok(lf * (p / (1.0 + k)).ln() + log_gamma(1.0 + lf)? + (m - 1.0 - lf) * (m / (k + m)).ln() + hyp.ln())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialParams {
    mean_power: f64,
}

impl ExponentialParams {
    pub fn new(mean_power: f64) -> Result<Self> {
        if !(mean_power > 0.0 && mean_power.is_finite()) {
            return Err(Error::invalid(format!("mean_power must be > 0, got {mean_power}")));
        }
        Ok(ExponentialParams { mean_power })
    }

    pub fn mean_power(&self) -> f64 {
        self.mean_power
    }

    /// E{Y^l} = mean^l · l!
    pub fn moment(&self, l: u32) -> Result<f64> {
        PowerMoments::moment(self, l)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let e: f64 = Exp1.sample(rng);
        self.mean_power * e
    }

    /// Inversion draws from U and 1−U, used for antithetic pairs.
    pub fn sample_antithetic<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let u: f64 = rng.sample(Open01);
        (-self.mean_power * u.ln(), -self.mean_power * (1.0 - u).ln())
    }
}

impl PowerMoments for ExponentialParams {
    fn ln_moment(&self, l: u32) -> Result<f64> {
        Ok(f64::from(l) * self.mean_power.ln() + ln_factorial(l))
    }
}

/// Sampler for the Rician shadowed received power,
/// X = |√G·e^(jθ) + c|² with G ~ Gamma(m, Ω/m), Ω = P̄K/(1+K),
/// θ ~ U[0, 2π) and c ~ CN(0, P̄/(1+K)).
#[derive(Debug, Clone, Copy)]
pub struct RicianShadowed {
    los: Option<Gamma<f64>>,
    diffuse_std: f64,
}

impl RicianShadowed {
    fn new(p: &RicianShadowedParams) -> Self {
        let los_power = p.mean_power * p.k_factor / (1.0 + p.k_factor);
        let los = (los_power > 0.0).then(|| Gamma::new(p.m, los_power / p.m).expect("validated shape and scale"));
        RicianShadowed {
            los,
            // Each quadrature carries half of the diffuse power.
            diffuse_std: (p.mean_power / (2.0 * (1.0 + p.k_factor))).sqrt(),
        }
    }

    fn components<R: Rng + ?Sized>(&self, rng: &mut R) -> ((f64, f64), (f64, f64)) {
        let los = match &self.los {
            Some(gamma) => {
                let amplitude = gamma.sample(rng).sqrt();
                let theta = TAU * rng.random::<f64>();
                (amplitude * theta.cos(), amplitude * theta.sin())
            }
            None => (0.0, 0.0),
        };
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        (los, (self.diffuse_std * re, self.diffuse_std * im))
    }

    /// Two equally distributed draws sharing the diffuse component, with the
    /// LOS phase rotated by π in the second.
    pub fn sample_antithetic<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let ((lr, li), (dr, di)) = self.components(rng);
        let first = (lr + dr).powi(2) + (li + di).powi(2);
        let second = (dr - lr).powi(2) + (di - li).powi(2);
        (first, second)
    }
}

impl Distribution<f64> for RicianShadowed {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let ((lr, li), (dr, di)) = self.components(rng);
        (lr + dr).powi(2) + (li + di).powi(2)
    }
}

/// Result of summing a truncated series of per-order contributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOutcome {
    /// Partial sum clamped to [0, 1].
    pub probability: f64,
    /// Partial sum before clamping.
    pub raw_sum: f64,
    /// Number of retained orders (k_tr + 1).
    pub orders: usize,
    pub converged: bool,
}

impl SeriesOutcome {
    pub(crate) fn from_orders(orders: &[f64]) -> Self {
        let mut sum = NeumaierSum::new();
        for &t in orders {
            sum.add(t);
        }
        let raw_sum = sum.value();
        let probability = if raw_sum.is_nan() {
            raw_sum
        } else {
            raw_sum.clamp(0.0, 1.0)
        };
        SeriesOutcome {
            probability,
            raw_sum,
            orders: orders.len(),
            converged: raw_sum.is_finite() && series_converged(orders, raw_sum),
        }
    }

    /// Outcome for an outage that is certain regardless of the fading.
    pub(crate) fn certain() -> Self {
        SeriesOutcome {
            probability: 1.0,
            raw_sum: 1.0,
            orders: 0,
            converged: true,
        }
    }
}

/// Divergence check on the per-order contributions: the magnitudes must not be
/// growing over the last five orders (past order 10), and the last retained
/// order must be negligible against the partial sum.
fn series_converged(orders: &[f64], sum: f64) -> bool {
    let Some(&last) = orders.last() else {
        return true;
    };
    let n = orders.len();
    if n > 15 {
        let tail = &orders[n - 6..];
        let growing = tail.windows(2).all(|w| w[1].abs() > w[0].abs());
        if growing {
            return false;
        }
    }
    last.abs() <= SERIES_TAIL_RTOL * sum.abs()
}
