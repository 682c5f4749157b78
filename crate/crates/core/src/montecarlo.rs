//! Monte Carlo outage oracle.
//!
//! Every sample draws fresh link powers and evaluates the SINR straight from
//! the signal model. The NOMA power split and the SIC residual enter the
//! SINR expression itself; the effective threshold γ* is never used for the
//! indicator, so agreement with the closed form is an independent check.
//!
//! Sample `i` uses ChaCha stream `i` under a key derived from the seed, so an
//! estimate depends only on `(cfg, scheme, node, seed, num_samples)` and not
//! on batching or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use rayon::prelude::*;

use crate::channel::{ExponentialParams, RicianShadowed};
use crate::error::{Error, Result};
use crate::outage::{noma_effective_threshold, rate_for, sinr_threshold, Node, Scheme, SystemConfig, Threshold};

pub const DEFAULT_NUM_SAMPLES: u64 = 1_000_000;
pub const MIN_NUM_SAMPLES: u64 = 1_000;
pub const EQUIVALENCE_SAMPLES: u64 = 100_000;

/// Samples per parallel work item.
const BATCH: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McSettings {
    pub num_samples: u64,
    pub seed: u64,
    /// Pair every draw with its antithetic partner (LOS phase rotated by π,
    /// exponential drawn from 1 − U). The pair shares the shadowed LOS power,
    /// so under heavy shadowing the indicators are positively correlated and
    /// the variance can grow.
    pub antithetic: bool,
}

impl Default for McSettings {
    fn default() -> Self {
        McSettings {
            num_samples: DEFAULT_NUM_SAMPLES,
            seed: 0,
            antithetic: false,
        }
    }
}

impl McSettings {
    pub fn new(num_samples: u64, seed: u64) -> Result<Self> {
        let s = McSettings {
            num_samples,
            seed,
            antithetic: false,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_samples < MIN_NUM_SAMPLES {
            return Err(Error::invalid(format!(
                "num_samples must be >= {MIN_NUM_SAMPLES}, got {}",
                self.num_samples
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub probability: f64,
    /// √(p̂(1 − p̂)/n). Under antithetic sampling this is the plain binomial
    /// figure, not the (smaller) paired variance.
    pub std_error: f64,
    pub num_samples: u64,
    /// Threshold the closed form would use; reported, never used to decide
    /// outage.
    pub threshold: Threshold,
}

impl McEstimate {
    fn from_count(outages: u64, num_samples: u64, threshold: Threshold) -> Self {
        let n = num_samples as f64;
        let p = outages as f64 / n;
        McEstimate {
            probability: p,
            std_error: (p * (1.0 - p) / n).sqrt(),
            num_samples,
            threshold,
        }
    }

    /// Distance of `p` from the estimate in standard errors. A zero standard
    /// error gives 0 on exact agreement and ∞ otherwise.
    pub fn z_score(&self, p: f64) -> f64 {
        let d = (p - self.probability).abs();
        if self.std_error > 0.0 {
            d / self.std_error
        } else if d == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Interferer {
    Rician(RicianShadowed),
    Exponential(ExponentialParams),
}

impl Interferer {
    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            Interferer::Rician(d) => d.sample(rng),
            Interferer::Exponential(d) => d.sample(rng),
        }
    }

    fn sample_antithetic(&self, rng: &mut ChaCha8Rng) -> (f64, f64) {
        match self {
            Interferer::Rician(d) => d.sample_antithetic(rng),
            Interferer::Exponential(d) => d.sample_antithetic(rng),
        }
    }
}

/// SINR = alloc·X / (leak·X + ΣY + 1), outage when SINR ≤ γ.
#[derive(Debug, Clone)]
struct OutageEvent {
    desired: RicianShadowed,
    alloc: f64,
    /// Power of the other NOMA user's symbol left after detection, relative
    /// to X.
    leak: f64,
    interferers: Vec<Interferer>,
    gamma: f64,
}

impl OutageEvent {
    fn new(cfg: &SystemConfig, scheme: Scheme, node: Node) -> Result<Self> {
        let links = cfg.link_powers()?;
        let gamma = sinr_threshold(rate_for(scheme, cfg.r_oma));
        let full_duplex = scheme == Scheme::FdNoma;
        let (desired, alloc, leak, interferers) = match (scheme, node) {
            (_, Node::Gs) => {
                let mut ys = Vec::new();
                if full_duplex {
                    ys.push(Interferer::Rician(links.si_phase_noise.sampler()));
                    ys.extend(links.si_estimation_error.map(Interferer::Exponential));
                }
                (links.uav1_gs, 1.0, 0.0, ys)
            }
            (Scheme::HdOma, Node::Uav2) => (links.gs_uav2, 1.0, 0.0, vec![]),
            (Scheme::HdOma, Node::Uav3) => (links.gs_uav3, 1.0, 0.0, vec![]),
            (_, Node::Uav2) => {
                let ys = if full_duplex {
                    vec![Interferer::Rician(links.uav1_uav2.sampler())]
                } else {
                    vec![]
                };
                (links.gs_uav2, cfg.a_gs2, cfg.beta * cfg.a_gs3(), ys)
            }
            (_, Node::Uav3) => {
                let ys = if full_duplex {
                    vec![Interferer::Rician(links.uav1_uav3.sampler())]
                } else {
                    vec![]
                };
                (links.gs_uav3, cfg.a_gs3(), cfg.a_gs2, ys)
            }
        };
        Ok(OutageEvent {
            desired: desired.sampler(),
            alloc,
            leak,
            interferers,
            gamma,
        })
    }

    fn sinr(&self, x: f64, y: f64) -> f64 {
        self.alloc * x / (self.leak * x + y + 1.0)
    }

    fn is_outage(&self, x: f64, y: f64) -> bool {
        self.sinr(x, y) <= self.gamma
    }

    /// Desired and summed interference power for one sample.
    fn draw(&self, rng: &mut ChaCha8Rng) -> (f64, f64) {
        let x = self.desired.sample(rng);
        let y = self.interferers.iter().map(|i| i.sample(rng)).sum();
        (x, y)
    }

    fn draw_antithetic(&self, rng: &mut ChaCha8Rng) -> [(f64, f64); 2] {
        let (x, x_anti) = self.desired.sample_antithetic(rng);
        let (mut y, mut y_anti) = (0.0, 0.0);
        for i in &self.interferers {
            let (a, b) = i.sample_antithetic(rng);
            y += a;
            y_anti += b;
        }
        [(x, y), (x_anti, y_anti)]
    }
}

/// Independent generator for sample (or antithetic pair) `index`.
fn stream_rng(key: <ChaCha8Rng as SeedableRng>::Seed, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

fn seed_key(seed: u64) -> <ChaCha8Rng as SeedableRng>::Seed {
    ChaCha8Rng::seed_from_u64(seed).get_seed()
}

/// Calls `f(rng_index)` for each index in `0..count` in parallel and sums the
/// returned counts.
fn parallel_count<F>(count: u64, f: F) -> u64
where
    F: Fn(u64) -> u64 + Sync,
{
    let batches = count.div_ceil(BATCH);
    (0..batches)
        .into_par_iter()
        .map(|b| (b * BATCH..((b + 1) * BATCH).min(count)).map(&f).sum::<u64>())
        .sum()
}

/// Reported threshold for `(scheme, node)`; mirrors the closed form.
fn reported_threshold(cfg: &SystemConfig, scheme: Scheme, node: Node) -> Threshold {
    let gamma = sinr_threshold(rate_for(scheme, cfg.r_oma));
    match (scheme, node) {
        (Scheme::HdOma, _) | (_, Node::Gs) => Threshold::Finite(gamma),
        (_, Node::Uav2) => noma_effective_threshold(gamma, cfg.a_gs2, cfg.beta),
        (_, Node::Uav3) => noma_effective_threshold(gamma, cfg.a_gs3(), 1.0),
    }
}

/// Fraction of `mc.num_samples` fading realisations in outage.
pub fn mc_outage(cfg: &SystemConfig, scheme: Scheme, node: Node, mc: &McSettings) -> Result<McEstimate> {
    mc.validate()?;
    let event = OutageEvent::new(cfg, scheme, node)?;
    let key = seed_key(mc.seed);
    let n = mc.num_samples;

    let outages = if mc.antithetic {
        // Pair j covers samples 2j and 2j + 1; an odd count drops the partner
        // of the last pair.
        parallel_count(n.div_ceil(2), |j| {
            let mut rng = stream_rng(key, j);
            let pair = event.draw_antithetic(&mut rng);
            let used = if 2 * j + 1 < n { 2 } else { 1 };
            pair[..used].iter().filter(|&&(x, y)| event.is_outage(x, y)).count() as u64
        })
    } else {
        parallel_count(n, |i| {
            let mut rng = stream_rng(key, i);
            let (x, y) = event.draw(&mut rng);
            u64::from(event.is_outage(x, y))
        })
    };
    Ok(McEstimate::from_count(
        outages,
        n,
        reported_threshold(cfg, scheme, node),
    ))
}

/// Draws [`EQUIVALENCE_SAMPLES`] full-duplex downlink realisations for `node`
/// and checks that the direct SINR event and X/(Y + 1) ≤ γ* agree on every
/// sample. Fails if γ* is infinite.
pub fn mc_threshold_equivalence_check(cfg: &SystemConfig, node: Node, seed: u64) -> Result<bool> {
    if node == Node::Gs {
        return Err(Error::invalid(
            "threshold equivalence applies to the downlink UAVs only",
        ));
    }
    let event = OutageEvent::new(cfg, Scheme::FdNoma, node)?;
    let gamma_star = match reported_threshold(cfg, Scheme::FdNoma, node) {
        Threshold::Finite(g) => g,
        Threshold::Infinite => return Err(Error::invalid(format!("effective threshold at {node} is infinite"))),
    };
    let key = seed_key(seed);
    let disagreements = parallel_count(EQUIVALENCE_SAMPLES, |i| {
        let mut rng = stream_rng(key, i);
        let (x, y) = event.draw(&mut rng);
        u64::from(event.is_outage(x, y) != (x / (y + 1.0) <= gamma_star))
    });
    Ok(disagreements == 0)
}
