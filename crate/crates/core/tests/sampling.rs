//! Statistical checks of the fading samplers against the analytical
//! distributions.

use fdnoma::channel::{ExponentialParams, RicianShadowedParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Two-sided KS critical value at α = 0.001.
fn ks_critical(n: usize) -> f64 {
    1.95 / (n as f64).sqrt()
}

fn draws(p: &RicianShadowedParams, n: usize, seed: u64) -> Vec<f64> {
    let sampler = p.sampler();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.sample(sampler)).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// sup |F_emp − F| evaluated at the sample points of a sorted sample.
fn ks_distance(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

fn empirical_cdf(sorted: &[f64], x: f64) -> f64 {
    sorted.partition_point(|&v| v <= x) as f64 / sorted.len() as f64
}

/// Rician (unshadowed) power density:
/// (1+K)/P̄ · exp(−K − (1+K)x/P̄) · I₀(2√(K(1+K)x/P̄)).
fn rician_pdf(x: f64, mean: f64, k: f64) -> f64 {
    let a = (1.0 + k) / mean;
    let z = 2.0 * (k * a * x).sqrt();
    // I₀ as a power series; every term is positive.
    let q = z * z / 4.0;
    let (mut term, mut sum, mut j) = (1.0f64, 1.0f64, 0.0f64);
    while term > 1e-17 * sum {
        j += 1.0;
        term *= q / (j * j);
        sum += term;
    }
    a * (-k - a * x).exp() * sum
}

/// Composite Simpson on [0, x].
fn rician_cdf(x: f64, mean: f64, k: f64) -> f64 {
    let steps = 2000;
    let h = x / steps as f64;
    let mut s = rician_pdf(0.0, mean, k) + rician_pdf(x, mean, k);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * rician_pdf(i as f64 * h, mean, k);
    }
    s * h / 3.0
}

#[test]
fn moments_within_four_standard_errors() {
    const N: usize = 1_000_000;
    for (i, &(pbar, k, m)) in [(1.0, 10.0, 3.0), (1.0, 10.0, 10.0), (2.5, 1.0, 0.7), (0.4, 30.0, 1.5)]
        .iter()
        .enumerate()
    {
        let p = RicianShadowedParams::new(pbar, k, m).unwrap();
        let xs = draws(&p, N, 100 + i as u64);
        for l in 1..=3 {
            let powers: Vec<f64> = xs.iter().map(|x| x.powi(l)).collect();
            let mean = powers.iter().sum::<f64>() / N as f64;
            let var = powers.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (N - 1) as f64;
            let se = (var / N as f64).sqrt();
            let exact = p.moment(l as u32).unwrap();
            assert!(
                (mean - exact).abs() < 4.0 * se,
                "({pbar},{k},{m}) l={l}: {mean} vs {exact} (se {se})"
            );
        }
    }
}

#[test]
fn zero_k_is_exponential_in_distribution() {
    let p = RicianShadowedParams::new(1.7, 0.0, 5.0).unwrap();
    let xs = draws(&p, 200_000, 7);
    let d = ks_distance(&xs, |x| 1.0 - (-x / 1.7).exp());
    assert!(d < ks_critical(xs.len()), "KS {d}");
}

#[test]
fn large_m_approaches_rician() {
    let (mean, k) = (1.0, 10.0);
    let p = RicianShadowedParams::new(mean, k, 1e4).unwrap();
    let xs = draws(&p, 100_000, 11);
    // Evaluate the oracle on a grid of quantiles.
    let worst = (1..100)
        .map(|q| {
            let x = xs[q * xs.len() / 100];
            (empirical_cdf(&xs, x) - rician_cdf(x, mean, k)).abs()
        })
        .fold(0.0, f64::max);
    assert!(worst < 0.01, "max CDF gap {worst}");
}

#[test]
fn series_cdf_matches_empirical() {
    const N: usize = 1_000_000;
    for (seed, m) in [(21u64, 3.0), (22, 10.0)] {
        let p = RicianShadowedParams::new(1.0, 10.0, m).unwrap();
        let xs = draws(&p, N, seed);
        for gamma in [0.05, 0.1, 0.2] {
            let f = p.cdf_truncated(gamma, 40).unwrap().probability;
            let emp = empirical_cdf(&xs, gamma);
            let se = (f * (1.0 - f) / N as f64).sqrt();
            assert!((emp - f).abs() < 3.0 * se, "m={m} γ={gamma}: {emp} vs {f}");
        }
    }
}

#[test]
fn series_cdf_ks_against_sampler() {
    let p = RicianShadowedParams::new(1.0, 10.0, 3.0).unwrap();
    let xs = draws(&p, 100_000, 31);
    // The series converges for γ well below the mean; test the lower part.
    let lower: Vec<f64> = xs.iter().copied().filter(|&x| x < 0.5).collect();
    let n = xs.len() as f64;
    let worst = lower
        .iter()
        .step_by(50)
        .map(|&x| {
            let f = p.cdf_truncated(x, 40).unwrap().probability;
            (empirical_cdf(&xs, x) - f).abs()
        })
        .fold(0.0, f64::max);
    assert!(worst < 1.95 / n.sqrt(), "max gap {worst}");
}

#[test]
fn exponential_antithetic_pairs_are_negatively_correlated() {
    let e = ExponentialParams::new(2.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 200_000;
    let pairs: Vec<(f64, f64)> = (0..n).map(|_| e.sample_antithetic(&mut rng)).collect();
    let (ma, mb) = (
        pairs.iter().map(|p| p.0).sum::<f64>() / n as f64,
        pairs.iter().map(|p| p.1).sum::<f64>() / n as f64,
    );
    let cov = pairs.iter().map(|p| (p.0 - ma) * (p.1 - mb)).sum::<f64>() / n as f64;
    assert!((ma - 2.0).abs() < 0.03 && (mb - 2.0).abs() < 0.03);
    // Cov(−ln U, −ln(1−U)) = 1 − π²/6 for unit mean.
    let expected = 4.0 * (1.0 - std::f64::consts::PI.powi(2) / 6.0);
    assert!((cov - expected).abs() < 0.05, "{cov} vs {expected}");
}
