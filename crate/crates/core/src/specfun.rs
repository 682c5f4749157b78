//! Scalar special functions and the combinatorics behind the outage series.
//!
//! Everything here is a pure function of its arguments. Factorial-sized
//! quantities are carried as logarithms and only exponentiated at the end.

use crate::error::{Error, Result};

/// Relative size of a term below which a non-terminating ₂F₁ series stops.
pub const HYP2F1_RTOL: f64 = 1e-15;

/// Term budget for a non-terminating ₂F₁ series.
pub const HYP2F1_MAX_TERMS: usize = 10_000;

/// Natural log of Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if x <= 0.0 || !x.is_finite() {
        return Err(Error::domain(
            "log_gamma",
            format!("x must be positive and finite, got {x}"),
        ));
    }
    Ok(libm::lgamma(x))
}

/// ln(n!).
pub fn ln_factorial(n: u32) -> f64 {
    libm::lgamma(f64::from(n) + 1.0)
}

/// Rising factorial (a)_i = a·(a+1)···(a+i−1), with (a)_0 = 1.
pub fn pochhammer(a: f64, i: u32) -> f64 {
    (0..i).fold(1.0, |acc, k| acc * (a + f64::from(k)))
}

fn is_non_positive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// Gauss hypergeometric function ₂F₁(a, b; c; z) for real arguments and z < 1.
///
/// A non-positive integer `a` (or `b`) gives a terminating polynomial which is
/// summed exactly. Otherwise negative `z` is moved into [0, 1) with the Pfaff
/// transformation ₂F₁(a,b;c;z) = (1−z)^(−b) ₂F₁(c−a, b; c; z/(z−1)) before the
/// power series is summed.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return Err(Error::domain("gauss_2f1", "arguments must be finite"));
    }
    if is_non_positive_integer(c) {
        return Err(Error::domain("gauss_2f1", format!("c = {c} is a non-positive integer")));
    }
    if is_non_positive_integer(a) {
        return Ok(terminating_2f1(a, b, c, z));
    }
    if is_non_positive_integer(b) {
        return Ok(terminating_2f1(b, a, c, z));
    }
    if z >= 1.0 {
        return Err(Error::domain("gauss_2f1", format!("z = {z} outside (-inf, 1)")));
    }
    if z < 0.0 {
        let w = z / (z - 1.0);
        let prefactor = (1.0 - z).powf(-b);
        return Ok(prefactor * power_series_2f1(c - a, b, c, w)?);
    }
    power_series_2f1(a, b, c, z)
}

/// Σ_{k=0}^{|a|} (a)_k (b)_k / ((c)_k k!) z^k for a ∈ {0, −1, −2, …}.
fn terminating_2f1(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let degree = (-a) as u64;
    let mut term = 1.0;
    let mut sum = NeumaierSum::new();
    sum.add(term);
    for k in 0..degree {
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum.add(term);
    }
    sum.value()
}

fn power_series_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    debug_assert!((0.0..1.0).contains(&z));
    let mut term = 1.0_f64;
    let mut sum = NeumaierSum::new();
    sum.add(term);
    // Two consecutive small terms guard against a lone tiny early term.
    let mut small_run = 0;
    for k in 0..HYP2F1_MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum.add(term);
        if term == 0.0 {
            return Ok(sum.value());
        }
        if !term.is_finite() {
            return Err(Error::Overflow("gauss_2f1"));
        }
        if term.abs() < HYP2F1_RTOL * sum.value().abs() {
            small_run += 1;
            if small_run == 2 {
                return Ok(sum.value());
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence {
        function: "gauss_2f1",
        terms: HYP2F1_MAX_TERMS,
        partial: sum.value(),
    })
}

/// An ordered tuple of non-negative integers with a fixed total.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    parts: Vec<u32>,
    total: u32,
}

impl Composition {
    pub fn new(parts: Vec<u32>) -> Self {
        let total = parts.iter().sum();
        Composition { parts, total }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn total(&self) -> u32 {
        self.total
    }
}

/// total! / (l_1!···l_k!), evaluated through log-factorials.
pub fn multinomial_coeff(c: &Composition) -> f64 {
    ln_multinomial(c.total, &c.parts).exp()
}

pub(crate) fn ln_multinomial(total: u32, parts: &[u32]) -> f64 {
    parts.iter().fold(ln_factorial(total), |acc, &l| acc - ln_factorial(l))
}

/// All ordered `num_parts`-tuples of non-negative integers summing to `total`,
/// in lexicographic order.
pub fn compositions(total: u32, num_parts: usize) -> Compositions {
    assert!(num_parts >= 1, "compositions need at least one part");
    let mut first = vec![0; num_parts];
    first[num_parts - 1] = total;
    Compositions {
        next: Some(first),
        total,
    }
}

#[derive(Debug, Clone)]
pub struct Compositions {
    next: Option<Vec<u32>>,
    total: u32,
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let current = self.next.take()?;
        let k = current.len();
        // Rightmost slot (other than the last) that still has mass to its right.
        let mut successor = None;
        let mut suffix = current[k - 1];
        for j in (0..k - 1).rev() {
            if suffix > 0 {
                let mut s = current.clone();
                s[j] += 1;
                for slot in s.iter_mut().skip(j + 1) {
                    *slot = 0;
                }
                let head: u32 = s[..=j].iter().sum();
                s[k - 1] = self.total - head;
                successor = Some(s);
                break;
            }
            suffix += current[j];
        }
        self.next = successor;
        Some(Composition {
            parts: current,
            total: self.total,
        })
    }
}

/// Compensated (Kahan–Babuška–Neumaier) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    /// Multiplies the running sum by `f` (exact for powers of two).
    pub(crate) fn scale(&mut self, f: f64) {
        self.sum *= f;
        self.compensation *= f;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn binomial(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn log_gamma_known_values() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
        let ten_factorial: f64 = (1..=10).map(f64::from).product();
        assert!(rel(log_gamma(11.0).unwrap(), ten_factorial.ln()) < 1e-14);
        assert!((log_gamma(11.0).unwrap() - 15.104412573).abs() < 1e-9);
    }

    #[test]
    fn log_gamma_rejects_non_positive() {
        assert!(matches!(log_gamma(0.0), Err(Error::Domain { .. })));
        assert!(log_gamma(-2.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn log_gamma_against_factorials_and_half_integers() {
        // ln Γ(n+1) = Σ ln k, ln Γ(n+½) = ln((2n)! √π / (4^n n!))
        let mut ln_fact = 0.0;
        for n in 1..=150u32 {
            ln_fact += f64::from(n).ln();
            if n == 1 {
                continue;
            }
            let got = log_gamma(f64::from(n) + 1.0).unwrap();
            assert!(rel(got, ln_fact) < 1e-13, "n={n}");
        }
        let half_pi = std::f64::consts::PI.sqrt().ln();
        for n in 1..=60u32 {
            let ln_2n_fact: f64 = (1..=2 * n).map(|k| f64::from(k).ln()).sum();
            let ln_n_fact: f64 = (1..=n).map(|k| f64::from(k).ln()).sum();
            let expected = ln_2n_fact + half_pi - f64::from(n) * 4f64.ln() - ln_n_fact;
            let got = log_gamma(f64::from(n) + 0.5).unwrap();
            assert!(rel(got, expected) < 1e-13, "n={n}");
        }
        assert!(rel(log_gamma(0.5).unwrap(), half_pi) < 1e-13);
    }

    #[test]
    fn log_gamma_large_argument_stirling() {
        for &x in &[1e3_f64, 5e4, 1e6] {
            let stirling = (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
                - 1.0 / (360.0 * x.powi(3));
            assert!(rel(log_gamma(x).unwrap(), stirling) < 1e-13, "x={x}");
        }
    }

    #[test]
    fn log_gamma_recurrence() {
        for &x in &[0.5, 1.0, 3.7, 10.0] {
            let lhs = log_gamma(x + 1.0).unwrap().exp();
            let rhs = x * log_gamma(x).unwrap().exp();
            assert!(rel(lhs, rhs) < 1e-12, "x={x}");
        }
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(10.0, 0), 1.0);
        assert_eq!(pochhammer(10.0, 3), 1320.0);
        assert_eq!(pochhammer(3.0, 1), 3.0);
        assert_eq!(pochhammer(-2.0, 3), 0.0);
    }

    #[test]
    fn gauss_2f1_examples() {
        assert_eq!(gauss_2f1(0.0, 2.0, 1.0, -5.0).unwrap(), 1.0);
        assert!(rel(gauss_2f1(-1.0, 2.0, 1.0, -10.0 / 3.0).unwrap(), 23.0 / 3.0) < 1e-15);
        assert!(rel(gauss_2f1(-9.0, 1.0, 1.0, -1.0).unwrap(), 512.0) < 1e-14);
    }

    #[test]
    fn gauss_2f1_reduces_when_b_equals_c() {
        // ₂F₁(a, b; b; z) = (1 − z)^(−a), here through the Pfaff branch.
        for &(a, z) in &[(0.7, -0.3), (-2.5, -4.0), (3.25, -0.9), (0.5, 0.4)] {
            let got = gauss_2f1(a, 1.3, 1.3, z).unwrap();
            assert!(rel(got, (1.0 - z).powf(-a)) < 1e-12, "a={a} z={z}");
        }
    }

    #[test]
    fn gauss_2f1_log_identity() {
        // z ₂F₁(1,1;2;−z) = ln(1+z)
        for &z in &[0.1, 1.0, 7.5, 60.0] {
            let got = z * gauss_2f1(1.0, 1.0, 2.0, -z).unwrap();
            assert!(rel(got, (1.0 + z).ln()) < 1e-12, "z={z}");
        }
    }

    #[test]
    fn gauss_2f1_domain_errors() {
        assert!(gauss_2f1(0.5, 1.0, -2.0, -0.5).is_err());
        assert!(gauss_2f1(0.5, 1.0, 1.0, 1.0).is_err());
        assert!(gauss_2f1(0.5, f64::NAN, 1.0, -1.0).is_err());
    }

    #[test]
    fn gauss_2f1_budget_exhaustion_reports_partial() {
        // w = z/(z−1) is within 1e-12 of 1, so the Pfaff series cannot finish.
        match gauss_2f1(0.5, 0.5, 1.0, -1e12) {
            Err(Error::NonConvergence { terms, partial, .. }) => {
                assert_eq!(terms, HYP2F1_MAX_TERMS);
                assert!(partial > 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn gauss_2f1_terminating_matches_direct_sum() {
        for n in 0..=12u32 {
            for &(b, z) in &[(2.0, -1.0_f64), (5.5, -0.25), (1.0, -3.0)] {
                let a = -f64::from(n);
                let direct: f64 = (0..=n)
                    .map(|k| {
                        pochhammer(a, k) * pochhammer(b, k) / (pochhammer(1.0, k) * pochhammer(1.0, k))
                            * z.powi(k as i32)
                    })
                    .sum();
                let got = gauss_2f1(a, b, 1.0, z).unwrap();
                assert!((got - direct).abs() <= 1e-12 * direct.abs().max(1.0), "n={n} b={b}");
            }
        }
    }

    #[test]
    fn multinomial_examples() {
        assert!(rel(multinomial_coeff(&Composition::new(vec![1, 0, 0])), 1.0) < 1e-14);
        assert!(rel(multinomial_coeff(&Composition::new(vec![2, 1, 1])), 12.0) < 1e-14);
        assert!(rel(multinomial_coeff(&Composition::new(vec![5, 5])), 252.0) < 1e-14);
        let big = multinomial_coeff(&Composition::new(vec![100, 100]));
        assert!(big.is_finite() && big > 1e58);
    }

    #[test]
    fn composition_examples() {
        let c: Vec<_> = compositions(0, 3).map(|c| c.parts().to_vec()).collect();
        assert_eq!(c, vec![vec![0, 0, 0]]);
        let c: Vec<_> = compositions(2, 2).map(|c| c.parts().to_vec()).collect();
        assert_eq!(c, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(compositions(3, 3).count(), 10);
        let single: Vec<_> = compositions(4, 1).map(|c| c.parts().to_vec()).collect();
        assert_eq!(single, vec![vec![4]]);
    }

    #[test]
    fn compositions_exhaustive() {
        for n in 0..=8u32 {
            for k in 1..=5usize {
                let all: Vec<Composition> = compositions(n, k).collect();
                assert_eq!(all.len() as u64, binomial(u64::from(n) + k as u64 - 1, k as u64 - 1));
                assert!(all.windows(2).all(|w| w[0].parts() < w[1].parts()));
                assert!(all.iter().all(|c| c.total() == n && c.parts().iter().sum::<u32>() == n));
                let sum: f64 = all.iter().map(multinomial_coeff).sum();
                assert!(rel(sum, (k as f64).powi(n as i32)) < 1e-12, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn neumaier_recovers_cancelled_mass() {
        let mut s = NeumaierSum::new();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn pochhammer_splits(a in 0.1f64..20.0, i in 0u32..15, j in 0u32..15) {
                let lhs = pochhammer(a, i) * pochhammer(a + f64::from(i), j);
                let rhs = pochhammer(a, i + j);
                prop_assert!(((lhs - rhs) / rhs).abs() < 1e-12);
            }

            #[test]
            fn pfaff_branch_matches_naive_series(a in 0.1f64..6.0, l in 0u32..6, z in -0.5f64..-0.01) {
                // For |z| < 1 the defining series converges without any transformation.
                let (a1, b) = (1.0 - a, 1.0 + f64::from(l));
                let mut term = 1.0;
                let mut naive = 1.0;
                for k in 0..5000 {
                    let k = f64::from(k);
                    term *= (a1 + k) * (b + k) / ((1.0 + k) * (k + 1.0)) * z;
                    naive += term;
                    if term.abs() < 1e-18 {
                        break;
                    }
                }
                let got = gauss_2f1(a1, b, 1.0, z).unwrap();
                prop_assert!(((got - naive) / naive).abs() < 1e-9, "got {} naive {}", got, naive);
            }
        }
    }
}
