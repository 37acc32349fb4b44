//! Binomial and hypergeometric mass functions and total variation distance.

use serde::Serialize;

use super::special::ln_binom_raw;
use crate::error::{Error, Result};

/// Probability masses on the integers `offset, offset + 1, ...`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteDistribution {
    offset: i64,
    probs: Vec<f64>,
}

/// Allowed deviation of the total mass from 1.
pub const NORMALIZATION_TOL: f64 = 1e-12;

impl DiscreteDistribution {
    pub fn new(offset: i64, probs: Vec<f64>) -> Result<Self> {
        if probs.iter().any(|p| p.is_nan() || *p < 0.0) {
            return Err(Error::Domain("probabilities must be non-negative".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Domain(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { offset, probs })
    }

    /// Point mass at `k`.
    pub fn point(k: i64) -> Self {
        Self {
            offset: k,
            probs: vec![1.0],
        }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn pmf(&self, k: i64) -> f64 {
        k.checked_sub(self.offset)
            .and_then(|i| usize::try_from(i).ok())
            .and_then(|i| self.probs.get(i).copied())
            .unwrap_or(0.0)
    }

    /// `P(X <= k)`.
    pub fn cdf(&self, k: i64) -> f64 {
        let upto = (k - self.offset + 1).clamp(0, self.probs.len() as i64) as usize;
        self.probs[..upto].iter().sum::<f64>().min(1.0)
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    fn end(&self) -> i64 {
        self.offset + self.probs.len() as i64
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// `P(B(n,p) = k)`; zero outside `0..=n`.
pub fn binom_pmf(n: u64, p: f64, k: i64) -> Result<f64> {
    check_p(p)?;
    if k < 0 || k as u64 > n {
        return Ok(0.0);
    }
    Ok(ln_binom_raw(k as u64, n, p, 1.0 - p).exp())
}

/// `P(B(n,p) <= k)`, summed from the nearer tail and clamped to `[0,1]`.
pub fn binom_cdf(n: u64, p: f64, k: i64) -> Result<f64> {
    check_p(p)?;
    if k < 0 {
        return Ok(0.0);
    }
    if k as u64 >= n {
        return Ok(1.0);
    }
    let k = k as u64;
    let q = 1.0 - p;
    let v = if (k as f64) < n as f64 * p {
        (0..=k).map(|i| ln_binom_raw(i, n, p, q).exp()).sum::<f64>()
    } else {
        1.0 - (k + 1..=n)
            .map(|i| ln_binom_raw(i, n, p, q).exp())
            .sum::<f64>()
    };
    Ok(v.clamp(0.0, 1.0))
}

/// The law of `B(n, p)` on `0..=n`.
pub fn binomial(n: u64, p: f64) -> Result<DiscreteDistribution> {
    check_p(p)?;
    let q = 1.0 - p;
    let probs = (0..=n).map(|k| ln_binom_raw(k, n, p, q).exp()).collect();
    DiscreteDistribution::new(0, probs)
}

fn check_hyper(total: u64, white: u64, draws: u64) -> Result<()> {
    if white > total || draws > total {
        return Err(Error::Domain(format!(
            "hypergeometric needs W, n <= N, got N={total}, W={white}, n={draws}"
        )));
    }
    Ok(())
}

fn hyper_support(total: u64, white: u64, draws: u64) -> (u64, u64) {
    let lo = draws.saturating_sub(total - white);
    let hi = draws.min(white);
    (lo, hi)
}

// Caller guarantees k is in the support.
fn ln_hyper(total: u64, white: u64, draws: u64, k: u64) -> f64 {
    // binomial densities at p = n/N make the three factors well conditioned
    let p = draws as f64 / total as f64;
    let q = (total - draws) as f64 / total as f64;
    ln_binom_raw(k, white, p, q) + ln_binom_raw(draws - k, total - white, p, q)
        - ln_binom_raw(draws, total, p, q)
}

/// `P(H(N, W, n) = k)`: `k` white balls among `n` drawn without replacement
/// from `N` balls of which `W` are white.
pub fn hypergeom_pmf(total: u64, white: u64, draws: u64, k: i64) -> Result<f64> {
    check_hyper(total, white, draws)?;
    let (lo, hi) = hyper_support(total, white, draws);
    if k < lo as i64 || k > hi as i64 {
        return Ok(0.0);
    }
    if total == 0 {
        return Ok(1.0);
    }
    Ok(ln_hyper(total, white, draws, k as u64).exp())
}

/// `P(H(N, W, n) <= k)`, summed from the nearer tail.
pub fn hypergeom_cdf(total: u64, white: u64, draws: u64, k: i64) -> Result<f64> {
    check_hyper(total, white, draws)?;
    let (lo, hi) = hyper_support(total, white, draws);
    if k < lo as i64 {
        return Ok(0.0);
    }
    if k >= hi as i64 {
        return Ok(1.0);
    }
    let k = k as u64;
    let mean = draws as f64 * white as f64 / total as f64;
    let v = if (k as f64) < mean {
        (lo..=k)
            .map(|i| ln_hyper(total, white, draws, i).exp())
            .sum::<f64>()
    } else {
        1.0 - (k + 1..=hi)
            .map(|i| ln_hyper(total, white, draws, i).exp())
            .sum::<f64>()
    };
    Ok(v.clamp(0.0, 1.0))
}

/// The law of `H(N, W, n)` on `0..=n` (zero outside its support).
pub fn hypergeometric(total: u64, white: u64, draws: u64) -> Result<DiscreteDistribution> {
    check_hyper(total, white, draws)?;
    if total == 0 {
        return Ok(DiscreteDistribution::point(0));
    }
    let (lo, hi) = hyper_support(total, white, draws);
    let probs = (0..=draws)
        .map(|k| {
            if k < lo || k > hi {
                0.0
            } else {
                ln_hyper(total, white, draws, k).exp()
            }
        })
        .collect();
    DiscreteDistribution::new(0, probs)
}

/// Total variation distance, as half the L1 distance over the union of the
/// supports. Equals the maximum over events of `|a(A) - b(A)|`.
pub fn tv_distance(a: &DiscreteDistribution, b: &DiscreteDistribution) -> f64 {
    let lo = a.offset.min(b.offset);
    let hi = a.end().max(b.end());
    0.5 * (lo..hi).map(|k| (a.pmf(k) - b.pmf(k)).abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_basics() {
        assert_eq!(binom_pmf(1, 0.5, 0).unwrap(), 0.5);
        assert_eq!(binom_cdf(7, 0.3, 7).unwrap(), 1.0);
        assert_eq!(binom_cdf(7, 0.3, -1).unwrap(), 0.0);
        assert_eq!(binom_pmf(5, 0.0, 0).unwrap(), 1.0);
        assert_eq!(binom_pmf(5, 1.0, 5).unwrap(), 1.0);
        assert_eq!(binom_pmf(5, 1.0, 4).unwrap(), 0.0);
        assert_eq!(binom_pmf(5, 0.5, 6).unwrap(), 0.0);
        assert!(binom_pmf(5, 1.5, 1).is_err());
        let closed_form = (15.0f64 / 16.0).powi(16);
        assert!((binom_cdf(16, 1.0 / 16.0, 0).unwrap() - closed_form).abs() < 1e-15);
    }

    #[test]
    fn hypergeometric_basics() {
        for n in 0..=7 {
            assert!((hypergeom_pmf(7, 7, n, n as i64).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!((hypergeom_pmf(10, 5, 1, 1).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(hypergeom_pmf(10, 3, 5, 4).unwrap(), 0.0);
        assert!(hypergeom_pmf(10, 11, 5, 0).is_err());
        assert_eq!(hypergeom_cdf(10, 3, 5, 3).unwrap(), 1.0);
    }

    #[test]
    fn distributions_normalize_at_scale() {
        for (n, w, draws) in [
            (3200u64, 800, 20),
            (6400, 1600, 40),
            (60, 30, 60),
            (100, 1, 50),
        ] {
            let h = hypergeometric(n, w, draws).unwrap();
            assert!((h.total() - 1.0).abs() < 1e-12);
        }
        let b = binomial(3200, 0.25).unwrap();
        assert!((b.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tv_identities() {
        let b = binomial(5, 0.5).unwrap();
        assert_eq!(tv_distance(&b, &b), 0.0);
        assert_eq!(
            tv_distance(
                &DiscreteDistribution::point(0),
                &DiscreteDistribution::point(1)
            ),
            1.0
        );
        // a single draw has the same law with and without replacement; the
        // log-space kernels reproduce it to a few ulps
        for n in 2..=100u64 {
            for w in 1..n {
                let h = hypergeometric(n, w, 1).unwrap();
                let b = binomial(1, w as f64 / n as f64).unwrap();
                assert!(tv_distance(&h, &b) <= 1e-15, "N={n} W={w}");
            }
        }
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(DiscreteDistribution::new(0, vec![0.5, 0.4]).is_err());
        assert!(DiscreteDistribution::new(0, vec![1.5, -0.5]).is_err());
        let d = DiscreteDistribution::new(-1, vec![0.25, 0.75]).unwrap();
        assert_eq!(d.pmf(-1), 0.25);
        assert_eq!(d.cdf(-1), 0.25);
        assert_eq!(d.cdf(5), 1.0);
        assert_eq!(d.pmf(-2), 0.0);
    }
}
