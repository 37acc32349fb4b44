use rayon::prelude::*;
use serde::Serialize;

use super::dist::{binom_cdf, binomial, hypergeometric, tv_distance};
use super::special::floor_snapped;
use super::CheckReport;
use crate::error::{Error, Result};

/// Absolute slack granted to floating-point comparisons in every check.
pub const NUMERIC_SLACK: f64 = 1e-12;

/// `3/160`, the guaranteed binomial lower-tail mass.
pub const LOWER_TAIL_MASS_BOUND: f64 = 3.0 / 160.0;

/// Total variation between `H(N, W, n)` and `B(n, W/N)` against
/// `(n-1)/(28(N-1)) <= δ <= (n-1)/(N-1)`.
///
/// Requires `W, n <= N`, `0 < W < N` and `n p (1-p) >= 1`; the last condition
/// is tested in integers as `n W (N-W) >= N^2`.
pub fn check_theorem3(total: u64, white: u64, draws: u64) -> Result<CheckReport> {
    if white > total || draws > total {
        return Err(Error::Domain(format!(
            "need W, n <= N, got N={total}, W={white}, n={draws}"
        )));
    }
    if white == 0 || white == total {
        return Err(Error::HypothesisNotMet(format!(
            "p = W/N = {white}/{total} is not in (0, 1)"
        )));
    }
    let (n, w, big) = (draws as u128, white as u128, total as u128);
    if n * w * (big - w) < big * big {
        let p = white as f64 / total as f64;
        return Err(Error::HypothesisNotMet(format!(
            "n p (1-p) = {} < 1",
            draws as f64 * p * (1.0 - p)
        )));
    }
    let p = white as f64 / total as f64;
    let h = hypergeometric(total, white, draws)?;
    let b = binomial(draws, p)?;
    let delta = tv_distance(&h, &b);
    let ratio = (draws - 1) as f64 / (total - 1) as f64;
    let lower = ratio / 28.0;

    let mut r = CheckReport::new("theorem3")
        .param("N", total as f64)
        .param("W", white as f64)
        .param("n", draws as f64);
    r.value("p", p);
    r.value("np(1-p)", draws as f64 * p * (1.0 - p));
    r.value("tv_distance", delta);
    r.bound("lower", lower);
    r.bound("upper", ratio);
    r.require(delta - lower, NUMERIC_SLACK);
    r.require(ratio - delta, NUMERIC_SLACK);
    Ok(r)
}

/// `B(n,p)([0, np - sqrt(np)/2]) >= 3/160` for `n >= 16`, `1/n <= p <= 1/4`.
pub fn check_lemma4(n: u64, p: f64) -> Result<CheckReport> {
    let nf = n as f64;
    if n < 16 {
        return Err(Error::HypothesisNotMet(format!("n = {n} < 16")));
    }
    // n*p >= 1 up to representation error in p = 1/n
    if p.is_nan() || p > 0.25 || floor_snapped(nf * p) < 1.0 {
        return Err(Error::HypothesisNotMet(format!(
            "p = {p} outside [1/n, 1/4]"
        )));
    }
    let np = nf * p;
    let threshold = np - np.sqrt() / 2.0;
    let cut = floor_snapped(threshold);
    let mass = binom_cdf(n, p, cut as i64)?;

    let mut r = CheckReport::new("lemma4").param("n", nf).param("p", p);
    r.value("threshold", threshold);
    r.value("largest_count", cut);
    r.value("lower_tail", mass);
    r.bound("lower", LOWER_TAIL_MASS_BOUND);
    r.require(mass - LOWER_TAIL_MASS_BOUND, NUMERIC_SLACK);
    Ok(r)
}

/// `exp(-2 t^2 k)`.
pub fn hoeffding_bound(k: u64, t: f64) -> f64 {
    (-2.0 * t * t * k as f64).exp()
}

/// Exact `P(S < -tk)` for `S = X - kq`, `X ~ B(k, q)`, against
/// [`hoeffding_bound`].
pub fn check_theorem5_binomial(k: u64, q: f64, t: f64) -> Result<CheckReport> {
    if k == 0 || !(q > 0.0 && q < 1.0) || t.is_nan() || t <= 0.0 {
        return Err(Error::HypothesisNotMet(format!(
            "need k >= 1, q in (0,1), t > 0; got k={k}, q={q}, t={t}"
        )));
    }
    let kf = k as f64;
    // S < -tk  <=>  X < k(q - t)
    let cut = kf * q - t * kf;
    let nearest = cut.round();
    let largest = if (cut - nearest).abs() <= 1e-9 * cut.abs().max(1.0) {
        nearest - 1.0
    } else {
        cut.floor()
    };
    let tail = if largest < 0.0 {
        0.0
    } else {
        binom_cdf(k, q, largest as i64)?
    };
    let bound = hoeffding_bound(k, t);

    let mut r = CheckReport::new("theorem5")
        .param("k", kf)
        .param("q", q)
        .param("t", t);
    r.value("largest_count", largest);
    r.value("lower_tail", tail);
    r.bound("hoeffding", bound);
    r.require(bound - tail, NUMERIC_SLACK * bound.max(f64::MIN_POSITIVE));
    Ok(r)
}

/// Aggregate of a parameter sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub name: String,
    pub checked: usize,
    pub skipped: usize,
    pub worst_margin: f64,
    pub failures: Vec<CheckReport>,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }

    fn collect(name: &str, results: Vec<Result<CheckReport>>) -> Result<Self> {
        let mut s = SweepSummary {
            name: name.to_owned(),
            checked: 0,
            skipped: 0,
            worst_margin: f64::INFINITY,
            failures: Vec::new(),
        };
        for r in results {
            match r {
                Ok(rep) => {
                    s.checked += 1;
                    s.worst_margin = s.worst_margin.min(rep.margin);
                    if !rep.pass {
                        s.failures.push(rep);
                    }
                }
                Err(Error::HypothesisNotMet(_)) => s.skipped += 1,
                Err(e) => return Err(e),
            }
        }
        Ok(s)
    }
}

/// Every `(N, W, n)` with `2 <= N <= max_total`, `0 < W < N`, `1 <= n <= N`
/// satisfying the hypothesis.
pub fn sweep_theorem3(max_total: u64) -> Result<SweepSummary> {
    let results: Vec<Result<CheckReport>> = (2..=max_total)
        .into_par_iter()
        .flat_map_iter(|big| {
            (1..big).flat_map(move |w| {
                (1..=big).filter_map(move |n| {
                    let (n128, w128, b128) = (n as u128, w as u128, big as u128);
                    (n128 * w128 * (b128 - w128) >= b128 * b128).then(|| check_theorem3(big, w, n))
                })
            })
        })
        .collect();
    SweepSummary::collect("theorem3", results)
}

/// Every `n` in `n_range` and `p = i/n` with `1 <= i <= n/4`.
pub fn sweep_lemma4(n_range: std::ops::RangeInclusive<u64>) -> Result<SweepSummary> {
    let results: Vec<Result<CheckReport>> = n_range
        .into_par_iter()
        .flat_map_iter(|n| (1..=n / 4).map(move |i| check_lemma4(n, i as f64 / n as f64)))
        .collect();
    SweepSummary::collect("lemma4", results)
}

/// Every `k <= max_k` against each `q` and `t` in the given grids.
pub fn sweep_theorem5(max_k: u64, qs: &[f64], ts: &[f64]) -> Result<SweepSummary> {
    let mut results = Vec::new();
    for k in 1..=max_k {
        for &q in qs {
            for &t in ts {
                results.push(check_theorem5_binomial(k, q, t));
            }
        }
    }
    SweepSummary::collect("theorem5", results)
}
