//! Dependent Bernoulli sequences given by their conditional success
//! probabilities, and the check that their partial sums are stochastically
//! larger than iid `Bernoulli(q)` sums whenever every conditional
//! probability is at least `q`.

use serde::Serialize;

use super::dist::{binom_cdf, DiscreteDistribution};
use super::{CheckReport, NUMERIC_SLACK};
use crate::error::{Error, Result};
use crate::rng::Rng64;

/// Largest depth enumerated exhaustively (`2^depth` histories).
pub const MAX_TREE_DEPTH: usize = 20;

/// Law of `eta_1, ..., eta_k` through `P(eta_j = 1 | eta_1..eta_(j-1) = v)`.
///
/// Level `j` (0-based) holds `2^j` probabilities indexed by the history
/// `v_1 + 2 v_2 + ... + 2^(j-1) v_j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionalBernoulliTree {
    floor: f64,
    levels: Vec<Vec<f64>>,
}

impl ConditionalBernoulliTree {
    pub fn new(floor: f64, levels: Vec<Vec<f64>>) -> Result<Self> {
        if !(floor > 0.0 && floor < 1.0) {
            return Err(Error::Domain(format!("floor q = {floor} outside (0, 1)")));
        }
        if levels.len() > MAX_TREE_DEPTH {
            return Err(Error::DepthExceeded {
                depth: levels.len(),
                max: MAX_TREE_DEPTH,
            });
        }
        for (j, level) in levels.iter().enumerate() {
            if level.len() != 1 << j {
                return Err(Error::Domain(format!(
                    "level {} needs {} nodes, has {}",
                    j + 1,
                    1usize << j,
                    level.len()
                )));
            }
            if let Some(bad) = level.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(Error::Domain(format!(
                    "node probability {bad} outside [0, 1]"
                )));
            }
        }
        Ok(Self { floor, levels })
    }

    /// Every node equal to `q`: the iid case.
    pub fn independent(depth: usize, q: f64) -> Result<Self> {
        Self::new(q, (0..depth).map(|j| vec![q; 1 << j]).collect())
    }

    /// Nodes drawn uniformly from `[q, 1]`.
    pub fn random(depth: usize, q: f64, rng: &mut Rng64) -> Result<Self> {
        if depth > MAX_TREE_DEPTH {
            return Err(Error::DepthExceeded {
                depth,
                max: MAX_TREE_DEPTH,
            });
        }
        let levels = (0..depth)
            .map(|j| (0..1usize << j).map(|_| rng.uniform_in(q, 1.0)).collect())
            .collect();
        Self::new(q, levels)
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    pub fn levels_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.levels
    }
}

/// Exact law of `eta_1 + ... + eta_j`, summing path probabilities over all
/// `2^j` histories.
pub fn tree_sum_distribution(
    tree: &ConditionalBernoulliTree,
    j: usize,
) -> Result<DiscreteDistribution> {
    if j > MAX_TREE_DEPTH {
        return Err(Error::DepthExceeded {
            depth: j,
            max: MAX_TREE_DEPTH,
        });
    }
    if j > tree.depth() {
        return Err(Error::Domain(format!(
            "j = {j} exceeds tree depth {}",
            tree.depth()
        )));
    }
    let mut paths = vec![1.0f64];
    for (i, level) in tree.levels.iter().take(j).enumerate() {
        let mut next = vec![0.0; paths.len() * 2];
        for (h, &mass) in paths.iter().enumerate() {
            let q = level[h];
            next[h] = mass * (1.0 - q);
            next[h | (1 << i)] = mass * q;
        }
        paths = next;
    }
    let mut probs = vec![0.0; j + 1];
    for (h, mass) in paths.iter().enumerate() {
        probs[h.count_ones() as usize] += mass;
    }
    DiscreteDistribution::new(0, probs)
}

/// `P(eta_1 + ... + eta_j < t) <= P(B(j, q) < t)` for every `j` and every
/// integer `t` in `1..=j`. Sums are integers, so integer thresholds cover all
/// `t > 0`: for `t > j` both sides are 1.
pub fn check_lemma6(tree: &ConditionalBernoulliTree) -> Result<CheckReport> {
    let q = tree.floor;
    for (j, level) in tree.levels.iter().enumerate() {
        if let Some((h, v)) = level.iter().enumerate().find(|(_, v)| **v < q) {
            return Err(Error::InvariantViolated(format!(
                "node at level {} history {h} has probability {v} < q = {q}",
                j + 1
            )));
        }
    }
    let mut r = CheckReport::new("lemma6")
        .param("depth", tree.depth() as f64)
        .param("q", q);
    let mut max_gap = 0.0f64;
    let mut comparisons = 0usize;
    for j in 1..=tree.depth() {
        let dist = tree_sum_distribution(tree, j)?;
        for t in 1..=j as i64 {
            let dependent = dist.cdf(t - 1);
            let iid = binom_cdf(j as u64, q, t - 1)?;
            r.require(iid - dependent, NUMERIC_SLACK);
            max_gap = max_gap.max((iid - dependent).abs());
            comparisons += 1;
        }
    }
    r.value("comparisons", comparisons as f64);
    r.value("max_abs_gap", max_gap);
    r.note("thresholds t range over 1..=j; partial sums are integer-valued");
    Ok(r)
}
