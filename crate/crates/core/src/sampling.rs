//! Seeded Latin hypercube and uniform Monte Carlo samples.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::points::PointSet;
use crate::rng::{self, Rng64};

/// Seed of a reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    /// Child seed for substream `label` (a column, a trial, a tree).
    pub fn derive(self, label: u64) -> Seed {
        Seed(rng::derive(self.0, label))
    }

    pub fn rng(self) -> Rng64 {
        Rng64::new(self.0)
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Seed {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim().parse().map(Seed)
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

/// Uniformly random permutation of `1..=n` (Fisher-Yates with unbiased
/// bounded integers).
pub fn random_permutation(n: usize, rng: &mut Rng64) -> Vec<usize> {
    let mut perm: Vec<usize> = (1..=n).collect();
    for i in (1..n).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        perm.swap(i, j);
    }
    perm
}

/// Lower edge of cell `k` out of `n`, i.e. the binary64 value of `k/n`.
#[inline]
pub(crate) fn cell_edge(k: usize, n: usize) -> f64 {
    k as f64 / n as f64
}

/// Places `(rank - jitter)/n` into cell `rank - 1`.
///
/// In exact arithmetic the value already lies in `[(rank-1)/n, rank/n)`. After
/// rounding it can land on the upper edge (and for `rank = n` on 1.0), so the
/// value is nudged by ulps until it sits strictly inside the cell both by edge
/// comparison and by `floor(n * x)`.
fn lhs_coordinate(rank: usize, jitter: f64, n: usize) -> f64 {
    let k = rank - 1;
    let lo = cell_edge(k, n);
    let hi = cell_edge(rank, n);
    let nf = n as f64;
    let mut x = (rank as f64 - jitter) / nf;
    for _ in 0..64 {
        let cell = (nf * x).floor();
        if x >= hi || cell > k as f64 {
            x = x.next_down();
        } else if x < lo || cell < k as f64 {
            x = x.next_up();
        } else {
            return x;
        }
    }
    // unreachable for any realistic n; the cell midpoint satisfies both tests
    (k as f64 + 0.5) / nf
}

/// Latin hypercube sample: `X[i][j] = (pi_j(i) - u_ij) / N` with an independent
/// uniform permutation `pi_j` and jitters `u_ij ~ U[0,1)` per column.
///
/// Column `j` draws its permutation and then its `N` jitters from the
/// substream `seed.derive(j)`.
pub fn lhs_sample(n_points: usize, dim: usize, seed: Seed) -> PointSet {
    assert!(n_points >= 1 && dim >= 1, "N and d must be positive");
    let mut coords = vec![0.0; n_points * dim];
    for j in 0..dim {
        let mut rng = seed.derive(j as u64).rng();
        let perm = random_permutation(n_points, &mut rng);
        for (i, &rank) in perm.iter().enumerate() {
            let u = rng.next_f64();
            coords[i * dim + j] = lhs_coordinate(rank, u, n_points);
        }
    }
    PointSet::from_raw(n_points, dim, coords)
}

/// `N * d` independent `U[0,1)` coordinates, drawn row-major from `seed`.
pub fn uniform_sample(n_points: usize, dim: usize, seed: Seed) -> PointSet {
    assert!(n_points >= 1 && dim >= 1, "N and d must be positive");
    let mut rng = seed.rng();
    let coords = (0..n_points * dim).map(|_| rng.next_f64()).collect();
    PointSet::from_raw(n_points, dim, coords)
}

/// True iff every column puts exactly one point into each cell
/// `[k/N, (k+1)/N)`, with cells indexed by `floor(N * x)`.
pub fn latin_check(ps: &PointSet) -> bool {
    let n = ps.n_points();
    let nf = n as f64;
    let mut seen = vec![false; n];
    (0..ps.dim()).all(|j| {
        seen.iter_mut().for_each(|s| *s = false);
        ps.iter().all(|p| {
            let cell = (nf * p[j]).floor();
            if !(0.0..nf).contains(&cell) {
                return false;
            }
            let c = cell as usize;
            !std::mem::replace(&mut seen[c], true)
        })
    })
}
