use rayon::prelude::*;

use super::{Best, DiscrepancyCertificate};
use crate::error::{Error, Result};
use crate::points::PointSet;

/// Default cap on the number of grid points the exact enumeration may visit.
pub const DEFAULT_GRID_BUDGET: u64 = 1_000_000_000;

/// Critical grid per axis: the sorted distinct coordinates plus 1.
pub fn critical_grid(ps: &PointSet) -> Vec<Vec<f64>> {
    (0..ps.dim())
        .map(|j| {
            let mut g = ps.column(j);
            g.sort_by(f64::total_cmp);
            g.dedup();
            g.push(1.0);
            g
        })
        .collect()
}

/// Exact star discrepancy by enumerating the critical grid.
///
/// The grid is walked depth-first over the axes. Each level keeps the points
/// that survive the prefix of the box, sorted by the current axis, so moving
/// to the next grid value only advances a pointer and the children of a node
/// are prefixes of its survivor lists. The outermost axis is split across
/// threads and merged deterministically.
pub fn star_discrepancy_exact(ps: &PointSet, budget: u64) -> Result<DiscrepancyCertificate> {
    let grids = critical_grid(ps);
    let required = grids
        .iter()
        .try_fold(1u128, |acc, g| acc.checked_mul(g.len() as u128))
        .unwrap_or(u128::MAX);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }

    let dim = ps.dim();
    let mut by_first: Vec<usize> = (0..ps.n_points()).collect();
    by_first.sort_by(|&a, &b| ps.point(a)[0].total_cmp(&ps.point(b)[0]));

    if dim == 1 {
        let mut walker = Walker::new(ps, &grids);
        walker.closed[0] = by_first.clone();
        walker.open[0] = by_first;
        walker.visit(0, 1.0);
        return Ok(walker.best.into_certificate());
    }

    let first = &grids[0];
    let best = first
        .par_iter()
        .map(|&g| {
            let closed_len = by_first.partition_point(|&i| ps.point(i)[0] <= g);
            let open_len = by_first.partition_point(|&i| ps.point(i)[0] < g);
            let mut walker = Walker::new(ps, &grids);
            walker.prefix[0] = g;
            walker.closed[1].extend_from_slice(&by_first[..closed_len]);
            walker.open[1].extend_from_slice(&by_first[..open_len]);
            walker.visit(1, g);
            walker.best
        })
        .reduce(Best::empty, Best::merge);
    Ok(best.into_certificate())
}

struct Walker<'a> {
    ps: &'a PointSet,
    grids: &'a [Vec<f64>],
    n: f64,
    // survivor lists per depth
    closed: Vec<Vec<usize>>,
    open: Vec<Vec<usize>>,
    prefix: Vec<f64>,
    best: Best,
}

impl<'a> Walker<'a> {
    fn new(ps: &'a PointSet, grids: &'a [Vec<f64>]) -> Self {
        let d = ps.dim();
        Self {
            ps,
            grids,
            n: ps.n_points() as f64,
            closed: vec![Vec::new(); d],
            open: vec![Vec::new(); d],
            prefix: vec![0.0; d],
            best: Best::empty(),
        }
    }

    fn visit(&mut self, depth: usize, vol_prefix: f64) {
        let ps = self.ps;
        let last = depth + 1 == ps.dim();
        let mut closed = std::mem::take(&mut self.closed[depth]);
        let mut open = std::mem::take(&mut self.open[depth]);
        let key = |i: &usize| ps.point(*i)[depth];
        closed.sort_by(|a, b| key(a).total_cmp(&key(b)));
        open.sort_by(|a, b| key(a).total_cmp(&key(b)));

        let (mut c, mut o) = (0usize, 0usize);
        for &g in &self.grids[depth] {
            while c < closed.len() && key(&closed[c]) <= g {
                c += 1;
            }
            while o < open.len() && key(&open[o]) < g {
                o += 1;
            }
            let vol = vol_prefix * g;
            self.prefix[depth] = g;
            if last {
                let prefix = &self.prefix;
                self.best.offer(c, o, self.n, vol, || prefix.clone());
            } else {
                // an empty closed list leaves only `vol - 0`, which grows with
                // every later axis, so the subtree still has to be walked
                self.closed[depth + 1].clear();
                self.closed[depth + 1].extend_from_slice(&closed[..c]);
                self.open[depth + 1].clear();
                self.open[depth + 1].extend_from_slice(&open[..o]);
                self.visit(depth + 1, vol);
            }
        }
        self.closed[depth] = closed;
        self.open[depth] = open;
    }
}
