use super::{Best, DiscrepancyCertificate};
use crate::error::{Error, Result};
use crate::points::PointSet;

/// Exact star discrepancy in the plane in `O(N^2)` time and `O(N)` memory.
///
/// Points are swept by first coordinate while a histogram over the ranks of
/// the distinct second coordinates accumulates the points passed so far.
/// Before the points at the current abscissa are added the histogram holds
/// the open counts (`x < g1`); afterwards it holds the closed counts
/// (`x <= g1`). Prefix sums over the ranks then give both counts for every
/// grid ordinate. Grid, evaluation order and arithmetic match
/// [`star_discrepancy_exact`](super::star_discrepancy_exact), so both return
/// bit-identical values.
pub fn star_discrepancy_exact_2d(ps: &PointSet) -> Result<DiscrepancyCertificate> {
    if ps.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: ps.dim(),
        });
    }
    let n = ps.n_points();
    let nf = n as f64;

    let mut ys = ps.column(1);
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    let ranks = ys.len();

    // (x, rank of y) sorted by x
    let mut pts: Vec<(f64, usize)> = ps
        .iter()
        .map(|p| {
            let r = ys.partition_point(|&y| y < p[1]);
            (p[0], r)
        })
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut hist = vec![0usize; ranks];
    let mut open_prefix = vec![0usize; ranks + 1];
    let mut best = Best::empty();
    let mut next = 0usize;

    let xs = pts
        .iter()
        .map(|p| p.0)
        .fold(Vec::with_capacity(n + 1), |mut acc, x| {
            if acc.last() != Some(&x) {
                acc.push(x);
            }
            acc
        });

    for g1 in xs.into_iter().chain(std::iter::once(1.0)) {
        // open counts: points strictly left of g1
        let mut run = 0usize;
        for r in 0..ranks {
            open_prefix[r] = run;
            run += hist[r];
        }
        open_prefix[ranks] = run;

        while next < n && pts[next].0 <= g1 {
            hist[pts[next].1] += 1;
            next += 1;
        }

        let mut closed_run = 0usize;
        for r in 0..ranks {
            closed_run += hist[r];
            let g2 = ys[r];
            best.offer(closed_run, open_prefix[r], nf, g1 * g2, || vec![g1, g2]);
        }
        // g2 = 1: every point lies below, only the first axis separates sides
        best.offer(next, open_prefix[ranks], nf, g1, || vec![g1, 1.0]);
    }
    Ok(best.into_certificate())
}
