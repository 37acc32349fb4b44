#![allow(dead_code)]

use lhsdisc::{lhs_sample, uniform_sample, PointSet, Rng64, Seed};

/// Star discrepancy restricted to the boxes with corners on the grid
/// `{0, 1/m, ..., 1}^d`, by brute-force counting through `d`-dimensional
/// prefix sums. Never exceeds the true value and falls short of it by at most
/// `d/m`. Counts are stored as bytes, so `N` must stay below 256.
pub fn dense_grid_oracle(ps: &PointSet, m: usize) -> f64 {
    assert!(ps.n_points() < 256);
    let d = ps.dim();
    let n = ps.n_points() as f64;
    let side = m + 1;
    let cells = side.pow(d as u32);
    let grid: Vec<f64> = (0..=m).map(|i| i as f64 / m as f64).collect();
    let mut open = vec![0u8; cells];
    let mut closed = vec![0u8; cells];
    for p in ps.iter() {
        // first grid index strictly above / at or above each coordinate
        let mut io = Some(0usize);
        let mut ic = Some(0usize);
        let mut stride = 1;
        for &x in p {
            let above = grid.iter().position(|g| *g > x);
            let at = grid.iter().position(|g| *g >= x);
            io = io.zip(above).map(|(a, b)| a + b * stride);
            ic = ic.zip(at).map(|(a, b)| a + b * stride);
            stride *= side;
        }
        if let Some(i) = io {
            open[i] += 1;
        }
        if let Some(i) = ic {
            closed[i] += 1;
        }
    }
    let mut stride = 1;
    for _ in 0..d {
        let block = stride * side;
        for base in (0..cells).step_by(block) {
            for i in 1..side {
                let (done, rest) = open[base..base + block].split_at_mut(i * stride);
                for (a, b) in rest[..stride].iter_mut().zip(&done[(i - 1) * stride..]) {
                    *a += *b;
                }
                let (done, rest) = closed[base..base + block].split_at_mut(i * stride);
                for (a, b) in rest[..stride].iter_mut().zip(&done[(i - 1) * stride..]) {
                    *a += *b;
                }
            }
        }
        stride = block;
    }
    // odometer over all cells; axis 0 varies fastest
    let mut best = 0.0f64;
    let mut idx = vec![0usize; d];
    let mut cell = 0;
    loop {
        for i0 in 0..side {
            // left fold, as for box volumes
            let vol = idx[1..].iter().fold(grid[i0], |acc, &i| acc * grid[i]);
            let v = (closed[cell + i0] as f64 / n - vol).max(vol - open[cell + i0] as f64 / n);
            best = best.max(v);
        }
        cell += side;
        let mut j = 1;
        while j < d {
            idx[j] += 1;
            if idx[j] < side {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j >= d {
            return best;
        }
    }
}

/// A small random point set: LHS, uniform, or uniform snapped to a coarse
/// lattice so that coordinates repeat.
pub fn random_pointset(rng: &mut Rng64, max_n: usize, dims: &[usize]) -> PointSet {
    let n = 1 + rng.below(max_n as u64) as usize;
    let d = dims[rng.below(dims.len() as u64) as usize];
    let seed = Seed(rng.next_u64());
    match rng.below(3) {
        0 => lhs_sample(n, d, seed),
        1 => uniform_sample(n, d, seed),
        _ => {
            let levels = 2 + rng.below(6) as usize;
            let coords = (0..n * d)
                .map(|_| rng.below(levels as u64) as f64 / levels as f64)
                .collect();
            PointSet::new(n, d, coords).unwrap()
        }
    }
}
