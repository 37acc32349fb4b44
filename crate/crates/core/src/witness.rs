//! Recursive witness box for the star discrepancy of a Latin hypercube sample.
//!
//! Starting from the stripe `B_1 = [0, floor(N/4)/N) x [0,1)^(d-1)`, each
//! further axis `j` looks at the slab `S_j` where `x_j >= 1 - c/d`. With
//! `W = |X ∩ B_(j-1)|`, `p = W/N`, `n = Nc/d` and `Y = |X ∩ B_(j-1) ∩ S_j|`,
//! the axis is cut to `[0, 1 - c/d)` exactly when `Y <= np - sqrt(np)/2`,
//! i.e. when the slab removes fewer points than its volume share. Every cut
//! raises the excess of the box, and `exc(X, B_d)/N` is a lower bound on the
//! star discrepancy.

use std::fmt::Write as _;

use serde::Serialize;

use crate::discrepancy::{excess, AnchoredBox};
use crate::error::{Error, Result};
use crate::points::{format_f64, PointSet};
use crate::sampling::{cell_edge, latin_check};

/// The slab width parameter: `c = k*d/N` for the largest integer `k` with
/// `N/(84d) < k <= N/(80d)`, so that `Nc/d = k` points fall into each slab.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlabConstant {
    pub n_points: usize,
    pub dim: usize,
    /// `N c / d`, the number of points in every slab of an LHS.
    pub n_slab: usize,
    pub c: f64,
    /// `1 - c/d`, evaluated as `(N - n_slab)/N` so that it coincides with an
    /// LHS cell edge.
    pub shrink: f64,
}

/// Constants derived from `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoryConstants {
    /// `(1/5)(1 - c/2)^2`, a lower bound on every intermediate box volume.
    pub v: f64,
    /// `sqrt(c v^3)/80`.
    pub k_const: f64,
    /// `sqrt(c v^3)/(32 sqrt 2)`, the constant in the bound on the expected
    /// discrepancy.
    pub expectation_const: f64,
}

/// Smallest `N/d` for which the probabilistic guarantees of the
/// construction apply.
pub const STRICT_POINTS_PER_DIM: usize = 1600;

/// Finds the slab constant for `N` points in dimension `d`.
///
/// With `strict`, requires `d >= 2` and `N >= 1600 d`; an admissible `c` then
/// always exists (for `N/d` in `[1600, 1680]` the integer 20 lies in the
/// interval, beyond that the interval is longer than 1). Without `strict`
/// only `d >= 2` is required and the search may fail.
pub fn compute_slab_constant(n_points: usize, dim: usize, strict: bool) -> Result<SlabConstant> {
    if dim < 2 {
        return Err(Error::PreconditionViolated(format!(
            "the witness construction needs d >= 2, got d = {dim}"
        )));
    }
    if strict && n_points < STRICT_POINTS_PER_DIM * dim {
        return Err(Error::PreconditionViolated(format!(
            "N = {n_points} < 1600 d = {}",
            STRICT_POINTS_PER_DIM * dim
        )));
    }
    let k = n_points / (80 * dim);
    if k == 0 || 84 * dim * k <= n_points {
        return Err(Error::NoAdmissibleC { n_points, dim });
    }
    Ok(SlabConstant {
        n_points,
        dim,
        n_slab: k,
        c: (k * dim) as f64 / n_points as f64,
        shrink: cell_edge(n_points - k, n_points),
    })
}

pub fn theory_constants(sc: &SlabConstant) -> TheoryConstants {
    let c = sc.c;
    let v = 0.2 * (1.0 - c / 2.0).powi(2);
    let root = (c * v.powi(3)).sqrt();
    TheoryConstants {
        v,
        k_const: root / 80.0,
        expectation_const: root / (32.0 * std::f64::consts::SQRT_2),
    }
}

/// One recursion step, for axis `axis` (1-based, `2..=d`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessStep {
    pub axis: usize,
    /// `W = |X ∩ B_(j-1)|`
    pub w: usize,
    /// `p = W/N`
    pub p: f64,
    /// `Y = |X ∩ C_j|`
    pub y: usize,
    /// `|X ∩ S_j|`
    pub slab_count: usize,
    /// `np - sqrt(np)/2`
    pub threshold: f64,
    pub eta: bool,
    pub volume_before: f64,
    pub excess_before: f64,
    pub excess_after: f64,
}

/// Full record of one witness construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessTrace {
    pub slab: SlabConstant,
    pub latin_input: bool,
    /// `floor(N/4)/N`
    pub stripe_upper: f64,
    pub stripe_count: usize,
    /// `exc(X, B_1)`
    pub initial_excess: f64,
    /// `x_2, ..., x_d`, each `1 - c/d` or 1.
    pub x_choices: Vec<f64>,
    pub eta_bits: Vec<bool>,
    pub steps: Vec<WitnessStep>,
    /// `k(X)`, the number of cut axes.
    pub k_count: usize,
    pub final_box: AnchoredBox,
    pub final_excess: f64,
    pub lower_bound: f64,
}

/// Runs the construction on `ps`.
///
/// Any point set is accepted; when `ps` is not Latin the trace records it in
/// `latin_input` and the bound is still valid, only its probabilistic
/// guarantees are lost.
pub fn build_witness(ps: &PointSet, sc: &SlabConstant) -> Result<WitnessTrace> {
    if ps.dim() != sc.dim {
        return Err(Error::DimensionMismatch {
            expected: sc.dim,
            found: ps.dim(),
        });
    }
    if ps.n_points() != sc.n_points {
        return Err(Error::PreconditionViolated(format!(
            "slab constant is for N = {}, point set has N = {}",
            sc.n_points,
            ps.n_points()
        )));
    }
    let n = ps.n_points();
    let nf = n as f64;
    let d = ps.dim();

    let stripe_upper = cell_edge(n / 4, n);
    let mut in_box: Vec<bool> = ps.iter().map(|p| p[0] < stripe_upper).collect();
    let mut inside = in_box.iter().filter(|b| **b).count();
    let stripe_count = inside;
    let mut vol = 1.0 * stripe_upper;
    let initial_excess = inside as f64 - nf * vol;
    let mut exc = initial_excess;

    let slab_n = sc.n_slab as f64;
    let mut x_choices = Vec::with_capacity(d - 1);
    let mut steps = Vec::with_capacity(d - 1);

    for j in 1..d {
        let w = inside;
        let p = w as f64 / nf;
        let (mut y, mut slab_count) = (0usize, 0usize);
        for (pt, &ib) in ps.iter().zip(&in_box) {
            if pt[j] >= sc.shrink {
                slab_count += 1;
                y += ib as usize;
            }
        }
        let np = slab_n * p;
        let threshold = np - np.sqrt() / 2.0;
        let eta = y as f64 <= threshold;
        let volume_before = vol;
        let excess_before = exc;
        let xj = if eta {
            for (pt, ib) in ps.iter().zip(in_box.iter_mut()) {
                if pt[j] >= sc.shrink {
                    *ib = false;
                }
            }
            inside -= y;
            sc.shrink
        } else {
            1.0
        };
        vol *= xj;
        exc = inside as f64 - nf * vol;
        x_choices.push(xj);
        steps.push(WitnessStep {
            axis: j + 1,
            w,
            p,
            y,
            slab_count,
            threshold,
            eta,
            volume_before,
            excess_before,
            excess_after: exc,
        });
    }

    let mut corner = Vec::with_capacity(d);
    corner.push(stripe_upper);
    corner.extend_from_slice(&x_choices);
    let final_box = AnchoredBox::new(corner)?;
    let final_excess = excess(ps, &final_box)?;
    debug_assert_eq!(final_excess, exc);
    let eta_bits: Vec<bool> = steps.iter().map(|s| s.eta).collect();

    Ok(WitnessTrace {
        slab: *sc,
        latin_input: latin_check(ps),
        stripe_upper,
        stripe_count,
        initial_excess,
        k_count: eta_bits.iter().filter(|b| **b).count(),
        x_choices,
        eta_bits,
        steps,
        final_box,
        final_excess,
        lower_bound: final_excess.max(0.0) / nf,
    })
}

/// `max(exc(X, B_d), 0)/N`, a lower bound on `D*_N(X)`.
pub fn witness_lower_bound(trace: &WitnessTrace) -> f64 {
    trace.final_excess.max(0.0) / trace.slab.n_points as f64
}

impl WitnessTrace {
    /// Key-value text report: header records, one block per step, and the
    /// lower bound on the last line.
    pub fn report(&self) -> String {
        let tc = theory_constants(&self.slab);
        let mut s = String::new();
        let sc = &self.slab;
        let _ = writeln!(s, "N = {}", sc.n_points);
        let _ = writeln!(s, "d = {}", sc.dim);
        let _ = writeln!(s, "latin = {}", self.latin_input);
        let _ = writeln!(s, "c = {}", format_f64(sc.c));
        let _ = writeln!(s, "n_slab = {}", sc.n_slab);
        let _ = writeln!(s, "shrink = {}", format_f64(sc.shrink));
        let _ = writeln!(s, "v = {}", format_f64(tc.v));
        let _ = writeln!(s, "K = {}", format_f64(tc.k_const));
        let _ = writeln!(s, "stripe_upper = {}", format_f64(self.stripe_upper));
        let _ = writeln!(s, "stripe_count = {}", self.stripe_count);
        let _ = writeln!(s, "initial_excess = {}", format_f64(self.initial_excess));
        for st in &self.steps {
            let _ = writeln!(s);
            let _ = writeln!(s, "[step {}]", st.axis);
            let _ = writeln!(s, "W = {}", st.w);
            let _ = writeln!(s, "p = {}", format_f64(st.p));
            let _ = writeln!(s, "Y = {}", st.y);
            let _ = writeln!(s, "slab_count = {}", st.slab_count);
            let _ = writeln!(s, "threshold = {}", format_f64(st.threshold));
            let _ = writeln!(s, "eta = {}", st.eta as u8);
            let _ = writeln!(
                s,
                "x = {}",
                format_f64(if st.eta { sc.shrink } else { 1.0 })
            );
            let _ = writeln!(s, "volume_before = {}", format_f64(st.volume_before));
            let _ = writeln!(s, "excess_before = {}", format_f64(st.excess_before));
            let _ = writeln!(s, "excess_after = {}", format_f64(st.excess_after));
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "k = {}", self.k_count);
        let corner: Vec<String> = self
            .final_box
            .upper()
            .iter()
            .map(|v| format_f64(*v))
            .collect();
        let _ = writeln!(s, "final_box = {}", corner.join(" "));
        let _ = writeln!(s, "final_excess = {}", format_f64(self.final_excess));
        let _ = writeln!(s, "lower_bound = {}", format_f64(self.lower_bound));
        s
    }
}
