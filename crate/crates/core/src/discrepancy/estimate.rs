use super::exact::critical_grid;
use super::{check_dims, AnchoredBox, Best, DiscrepancyCertificate};
use crate::error::{Error, Result};
use crate::points::PointSet;
use crate::sampling::Seed;

/// Certified lower bound on the star discrepancy for point sets too large for
/// exact enumeration.
///
/// Takes the maximum of both one-sided evaluations over the boxes anchored at
/// every point, `budget` random critical-grid points, and any `extra` boxes
/// (for instance a witness box). Each evaluation is the local discrepancy of
/// some box or a limit of such, so the result never exceeds the exact value.
/// Random corners are drawn one after another from `seed`, so a larger budget
/// evaluates a superset of boxes.
pub fn star_discrepancy_lower_estimate(
    ps: &PointSet,
    budget: usize,
    seed: Seed,
    extra: &[AnchoredBox],
) -> Result<DiscrepancyCertificate> {
    if budget == 0 {
        return Err(Error::PreconditionViolated(
            "estimate budget must be at least 1".into(),
        ));
    }
    for b in extra {
        check_dims(ps, b)?;
    }
    let n = ps.n_points() as f64;
    let mut best = Best::empty();
    let mut eval = |y: &[f64]| {
        let (mut closed, mut open) = (0usize, 0usize);
        for p in ps.iter() {
            let mut le = true;
            let mut lt = true;
            for (x, yj) in p.iter().zip(y) {
                le &= x <= yj;
                lt &= x < yj;
                if !le {
                    break;
                }
            }
            closed += le as usize;
            open += (le && lt) as usize;
        }
        let vol = y.iter().fold(1.0, |acc, v| acc * v);
        best.offer(closed, open, n, vol, || y.to_vec());
    };

    for p in ps.iter() {
        eval(p);
    }
    let grids = critical_grid(ps);
    let mut rng = seed.rng();
    let mut y = vec![0.0; ps.dim()];
    for _ in 0..budget {
        for (yj, g) in y.iter_mut().zip(&grids) {
            *yj = g[rng.below(g.len() as u64) as usize];
        }
        eval(&y);
    }
    for b in extra {
        eval(b.upper());
    }
    Ok(best.into_certificate())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrepancy::{star_discrepancy_exact, DEFAULT_GRID_BUDGET};
    use crate::sampling::{lhs_sample, uniform_sample};

    #[test]
    fn origin_point() {
        let p = PointSet::new(1, 1, vec![0.0]).unwrap();
        for budget in [1, 5, 100] {
            let est = star_discrepancy_lower_estimate(&p, budget, Seed(3), &[]).unwrap();
            assert_eq!(est.value, 1.0);
        }
    }

    #[test]
    fn never_exceeds_exact() {
        for s in 0..60 {
            let p = if s % 2 == 0 {
                uniform_sample(9, 3, Seed(s))
            } else {
                lhs_sample(12, 2, Seed(s))
            };
            let exact = star_discrepancy_exact(&p, DEFAULT_GRID_BUDGET)
                .unwrap()
                .value;
            let est = star_discrepancy_lower_estimate(&p, 50, Seed(s), &[])
                .unwrap()
                .value;
            assert!(est <= exact, "{est} > {exact}");
        }
    }

    #[test]
    fn monotone_in_budget() {
        let p = uniform_sample(30, 4, Seed(8));
        let mut prev = 0.0;
        for budget in [1, 2, 10, 100, 1000] {
            let v = star_discrepancy_lower_estimate(&p, budget, Seed(0), &[])
                .unwrap()
                .value;
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn zero_budget_and_dimension_errors() {
        let p = uniform_sample(3, 2, Seed(0));
        assert!(star_discrepancy_lower_estimate(&p, 0, Seed(0), &[]).is_err());
        let b = AnchoredBox::unit(3);
        assert!(matches!(
            star_discrepancy_lower_estimate(&p, 1, Seed(0), &[b]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
