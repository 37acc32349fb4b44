//! Local discrepancy, excess and star discrepancy of point sets.
//!
//! Every anchored box `[0, y)` is half-open, so counting uses strict
//! comparisons `x_j < y_j`. The supremum over all boxes is attained either at
//! a critical grid point from below (`vol - open/N`) or as a limit from above
//! a grid point, where the count becomes the closed count `x_j <= y_j`
//! (`closed/N - vol`). The exact algorithms evaluate both sides at every grid
//! point and need no epsilon anywhere.

mod estimate;
mod exact;
mod sweep;

pub use estimate::star_discrepancy_lower_estimate;
pub use exact::{critical_grid, star_discrepancy_exact, DEFAULT_GRID_BUDGET};
pub use sweep::star_discrepancy_exact_2d;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::points::PointSet;

/// Upper corner `y` of the anchored box `[0, y)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnchoredBox {
    upper: Vec<f64>,
}

impl AnchoredBox {
    pub fn new(upper: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = upper.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Domain(format!("box corner {bad} outside [0, 1]")));
        }
        Ok(Self { upper })
    }

    /// The full cube `[0,1)^dim`.
    pub fn unit(dim: usize) -> Self {
        Self {
            upper: vec![1.0; dim],
        }
    }

    pub(crate) fn from_raw(upper: Vec<f64>) -> Self {
        Self { upper }
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn dim(&self) -> usize {
        self.upper.len()
    }
}

/// Exact or certified value of the star discrepancy with the box that
/// attains it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyCertificate {
    pub value: f64,
    pub argmax_box: AnchoredBox,
    /// The value is `closed/N - vol`, the limit of open boxes shrinking onto
    /// `argmax_box` from above. Otherwise it is `vol - open/N` at the box.
    pub closed_sided: bool,
}

/// Lebesgue measure of the box: the product of its corner coordinates,
/// folded left to right.
pub fn box_volume(b: &AnchoredBox) -> f64 {
    b.upper.iter().fold(1.0, |acc, y| acc * y)
}

fn check_dims(ps: &PointSet, b: &AnchoredBox) -> Result<()> {
    if ps.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: ps.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// `|P ∩ [0, y)|` with multiplicity.
pub fn count_open(ps: &PointSet, b: &AnchoredBox) -> Result<usize> {
    check_dims(ps, b)?;
    Ok(ps
        .iter()
        .filter(|p| p.iter().zip(&b.upper).all(|(x, y)| x < y))
        .count())
}

/// `|P ∩ [0, y]|` with multiplicity.
pub fn count_closed(ps: &PointSet, b: &AnchoredBox) -> Result<usize> {
    check_dims(ps, b)?;
    Ok(ps
        .iter()
        .filter(|p| p.iter().zip(&b.upper).all(|(x, y)| x <= y))
        .count())
}

/// `| count_open / N - vol |`.
pub fn local_discrepancy(ps: &PointSet, b: &AnchoredBox) -> Result<f64> {
    let inside = count_open(ps, b)?;
    Ok((inside as f64 / ps.n_points() as f64 - box_volume(b)).abs())
}

/// Signed excess `count_open - N * vol`.
pub fn excess(ps: &PointSet, b: &AnchoredBox) -> Result<f64> {
    let inside = count_open(ps, b)?;
    Ok(inside as f64 - ps.n_points() as f64 * box_volume(b))
}

/// Best candidate seen so far. Ties go to the lexicographically smallest box
/// and, at equal boxes, to the closed side.
#[derive(Debug, Clone)]
pub(crate) struct Best {
    pub value: f64,
    pub upper: Vec<f64>,
    pub closed: bool,
}

impl Best {
    pub fn empty() -> Self {
        Self {
            value: f64::NEG_INFINITY,
            upper: Vec::new(),
            closed: false,
        }
    }

    /// Offers both sides at one box; closed first.
    #[inline]
    pub fn offer(
        &mut self,
        closed_count: usize,
        open_count: usize,
        n: f64,
        vol: f64,
        upper: impl FnOnce() -> Vec<f64>,
    ) {
        let above = closed_count as f64 / n - vol;
        let below = vol - open_count as f64 / n;
        if above > self.value || below > self.value {
            self.upper = upper();
            if above >= below {
                self.value = above;
                self.closed = true;
            } else {
                self.value = below;
                self.closed = false;
            }
        }
    }

    /// Deterministic merge used by parallel reductions.
    pub fn merge(self, other: Best) -> Best {
        use std::cmp::Ordering;
        match self.value.total_cmp(&other.value) {
            Ordering::Greater => self,
            Ordering::Less => other,
            Ordering::Equal => {
                let lex = self
                    .upper
                    .iter()
                    .zip(&other.upper)
                    .map(|(a, b)| a.total_cmp(b))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal);
                match lex {
                    Ordering::Less => self,
                    Ordering::Greater => other,
                    Ordering::Equal if self.closed || !other.closed => self,
                    Ordering::Equal => other,
                }
            }
        }
    }

    pub fn into_certificate(self) -> DiscrepancyCertificate {
        DiscrepancyCertificate {
            value: self.value,
            argmax_box: AnchoredBox::from_raw(self.upper),
            closed_sided: self.closed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1(c: &[f64]) -> PointSet {
        PointSet::new(c.len(), 1, c.to_vec()).unwrap()
    }

    fn bx(y: &[f64]) -> AnchoredBox {
        AnchoredBox::new(y.to_vec()).unwrap()
    }

    #[test]
    fn volumes() {
        assert_eq!(box_volume(&AnchoredBox::unit(4)), 1.0);
        assert_eq!(box_volume(&bx(&[0.3, 0.0, 0.9])), 0.0);
        assert_eq!(box_volume(&bx(&[0.5, 0.5])), 0.25);
        assert!(AnchoredBox::new(vec![1.5]).is_err());
    }

    #[test]
    fn counting_is_strict_open_and_inclusive_closed() {
        let p = p1(&[0.0]);
        assert_eq!(count_open(&p, &bx(&[0.0])).unwrap(), 0);
        assert_eq!(count_open(&p, &bx(&[0.5])).unwrap(), 1);
        assert_eq!(count_closed(&p, &bx(&[0.0])).unwrap(), 1);

        let dup = p1(&[0.25, 0.25]);
        assert_eq!(count_open(&dup, &bx(&[0.25])).unwrap(), 0);
        assert_eq!(count_open(&dup, &bx(&[0.26])).unwrap(), 2);
        assert_eq!(count_closed(&p1(&[0.25]), &bx(&[0.25])).unwrap(), 1);

        assert!(matches!(
            count_open(&dup, &bx(&[0.1, 0.2])),
            Err(Error::DimensionMismatch {
                expected: 1,
                found: 2
            })
        ));
    }

    #[test]
    fn local_discrepancy_and_excess() {
        assert_eq!(
            local_discrepancy(&p1(&[0.25, 0.75]), &bx(&[0.25])).unwrap(),
            0.25
        );
        assert_eq!(local_discrepancy(&p1(&[0.5]), &bx(&[0.5])).unwrap(), 0.5);
        let p = PointSet::new(2, 2, vec![0.9, 0.1, 0.3, 0.99]).unwrap();
        assert_eq!(local_discrepancy(&p, &AnchoredBox::unit(2)).unwrap(), 0.0);
        assert_eq!(excess(&p, &AnchoredBox::unit(2)).unwrap(), 0.0);
        assert_eq!(excess(&p1(&[0.1, 0.2]), &bx(&[0.5])).unwrap(), 1.0);
    }

    #[test]
    fn merge_prefers_larger_then_lex_smaller() {
        let a = Best {
            value: 0.5,
            upper: vec![0.2, 0.9],
            closed: false,
        };
        let b = Best {
            value: 0.5,
            upper: vec![0.2, 0.3],
            closed: false,
        };
        let c = Best {
            value: 0.6,
            upper: vec![0.9, 0.9],
            closed: false,
        };
        assert_eq!(a.clone().merge(b.clone()).upper, vec![0.2, 0.3]);
        assert_eq!(b.clone().merge(a.clone()).upper, vec![0.2, 0.3]);
        assert_eq!(a.merge(c).value, 0.6);
    }
}
