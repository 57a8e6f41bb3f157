use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::check_budget;
use crate::error::{Error, Result};
use crate::geometry::{meb_of, Ball};
use crate::linalg::binomial;
use crate::pointset::PointSet;

pub const DEFAULT_MAX_SUBSETS: u128 = 2_000_000;

/// One candidate ball per size-(n-t) subset, in lexicographic subset order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateBalls {
    entries: Vec<(Vec<usize>, Ball)>,
}

impl CandidateBalls {
    /// Wraps balls that were not derived from a point set; entry `i` gets subset `[i]`.
    pub fn from_balls(balls: Vec<Ball>) -> Result<Self> {
        let dim = balls.first().ok_or(Error::EmptyInput)?.dim();
        if let Some(b) = balls.iter().find(|b| b.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: b.dim(),
            });
        }
        Ok(Self {
            entries: balls.into_iter().enumerate().map(|(i, b)| (vec![i], b)).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.entries[0].1.dim()
    }

    pub fn entries(&self) -> &[(Vec<usize>, Ball)] {
        &self.entries
    }

    pub fn balls(&self) -> impl Iterator<Item = &Ball> {
        self.entries.iter().map(|(_, b)| b)
    }

    pub fn get(&self, subset: &[usize]) -> Option<&Ball> {
        self.entries
            .binary_search_by(|(s, _)| s.as_slice().cmp(subset))
            .ok()
            .map(|i| &self.entries[i].1)
    }
}

pub fn candidate_balls(points: &PointSet, t: usize) -> Result<CandidateBalls> {
    candidate_balls_with(points, t, DEFAULT_MAX_SUBSETS)
}

pub fn candidate_balls_with(points: &PointSet, t: usize, cap: u128) -> Result<CandidateBalls> {
    let n = points.len();
    check_budget(n, t)?;
    let count = binomial(n, n - t);
    if count > cap {
        return Err(Error::TooManySubsets { count, cap });
    }
    let refs = points.as_refs();
    let mut buf: Vec<&[f64]> = Vec::with_capacity(n - t);
    let entries = (0..n)
        .combinations(n - t)
        .map(|subset| {
            buf.clear();
            buf.extend(subset.iter().map(|&i| refs[i]));
            let ball = meb_of(&buf);
            (subset, ball)
        })
        .collect();
    Ok(CandidateBalls { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn one_dimensional_intervals() {
        let p = PointSet::new(vec![vec![0.0], vec![1.0], vec![10.0]]).unwrap();
        let cb = candidate_balls(&p, 1).unwrap();
        assert_eq!(cb.len(), 3);
        let expect = [(vec![0, 1], 0.5, 0.5), (vec![0, 2], 5.0, 5.0), (vec![1, 2], 5.5, 4.5)];
        for ((subset, ball), (s, c, r)) in cb.entries().iter().zip(expect) {
            assert_eq!(subset, &s);
            assert_abs_diff_eq!(ball.center[0], c, epsilon = 1e-12);
            assert_abs_diff_eq!(ball.radius, r, epsilon = 1e-12);
        }
        assert!(cb.get(&[0, 2]).is_some());
        assert!(cb.get(&[2, 0]).is_none());
    }

    #[test]
    fn zero_faults_is_whole_set() {
        let p = PointSet::new(vec![vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let cb = candidate_balls(&p, 0).unwrap();
        assert_eq!(cb.len(), 1);
        assert_abs_diff_eq!(cb.entries()[0].1.radius, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn counts_and_errors() {
        let p = PointSet::new((0..5).map(|i| vec![i as f64, (i * i) as f64]).collect()).unwrap();
        assert_eq!(candidate_balls(&p, 2).unwrap().len(), 10);
        assert!(matches!(
            candidate_balls(&p, 5),
            Err(Error::InvalidFaultBudget { .. })
        ));
        assert!(matches!(
            candidate_balls_with(&p, 2, 9),
            Err(Error::TooManySubsets { count: 10, cap: 9 })
        ));
    }
}
