//! Minimum-diameter averaging.

use itertools::Itertools;

use super::{check_budget, AggregateResult, Rule, DEFAULT_MAX_SUBSETS};
use crate::error::{Error, Result};
use crate::linalg::{self, binomial};
use crate::pointset::PointSet;

pub fn mda(points: &PointSet, t: usize) -> Result<AggregateResult> {
    mda_with(points, t, DEFAULT_MAX_SUBSETS)
}

/// Mean of a size-(n-t) subset of minimum diameter. Subsets are enumerated
/// over the canonical point order and ties go to the lexicographically
/// smallest one there, so the output does not depend on input order.
pub fn mda_with(points: &PointSet, t: usize, cap: u128) -> Result<AggregateResult> {
    let n = points.len();
    check_budget(n, t)?;
    let count = binomial(n, n - t);
    if count > cap {
        return Err(Error::TooManySubsets { count, cap });
    }
    let order = points.canonical_order();
    let pt = |i: usize| points.point(order[i]);
    let mut pair = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = linalg::dist2(pt(i), pt(j));
            pair[i * n + j] = d;
            pair[j * n + i] = d;
        }
    }

    let mut best: Option<(f64, Vec<usize>)> = None;
    'subsets: for subset in (0..n).combinations(n - t) {
        let bound = best.as_ref().map_or(f64::INFINITY, |b| b.0);
        let mut diam = 0.0f64;
        for (a, &i) in subset.iter().enumerate() {
            for &j in &subset[a + 1..] {
                diam = diam.max(pair[i * n + j]);
                if diam >= bound {
                    continue 'subsets;
                }
            }
        }
        best = Some((diam, subset));
    }
    let (_, subset) = best.expect("at least one subset");
    let output = linalg::mean(subset.iter().map(|&i| pt(i)));
    let mut subset: Vec<usize> = subset.into_iter().map(|i| order[i]).collect();
    subset.sort_unstable();
    Ok(AggregateResult {
        chosen_subset: Some(subset),
        ..AggregateResult::plain(Rule::Mda, output)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Oracle: enumerate every subset, compute its diameter directly.
    fn brute(points: &PointSet, t: usize) -> Vec<usize> {
        let n = points.len();
        let mut best = (f64::INFINITY, vec![]);
        for s in (0..n).combinations(n - t) {
            let refs: Vec<&[f64]> = s.iter().map(|&i| points.point(i)).collect();
            let d = crate::geometry::diameter(&PointSet::from_slices(&refs).unwrap());
            if d < best.0 {
                best = (d, s);
            }
        }
        best.1
    }

    #[test]
    fn drops_the_outlier() {
        let p = PointSet::new(vec![
            vec![0.0, 0.0],
            vec![0.1, 0.0],
            vec![0.0, 0.1],
            vec![10.0, 10.0],
        ])
        .unwrap();
        let r = mda(&p, 1).unwrap();
        assert_eq!(r.chosen_subset.as_deref(), Some(&[0, 1, 2][..]));
        assert_eq!(brute(&p, 1), vec![0, 1, 2]);
        assert_abs_diff_eq!(r.output[0], 0.1 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.output[1], 0.1 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn no_faults_is_mean() {
        let p = PointSet::new(vec![vec![1.0, 2.0], vec![3.0, 0.0], vec![-1.0, 4.0]]).unwrap();
        let r = mda(&p, 0).unwrap();
        for (a, b) in r.output.iter().zip(p.mean()) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn zero_diameter_pair() {
        let p = PointSet::new(vec![vec![0.0, 0.0], vec![0.0, 0.0], vec![5.0, 5.0]]).unwrap();
        let r = mda(&p, 1).unwrap();
        assert_eq!(r.output, vec![0.0, 0.0]);
    }

    #[test]
    fn lexicographic_tie_break() {
        let p = PointSet::new(vec![vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        assert_eq!(mda(&p, 1).unwrap().chosen_subset, Some(vec![0, 1]));
        let p = PointSet::new(vec![vec![2.0], vec![1.0], vec![0.0]]).unwrap();
        let r = mda(&p, 1).unwrap();
        assert_eq!(r.chosen_subset, Some(vec![1, 2]));
        assert_eq!(r.output, vec![0.5]);
    }

    #[test]
    fn rejects_bad_budget() {
        let p = PointSet::new(vec![vec![0.0], vec![1.0]]).unwrap();
        assert!(matches!(mda(&p, 2), Err(Error::InvalidFaultBudget { .. })));
    }
}
