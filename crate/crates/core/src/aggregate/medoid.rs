use super::{AggregateResult, Rule};
use crate::linalg;
use crate::pointset::{lex_cmp, PointSet};

/// Relative slack under which two distance sums count as tied.
const TIE_REL: f64 = 1e-12;

/// Input point with the smallest total distance to all inputs. Ties go to
/// the lexicographically smallest point, then the lowest index, so the
/// output does not depend on input order.
pub fn medoid(points: &PointSet) -> AggregateResult {
    let n = points.len();
    let sums: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| linalg::dist(points.point(i), points.point(j))).sum())
        .collect();
    let min = sums.iter().copied().fold(f64::INFINITY, f64::min);
    let index = (0..n)
        .filter(|&i| sums[i] <= min + TIE_REL * min.abs())
        .min_by(|&a, &b| lex_cmp(points.point(a), points.point(b)).then(a.cmp(&b)))
        .unwrap_or(0);
    AggregateResult {
        chosen_index: Some(index),
        ..AggregateResult::plain(Rule::Medoid, points.point(index).to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn picks_minimum_distance_sum() {
        // Sums: 11, 10, 19.
        let p = PointSet::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![10.0, 0.0]]).unwrap();
        let r = medoid(&p);
        assert_eq!(r.output, vec![1.0, 0.0]);
        assert_eq!(r.chosen_index, Some(1));
    }

    #[test]
    fn singleton() {
        let p = PointSet::new(vec![vec![0.0, 0.0]]).unwrap();
        assert_eq!(medoid(&p).output, vec![0.0, 0.0]);
    }

    #[test]
    fn symmetric_tie_takes_smallest_point() {
        let p = PointSet::new(vec![vec![1.0], vec![0.0]]).unwrap();
        assert_eq!(medoid(&p).chosen_index, Some(1));
        let p = PointSet::new(vec![vec![3.0, 1.0], vec![1.0, 1.0], vec![2.0, 0.0], vec![2.0, 5.0]]).unwrap();
        assert_eq!(medoid(&p).output, vec![1.0, 1.0]);
    }
}
