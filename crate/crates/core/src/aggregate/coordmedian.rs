use super::{AggregateResult, Rule};
use crate::pointset::PointSet;

/// Per-coordinate median; even counts take the midpoint of the two central values.
pub fn coordwise_median(points: &PointSet) -> AggregateResult {
    let output = (0..points.dim())
        .map(|k| {
            let mut col: Vec<f64> = points.iter().map(|p| p[k]).collect();
            median_1d(&mut col)
        })
        .collect();
    AggregateResult::plain(Rule::CoordwiseMedian, output)
}

pub(crate) fn median_1d(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}
