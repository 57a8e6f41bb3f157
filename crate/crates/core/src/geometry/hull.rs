//! Euclidean distance from a point to the convex hull of a finite set,
//! via Wolfe's minimum-norm-point algorithm on the translated points.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::pointset::PointSet;

#[derive(Debug, Clone, Copy)]
pub struct HullOptions {
    /// Absolute distance below which `y` is reported as inside the hull.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for HullOptions {
    fn default() -> Self {
        Self {
            tol: 1e-7,
            max_iter: 10_000,
        }
    }
}

pub fn dist_to_hull(y: &[f64], points: &PointSet) -> Result<f64> {
    dist_to_hull_with(y, points, HullOptions::default())
}

pub fn dist_to_hull_with(y: &[f64], points: &PointSet, opts: HullOptions) -> Result<f64> {
    hull_projection(y, points, opts).map(|(d, _)| d)
}

/// Distance to the hull together with the nearest hull point.
pub fn hull_projection(y: &[f64], points: &PointSet, opts: HullOptions) -> Result<(f64, Vec<f64>)> {
    points.ensure_dim(y)?;
    let shifted: Vec<Vec<f64>> = points.iter().map(|p| linalg::sub(p, y)).collect();
    let x = min_norm_point(&shifted, opts.max_iter)?;
    let d = linalg::norm(&x);
    let nearest = linalg::axpy(y, 1.0, &x);
    Ok((if d <= opts.tol { 0.0 } else { d }, nearest))
}

/// Minimum-norm point of conv(pts). Returns the point itself.
fn min_norm_point(pts: &[Vec<f64>], max_iter: usize) -> Result<Vec<f64>> {
    const Z1: f64 = 1e-12;
    const Z2: f64 = 1e-10;

    let scale = pts.iter().map(|p| linalg::norm2(p)).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(pts[0].clone());
    }
    let first = (0..pts.len())
        .min_by(|&a, &b| linalg::norm2(&pts[a]).total_cmp(&linalg::norm2(&pts[b])))
        .unwrap();
    let mut active = vec![first];
    let mut weights = vec![1.0];
    let mut x = pts[first].clone();

    for _ in 0..max_iter {
        let xx = linalg::norm2(&x);
        let (j, xp) = (0..pts.len())
            .map(|i| (i, linalg::dot(&x, &pts[i])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if xp > xx - Z1 * scale || active.contains(&j) {
            return Ok(x);
        }
        active.push(j);
        weights.push(0.0);

        loop {
            let Some(v) = affine_min_norm(pts, &active) else {
                // Affinely dependent set: drop the newest point and stop here.
                active.pop();
                weights.pop();
                return Ok(combine(pts, &active, &weights));
            };
            if v.iter().all(|&vi| vi > Z2) {
                weights = v;
                break;
            }
            let mut theta = 1.0f64;
            for (w, vi) in weights.iter().zip(&v) {
                if *vi <= Z2 && w - vi > 0.0 {
                    theta = theta.min(w / (w - vi));
                }
            }
            for (w, vi) in weights.iter_mut().zip(&v) {
                *w = theta * vi + (1.0 - theta) * *w;
            }
            let mut k = 0;
            while k < active.len() {
                if weights[k] <= Z2 {
                    active.remove(k);
                    weights.remove(k);
                } else {
                    k += 1;
                }
            }
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
            if active.len() <= 1 {
                break;
            }
        }
        x = combine(pts, &active, &weights);
    }
    Err(Error::NonConvergence {
        solver: "dist_to_hull",
        iterations: max_iter,
    })
}

fn combine(pts: &[Vec<f64>], active: &[usize], weights: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; pts[0].len()];
    for (&i, &w) in active.iter().zip(weights) {
        for (xi, pi) in x.iter_mut().zip(&pts[i]) {
            *xi += w * pi;
        }
    }
    x
}

/// Affine coefficients (summing to 1) of the min-norm point of aff(active).
fn affine_min_norm(pts: &[Vec<f64>], active: &[usize]) -> Option<Vec<f64>> {
    let k = active.len();
    if k == 1 {
        return Some(vec![1.0]);
    }
    let base = &pts[active[0]];
    let dirs: Vec<Vec<f64>> = active[1..].iter().map(|&i| linalg::sub(&pts[i], base)).collect();
    let gram = DMatrix::from_fn(k - 1, k - 1, |r, c| linalg::dot(&dirs[r], &dirs[c]));
    let rhs = DVector::from_fn(k - 1, |r, _| -linalg::dot(&dirs[r], base));
    let beta = gram.clone().cholesky().map(|ch| ch.solve(&rhs))?;
    // Reject nearly singular systems.
    let diag_max = (0..k - 1).map(|i| gram[(i, i)]).fold(0.0, f64::max);
    let resid = &gram * &beta - &rhs;
    if resid.norm() > 1e-6 * (diag_max * beta.norm() + rhs.norm()).max(f64::MIN_POSITIVE) {
        return None;
    }
    let mut out = Vec::with_capacity(k);
    out.push(1.0 - beta.sum());
    out.extend(beta.iter());
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ps(v: &[&[f64]]) -> PointSet {
        PointSet::from_slices(v).unwrap()
    }

    #[test]
    fn on_segment_is_zero() {
        let d = dist_to_hull(&[0.5, 0.0], &ps(&[&[0.0, 0.0], &[1.0, 0.0]])).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn above_segment() {
        let d = dist_to_hull(&[0.0, 1.0], &ps(&[&[0.0, 0.0], &[1.0, 0.0]])).unwrap();
        assert_abs_diff_eq!(d, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn outside_triangle_projects_onto_facet() {
        let tri = ps(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        let d = dist_to_hull(&[2.0, 2.0], &tri).unwrap();
        // Frozen from the closed-form facet projection; dense sampling of
        // convex weights below agrees to the sampling resolution.
        assert_abs_diff_eq!(d, 3.0 / 2f64.sqrt(), epsilon = 1e-10);
        let mut best = f64::INFINITY;
        let steps = 400;
        for i in 0..=steps {
            for j in 0..=(steps - i) {
                let (a, b) = (i as f64 / steps as f64, j as f64 / steps as f64);
                best = best.min(linalg::dist(&[a, b], &[2.0, 2.0]));
            }
        }
        assert!((best - d).abs() < 1e-6);
    }

    #[test]
    fn inside_simplex_3d() {
        let tet = ps(&[&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        assert_eq!(dist_to_hull(&[0.1, 0.2, 0.3], &tet).unwrap(), 0.0);
        let d = dist_to_hull(&[1.0, 1.0, 1.0], &tet).unwrap();
        assert_abs_diff_eq!(d, 2.0 / 3f64.sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn collinear_duplicates() {
        let pts = ps(&[&[0.0, 0.0], &[0.0, 0.0], &[0.0, 1.0], &[0.0, 1.0], &[0.0, 0.5]]);
        let d = dist_to_hull(&[0.5, 0.5], &pts).unwrap();
        assert_abs_diff_eq!(d, 0.5, epsilon = 1e-12);
    }
}
