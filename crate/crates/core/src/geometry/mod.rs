//! Geometry kernels: enclosing balls, diameters, distances to balls, hulls
//! and boxes, and bend arithmetic for mutually tangent balls.

mod hull;
mod meb;
mod soddy;

pub use hull::{dist_to_hull, dist_to_hull_with, hull_projection, HullOptions};
pub use meb::{meb, meb_of};
pub use soddy::{soddy_bend, soddy_inner_bend, SoddyRoot};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::pointset::PointSet;

/// Relative containment tolerance used by the ball kernels.
pub const MEB_REL_TOL: f64 = 1e-9;

/// A closed Euclidean ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParams(format!("invalid radius {radius}")));
        }
        if center.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index: 0 });
        }
        Ok(Self { center, radius })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Containment with the default relative slack `1e-9 * (1 + r)`.
    pub fn contains(&self, p: &[f64]) -> bool {
        linalg::dist(p, &self.center) <= self.radius + MEB_REL_TOL * (1.0 + self.radius)
    }
}

/// Coordinate-wise bounding box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrustedBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl TrustedBox {
    /// Largest coordinate-wise violation; 0 when `y` is inside.
    pub fn violation(&self, y: &[f64]) -> f64 {
        y.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(&v, (&lo, &hi))| (lo - v).max(v - hi).max(0.0))
            .fold(0.0, f64::max)
    }
}

/// Reciprocal radius of a ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bend(pub f64);

impl Bend {
    pub fn from_radius(r: f64) -> Self {
        Bend(1.0 / r)
    }

    pub fn radius(self) -> f64 {
        1.0 / self.0
    }
}

/// Largest pairwise Euclidean distance.
pub fn diameter(points: &PointSet) -> f64 {
    diameter_of(&points.as_refs())
}

pub(crate) fn diameter_of(points: &[&[f64]]) -> f64 {
    let mut best = 0.0f64;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.max(linalg::dist2(points[i], points[j]));
        }
    }
    best.sqrt()
}

/// Gap between `y` and the ball surface, 0 inside.
pub fn dist_to_ball(y: &[f64], b: &Ball) -> Result<f64> {
    if y.len() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            found: y.len(),
        });
    }
    Ok((linalg::dist(y, &b.center) - b.radius).max(0.0))
}

pub fn trusted_box(points: &PointSet) -> TrustedBox {
    let mut lo = points.point(0).to_vec();
    let mut hi = lo.clone();
    for p in points.iter() {
        for (i, &x) in p.iter().enumerate() {
            lo[i] = lo[i].min(x);
            hi[i] = hi[i].max(x);
        }
    }
    TrustedBox { lo, hi }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ps(v: &[&[f64]]) -> PointSet {
        PointSet::from_slices(v).unwrap()
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(diameter(&ps(&[&[0.0, 0.0]])), 0.0);
        assert_eq!(diameter(&ps(&[&[0.0, 0.0], &[3.0, 4.0]])), 5.0);
        assert_abs_diff_eq!(
            diameter(&ps(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]])),
            2f64.sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn dist_to_ball_examples() {
        let unit = Ball::new(vec![0.0, 0.0], 1.0).unwrap();
        assert_eq!(dist_to_ball(&[0.0, 0.0], &unit).unwrap(), 0.0);
        assert_eq!(dist_to_ball(&[3.0, 0.0], &unit).unwrap(), 2.0);
        let shifted = Ball::new(vec![3.0, 0.0], 1.0).unwrap();
        assert_abs_diff_eq!(
            dist_to_ball(&[1.0, 1.0], &shifted).unwrap(),
            5f64.sqrt() - 1.0,
            epsilon = 1e-12
        );
        assert!(matches!(
            dist_to_ball(&[1.0], &unit),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn trusted_box_examples() {
        let b = trusted_box(&ps(&[&[0.0, 0.0], &[0.0, 1.0]]));
        assert_eq!((b.lo, b.hi), (vec![0.0, 0.0], vec![0.0, 1.0]));
        let b = trusted_box(&ps(&[&[1.0, 2.0]]));
        assert_eq!((b.lo, b.hi), (vec![1.0, 2.0], vec![1.0, 2.0]));
        let b = trusted_box(&ps(&[&[0.0, 3.0], &[2.0, 1.0]]));
        assert_eq!((b.lo, b.hi), (vec![0.0, 1.0], vec![2.0, 3.0]));
    }

    #[test]
    fn ball_rejects_negative_radius() {
        assert!(Ball::new(vec![0.0], -1.0).is_err());
        assert!(Ball::new(vec![0.0], f64::INFINITY).is_err());
    }
}
