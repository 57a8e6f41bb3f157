//! Implications between validity conditions, checked one point at a time.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{check_box, check_c_meb_tol, check_convex, check_near_hull, check_relaxed_convex_tol, Certificate};
use crate::error::{Error, Result};
use crate::geometry::{self, meb};
use crate::linalg;
use crate::pointset::PointSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Relation {
    /// Inside the honest hull implies inside the honest ball.
    HullInBall,
    /// Inside the trusted box implies sqrt(d)-relaxed ball validity.
    BoxSqrtD,
    /// c-relaxed ball validity implies ((c+1) r*, 2)-relaxed convex validity.
    CMebToRelaxedConvex { c: f64 },
    /// Within delta of the hull implies (1 + 2 delta / diam)-relaxed ball validity.
    RelaxedConvexToCMeb { delta: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub relation: Relation,
    pub antecedent: Certificate,
    /// `None` when the relation does not apply (zero-diameter honest set).
    pub consequent: Option<Certificate>,
    /// False only when the antecedent passes and the consequent fails.
    pub holds: bool,
}

/// Evaluates the antecedent at `y` and, if it holds, certifies the consequent
/// with slack `tol`.
pub fn relation_check(relation: Relation, honest: &PointSet, y: &[f64], tol: f64) -> Result<RelationReport> {
    honest.ensure_dim(y)?;
    let (antecedent, consequent) = match relation {
        Relation::HullInBall => (check_convex(y, honest)?, Some(check_c_meb_tol(y, honest, 1.0, tol)?)),
        Relation::BoxSqrtD => {
            let c = (honest.dim() as f64).sqrt();
            (check_box(y, honest)?, Some(check_c_meb_tol(y, honest, c, tol)?))
        }
        Relation::CMebToRelaxedConvex { c } => {
            let ante = check_c_meb_tol(y, honest, c, super::CERT_TOL)?;
            let r = meb(honest)?.radius;
            (ante, Some(check_relaxed_convex_tol(y, honest, (c + 1.0) * r, tol)?))
        }
        Relation::RelaxedConvexToCMeb { delta } => {
            let ante = check_near_hull(y, honest, delta)?;
            let diam = geometry::diameter(honest);
            let cons = if diam > 0.0 {
                Some(check_c_meb_tol(y, honest, 1.0 + 2.0 * delta / diam, tol)?)
            } else {
                None
            };
            (ante, cons)
        }
    };
    let holds = !antecedent.pass || consequent.as_ref().is_none_or(|c| c.pass);
    Ok(RelationReport {
        relation,
        antecedent,
        consequent,
        holds,
    })
}

/// Draws a point that satisfies the antecedent of `relation` for `honest`.
/// Half of the draws sit on the boundary of the antecedent region.
pub fn sample_antecedent<R: Rng + ?Sized>(relation: Relation, honest: &PointSet, rng: &mut R) -> Result<Vec<f64>> {
    let d = honest.dim();
    let boundary = rng.random_bool(0.5);
    match relation {
        Relation::HullInBall => Ok(hull_point(honest, rng)),
        Relation::BoxSqrtD => {
            let tb = geometry::trusted_box(honest);
            Ok((0..d)
                .map(|i| {
                    if boundary {
                        if rng.random_bool(0.5) {
                            tb.lo[i]
                        } else {
                            tb.hi[i]
                        }
                    } else {
                        rng.random_range(tb.lo[i]..=tb.hi[i])
                    }
                })
                .collect())
        }
        Relation::CMebToRelaxedConvex { c } => {
            if c < 1.0 {
                return Err(Error::InvalidParams(format!("relaxation factor {c} < 1")));
            }
            let ball = meb(honest)?;
            let s = if boundary { 1.0 } else { rng.random::<f64>() };
            Ok(linalg::axpy(&ball.center, c * ball.radius * s, &unit_vector(d, rng)))
        }
        Relation::RelaxedConvexToCMeb { delta } => {
            let x = hull_point(honest, rng);
            let s = if boundary { 1.0 } else { rng.random::<f64>() };
            Ok(linalg::axpy(&x, delta * s, &unit_vector(d, rng)))
        }
    }
}

/// Random convex combination with flat Dirichlet weights.
fn hull_point<R: Rng + ?Sized>(honest: &PointSet, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..honest.len()).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = w.iter().sum();
    let mut y = vec![0.0; honest.dim()];
    for (p, wi) in honest.iter().zip(&w) {
        for (a, x) in y.iter_mut().zip(p) {
            *a += wi / total * x;
        }
    }
    y
}

pub(crate) fn unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let n = linalg::norm(&v);
        if n > 1e-12 {
            return linalg::scale(&v, 1.0 / n);
        }
    }
}
