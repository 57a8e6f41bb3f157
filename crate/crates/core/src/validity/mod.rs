//! Certification of aggregation outputs against the enclosing-ball
//! validity hierarchy and its neighbours (convex, box, relaxed convex).

mod relations;

pub use relations::{relation_check, sample_antecedent, Relation, RelationReport};
pub(crate) use relations::unit_vector;

use serde::{Deserialize, Serialize};

use crate::aggregate::{solve_minmax_with, CandidateBalls, MinMaxOptions, Rule};
use crate::error::{Error, Result};
use crate::geometry::{self, hull_projection, meb, Ball, HullOptions};
use crate::linalg::{self, binomial};
use crate::pointset::PointSet;

/// Slack added to every bound before a certificate fails.
pub const CERT_TOL: f64 = 1e-9;
/// Absolute distance at which an output coincides with a zero-radius center.
pub const ZERO_RADIUS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Condition {
    Meb,
    CMeb { c: f64 },
    SafeMeb,
    Convex,
    Box,
    RelaxedConvex { delta: f64, p: u32 },
    /// Distance to the honest hull at most `delta`.
    NearHull { delta: f64 },
    BiasBound { c: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Witness {
    Point(Vec<f64>),
    Subset(Vec<usize>),
}

/// Verdict for one validity condition. `pass` iff `achieved <= bound + tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub condition: Condition,
    pub achieved: f64,
    pub bound: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Certificate {
    fn judge(condition: Condition, achieved: f64, bound: f64, tol: f64, witness: impl FnOnce() -> Witness) -> Self {
        let pass = achieved <= bound + tol;
        Self {
            condition,
            achieved,
            bound,
            pass,
            witness: (!pass).then(witness),
        }
    }
}

/// Relative distance from `y` to `ball`: `max(0, |y-c| - r) / r`.
pub fn phi(y: &[f64], ball: &Ball) -> Result<f64> {
    if ball.radius == 0.0 {
        return Err(Error::ZeroRadius);
    }
    Ok(geometry::dist_to_ball(y, ball)? / ball.radius)
}

/// `|y - C*| / r*` for the honest ball; a zero-radius ball gives 0 or infinity.
pub fn relaxation_factor(y: &[f64], honest_ball: &Ball) -> f64 {
    let d = linalg::dist(y, &honest_ball.center);
    if honest_ball.radius == 0.0 {
        if d <= ZERO_RADIUS_TOL {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        d / honest_ball.radius
    }
}

pub fn check_c_meb(y: &[f64], honest: &PointSet, c: f64) -> Result<Certificate> {
    check_c_meb_tol(y, honest, c, CERT_TOL)
}

pub fn check_c_meb_tol(y: &[f64], honest: &PointSet, c: f64, tol: f64) -> Result<Certificate> {
    if c.is_nan() || c < 1.0 {
        return Err(Error::InvalidParams(format!("relaxation factor {c} < 1")));
    }
    honest.ensure_dim(y)?;
    let ball = meb(honest)?;
    let achieved = relaxation_factor(y, &ball);
    let condition = if c == 1.0 { Condition::Meb } else { Condition::CMeb { c } };
    Ok(Certificate::judge(condition, achieved, c, tol, || Witness::Point(ball.center)))
}

/// Worst relative distance of `y` over all candidate balls; 0 iff `y` lies in
/// their intersection. Zero-radius balls contribute 0 or infinity.
pub fn safe_meb_value(y: &[f64], balls: &CandidateBalls) -> Result<f64> {
    Ok(worst_candidate(y, balls)?.0)
}

fn worst_candidate(y: &[f64], balls: &CandidateBalls) -> Result<(f64, usize)> {
    if balls.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut worst = (0.0, 0);
    for (i, (_, b)) in balls.entries().iter().enumerate() {
        let v = if b.radius == 0.0 {
            if y.len() != b.dim() {
                return Err(Error::DimensionMismatch {
                    expected: b.dim(),
                    found: y.len(),
                });
            }
            if linalg::dist(y, &b.center) <= ZERO_RADIUS_TOL {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            phi(y, b)?
        };
        if v > worst.0 {
            worst = (v, i);
        }
    }
    Ok(worst)
}

pub fn check_safe_meb(y: &[f64], balls: &CandidateBalls) -> Result<Certificate> {
    let (value, i) = worst_candidate(y, balls)?;
    Ok(Certificate::judge(Condition::SafeMeb, value, 0.0, CERT_TOL, || {
        Witness::Subset(balls.entries()[i].0.clone())
    }))
}

/// Whether the exact safe area is empty, with the clamped min-max value.
pub fn safe_meb_empty(balls: &CandidateBalls) -> Result<(bool, f64)> {
    safe_meb_empty_with(balls, CERT_TOL, MinMaxOptions::default())
}

pub fn safe_meb_empty_with(balls: &CandidateBalls, tol: f64, opts: MinMaxOptions) -> Result<(bool, f64)> {
    let (_, value) = solve_minmax_with(balls, opts)?;
    let value = value.max(0.0);
    Ok((value > tol, value))
}

pub fn check_convex(y: &[f64], honest: &PointSet) -> Result<Certificate> {
    check_convex_with(y, honest, HullOptions::default())
}

pub fn check_convex_with(y: &[f64], honest: &PointSet, opts: HullOptions) -> Result<Certificate> {
    let (d, nearest) = hull_projection(y, honest, opts)?;
    Ok(Certificate::judge(Condition::Convex, d, 0.0, opts.tol, || Witness::Point(nearest)))
}

/// `y` within `delta` of the honest hull.
pub fn check_near_hull(y: &[f64], honest: &PointSet, delta: f64) -> Result<Certificate> {
    let opts = HullOptions::default();
    let (d, nearest) = hull_projection(y, honest, opts)?;
    Ok(Certificate::judge(Condition::NearHull { delta }, d, delta, opts.tol, || {
        Witness::Point(nearest)
    }))
}

pub fn check_box(y: &[f64], honest: &PointSet) -> Result<Certificate> {
    honest.ensure_dim(y)?;
    let tb = geometry::trusted_box(honest);
    let v = tb.violation(y);
    Ok(Certificate::judge(Condition::Box, v, 0.0, CERT_TOL, || {
        Witness::Point(
            y.iter()
                .zip(tb.lo.iter().zip(&tb.hi))
                .map(|(&x, (&lo, &hi))| x.clamp(lo, hi))
                .collect(),
        )
    }))
}

/// Largest distance from `y` to any point of the honest hull, which is
/// attained at an honest point.
pub fn check_relaxed_convex(y: &[f64], honest: &PointSet, delta: f64) -> Result<Certificate> {
    check_relaxed_convex_tol(y, honest, delta, CERT_TOL)
}

pub fn check_relaxed_convex_tol(y: &[f64], honest: &PointSet, delta: f64, tol: f64) -> Result<Certificate> {
    honest.ensure_dim(y)?;
    let (far, achieved) = honest
        .iter()
        .map(|v| linalg::dist(y, v))
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, d)| if d > acc.1 { (i, d) } else { acc });
    Ok(Certificate::judge(Condition::RelaxedConvex { delta, p: 2 }, achieved, delta, tol, || {
        Witness::Point(honest.point(far).to_vec())
    }))
}

pub fn check_bias_bound(y: &[f64], honest: &PointSet, c: f64) -> Result<Certificate> {
    check_bias_bound_tol(y, honest, c, CERT_TOL)
}

pub fn check_bias_bound_tol(y: &[f64], honest: &PointSet, c: f64, tol: f64) -> Result<Certificate> {
    honest.ensure_dim(y)?;
    let ball = meb(honest)?;
    let mean = honest.mean();
    let achieved = linalg::dist(y, &mean);
    Ok(Certificate::judge(Condition::BiasBound { c }, achieved, (c + 1.0) * ball.radius, tol, || {
        Witness::Point(mean)
    }))
}

/// Proven relaxation factor of `rule` for `n` inputs, `t` faults, dimension `d`.
pub fn theoretical_bound(rule: Rule, n: usize, t: usize, d: usize) -> Result<f64> {
    if t >= n {
        return Err(Error::InvalidFaultBudget { n, t });
    }
    let (nf, tf) = (n as f64, t as f64);
    let honest_majority = || {
        if n <= 2 * t {
            Err(Error::ResilienceViolation { n, t })
        } else {
            Ok(())
        }
    };
    match rule {
        Rule::Mda => Ok(1.0 + 2.0 * tf / (nf - tf)),
        Rule::Medoid => {
            honest_majority()?;
            Ok((3.0 * nf - 2.0 * tf) / (nf - 2.0 * tf))
        }
        Rule::GeometricMedian => {
            honest_majority()?;
            Ok(2.0 * (nf - tf) / (nf - 2.0 * tf))
        }
        Rule::MinmaxMeb => {
            honest_majority()?;
            let balls = binomial(n, n - t);
            let k = (d as u128).min(balls.saturating_sub(1)) as f64;
            if k <= 1.0 {
                // One ball, or two balls that must intersect: exact validity.
                return Ok(1.0);
            }
            Ok(1.0 + (k - 1.0) / (k + 1.0 + (2.0 * (k + 1.0) * k).sqrt()))
        }
        Rule::CoordwiseMedian | Rule::Mean => Err(Error::InvalidParams(format!(
            "no relaxation bound is known for rule '{rule}'"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ps(v: &[&[f64]]) -> PointSet {
        PointSet::from_slices(v).unwrap()
    }

    #[test]
    fn phi_examples() {
        let b = Ball::new(vec![0.0, 0.0], 2.0).unwrap();
        assert_eq!(phi(&[0.0, 0.0], &b).unwrap(), 0.0);
        assert_abs_diff_eq!(phi(&[4.0, 0.0], &b).unwrap(), 1.0);
        let b = Ball::new(vec![3.0, 0.0], 1.0).unwrap();
        assert_abs_diff_eq!(phi(&[1.0, 1.0], &b).unwrap(), 5f64.sqrt() - 1.0, epsilon = 1e-12);
        let z = Ball::new(vec![0.0], 0.0).unwrap();
        assert_eq!(phi(&[0.0], &z), Err(Error::ZeroRadius));
    }

    #[test]
    fn c_meb_examples() {
        let h = ps(&[&[0.0, 0.0], &[2.0, 0.0]]);
        let at_center = check_c_meb(&[1.0, 0.0], &h, 1.0).unwrap();
        assert!(at_center.pass);
        assert_eq!(at_center.achieved, 0.0);
        let far = check_c_meb(&[1.0, 1.2], &h, 1.0).unwrap();
        assert!(!far.pass);
        assert_abs_diff_eq!(far.achieved, 1.2, epsilon = 1e-12);
        assert_eq!(far.witness, Some(Witness::Point(vec![1.0, 0.0])));
        assert!(check_c_meb(&[1.0, 1.2], &h, 1.25).unwrap().pass);
        assert!(check_c_meb(&[1.0, 0.0], &h, 0.5).is_err());
    }

    #[test]
    fn c_meb_zero_radius_is_exact_point() {
        let h = ps(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!(check_c_meb(&[1.0, 1.0], &h, 1.0).unwrap().pass);
        let off = check_c_meb(&[1.0, 1.001], &h, 100.0).unwrap();
        assert!(!off.pass);
        assert!(off.achieved.is_infinite());
    }

    #[test]
    fn safe_meb_on_intervals() {
        let p = ps(&[&[0.0], &[1.0], &[10.0]]);
        let cb = crate::aggregate::candidate_balls(&p, 1).unwrap();
        assert_eq!(safe_meb_value(&[1.0], &cb).unwrap(), 0.0);
        // y=0 misses [1,10] (center 5.5, r 4.5) by 1.
        assert_abs_diff_eq!(safe_meb_value(&[0.0], &cb).unwrap(), 1.0 / 4.5, epsilon = 1e-12);
        let cert = check_safe_meb(&[0.0], &cb).unwrap();
        assert!(!cert.pass);
        assert_eq!(cert.witness, Some(Witness::Subset(vec![1, 2])));
        let single = crate::aggregate::candidate_balls(&p, 0).unwrap();
        assert_eq!(safe_meb_value(&[5.0], &single).unwrap(), 0.0);
        assert_eq!(safe_meb_empty(&single).unwrap(), (false, 0.0));
    }

    #[test]
    fn convex_and_box_on_collapsed_segment() {
        let h = ps(&[&[0.0, 0.0], &[0.0, 0.0], &[0.0, 1.0], &[0.0, 1.0]]);
        let conv = check_convex(&[0.5, 0.5], &h).unwrap();
        assert!(!conv.pass);
        assert_abs_diff_eq!(conv.achieved, 0.5, epsilon = 1e-9);
        assert!(check_convex(&h.mean(), &h).unwrap().pass);
        assert!(check_convex(&[0.0, 1.0], &h).unwrap().pass);

        let bx = check_box(&[0.5, 0.5], &h).unwrap();
        assert!(!bx.pass);
        assert_eq!(bx.achieved, 0.5);
        assert_eq!(bx.witness, Some(Witness::Point(vec![0.0, 0.5])));
        assert!(check_box(&[0.0, 1.0], &h).unwrap().pass);
        assert!(check_box(&[0.0, 0.3], &h).unwrap().pass);
        // The same point is inside the enclosing ball.
        assert!(check_c_meb(&[0.5, 0.5], &h, 1.0).unwrap().pass);
    }

    #[test]
    fn relaxed_convex_examples() {
        let h = ps(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let ok = check_relaxed_convex(&[0.5, 0.0], &h, 0.5).unwrap();
        assert!(ok.pass);
        assert_abs_diff_eq!(ok.achieved, 0.5);
        assert!(!check_relaxed_convex(&[0.5, 0.0], &h, 0.4).unwrap().pass);
        let single = ps(&[&[0.0, 0.0]]);
        assert_eq!(check_relaxed_convex(&[0.0, 1.0], &single, 2.0).unwrap().achieved, 1.0);
    }

    #[test]
    fn bias_examples() {
        let h = ps(&[&[0.0, 0.0], &[2.0, 0.0], &[0.0, 2.0]]);
        let c = meb(&h).unwrap();
        let at_center = check_bias_bound(&c.center, &h, 1.0).unwrap();
        assert!(at_center.pass);
        assert!(at_center.achieved <= c.radius + 1e-12);
        assert_eq!(check_bias_bound(&h.mean(), &h, 1.0).unwrap().achieved, 0.0);
    }

    #[test]
    fn theoretical_bound_values() {
        assert_abs_diff_eq!(theoretical_bound(Rule::Mda, 5, 2, 2).unwrap(), 1.0 + 4.0 / 3.0);
        assert_abs_diff_eq!(theoretical_bound(Rule::Medoid, 5, 2, 2).unwrap(), 11.0);
        assert_abs_diff_eq!(theoretical_bound(Rule::GeometricMedian, 5, 2, 2).unwrap(), 6.0);
        let mm = theoretical_bound(Rule::MinmaxMeb, 40, 10, 2).unwrap();
        assert_abs_diff_eq!(mm, 1.0 + 1.0 / (3.0 + 12f64.sqrt()), epsilon = 1e-12);
        assert_abs_diff_eq!(mm, 1.1547005, epsilon = 1e-7);
        // k capped by the number of candidate balls minus one.
        assert_eq!(theoretical_bound(Rule::MinmaxMeb, 3, 1, 5).unwrap(), theoretical_bound(Rule::MinmaxMeb, 30, 1, 2).unwrap());
        assert_eq!(theoretical_bound(Rule::MinmaxMeb, 5, 0, 3).unwrap(), 1.0);
        for k in 2..200 {
            assert!(theoretical_bound(Rule::MinmaxMeb, 1000, 10, k).unwrap() < 2f64.sqrt());
        }
        assert!(matches!(
            theoretical_bound(Rule::Medoid, 4, 2, 2),
            Err(Error::ResilienceViolation { .. })
        ));
        assert!(theoretical_bound(Rule::Mda, 4, 2, 2).is_ok());
        assert!(theoretical_bound(Rule::Mean, 4, 1, 2).is_err());
    }
}
