//! Brute-force references, kept independent of the production solvers:
//! support-set enumeration for enclosing balls, grid search for the min-max
//! objective and exhaustive enumeration of honest designations.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

use crate::aggregate::{aggregate_with, AggregateOptions, CandidateBalls, Rule, DEFAULT_MAX_SUBSETS};
use crate::error::{Error, Result};
use crate::geometry::{meb_of, Ball};
use crate::linalg::{self, binomial};
use crate::pointset::PointSet;
use crate::validity::relaxation_factor;

/// Smallest circumball over all support sets of size <= d+1 that contains every point.
pub fn meb_bruteforce(points: &PointSet) -> Result<Ball> {
    let (n, d) = (points.len(), points.dim());
    if n > 12 || d > 4 {
        return Err(Error::InstanceTooLarge(format!("n={n}, d={d} (limit n<=12, d<=4)")));
    }
    let mut best: Option<Ball> = None;
    for k in 1..=(d + 1).min(n) {
        for support in (0..n).combinations(k) {
            let pts: Vec<&[f64]> = support.iter().map(|&i| points.point(i)).collect();
            let Some(ball) = circumball(&pts) else { continue };
            if best.as_ref().is_some_and(|b| b.radius <= ball.radius) {
                continue;
            }
            let slack = 1e-12 * (1.0 + ball.radius);
            if points.iter().all(|p| linalg::dist(p, &ball.center) <= ball.radius + slack) {
                best = Some(ball);
            }
        }
    }
    best.ok_or_else(|| Error::InvalidParams("no enclosing support set found".into()))
}

/// Ball through all `pts` centred in their affine hull; `None` when the
/// points are affinely dependent.
fn circumball(pts: &[&[f64]]) -> Option<Ball> {
    let base = pts[0];
    if pts.len() == 1 {
        return Some(Ball {
            center: base.to_vec(),
            radius: 0.0,
        });
    }
    let dirs: Vec<Vec<f64>> = pts[1..].iter().map(|p| linalg::sub(p, base)).collect();
    let k = dirs.len();
    let gram = DMatrix::from_fn(k, k, |i, j| 2.0 * linalg::dot(&dirs[i], &dirs[j]));
    let rhs = DVector::from_fn(k, |i, _| linalg::norm2(&dirs[i]));
    let scale = (0..k).map(|i| gram[(i, i)]).fold(0.0, f64::max);
    let lu = gram.lu();
    let det = lu.determinant();
    if det.abs() <= 1e-12 * scale.powi(k as i32) {
        return None;
    }
    let lambda = lu.solve(&rhs)?;
    let mut center = base.to_vec();
    for (l, dir) in lambda.iter().zip(&dirs) {
        for (c, x) in center.iter_mut().zip(dir) {
            *c += l * x;
        }
    }
    let radius = pts
        .iter()
        .map(|p| linalg::dist(p, &center))
        .fold(0.0, f64::max);
    Some(Ball { center, radius })
}

const REFINE_RES: usize = 31;
const REFINE_HALF_WIDTH: f64 = 8.0;

/// Dense grid search of the unclamped min-max objective over the box spanned
/// by the ball centres inflated by the largest radius, followed by repeated
/// zoomed grids around the incumbent and an exact active-set refinement.
pub fn grid_minmax(balls: &CandidateBalls, resolution: usize) -> Result<(Vec<f64>, f64)> {
    if balls.is_empty() {
        return Err(Error::EmptyInput);
    }
    let d = balls.dim();
    if d > 3 {
        return Err(Error::InstanceTooLarge(format!("grid oracle needs d <= 3, got {d}")));
    }
    let resolution = resolution.max(2);
    if (resolution as f64).powi(d as i32) > 1e8 {
        return Err(Error::InstanceTooLarge(format!("{resolution}^{d} grid points")));
    }
    let list: Vec<&Ball> = balls.balls().collect();
    if list.iter().any(|b| b.radius == 0.0) {
        return Err(Error::ZeroRadius);
    }
    let g = |y: &[f64]| {
        list.iter()
            .map(|b| linalg::dist(y, &b.center) / b.radius - 1.0)
            .fold(f64::NEG_INFINITY, f64::max)
    };

    let rmax = list.iter().map(|b| b.radius).fold(0.0, f64::max);
    let mut lo: Vec<f64> = (0..d)
        .map(|i| list.iter().map(|b| b.center[i]).fold(f64::INFINITY, f64::min) - rmax)
        .collect();
    let mut hi: Vec<f64> = (0..d)
        .map(|i| list.iter().map(|b| b.center[i]).fold(f64::NEG_INFINITY, f64::max) + rmax)
        .collect();

    let mut best = (lo.clone(), f64::INFINITY);
    let mut res = resolution;
    let extent0 = lo.iter().zip(&hi).map(|(a, b)| b - a).fold(0.0, f64::max);
    for _ in 0..2000 {
        let steps: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| (b - a) / (res - 1) as f64).collect();
        let mut idx = vec![0usize; d];
        let mut best_idx = vec![res / 2; d];
        loop {
            let y: Vec<f64> = (0..d).map(|i| lo[i] + steps[i] * idx[i] as f64).collect();
            let v = g(&y);
            if v < best.1 {
                best = (y, v);
                best_idx.clone_from(&idx);
            }
            let mut axis = 0;
            while axis < d {
                idx[axis] += 1;
                if idx[axis] < res {
                    break;
                }
                idx[axis] = 0;
                axis += 1;
            }
            if axis == d {
                break;
            }
        }
        let width = steps.iter().fold(0.0, |a: f64, &s| a.max(s));
        if width <= 1e-13 * extent0.max(1e-300) {
            break;
        }
        // An incumbent on the box edge means the minimiser may lie outside:
        // slide the box over without shrinking it.
        let on_edge = best_idx.iter().any(|&i| i == 0 || i == res - 1);
        let half: Vec<f64> = if on_edge && res == REFINE_RES {
            lo.iter().zip(&hi).map(|(a, b)| 0.5 * (b - a)).collect()
        } else {
            steps.iter().map(|s| REFINE_HALF_WIDTH * s).collect()
        };
        for i in 0..d {
            lo[i] = best.0[i] - half[i];
            hi[i] = best.0[i] + half[i];
        }
        res = REFINE_RES;
    }
    let (y, v) = refine_active_sets(&list, &best.0);
    if v < best.1 {
        best = (y, v);
    }
    Ok(best)
}

/// Balls nearest to active at the grid incumbent whose subsets are solved
/// exactly during refinement.
const ACTIVE_CANDIDATES: usize = 12;

/// Exact refinement: the minimiser lies in the hull of at most d+1 active
/// centres with equal scaled distances `|y - c_i| = s r_i`. Restricting `y`
/// to the centres' affine hull makes that system linear in the hull
/// coordinates given `s^2`, leaving one quadratic in `s^2`. Every subset of
/// the nearly active balls is solved and the best point kept.
fn refine_active_sets(balls: &[&Ball], incumbent: &[f64]) -> (Vec<f64>, f64) {
    let g = |y: &[f64]| {
        balls
            .iter()
            .map(|b| linalg::dist(y, &b.center) / b.radius - 1.0)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let d = incumbent.len();
    let mut ranked: Vec<usize> = (0..balls.len()).collect();
    let score = |i: usize| linalg::dist(incumbent, &balls[i].center) / balls[i].radius;
    ranked.sort_by(|&a, &b| score(b).total_cmp(&score(a)));
    ranked.truncate(ACTIVE_CANDIDATES);

    let mut best = (incumbent.to_vec(), g(incumbent));
    let mut consider = |y: Vec<f64>| {
        if y.iter().all(|x| x.is_finite()) {
            let v = g(&y);
            if v < best.1 {
                best = (y, v);
            }
        }
    };
    for &i in &ranked {
        consider(balls[i].center.clone());
    }
    for size in 2..=(d + 1).min(ranked.len()) {
        for subset in ranked.iter().copied().combinations(size) {
            for y in equal_scaled_distance_points(&subset.iter().map(|&i| balls[i]).collect::<Vec<_>>()) {
                consider(y);
            }
        }
    }
    best
}

fn equal_scaled_distance_points(active: &[&Ball]) -> Vec<Vec<f64>> {
    let base = &active[0].center;
    let r1 = active[0].radius;
    let k = active.len() - 1;
    let edges: Vec<Vec<f64>> = active[1..].iter().map(|b| linalg::sub(&b.center, base)).collect();
    let gram = DMatrix::from_fn(k, k, |i, j| linalg::dot(&edges[i], &edges[j]));
    let scale = (0..k).map(|i| gram[(i, i)]).fold(0.0, f64::max);
    let Some(chol) = gram.clone().cholesky() else { return Vec::new() };
    if (0..k).any(|i| chol.l()[(i, i)].powi(2) <= 1e-12 * scale) {
        return Vec::new();
    }
    // Hull coordinates are a + b u with u = s^2.
    let a = chol.solve(&DVector::from_fn(k, |i, _| 0.5 * linalg::norm2(&edges[i])));
    let b = chol.solve(&DVector::from_fn(k, |i, _| -0.5 * (active[i + 1].radius.powi(2) - r1 * r1)));
    let qa = (gram.clone() * &b).dot(&b);
    let qb = 2.0 * (gram.clone() * &a).dot(&b) - r1 * r1;
    let qc = (gram * &a).dot(&a);
    let mut roots = Vec::new();
    if qa.abs() <= 1e-14 * (qb.abs() + qc.abs()) {
        if qb != 0.0 {
            roots.push(-qc / qb);
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            roots.push((-qb + sq) / (2.0 * qa));
            roots.push((-qb - sq) / (2.0 * qa));
        }
    }
    roots
        .into_iter()
        .filter(|&u| u >= 0.0)
        .map(|u| {
            let lambda = &a + &b * u;
            let mut y = base.clone();
            for (l, e) in lambda.iter().zip(&edges) {
                y = linalg::axpy(&y, *l, e);
            }
            y
        })
        .collect()
}

/// Worst relaxation factor of `y` over every size-(n-t) honest designation.
/// Zero-radius designations count only when `y` misses their centre.
pub fn exhaustive_factor(points: &PointSet, t: usize, y: &[f64]) -> Result<f64> {
    exhaustive_factor_with(points, t, y, DEFAULT_MAX_SUBSETS)
}

pub fn exhaustive_factor_with(points: &PointSet, t: usize, y: &[f64], cap: u128) -> Result<f64> {
    let n = points.len();
    if t >= n {
        return Err(Error::InvalidFaultBudget { n, t });
    }
    points.ensure_dim(y)?;
    let count = binomial(n, n - t);
    if count > cap {
        return Err(Error::TooManySubsets { count, cap });
    }
    let refs = points.as_refs();
    let mut worst = 0.0f64;
    let mut buf = Vec::with_capacity(n - t);
    for designation in (0..n).combinations(n - t) {
        buf.clear();
        buf.extend(designation.iter().map(|&i| refs[i]));
        let ball = meb_of(&buf);
        worst = worst.max(relaxation_factor(y, &ball));
    }
    Ok(worst)
}

/// Runs `rule` on `points` and returns its worst designation factor.
pub fn exhaustive_factor_rule(points: &PointSet, t: usize, rule: Rule) -> Result<f64> {
    let out = aggregate_with(rule, points, t, &AggregateOptions::default())?;
    exhaustive_factor(points, t, &out.output)
}
