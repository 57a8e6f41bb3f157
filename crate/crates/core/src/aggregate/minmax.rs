//! MinMax-MEB: the point minimising the worst relative distance to all
//! candidate balls.
//!
//! The objective `g(y) = max_T (|y - c_T| - r_T) / r_T` has the same
//! minimiser as `h(y) = max_T |y - c_T|^2 / r_T^2`, a max of strongly convex
//! quadratics. Its Lagrangian dual over the simplex,
//! `D(mu) = min_y sum_T mu_T |y - c_T|^2 / r_T^2`, has the closed-form inner
//! minimiser `y(mu) = sum mu_T w_T c_T / sum mu_T w_T` with `w_T = 1/r_T^2`,
//! so we run away-step Frank-Wolfe on the dual and stop on the duality gap.

use super::{check_budget, AggregateOptions, AggregateResult, CandidateBalls, Rule};
use crate::error::{Error, Result};
use crate::geometry::Ball;
use crate::linalg;
use crate::pointset::PointSet;

#[derive(Debug, Clone, Copy)]
pub struct MinMaxOptions {
    /// Stop once `h(y) - D(mu) <= rel_gap * h(y)`.
    pub rel_gap: f64,
    /// Gap accepted when the iteration cap is hit.
    pub fallback_gap: f64,
    pub max_iter: usize,
}

impl Default for MinMaxOptions {
    fn default() -> Self {
        Self {
            rel_gap: 1e-13,
            fallback_gap: 1e-9,
            max_iter: 200_000,
        }
    }
}

pub fn minmax_meb(points: &PointSet, t: usize) -> Result<AggregateResult> {
    minmax_meb_with(points, t, &AggregateOptions::default())
}

pub fn minmax_meb_with(
    points: &PointSet,
    t: usize,
    opts: &AggregateOptions,
) -> Result<AggregateResult> {
    let n = points.len();
    check_budget(n, t)?;
    if n <= 2 * t && !opts.allow_non_resilient {
        return Err(Error::ResilienceViolation { n, t });
    }
    let balls = super::candidate_balls_with(points, t, opts.max_subsets)?;
    let (output, value) = solve_minmax_with(&balls, opts.minmax)?;
    Ok(AggregateResult {
        achieved_value: Some(value.max(0.0)),
        ..AggregateResult::plain(Rule::MinmaxMeb, output)
    })
}

/// Minimiser of the unclamped objective and its value.
pub fn solve_minmax(balls: &CandidateBalls) -> Result<(Vec<f64>, f64)> {
    solve_minmax_with(balls, MinMaxOptions::default())
}

pub fn solve_minmax_with(balls: &CandidateBalls, opts: MinMaxOptions) -> Result<(Vec<f64>, f64)> {
    if balls.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (zero, positive): (Vec<&Ball>, Vec<&Ball>) = balls.balls().partition(|b| b.radius == 0.0);

    if let Some(first) = zero.first() {
        if zero.iter().any(|b| b.center != first.center) {
            return Err(Error::ConflictingZeroRadius);
        }
        let y = first.center.clone();
        return Ok((y.clone(), objective(&y, positive.iter().copied()).unwrap_or(-1.0)));
    }

    let y = dual_frank_wolfe(&positive, opts)?;
    let value = objective(&y, positive.iter().copied()).expect("nonempty");
    Ok((y, value))
}

/// `max_T |y - c_T| / r_T - 1` over positive-radius balls.
pub(crate) fn objective<'a>(y: &[f64], balls: impl Iterator<Item = &'a Ball>) -> Option<f64> {
    balls
        .map(|b| linalg::dist(y, &b.center) / b.radius - 1.0)
        .reduce(f64::max)
}

fn dual_frank_wolfe(balls: &[&Ball], opts: MinMaxOptions) -> Result<Vec<f64>> {
    let m = balls.len();
    let dim = balls[0].dim();
    if m == 1 {
        return Ok(balls[0].center.clone());
    }
    // Work in a frame centred on the centres and with weights in (0, 1].
    let origin = linalg::mean(balls.iter().map(|b| b.center.as_slice()));
    let centers: Vec<Vec<f64>> = balls.iter().map(|b| linalg::sub(&b.center, &origin)).collect();
    let rmin = balls.iter().map(|b| b.radius).fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = balls.iter().map(|b| (rmin / b.radius).powi(2)).collect();
    let cc: Vec<f64> = centers.iter().map(|c| linalg::norm2(c)).collect();

    let q = |y: &[f64], i: usize| w[i] * linalg::dist2(y, &centers[i]);

    // Start at the vertex that is worst for the weighted centroid.
    let wsum: f64 = w.iter().sum();
    let mut y0 = vec![0.0; dim];
    for (c, &wi) in centers.iter().zip(&w) {
        for (a, x) in y0.iter_mut().zip(c) {
            *a += wi * x / wsum;
        }
    }
    let start = (0..m).max_by(|&a, &b| q(&y0, a).total_cmp(&q(&y0, b))).unwrap();

    let mut mu = vec![0.0; m];
    mu[start] = 1.0;
    let mut active = vec![start];
    let mut st = DualState::vertex(&centers, &w, &cc, start);

    let mut qs = vec![0.0; m];
    let mut last_gap = f64::INFINITY;
    for iter in 0..opts.max_iter {
        if iter % 64 == 63 {
            st = DualState::from_weights(&centers, &w, &cc, &mu, &active);
            if let Some(y) = polish_any(&centers, &w, &active, &st.point(), opts.rel_gap) {
                return Ok(linalg::axpy(&origin, 1.0, &y));
            }
        }
        let y = st.point();
        let mut toward = 0;
        let mut h = f64::NEG_INFINITY;
        for (i, qi) in qs.iter_mut().enumerate() {
            *qi = q(&y, i);
            if *qi > h {
                h = *qi;
                toward = i;
            }
        }
        let dual: f64 = active.iter().map(|&i| mu[i] * qs[i]).sum();
        let gap = h - dual;
        last_gap = gap / h.max(f64::MIN_POSITIVE);
        if gap <= opts.rel_gap * h || h == 0.0 {
            return Ok(linalg::axpy(&origin, 1.0, &y));
        }
        let away = *active
            .iter()
            .min_by(|&&a, &&b| qs[a].total_cmp(&qs[b]))
            .unwrap();

        let use_away = active.len() > 1 && dual - qs[away] > h - dual;
        let (dir, gamma_max) = if use_away {
            let ma = mu[away];
            (st.away_direction(&centers, &w, &cc, away), ma / (1.0 - ma))
        } else {
            (st.toward_direction(&centers, &w, &cc, toward), 1.0)
        };
        let gamma = st.line_search(&dir, gamma_max);
        if gamma <= 0.0 {
            break;
        }
        st.advance(&dir, gamma);
        if use_away {
            mu.iter_mut().for_each(|x| *x *= 1.0 + gamma);
            if gamma >= gamma_max {
                mu[away] = 0.0;
                active.retain(|&i| i != away);
            } else {
                mu[away] -= gamma;
            }
        } else if gamma >= 1.0 {
            mu.iter_mut().for_each(|x| *x = 0.0);
            mu[toward] = 1.0;
            active.clear();
            active.push(toward);
        } else {
            mu.iter_mut().for_each(|x| *x *= 1.0 - gamma);
            mu[toward] += gamma;
            if !active.contains(&toward) {
                active.push(toward);
            }
        }
    }
    let st = DualState::from_weights(&centers, &w, &cc, &mu, &active);
    if let Some(y) = polish_any(&centers, &w, &active, &st.point(), opts.fallback_gap) {
        return Ok(linalg::axpy(&origin, 1.0, &y));
    }
    if last_gap <= opts.fallback_gap {
        let st = DualState::from_weights(&centers, &w, &cc, &mu, &active);
        return Ok(linalg::axpy(&origin, 1.0, &st.point()));
    }
    Err(Error::NonConvergence {
        solver: "solve_minmax",
        iterations: opts.max_iter,
    })
}

/// Tries the exact solution on the current support and on the nearly tight
/// set at `y`, returning it if its duality gap is within `rel_gap`.
fn polish_any(centers: &[Vec<f64>], w: &[f64], active: &[usize], y: &[f64], rel_gap: f64) -> Option<Vec<f64>> {
    let q: Vec<f64> = centers.iter().zip(w).map(|(c, wi)| wi * linalg::dist2(y, c)).collect();
    let h = q.iter().copied().fold(0.0, f64::max);
    let mut order: Vec<usize> = (0..centers.len()).filter(|&i| q[i] >= h * (1.0 - 1e-6)).collect();
    order.sort_by(|&a, &b| q[b].total_cmp(&q[a]));
    let mut tight: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for i in order {
        if tight.is_empty() {
            tight.push(i);
            continue;
        }
        let mut e = linalg::sub(&centers[i], &centers[tight[0]]);
        let scale = linalg::norm(&e);
        for b in &basis {
            let p = linalg::dot(&e, b);
            e = linalg::axpy(&e, -p, b);
        }
        let len = linalg::norm(&e);
        if len > 1e-9 * scale.max(f64::MIN_POSITIVE) {
            basis.push(linalg::scale(&e, 1.0 / len));
            tight.push(i);
        }
    }
    let found = [active, tight.as_slice()].into_iter().find_map(|support| {
        let (y, mu) = exact_on_support(centers, w, support)?;
        let q: Vec<f64> = centers.iter().zip(w).map(|(c, wi)| wi * linalg::dist2(&y, c)).collect();
        let h = q.iter().copied().fold(0.0, f64::max);
        let dual: f64 = support.iter().zip(&mu).map(|(&i, m)| m * q[i]).sum();
        (h - dual <= rel_gap * h).then_some(y)
    });
    found
}

/// Point of the affine hull of the support centres with equal weighted
/// squared distance `h` to each, together with its KKT multipliers.
///
/// With `y = c_0 + sum z_l e_l`, `e_l = c_l - c_0`, the equalities give
/// `G z = (|e|^2 - h p) / 2` with `p_l = 1/w_l - 1/w_0`, and `w_0 z'Gz = h`
/// closes a quadratic in `h`. Stationarity forces `mu_l w_l` proportional
/// to `z_l` and `mu_0 w_0` to `1 - sum z`.
fn exact_on_support(centers: &[Vec<f64>], w: &[f64], support: &[usize]) -> Option<(Vec<f64>, Vec<f64>)> {
    use nalgebra::{DMatrix, DVector};
    let (&i0, rest) = support.split_first()?;
    if rest.is_empty() {
        return Some((centers[i0].clone(), vec![1.0]));
    }
    let k = rest.len();
    let edges: Vec<Vec<f64>> = rest.iter().map(|&i| linalg::sub(&centers[i], &centers[i0])).collect();
    let gram = DMatrix::from_fn(k, k, |a, b| linalg::dot(&edges[a], &edges[b]));
    let chol = gram.clone().cholesky()?;
    let za = chol.solve(&DVector::from_fn(k, |a, _| 0.5 * linalg::norm2(&edges[a])));
    let zb = chol.solve(&DVector::from_fn(k, |a, _| 0.5 * (1.0 / w[rest[a]] - 1.0 / w[i0])));
    let w0 = w[i0];
    let qa = w0 * zb.dot(&(&gram * &zb));
    let qb = -2.0 * w0 * za.dot(&(&gram * &zb)) - 1.0;
    let qc = w0 * za.dot(&(&gram * &za));
    let roots = if qa.abs() <= 1e-14 * (qb.abs() + qc.abs()) {
        vec![-qc / qb]
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            return None;
        }
        let s = -0.5 * (qb + qb.signum() * disc.sqrt());
        let mut r = vec![s / qa, qc / s];
        r.sort_by(f64::total_cmp);
        r
    };
    roots.into_iter().filter(|h| h.is_finite() && *h >= 0.0).find_map(|h| {
        let z = &za - &zb * h;
        let mut mu = Vec::with_capacity(k + 1);
        mu.push((1.0 - z.sum()) / w0);
        mu.extend(rest.iter().zip(z.iter()).map(|(&i, zl)| zl / w[i]));
        if mu.iter().any(|&m| m < -1e-12) {
            return None;
        }
        let total: f64 = mu.iter().map(|m| m.max(0.0)).sum();
        let mu: Vec<f64> = mu.iter().map(|m| m.max(0.0) / total).collect();
        let mut y = centers[i0].clone();
        for (e, zl) in edges.iter().zip(z.iter()) {
            y = linalg::axpy(&y, *zl, e);
        }
        Some((y, mu))
    })
}

/// Aggregates `W = sum mu w`, `S = sum mu w c`, `A = sum mu w |c|^2`.
struct DualState {
    w: f64,
    s: Vec<f64>,
    a: f64,
}

struct Direction {
    dw: f64,
    ds: Vec<f64>,
    da: f64,
}

impl DualState {
    fn vertex(centers: &[Vec<f64>], w: &[f64], cc: &[f64], i: usize) -> Self {
        Self {
            w: w[i],
            s: linalg::scale(&centers[i], w[i]),
            a: w[i] * cc[i],
        }
    }

    fn from_weights(centers: &[Vec<f64>], w: &[f64], cc: &[f64], mu: &[f64], active: &[usize]) -> Self {
        let mut st = Self {
            w: 0.0,
            s: vec![0.0; centers[0].len()],
            a: 0.0,
        };
        for &i in active {
            let c = mu[i] * w[i];
            st.w += c;
            st.a += c * cc[i];
            for (x, ci) in st.s.iter_mut().zip(&centers[i]) {
                *x += c * ci;
            }
        }
        st
    }

    fn point(&self) -> Vec<f64> {
        linalg::scale(&self.s, 1.0 / self.w)
    }

    fn toward_direction(&self, centers: &[Vec<f64>], w: &[f64], cc: &[f64], j: usize) -> Direction {
        Direction {
            dw: w[j] - self.w,
            ds: linalg::axpy(&linalg::scale(&centers[j], w[j]), -1.0, &self.s),
            da: w[j] * cc[j] - self.a,
        }
    }

    fn away_direction(&self, centers: &[Vec<f64>], w: &[f64], cc: &[f64], j: usize) -> Direction {
        Direction {
            dw: self.w - w[j],
            ds: linalg::axpy(&self.s, -w[j], &centers[j]),
            da: self.a - w[j] * cc[j],
        }
    }

    /// Sign-carrying numerator of `dD/dgamma` along `dir` (denominator `W(gamma)^2 > 0`).
    fn slope(&self, dir: &Direction, gamma: f64) -> f64 {
        let wg = self.w + gamma * dir.dw;
        let sg = linalg::axpy(&self.s, gamma, &dir.ds);
        dir.da * wg * wg - 2.0 * linalg::dot(&sg, &dir.ds) * wg + linalg::norm2(&sg) * dir.dw
    }

    /// Exact line search on the concave dual by bisection on the slope sign.
    fn line_search(&self, dir: &Direction, gamma_max: f64) -> f64 {
        if self.slope(dir, 0.0) <= 0.0 {
            return 0.0;
        }
        if self.slope(dir, gamma_max) >= 0.0 {
            return gamma_max;
        }
        let (mut lo, mut hi) = (0.0, gamma_max);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.slope(dir, mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn advance(&mut self, dir: &Direction, gamma: f64) {
        self.w += gamma * dir.dw;
        self.a += gamma * dir.da;
        for (x, d) in self.s.iter_mut().zip(&dir.ds) {
            *x += gamma * d;
        }
    }
}
