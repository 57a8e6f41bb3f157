//! Generators for the classic counterexample constructions and for seeded
//! random or adversarial instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::aggregate::{aggregate_with, AggregateOptions, CandidateBalls, Rule};
use crate::error::{Error, Result};
use crate::geometry::{meb, meb_of, Ball};
use crate::linalg;
use crate::pointset::{Label, PointSet};
use crate::validity::unit_vector;

/// Parameterised description of a generated instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScenarioSpec {
    LowerBound { d: usize, t: usize },
    #[serde(rename = "medoid-ce")]
    MedoidCE { t: usize, x: f64 },
    #[serde(rename = "gm-impossibility-ce")]
    GMImpossibilityCE { t: usize, x: f64 },
    #[serde(rename = "gm-convex-ce")]
    GMConvexCE { t: usize },
    TangentBalls { k: usize },
    RandomHonest { n: usize, t: usize, d: usize, spread: f64, seed: u64 },
    Attack {
        n: usize,
        t: usize,
        d: usize,
        spread: f64,
        seed: u64,
        strategy: Strategy,
    },
}

/// How Byzantine points are placed in a random instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Strategy {
    /// Independent points between 2 and 5 spreads from the origin.
    UniformFar,
    /// All Byzantine points on one spot just outside the honest ball.
    ClusterCollusion,
    /// Random multi-start plus coordinate descent maximising the rule's
    /// relaxation factor against the honest ball.
    Search { rule: Rule, starts: usize },
}

/// A candidate honest subset of a construction with the radius the
/// construction is built around.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Designation {
    pub name: String,
    pub indices: Vec<usize>,
    pub ball: Ball,
    pub stated_radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    pub points: PointSet,
    pub t: usize,
    pub designations: Vec<Designation>,
}

/// What a spec generates: a point set, or balls fed straight to the solver.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Points(Construction),
    Balls(CandidateBalls),
}

impl ScenarioSpec {
    pub fn generate(&self) -> Result<Instance> {
        let plain = |points: PointSet, t: usize| {
            Instance::Points(Construction {
                points,
                t,
                designations: Vec::new(),
            })
        };
        Ok(match *self {
            ScenarioSpec::LowerBound { d, t } => Instance::Points(lower_bound_construction(d, t)?),
            ScenarioSpec::MedoidCE { t, x } => Instance::Points(medoid_counterexample(t, x)?),
            ScenarioSpec::GMImpossibilityCE { t, x } => Instance::Points(gm_impossibility_instance(t, x)?),
            ScenarioSpec::GMConvexCE { t } => Instance::Points(gm_convex_violation_instance(t)?),
            ScenarioSpec::TangentBalls { k } => Instance::Balls(tangent_unit_balls(k)?),
            ScenarioSpec::RandomHonest { n, t, d, spread, seed } => {
                if t >= n {
                    return Err(Error::InvalidFaultBudget { n, t });
                }
                plain(random_instance(n, 0, d, spread, seed, Strategy::UniformFar)?, t)
            }
            ScenarioSpec::Attack {
                n,
                t,
                d,
                spread,
                seed,
                strategy,
            } => plain(random_instance(n, t, d, spread, seed, strategy)?, t),
        })
    }
}

fn repeat(point: &[f64], count: usize, out: &mut Vec<Vec<f64>>) -> Vec<usize> {
    let start = out.len();
    out.extend(std::iter::repeat_n(point.to_vec(), count));
    (start..out.len()).collect()
}

fn designation(name: &str, mut indices: Vec<usize>, points: &[Vec<f64>], stated_radius: f64) -> Designation {
    indices.sort_unstable();
    let refs: Vec<&[f64]> = indices.iter().map(|&i| points[i].as_slice()).collect();
    Designation {
        name: name.to_string(),
        ball: meb_of(&refs),
        indices,
        stated_radius,
    }
}

fn labelled(points: Vec<Vec<f64>>, honest: &[usize]) -> Result<PointSet> {
    let mut labels = vec![Label::Byzantine; points.len()];
    for &i in honest {
        labels[i] = Label::Honest;
    }
    PointSet::with_labels(points, labels)
}

/// Lower-bound construction with `t - 2` points (at least one) on every
/// cluster location, giving `(d+1) t - d - 1` points in total for `t >= 3`.
/// Designations are the `d` unit balls followed by the large ball.
///
/// The intended balls are candidate balls only when each holds at least
/// `n - t` points, which needs `t >= multiplicity + d`.
pub fn lower_bound_construction(d: usize, t: usize) -> Result<Construction> {
    lower_bound_construction_with(d, t, t.saturating_sub(2).max(1))
}

/// Lower-bound construction with an explicit per-location multiplicity.
pub fn lower_bound_construction_with(d: usize, t: usize, multiplicity: usize) -> Result<Construction> {
    if d < 2 {
        return Err(Error::InvalidParams(format!("lower bound construction needs d >= 2, got {d}")));
    }
    if t + 1 < d {
        return Err(Error::InvalidParams(format!("lower bound construction needs t >= d-1, got d={d}, t={t}")));
    }
    if multiplicity == 0 {
        return Err(Error::InvalidParams("cluster multiplicity must be at least 1".into()));
    }
    let df = d as f64;
    let unit = |i: usize| -> Vec<f64> { (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect() };
    let flipped = |i: usize| -> Vec<f64> { (0..d).map(|j| if i == j { 0.0 } else { 1.0 }).collect() };

    let common = vec![1.0 / (df * (df - 1.0)).sqrt(); d];
    let alpha = (df.sqrt() + 1.0) / (df - 1.0).powf(1.5);
    let centres: Vec<Vec<f64>> = (0..d).map(|i| linalg::scale(&unit(i), (df / (df - 1.0)).sqrt())).collect();
    let corners: Vec<Vec<f64>> = (0..d).map(|i| linalg::scale(&flipped(i), alpha)).collect();

    let mut pts = Vec::new();
    let common_idx = repeat(&common, multiplicity, &mut pts);
    let corner_idx: Vec<Vec<usize>> = corners.iter().map(|q| repeat(q, multiplicity, &mut pts)).collect();

    // Unit ball i passes through the common point and every corner except its
    // own; its extra point is the antipode of their mean so the ball is the MEB.
    let mut members: Vec<Vec<usize>> = Vec::with_capacity(d + 1);
    for (i, c) in centres.iter().enumerate() {
        let mut on_sphere = vec![common.as_slice()];
        on_sphere.extend(corners.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q.as_slice()));
        let m = linalg::mean(on_sphere.into_iter());
        let away = linalg::sub(c, &m);
        let len = linalg::norm(&away);
        let extra = linalg::axpy(c, 1.0 / len, &away);
        let mut idx = common_idx.clone();
        for (j, ci) in corner_idx.iter().enumerate() {
            if j != i {
                idx.extend(ci);
            }
        }
        idx.extend(repeat(&extra, 1, &mut pts));
        members.push(idx);
    }

    // Large ball centred on the diagonal through every corner, far enough out
    // that it bulges past the corners' hyperplane by less than 1/(2d).
    let bulge = |y: f64| {
        let centre = vec![y; d];
        let radius = linalg::dist(&centre, &corners[0]);
        let plane = (df * y - alpha * (df - 1.0)) / df.sqrt();
        radius - plane
    };
    let target = 1.0 / (2.0 * df);
    let mut hi = 1.0f64;
    while bulge(hi) >= target {
        hi *= 2.0;
    }
    let mut lo = alpha;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if bulge(mid) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let y = hi;
    let big_radius = linalg::dist(&vec![y; d], &corners[0]);
    let z = y + big_radius / df.sqrt();
    let mut big = corner_idx.concat();
    big.extend(repeat(&vec![z; d], 1, &mut pts));
    members.push(big);

    let mut designations: Vec<Designation> = members
        .into_iter()
        .enumerate()
        .take(d)
        .map(|(i, idx)| designation(&format!("unit-{}", i + 1), idx, &pts, 1.0))
        .collect();
    let big_idx = {
        let mut idx = corner_idx.concat();
        idx.push(pts.len() - 1);
        idx
    };
    designations.push(designation("large", big_idx, &pts, big_radius));

    Ok(Construction {
        points: PointSet::new(pts)?,
        t,
        designations,
    })
}

/// Medoid counterexample with `n = 2t + 1`: subsets A, B, C, D, E, F in
/// that order. Labels mark E, C, D honest, the designation farthest from a
/// medoid in B.
pub fn medoid_counterexample(t: usize, x: f64) -> Result<Construction> {
    if t < 4 || !t.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!("medoid counterexample needs even t >= 4, got {t}")));
    }
    if !x.is_finite() {
        return Err(Error::InvalidParams("x must be finite".into()));
    }
    let half = t / 2;
    let mut pts = Vec::with_capacity(2 * t + 1);
    let a = repeat(&[0.0, 0.0], half - 1, &mut pts);
    let b = repeat(&[1.0, 1.0], half, &mut pts);
    let c = repeat(&[3.0, 1.0], half, &mut pts);
    let d = repeat(&[4.0, 0.0], half - 1, &mut pts);
    let e = repeat(&[2.0, 0.0], 2, &mut pts);
    let f = repeat(&[2.0, x], 1, &mut pts);

    let abe = [a, b.clone(), e.clone()].concat();
    let ecd = [e, c.clone(), d].concat();
    let bcf = [b, c, f].concat();
    let designations = vec![
        designation("A+B+E", abe, &pts, 1.0),
        designation("E+C+D", ecd.clone(), &pts, 1.0),
        designation("B+C+F", bcf, &pts, x / 2.0),
    ];
    Ok(Construction {
        points: labelled(pts, &ecd)?,
        t,
        designations,
    })
}

/// Geometric-median counterexample with `n = 3t - 3`: singletons A, D, F and
/// clusters B, C, E of size `t - 2`. Labels mark A, B, E honest.
pub fn gm_impossibility_instance(t: usize, x: f64) -> Result<Construction> {
    if t < 5 {
        return Err(Error::InvalidParams(format!("geometric median counterexample needs t >= 5, got {t}")));
    }
    if !x.is_finite() {
        return Err(Error::InvalidParams("x must be finite".into()));
    }
    let mut pts = Vec::with_capacity(3 * t - 3);
    let a = repeat(&[0.0, 0.0], 1, &mut pts);
    let b = repeat(&[1.0, 1.0], t - 2, &mut pts);
    let c = repeat(&[3.0, 1.0], t - 2, &mut pts);
    let d = repeat(&[4.0, 0.0], 1, &mut pts);
    let e = repeat(&[2.0, 0.0], t - 2, &mut pts);
    let f = repeat(&[2.0, x], 1, &mut pts);

    let abe = [a, b.clone(), e.clone()].concat();
    let ecd = [e, c.clone(), d].concat();
    let bcf = [b, c, f].concat();
    let designations = vec![
        designation("A+B+E", abe.clone(), &pts, 1.0),
        designation("E+C+D", ecd, &pts, 1.0),
        designation("B+C+F", bcf, &pts, x / 2.0),
    ];
    Ok(Construction {
        points: labelled(pts, &abe)?,
        t,
        designations,
    })
}

/// Convex-validity counterexample with `n = 3t + 1`: `t + 1` points at the
/// origin, `t` at (1,0) and `t` at (0,1). The origin and (1,0) clusters are
/// labelled honest.
pub fn gm_convex_violation_instance(t: usize) -> Result<Construction> {
    if t < 2 {
        return Err(Error::InvalidParams(format!("convex counterexample needs t >= 2, got {t}")));
    }
    let mut pts = Vec::with_capacity(3 * t + 1);
    let origin = repeat(&[0.0, 0.0], t + 1, &mut pts);
    let right = repeat(&[1.0, 0.0], t, &mut pts);
    repeat(&[0.0, 1.0], t, &mut pts);
    let honest = [origin, right].concat();
    let designations = vec![designation("segment", honest.clone(), &pts, 0.5)];
    Ok(Construction {
        points: labelled(pts, &honest)?,
        t,
        designations,
    })
}

/// `k + 1` mutually tangent unit balls in `k` dimensions, centred on the
/// vertices of a regular simplex with edge 2.
pub fn tangent_unit_balls(k: usize) -> Result<CandidateBalls> {
    if k < 2 {
        return Err(Error::InvalidParams(format!("tangent balls need k >= 2, got {k}")));
    }
    // Helmert basis of the complement of (1,...,1) in R^{k+1}.
    let coord = |vertex: usize, j: usize| -> f64 {
        let j1 = j + 1;
        let norm = ((j1 * (j1 + 1)) as f64).sqrt();
        if vertex < j1 {
            1.0 / norm
        } else if vertex == j1 {
            -(j1 as f64) / norm
        } else {
            0.0
        }
    };
    let scale = std::f64::consts::SQRT_2;
    let balls = (0..=k)
        .map(|v| Ball::new((0..k).map(|j| scale * coord(v, j)).collect(), 1.0))
        .collect::<Result<Vec<_>>>()?;
    CandidateBalls::from_balls(balls)
}

fn uniform_in_ball<R: Rng + ?Sized>(d: usize, radius: f64, rng: &mut R) -> Vec<f64> {
    let dir = unit_vector(d, rng);
    let r = radius * rng.random::<f64>().powf(1.0 / d as f64);
    linalg::scale(&dir, r)
}

/// Seeded instance with `n - t` honest points uniform in a ball of radius
/// `spread` around the origin and `t` Byzantine points placed by `strategy`.
/// Points are shuffled; labels record the ground truth.
pub fn random_instance(n: usize, t: usize, d: usize, spread: f64, seed: u64, strategy: Strategy) -> Result<PointSet> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidParams(format!("need n >= 1 and d >= 1, got n={n}, d={d}")));
    }
    if t >= n {
        return Err(Error::InvalidParams(format!("need t < n, got n={n}, t={t}")));
    }
    if !(spread.is_finite() && spread > 0.0) {
        return Err(Error::InvalidParams(format!("spread must be positive, got {spread}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let honest: Vec<Vec<f64>> = (0..n - t).map(|_| uniform_in_ball(d, spread, &mut rng)).collect();
    let byz = match strategy {
        Strategy::UniformFar => (0..t)
            .map(|_| linalg::scale(&unit_vector(d, &mut rng), spread * rng.random_range(2.0..5.0)))
            .collect(),
        Strategy::ClusterCollusion => {
            let ball = meb(&PointSet::new(honest.clone())?)?;
            let spot = linalg::axpy(&ball.center, 1.5 * ball.radius.max(spread * 1e-3), &unit_vector(d, &mut rng));
            vec![spot; t]
        }
        Strategy::Search { rule, starts } => search_attack(&honest, t, spread, rule, starts, &mut rng)?,
    };

    let mut tagged: Vec<(Vec<f64>, Label)> = honest
        .into_iter()
        .map(|p| (p, Label::Honest))
        .chain(byz.into_iter().map(|p| (p, Label::Byzantine)))
        .collect();
    tagged.shuffle(&mut rng);
    let (points, labels) = tagged.into_iter().unzip();
    PointSet::with_labels(points, labels)
}

const SEARCH_PASSES: usize = 16;

/// Random multi-start followed by coordinate descent on the Byzantine
/// coordinates, keeping the placement with the largest relaxation factor.
fn search_attack<R: Rng + ?Sized>(
    honest: &[Vec<f64>],
    t: usize,
    spread: f64,
    rule: Rule,
    starts: usize,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    if t == 0 {
        return Ok(Vec::new());
    }
    let d = honest[0].len();
    let ball = meb(&PointSet::new(honest.to_vec())?)?;
    let radius = if ball.radius > 0.0 { ball.radius } else { spread };
    let opts = AggregateOptions::default();
    let score = |byz: &[Vec<f64>]| -> f64 {
        let mut all = honest.to_vec();
        all.extend_from_slice(byz);
        let Ok(set) = PointSet::new(all) else { return f64::NEG_INFINITY };
        match aggregate_with(rule, &set, t, &opts) {
            Ok(out) => linalg::dist(&out.output, &ball.center) / radius,
            Err(_) => f64::NEG_INFINITY,
        }
    };

    let mut best: (Vec<Vec<f64>>, f64) = (Vec::new(), f64::NEG_INFINITY);
    for _ in 0..starts.max(1) {
        let byz: Vec<Vec<f64>> = (0..t)
            .map(|_| linalg::axpy(&ball.center, 1.0, &uniform_in_ball(d, 3.0 * radius, rng)))
            .collect();
        let s = score(&byz);
        if s > best.1 {
            best = (byz, s);
        }
    }

    let (mut byz, mut current) = best;
    let mut step = 0.5 * radius;
    let mut passes = 0;
    while step > 1e-3 * radius {
        let mut improved = false;
        passes += 1;
        for i in 0..t {
            for j in 0..d {
                for sign in [1.0, -1.0] {
                    let old = byz[i][j];
                    byz[i][j] = old + sign * step;
                    let s = score(&byz);
                    if s > current + 1e-9 * current.abs() {
                        current = s;
                        improved = true;
                    } else {
                        byz[i][j] = old;
                    }
                }
            }
        }
        if !improved || passes == SEARCH_PASSES {
            step *= 0.5;
            passes = 0;
        }
    }
    Ok(byz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aggregate::medoid;
    use approx::assert_abs_diff_eq;

    #[test]
    fn tangent_balls_are_pairwise_tangent() {
        for k in 2..=6 {
            let cb = tangent_unit_balls(k).unwrap();
            let balls: Vec<&Ball> = cb.balls().collect();
            assert_eq!(balls.len(), k + 1);
            for i in 0..=k {
                for j in i + 1..=k {
                    assert_abs_diff_eq!(linalg::dist(&balls[i].center, &balls[j].center), 2.0, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn medoid_counterexample_layout() {
        let ce = medoid_counterexample(8, 10.0).unwrap();
        assert_eq!(ce.points.len(), 17);
        assert_eq!(ce.points.byzantine_count(), 8);
        let ecd = &ce.designations[1];
        assert_abs_diff_eq!(ecd.ball.center[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ecd.ball.center[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ecd.ball.radius, 1.0, epsilon = 1e-12);
        for des in &ce.designations {
            assert_eq!(des.indices.len(), 9);
        }
        assert!(medoid_counterexample(7, 1.0).is_err());
        assert!(medoid_counterexample(2, 1.0).is_err());
    }

    fn distance_sum(points: &PointSet, y: &[f64]) -> f64 {
        points.iter().map(|p| linalg::dist(p, y)).sum()
    }

    #[test]
    fn medoid_counterexample_needs_enough_faults() {
        // With few faults the two points at (2,0) beat the B and C clusters.
        let small = medoid_counterexample(8, 10.0).unwrap();
        let e_sum = distance_sum(&small.points, &[2.0, 0.0]);
        let b_sum = distance_sum(&small.points, &[1.0, 1.0]);
        assert_abs_diff_eq!(e_sum, 12.0 + 8.0 * 2f64.sqrt() + 10.0, epsilon = 1e-12);
        assert!(e_sum < b_sum);
        assert_eq!(medoid(&small.points).output, vec![2.0, 0.0]);
        assert_eq!(medoid(&medoid_counterexample(10, 10.0).unwrap().points).output, vec![2.0, 0.0]);

        let large = medoid_counterexample(12, 10.0).unwrap();
        let m = medoid(&large.points).output;
        assert_eq!(m, vec![1.0, 1.0]);
        assert_abs_diff_eq!(linalg::dist(&m, &large.designations[1].ball.center), 5f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn medoid_counterexample_top_ball_is_a_circumball() {
        let x = 10.0;
        let ce = medoid_counterexample(8, x).unwrap();
        let top = &ce.designations[2];
        let expected = (1.0 + (x - 1.0) * (x - 1.0)) / (2.0 * (x - 1.0));
        assert_abs_diff_eq!(top.ball.radius, expected, epsilon = 1e-9);
    }

    #[test]
    fn gm_instances_sizes() {
        let gm = gm_impossibility_instance(10, 10.0).unwrap();
        assert_eq!(gm.points.len(), 27);
        assert_abs_diff_eq!(gm.designations[0].ball.center[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(gm.designations[1].ball.center[0], 3.0, epsilon = 1e-12);
        let cv = gm_convex_violation_instance(2).unwrap();
        assert_eq!(cv.points.len(), 7);
        assert_eq!(cv.points.byzantine_count(), 2);
    }

    #[test]
    fn lower_bound_layout_d2() {
        assert!(matches!(lower_bound_construction(3, 1), Err(Error::InvalidParams(_))));
        let lb = lower_bound_construction(2, 2).unwrap();
        let s = std::f64::consts::SQRT_2;
        let unit = &lb.designations[0];
        assert_abs_diff_eq!(unit.ball.center[0], s, epsilon = 1e-9);
        assert_abs_diff_eq!(unit.ball.radius, 1.0, epsilon = 1e-9);
        assert!(unit.ball.contains(&[1.0 / s, 1.0 / s]));
    }

    #[test]
    fn lower_bound_balls_are_the_intended_mebs() {
        let lb = lower_bound_construction(3, 4).unwrap();
        assert_eq!(lb.points.len(), 4 * 4 - 3 - 1);
        let alpha = (3f64.sqrt() + 1.0) / 2f64.powf(1.5);
        assert_abs_diff_eq!(alpha, 0.9659258, epsilon = 1e-7);
        for des in &lb.designations {
            assert_abs_diff_eq!(des.ball.radius, des.stated_radius, epsilon = 1e-9);
        }
    }

    #[test]
    fn lower_bound_safe_area_is_empty_when_realisable() {
        use crate::aggregate::candidate_balls;
        use crate::validity::safe_meb_empty;
        // Values cross-checked against the grid oracle.
        for (d, t, m, expected) in [(2, 3, 1, 0.033164), (3, 4, 1, 0.020228)] {
            let lb = lower_bound_construction_with(d, t, m).unwrap();
            let (empty, value) = safe_meb_empty(&candidate_balls(&lb.points, t).unwrap()).unwrap();
            assert!(empty);
            assert_abs_diff_eq!(value, expected, epsilon = 1e-6);
        }
        let lb = lower_bound_construction_with(3, 4, 2).unwrap();
        let (empty, _) = safe_meb_empty(&candidate_balls(&lb.points, 4).unwrap()).unwrap();
        assert!(!empty);
    }

    #[test]
    fn random_instances_are_reproducible() {
        let a = random_instance(9, 3, 3, 1.0, 42, Strategy::UniformFar).unwrap();
        let b = random_instance(9, 3, 3, 1.0, 42, Strategy::UniformFar).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.byzantine_count(), 3);
        let c = random_instance(9, 3, 3, 1.0, 43, Strategy::UniformFar).unwrap();
        assert_ne!(a, c);
        let h = random_instance(5, 0, 2, 1.0, 1, Strategy::ClusterCollusion).unwrap();
        assert_eq!(h.byzantine_count(), 0);
    }

    #[test]
    fn spec_round_trips_through_json() {
        let spec = ScenarioSpec::Attack {
            n: 5,
            t: 2,
            d: 2,
            spread: 1.0,
            seed: 7,
            strategy: Strategy::Search {
                rule: Rule::Medoid,
                starts: 20,
            },
        };
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<ScenarioSpec>(&json).unwrap(), spec);
        let lb: ScenarioSpec = serde_json::from_str(r#"{"kind":"lower-bound","d":3,"t":3}"#).unwrap();
        assert_eq!(lb, ScenarioSpec::LowerBound { d: 3, t: 3 });
    }
}
