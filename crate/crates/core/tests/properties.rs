use mebval::aggregate::{aggregate, candidate_balls, solve_minmax, Rule};
use mebval::geometry::{diameter, dist_to_ball, dist_to_hull, meb, soddy_inner_bend};
use mebval::linalg;
use mebval::oracle::meb_bruteforce;
use mebval::validity::{check_relaxed_convex, safe_meb_value, theoretical_bound};
use mebval::PointSet;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

fn point_set(max_n: usize, max_d: usize) -> impl Strategy<Value = PointSet> {
    (1..=max_d, 1..=max_n).prop_flat_map(|(d, n)| {
        prop::collection::vec(prop::collection::vec(-10.0f64..10.0, d), n)
            .prop_map(|pts| PointSet::new(pts).unwrap())
    })
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    linalg::dist(a, b) <= tol
}

/// Product of random Householder reflections plus a shift.
struct Isometry {
    matrix: Vec<Vec<f64>>,
    shift: Vec<f64>,
}

impl Isometry {
    fn random(d: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut matrix: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| f64::from(i == j)).collect()).collect();
        for _ in 0..d {
            let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
            let vv = linalg::norm2(&v);
            if vv < 1e-12 {
                continue;
            }
            for row in matrix.iter_mut() {
                let s = 2.0 * linalg::dot(row, &v) / vv;
                for (x, vi) in row.iter_mut().zip(&v) {
                    *x -= s * vi;
                }
            }
        }
        let shift = (0..d).map(|_| rng.random_range(-5.0..5.0)).collect();
        Self { matrix, shift }
    }

    fn apply(&self, p: &[f64]) -> Vec<f64> {
        self.matrix
            .iter()
            .zip(&self.shift)
            .map(|(row, s)| linalg::dot(row, p) + s)
            .collect()
    }
}

fn shuffled(points: &PointSet, seed: u64) -> PointSet {
    let mut perm: Vec<usize> = (0..points.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..perm.len()).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    points.permuted(&perm)
}

/// Whether `rule` has a unique choice on `p`; isometries may reorder ties.
fn unambiguous(rule: Rule, p: &PointSet, t: usize) -> bool {
    use itertools::Itertools;
    let scale = 1.0 + diameter(p);
    match rule {
        Rule::Medoid => {
            let mut sums: Vec<f64> = p.iter().map(|a| p.iter().map(|b| linalg::dist(a, b)).sum()).collect();
            sums.sort_by(f64::total_cmp);
            sums.len() < 2 || sums[1] - sums[0] > 1e-9 * scale * p.len() as f64
        }
        Rule::Mda => {
            let diams: Vec<f64> = (0..p.len())
                .combinations(p.len() - t)
                .map(|s| s.iter().tuple_combinations().map(|(&a, &b)| linalg::dist(p.point(a), p.point(b))).fold(0.0, f64::max))
                .collect();
            let min = diams.iter().copied().fold(f64::INFINITY, f64::min);
            diams.iter().filter(|&&d| d <= min + 1e-9 * scale).count() == 1
        }
        _ => true,
    }
}

fn rule_tol(rule: Rule, scale: f64) -> f64 {
    match rule {
        Rule::GeometricMedian => 1e-6 * scale,
        Rule::MinmaxMeb => 1e-5 * scale,
        _ => 1e-9 * scale,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn meb_contains_every_point(p in point_set(30, 6)) {
        let b = meb(&p).unwrap();
        for q in p.iter() {
            prop_assert!(linalg::dist(q, &b.center) <= b.radius + 1e-9 * (1.0 + b.radius));
        }
    }

    #[test]
    fn meb_matches_support_enumeration(p in point_set(8, 3)) {
        let b = meb(&p).unwrap();
        let oracle = meb_bruteforce(&p).unwrap();
        prop_assert!((b.radius - oracle.radius).abs() <= 1e-9 * (1.0 + oracle.radius));
    }

    #[test]
    fn meb_is_permutation_invariant(p in point_set(20, 5), seed in any::<u64>()) {
        let a = meb(&p).unwrap();
        let b = meb(&shuffled(&p, seed)).unwrap();
        prop_assert!((a.radius - b.radius).abs() <= 1e-9 * (1.0 + a.radius));
        prop_assert!(close(&a.center, &b.center, 1e-9 * (1.0 + a.radius)));
    }

    #[test]
    fn meb_is_isometry_equivariant(p in point_set(20, 5), seed in any::<u64>()) {
        let iso = Isometry::random(p.dim(), seed);
        let a = meb(&p).unwrap();
        let b = meb(&p.map_points(|q| iso.apply(q)).unwrap()).unwrap();
        let tol = 1e-9 * (1.0 + a.radius + linalg::norm(&a.center));
        prop_assert!((a.radius - b.radius).abs() <= tol);
        prop_assert!(close(&iso.apply(&a.center), &b.center, 1e-8 * (1.0 + a.radius)));
    }

    #[test]
    fn radius_and_diameter_sandwich(p in point_set(25, 5)) {
        let r = meb(&p).unwrap().radius;
        let diam = diameter(&p);
        prop_assert!(r <= diam + 1e-12);
        prop_assert!(diam <= 2.0 * r + 1e-9 * (1.0 + r));
    }

    #[test]
    fn hull_lies_inside_ball(p in point_set(12, 4), y in prop::collection::vec(-20.0f64..20.0, 4)) {
        let y = &y[..p.dim()];
        let to_hull = dist_to_hull(y, &p).unwrap();
        prop_assert!(to_hull >= 0.0);
        let to_ball = dist_to_ball(y, &meb(&p).unwrap()).unwrap();
        prop_assert!(to_ball <= to_hull + 1e-6);
        let nearest = p.iter().map(|q| linalg::dist(q, y)).fold(f64::INFINITY, f64::min);
        prop_assert!(to_hull <= nearest + 1e-9);
        prop_assert!(dist_to_hull(p.point(0), &p).unwrap() <= 1e-7);
    }

    #[test]
    fn inner_bend_grows_with_input_bends(b in 0.1f64..10.0, scale in 1.01f64..3.0, k in 2usize..8) {
        let small = soddy_inner_bend(&vec![b; k + 1], k).unwrap();
        let large = soddy_inner_bend(&vec![b * scale; k + 1], k).unwrap();
        prop_assert!(large > small);
    }

    #[test]
    fn rules_are_permutation_invariant(p in point_set(9, 3), t in 0usize..3, seed in any::<u64>()) {
        prop_assume!(p.len() > 2 * t);
        let q = shuffled(&p, seed);
        let scale = 1.0 + diameter(&p);
        for rule in Rule::ALL {
            let a = aggregate(rule, &p, t).unwrap();
            let b = aggregate(rule, &q, t).unwrap();
            prop_assert!(close(&a.output, &b.output, rule_tol(rule, scale)), "{rule}: {:?} vs {:?}", a.output, b.output);
        }
    }

    #[test]
    fn rules_are_isometry_and_scale_equivariant(
        p in point_set(9, 3),
        t in 0usize..3,
        seed in any::<u64>(),
        alpha in 0.1f64..10.0,
    ) {
        prop_assume!(p.len() > 2 * t);
        let iso = Isometry::random(p.dim(), seed);
        let moved = p.map_points(|q| iso.apply(q)).unwrap();
        let scaled = p.map_points(|q| linalg::scale(q, alpha)).unwrap();
        let scale = 1.0 + diameter(&p) + p.iter().map(linalg::norm).fold(0.0, f64::max);
        for rule in Rule::ALL {
            let base = aggregate(rule, &p, t).unwrap().output;
            let s = aggregate(rule, &scaled, t).unwrap().output;
            prop_assert!(close(&s, &linalg::scale(&base, alpha), alpha * rule_tol(rule, scale)), "{rule} scale");
            if rule != Rule::CoordwiseMedian && unambiguous(rule, &p, t) {
                let r = aggregate(rule, &moved, t).unwrap().output;
                prop_assert!(close(&r, &iso.apply(&base), rule_tol(rule, scale)), "{rule}: {:?} vs {:?}", r, iso.apply(&base));
            }
        }
    }

    #[test]
    fn minmax_beats_random_probes(p in point_set(8, 3), t in 1usize..3, seed in any::<u64>()) {
        prop_assume!(p.len() > 2 * t);
        let balls = candidate_balls(&p, t).unwrap();
        prop_assume!(balls.balls().all(|b| b.radius > 1e-6));
        let (y, value) = solve_minmax(&balls).unwrap();
        let g = |z: &[f64]| balls.balls().map(|b| linalg::dist(z, &b.center) / b.radius - 1.0).fold(f64::NEG_INFINITY, f64::max);
        prop_assert!((g(&y) - value).abs() <= 1e-12 * (1.0 + value.abs()));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = diameter(&p);
        for _ in 0..200 {
            let step = scale * 10f64.powf(rng.random_range(-6.0..0.0));
            let z: Vec<f64> = y.iter().map(|c| c + step * rng.random_range(-1.0..1.0)).collect();
            prop_assert!(value <= g(&z) + 1e-9);
        }
        if value <= 0.0 {
            prop_assert!(safe_meb_value(&y, &balls).unwrap() <= 1e-9);
        }
        let bound = theoretical_bound(Rule::MinmaxMeb, p.len(), t, p.dim()).unwrap();
        prop_assert!(1.0 + value <= bound + 1e-9);
    }

    #[test]
    fn geometric_median_is_stationary(p in point_set(15, 3), seed in any::<u64>()) {
        prop_assume!(p.len() >= 3);
        let out = aggregate(Rule::GeometricMedian, &p, 0).unwrap().output;
        let nearest = p.iter().map(|q| linalg::dist(q, &out)).fold(f64::INFINITY, f64::min);
        prop_assume!(nearest > 1e-3);
        let mut grad = vec![0.0; p.dim()];
        for q in p.iter() {
            let diff = linalg::sub(&out, q);
            grad = linalg::axpy(&grad, 1.0 / linalg::norm(&diff), &diff);
        }
        prop_assert!(linalg::norm(&grad) <= 1e-6 * p.len() as f64);
        // Finite-difference cross-check of optimality.
        let cost = |z: &[f64]| p.iter().map(|q| linalg::dist(q, z)).sum::<f64>();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let z: Vec<f64> = out.iter().map(|c| c + 1e-4 * rng.random_range(-1.0..1.0)).collect();
            prop_assert!(cost(&out) <= cost(&z) + 1e-9);
        }
    }

    #[test]
    fn relaxed_convex_is_attained_at_a_vertex(p in point_set(10, 3), y in prop::collection::vec(-20.0f64..20.0, 3), seed in any::<u64>()) {
        let y = &y[..p.dim()];
        let achieved = check_relaxed_convex(y, &p, 0.0).unwrap().achieved;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sampled = 0.0f64;
        for _ in 0..2000 {
            let w: Vec<f64> = (0..p.len()).map(|_| Exp1.sample(&mut rng)).collect::<Vec<f64>>();
            let sharp: Vec<f64> = w.iter().map(|x: &f64| x.powi(8)).collect();
            let total: f64 = sharp.iter().sum();
            let mut z = vec![0.0; p.dim()];
            for (q, wi) in p.iter().zip(&sharp) {
                z = linalg::axpy(&z, wi / total, q);
            }
            sampled = sampled.max(linalg::dist(&z, y));
        }
        for q in p.iter() {
            sampled = sampled.max(linalg::dist(q, y));
        }
        prop_assert!(sampled <= achieved + 1e-9);
        prop_assert!((achieved - sampled).abs() <= 1e-4);
    }
}
