//! Minimum enclosing ball by move-to-front Welzl recursion with pivoting.
//!
//! The support set is maintained as an incremental Gram-Schmidt basis so
//! each push costs O(d * |support|) and near-degenerate pushes are refused
//! instead of producing a blown-up circumsphere.

use super::Ball;
use crate::error::Result;
use crate::linalg;
use crate::pointset::PointSet;

/// Pushes whose orthogonal residual is below this fraction of the current
/// squared radius are treated as affinely dependent.
const PUSH_EPS: f64 = 1e-26;

pub fn meb(points: &PointSet) -> Result<Ball> {
    Ok(meb_of(&points.as_refs()))
}

/// Minimum enclosing ball of a nonempty slice of same-dimension points.
pub fn meb_of(points: &[&[f64]]) -> Ball {
    assert!(!points.is_empty(), "meb_of requires at least one point");
    let dim = points[0].len();

    let mut unique: Vec<&[f64]> = points.to_vec();
    unique.sort_by(|a, b| {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    unique.dedup_by(|a, b| a == b);

    let mut solver = Solver {
        pts: unique,
        order: Vec::new(),
        support_end: 0,
        basis: Basis::new(dim),
    };
    solver.order = (0..solver.pts.len()).collect();
    solver.pivot();

    let center = solver.basis.current_c.clone();
    let mut radius = solver.basis.current_r2.max(0.0).sqrt();
    // Report a radius that actually contains every input point.
    for p in points {
        radius = radius.max(linalg::dist(p, &center));
    }
    Ball { center, radius }
}

struct Solver<'a> {
    pts: Vec<&'a [f64]>,
    order: Vec<usize>,
    support_end: usize,
    basis: Basis,
}

impl<'a> Solver<'a> {
    fn point(&self, pos: usize) -> &'a [f64] {
        self.pts[self.order[pos]]
    }

    fn move_to_front(&mut self, j: usize) {
        if self.support_end <= j {
            self.support_end += 1;
        }
        self.order[..=j].rotate_right(1);
    }

    fn mtf(&mut self, end: usize) {
        self.support_end = 0;
        if self.basis.m == self.basis.dim + 1 {
            return;
        }
        let mut k = 0;
        while k < end {
            let j = k;
            k += 1;
            let p = self.point(j);
            if self.basis.excess(p) > 0.0 && self.basis.push(p) {
                self.mtf(j);
                self.basis.pop();
                self.move_to_front(j);
            }
        }
    }

    fn pivot(&mut self) {
        let n = self.order.len();
        let mut t = 1.min(n);
        self.mtf(t);
        loop {
            let mut max_e = 0.0;
            let mut pivot = None;
            for k in t..n {
                let e = self.basis.excess(self.point(k));
                if e > max_e {
                    max_e = e;
                    pivot = Some(k);
                }
            }
            let Some(pivot) = pivot else { break };
            t = self.support_end;
            if t == pivot {
                t += 1;
            }
            let old_r2 = self.basis.current_r2;
            let p = self.point(pivot);
            self.basis.push(p);
            self.mtf(self.support_end);
            self.basis.pop();
            // `t` tracks an element, which shifts right when pivot moves to front.
            if t < pivot {
                t += 1;
            }
            self.move_to_front(pivot);
            if self.basis.current_r2 <= old_r2 {
                break;
            }
        }
    }
}

/// Incremental circumsphere of up to d+1 affinely independent points.
struct Basis {
    dim: usize,
    m: usize,
    q0: Vec<f64>,
    z: Vec<f64>,
    f: Vec<f64>,
    v: Vec<Vec<f64>>,
    a: Vec<Vec<f64>>,
    c: Vec<Vec<f64>>,
    r2: Vec<f64>,
    current_c: Vec<f64>,
    current_r2: f64,
}

impl Basis {
    fn new(dim: usize) -> Self {
        let rows = dim + 1;
        Self {
            dim,
            m: 0,
            q0: vec![0.0; dim],
            z: vec![0.0; rows],
            f: vec![0.0; rows],
            v: vec![vec![0.0; dim]; rows],
            a: vec![vec![0.0; rows]; rows],
            c: vec![vec![0.0; dim]; rows],
            r2: vec![0.0; rows],
            current_c: vec![0.0; dim],
            current_r2: -1.0,
        }
    }

    fn excess(&self, p: &[f64]) -> f64 {
        linalg::dist2(p, &self.current_c) - self.current_r2
    }

    fn push(&mut self, p: &[f64]) -> bool {
        let m = self.m;
        if m == 0 {
            self.q0.copy_from_slice(p);
            self.c[0].copy_from_slice(p);
            self.r2[0] = 0.0;
        } else {
            for ((v, x), q) in self.v[m].iter_mut().zip(p).zip(&self.q0) {
                *v = x - q;
            }
            for i in 1..m {
                let proj = linalg::dot(&self.v[i], &self.v[m]);
                self.a[m][i] = proj * 2.0 / self.z[i];
            }
            for i in 1..m {
                let coef = self.a[m][i];
                for j in 0..self.dim {
                    self.v[m][j] -= coef * self.v[i][j];
                }
            }
            self.z[m] = 2.0 * linalg::norm2(&self.v[m]);
            if self.z[m] < PUSH_EPS * self.current_r2 || self.z[m] == 0.0 {
                return false;
            }
            let e = linalg::dist2(p, &self.c[m - 1]) - self.r2[m - 1];
            self.f[m] = e / self.z[m];
            for i in 0..self.dim {
                self.c[m][i] = self.c[m - 1][i] + self.f[m] * self.v[m][i];
            }
            self.r2[m] = self.r2[m - 1] + e * self.f[m] / 2.0;
        }
        self.current_c.copy_from_slice(&self.c[m]);
        self.current_r2 = self.r2[m];
        self.m += 1;
        true
    }

    fn pop(&mut self) {
        self.m -= 1;
    }
}
