//! Geometric median by Weiszfeld iteration with the Vardi-Zhang correction
//! for iterates that land on a data point.

use std::collections::HashMap;

use super::{AggregateResult, Rule};
use crate::error::{Error, Result};
use crate::linalg;
use crate::pointset::PointSet;

#[derive(Debug, Clone, Copy)]
pub struct MedianOptions {
    /// Stop once an iterate moves less than `tol` times the data scale.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for MedianOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 100_000,
        }
    }
}

pub fn geometric_median(points: &PointSet) -> Result<AggregateResult> {
    geometric_median_with(points, MedianOptions::default())
}

pub fn geometric_median_with(points: &PointSet, opts: MedianOptions) -> Result<AggregateResult> {
    let (sites, weights) = group_duplicates(points);
    let output = if sites.len() == 1 {
        sites[0].clone()
    } else if let Some(line) = collinear_frame(&sites) {
        line.weighted_median(&sites, &weights)
    } else {
        weiszfeld(&sites, &weights, opts)?
    };
    Ok(AggregateResult::plain(Rule::GeometricMedian, output))
}

/// Distinct points with their multiplicities, in first-seen order.
fn group_duplicates(points: &PointSet) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut sites = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    for p in points.iter() {
        // +0.0 and -0.0 are the same site.
        let key: Vec<u64> = p.iter().map(|x| (x + 0.0).to_bits()).collect();
        match index.get(&key) {
            Some(&i) => weights[i] += 1.0,
            None => {
                index.insert(key, sites.len());
                sites.push(p.to_vec());
                weights.push(1.0);
            }
        }
    }
    (sites, weights)
}

struct Line {
    origin: Vec<f64>,
    dir: Vec<f64>,
}

impl Line {
    /// 1-D weighted median along the line; an exact half/half split takes the midpoint.
    fn weighted_median(&self, sites: &[Vec<f64>], weights: &[f64]) -> Vec<f64> {
        let mut proj: Vec<(f64, f64)> = sites
            .iter()
            .zip(weights)
            .map(|(s, &w)| (linalg::dot(&linalg::sub(s, &self.origin), &self.dir), w))
            .collect();
        proj.sort_by(|a, b| a.0.total_cmp(&b.0));
        let half = weights.iter().sum::<f64>() / 2.0;
        let mut acc = 0.0;
        let mut s = proj[0].0;
        for (k, &(x, w)) in proj.iter().enumerate() {
            acc += w;
            if acc > half {
                s = x;
                break;
            }
            if acc == half {
                s = 0.5 * (x + proj[k + 1].0);
                break;
            }
        }
        linalg::axpy(&self.origin, s, &self.dir)
    }
}

/// A frame for the sites when they all lie on one line (up to rounding).
fn collinear_frame(sites: &[Vec<f64>]) -> Option<Line> {
    let origin = sites[0].clone();
    let far = sites
        .iter()
        .max_by(|a, b| linalg::dist2(a, &origin).total_cmp(&linalg::dist2(b, &origin)))?;
    let len = linalg::dist(far, &origin);
    let dir = linalg::scale(&linalg::sub(far, &origin), 1.0 / len);
    for s in sites {
        let v = linalg::sub(s, &origin);
        let along = linalg::dot(&v, &dir);
        let off = linalg::norm(&linalg::axpy(&v, -along, &dir));
        if off > 1e-12 * len {
            return None;
        }
    }
    Some(Line { origin, dir })
}

fn weiszfeld(sites: &[Vec<f64>], weights: &[f64], opts: MedianOptions) -> Result<Vec<f64>> {
    let dim = sites[0].len();
    let total: f64 = weights.iter().sum();
    let mut y = vec![0.0; dim];
    for (s, &w) in sites.iter().zip(weights) {
        for (yi, si) in y.iter_mut().zip(s) {
            *yi += w * si / total;
        }
    }
    let scale = sites
        .iter()
        .map(|s| linalg::dist(s, &y))
        .fold(0.0, f64::max);
    let hit = 1e-14 * scale;

    let mut num = vec![0.0; dim];
    let mut pull = vec![0.0; dim];
    for _ in 0..opts.max_iter {
        num.iter_mut().for_each(|v| *v = 0.0);
        pull.iter_mut().for_each(|v| *v = 0.0);
        let mut den = 0.0;
        let mut coincident = 0.0;
        for (s, &w) in sites.iter().zip(weights) {
            let d = linalg::dist(s, &y);
            if d <= hit {
                coincident += w;
                continue;
            }
            let c = w / d;
            den += c;
            for k in 0..dim {
                num[k] += c * s[k];
                pull[k] += c * (s[k] - y[k]);
            }
        }
        let next: Vec<f64> = if coincident > 0.0 {
            let r = linalg::norm(&pull);
            if r <= coincident {
                // Subgradient optimality at the data point.
                return Ok(y);
            }
            let beta = coincident / r;
            (0..dim)
                .map(|k| (1.0 - beta) * num[k] / den + beta * y[k])
                .collect()
        } else {
            num.iter().map(|v| v / den).collect()
        };
        let moved = linalg::dist(&next, &y);
        y = next;
        if moved <= opts.tol * scale {
            return Ok(y);
        }
    }
    Err(Error::NonConvergence {
        solver: "geometric_median",
        iterations: opts.max_iter,
    })
}
