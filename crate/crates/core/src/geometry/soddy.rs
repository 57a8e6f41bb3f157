//! Bend arithmetic for k+1 mutually tangent balls in k dimensions.
//!
//! With S = sum of bends and Q = sum of squared bends, the two balls tangent
//! to all k+1 given ones have bends
//! `(S +- sqrt(k * (S^2 - (k-1) * Q))) / (k - 1)`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SoddyRoot {
    /// The ball nested in the gap between the given balls.
    Inner,
    /// The other root (an enclosing ball when negative).
    Outer,
}

/// Bend of the inner ball tangent to `bends.len() == k + 1` mutually tangent balls.
pub fn soddy_inner_bend(bends: &[f64], k: usize) -> Result<f64> {
    soddy_bend(bends, k, SoddyRoot::Inner)
}

/// For `k == 1` the relation is linear and both roots coincide at
/// `-b1*b2/(b1+b2)`; callers only use `k >= 2` for geometry.
pub fn soddy_bend(bends: &[f64], k: usize, root: SoddyRoot) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be >= 1".into()));
    }
    if bends.len() != k + 1 {
        return Err(Error::InvalidParams(format!(
            "expected {} bends for k={k}, got {}",
            k + 1,
            bends.len()
        )));
    }
    if bends.iter().any(|&b| !(b > 0.0 && b.is_finite())) {
        return Err(Error::InvalidParams("bends must be positive and finite".into()));
    }
    let s: f64 = bends.iter().sum();
    let q: f64 = bends.iter().map(|b| b * b).sum();
    let kf = k as f64;
    if k == 1 {
        return Ok((q - s * s) / (2.0 * s));
    }
    let disc = kf * (s * s - (kf - 1.0) * q);
    if disc < 0.0 {
        return Err(Error::InvalidTangentConfiguration { discriminant: disc });
    }
    let sign = match root {
        SoddyRoot::Inner => 1.0,
        SoddyRoot::Outer => -1.0,
    };
    Ok((s + sign * disc.sqrt()) / (kf - 1.0))
}
