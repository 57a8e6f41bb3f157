//! Ordered point collections with optional ground-truth labels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ground-truth role of a point. Never consulted by aggregation rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Honest,
    #[serde(rename = "byz")]
    Byzantine,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Honest => "honest",
            Label::Byzantine => "byz",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "honest" | "h" => Some(Label::Honest),
            "byz" | "byzantine" | "b" => Some(Label::Byzantine),
            _ => None,
        }
    }
}

/// Lexicographic order on coordinates.
pub fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// A nonempty, uniform-dimension sequence of finite vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    points: Vec<Vec<f64>>,
    labels: Option<Vec<Label>>,
}

impl PointSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyInput)?;
        let dim = first.len();
        if dim == 0 {
            return Err(Error::InvalidParams("points must have dimension >= 1".into()));
        }
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite { index });
            }
        }
        Ok(Self {
            dim,
            points,
            labels: None,
        })
    }

    pub fn with_labels(points: Vec<Vec<f64>>, labels: Vec<Label>) -> Result<Self> {
        let mut set = Self::new(points)?;
        if labels.len() != set.len() {
            return Err(Error::InvalidParams(format!(
                "{} labels for {} points",
                labels.len(),
                set.len()
            )));
        }
        set.labels = Some(labels);
        Ok(set)
    }

    pub fn from_slices(points: &[&[f64]]) -> Result<Self> {
        Self::new(points.iter().map(|p| p.to_vec()).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.points.iter().map(|p| p.as_slice())
    }

    pub fn as_refs(&self) -> Vec<&[f64]> {
        self.iter().collect()
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    pub fn into_points(self) -> Vec<Vec<f64>> {
        self.points
    }

    pub fn byzantine_count(&self) -> usize {
        self.labels
            .as_ref()
            .map_or(0, |l| l.iter().filter(|&&x| x == Label::Byzantine).count())
    }

    /// Indices labelled honest, or `None` when the set is unlabelled.
    pub fn honest_indices(&self) -> Option<Vec<usize>> {
        self.labels.as_ref().map(|l| {
            l.iter()
                .enumerate()
                .filter(|(_, &x)| x == Label::Honest)
                .map(|(i, _)| i)
                .collect()
        })
    }

    /// The honest sub-collection. Errors if unlabelled or if no point is honest.
    pub fn honest(&self) -> Result<PointSet> {
        let idx = self
            .honest_indices()
            .ok_or_else(|| Error::InvalidParams("point set carries no labels".into()))?;
        self.subset(&idx)
    }

    /// Unlabelled subset in the given index order.
    pub fn subset(&self, indices: &[usize]) -> Result<PointSet> {
        if indices.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(PointSet {
            dim: self.dim,
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
            labels: None,
        })
    }

    pub fn ensure_dim(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(())
    }

    pub fn mean(&self) -> Vec<f64> {
        crate::linalg::mean(self.iter())
    }

    /// Applies `f` to every point, keeping labels.
    pub fn map_points(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Result<PointSet> {
        let points = self.iter().map(f).collect();
        match &self.labels {
            Some(l) => PointSet::with_labels(points, l.clone()),
            None => PointSet::new(points),
        }
    }

    /// Indices sorted by point coordinates (lexicographic), then by index.
    pub fn canonical_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| lex_cmp(&self.points[a], &self.points[b]).then(a.cmp(&b)));
        order
    }

    /// Reorders points (and labels) so that new position `i` holds old point `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> PointSet {
        PointSet {
            dim: self.dim,
            points: perm.iter().map(|&i| self.points[i].clone()).collect(),
            labels: self
                .labels
                .as_ref()
                .map(|l| perm.iter().map(|&i| l[i]).collect()),
        }
    }
}
