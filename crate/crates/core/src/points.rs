use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::Generator;

/// `N` points in `K` dimensions with optional integer ground-truth labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    points: Vec<Vec<f64>>,
    labels: Option<Vec<usize>>,
}

impl PointSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(first) = points.first() {
            let dim = first.len();
            if dim == 0 {
                return Err(Error::invalid("points must have at least one coordinate"));
            }
            if let Some(row) = points.iter().position(|p| p.len() != dim) {
                return Err(Error::invalid(format!(
                    "point {row} has {} coordinates, expected {dim}",
                    points[row].len()
                )));
            }
            if let Some(row) = points.iter().position(|p| p.iter().any(|v| !v.is_finite())) {
                return Err(Error::invalid(format!("point {row} has a non-finite coordinate")));
            }
        }
        Ok(PointSet {
            points,
            labels: None,
        })
    }

    pub fn with_labels(points: Vec<Vec<f64>>, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != points.len() {
            return Err(Error::invalid(format!(
                "{} labels for {} points",
                labels.len(),
                points.len()
            )));
        }
        let mut set = PointSet::new(points)?;
        set.labels = Some(labels);
        Ok(set)
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of coordinates per point (0 for an empty set).
    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    /// Embeds every point; domain errors name the offending row.
    pub fn embed(&self, g: &Generator) -> Result<Vec<Vec<f64>>> {
        g.embed_all(&self.points)
    }

    /// Number of pairwise distinct points (exact coordinate equality).
    pub fn distinct_count(&self) -> usize {
        distinct_count(&self.points)
    }

    /// Coordinatewise `(min, max)` over all points.
    pub fn bounding_box(&self) -> Option<Vec<(f64, f64)>> {
        let first = self.points.first()?;
        let mut bb: Vec<(f64, f64)> = first.iter().map(|&v| (v, v)).collect();
        for p in &self.points[1..] {
            for (b, &v) in bb.iter_mut().zip(p) {
                b.0 = b.0.min(v);
                b.1 = b.1.max(v);
            }
        }
        Some(bb)
    }
}

pub(crate) fn distinct_count(points: &[Vec<f64>]) -> usize {
    let mut keys: Vec<Vec<u64>> = points
        .iter()
        // +0.0 and -0.0 are the same point
        .map(|p| p.iter().map(|v| (v + 0.0).to_bits()).collect())
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys.len()
}
