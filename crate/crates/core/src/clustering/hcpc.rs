//! Hierarchical clustering on principal components.
//!
//! The embedded cloud is centered and projected on its leading principal
//! axes, Ward HAC is cut at `k`, and the partition is optionally consolidated
//! by k-means started from the cut's cluster means.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::hac::{cut_tree, linkage_tree, Linkage};
use super::{compact_labels, finish, prepare, ClusteringResult, Method};
use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::geometry::embedded_mean;
use crate::lloyd;
use crate::points::PointSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HcpcOptions {
    pub k: usize,
    /// Principal components kept; all of them when `None`.
    pub n_components: Option<usize>,
    pub consolidate: bool,
    pub standardize: bool,
    /// Recorded in the result only; the method is deterministic.
    pub seed: u64,
    pub max_iters: usize,
}

impl HcpcOptions {
    pub fn new(k: usize) -> Self {
        HcpcOptions {
            k,
            n_components: None,
            consolidate: true,
            standardize: false,
            seed: 0,
            max_iters: 200,
        }
    }
}

/// Principal component scores of `data`, leading `m` axes.
pub(crate) fn pca_scores(data: &[Vec<f64>], m: usize) -> Result<Vec<Vec<f64>>> {
    let n = data.len();
    let dim = data[0].len();
    let mean = embedded_mean(data, None)?;
    let centered = DMatrix::from_fn(n, dim, |i, j| data[i][j] - mean[j]);
    let cov = centered.transpose() * &centered / n as f64;
    if cov.trace() <= 0.0 {
        return Err(Error::invalid("the embedded points have zero variance"));
    }
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let axes = DMatrix::from_fn(dim, m, |i, c| eig.eigenvectors[(i, order[c])]);
    let scores = centered * axes;
    Ok(scores.row_iter().map(|r| r.iter().copied().collect()).collect())
}

pub fn hcpc(points: &PointSet, g: &Generator, opts: &HcpcOptions) -> Result<ClusteringResult> {
    let prepared = prepare(points, g, opts.k, opts.standardize)?;
    let dim = points.dim();
    let m = opts.n_components.unwrap_or(dim);
    if m == 0 || m > dim {
        return Err(Error::invalid(format!(
            "n_components must be between 1 and {dim}, got {m}"
        )));
    }
    let scores = pca_scores(&prepared.work, m)?;
    let merges = linkage_tree(&scores, Linkage::Ward);
    let mut labels = cut_tree(points.len(), &merges, opts.k);
    let mut iterations = merges.len();
    if opts.consolidate {
        let k = labels.iter().max().map_or(0, |x| x + 1);
        let mut members: Vec<Vec<Vec<f64>>> = vec![Vec::new(); k];
        for (s, &l) in scores.iter().zip(&labels) {
            members[l].push(s.clone());
        }
        let init = members
            .iter()
            .map(|m| embedded_mean(m, None))
            .collect::<Result<Vec<_>>>()?;
        let run = lloyd::run(scores, init, opts.max_iters, 0.0);
        iterations += run.iterations;
        labels = compact_labels(&run.state.assignments);
    }
    finish(Method::Hcpc, g, points, labels, Some(opts.seed), iterations)
}
