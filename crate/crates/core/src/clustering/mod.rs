//! Clustering under a Riemann-Bregman metric.
//!
//! Every method follows the same recipe: embed the points with `h`, run the
//! Euclidean algorithm on the embedded cloud, and pull the partition back.
//! Cluster centers are always the Riemann-Bregman centroids of the members,
//! `H(mean of h(x))`, whatever the method.

mod em;
mod hac;
mod hcpc;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::geometry::{embedded_mean, squared_euclidean};
use crate::lloyd;
use crate::points::PointSet;

pub use em::{em_gmm, EmOptions, GaussianMixtureModel};
pub use hac::{hac, linkage_tree, HacOptions, Linkage, Merge};
pub use hcpc::{hcpc, HcpcOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    KMeans,
    Em,
    Hcpc,
    Hac,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::KMeans, Method::Em, Method::Hcpc, Method::Hac];

    pub fn name(self) -> &'static str {
        match self {
            Method::KMeans => "kmeans",
            Method::Em => "em",
            Method::Hcpc => "hcpc",
            Method::Hac => "hac",
        }
    }

    /// Whether the result depends on the seed.
    pub fn is_seeded(self) -> bool {
        matches!(self, Method::KMeans | Method::Em)
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown method `{s}` (expected kmeans, em, hcpc or hac)"
                ))
            })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A partition of a point set with its Riemann-Bregman centers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringResult {
    pub method: Method,
    pub generator: String,
    /// Number of nonempty clusters; may be below the requested count when a
    /// mixture component ends up with no hard-assigned points.
    pub k: usize,
    pub assignments: Vec<usize>,
    /// Centers in original coordinates.
    pub centers: Vec<Vec<f64>>,
    pub sizes: Vec<usize>,
    pub seed: Option<u64>,
    pub iterations: usize,
}

impl ClusteringResult {
    /// Sum of squared Riemann-Bregman distances from points to their centers.
    pub fn objective(&self, g: &Generator, points: &PointSet) -> Result<f64> {
        let embedded = points.embed(g)?;
        let centers = g.embed_all(&self.centers)?;
        Ok(within_cluster_sse(&embedded, &self.assignments, &centers))
    }
}

pub(crate) fn within_cluster_sse(points: &[Vec<f64>], assignments: &[usize], centers: &[Vec<f64>]) -> f64 {
    points
        .iter()
        .zip(assignments)
        .map(|(p, &a)| squared_euclidean(p, &centers[a]))
        .sum()
}

/// Embedded (and optionally standardized) working copy of the data.
pub(crate) struct Prepared {
    pub work: Vec<Vec<f64>>,
}

pub(crate) fn prepare(points: &PointSet, g: &Generator, k: usize, standardize: bool) -> Result<Prepared> {
    if points.is_empty() {
        return Err(Error::invalid("cannot cluster an empty point set"));
    }
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let mut work = points.embed(g)?;
    let distinct = crate::points::distinct_count(&work);
    if k > distinct {
        return Err(Error::invalid(format!(
            "k = {k} exceeds the {distinct} distinct points"
        )));
    }
    if standardize {
        standardize_columns(&mut work);
    }
    Ok(Prepared { work })
}

/// z-scores each column; constant columns are only centered.
pub(crate) fn standardize_columns(data: &mut [Vec<f64>]) {
    let n = data.len() as f64;
    let dim = data[0].len();
    for j in 0..dim {
        let mean = data.iter().map(|p| p[j]).sum::<f64>() / n;
        let var = data.iter().map(|p| (p[j] - mean).powi(2)).sum::<f64>() / n;
        let sd = if var > 0.0 { var.sqrt() } else { 1.0 };
        for p in data.iter_mut() {
            p[j] = (p[j] - mean) / sd;
        }
    }
}

/// Relabels clusters densely in order of first appearance.
pub(crate) fn relabel_by_appearance(assignments: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    assignments
        .iter()
        .map(|&a| {
            let next = map.len();
            *map.entry(a).or_insert(next)
        })
        .collect()
}

/// Drops empty cluster ids while keeping the relative order of the rest.
pub(crate) fn compact_labels(assignments: &[usize]) -> Vec<usize> {
    let max = assignments.iter().copied().max().map_or(0, |m| m + 1);
    let mut used = vec![false; max];
    for &a in assignments {
        used[a] = true;
    }
    let mut remap = vec![usize::MAX; max];
    let mut next = 0;
    for (id, &u) in used.iter().enumerate() {
        if u {
            remap[id] = next;
            next += 1;
        }
    }
    assignments.iter().map(|&a| remap[a]).collect()
}

/// Builds the result from dense labels: sizes and per-cluster centroids.
pub(crate) fn finish(
    method: Method,
    g: &Generator,
    points: &PointSet,
    assignments: Vec<usize>,
    seed: Option<u64>,
    iterations: usize,
) -> Result<ClusteringResult> {
    let k = assignments.iter().copied().max().map_or(0, |m| m + 1);
    let embedded = points.embed(g)?;
    let mut members: Vec<Vec<Vec<f64>>> = vec![Vec::new(); k];
    for (p, &a) in embedded.into_iter().zip(&assignments) {
        members[a].push(p);
    }
    let sizes = members.iter().map(Vec::len).collect();
    let centers = members
        .iter()
        .map(|m| g.unembed(&embedded_mean(m, None)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClusteringResult {
        method,
        generator: g.name().to_string(),
        k,
        assignments,
        centers,
        sizes,
        seed,
        iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KMeansOptions {
    pub k: usize,
    pub seed: u64,
    pub max_iters: usize,
    /// Relative objective improvement below which iteration stops.
    pub tol: f64,
    pub standardize: bool,
}

impl KMeansOptions {
    pub fn new(k: usize, seed: u64) -> Self {
        KMeansOptions {
            k,
            seed,
            max_iters: 200,
            tol: 1e-8,
            standardize: false,
        }
    }
}

/// Lloyd k-means on the embedded points with k-means++ seeding.
pub fn kmeans(points: &PointSet, g: &Generator, opts: &KMeansOptions) -> Result<ClusteringResult> {
    let (assignments, iterations, _) = kmeans_run(points, g, opts)?;
    finish(Method::KMeans, g, points, assignments, Some(opts.seed), iterations)
}

/// k-means returning the per-iteration objective trace as well.
pub fn kmeans_with_trace(
    points: &PointSet,
    g: &Generator,
    opts: &KMeansOptions,
) -> Result<(ClusteringResult, Vec<f64>)> {
    let (assignments, iterations, trace) = kmeans_run(points, g, opts)?;
    let result = finish(Method::KMeans, g, points, assignments, Some(opts.seed), iterations)?;
    Ok((result, trace))
}

fn kmeans_run(points: &PointSet, g: &Generator, opts: &KMeansOptions) -> Result<(Vec<usize>, usize, Vec<f64>)> {
    let prepared = prepare(points, g, opts.k, opts.standardize)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let init = lloyd::kmeans_plus_plus(&prepared.work, opts.k, &mut rng);
    let run = lloyd::run(prepared.work, init, opts.max_iters, opts.tol);
    let n = points.len() as f64;
    let trace = run.trace.iter().map(|d| d * n).collect();
    Ok((compact_labels(&run.state.assignments), run.iterations, trace))
}

/// Options for [`cluster`], covering every method.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterConfig {
    pub method: Method,
    pub k: usize,
    pub seed: u64,
    /// HAC linkage; only meaningful (and only accepted) for `hac`.
    pub linkage: Option<Linkage>,
    /// HCPC k-means consolidation.
    pub consolidate: bool,
    /// HCPC principal components kept (default: all).
    pub n_components: Option<usize>,
    pub standardize: bool,
}

impl ClusterConfig {
    pub fn new(method: Method, k: usize, seed: u64) -> Self {
        ClusterConfig {
            method,
            k,
            seed,
            linkage: None,
            consolidate: true,
            n_components: None,
            standardize: false,
        }
    }

    /// Rejects flag combinations that do not apply to the method.
    pub fn validate(&self) -> Result<()> {
        if self.linkage.is_some() && self.method != Method::Hac {
            return Err(Error::invalid(format!(
                "--linkage only applies to hac, not {}",
                self.method
            )));
        }
        if self.n_components.is_some() && self.method != Method::Hcpc {
            return Err(Error::invalid(format!(
                "--n-components only applies to hcpc, not {}",
                self.method
            )));
        }
        if self.k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        Ok(())
    }
}

/// Runs the configured method.
pub fn cluster(points: &PointSet, g: &Generator, cfg: &ClusterConfig) -> Result<ClusteringResult> {
    cfg.validate()?;
    match cfg.method {
        Method::KMeans => kmeans(
            points,
            g,
            &KMeansOptions {
                standardize: cfg.standardize,
                ..KMeansOptions::new(cfg.k, cfg.seed)
            },
        ),
        Method::Em => em_gmm(
            points,
            g,
            &EmOptions {
                standardize: cfg.standardize,
                ..EmOptions::new(cfg.k, cfg.seed)
            },
        )
        .map(|(r, _)| r),
        Method::Hac => hac(
            points,
            g,
            &HacOptions {
                k: cfg.k,
                linkage: cfg.linkage.unwrap_or_default(),
                standardize: cfg.standardize,
            },
        ),
        Method::Hcpc => hcpc(
            points,
            g,
            &HcpcOptions {
                n_components: cfg.n_components,
                consolidate: cfg.consolidate,
                standardize: cfg.standardize,
                seed: cfg.seed,
                ..HcpcOptions::new(cfg.k)
            },
        ),
    }
}
