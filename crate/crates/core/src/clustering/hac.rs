//! Agglomerative clustering with Lance–Williams updates and the
//! nearest-neighbor chain algorithm (O(n²) time and memory).
//!
//! All four linkages are reducible, so the chain finds the same dendrogram
//! as the naive closest-pair loop. Ward runs on squared Euclidean
//! dissimilarities; the others on plain Euclidean distances.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{finish, prepare, relabel_by_appearance, ClusteringResult, Method};
use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::geometry::squared_euclidean;
use crate::points::PointSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Linkage {
    Single,
    Average,
    Complete,
    #[default]
    Ward,
}

impl Linkage {
    pub const ALL: [Linkage; 4] = [
        Linkage::Single,
        Linkage::Average,
        Linkage::Complete,
        Linkage::Ward,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Linkage::Single => "single",
            Linkage::Average => "average",
            Linkage::Complete => "complete",
            Linkage::Ward => "ward",
        }
    }
}

impl FromStr for Linkage {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Linkage::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown linkage `{s}` (expected single, average, complete or ward)"
                ))
            })
    }
}

impl fmt::Display for Linkage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One merge of the dendrogram. `a` and `b` are representative points: the
/// merge joins the cluster containing `a` with the one containing `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub height: f64,
}

/// Lance–Williams update of `d(k, i ∪ j)`.
#[inline]
fn lance_williams(linkage: Linkage, d_ik: f64, d_jk: f64, d_ij: f64, n_i: f64, n_j: f64, n_k: f64) -> f64 {
    match linkage {
        Linkage::Single => d_ik.min(d_jk),
        Linkage::Complete => d_ik.max(d_jk),
        Linkage::Average => (n_i * d_ik + n_j * d_jk) / (n_i + n_j),
        Linkage::Ward => ((n_i + n_k) * d_ik + (n_j + n_k) * d_jk - n_k * d_ij) / (n_i + n_j + n_k),
    }
}

/// Full dendrogram of `points`, merges sorted by height (stable).
pub fn linkage_tree(points: &[Vec<f64>], linkage: Linkage) -> Vec<Merge> {
    let n = points.len();
    if n < 2 {
        return Vec::new();
    }
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..i {
            let sq = squared_euclidean(&points[i], &points[j]);
            let v = if linkage == Linkage::Ward { sq } else { sq.sqrt() };
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    let mut size = vec![1usize; n];
    let mut active = vec![true; n];
    let mut merges = Vec::with_capacity(n - 1);
    let mut chain: Vec<usize> = Vec::with_capacity(n);

    for _ in 0..n - 1 {
        if chain.is_empty() {
            chain.push(active.iter().position(|&a| a).expect("two active clusters"));
        }
        let (a, b) = loop {
            let a = *chain.last().unwrap();
            let prev = (chain.len() >= 2).then(|| chain[chain.len() - 2]);
            // start from the predecessor so a tie closes the chain
            let mut best = prev;
            let mut best_d = prev.map_or(f64::INFINITY, |p| d[a * n + p]);
            for x in 0..n {
                if x != a && active[x] && d[a * n + x] < best_d {
                    best = Some(x);
                    best_d = d[a * n + x];
                }
            }
            let best = best.expect("another active cluster");
            if Some(best) == prev {
                chain.pop();
                chain.pop();
                break (a.min(best), a.max(best));
            }
            chain.push(best);
        };

        let d_ab = d[a * n + b];
        merges.push(Merge { a, b, height: d_ab });
        let (n_a, n_b) = (size[a] as f64, size[b] as f64);
        for x in 0..n {
            if !active[x] || x == a || x == b {
                continue;
            }
            let v = lance_williams(linkage, d[a * n + x], d[b * n + x], d_ab, n_a, n_b, size[x] as f64);
            d[a * n + x] = v;
            d[x * n + a] = v;
        }
        active[b] = false;
        size[a] += size[b];
    }
    merges.sort_by(|x, y| x.height.total_cmp(&y.height));
    merges
}

/// Applies the lowest `n − k` merges and labels clusters by first appearance.
pub fn cut_tree(n: usize, merges: &[Merge], k: usize) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for m in merges.iter().take(n.saturating_sub(k)) {
        let ra = find(&mut parent, m.a);
        let rb = find(&mut parent, m.b);
        parent[ra.max(rb)] = ra.min(rb);
    }
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    relabel_by_appearance(&roots)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HacOptions {
    pub k: usize,
    pub linkage: Linkage,
    pub standardize: bool,
}

impl HacOptions {
    pub fn new(k: usize, linkage: Linkage) -> Self {
        HacOptions {
            k,
            linkage,
            standardize: false,
        }
    }
}

/// Agglomerative clustering of the embedded points cut at `k` clusters.
/// Deterministic; no seed is involved.
pub fn hac(points: &PointSet, g: &Generator, opts: &HacOptions) -> Result<ClusteringResult> {
    let prepared = prepare(points, g, opts.k, opts.standardize)?;
    let merges = linkage_tree(&prepared.work, opts.linkage);
    let labels = cut_tree(points.len(), &merges, opts.k);
    finish(Method::Hac, g, points, labels, None, merges.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::make_generator;

    /// Naive closest-pair agglomeration with the same updates.
    fn naive(points: &[Vec<f64>], linkage: Linkage, k: usize) -> Vec<usize> {
        let mut clusters: Vec<Vec<usize>> = (0..points.len()).map(|i| vec![i]).collect();
        let dist = |a: &[usize], b: &[usize]| -> f64 {
            let mut ds = Vec::new();
            for &i in a {
                for &j in b {
                    ds.push(squared_euclidean(&points[i], &points[j]).sqrt());
                }
            }
            match linkage {
                Linkage::Single => ds.iter().copied().fold(f64::INFINITY, f64::min),
                Linkage::Complete => ds.iter().copied().fold(0.0, f64::max),
                Linkage::Average => ds.iter().sum::<f64>() / ds.len() as f64,
                Linkage::Ward => {
                    let mean = |c: &[usize]| -> Vec<f64> {
                        let mut m = vec![0.0; points[0].len()];
                        for &i in c {
                            for (mm, v) in m.iter_mut().zip(&points[i]) {
                                *mm += v / c.len() as f64;
                            }
                        }
                        m
                    };
                    let (na, nb) = (a.len() as f64, b.len() as f64);
                    na * nb / (na + nb) * squared_euclidean(&mean(a), &mean(b))
                }
            }
        };
        while clusters.len() > k {
            let mut best = (0, 1, f64::INFINITY);
            for i in 0..clusters.len() {
                for j in i + 1..clusters.len() {
                    let d = dist(&clusters[i], &clusters[j]);
                    if d < best.2 {
                        best = (i, j, d);
                    }
                }
            }
            let moved = clusters.remove(best.1);
            clusters[best.0].extend(moved);
        }
        let mut labels = vec![0; points.len()];
        for (c, members) in clusters.iter().enumerate() {
            for &i in members {
                labels[i] = c;
            }
        }
        relabel_by_appearance(&labels)
    }

    fn scatter(n: usize, salt: u64) -> Vec<Vec<f64>> {
        // deterministic low-discrepancy-ish cloud, no exact ties
        (0..n)
            .map(|i| {
                let t = (i as f64 + 1.0) * (0.618_033_988_7 + salt as f64 * 0.013);
                vec![(t * 7.3).sin() * 3.0 + t.fract(), (t * 3.1).cos() * 2.0 + (t * 1.7).fract()]
            })
            .collect()
    }

    #[test]
    fn chain_matches_naive_agglomeration() {
        for linkage in Linkage::ALL {
            for salt in 0..4 {
                let pts = scatter(25, salt);
                for k in [1, 2, 3, 5, 25] {
                    let merges = linkage_tree(&pts, linkage);
                    assert_eq!(merges.len(), 24);
                    assert_eq!(cut_tree(25, &merges, k), naive(&pts, linkage, k), "{linkage} k={k} salt={salt}");
                }
            }
        }
    }

    #[test]
    fn single_linkage_groups_pairs() {
        let pts = PointSet::new(vec![vec![0.0, 0.0], vec![10.0, 10.0], vec![0.5, 0.0], vec![10.0, 10.4]]).unwrap();
        let g = make_generator("euclidean").unwrap();
        let r = hac(&pts, &g, &HacOptions::new(2, Linkage::Single)).unwrap();
        assert_eq!(r.assignments, vec![0, 1, 0, 1]);
    }

    #[test]
    fn k_equals_n_gives_singletons() {
        let pts = PointSet::new(scatter(9, 1).into_iter().map(|p| vec![p[0] + 10.0, p[1] + 10.0]).collect()).unwrap();
        let g = make_generator("burg").unwrap();
        let r = hac(&pts, &g, &HacOptions::new(9, Linkage::Ward)).unwrap();
        assert_eq!(r.assignments, (0..9).collect::<Vec<_>>());
        assert!(hac(&pts, &g, &HacOptions::new(10, Linkage::Ward)).is_err());
    }

    #[test]
    fn ward_heights_are_monotone() {
        let merges = linkage_tree(&scatter(40, 2), Linkage::Ward);
        assert!(merges.windows(2).all(|w| w[0].height <= w[1].height));
    }
}
