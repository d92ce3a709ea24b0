//! Synthetic data, partition agreement scores and the experiment grid.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::{cluster, ClusterConfig, ClusteringResult, Linkage, Method};
use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::points::PointSet;

/// One Gaussian component with independent coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterSpec {
    pub mean: Vec<f64>,
    pub sd: Vec<f64>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub clusters: Vec<ClusterSpec>,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_seed() -> u64 {
    1
}

impl Default for SyntheticSpec {
    /// Four well-separated groups in the positive quadrant, 750 points.
    fn default() -> Self {
        let c = |m: [f64; 2], s: [f64; 2], count| ClusterSpec {
            mean: m.to_vec(),
            sd: s.to_vec(),
            count,
        };
        SyntheticSpec {
            clusters: vec![
                c([8.0, 6.5], [0.5, 0.5], 100),
                c([9.0, 7.5], [0.4, 0.45], 300),
                c([8.5, 9.0], [0.35, 0.35], 200),
                c([8.0, 10.0], [0.6, 0.6], 150),
            ],
            seed: default_seed(),
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.clusters.is_empty() {
            return Err(Error::invalid("clusters: at least one cluster is required"));
        }
        let dim = self.clusters[0].mean.len();
        if dim == 0 {
            return Err(Error::invalid("clusters[0].mean: must not be empty"));
        }
        for (i, c) in self.clusters.iter().enumerate() {
            if c.mean.len() != dim {
                return Err(Error::invalid(format!(
                    "clusters[{i}].mean: expected {dim} coordinates, got {}",
                    c.mean.len()
                )));
            }
            if c.sd.len() != dim {
                return Err(Error::invalid(format!(
                    "clusters[{i}].sd: expected {dim} coordinates, got {}",
                    c.sd.len()
                )));
            }
            if let Some(j) = c.mean.iter().position(|m| !m.is_finite()) {
                return Err(Error::invalid(format!("clusters[{i}].mean[{j}]: must be finite")));
            }
            if let Some(j) = c.sd.iter().position(|s| !(s.is_finite() && *s > 0.0)) {
                return Err(Error::invalid(format!(
                    "clusters[{i}].sd[{j}]: must be positive and finite, got {}",
                    c.sd[j]
                )));
            }
            if c.count == 0 {
                return Err(Error::invalid(format!("clusters[{i}].count: must be at least 1")));
            }
        }
        Ok(())
    }

    pub fn total(&self) -> usize {
        self.clusters.iter().map(|c| c.count).sum()
    }
}

/// Standard normal pair by Box–Muller from two uniforms of the stream.
fn box_muller<R: Rng>(rng: &mut R) -> (f64, f64) {
    // 1 - U lies in (0, 1], so the log is finite
    let u1 = 1.0 - rng.random::<f64>();
    let u2 = rng.random::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let t = std::f64::consts::TAU * u2;
    (r * t.cos(), r * t.sin())
}

struct Normals<R> {
    rng: R,
    spare: Option<f64>,
}

impl<R: Rng> Normals<R> {
    fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let (a, b) = box_muller(&mut self.rng);
        self.spare = Some(b);
        a
    }
}

const MAX_REDRAWS: usize = 1_000_000;

/// Labeled sample from `spec`; labels are cluster indices in spec order.
///
/// Points with any coordinate ≤ 0 are redrawn, so the data fits every
/// built-in generator. Uses ChaCha8 seeded with `spec.seed`.
pub fn generate_dataset(spec: &SyntheticSpec) -> Result<PointSet> {
    spec.validate()?;
    let mut normals = Normals {
        rng: ChaCha8Rng::seed_from_u64(spec.seed),
        spare: None,
    };
    let mut points = Vec::with_capacity(spec.total());
    let mut labels = Vec::with_capacity(spec.total());
    for (label, c) in spec.clusters.iter().enumerate() {
        for _ in 0..c.count {
            let mut tries = 0;
            let p = loop {
                let p: Vec<f64> = c.mean.iter().zip(&c.sd).map(|(m, s)| m + s * normals.next()).collect();
                if p.iter().all(|&v| v > 0.0) {
                    break p;
                }
                tries += 1;
                if tries == MAX_REDRAWS {
                    return Err(Error::invalid(format!(
                        "clusters[{label}]: almost no draws land in the positive orthant"
                    )));
                }
            };
            points.push(p);
            labels.push(label);
        }
    }
    PointSet::with_labels(points, labels)
}

fn check_lengths(a: &[usize], b: &[usize]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::invalid(format!(
            "partitions differ in length: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// Contingency counts `table[a][l]`.
fn contingency(a: &[usize], l: &[usize], rows: usize, cols: usize) -> Vec<Vec<u64>> {
    let mut t = vec![vec![0u64; cols]; rows];
    for (&x, &y) in a.iter().zip(l) {
        t[x][y] += 1;
    }
    t
}

/// Minimum-cost perfect matching on a square matrix (Hungarian method with
/// potentials, O(n³)). Returns the column chosen for each row.
pub fn hungarian(cost: &[Vec<i64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    // 1-based arrays; p[j] is the row matched to column j
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![i64::MAX; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = i64::MAX;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_to_col = vec![0; n];
    for j in 1..=n {
        row_to_col[p[j] - 1] = j - 1;
    }
    row_to_col
}

/// Best cluster-to-label bijection on `k` ids; entry `c` is the label given
/// to cluster `c`.
pub fn optimal_matching(assignments: &[usize], labels: &[usize], k: usize) -> Result<Vec<usize>> {
    check_lengths(assignments, labels)?;
    if let Some(&bad) = assignments.iter().chain(labels).find(|&&v| v >= k) {
        return Err(Error::invalid(format!("label {bad} is out of range for k = {k}")));
    }
    let t = contingency(assignments, labels, k, k);
    let cost: Vec<Vec<i64>> = t.iter().map(|r| r.iter().map(|&c| -(c as i64)).collect()).collect();
    Ok(hungarian(&cost))
}

/// Fraction of points whose cluster maps to their label under the best
/// bijection of `k` cluster ids onto `k` label ids.
pub fn accuracy(assignments: &[usize], labels: &[usize], k: usize) -> Result<f64> {
    if assignments.is_empty() {
        check_lengths(assignments, labels)?;
        return Ok(1.0);
    }
    let matching = optimal_matching(assignments, labels, k)?;
    let hits = assignments
        .iter()
        .zip(labels)
        .filter(|(&a, &l)| matching[a] == l)
        .count();
    Ok(hits as f64 / assignments.len() as f64)
}

fn dense_table(a: &[usize], b: &[usize]) -> Vec<Vec<u64>> {
    let ra = a.iter().max().map_or(0, |m| m + 1);
    let rb = b.iter().max().map_or(0, |m| m + 1);
    contingency(a, b, ra, rb)
}

fn choose2(x: u64) -> f64 {
    let x = x as f64;
    x * (x - 1.0) / 2.0
}

/// Adjusted Rand index under the permutation model. Returns 1 in the
/// degenerate case where the expected index equals its maximum.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> Result<f64> {
    check_lengths(a, b)?;
    let t = dense_table(a, b);
    let n = a.len() as u64;
    let index: f64 = t.iter().flatten().map(|&c| choose2(c)).sum();
    let rows: f64 = t.iter().map(|r| choose2(r.iter().sum())).sum();
    let cols: f64 = (0..t.first().map_or(0, Vec::len))
        .map(|j| choose2(t.iter().map(|r| r[j]).sum()))
        .sum();
    let total = choose2(n);
    if total == 0.0 {
        return Ok(1.0);
    }
    let expected = rows * cols / total;
    let max = (rows + cols) / 2.0;
    if max == expected {
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}

fn entropy(counts: impl Iterator<Item = u64>, n: f64) -> f64 {
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// `I(A;B) / √(H(A) H(B))`; 1 when both partitions are a single cluster and 0
/// when only one of them is.
pub fn normalized_mutual_information(a: &[usize], b: &[usize]) -> Result<f64> {
    check_lengths(a, b)?;
    if a.is_empty() {
        return Ok(1.0);
    }
    let t = dense_table(a, b);
    let n = a.len() as f64;
    let row_sums: Vec<u64> = t.iter().map(|r| r.iter().sum()).collect();
    let col_sums: Vec<u64> = (0..t[0].len()).map(|j| t.iter().map(|r| r[j]).sum()).collect();
    let ha = entropy(row_sums.iter().copied(), n);
    let hb = entropy(col_sums.iter().copied(), n);
    if ha == 0.0 && hb == 0.0 {
        return Ok(1.0);
    }
    if ha == 0.0 || hb == 0.0 {
        return Ok(0.0);
    }
    let mut mi = 0.0;
    for (i, row) in t.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c > 0 {
                let c = c as f64;
                mi += c / n * (c * n / (row_sums[i] as f64 * col_sums[j] as f64)).ln();
            }
        }
    }
    Ok((mi / (ha * hb).sqrt()).clamp(0.0, 1.0))
}

/// Scores of one clustering against ground truth. `sizes` and `centers` are
/// listed by ground-truth label: entry `c` is the cluster matched to label
/// `c` (size 0 and no center if none was), followed by unmatched clusters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub method: Method,
    pub generator: String,
    pub linkage: Option<Linkage>,
    pub seed: u64,
    pub k: usize,
    pub accuracy: f64,
    pub adjusted_rand_index: f64,
    pub normalized_mutual_information: f64,
    pub sizes: Vec<usize>,
    pub centers: Vec<Option<Vec<f64>>>,
}

/// Scores `result` against `labels`, reordering clusters by matched label.
pub fn evaluate(result: &ClusteringResult, labels: &[usize], seed: u64, linkage: Option<Linkage>) -> Result<EvaluationReport> {
    let n_labels = labels.iter().max().map_or(0, |m| m + 1);
    let k = result.k.max(n_labels);
    let matching = optimal_matching(&result.assignments, labels, k)?;
    let mut sizes = vec![0; k];
    let mut centers = vec![None; k];
    for (c, &l) in matching.iter().enumerate().take(result.k) {
        sizes[l] = result.sizes[c];
        centers[l] = Some(result.centers[c].clone());
    }
    Ok(EvaluationReport {
        method: result.method,
        generator: result.generator.clone(),
        linkage,
        seed,
        k: result.k,
        accuracy: accuracy(&result.assignments, labels, k)?,
        adjusted_rand_index: adjusted_rand_index(&result.assignments, labels)?,
        normalized_mutual_information: normalized_mutual_information(&result.assignments, labels)?,
        sizes,
        centers,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub methods: Vec<Method>,
    pub generators: Vec<Generator>,
    pub k: usize,
    pub seeds: Vec<u64>,
    pub linkage: Linkage,
    pub consolidate: bool,
    pub standardize: bool,
}

impl ExperimentConfig {
    pub fn new(methods: Vec<Method>, generators: Vec<Generator>, k: usize, seeds: Vec<u64>) -> Self {
        ExperimentConfig {
            methods,
            generators,
            k,
            seeds,
            linkage: Linkage::Ward,
            consolidate: true,
            standardize: false,
        }
    }
}

/// One cell of the experiment grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRun {
    pub report: EvaluationReport,
    pub result: ClusteringResult,
}

/// Every method × generator × seed on the dataset drawn from `spec`, in that
/// nesting order. Cells run in parallel.
pub fn run_experiment(spec: &SyntheticSpec, cfg: &ExperimentConfig) -> Result<Vec<EvaluationReport>> {
    let data = generate_dataset(spec)?;
    Ok(run_cells(&data, cfg)?.into_iter().map(|r| r.report).collect())
}

/// The experiment grid on labeled data, keeping each clustering.
pub fn run_cells(data: &PointSet, cfg: &ExperimentConfig) -> Result<Vec<ExperimentRun>> {
    let labels = data
        .labels()
        .ok_or_else(|| Error::invalid("experiments need ground-truth labels"))?;
    let mut cells = Vec::new();
    for &m in &cfg.methods {
        for g in &cfg.generators {
            for &s in &cfg.seeds {
                cells.push((m, g, s));
            }
        }
    }
    cells
        .par_iter()
        .map(|&(method, g, seed)| {
            let mut cc = ClusterConfig::new(method, cfg.k, seed);
            cc.consolidate = cfg.consolidate;
            cc.standardize = cfg.standardize;
            let linkage = (method == Method::Hac).then_some(cfg.linkage);
            cc.linkage = linkage;
            let result = cluster(data, g, &cc)?;
            let report = evaluate(&result, labels, seed, linkage)?;
            Ok(ExperimentRun { report, result })
        })
        .collect()
}

/// Seed-averaged scores for one (method, generator) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub method: Method,
    pub generator: String,
    pub runs: usize,
    pub mean_sizes: Vec<f64>,
    /// Mean of the matched centers over the runs that produced one.
    pub mean_centers: Vec<Option<Vec<f64>>>,
    pub accuracy: f64,
    pub adjusted_rand_index: f64,
    pub normalized_mutual_information: f64,
}

pub fn summarize(reports: &[EvaluationReport]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(Method, usize, &str), Vec<&EvaluationReport>> = BTreeMap::new();
    let mut order: Vec<&str> = Vec::new();
    for r in reports {
        if !order.contains(&r.generator.as_str()) {
            order.push(&r.generator);
        }
        let pos = order.iter().position(|g| *g == r.generator).unwrap();
        groups.entry((r.method, pos, &r.generator)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((method, _, generator), rs)| {
            let runs = rs.len() as f64;
            let width = rs.iter().map(|r| r.sizes.len()).max().unwrap_or(0);
            let mean_sizes = (0..width)
                .map(|c| rs.iter().map(|r| r.sizes.get(c).copied().unwrap_or(0) as f64).sum::<f64>() / runs)
                .collect();
            let mean_centers = (0..width)
                .map(|c| {
                    let got: Vec<&Vec<f64>> = rs.iter().filter_map(|r| r.centers.get(c).and_then(Option::as_ref)).collect();
                    let first = got.first()?;
                    let mut m = vec![0.0; first.len()];
                    for p in &got {
                        for (mm, v) in m.iter_mut().zip(p.iter()) {
                            *mm += v / got.len() as f64;
                        }
                    }
                    Some(m)
                })
                .collect();
            let mean = |f: fn(&EvaluationReport) -> f64| rs.iter().map(|r| f(r)).sum::<f64>() / runs;
            SummaryRow {
                method,
                generator: generator.to_string(),
                runs: rs.len(),
                mean_sizes,
                mean_centers,
                accuracy: mean(|r| r.accuracy),
                adjusted_rand_index: mean(|r| r.adjusted_rand_index),
                normalized_mutual_information: mean(|r| r.normalized_mutual_information),
            }
        })
        .collect()
}

fn h_label(generator: &str) -> String {
    generator
        .parse::<crate::generators::Builtin>()
        .map(|b| b.h_label().to_string())
        .unwrap_or_else(|_| generator.to_string())
}

/// Plain-text tables, one block per method: matched cluster sizes with
/// accuracy, then the matched centers.
pub fn format_summary(rows: &[SummaryRow]) -> String {
    let mut out = String::new();
    let mut methods: Vec<Method> = rows.iter().map(|r| r.method).collect();
    methods.dedup();
    for m in methods {
        let block: Vec<&SummaryRow> = rows.iter().filter(|r| r.method == m).collect();
        let width = block.iter().map(|r| r.mean_sizes.len()).max().unwrap_or(0);
        let runs = block.iter().map(|r| r.runs).max().unwrap_or(0);
        let lw = block.iter().map(|r| h_label(&r.generator).chars().count()).max().unwrap_or(4) + 2;
        let _ = writeln!(out, "{m}: cluster sizes and accuracy (mean over {runs} runs)");
        let _ = write!(out, "{:<lw$}", "h(x)");
        for c in 1..=width {
            let _ = write!(out, "{:>10}", format!("C{c}"));
        }
        let _ = writeln!(out, "{:>10}{:>8}{:>8}", "accuracy", "ARI", "NMI");
        for r in &block {
            let _ = write!(out, "{:<lw$}", h_label(&r.generator));
            for c in 0..width {
                let _ = write!(out, "{:>10.1}", r.mean_sizes.get(c).copied().unwrap_or(0.0));
            }
            let _ = writeln!(
                out,
                "{:>10.3}{:>8.3}{:>8.3}",
                r.accuracy, r.adjusted_rand_index, r.normalized_mutual_information
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "{m}: cluster centers");
        let _ = write!(out, "{:<lw$}", "h(x)");
        for c in 1..=width {
            let _ = write!(out, "{:>18}", format!("C{c}"));
        }
        let _ = writeln!(out);
        for r in &block {
            let _ = write!(out, "{:<lw$}", h_label(&r.generator));
            for c in 0..width {
                let cell = match r.mean_centers.get(c).and_then(Option::as_ref) {
                    Some(p) => format!("({})", p.iter().map(|v| format!("{v:.2}")).collect::<Vec<_>>().join(", ")),
                    None => "-".to_string(),
                };
                let _ = write!(out, "{cell:>18}");
            }
            let _ = writeln!(out);
        }
        let _ = writeln!(out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::make_generator;

    #[test]
    fn default_dataset_shape() {
        let d = generate_dataset(&SyntheticSpec::default()).unwrap();
        assert_eq!(d.len(), 750);
        let labels = d.labels().unwrap();
        for (c, want) in [100, 300, 200, 150].into_iter().enumerate() {
            assert_eq!(labels.iter().filter(|&&l| l == c).count(), want);
        }
        assert!(d.points().iter().flatten().all(|&v| v > 0.0));
    }

    #[test]
    fn dataset_is_reproducible() {
        let mut s = SyntheticSpec::default();
        s.seed = 99;
        assert_eq!(generate_dataset(&s).unwrap(), generate_dataset(&s).unwrap());
        let t = SyntheticSpec::default();
        assert_ne!(generate_dataset(&s).unwrap(), generate_dataset(&t).unwrap());
    }

    #[test]
    fn spec_validation_names_field() {
        let mut s = SyntheticSpec::default();
        s.clusters[2].sd[1] = 0.0;
        let msg = s.validate().unwrap_err().to_string();
        assert!(msg.contains("clusters[2].sd[1]"), "{msg}");
        let bad: std::result::Result<SyntheticSpec, _> = serde_json::from_str(r#"{"clusters":[{"mean":[1],"sd":[1],"cnt":3}]}"#);
        assert!(bad.unwrap_err().to_string().contains("cnt"));
    }

    #[test]
    fn box_muller_moments() {
        let mut n = Normals {
            rng: ChaCha8Rng::seed_from_u64(5),
            spare: None,
        };
        let xs: Vec<f64> = (0..200_000).map(|_| n.next()).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() < 0.01);
        assert!((var - 1.0).abs() < 0.01);
    }

    #[test]
    fn accuracy_examples() {
        assert_eq!(accuracy(&[1, 1, 1, 0], &[0, 0, 1, 1], 2).unwrap(), 0.75);
        assert_eq!(accuracy(&[2, 2, 0, 1], &[0, 0, 1, 2], 3).unwrap(), 1.0);
        assert!(accuracy(&[0], &[0, 1], 2).is_err());
        assert!(accuracy(&[0, 3], &[0, 1], 2).is_err());
    }

    #[test]
    fn hungarian_small() {
        let cost = vec![vec![4, 1, 3], vec![2, 0, 5], vec![3, 2, 2]];
        let m = hungarian(&cost);
        let total: i64 = m.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
        assert_eq!(total, 5);
    }

    #[test]
    fn ari_and_nmi_examples() {
        assert_eq!(adjusted_rand_index(&[0, 0, 1, 1], &[1, 1, 0, 0]).unwrap(), 1.0);
        let singletons: Vec<usize> = (0..6).collect();
        assert_eq!(adjusted_rand_index(&singletons, &[0; 6]).unwrap(), 0.0);
        assert_eq!(normalized_mutual_information(&[0, 0, 1, 1], &[0, 1, 0, 1]).unwrap(), 0.0);
        assert_eq!(normalized_mutual_information(&[0; 5], &[0; 5]).unwrap(), 1.0);
        assert_eq!(normalized_mutual_information(&[0; 4], &[0, 1, 0, 1]).unwrap(), 0.0);
        assert!((normalized_mutual_information(&[0, 0, 1, 2], &[2, 2, 0, 1]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn nmi_independent_two_by_two() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (x, y) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            a.extend(std::iter::repeat_n(x, 25));
            b.extend(std::iter::repeat_n(y, 25));
        }
        assert!(normalized_mutual_information(&a, &b).unwrap().abs() < 1e-15);
    }

    #[test]
    fn single_cell_experiment() {
        let cfg = ExperimentConfig::new(vec![Method::KMeans], vec![make_generator("euclidean").unwrap()], 4, vec![3]);
        let spec = SyntheticSpec::default();
        let reports = run_experiment(&spec, &cfg).unwrap();
        assert_eq!(reports.len(), 1);
        let bb = generate_dataset(&spec).unwrap().bounding_box().unwrap();
        for c in reports[0].centers.iter().flatten() {
            for (v, (lo, hi)) in c.iter().zip(&bb) {
                assert!(lo <= v && v <= hi);
            }
        }
        let table = format_summary(&summarize(&reports));
        assert!(table.contains("accuracy"));
        assert!(table.contains("kmeans"));
    }
}
