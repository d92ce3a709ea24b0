//! Gaussian mixture EM on the embedded points.
//!
//! Covariances are full. To keep them positive definite every M-step adds a
//! fixed ridge `λI`, with `λ = max(1e-6 · tr(cov) / dim, 1e-12)` computed once
//! from the working data. That ridge is the exact M-step of the penalized
//! likelihood `Σ_n log Σ_k π_k N(x_n | μ_k, Σ_k) exp(-λ/2 tr Σ_k⁻¹)`, which is
//! the quantity reported in `log_likelihood`; it never decreases.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{compact_labels, finish, prepare, ClusteringResult, Method};
use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::lloyd::{kmeans_plus_plus, nearest};
use crate::points::PointSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmOptions {
    pub k: usize,
    pub seed: u64,
    pub max_iters: usize,
    /// Relative change of the log-likelihood below which iteration stops.
    pub tol: f64,
    pub standardize: bool,
}

impl EmOptions {
    pub fn new(k: usize, seed: u64) -> Self {
        EmOptions {
            k,
            seed,
            max_iters: 500,
            tol: 1e-8,
            standardize: false,
        }
    }
}

/// Fitted mixture, in the working (embedded) coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianMixtureModel {
    pub weights: Vec<f64>,
    pub means: Vec<Vec<f64>>,
    /// Row-major `dim × dim` covariance per component.
    pub covariances: Vec<Vec<Vec<f64>>>,
    /// Ridge added to every covariance.
    pub regularization: f64,
    /// Penalized log-likelihood after each E-step.
    pub log_likelihood: Vec<f64>,
    pub converged: bool,
}

struct Component {
    log_weight: f64,
    mean: DVector<f64>,
    chol: Cholesky<f64, Dyn>,
    /// `-½ (dim ln 2π + ln|Σ| + λ tr Σ⁻¹)`
    log_norm: f64,
}

impl Component {
    fn new(weight: f64, mean: DVector<f64>, cov: DMatrix<f64>, lambda: f64) -> Result<Self> {
        let dim = mean.len();
        let chol = Cholesky::new(cov)
            .ok_or_else(|| Error::Numerical("covariance is not positive definite".into()))?;
        let l = chol.l_dirty();
        let log_det: f64 = 2.0 * (0..dim).map(|i| l[(i, i)].ln()).sum::<f64>();
        let l_inv = chol.l().solve_lower_triangular(&DMatrix::identity(dim, dim))
            .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
        let trace_inv = l_inv.norm_squared();
        let log_norm = -0.5 * (dim as f64 * (2.0 * std::f64::consts::PI).ln() + log_det + lambda * trace_inv);
        Ok(Component {
            log_weight: weight.ln(),
            mean,
            chol,
            log_norm,
        })
    }

    fn log_density(&self, x: &DVector<f64>) -> f64 {
        let diff = x - &self.mean;
        let z = self.chol.l_dirty().solve_lower_triangular(&diff).expect("nonsingular factor");
        self.log_weight + self.log_norm - 0.5 * z.norm_squared()
    }
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// One M-step from responsibilities `r` (n × k, row per point).
fn m_step(x: &[DVector<f64>], r: &[Vec<f64>], k: usize, lambda: f64, prev: Option<&[Component]>) -> Result<Vec<Component>> {
    let n = x.len();
    let dim = x[0].len();
    let mut comps = Vec::with_capacity(k);
    for j in 0..k {
        let nk: f64 = r.iter().map(|row| row[j]).sum();
        if nk <= f64::EPSILON * n as f64 {
            // a dead component keeps its shape with zero weight
            match prev {
                Some(p) => comps.push(Component {
                    log_weight: f64::NEG_INFINITY,
                    mean: p[j].mean.clone(),
                    chol: p[j].chol.clone(),
                    log_norm: p[j].log_norm,
                }),
                None => return Err(Error::Numerical("mixture component started empty".into())),
            }
            continue;
        }
        let mut mean = DVector::zeros(dim);
        for (xi, row) in x.iter().zip(r) {
            mean.axpy(row[j], xi, 1.0);
        }
        mean /= nk;
        let mut cov = DMatrix::zeros(dim, dim);
        for (xi, row) in x.iter().zip(r) {
            let d = xi - &mean;
            cov.ger(row[j], &d, &d, 1.0);
        }
        cov /= nk;
        for i in 0..dim {
            cov[(i, i)] += lambda;
        }
        comps.push(Component::new(nk / n as f64, mean, cov, lambda)?);
    }
    Ok(comps)
}

/// E-step: responsibilities and the penalized log-likelihood.
fn e_step(x: &[DVector<f64>], comps: &[Component]) -> (Vec<Vec<f64>>, f64) {
    let rows: Vec<(Vec<f64>, f64)> = x
        .par_iter()
        .map(|xi| {
            let mut lp: Vec<f64> = comps.iter().map(|c| c.log_density(xi)).collect();
            let lse = log_sum_exp(&lp);
            for v in lp.iter_mut() {
                *v = (*v - lse).exp();
            }
            (lp, lse)
        })
        .collect();
    // summed in index order so the result does not depend on thread count
    let ll = rows.iter().map(|(_, l)| l).sum();
    (rows.into_iter().map(|(r, _)| r).collect(), ll)
}

fn ridge(data: &[Vec<f64>]) -> f64 {
    let n = data.len() as f64;
    let dim = data[0].len();
    let mut trace = 0.0;
    for j in 0..dim {
        let mean = data.iter().map(|p| p[j]).sum::<f64>() / n;
        trace += data.iter().map(|p| (p[j] - mean).powi(2)).sum::<f64>() / n;
    }
    (1e-6 * trace / dim as f64).max(1e-12)
}

/// EM for a full-covariance Gaussian mixture on the embedded points.
///
/// Initialized from k-means++ centers with a hard nearest-center split.
/// Points are then assigned to their most probable component; components
/// left with no points are dropped, so the result may have fewer than `k`
/// clusters.
pub fn em_gmm(points: &PointSet, g: &Generator, opts: &EmOptions) -> Result<(ClusteringResult, GaussianMixtureModel)> {
    let prepared = prepare(points, g, opts.k, opts.standardize)?;
    let data = prepared.work;
    let lambda = ridge(&data);
    let x: Vec<DVector<f64>> = data.iter().map(|p| DVector::from_column_slice(p)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let centers = kmeans_plus_plus(&data, opts.k, &mut rng);
    let init: Vec<Vec<f64>> = data
        .iter()
        .map(|p| {
            let mut row = vec![0.0; opts.k];
            row[nearest(&centers, p).0] = 1.0;
            row
        })
        .collect();
    let mut comps = m_step(&x, &init, opts.k, lambda, None)?;

    let mut trace: Vec<f64> = Vec::new();
    let mut converged = false;
    let mut resp;
    let mut iterations = 0;
    loop {
        iterations += 1;
        let (r, ll) = e_step(&x, &comps);
        if !ll.is_finite() {
            return Err(Error::Numerical(format!("log-likelihood became {ll}")));
        }
        resp = r;
        let prev = trace.last().copied();
        trace.push(ll);
        if let Some(prev) = prev {
            if (ll - prev).abs() <= opts.tol * prev.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if iterations >= opts.max_iters.max(1) {
            break;
        }
        comps = m_step(&x, &resp, opts.k, lambda, Some(&comps))?;
    }

    let hard: Vec<usize> = resp
        .iter()
        .map(|row| {
            let mut best = 0;
            for (j, &v) in row.iter().enumerate() {
                if v > row[best] {
                    best = j;
                }
            }
            best
        })
        .collect();
    let model = GaussianMixtureModel {
        weights: comps.iter().map(|c| c.log_weight.exp()).collect(),
        means: comps.iter().map(|c| c.mean.iter().copied().collect()).collect(),
        covariances: comps
            .iter()
            .map(|c| {
                let s = c.chol.l() * c.chol.l().transpose();
                s.row_iter().map(|row| row.iter().copied().collect()).collect()
            })
            .collect(),
        regularization: lambda,
        log_likelihood: trace,
        converged,
    };
    let result = finish(Method::Em, g, points, compact_labels(&hard), Some(opts.seed), iterations)?;
    Ok((result, model))
}
