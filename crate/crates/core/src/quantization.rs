//! Fixed-rate quantization under a Riemann-Bregman distance.
//!
//! A codebook of `N` code vectors defines the nearest-code quantizer; its
//! distortion is the mean squared distance `E[d_φ(X, q(X))²]`, estimated on
//! samples. Lloyd iteration alternates the Voronoi partition of the samples
//! with moving each code to the Riemann-Bregman centroid of its cell, which is
//! the empirical form of the optimal codebook for a fixed partition.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::lloyd::{self, nearest};
use crate::points::PointSet;

pub use crate::lloyd::{empty_cell_repair, LloydState};

/// Code vectors under a generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CodebookRepr")]
pub struct Codebook {
    pub generator: Generator,
    pub codes: Vec<Vec<f64>>,
    #[serde(skip)]
    embedded: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct CodebookRepr {
    generator: Generator,
    codes: Vec<Vec<f64>>,
}

impl TryFrom<CodebookRepr> for Codebook {
    type Error = Error;
    fn try_from(r: CodebookRepr) -> Result<Self> {
        Codebook::new(r.generator, r.codes)
    }
}

impl Codebook {
    pub fn new(generator: Generator, codes: Vec<Vec<f64>>) -> Result<Self> {
        if codes.is_empty() {
            return Err(Error::invalid("a codebook needs at least one code"));
        }
        for i in 0..codes.len() {
            for j in 0..i {
                if codes[i] == codes[j] {
                    return Err(Error::invalid(format!("codes {j} and {i} coincide")));
                }
            }
        }
        let embedded = generator.embed_all(&codes)?;
        Ok(Codebook {
            generator,
            codes,
            embedded,
        })
    }

    /// Rate of the quantizer.
    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    /// Nearest code under `d_φ`; ties go to the lowest index.
    pub fn quantize(&self, x: &[f64]) -> Result<usize> {
        if x.len() != self.codes[0].len() {
            return Err(Error::invalid("point and codebook differ in dimension"));
        }
        let hx = self.generator.embed(x)?;
        Ok(nearest(&self.embedded, &hx).0)
    }

    /// Empirical distortion `(1/n) Σ d_φ(x_n, q(x_n))²`.
    pub fn distortion(&self, samples: &PointSet) -> Result<f64> {
        if samples.is_empty() {
            return Err(Error::invalid("distortion of an empty sample set"));
        }
        if samples.dim() != self.codes[0].len() {
            return Err(Error::invalid("samples and codebook differ in dimension"));
        }
        let embedded = samples.embed(&self.generator)?;
        let total: f64 = embedded.iter().map(|p| nearest(&self.embedded, p).1).sum();
        Ok(total / samples.len() as f64)
    }
}

/// Free-function form of [`Codebook::quantize`].
pub fn quantize(cb: &Codebook, x: &[f64]) -> Result<usize> {
    cb.quantize(x)
}

/// Free-function form of [`Codebook::distortion`].
pub fn distortion(cb: &Codebook, samples: &PointSet) -> Result<f64> {
    cb.distortion(samples)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LloydOptions {
    pub rate: usize,
    pub seed: u64,
    pub max_iters: usize,
    /// Relative distortion improvement below which iteration stops.
    pub tol: f64,
}

impl LloydOptions {
    pub fn new(rate: usize, seed: u64) -> Self {
        LloydOptions {
            rate,
            seed,
            max_iters: 200,
            tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizerReport {
    pub codebook: Codebook,
    pub assignments: Vec<usize>,
    pub distortion: f64,
    pub iterations: usize,
    pub distortion_trace: Vec<f64>,
    /// The final partition was a fixed point of the iteration, so each code
    /// is the centroid of its own cell.
    pub converged: bool,
}

/// Lloyd's algorithm with k-means++ seeding in embedded space.
pub fn lloyd(samples: &PointSet, g: &Generator, opts: &LloydOptions) -> Result<QuantizerReport> {
    if opts.rate == 0 {
        return Err(Error::invalid("rate must be at least 1"));
    }
    let distinct = samples.distinct_count();
    if opts.rate > distinct {
        return Err(Error::invalid(format!(
            "rate {} exceeds the {distinct} distinct samples",
            opts.rate
        )));
    }
    if !(opts.tol >= 0.0) {
        return Err(Error::invalid("tol must be nonnegative"));
    }
    let embedded = samples.embed(g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let init = lloyd::kmeans_plus_plus(&embedded, opts.rate, &mut rng);
    let run = lloyd::run(embedded, init, opts.max_iters, opts.tol);
    let codes = g.unembed_all(&run.state.codes)?;
    let distortion = *run.trace.last().expect("at least one iteration");
    Ok(QuantizerReport {
        codebook: Codebook {
            generator: g.clone(),
            codes,
            embedded: run.state.codes,
        },
        assignments: run.state.assignments,
        distortion,
        iterations: run.iterations,
        distortion_trace: run.trace,
        converged: run.converged,
    })
}
