//! Riemann-Bregman distance, geodesics, centroids and balls.
//!
//! Everything here reduces to Euclidean geometry after the embedding `h`:
//! the distance is `‖h(x) − h(y)‖`, geodesics are straight segments between
//! `h(x)` and `h(y)` pulled back by `H`, and the centroid minimizing the sum of
//! squared distances is `H` of the mean of the embedded points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::Generator;

/// Squared Euclidean distance.
#[inline]
pub fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// Euclidean distance. [`distance`] evaluates exactly this expression on
/// embedded coordinates.
#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    squared_euclidean(a, b).sqrt()
}

fn check_dims(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::invalid(format!(
            "dimension mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    Ok(())
}

/// Riemann-Bregman distance `d_φ(x, y) = ‖h(x) − h(y)‖`.
pub fn distance(g: &Generator, x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(squared_distance(g, x, y)?.sqrt())
}

/// `d_φ(x, y)²`, the form used by quantization and clustering.
pub fn squared_distance(g: &Generator, x: &[f64], y: &[f64]) -> Result<f64> {
    check_dims(x, y)?;
    let hx = g.embed(x)?;
    let hy = g.embed(y)?;
    Ok(squared_euclidean(&hx, &hy))
}

/// Separable Bregman divergence `Σ_j φ(x_j) − φ(y_j) − (x_j − y_j) φ'(y_j)`.
///
/// Asymmetric in general. Tiny negative values from cancellation are clamped
/// to zero.
pub fn bregman_divergence(g: &Generator, x: &[f64], y: &[f64]) -> Result<f64> {
    check_dims(x, y)?;
    g.check_domain(x)?;
    g.check_domain(y)?;
    let total: f64 = x
        .iter()
        .zip(y)
        .map(|(&a, &b)| g.phi(a) - g.phi(b) - (a - b) * g.phi_prime(b))
        .sum();
    Ok(total.max(0.0))
}

/// A point on a geodesic together with its parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicSample {
    pub t: f64,
    pub point: Vec<f64>,
}

/// Samples the geodesic `γ_i(t) = H((1 − t) h(x_i) + t h(y_i))` at each `t`.
///
/// Parameters outside `[0, 1]` are rejected: the extended segment can leave
/// the embedded range (e.g. for `exp`).
pub fn geodesic(g: &Generator, x: &[f64], y: &[f64], ts: &[f64]) -> Result<Vec<GeodesicSample>> {
    check_dims(x, y)?;
    if let Some(&t) = ts.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::invalid(format!(
            "geodesic parameter {t} outside [0, 1]"
        )));
    }
    let hx = g.embed(x)?;
    let hy = g.embed(y)?;
    Ok(ts
        .iter()
        .map(|&t| GeodesicSample {
            t,
            point: hx
                .iter()
                .zip(&hy)
                .map(|(&a, &b)| g.h_inverse((1.0 - t) * a + t * b))
                .collect(),
        })
        .collect())
}

/// Arithmetic mean of embedded points, optionally weighted. Weights are
/// normalized internally; the sum runs in index order.
pub fn embedded_mean(points: &[Vec<f64>], weights: Option<&[f64]>) -> Result<Vec<f64>> {
    let first = points
        .first()
        .ok_or_else(|| Error::invalid("centroid of an empty point set"))?;
    let dim = first.len();
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::invalid(format!(
            "dimension mismatch: {} vs {dim}",
            p.len()
        )));
    }
    let mut acc = vec![0.0; dim];
    let total = match weights {
        None => {
            for p in points {
                for (a, v) in acc.iter_mut().zip(p) {
                    *a += v;
                }
            }
            points.len() as f64
        }
        Some(w) => {
            if w.len() != points.len() {
                return Err(Error::invalid(format!(
                    "{} weights for {} points",
                    w.len(),
                    points.len()
                )));
            }
            if w.iter().any(|&v| !(v.is_finite() && v >= 0.0)) {
                return Err(Error::invalid("weights must be finite and nonnegative"));
            }
            let total: f64 = w.iter().sum();
            if total <= 0.0 {
                return Err(Error::invalid("weights sum to zero"));
            }
            for (p, &wi) in points.iter().zip(w) {
                for (a, v) in acc.iter_mut().zip(p) {
                    *a += wi * v;
                }
            }
            total
        }
    };
    for a in &mut acc {
        *a /= total;
    }
    Ok(acc)
}

/// The Riemann-Bregman centroid `H(Σ w_n h(x_n) / Σ w_n)`, the unique
/// minimizer of `Σ w_n d_φ(x_n, ξ)²`.
pub fn centroid(g: &Generator, points: &[Vec<f64>], weights: Option<&[f64]>) -> Result<Vec<f64>> {
    let embedded = g.embed_all(points)?;
    let mean = embedded_mean(&embedded, weights)?;
    g.unembed(&mean)
}

/// Distance evaluated in dual coordinates `y = φ'(x)` through the conjugate
/// embedding: `‖h*(φ'(x)) − h*(φ'(y))‖`. Equal to [`distance`] up to rounding.
pub fn dual_distance(g: &Generator, x: &[f64], y: &[f64]) -> Result<f64> {
    check_dims(x, y)?;
    g.check_domain(x)?;
    g.check_domain(y)?;
    let c = g.conjugate()?;
    let sq: f64 = x
        .iter()
        .zip(y)
        .map(|(&a, &b)| {
            let d = (c.h_star)(g.phi_prime(a)) - (c.h_star)(g.phi_prime(b));
            d * d
        })
        .sum();
    Ok(sq.sqrt())
}

/// A closed Riemann-Bregman ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(Error::invalid(format!(
                "ball radius must be finite and nonnegative, got {radius}"
            )));
        }
        Ok(Ball { center, radius })
    }
}

/// `d_φ(center, y) ≤ radius`.
pub fn ball_contains(g: &Generator, ball: &Ball, y: &[f64]) -> Result<bool> {
    Ok(distance(g, &ball.center, y)? <= ball.radius)
}

/// Boundary of a 2-D ball: the embedded circle around `h(center)` sampled at
/// `n_samples` uniform angles and pulled back by `H`.
///
/// Fails when the circle leaves the embedded range, since part of the
/// Euclidean sphere then has no preimage.
pub fn ball_boundary_polyline(g: &Generator, ball: &Ball, n_samples: usize) -> Result<Vec<Vec<f64>>> {
    if ball.center.len() != 2 {
        return Err(Error::invalid("ball boundaries are only drawn in two dimensions"));
    }
    if n_samples == 0 {
        return Err(Error::invalid("n_samples must be positive"));
    }
    let c = g.embed(&ball.center)?;
    let range = g.embedded_range();
    for (j, &cj) in c.iter().enumerate() {
        for v in [cj - ball.radius, cj + ball.radius] {
            if !range.contains(v) {
                return Err(g.domain_error(j, v, crate::error::Space::Embedded));
            }
        }
    }
    (0..n_samples)
        .map(|i| {
            let theta = std::f64::consts::TAU * i as f64 / n_samples as f64;
            g.unembed(&[
                c[0] + ball.radius * theta.cos(),
                c[1] + ball.radius * theta.sin(),
            ])
        })
        .collect()
}
