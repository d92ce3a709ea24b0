//! Riemannian geometry induced by separable Bregman divergences.
//!
//! A separable Bregman generator `Φ(x) = Σ φ(x_j)` on `J^K` induces the
//! diagonal metric `φ''(x_i) δ_ij`. The coordinatewise embedding
//! `h = ∫ √φ''` is an isometry onto a subset of Euclidean space, so
//! distances, geodesics, centroids, Voronoi cells, quantizers and clusterings
//! in the curved space are their Euclidean counterparts pulled back by
//! `H = h⁻¹`.
//!
//! ```
//! use riemann_bregman::{geometry, make_generator};
//!
//! let burg = make_generator("burg").unwrap();
//! let d = geometry::distance(&burg, &[1.0, 1.0], &[std::f64::consts::E; 2]).unwrap();
//! assert!((d - 2f64.sqrt()).abs() < 1e-15);
//! ```
//!
//! The guide in `book/` walks through each module.

pub mod clustering;
pub mod error;
pub mod evaluation;
pub mod generators;
pub mod geometry;
pub mod lloyd;
pub mod points;
pub mod quantization;
pub mod voronoi;

pub use error::{Error, Result};
pub use generators::{make_generator, Builtin, Generator, Interval};
pub use points::PointSet;

// Book chapters are compiled as doctests so their snippets stay correct.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/generators.md")]
    mod generators {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/voronoi.md")]
    mod voronoi {}
    #[doc = include_str!("../../../book/src/quantization.md")]
    mod quantization {}
    #[doc = include_str!("../../../book/src/clustering.md")]
    mod clustering {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
