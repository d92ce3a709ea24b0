//! Voronoi diagrams of a site set under four dissimilarities.
//!
//! * `left`: `δ_Φ(x, y_i)`
//! * `right`: `δ_Φ(y_i, x)`
//! * `symmetrized`: `(δ_Φ(x, y_i) + δ_Φ(y_i, x)) / 2`
//! * `riemann`: `d_φ(x, y_i)`
//!
//! Only the Riemann-Bregman diagram is the pullback of a Euclidean Voronoi
//! diagram, which is what [`exact_riemann_cells`] computes.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{Builtin, Generator};
use crate::geometry::squared_euclidean;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Left,
    Right,
    Symmetrized,
    Riemann,
}

impl Flavor {
    pub const ALL: [Flavor; 4] = [
        Flavor::Left,
        Flavor::Right,
        Flavor::Symmetrized,
        Flavor::Riemann,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Flavor::Left => "left",
            Flavor::Right => "right",
            Flavor::Symmetrized => "symmetrized",
            Flavor::Riemann => "riemann",
        }
    }
}

impl FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Flavor::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown Voronoi flavor `{s}` (expected left, right, symmetrized or riemann)"
                ))
            })
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Distinct sites inside the generator's domain, with their embeddings cached.
#[derive(Debug, Clone)]
pub struct SiteSet {
    generator: Generator,
    sites: Vec<Vec<f64>>,
    embedded: Vec<Vec<f64>>,
}

impl SiteSet {
    pub fn new(generator: Generator, sites: Vec<Vec<f64>>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::invalid("a site set needs at least one site"));
        }
        let dim = sites[0].len();
        if let Some(i) = sites.iter().position(|s| s.len() != dim) {
            return Err(Error::invalid(format!("site {i} has wrong dimension")));
        }
        for i in 0..sites.len() {
            for j in 0..i {
                if sites[i] == sites[j] {
                    return Err(Error::invalid(format!("sites {j} and {i} coincide")));
                }
            }
        }
        let embedded = generator.embed_all(&sites)?;
        Ok(SiteSet {
            generator,
            sites,
            embedded,
        })
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn sites(&self) -> &[Vec<f64>] {
        &self.sites
    }

    pub fn embedded(&self) -> &[Vec<f64>] {
        &self.embedded
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Separable Bregman divergence without domain checks; callers validate.
    fn divergence(&self, x: &[f64], y: &[f64]) -> f64 {
        let g = &self.generator;
        if g.builtin() == Some(Builtin::Euclidean) {
            // exact form; the generic one cancels and can flip near-ties
            return 0.5 * squared_euclidean(x, y);
        }
        x.iter()
            .zip(y)
            .map(|(&a, &b)| g.phi(a) - g.phi(b) - (a - b) * g.phi_prime(b))
            .sum()
    }

    /// Dissimilarity between an in-domain point and site `i`; the Riemann
    /// flavor returns the squared distance (same argmin).
    fn dissimilarity(&self, flavor: Flavor, x: &[f64], hx: &[f64], i: usize) -> f64 {
        let y = &self.sites[i];
        match flavor {
            Flavor::Left => self.divergence(x, y),
            Flavor::Right => self.divergence(y, x),
            Flavor::Symmetrized => 0.5 * (self.divergence(x, y) + self.divergence(y, x)),
            Flavor::Riemann => squared_euclidean(hx, &self.embedded[i]),
        }
    }

    fn classify_unchecked(&self, flavor: Flavor, x: &[f64], hx: &[f64]) -> usize {
        let mut best = (0, f64::INFINITY);
        for i in 0..self.sites.len() {
            let d = self.dissimilarity(flavor, x, hx, i);
            if d < best.1 {
                best = (i, d);
            }
        }
        best.0
    }
}

/// Index of the site minimizing the flavor's dissimilarity to `point`;
/// ties go to the lowest index.
pub fn classify(point: &[f64], sites: &SiteSet, flavor: Flavor) -> Result<usize> {
    if point.len() != sites.sites[0].len() {
        return Err(Error::invalid("point and sites differ in dimension"));
    }
    let hx = sites.generator.embed(point)?;
    Ok(sites.classify_unchecked(flavor, point, &hx))
}

/// Axis-aligned rectangle `[x_lo, x_hi] × [y_lo, y_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl BBox {
    pub fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Result<Self> {
        let ok = [x_lo, x_hi, y_lo, y_hi].iter().all(|v| v.is_finite()) && x_lo < x_hi && y_lo < y_hi;
        if !ok {
            return Err(Error::invalid(format!(
                "degenerate bounding box [{x_lo}, {x_hi}] x [{y_lo}, {y_hi}]"
            )));
        }
        Ok(BBox {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        })
    }

    pub fn width(&self) -> f64 {
        self.x_hi - self.x_lo
    }

    pub fn height(&self) -> f64 {
        self.y_hi - self.y_lo
    }

    fn check_closure(&self, g: &Generator) -> Result<()> {
        let d = g.domain();
        for (j, v) in [(0, self.x_lo), (0, self.x_hi), (1, self.y_lo), (1, self.y_hi)] {
            if !d.closure_contains(v) {
                return Err(g.domain_error(j, v, crate::error::Space::Original));
            }
        }
        Ok(())
    }
}

/// Labels of a `width × height` pixel grid, row-major with row 0 at `y_hi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoronoiRaster {
    pub bbox: BBox,
    pub width: usize,
    pub height: usize,
    pub flavor: Flavor,
    pub labels: Vec<usize>,
}

impl VoronoiRaster {
    /// Point at the center of pixel `(col, row)`.
    pub fn pixel_center(&self, col: usize, row: usize) -> [f64; 2] {
        pixel_center(&self.bbox, self.width, self.height, col, row)
    }

    /// Pixel containing `p`, if it lies inside the box.
    pub fn pixel_of(&self, p: &[f64]) -> Option<(usize, usize)> {
        let b = &self.bbox;
        if !(b.x_lo..=b.x_hi).contains(&p[0]) || !(b.y_lo..=b.y_hi).contains(&p[1]) {
            return None;
        }
        let col = (((p[0] - b.x_lo) / b.width()) * self.width as f64) as usize;
        let row = (((b.y_hi - p[1]) / b.height()) * self.height as f64) as usize;
        Some((col.min(self.width - 1), row.min(self.height - 1)))
    }

    pub fn label(&self, col: usize, row: usize) -> usize {
        self.labels[row * self.width + col]
    }

    /// Binary PGM (P5), one byte per pixel holding the site index.
    pub fn to_pgm(&self) -> Result<Vec<u8>> {
        if let Some(&big) = self.labels.iter().find(|&&l| l > 255) {
            return Err(Error::invalid(format!(
                "PGM export holds at most 256 sites (found label {big})"
            )));
        }
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.labels.iter().map(|&l| l as u8));
        Ok(out)
    }

    /// SVG with one rectangle per horizontal run of equal labels.
    pub fn to_svg(&self) -> String {
        let mut svg = svg_header(self.width as f64, self.height as f64);
        for row in 0..self.height {
            let mut col = 0;
            while col < self.width {
                let label = self.label(col, row);
                let start = col;
                while col < self.width && self.label(col, row) == label {
                    col += 1;
                }
                let _ = writeln!(
                    svg,
                    r#"<rect x="{start}" y="{row}" width="{}" height="1" fill="{}"/>"#,
                    col - start,
                    palette(label)
                );
            }
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn pixel_center(b: &BBox, width: usize, height: usize, col: usize, row: usize) -> [f64; 2] {
    [
        b.x_lo + (col as f64 + 0.5) / width as f64 * b.width(),
        b.y_hi - (row as f64 + 0.5) / height as f64 * b.height(),
    ]
}

/// Classifies every pixel center. Rows are evaluated in parallel; each pixel
/// is independent so the output matches sequential evaluation exactly.
pub fn rasterize(
    sites: &SiteSet,
    flavor: Flavor,
    bbox: BBox,
    width: usize,
    height: usize,
) -> Result<VoronoiRaster> {
    if sites.sites[0].len() != 2 {
        return Err(Error::invalid("rasterization needs two-dimensional sites"));
    }
    if width == 0 || height == 0 {
        return Err(Error::invalid("raster size must be at least 1x1"));
    }
    bbox.check_closure(&sites.generator)?;
    let g = &sites.generator;
    let rows: Vec<Result<Vec<usize>>> = (0..height)
        .into_par_iter()
        .map(|row| {
            (0..width)
                .map(|col| {
                    let p = pixel_center(&bbox, width, height, col, row);
                    let hp = g.embed(&p)?;
                    Ok(sites.classify_unchecked(flavor, &p, &hp))
                })
                .collect()
        })
        .collect();
    let mut labels = Vec::with_capacity(width * height);
    for r in rows {
        labels.extend(r?);
    }
    Ok(VoronoiRaster {
        bbox,
        width,
        height,
        flavor,
        labels,
    })
}

/// One edge of an embedded Voronoi cell and its curved preimage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellEdge {
    /// Site on the other side, or `None` for the bounding box.
    pub neighbor: Option<usize>,
    pub embedded: [[f64; 2]; 2],
    /// The embedded segment sampled uniformly and mapped through `H`.
    pub preimage: Vec<Vec<f64>>,
}

/// A Riemann-Bregman Voronoi cell: a convex polygon in embedded space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiemannCell {
    pub site: usize,
    /// Counter-clockwise vertices in embedded coordinates; empty if the cell
    /// misses the box.
    pub polygon: Vec<[f64; 2]>,
    pub edges: Vec<CellEdge>,
}

impl RiemannCell {
    /// Shoelace area in embedded coordinates.
    pub fn embedded_area(&self) -> f64 {
        polygon_area(&self.polygon)
    }
}

pub fn polygon_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let twice: f64 = (0..n)
        .map(|i| {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            a[0] * b[1] - b[0] * a[1]
        })
        .sum();
    0.5 * twice.abs()
}

/// Default number of samples along each pulled-back edge.
pub const EDGE_SAMPLES: usize = 64;

/// The embedded box `h(bbox)`, which must have a finite image.
pub fn embedded_bbox(g: &Generator, bbox: &BBox) -> Result<BBox> {
    let lo = g.embed(&[bbox.x_lo, bbox.y_lo])?;
    let hi = g.embed(&[bbox.x_hi, bbox.y_hi])?;
    BBox::new(lo[0], hi[0], lo[1], hi[1])
}

/// Exact Riemann-Bregman Voronoi diagram inside `bbox`.
///
/// Each cell is the embedded box clipped by the `n − 1` bisector half-planes
/// of its embedded site (O(n²) overall), and every edge is sampled at
/// `edge_samples` points and pulled back through `H`.
pub fn exact_riemann_cells(sites: &SiteSet, bbox: BBox, edge_samples: usize) -> Result<Vec<RiemannCell>> {
    if sites.sites[0].len() != 2 {
        return Err(Error::invalid("exact cells need two-dimensional sites"));
    }
    if edge_samples < 2 {
        return Err(Error::invalid("need at least two samples per edge"));
    }
    let g = &sites.generator;
    let h = &sites.embedded;
    for i in 0..h.len() {
        for j in 0..i {
            if h[i] == h[j] {
                return Err(Error::invalid(format!(
                    "sites {j} and {i} coincide after embedding"
                )));
            }
        }
    }
    let eb = embedded_bbox(g, &bbox)?;
    let mut cells = Vec::with_capacity(h.len());
    for i in 0..h.len() {
        // (vertex, label of the edge leaving it)
        let mut poly: Vec<([f64; 2], Option<usize>)> = vec![
            ([eb.x_lo, eb.y_lo], None),
            ([eb.x_hi, eb.y_lo], None),
            ([eb.x_hi, eb.y_hi], None),
            ([eb.x_lo, eb.y_hi], None),
        ];
        for j in 0..h.len() {
            if j == i || poly.is_empty() {
                continue;
            }
            // keep 2(h_j − h_i)·p ≤ |h_j|² − |h_i|²
            let nx = 2.0 * (h[j][0] - h[i][0]);
            let ny = 2.0 * (h[j][1] - h[i][1]);
            let c = (h[j][0] * h[j][0] + h[j][1] * h[j][1]) - (h[i][0] * h[i][0] + h[i][1] * h[i][1]);
            poly = clip(&poly, |p| nx * p[0] + ny * p[1] - c, j);
        }
        let edges = poly
            .iter()
            .enumerate()
            .map(|(k, &(a, label))| {
                let b = poly[(k + 1) % poly.len()].0;
                let preimage = (0..edge_samples)
                    .map(|s| {
                        let t = s as f64 / (edge_samples - 1) as f64;
                        let u = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
                        pull_back(g, &u)
                    })
                    .collect();
                CellEdge {
                    neighbor: label,
                    embedded: [a, b],
                    preimage,
                }
            })
            .collect();
        cells.push(RiemannCell {
            site: i,
            polygon: poly.into_iter().map(|(v, _)| v).collect(),
            edges,
        });
    }
    Ok(cells)
}

/// `H` applied to a point of the embedded box. Box corners map back to the
/// original box, so this stays inside the embedded range.
fn pull_back(g: &Generator, u: &[f64; 2]) -> Vec<f64> {
    vec![g.h_inverse(u[0]), g.h_inverse(u[1])]
}

/// Sutherland–Hodgman clip of a convex polygon against `f(p) ≤ 0`, keeping
/// track of which constraint produced each edge.
fn clip(
    poly: &[([f64; 2], Option<usize>)],
    f: impl Fn(&[f64; 2]) -> f64,
    label: usize,
) -> Vec<([f64; 2], Option<usize>)> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..n {
        let (a, la) = poly[k];
        let b = poly[(k + 1) % n].0;
        let fa = f(&a);
        let fb = f(&b);
        let a_in = fa <= 0.0;
        let b_in = fb <= 0.0;
        let cross = || {
            let t = fa / (fa - fb);
            [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
        };
        match (a_in, b_in) {
            (true, true) => out.push((a, la)),
            (true, false) => {
                out.push((a, la));
                out.push((cross(), Some(label)));
            }
            (false, true) => out.push((cross(), la)),
            (false, false) => {}
        }
    }
    // drop zero-length edges left by clips through a vertex
    out.dedup_by(|b, a| a.0 == b.0);
    if out.len() > 1 && out[0].0 == out[out.len() - 1].0 {
        out.pop();
    }
    if out.len() < 3 {
        out.clear();
    }
    out
}

const PALETTE: [&str; 16] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5", "#c49c94",
];

/// Fixed 16-color palette, cycling by index.
pub fn palette(index: usize) -> &'static str {
    PALETTE[index % PALETTE.len()]
}

pub(crate) fn svg_header(width: f64, height: f64) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    )
}

/// SVG of exact cells drawn in original coordinates: each cell's boundary is
/// the concatenation of its pulled-back edges.
pub fn cells_to_svg(sites: &SiteSet, cells: &[RiemannCell], bbox: BBox, size: usize) -> String {
    let s = size as f64;
    let map = |p: &[f64]| {
        (
            (p[0] - bbox.x_lo) / bbox.width() * s,
            (bbox.y_hi - p[1]) / bbox.height() * s,
        )
    };
    let mut svg = svg_header(s, s);
    for cell in cells {
        if cell.edges.is_empty() {
            continue;
        }
        let mut d = String::new();
        for (k, e) in cell.edges.iter().enumerate() {
            for (m, p) in e.preimage.iter().enumerate() {
                let (x, y) = map(p);
                let cmd = if k == 0 && m == 0 { 'M' } else { 'L' };
                let _ = write!(d, "{cmd}{x:.3},{y:.3} ");
            }
        }
        d.push('Z');
        let _ = writeln!(
            svg,
            r#"<path d="{d}" fill="{}" fill-opacity="0.5" stroke="black" stroke-width="1"/>"#,
            palette(cell.site)
        );
    }
    for site in sites.sites() {
        let (x, y) = map(site);
        let _ = writeln!(svg, r#"<circle cx="{x:.3}" cy="{y:.3}" r="3" fill="black"/>"#);
    }
    svg.push_str("</svg>\n");
    svg
}
