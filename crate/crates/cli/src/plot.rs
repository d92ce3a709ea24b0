//! SVG scatter plots of two-dimensional point clouds.

use std::fmt::Write as _;

use riemann_bregman::voronoi::palette;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 36.0;

/// Points colored by group with optional centers drawn as crosses.
pub fn scatter(points: &[Vec<f64>], groups: Option<&[usize]>, centers: &[Vec<f64>], title: &str) -> String {
    let all = points.iter().chain(centers);
    let (mut x_lo, mut x_hi, mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in all {
        x_lo = x_lo.min(p[0]);
        x_hi = x_hi.max(p[0]);
        y_lo = y_lo.min(p[1]);
        y_hi = y_hi.max(p[1]);
    }
    let pad = |lo: f64, hi: f64| {
        let span = (hi - lo).max(1e-9);
        (lo - 0.05 * span, hi + 0.05 * span)
    };
    let (x_lo, x_hi) = pad(x_lo, x_hi);
    let (y_lo, y_hi) = pad(y_lo, y_hi);
    let inner = SIZE - 2.0 * MARGIN;
    let map = |p: &[f64]| {
        (
            MARGIN + (p[0] - x_lo) / (x_hi - x_lo) * inner,
            MARGIN + (y_hi - p[1]) / (y_hi - y_lo) * inner,
        )
    };

    let mut svg = format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    );
    let _ = writeln!(svg, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{inner}" height="{inner}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        SIZE / 2.0,
        MARGIN * 0.6,
        escape(title)
    );
    let bottom = SIZE - MARGIN * 0.35;
    for (x, y, anchor, value) in [
        (MARGIN, bottom, "start", x_lo),
        (SIZE - MARGIN, bottom, "end", x_hi),
        (MARGIN * 0.9, SIZE - MARGIN, "end", y_lo),
        (MARGIN * 0.9, MARGIN + 10.0, "end", y_hi),
    ] {
        let _ = writeln!(
            svg,
            r#"<text x="{x}" y="{y}" font-family="sans-serif" font-size="10" text-anchor="{anchor}">{value:.2}</text>"#
        );
    }
    for (i, p) in points.iter().enumerate() {
        let (x, y) = map(p);
        let color = groups.map_or("#444444", |g| palette(g[i]));
        let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.2" fill="{color}" fill-opacity="0.8"/>"#);
    }
    for (c, p) in centers.iter().enumerate() {
        let (x, y) = map(p);
        let _ = writeln!(
            svg,
            r#"<path d="M{:.2},{:.2} L{:.2},{:.2} M{:.2},{:.2} L{:.2},{:.2}" stroke="black" stroke-width="3"/>"#,
            x - 6.0,
            y - 6.0,
            x + 6.0,
            y + 6.0,
            x - 6.0,
            y + 6.0,
            x + 6.0,
            y - 6.0
        );
        let _ = writeln!(
            svg,
            r#"<path d="M{:.2},{:.2} L{:.2},{:.2} M{:.2},{:.2} L{:.2},{:.2}" stroke="{}" stroke-width="1.5"/>"#,
            x - 5.0,
            y - 5.0,
            x + 5.0,
            y + 5.0,
            x - 5.0,
            y + 5.0,
            x + 5.0,
            y - 5.0,
            palette(c)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_circle_per_point_and_one_cross_per_center() {
        let pts = vec![vec![1.0, 2.0], vec![3.0, 4.0], vec![2.0, 2.5]];
        let svg = scatter(&pts, Some(&[0, 1, 1]), &[vec![2.0, 3.0]], "a < b");
        assert_eq!(svg.matches("<circle").count(), 3);
        assert_eq!(svg.matches("<path").count(), 2);
        assert!(svg.contains("a &lt; b"));
    }

    #[test]
    fn single_point_does_not_divide_by_zero() {
        let svg = scatter(&[vec![1.0, 1.0]], None, &[], "");
        assert!(!svg.contains("NaN"));
    }
}
