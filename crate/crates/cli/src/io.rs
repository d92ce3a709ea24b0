//! CSV and file plumbing.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use riemann_bregman::clustering::ClusteringResult;
use riemann_bregman::PointSet;

/// Points read from a CSV file with a header row.
///
/// Every column is a coordinate except one optional integer column named
/// `label` (ground truth); a `cluster` column is read too but only used for
/// plotting.
pub struct Table {
    pub points: PointSet,
    pub labels: Option<Vec<usize>>,
    pub clusters: Option<Vec<usize>>,
}

fn parse_index(raw: &str, line: u64, column: &str) -> Result<usize> {
    raw.trim()
        .parse()
        .with_context(|| format!("line {line}, column `{column}`: `{raw}` is not a nonnegative integer"))
}

pub fn read_points(path: &Path) -> Result<Table> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let headers = reader.headers()?.clone();
    let label_col = headers.iter().position(|h| h == "label");
    let cluster_col = headers.iter().position(|h| h == "cluster");
    let coord_cols: Vec<usize> = (0..headers.len())
        .filter(|&i| Some(i) != label_col && Some(i) != cluster_col)
        .collect();
    if coord_cols.is_empty() {
        bail!("{}: no coordinate columns", path.display());
    }
    let mut points = Vec::new();
    let mut labels = Vec::new();
    let mut clusters = Vec::new();
    for record in reader.records() {
        let record = record.with_context(|| format!("{}: malformed CSV", path.display()))?;
        let line = record.position().map_or(0, |p| p.line());
        let mut p = Vec::with_capacity(coord_cols.len());
        for &c in &coord_cols {
            let raw = &record[c];
            let v: f64 = raw
                .parse()
                .with_context(|| format!("line {line}, column `{}`: `{raw}` is not a number", &headers[c]))?;
            p.push(v);
        }
        points.push(p);
        if let Some(c) = label_col {
            labels.push(parse_index(&record[c], line, "label")?);
        }
        if let Some(c) = cluster_col {
            clusters.push(parse_index(&record[c], line, "cluster")?);
        }
    }
    if points.is_empty() {
        bail!("{}: no data rows", path.display());
    }
    let points = match label_col {
        Some(_) => PointSet::with_labels(points, labels.clone())?,
        None => PointSet::new(points)?,
    };
    Ok(Table {
        points,
        labels: label_col.map(|_| labels),
        clusters: cluster_col.map(|_| clusters),
    })
}

/// Data row number (1-based, after the header) of point `i`, for messages.
pub fn data_line(point: usize) -> usize {
    point + 2
}

fn coordinate_headers(dim: usize) -> Vec<String> {
    (1..=dim).map(|j| format!("x{j}")).collect()
}

pub fn points_csv(points: &PointSet) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = coordinate_headers(points.dim());
    if points.labels().is_some() {
        header.push("label".into());
    }
    w.write_record(&header)?;
    for (i, p) in points.points().iter().enumerate() {
        let mut row: Vec<String> = p.iter().map(f64::to_string).collect();
        if let Some(l) = points.labels() {
            row.push(l[i].to_string());
        }
        w.write_record(&row)?;
    }
    Ok(w.into_inner()?)
}

/// One row per point: coordinates, assigned cluster, and ground truth when known.
pub fn assignments_csv(points: &PointSet, result: &ClusteringResult) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = coordinate_headers(points.dim());
    header.push("cluster".into());
    if points.labels().is_some() {
        header.push("label".into());
    }
    w.write_record(&header)?;
    for (i, p) in points.points().iter().enumerate() {
        let mut row: Vec<String> = p.iter().map(f64::to_string).collect();
        row.push(result.assignments[i].to_string());
        if let Some(l) = points.labels() {
            row.push(l[i].to_string());
        }
        w.write_record(&row)?;
    }
    Ok(w.into_inner()?)
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => write_file(p, bytes),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
}

pub fn json_bytes<T: serde::Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value)?;
    v.push(b'\n');
    Ok(v)
}
