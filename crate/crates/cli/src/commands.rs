//! Subcommand definitions and dispatch.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use riemann_bregman::clustering::{cluster, ClusterConfig, ClusteringResult, Linkage, Method};
use riemann_bregman::evaluation::{
    evaluate, format_summary, generate_dataset, run_cells, summarize, EvaluationReport, ExperimentConfig, SyntheticSpec,
};
use riemann_bregman::geometry::{self, Ball};
use riemann_bregman::quantization::{lloyd, LloydOptions};
use riemann_bregman::voronoi::{cells_to_svg, exact_riemann_cells, rasterize, BBox, Flavor, SiteSet, EDGE_SAMPLES};
use riemann_bregman::{Builtin, Error as CoreError, Generator, PointSet};

use crate::io::{self, data_line};
use crate::plot;
use crate::UsageError;

#[derive(Debug, Parser)]
#[command(name = "rbg", version, about = "Riemannian geometry of separable Bregman divergences")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw the synthetic Gaussian dataset as CSV (x1,x2,label).
    GenData(GenData),
    /// Cluster points from a CSV file.
    Cluster(ClusterCmd),
    /// Render a Voronoi diagram as PGM or SVG.
    Voronoi(VoronoiCmd),
    /// Fixed-rate quantizer design with Lloyd's algorithm.
    Quantize(QuantizeCmd),
    /// Run a method x metric x seed grid and summarize it.
    Experiment(ExperimentCmd),
    /// Distance or divergence between two points.
    Distance(DistanceCmd),
    /// Sample the geodesic between two points.
    Geodesic(GeodesicCmd),
    /// Centroid of the points in a CSV file.
    Centroid(CentroidCmd),
    /// Boundary of a metric ball as a CSV polyline.
    Ball(BallCmd),
    /// Scatter plot of a CSV file, optionally colored by a clustering.
    Plot(PlotCmd),
}

/// Metric flag value: a generator name or the embedding written as `h`.
fn parse_metric(s: &str) -> Result<Builtin, String> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    let b = match compact.trim_start_matches("h(x)=") {
        "euclidean" | "x" => Builtin::Euclidean,
        "exp" | "exp(0.5x)" | "exp(x/2)" => Builtin::Exp,
        "negexp" | "exp(-0.5x)" | "exp(-x/2)" => Builtin::NegExp,
        "shannon" | "sqrt" | "sqrt(x)" => Builtin::Shannon,
        "burg" | "ln" | "log" | "ln(x)" | "log(x)" => Builtin::Burg,
        _ => {
            return Err(format!(
                "unknown metric `{s}` (expected euclidean, exp, negexp, shannon, burg or an alias such as sqrt(x), ln(x), exp(0.5x), exp(-0.5x), x)"
            ))
        }
    };
    Ok(b)
}

fn parse_metrics(s: &str) -> Result<Vec<Builtin>, String> {
    if s.trim() == "all" {
        return Ok(Builtin::ALL.to_vec());
    }
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let b = parse_metric(part)?;
        if !out.contains(&b) {
            out.push(b);
        }
    }
    if out.is_empty() {
        return Err("no metrics given".into());
    }
    Ok(out)
}

fn parse_methods(s: &str) -> Result<Vec<Method>, String> {
    if s.trim() == "all" {
        return Ok(Method::ALL.to_vec());
    }
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let m: Method = part.parse().map_err(|e: CoreError| e.to_string())?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.is_empty() {
        return Err("no methods given".into());
    }
    Ok(out)
}

/// `0-9`, `1,4,7` or a mix such as `0-3,10`.
fn parse_seeds(s: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || format!("bad seed list entry `{part}` (expected N or A-B)");
        match part.split_once('-') {
            Some((a, b)) => {
                let a: u64 = a.trim().parse().map_err(|_| bad())?;
                let b: u64 = b.trim().parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err("no seeds given".into());
    }
    Ok(out)
}

fn at_least(s: &str, min: usize) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(n) if n >= min => Ok(n),
        _ => Err(format!("expected an integer >= {min}, got `{s}`")),
    }
}

fn positive(s: &str) -> Result<usize, String> {
    at_least(s, 1)
}

fn at_least_two(s: &str) -> Result<usize, String> {
    at_least(s, 2)
}

fn at_least_three(s: &str) -> Result<usize, String> {
    at_least(s, 3)
}

fn parse_vector(s: &str) -> Result<Vec<f64>, String> {
    let v: Result<Vec<f64>, _> = s.split(',').map(|p| p.trim().parse::<f64>()).collect();
    match v {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(format!("`{s}` is not a comma-separated list of numbers")),
    }
}

fn parse_bbox(s: &str) -> Result<BBox, String> {
    let v = parse_vector(s)?;
    if v.len() != 4 {
        return Err(format!("bbox needs four numbers x_lo,x_hi,y_lo,y_hi, got {}", v.len()));
    }
    BBox::new(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

/// `N` for a square raster or `WxH`.
fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("bad size `{s}` (expected N or WxH with positive integers)");
    let (w, h) = match s.split_once(['x', 'X']) {
        Some((w, h)) => (w.trim().parse().map_err(|_| bad())?, h.trim().parse().map_err(|_| bad())?),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if w == 0 || h == 0 {
        return Err(bad());
    }
    Ok((w, h))
}

/// Adds the input file and data row to domain errors raised while reading points.
fn with_row(err: CoreError, path: &Path) -> anyhow::Error {
    let row = match &err {
        CoreError::Domain { point: Some(i), .. } => Some(*i),
        _ => None,
    };
    let err = anyhow::Error::new(err);
    match row {
        Some(i) => err.context(format!("{}: data row {} (line {})", path.display(), i + 1, data_line(i))),
        None => err,
    }
}

fn check_domain(points: &PointSet, g: &Generator, path: &Path) -> Result<()> {
    for (i, p) in points.points().iter().enumerate() {
        g.check_domain(p).map_err(|e| with_row(e.at_point(i), path))?;
    }
    Ok(())
}

fn read_spec(path: Option<&Path>) -> Result<SyntheticSpec> {
    let spec = match path {
        None => SyntheticSpec::default(),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("{}: invalid dataset spec", p.display()))?
        }
    };
    spec.validate().context("invalid dataset spec")?;
    Ok(spec)
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenData(c) => gen_data(c),
        Command::Cluster(c) => cluster_cmd(c),
        Command::Voronoi(c) => voronoi(c),
        Command::Quantize(c) => quantize(c),
        Command::Experiment(c) => experiment(c),
        Command::Distance(c) => distance(c),
        Command::Geodesic(c) => geodesic(c),
        Command::Centroid(c) => centroid(c),
        Command::Ball(c) => ball(c),
        Command::Plot(c) => plot_cmd(c),
    }
}

#[derive(Debug, Args)]
struct GenData {
    /// JSON dataset spec; defaults to the built-in four-cluster mixture.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Overrides the spec's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn gen_data(c: GenData) -> Result<()> {
    let mut spec = read_spec(c.spec.as_deref())?;
    if let Some(s) = c.seed {
        spec.seed = s;
    }
    let data = generate_dataset(&spec)?;
    io::emit(c.out.as_deref(), &io::points_csv(&data)?)
}

#[derive(Debug, Args)]
struct ClusterCmd {
    /// Input CSV with a header row; a `label` column is treated as ground truth.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_parser = |s: &str| s.parse::<Method>().map_err(|e| e.to_string()))]
    method: Method,
    #[arg(long, value_parser = parse_metric)]
    metric: Builtin,
    #[arg(long, default_value_t = 4, value_parser = positive)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// HAC linkage (hac only; default ward).
    #[arg(long, value_parser = |s: &str| s.parse::<Linkage>().map_err(|e| e.to_string()))]
    linkage: Option<Linkage>,
    /// Skip the k-means consolidation step of HCPC.
    #[arg(long)]
    no_consolidate: bool,
    /// Principal components kept by HCPC (default: all).
    #[arg(long)]
    n_components: Option<usize>,
    /// Z-score the embedded coordinates before clustering.
    #[arg(long)]
    standardize: bool,
    /// JSON report (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-point assignments as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// SVG scatter plot of the clustering (2-D data only).
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Serialize)]
struct ClusterOutput<'a> {
    #[serde(flatten)]
    result: &'a ClusteringResult,
    linkage: Option<Linkage>,
    /// Within-cluster sum of squared embedded distances.
    objective: f64,
    evaluation: Option<EvaluationReport>,
}

fn cluster_cmd(c: ClusterCmd) -> Result<()> {
    if c.no_consolidate && c.method != Method::Hcpc {
        return Err(UsageError(format!("--no-consolidate only applies to hcpc, not {}", c.method)).into());
    }
    let mut cfg = ClusterConfig::new(c.method, c.k, c.seed);
    cfg.linkage = c.linkage;
    cfg.consolidate = !c.no_consolidate;
    cfg.n_components = c.n_components;
    cfg.standardize = c.standardize;
    cfg.validate().map_err(|e| UsageError(e.to_string()))?;
    if c.method == Method::Hac && cfg.linkage.is_none() {
        cfg.linkage = Some(Linkage::default());
    }

    let table = io::read_points(&c.input)?;
    let g = c.metric.generator();
    check_domain(&table.points, &g, &c.input)?;
    let result = cluster(&table.points, &g, &cfg).map_err(|e| with_row(e, &c.input))?;
    let evaluation = match table.points.labels() {
        Some(labels) => Some(evaluate(&result, labels, c.seed, cfg.linkage)?),
        None => None,
    };
    let out = ClusterOutput {
        result: &result,
        linkage: cfg.linkage,
        objective: result.objective(&g, &table.points)?,
        evaluation,
    };
    if let Some(p) = &c.csv {
        io::write_file(p, &io::assignments_csv(&table.points, &result)?)?;
    }
    if let Some(p) = &c.plot {
        require_2d(table.points.dim(), "--plot")?;
        let title = format!("{} / {}", result.method, c.metric.h_label());
        let svg = plot::scatter(table.points.points(), Some(&result.assignments), &result.centers, &title);
        io::write_file(p, svg.as_bytes())?;
    }
    io::emit(c.out.as_deref(), &io::json_bytes(&out)?)
}

fn require_2d(dim: usize, what: &str) -> Result<()> {
    if dim != 2 {
        return Err(UsageError(format!("{what} needs two-dimensional data, got {dim} columns")).into());
    }
    Ok(())
}

#[derive(Debug, Args)]
struct VoronoiCmd {
    /// CSV of sites (two coordinate columns).
    #[arg(long)]
    sites: PathBuf,
    #[arg(long, value_parser = parse_metric)]
    metric: Builtin,
    #[arg(long, default_value = "riemann", value_parser = |s: &str| s.parse::<Flavor>().map_err(|e| e.to_string()))]
    flavor: Flavor,
    /// View window `x_lo,x_hi,y_lo,y_hi`; defaults to the sites' extent
    /// padded by 10% and kept inside the metric's domain.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_bbox)]
    bbox: Option<BBox>,
    /// Raster size `N` or `WxH` (for --exact, the SVG side length).
    #[arg(long, default_value = "256", value_parser = parse_size)]
    size: (usize, usize),
    /// Output path ending in .pgm or .svg.
    #[arg(long)]
    out: PathBuf,
    /// Exact cell polygons with curved edges instead of a raster (riemann only, SVG).
    #[arg(long)]
    exact: bool,
}

/// Pads `[lo, hi]` by 10% without crossing the domain's finite ends.
fn padded(lo: f64, hi: f64, dom_lo: f64, dom_hi: f64) -> (f64, f64) {
    let span = hi - lo;
    let pad = if span > 0.0 { 0.1 * span } else { 0.5 * lo.abs().max(1.0) };
    let mut a = lo - pad;
    let mut b = hi + pad;
    if a <= dom_lo {
        a = 0.5 * (dom_lo + lo);
    }
    if b >= dom_hi {
        b = 0.5 * (dom_hi + hi);
    }
    (a, b)
}

fn default_bbox(sites: &PointSet, g: &Generator) -> Result<BBox> {
    let ext = sites.bounding_box().context("no sites")?;
    let d = g.domain();
    let (x_lo, x_hi) = padded(ext[0].0, ext[0].1, d.lo, d.hi);
    let (y_lo, y_hi) = padded(ext[1].0, ext[1].1, d.lo, d.hi);
    Ok(BBox::new(x_lo, x_hi, y_lo, y_hi)?)
}

fn voronoi(c: VoronoiCmd) -> Result<()> {
    let ext = c.out.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    let svg = match ext.as_deref() {
        Some("svg") => true,
        Some("pgm") => false,
        _ => return Err(UsageError(format!("--out {} must end in .pgm or .svg", c.out.display())).into()),
    };
    if c.exact && (!svg || c.flavor != Flavor::Riemann) {
        return Err(UsageError("--exact draws riemann cells and writes SVG only".into()).into());
    }
    let table = io::read_points(&c.sites)?;
    require_2d(table.points.dim(), "voronoi")?;
    let g = c.metric.generator();
    check_domain(&table.points, &g, &c.sites)?;
    let bbox = match c.bbox {
        Some(b) => b,
        None => default_bbox(&table.points, &g)?,
    };
    let sites = SiteSet::new(g, table.points.points().to_vec())?;
    let bytes = if c.exact {
        let cells = exact_riemann_cells(&sites, bbox, EDGE_SAMPLES)?;
        cells_to_svg(&sites, &cells, bbox, c.size.0.max(c.size.1)).into_bytes()
    } else {
        let raster = rasterize(&sites, c.flavor, bbox, c.size.0, c.size.1)?;
        if svg {
            raster.to_svg().into_bytes()
        } else {
            raster.to_pgm()?
        }
    };
    io::write_file(&c.out, &bytes)
}

#[derive(Debug, Args)]
struct QuantizeCmd {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_parser = parse_metric)]
    metric: Builtin,
    /// Number of codewords.
    #[arg(long, value_parser = positive)]
    rate: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    max_iters: usize,
    /// Relative distortion improvement at which iteration stops.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// JSON report (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn quantize(c: QuantizeCmd) -> Result<()> {
    if !(c.tol >= 0.0) {
        return Err(UsageError(format!("--tol must be nonnegative, got {}", c.tol)).into());
    }
    let table = io::read_points(&c.input)?;
    let g = c.metric.generator();
    check_domain(&table.points, &g, &c.input)?;
    let opts = LloydOptions {
        max_iters: c.max_iters,
        tol: c.tol,
        ..LloydOptions::new(c.rate, c.seed)
    };
    let report = lloyd(&table.points, &g, &opts).map_err(|e| with_row(e, &c.input))?;
    io::emit(c.out.as_deref(), &io::json_bytes(&report)?)
}

#[derive(Debug, Args)]
struct ExperimentCmd {
    /// JSON dataset spec; defaults to the built-in four-cluster mixture.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Overrides the dataset spec's seed.
    #[arg(long)]
    data_seed: Option<u64>,
    /// `all` or a comma-separated list of kmeans, em, hcpc, hac.
    #[arg(long, default_value = "all", value_parser = parse_methods)]
    methods: std::vec::Vec<Method>,
    /// `all` or a comma-separated list of metric names.
    #[arg(long, default_value = "all", value_parser = parse_metrics)]
    metrics: std::vec::Vec<Builtin>,
    #[arg(long, default_value_t = 4, value_parser = positive)]
    k: usize,
    /// Clustering seeds: `0-9`, `1,4,7` or a mix.
    #[arg(long, default_value = "0-9", value_parser = parse_seeds)]
    seeds: std::vec::Vec<u64>,
    /// Linkage used by the hac runs.
    #[arg(long, default_value = "ward", value_parser = |s: &str| s.parse::<Linkage>().map_err(|e| e.to_string()))]
    linkage: Linkage,
    #[arg(long)]
    no_consolidate: bool,
    #[arg(long)]
    standardize: bool,
    /// Directory for reports.csv, runs/, summary.txt and summary.json.
    #[arg(long)]
    out_dir: PathBuf,
    /// Also write an SVG scatter per run into plots/.
    #[arg(long)]
    plots: bool,
}

fn run_name(r: &EvaluationReport) -> String {
    format!("{}-{}-seed{}", r.method, r.generator, r.seed)
}

fn reports_csv(reports: &[EvaluationReport]) -> Result<Vec<u8>> {
    let width = reports.iter().map(|r| r.sizes.len()).max().unwrap_or(0);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = ["method", "generator", "linkage", "seed", "k", "accuracy", "ari", "nmi"]
        .map(String::from)
        .to_vec();
    header.extend((1..=width).map(|c| format!("size{c}")));
    w.write_record(&header)?;
    for r in reports {
        let mut row = vec![
            r.method.to_string(),
            r.generator.clone(),
            r.linkage.map(|l| l.to_string()).unwrap_or_default(),
            r.seed.to_string(),
            r.k.to_string(),
            format!("{:.6}", r.accuracy),
            format!("{:.6}", r.adjusted_rand_index),
            format!("{:.6}", r.normalized_mutual_information),
        ];
        row.extend((0..width).map(|c| r.sizes.get(c).map(|s| s.to_string()).unwrap_or_default()));
        w.write_record(&row)?;
    }
    Ok(w.into_inner()?)
}

fn experiment(c: ExperimentCmd) -> Result<()> {
    let mut spec = read_spec(c.spec.as_deref())?;
    if let Some(s) = c.data_seed {
        spec.seed = s;
    }
    let data = generate_dataset(&spec)?;
    let generators = c.metrics.iter().map(|&b| b.generator()).collect();
    let mut cfg = ExperimentConfig::new(c.methods.clone(), generators, c.k, c.seeds.clone());
    cfg.linkage = c.linkage;
    cfg.consolidate = !c.no_consolidate;
    cfg.standardize = c.standardize;
    let runs = run_cells(&data, &cfg)?;
    let reports: Vec<EvaluationReport> = runs.iter().map(|r| r.report.clone()).collect();
    let rows = summarize(&reports);
    let table = format_summary(&rows);

    let dir = &c.out_dir;
    io::write_file(&dir.join("data.csv"), &io::points_csv(&data)?)?;
    io::write_file(&dir.join("reports.csv"), &reports_csv(&reports)?)?;
    for run in &runs {
        let name = run_name(&run.report);
        io::write_file(&dir.join("runs").join(format!("{name}.json")), &io::json_bytes(run)?)?;
        if c.plots && data.dim() == 2 {
            let title = format!("{name} (accuracy {:.3})", run.report.accuracy);
            let svg = plot::scatter(data.points(), Some(&run.result.assignments), &run.result.centers, &title);
            io::write_file(&dir.join("plots").join(format!("{name}.svg")), svg.as_bytes())?;
        }
    }
    io::write_file(&dir.join("summary.json"), &io::json_bytes(&rows)?)?;
    io::write_file(&dir.join("summary.txt"), table.as_bytes())?;
    print!("{table}");
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Measure {
    /// Geodesic distance of the induced metric.
    Riemann,
    /// Bregman divergence from x to y.
    Bregman,
    /// Distance computed in dual coordinates.
    Dual,
}

#[derive(Debug, Args)]
struct DistanceCmd {
    #[arg(long, value_parser = parse_metric)]
    metric: Builtin,
    /// First point, comma-separated.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
    x: std::vec::Vec<f64>,
    /// Second point, comma-separated.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
    y: std::vec::Vec<f64>,
    #[arg(long, value_enum, default_value = "riemann")]
    measure: Measure,
}

fn distance(c: DistanceCmd) -> Result<()> {
    let g = c.metric.generator();
    let d = match c.measure {
        Measure::Riemann => geometry::distance(&g, &c.x, &c.y)?,
        Measure::Bregman => geometry::bregman_divergence(&g, &c.x, &c.y)?,
        Measure::Dual => geometry::dual_distance(&g, &c.x, &c.y)?,
    };
    println!("{d}");
    Ok(())
}

#[derive(Debug, Args)]
struct GeodesicCmd {
    #[arg(long, value_parser = parse_metric)]
    metric: Builtin,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
    x: std::vec::Vec<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
    y: std::vec::Vec<f64>,
    /// Explicit parameters in [0, 1], comma-separated.
    #[arg(long, value_parser = parse_vector, conflicts_with = "samples")]
    t: Option<std::vec::Vec<f64>>,
    /// Number of evenly spaced parameters from 0 to 1.
    #[arg(long, default_value_t = 11, value_parser = at_least_two)]
    samples: usize,
    /// Output CSV (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn geodesic(c: GeodesicCmd) -> Result<()> {
    let ts = c
        .t
        .unwrap_or_else(|| (0..c.samples).map(|i| i as f64 / (c.samples - 1) as f64).collect());
    let g = c.metric.generator();
    let samples = geometry::geodesic(&g, &c.x, &c.y, &ts)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t".to_string()];
    header.extend((1..=c.x.len()).map(|j| format!("x{j}")));
    w.write_record(&header)?;
    for s in &samples {
        let mut row = vec![s.t.to_string()];
        row.extend(s.point.iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    io::emit(c.out.as_deref(), &w.into_inner()?)
}

#[derive(Debug, Args)]
struct CentroidCmd {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_parser = parse_metric)]
    metric: Builtin,
}

fn centroid(c: CentroidCmd) -> Result<()> {
    let table = io::read_points(&c.input)?;
    let g = c.metric.generator();
    check_domain(&table.points, &g, &c.input)?;
    let m = geometry::centroid(&g, table.points.points(), None)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record((1..=m.len()).map(|j| format!("x{j}")))?;
    w.write_record(m.iter().map(f64::to_string))?;
    io::emit(None, &w.into_inner()?)
}

#[derive(Debug, Args)]
struct BallCmd {
    #[arg(long, value_parser = parse_metric)]
    metric: Builtin,
    /// Two-dimensional center, comma-separated.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
    center: std::vec::Vec<f64>,
    #[arg(long)]
    radius: f64,
    #[arg(long, default_value_t = 128, value_parser = at_least_three)]
    samples: usize,
    /// Output CSV (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn ball(c: BallCmd) -> Result<()> {
    let g = c.metric.generator();
    let b = Ball::new(c.center, c.radius)?;
    let poly = geometry::ball_boundary_polyline(&g, &b, c.samples)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x1", "x2"])?;
    for p in &poly {
        w.write_record(p.iter().map(f64::to_string))?;
    }
    io::emit(c.out.as_deref(), &w.into_inner()?)
}

#[derive(Debug, Args)]
struct PlotCmd {
    /// Two-column CSV; a `cluster` (or else `label`) column colors the points.
    #[arg(long = "in")]
    input: PathBuf,
    /// JSON written by `rbg cluster`; its assignments and centers are drawn.
    #[arg(long)]
    result: Option<PathBuf>,
    #[arg(long, default_value = "")]
    title: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Deserialize)]
struct PlotResult {
    assignments: Vec<usize>,
    centers: Vec<Vec<f64>>,
}

fn plot_cmd(c: PlotCmd) -> Result<()> {
    let table = io::read_points(&c.input)?;
    require_2d(table.points.dim(), "plot")?;
    let (groups, centers) = match &c.result {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
            let r: PlotResult =
                serde_json::from_str(&text).with_context(|| format!("{}: not a clustering result", p.display()))?;
            if r.assignments.len() != table.points.len() {
                return Err(CoreError::InvalidArgument(format!(
                    "{} has {} assignments but {} has {} points",
                    p.display(),
                    r.assignments.len(),
                    c.input.display(),
                    table.points.len()
                ))
                .into());
            }
            (Some(r.assignments), r.centers)
        }
        None => (table.clusters.or(table.labels), Vec::new()),
    };
    let svg = plot::scatter(table.points.points(), groups.as_deref(), &centers, &c.title);
    io::write_file(&c.out, svg.as_bytes())
}
