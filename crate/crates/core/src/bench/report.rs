//! CSV and hand-written SVG artifacts from sweep rows.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::circuit::Family;

use super::{io_err, BenchError, SweepRow};

/// Gate columns of the breakdown; anything else lands in `other`.
pub const GATE_COLUMNS: [&str; 4] = ["RZ", "SX", "X", "ECR"];
const METRICS: [&str; 4] = ["tvd", "kl", "js", "hellinger"];
/// Values below this are drawn at the floor of the log axis.
const LOG_FLOOR: f64 = 1e-6;
const FAMILY_COLORS: [&str; 3] = ["#1f77b4", "#d62728", "#2ca02c"];
const METRIC_DASHES: [&str; 4] = ["none", "6 3", "2 2", "10 3 2 3"];
const BAR_COLORS: [&str; 4] = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportKind {
    MetricsPlot,
    GateBreakdown,
    Tables,
}

impl ReportKind {
    pub const ALL: [ReportKind; 3] = [ReportKind::MetricsPlot, ReportKind::GateBreakdown, ReportKind::Tables];
}

impl fmt::Display for ReportKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportKind::MetricsPlot => "metrics-plot",
            ReportKind::GateBreakdown => "gate-breakdown",
            ReportKind::Tables => "tables",
        })
    }
}

impl FromStr for ReportKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ReportKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| format!("unknown report `{s}` (expected metrics-plot, gate-breakdown or tables)"))
    }
}

/// Writes the artifacts of `kind` into `out_dir` and returns their paths.
pub fn emit_report(rows: &[SweepRow], kind: ReportKind, out_dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
    if rows.is_empty() && kind != ReportKind::Tables {
        return Err(BenchError::EmptyRows(kind));
    }
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    match kind {
        ReportKind::MetricsPlot => metrics_plot(rows, out_dir),
        ReportKind::GateBreakdown => gate_breakdown(rows, out_dir),
        ReportKind::Tables => tables(rows, out_dir),
    }
}

fn write_file(path: PathBuf, contents: &str) -> Result<PathBuf, BenchError> {
    fs::write(&path, contents).map_err(io_err(&path))?;
    Ok(path)
}

fn metric_value(row: &SweepRow, metric: &str) -> f64 {
    match metric {
        "tvd" => row.metrics.tvd,
        "kl" => row.metrics.kl,
        "js" => row.metrics.js,
        _ => row.metrics.hellinger,
    }
}

/// Seed-averaged metric per (family, n).
fn seed_means(rows: &[SweepRow]) -> BTreeMap<(Family, usize), [f64; 4]> {
    let mut acc: BTreeMap<(Family, usize), ([f64; 4], usize)> = BTreeMap::new();
    for r in rows {
        let e = acc.entry((r.family, r.n)).or_insert(([0.0; 4], 0));
        for (slot, m) in e.0.iter_mut().zip(METRICS) {
            *slot += metric_value(r, m);
        }
        e.1 += 1;
    }
    acc.into_iter().map(|(k, (sum, cnt))| (k, sum.map(|s| s / cnt as f64))).collect()
}

#[derive(Serialize)]
struct SeriesPoint<'a> {
    family: Family,
    n: usize,
    metric: &'a str,
    value: f64,
}

fn metrics_plot(rows: &[SweepRow], out_dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
    let means = seed_means(rows);
    let csv_path = out_dir.join("metrics_plot.csv");
    let mut w = csv::Writer::from_path(&csv_path)?;
    for (&(family, n), values) in &means {
        for (metric, &value) in METRICS.iter().zip(values) {
            w.serialize(SeriesPoint { family, n, metric, value })?;
        }
    }
    w.flush().map_err(io_err(&csv_path))?;

    let (width, height) = (760.0, 460.0);
    let (left, right, top, bottom) = (70.0, 190.0, 30.0, 50.0);
    let n_lo = means.keys().map(|k| k.1).min().expect("non-empty");
    let n_hi = means.keys().map(|k| k.1).max().expect("non-empty");
    let logs: Vec<f64> = means.values().flatten().map(|v| v.max(LOG_FLOOR).log10()).collect();
    let y_lo = logs.iter().copied().fold(f64::INFINITY, f64::min).floor();
    let y_hi = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max).ceil().max(y_lo + 1.0);
    let x = |n: usize| {
        if n_hi == n_lo {
            left + (width - left - right) / 2.0
        } else {
            left + (n - n_lo) as f64 / (n_hi - n_lo) as f64 * (width - left - right)
        }
    };
    let y = |v: f64| top + (y_hi - v.max(LOG_FLOOR).log10()) / (y_hi - y_lo) * (height - top - bottom);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let (x0, x1, y0, y1) = (left, width - right, top, height - bottom);
    let _ = writeln!(svg, r#"<line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}" stroke="black"/>"#);
    let _ = writeln!(svg, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#);
    for n in n_lo..=n_hi {
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{}" text-anchor="middle">{n}</text>"#, x(n), y1 + 18.0);
    }
    let mut decade = y_lo as i32;
    while decade <= y_hi as i32 {
        let yy = y(10f64.powi(decade));
        let _ = writeln!(svg, r##"<line x1="{x0}" y1="{yy:.1}" x2="{x1}" y2="{yy:.1}" stroke="#ddd"/>"##);
        let _ = writeln!(svg, r#"<text x="{}" y="{:.1}" text-anchor="end">1e{decade}</text>"#, x0 - 6.0, yy + 4.0);
        decade += 1;
    }
    let _ =
        writeln!(svg, r#"<text x="{:.1}" y="{}" text-anchor="middle">qubits</text>"#, (x0 + x1) / 2.0, height - 12.0);

    let families: Vec<Family> = Family::ALL.into_iter().filter(|f| means.keys().any(|k| k.0 == *f)).collect();
    let mut legend_y = top;
    for family in &families {
        let color = FAMILY_COLORS[Family::ALL.iter().position(|f| f == family).expect("known family")];
        for (mi, metric) in METRICS.iter().enumerate() {
            let points: Vec<String> = means
                .iter()
                .filter(|(k, _)| k.0 == *family)
                .map(|(k, v)| format!("{:.1},{:.1}", x(k.1), y(v[mi])))
                .collect();
            let dash = METRIC_DASHES[mi];
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" stroke-dasharray="{dash}" points="{}"><title>{family} {metric}</title></polyline>"#,
                points.join(" ")
            );
            let lx = width - right + 12.0;
            let _ = writeln!(
                svg,
                r#"<line x1="{lx}" y1="{legend_y}" x2="{}" y2="{legend_y}" stroke="{color}" stroke-dasharray="{dash}"/><text x="{}" y="{}">{family} {metric}</text>"#,
                lx + 24.0,
                lx + 30.0,
                legend_y + 4.0
            );
            legend_y += 15.0;
        }
    }
    svg.push_str("</svg>\n");
    Ok(vec![csv_path, write_file(out_dir.join("metrics_plot.svg"), &svg)?])
}

#[derive(Serialize)]
struct BreakdownRow {
    family: Family,
    n: usize,
    seed: u64,
    rz: usize,
    sx: usize,
    x: usize,
    ecr: usize,
    other: usize,
    total: usize,
}

fn breakdown(row: &SweepRow) -> BreakdownRow {
    let h = &row.transpiled.gate_histogram;
    let get = |g: &str| h.get(g).copied().unwrap_or(0);
    let listed: usize = GATE_COLUMNS.iter().map(|g| get(g)).sum();
    BreakdownRow {
        family: row.family,
        n: row.n,
        seed: row.seed,
        rz: get("RZ"),
        sx: get("SX"),
        x: get("X"),
        ecr: get("ECR"),
        other: row.transpiled.gates - listed,
        total: row.transpiled.gates,
    }
}

fn gate_breakdown(rows: &[SweepRow], out_dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
    let csv_path = out_dir.join("gate_breakdown.csv");
    let mut w = csv::Writer::from_path(&csv_path)?;
    let mut per_family: BTreeMap<Family, [usize; 4]> = BTreeMap::new();
    for r in rows {
        let b = breakdown(r);
        let sums = per_family.entry(r.family).or_default();
        for (s, v) in sums.iter_mut().zip([b.rz, b.sx, b.x, b.ecr]) {
            *s += v;
        }
        w.serialize(b)?;
    }
    w.flush().map_err(io_err(&csv_path))?;

    let (width, height) = (640.0, 400.0);
    let (left, top, bottom) = (70.0, 30.0, 60.0);
    let peak = per_family.values().flatten().copied().max().unwrap_or(0).max(1) as f64;
    let group_w = (width - left - 20.0) / per_family.len() as f64;
    let bar_w = group_w * 0.8 / GATE_COLUMNS.len() as f64;
    let plot_h = height - top - bottom;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let base_y = height - bottom;
    let _ = writeln!(svg, r#"<line x1="{left}" y1="{base_y}" x2="{}" y2="{base_y}" stroke="black"/>"#, width - 20.0);
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="end">{peak}</text>"#, left - 6.0, top + 4.0);
    for (gi, (family, sums)) in per_family.iter().enumerate() {
        let gx = left + gi as f64 * group_w + group_w * 0.1;
        for (bi, (&count, gate)) in sums.iter().zip(GATE_COLUMNS).enumerate() {
            let h = count as f64 / peak * plot_h;
            let _ = writeln!(
                svg,
                r#"<rect x="{:.1}" y="{:.1}" width="{bar_w:.1}" height="{h:.1}" fill="{}"><title>{family} {gate}: {count}</title></rect>"#,
                gx + bi as f64 * bar_w,
                base_y - h,
                BAR_COLORS[bi]
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{}" text-anchor="middle">{family}</text>"#,
            gx + group_w * 0.4,
            base_y + 18.0
        );
    }
    for (bi, gate) in GATE_COLUMNS.iter().enumerate() {
        let lx = left + bi as f64 * 80.0;
        let _ = writeln!(
            svg,
            r#"<rect x="{lx}" y="{}" width="10" height="10" fill="{}"/><text x="{}" y="{}">{}</text>"#,
            height - 22.0,
            BAR_COLORS[bi],
            lx + 14.0,
            height - 13.0,
            gate.to_ascii_lowercase()
        );
    }
    svg.push_str("</svg>\n");
    Ok(vec![csv_path, write_file(out_dir.join("gate_breakdown.svg"), &svg)?])
}

#[derive(Serialize)]
struct TableRow {
    family: Family,
    section: &'static str,
    n: usize,
    seed: u64,
    depth: usize,
    width: usize,
    measurements: usize,
    gates: usize,
    barriers: usize,
    qubits: usize,
}

/// One block per family: base circuits, then transpiled circuits.
fn tables(rows: &[SweepRow], out_dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
    let path = out_dir.join("tables.csv");
    let mut w = csv::Writer::from_path(&path)?;
    if rows.is_empty() {
        w.write_record([
            "family",
            "section",
            "n",
            "seed",
            "depth",
            "width",
            "measurements",
            "gates",
            "barriers",
            "qubits",
        ])?;
    }
    let mut sorted: Vec<&SweepRow> = rows.iter().collect();
    sorted.sort_by_key(|r| (r.family, r.n, r.seed));
    for family in Family::ALL {
        for section in ["quantum", "transpiled"] {
            for r in sorted.iter().filter(|r| r.family == family) {
                let (s, qubits) =
                    if section == "quantum" { (&r.base, r.n) } else { (&r.transpiled, r.physical_qubits) };
                w.serialize(TableRow {
                    family,
                    section,
                    n: r.n,
                    seed: r.seed,
                    depth: s.depth,
                    width: s.width,
                    measurements: s.measurements,
                    gates: s.gates,
                    barriers: s.barriers,
                    qubits,
                })?;
            }
        }
    }
    w.flush().map_err(io_err(&path))?;
    Ok(vec![path])
}
