//! Family × width × seed sweep: build, transpile, run ideal and noisy, compare.

mod cost;
mod report;

use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{circuit_stats, CircuitStats, Family, MAX_BUILD_QUBITS};
use crate::metrics::{compare, MetricReport};
use crate::noise::{noisy_sample, NoiseModel};
use crate::statevector::ideal_distribution;
use crate::transpiler::{transpile, HardwareTarget, TranspileOptions};

pub use cost::{cost_table, memory_table, CostRow, MAX_COST_QUBITS};
pub use report::{emit_report, ReportKind, GATE_COLUMNS};

pub const SWEEP_CSV_HEADER: [&str; 13] = [
    "family",
    "n",
    "seed",
    "base_depth",
    "base_width",
    "base_gates",
    "transp_depth",
    "transp_width",
    "transp_gates",
    "tvd",
    "kl",
    "js",
    "hellinger",
];

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid sweep configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0} report needs at least one row")]
    EmptyRows(ReportKind),
}

pub(crate) fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> BenchError + '_ {
    move |source| BenchError::Io { path: path.to_path_buf(), source }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub families: Vec<Family>,
    pub n_range: RangeInclusive<usize>,
    pub shots: u64,
    pub seeds: Vec<u64>,
    /// Row seed `s` runs the noise model with seed `noise.seed + s`.
    pub noise: NoiseModel,
    pub target: HardwareTarget,
    /// `seed` is replaced by the row seed.
    pub transpile: TranspileOptions,
    pub output_dir: PathBuf,
}

impl SweepConfig {
    /// Every family at n = 4..=10, 4096 shots, one seed.
    pub fn standard(target: HardwareTarget, output_dir: impl Into<PathBuf>) -> Self {
        SweepConfig {
            families: Family::ALL.to_vec(),
            n_range: 4..=10,
            shots: 4096,
            seeds: vec![0],
            noise: NoiseModel::default(),
            target,
            transpile: TranspileOptions::default(),
            output_dir: output_dir.into(),
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let (lo, hi) = (*self.n_range.start(), *self.n_range.end());
        if lo > hi {
            return Err(BenchError::Config(format!("empty qubit range {lo}..={hi}")));
        }
        for f in &self.families {
            if lo < f.min_qubits() || hi > MAX_BUILD_QUBITS {
                return Err(BenchError::Config(format!(
                    "{f} needs n in {}..={MAX_BUILD_QUBITS}, got {lo}..={hi}",
                    f.min_qubits()
                )));
            }
        }
        if self.shots == 0 {
            return Err(BenchError::Config("shots must be at least 1".into()));
        }
        if self.seeds.is_empty() {
            return Err(BenchError::Config("at least one seed is required".into()));
        }
        self.noise.validate().map_err(|e| BenchError::Config(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    pub base: CircuitStats,
    pub transpiled: CircuitStats,
    pub physical_qubits: usize,
    pub metrics: MetricReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowFailure {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub failures: Vec<RowFailure>,
}

impl SweepOutcome {
    pub fn is_partial(&self) -> bool {
        !self.failures.is_empty()
    }
}

#[derive(Serialize)]
struct CsvRow {
    family: Family,
    n: usize,
    seed: u64,
    base_depth: usize,
    base_width: usize,
    base_gates: usize,
    transp_depth: usize,
    transp_width: usize,
    transp_gates: usize,
    tvd: f64,
    kl: f64,
    js: f64,
    hellinger: f64,
}

impl From<&SweepRow> for CsvRow {
    fn from(r: &SweepRow) -> Self {
        CsvRow {
            family: r.family,
            n: r.n,
            seed: r.seed,
            base_depth: r.base.depth,
            base_width: r.base.width,
            base_gates: r.base.gates,
            transp_depth: r.transpiled.depth,
            transp_width: r.transpiled.width,
            transp_gates: r.transpiled.gates,
            tvd: r.metrics.tvd,
            kl: r.metrics.kl,
            js: r.metrics.js,
            hellinger: r.metrics.hellinger,
        }
    }
}

/// Build → stats → transpile → stats → ideal → noisy → compare for one cell.
/// Also returns the histogram JSON for the pair.
fn run_row(cfg: &SweepConfig, family: Family, n: usize, seed: u64) -> Result<(SweepRow, serde_json::Value), String> {
    let c = family.build(n).map_err(|e| e.to_string())?;
    let base = circuit_stats(&c, false);
    let opts = TranspileOptions { seed, ..cfg.transpile };
    let tc = transpile(&c, &cfg.target, &opts).map_err(|e| e.to_string())?;
    let ideal = ideal_distribution(family, n).map_err(|e| e.to_string())?;
    let nm = NoiseModel { seed: cfg.noise.seed.wrapping_add(seed), ..cfg.noise };
    let noisy = noisy_sample(&tc, &nm, cfg.shots).map_err(|e| e.to_string())?;
    let metrics = compare(&ideal, &noisy, None).map_err(|e| e.to_string())?;
    let hist = serde_json::json!({
        "family": family,
        "n": n,
        "seed": seed,
        "shots": cfg.shots,
        "ideal": ideal.probs(),
        "noisy": noisy.counts(),
    });
    let row =
        SweepRow { family, n, seed, base, transpiled: tc.stats, physical_qubits: cfg.target.n_physical(), metrics };
    Ok((row, hist))
}

pub fn write_sweep_csv(rows: &[SweepRow], path: &Path) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_path(path)?;
    if rows.is_empty() {
        w.write_record(SWEEP_CSV_HEADER)?;
    }
    for r in rows {
        w.serialize(CsvRow::from(r))?;
    }
    w.flush().map_err(io_err(path))
}

/// Runs every (family, n, seed) cell. A failing cell is logged and recorded
/// in `failures`; the rest of the sweep continues. Writes `sweep.csv`,
/// `sweep.json` and `histograms/<family>_<n>_seed<seed>.json`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome, BenchError> {
    cfg.validate()?;
    let hist_dir = cfg.output_dir.join("histograms");
    fs::create_dir_all(&hist_dir).map_err(io_err(&hist_dir))?;

    let mut outcome = SweepOutcome { rows: Vec::new(), failures: Vec::new() };
    for &family in &cfg.families {
        for n in cfg.n_range.clone() {
            for &seed in &cfg.seeds {
                match run_row(cfg, family, n, seed) {
                    Ok((row, hist)) => {
                        log::info!("{family} n={n} seed={seed}: hellinger {:.4}", row.metrics.hellinger);
                        let path = hist_dir.join(format!("{family}_{n}_seed{seed}.json"));
                        let text = serde_json::to_string_pretty(&hist).expect("histogram serialize");
                        fs::write(&path, text).map_err(io_err(&path))?;
                        outcome.rows.push(row);
                    }
                    Err(error) => {
                        log::warn!("{family} n={n} seed={seed} failed: {error}");
                        outcome.failures.push(RowFailure { family, n, seed, error });
                    }
                }
            }
        }
    }

    write_sweep_csv(&outcome.rows, &cfg.output_dir.join("sweep.csv"))?;
    let json_path = cfg.output_dir.join("sweep.json");
    let json = serde_json::to_string_pretty(&outcome).expect("sweep serialize");
    fs::write(&json_path, json).map_err(io_err(&json_path))?;
    Ok(outcome)
}
