use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use qbench_core::bench::{cost_table, emit_report, memory_table, run_sweep, ReportKind, SweepConfig};
use qbench_core::circuit::{circuit_stats, parse_circuit, Circuit, Family};
use qbench_core::counts::CountsDistribution;
use qbench_core::metrics::compare;
use qbench_core::noise::{noisy_sample, NoiseModel};
use qbench_core::statevector::{format_gb, sample_counts, simulate};
use qbench_core::transpiler::{
    heavy_hex_target, transpile, verify_equivalence, HardwareTarget, Optimization, TargetPreset, TranspileOptions,
    MAX_EQUIV_LOGICAL,
};

/// Build, transpile, run and compare QFT/GHZ/W benchmark circuits.
#[derive(Parser)]
#[command(name = "qbench", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// RNG seed for layout, sampling and noise
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 4096)]
    shots: u64,
    /// eagle127, heavy-hex:<distance>, or a target JSON file
    #[arg(long, global = true, default_value = "eagle127")]
    target: String,
    /// noise model JSON file (defaults to the built-in model)
    #[arg(long, global = true)]
    noise: Option<PathBuf>,
    /// output file or directory, depending on the command
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print a benchmark circuit in text form
    Build { family: Family, n: usize },
    /// Depth/width/gate statistics as JSON
    Stats {
        /// circuit file or <family>:<n>
        circuit: String,
        /// count gates inside composite blocks
        #[arg(long)]
        decompose: bool,
    },
    /// Exact final statevector as CSV (index,re,im)
    Simulate { circuit: String },
    /// Map a circuit onto the target; --out names a directory
    Transpile {
        circuit: String,
        /// insert X-X dynamical decoupling pairs into idle windows
        #[arg(long)]
        dd: bool,
        /// skip single-qubit run fusion
        #[arg(long)]
        no_fuse: bool,
        /// also run the statevector equivalence check
        #[arg(long)]
        verify: bool,
    },
    /// Shot counts as JSON, noisy on the target unless --ideal
    Sample {
        circuit: String,
        #[arg(long)]
        ideal: bool,
    },
    /// Metrics between two counts JSON files (KL is first ‖ second)
    Compare {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Family × n × seed sweep with reports; --out names a directory
    Sweep {
        /// comma-separated subset of qft,ghz,w
        #[arg(long, value_delimiter = ',', default_values_t = Family::ALL.to_vec())]
        families: Vec<Family>,
        #[arg(long, default_value_t = 4)]
        n_min: usize,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        /// comma-separated row seeds (default: --seed)
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
        /// insert X-X dynamical decoupling pairs into idle windows
        #[arg(long)]
        dd: bool,
    },
    /// Classical FFT versus QFT resource table as CSV
    Cost {
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        #[arg(long, default_value_t = 30)]
        n_max: u32,
    },
    /// Statevector memory needed per qubit count
    Mem {
        #[arg(long, default_value_t = 30)]
        n_min: u32,
        #[arg(long, default_value_t = 37)]
        n_max: u32,
    },
}

/// Runtime outcome that is not an error: a sweep with failed rows.
enum Outcome {
    Done,
    Partial,
}

fn load_circuit(spec: &str) -> Result<Circuit> {
    if let Some((family, n)) = spec.split_once(':') {
        if let (Ok(family), Ok(n)) = (family.parse::<Family>(), n.parse::<usize>()) {
            return Ok(family.build(n)?);
        }
    }
    let text = fs::read_to_string(spec).with_context(|| format!("reading circuit {spec}"))?;
    parse_circuit(&text).with_context(|| format!("parsing circuit {spec}"))
}

fn load_target(spec: &str) -> Result<HardwareTarget> {
    if let Ok(preset) = spec.parse::<TargetPreset>() {
        return Ok(heavy_hex_target(preset)?);
    }
    if !Path::new(spec).exists() {
        bail!("target `{spec}` is neither a preset (eagle127, heavy-hex:D) nor an existing file");
    }
    let text = fs::read_to_string(spec).with_context(|| format!("reading target {spec}"))?;
    HardwareTarget::from_json(&text).with_context(|| format!("parsing target {spec}"))
}

fn load_noise(g: &Global) -> Result<NoiseModel> {
    match &g.noise {
        None => Ok(NoiseModel { seed: g.seed, ..NoiseModel::default() }),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading noise model {}", p.display()))?;
            NoiseModel::from_json(&text).with_context(|| format!("parsing noise model {}", p.display()))
        }
    }
}

fn load_counts(p: &Path) -> Result<CountsDistribution> {
    let text = fs::read_to_string(p).with_context(|| format!("reading counts {}", p.display()))?;
    CountsDistribution::from_json(&text).with_context(|| format!("parsing counts {}", p.display()))
}

/// Writes to `--out` when given, stdout otherwise.
fn emit(g: &Global, text: &str) -> Result<()> {
    match &g.out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn out_dir(g: &Global, default: &str) -> Result<PathBuf> {
    let dir = g.out.clone().unwrap_or_else(|| PathBuf::from(default));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn run(cli: Cli) -> Result<Outcome> {
    let g = &cli.global;
    match cli.command {
        Command::Build { family, n } => emit(g, &family.build(n)?.to_string())?,
        Command::Stats { circuit, decompose } => emit(g, &pretty(&circuit_stats(&load_circuit(&circuit)?, decompose)))?,
        Command::Simulate { circuit } => emit(g, &simulate(&load_circuit(&circuit)?)?.to_csv())?,
        Command::Transpile { circuit, dd, no_fuse, verify } => {
            let c = load_circuit(&circuit)?;
            let t = load_target(&g.target)?;
            let optimization = if no_fuse { Optimization::None } else { Optimization::OneQubitFuse };
            let tc = transpile(&c, &t, &TranspileOptions { seed: g.seed, optimization, dd })?;
            let dir = out_dir(g, "transpiled")?;
            fs::write(dir.join("circuit.txt"), tc.circuit.to_string())?;
            fs::write(dir.join("layout.json"), tc.layout.to_json())?;
            fs::write(dir.join("stats.json"), pretty(&tc.stats))?;
            if dd {
                fs::write(dir.join("dd_pulses.json"), pretty(&tc.dd_pulses))?;
            }
            println!("{}", pretty(&tc.stats).trim_end());
            if verify {
                if c.n_qubits() > MAX_EQUIV_LOGICAL {
                    bail!("--verify supports at most {MAX_EQUIV_LOGICAL} logical qubits");
                }
                let report = verify_equivalence(&c, &tc, 1e-8)?;
                println!("{}", pretty(&report).trim_end());
                if !report.equivalent {
                    bail!("transpiled circuit is not equivalent (deviation {:.3e})", report.max_deviation);
                }
            }
        }
        Command::Sample { circuit, ideal } => {
            let c = load_circuit(&circuit)?;
            let counts = if ideal {
                sample_counts(&simulate(&c)?, g.shots, g.seed)
            } else {
                let t = load_target(&g.target)?;
                let tc = transpile(&c, &t, &TranspileOptions { seed: g.seed, ..Default::default() })?;
                noisy_sample(&tc, &load_noise(g)?, g.shots)?
            };
            emit(g, &(counts.to_json() + "\n"))?;
        }
        Command::Compare { first, second, eps } => {
            let report = compare(&load_counts(&first)?, &load_counts(&second)?, eps)?;
            emit(g, &pretty(&report))?;
        }
        Command::Sweep { families, n_min, n_max, seeds, dd } => {
            let target = load_target(&g.target)?;
            let cfg = SweepConfig {
                families,
                n_range: n_min..=n_max,
                shots: g.shots,
                seeds: if seeds.is_empty() { vec![g.seed] } else { seeds },
                noise: load_noise(g)?,
                transpile: TranspileOptions { dd, ..Default::default() },
                ..SweepConfig::standard(target, out_dir(g, "sweep-out")?)
            };
            let outcome = run_sweep(&cfg)?;
            for kind in ReportKind::ALL {
                if outcome.rows.is_empty() && kind != ReportKind::Tables {
                    continue;
                }
                emit_report(&outcome.rows, kind, &cfg.output_dir)?;
            }
            println!(
                "{} rows, {} failed, written to {}",
                outcome.rows.len(),
                outcome.failures.len(),
                cfg.output_dir.display()
            );
            for f in &outcome.failures {
                eprintln!("failed: {} n={} seed={}: {}", f.family, f.n, f.seed, f.error);
            }
            if outcome.is_partial() {
                return Ok(Outcome::Partial);
            }
        }
        Command::Cost { n_min, n_max } => {
            let mut s = String::from(
                "n,classical_vectors,classical_fft_ops,classical_memory_bytes,quantum_qubits,quantum_gates\n",
            );
            for r in cost_table(n_min..=n_max)? {
                s += &format!(
                    "{},{},{},{},{},{}\n",
                    r.n,
                    r.classical_vectors,
                    r.classical_fft_ops,
                    r.classical_memory_bytes,
                    r.quantum_qubits,
                    r.quantum_gates
                );
            }
            emit(g, &s)?;
        }
        Command::Mem { n_min, n_max } => {
            if n_min > n_max {
                bail!("empty range {n_min}..={n_max}");
            }
            let mut s = String::from("qubits,bytes,ram\n");
            for (n, bytes) in memory_table(n_min..=n_max) {
                s += &format!("{n},{bytes},{}\n", format_gb(bytes));
            }
            emit(g, &s)?;
        }
    }
    Ok(Outcome::Done)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Partial) => ExitCode::from(1),
        Err(e) => {
            log::debug!("{e:?}");
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
