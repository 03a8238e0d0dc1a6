//! Benchmarking toolkit for small QFT, GHZ and W circuits: exact simulation,
//! transpilation to a heavy-hex ECR machine, noisy execution and
//! distribution-divergence metrics.

pub mod bench;
pub mod circuit;
pub mod counts;
pub mod gates;
pub mod metrics;
pub mod noise;
pub mod statevector;
pub mod transpiler;

pub use circuit::{build_ghz, build_qft, build_w, circuit_stats, Circuit, CircuitStats, Family, GateKind};
pub use counts::{CountsDistribution, Distribution};
pub use statevector::{ideal_distribution, memory_required, sample_counts, simulate, Statevector};
