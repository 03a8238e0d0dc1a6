use std::ops::RangeInclusive;

use serde::Serialize;

use crate::statevector::{memory_required, BYTES_PER_AMPLITUDE};

use super::BenchError;

/// Keeps `16 · 2^n` inside `u128`.
pub const MAX_COST_QUBITS: u32 = 120;

/// Classical versus quantum resources for an `n`-point (2^n) Fourier transform.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostRow {
    pub n: u32,
    pub classical_vectors: u128,
    /// `n · 2^n` butterfly operations
    pub classical_fft_ops: u128,
    pub classical_memory_bytes: u128,
    pub quantum_qubits: u32,
    /// H + controlled phases + final swaps
    pub quantum_gates: u128,
}

impl CostRow {
    pub fn new(n: u32) -> Self {
        let vectors = 1u128 << n;
        let n128 = u128::from(n);
        CostRow {
            n,
            classical_vectors: vectors,
            classical_fft_ops: n128 * vectors,
            classical_memory_bytes: BYTES_PER_AMPLITUDE * vectors,
            quantum_qubits: n,
            quantum_gates: n128 + n128 * (n128 - 1) / 2 + n128 / 2,
        }
    }
}

pub fn cost_table(n_range: RangeInclusive<u32>) -> Result<Vec<CostRow>, BenchError> {
    let (lo, hi) = (*n_range.start(), *n_range.end());
    if lo == 0 || hi > MAX_COST_QUBITS {
        return Err(BenchError::Config(format!("cost table needs 1 <= n <= {MAX_COST_QUBITS}, got {lo}..={hi}")));
    }
    Ok(n_range.map(CostRow::new).collect())
}

/// `(qubits, bytes)` rows of the statevector memory model.
pub fn memory_table(n_range: RangeInclusive<u32>) -> Vec<(u32, u128)> {
    n_range.map(|n| (n, memory_required(n))).collect()
}
