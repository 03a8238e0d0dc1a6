use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Circuit, GateKind};

/// Structural summary in the layout of the depth/width/gate tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitStats {
    pub depth: usize,
    pub width: usize,
    pub gates: usize,
    pub measurements: usize,
    pub barriers: usize,
    pub gate_histogram: BTreeMap<String, usize>,
}

/// Depth counts measurements and ignores barriers entirely. With
/// `decompose = false` a composite instruction is a single gate.
pub fn circuit_stats(c: &Circuit, decompose: bool) -> CircuitStats {
    let flat;
    let circuit = if decompose {
        flat = c.inlined();
        &flat
    } else {
        c
    };

    let mut qubit_level = vec![0usize; circuit.n_qubits()];
    let mut clbit_level = vec![0usize; circuit.n_clbits()];
    let mut depth = 0;
    let mut measurements = 0;
    let mut barriers = 0;
    let mut gate_histogram = BTreeMap::new();

    for inst in circuit.instructions() {
        match inst.kind {
            GateKind::BARRIER => {
                barriers += 1;
                continue;
            }
            GateKind::MEASURE => measurements += 1,
            _ => *gate_histogram.entry(inst.kind.name().to_string()).or_insert(0) += 1,
        }
        let below =
            inst.qubits.iter().map(|&q| qubit_level[q]).chain(inst.clbit.map(|b| clbit_level[b])).max().unwrap_or(0);
        let level = below + 1;
        for &q in &inst.qubits {
            qubit_level[q] = level;
        }
        if let Some(b) = inst.clbit {
            clbit_level[b] = level;
        }
        depth = depth.max(level);
    }

    CircuitStats {
        depth,
        width: circuit.n_qubits() + circuit.n_clbits(),
        gates: gate_histogram.values().sum(),
        measurements,
        barriers,
        gate_histogram,
    }
}
