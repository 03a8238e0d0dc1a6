//! X–X dynamical decoupling on idle windows of an ASAP schedule.

use serde::{Deserialize, Serialize};

use crate::circuit::{circuit_stats, GateKind, Instruction};

use super::target::HardwareTarget;
use super::{TranspileError, TranspiledCircuit};

/// One inserted decoupling pulse with its scheduled start time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DdPulse {
    pub qubit: usize,
    pub start_ns: f64,
    pub duration_ns: f64,
}

/// An idle gap between two consecutive operations on one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdleWindow {
    pub qubit: usize,
    pub start_ns: f64,
    pub end_ns: f64,
    /// index of the instruction that closes the window
    pub before: usize,
}

fn duration_of(t: &HardwareTarget, inst: &Instruction) -> Result<f64, TranspileError> {
    if inst.kind == GateKind::BARRIER {
        return Ok(0.0);
    }
    let name = inst.kind.name();
    t.duration(name).ok_or_else(|| TranspileError::MissingDuration(name.to_string()))
}

/// ASAP schedule; barriers synchronise their qubits. Returns every gap
/// between consecutive operations (barriers included) on each qubit.
pub fn idle_windows(
    instructions: &[Instruction],
    n_qubits: usize,
    t: &HardwareTarget,
) -> Result<Vec<IdleWindow>, TranspileError> {
    let mut free_at = vec![0.0f64; n_qubits];
    let mut touched = vec![false; n_qubits];
    let mut windows = Vec::new();
    for (idx, inst) in instructions.iter().enumerate() {
        let dur = duration_of(t, inst)?;
        let start = inst.qubits.iter().map(|&q| free_at[q]).fold(0.0, f64::max);
        for &q in &inst.qubits {
            if touched[q] && start > free_at[q] {
                windows.push(IdleWindow { qubit: q, start_ns: free_at[q], end_ns: start, before: idx });
            }
            // a barrier ends a window but does not start activity on idle qubits
            if inst.kind != GateKind::BARRIER {
                touched[q] = true;
            }
            free_at[q] = start + dur;
        }
    }
    Ok(windows)
}

/// Insert a symmetric X–X pair into every idle window at least twice the X
/// duration long. Pulses sit at the quarter and three-quarter points of the
/// window. Ideal semantics are unchanged since X·X = I.
pub fn insert_dd(tc: &TranspiledCircuit, t: &HardwareTarget) -> Result<TranspiledCircuit, TranspileError> {
    let x_dur = t.duration("X").ok_or_else(|| TranspileError::MissingDuration("X".to_string()))?;
    let src = tc.circuit.instructions();
    let windows = idle_windows(src, tc.circuit.n_qubits(), t)?;

    let mut inserts: Vec<Vec<usize>> = vec![Vec::new(); src.len()];
    let mut pulses = tc.dd_pulses.clone();
    for w in windows.iter().filter(|w| w.end_ns - w.start_ns >= 2.0 * x_dur) {
        let span = w.end_ns - w.start_ns;
        for frac in [0.25, 0.75] {
            pulses.push(DdPulse {
                qubit: w.qubit,
                start_ns: w.start_ns + frac * span - x_dur / 2.0,
                duration_ns: x_dur,
            });
        }
        inserts[w.before].push(w.qubit);
    }

    let mut out = Vec::with_capacity(src.len() + 2 * pulses.len());
    for (inst, qubits) in src.iter().zip(&inserts) {
        for &q in qubits {
            out.push(Instruction::new(GateKind::X, vec![q]));
            out.push(Instruction::new(GateKind::X, vec![q]));
        }
        out.push(inst.clone());
    }
    let circuit = tc.circuit.with_instructions_unchecked(out);
    let stats = circuit_stats(&circuit, false);
    Ok(TranspiledCircuit { circuit, layout: tc.layout.clone(), stats, dd_pulses: pulses })
}
