//! Single-qubit run fusion.

use crate::circuit::Instruction;
use crate::gates::{matrix_1q, mul2, Mat2};

use super::basis::synth_1q;

/// Merge every maximal run of single-qubit gates on a qubit into one
/// resynthesized sequence. Runs are flushed when the qubit is touched by a
/// multi-qubit gate, a measurement or a barrier.
pub(crate) fn fuse_1q_runs(n_qubits: usize, src: &[Instruction]) -> Vec<Instruction> {
    let mut pending: Vec<Option<Mat2>> = vec![None; n_qubits];
    let mut out = Vec::with_capacity(src.len());
    let flush = |q: usize, pending: &mut Vec<Option<Mat2>>, out: &mut Vec<Instruction>| {
        if let Some(u) = pending[q].take() {
            out.extend(synth_1q(&u, q));
        }
    };
    for inst in src {
        let single = inst.qubits.len() == 1 && inst.kind.is_gate();
        match (single, matrix_1q(&inst.kind)) {
            (true, Some(m)) => {
                let q = inst.qubits[0];
                pending[q] = Some(match pending[q] {
                    Some(acc) => mul2(&m, &acc),
                    None => m,
                });
            }
            _ => {
                for &q in &inst.qubits {
                    flush(q, &mut pending, &mut out);
                }
                out.push(inst.clone());
            }
        }
    }
    for q in 0..n_qubits {
        flush(q, &mut pending, &mut out);
    }
    out
}
