//! Statevector-based equivalence check between a logical circuit and its
//! transpiled form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::{Circuit, Instruction};
use crate::gates::C64;
use crate::statevector::Statevector;

use super::{TranspileError, TranspiledCircuit};

pub const MAX_EQUIV_LOGICAL: usize = 10;
pub const MAX_EQUIV_ACTIVE: usize = 20;
const RANDOM_INPUTS: usize = 8;
const INPUT_SEED: u64 = 0x5eed_cafe;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    /// Largest `min_φ ‖ψ_a − e^{iφ} ψ_b‖₂` over all inputs.
    pub max_deviation: f64,
    pub inputs_checked: usize,
}

/// Compare final states on `|0…0⟩` and on random product inputs, modulo
/// global phase. `b` is reduced to its active physical qubits; any ancilla
/// must return to `|0⟩`, and the routing permutation is undone before
/// comparison.
pub fn verify_equivalence(a: &Circuit, b: &TranspiledCircuit, tol: f64) -> Result<EquivalenceReport, TranspileError> {
    let n = a.n_qubits();
    if n > MAX_EQUIV_LOGICAL {
        return Err(TranspileError::TooManyLogical { n, max: MAX_EQUIV_LOGICAL });
    }
    let layout = &b.layout;
    if layout.n_logical() != n {
        return Err(TranspileError::LayoutMismatch { layout: layout.n_logical(), circuit: n });
    }
    layout.validate()?;

    let mut local_of = vec![None; b.circuit.n_qubits()];
    let mut active = 0usize;
    for l in 0..n {
        let p = layout.initial[&l];
        if p >= local_of.len() {
            return Err(TranspileError::LayoutMismatch { layout: p + 1, circuit: local_of.len() });
        }
        local_of[p] = Some(l);
        active += 1;
    }
    for p in b.circuit.active_qubits() {
        if local_of[p].is_none() {
            local_of[p] = Some(active);
            active += 1;
        }
    }
    if active > MAX_EQUIV_ACTIVE {
        return Err(TranspileError::ReductionTooLarge { active, max: MAX_EQUIV_ACTIVE });
    }
    let reduced_instructions = b
        .circuit
        .instructions()
        .iter()
        .filter(|i| i.kind.is_gate())
        .map(|i| Instruction {
            kind: i.kind.clone(),
            qubits: i.qubits.iter().map(|&p| local_of[p].expect("active qubit mapped")).collect(),
            clbit: None,
        })
        .collect();
    let reduced = Circuit::from_parts_unchecked(active, 0, reduced_instructions);
    let logical = a.inlined().without_measurements();

    // local position of logical l at the end
    let final_local: Vec<usize> =
        (0..n).map(|l| layout.final_physical(l).and_then(|p| local_of[p]).expect("layout validated")).collect();

    let ancilla_mask = (0..active).filter(|k| !final_local.contains(k)).fold(0usize, |m, k| m | 1 << k);

    let mut rng = ChaCha8Rng::seed_from_u64(INPUT_SEED);
    let zero = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    let mut max_deviation = 0.0f64;
    for trial in 0..=RANDOM_INPUTS {
        let inputs: Vec<[C64; 2]> = (0..n)
            .map(|_| {
                if trial == 0 {
                    zero
                } else {
                    let theta = rng.random::<f64>() * std::f64::consts::PI;
                    let phi = rng.random::<f64>() * std::f64::consts::TAU;
                    [C64::new((theta / 2.0).cos(), 0.0), C64::from_polar((theta / 2.0).sin(), phi)]
                }
            })
            .collect();
        let mut sa = Statevector::product(&inputs)?;
        sa.apply_circuit(&logical)?;

        let mut full_inputs = inputs.clone();
        full_inputs.resize(active, zero);
        let mut sb = Statevector::product(&full_inputs)?;
        sb.apply_circuit(&reduced)?;

        let mut permuted = vec![C64::new(0.0, 0.0); 1 << n];
        let mut leaked = 0.0;
        for (x, amp) in sb.amplitudes().iter().enumerate() {
            let y = (0..n).fold(0usize, |acc, l| acc | (((x >> final_local[l]) & 1) << l));
            let ancilla_bits = x & ancilla_mask != 0;
            if ancilla_bits {
                leaked += amp.norm_sqr();
            } else {
                permuted[y] = *amp;
            }
        }
        let overlap: C64 = permuted.iter().zip(sa.amplitudes()).map(|(b, a)| b.conj() * a).sum();
        let phase = if overlap.norm() > 1e-300 { overlap / overlap.norm() } else { C64::new(1.0, 0.0) };
        let dist2: f64 =
            sa.amplitudes().iter().zip(&permuted).map(|(a, b)| (a - phase * b).norm_sqr()).sum::<f64>() + leaked;
        max_deviation = max_deviation.max(dist2.sqrt());
    }
    Ok(EquivalenceReport { equivalent: max_deviation < tol, max_deviation, inputs_checked: RANDOM_INPUTS + 1 })
}
