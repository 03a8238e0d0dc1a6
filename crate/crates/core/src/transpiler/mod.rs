//! Pass pipeline from the builder gate set to a heavy-hex ECR machine:
//! inline → placement → routing → basis translation → 1q fusion → optional DD.

mod basis;
mod dd;
mod equivalence;
mod layout;
mod optimize;
mod routing;
mod target;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{circuit_stats, Circuit, CircuitStats, GateKind};
use crate::statevector::SimError;

pub use basis::{cx_to_ecr, decompose_1q, normalize_angle, synth_1q, ZsxAngles};
pub use dd::{idle_windows, insert_dd, DdPulse, IdleWindow};
pub use equivalence::{verify_equivalence, EquivalenceReport, MAX_EQUIV_ACTIVE, MAX_EQUIV_LOGICAL};
pub use layout::{Layout, LayoutError};
pub use target::{default_basis, default_durations, heavy_hex_target, HardwareTarget, TargetError, TargetPreset};

/// Native gates the translation emits.
pub const REQUIRED_BASIS: [&str; 4] = ["ECR", "RZ", "SX", "X"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TranspileError {
    #[error("circuit needs {needed} connected qubits but the target has {available}")]
    RegionTooSmall { needed: usize, available: usize },
    #[error("target basis lacks {0}")]
    MissingBasisGate(String),
    #[error("no duration for {0} in the target")]
    MissingDuration(String),
    #[error("matrix is not unitary")]
    NonUnitary,
    #[error("layout covers {layout} qubits but the circuit has {circuit}")]
    LayoutMismatch { layout: usize, circuit: usize },
    #[error("{n} logical qubits exceeds the equivalence-check limit of {max}")]
    TooManyLogical { n: usize, max: usize },
    #[error("{active} active qubits exceeds the reduction limit of {max}")]
    ReductionTooLarge { active: usize, max: usize },
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Target(#[from] TargetError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Optimization {
    None,
    #[default]
    OneQubitFuse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TranspileOptions {
    pub seed: u64,
    pub optimization: Optimization,
    pub dd: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TranspiledCircuit {
    pub circuit: Circuit,
    pub layout: Layout,
    pub stats: CircuitStats,
    pub dd_pulses: Vec<DdPulse>,
}

impl TranspiledCircuit {
    pub fn check_legality(&self, t: &HardwareTarget) -> Result<(), String> {
        for (i, inst) in self.circuit.instructions().iter().enumerate() {
            let name = inst.kind.name();
            match inst.kind {
                GateKind::MEASURE | GateKind::BARRIER => continue,
                _ if !t.basis().contains(name) => return Err(format!("instruction {i}: {name} is not a basis gate")),
                _ => {}
            }
            if let [a, b] = inst.qubits[..] {
                if !t.has_edge(a, b) {
                    return Err(format!("instruction {i}: {name} on ({a}, {b}) is not a coupling edge"));
                }
            }
        }
        Ok(())
    }
}

pub fn transpile(
    c: &Circuit,
    t: &HardwareTarget,
    opts: &TranspileOptions,
) -> Result<TranspiledCircuit, TranspileError> {
    for gate in REQUIRED_BASIS {
        if !t.basis().contains(gate) {
            return Err(TranspileError::MissingBasisGate(gate.to_string()));
        }
    }
    let n = c.n_qubits();
    if n > t.n_physical() {
        return Err(TranspileError::RegionTooSmall { needed: n, available: t.n_physical() });
    }
    let flat = c.inlined();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let region = layout::choose_region(t, n, &mut rng);
    let routed = routing::route(&flat, t, &region, region.clone(), &mut rng);
    log::debug!("routing inserted {} swaps for {n} logical qubits", routed.swaps);

    let initial_p2l = |p: usize| region.iter().position(|&q| q == p).expect("routing stays in region");
    let layout = Layout {
        initial: region.iter().copied().enumerate().collect(),
        final_permutation: routed.final_l2p.iter().enumerate().map(|(l, &p)| (l, initial_p2l(p))).collect(),
    };

    let mut translated = Vec::with_capacity(routed.instructions.len() * 4);
    for inst in &routed.instructions {
        basis::translate(inst, &mut translated);
    }
    if opts.optimization == Optimization::OneQubitFuse {
        translated = optimize::fuse_1q_runs(t.n_physical(), &translated);
    }

    let circuit = Circuit::from_parts_unchecked(t.n_physical(), c.n_clbits(), translated);
    let stats = circuit_stats(&circuit, false);
    let out = TranspiledCircuit { circuit, layout, stats, dd_pulses: Vec::new() };
    if opts.dd {
        insert_dd(&out, t)
    } else {
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_ghz, build_qft, build_w};

    fn eagle() -> HardwareTarget {
        heavy_hex_target(TargetPreset::Eagle127).unwrap()
    }

    #[test]
    fn ghz4_is_legal_and_equivalent() {
        let t = eagle();
        let c = build_ghz(4).unwrap();
        let tc = transpile(&c, &t, &TranspileOptions::default()).unwrap();
        tc.check_legality(&t).unwrap();
        assert!(tc.stats.gates >= 4);
        assert_eq!(tc.stats.width, 131);
        assert_eq!(tc.stats.measurements, 4);
        let rep = verify_equivalence(&c, &tc, 1e-8).unwrap();
        assert!(rep.equivalent, "{rep:?}");
    }

    #[test]
    fn single_hadamard_lowering() {
        let t = eagle();
        let mut c = Circuit::new(1, 0).unwrap();
        c.gate(GateKind::H, &[0]).unwrap();
        let tc = transpile(&c, &t, &TranspileOptions::default()).unwrap();
        let kinds: Vec<&str> = tc.circuit.instructions().iter().map(|i| i.kind.name()).collect();
        assert_eq!(kinds, ["RZ", "SX", "RZ"]);
        assert!(verify_equivalence(&c, &tc, 1e-9).unwrap().equivalent);
    }

    #[test]
    fn empty_circuit_stays_empty() {
        let c = Circuit::new(1, 0).unwrap();
        let tc = transpile(&c, &eagle(), &TranspileOptions::default()).unwrap();
        assert_eq!(tc.stats.gates, 0);
        assert_eq!(tc.stats.depth, 0);
    }

    #[test]
    fn unoptimized_pipeline_is_also_equivalent() {
        let t = eagle();
        let opts = TranspileOptions { seed: 3, optimization: Optimization::None, dd: false };
        for c in [build_qft(5, true, true).unwrap(), build_w(5).unwrap()] {
            let tc = transpile(&c, &t, &opts).unwrap();
            tc.check_legality(&t).unwrap();
            assert!(verify_equivalence(&c, &tc, 1e-8).unwrap().equivalent);
        }
    }

    #[test]
    fn target_without_ecr_is_rejected() {
        let t = HardwareTarget::new(
            2,
            [(0, 1)],
            ["RZ", "SX", "X"].iter().map(|s| s.to_string()).collect(),
            default_durations(),
        )
        .unwrap();
        let c = build_ghz(2).unwrap();
        assert_eq!(
            transpile(&c, &t, &TranspileOptions::default()).unwrap_err(),
            TranspileError::MissingBasisGate("ECR".into())
        );
    }

    #[test]
    fn too_small_target() {
        let t = HardwareTarget::new(2, [(0, 1)], default_basis(), default_durations()).unwrap();
        let c = build_ghz(3).unwrap();
        assert!(matches!(transpile(&c, &t, &TranspileOptions::default()), Err(TranspileError::RegionTooSmall { .. })));
    }

    #[test]
    fn equivalence_detects_extra_gate_and_ignores_global_phase() {
        let t = eagle();
        let c = build_ghz(4).unwrap();
        let tc = transpile(&c, &t, &TranspileOptions::default()).unwrap();

        let mut flipped = tc.clone();
        let mut insts = flipped.circuit.instructions().to_vec();
        let q = tc.layout.initial[&0];
        insts.insert(0, crate::circuit::Instruction::new(GateKind::X, vec![q]));
        flipped.circuit = tc.circuit.with_instructions_unchecked(insts);
        let rep = verify_equivalence(&c, &flipped, 1e-8).unwrap();
        assert!(!rep.equivalent);
        assert!((rep.max_deviation - std::f64::consts::SQRT_2).abs() < 1e-9, "{rep:?}");

        let mut phased = tc.clone();
        let mut insts = phased.circuit.instructions().to_vec();
        // RZ(2π) = −I on every active qubit: pure global phase
        for &p in tc.layout.initial.values() {
            insts.push(crate::circuit::Instruction::new(GateKind::RZ(std::f64::consts::TAU), vec![p]));
        }
        phased.circuit = tc.circuit.with_instructions_unchecked(insts);
        assert!(verify_equivalence(&c, &phased, 1e-8).unwrap().equivalent);
    }
}
