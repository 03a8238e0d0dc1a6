//! Stochastic Pauli trajectories with readout flips over a transpiled circuit.
//!
//! Each shot draws its error events up front from its own RNG stream. Shots
//! without a gate error are sampled from the ideal final state; the others
//! restart from the nearest cached checkpoint before their first error.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{GateKind, Instruction};
use crate::counts::CountsDistribution;
use crate::gates::{self, Mat2};
use crate::statevector::{Sampler, SimError, Statevector};
use crate::transpiler::TranspiledCircuit;

/// Largest active-qubit count a noisy run will simulate.
pub const MAX_NOISY_ACTIVE: usize = 20;
/// Widest classical register a noisy run can key counts over.
pub const MAX_NOISY_CLBITS: usize = 64;
const CHECKPOINT_BUDGET_BYTES: usize = 256 << 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NoiseError {
    #[error("{name} = {value} is not a probability in [0, 1]")]
    BadProbability { name: &'static str, value: f64 },
    #[error("invalid noise model JSON: {0}")]
    Json(String),
    #[error("{active} active qubits exceeds the noisy-simulation limit of {max}")]
    ReductionTooLarge { active: usize, max: usize },
    #[error("circuit has {0} classical bits; noisy sampling supports 1..={MAX_NOISY_CLBITS}")]
    ClbitWidth(usize),
    #[error("qubit {0} is used after being measured")]
    NonTerminalMeasurement(usize),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
    pub p_readout: f64,
    pub seed: u64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel { p1: 3e-4, p2: 8e-3, p_readout: 1.5e-2, seed: 0 }
    }
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64, p_readout: f64, seed: u64) -> Result<Self, NoiseError> {
        let nm = NoiseModel { p1, p2, p_readout, seed };
        nm.validate()?;
        Ok(nm)
    }

    pub fn noiseless(seed: u64) -> Self {
        NoiseModel { p1: 0.0, p2: 0.0, p_readout: 0.0, seed }
    }

    pub fn validate(&self) -> Result<(), NoiseError> {
        for (name, value) in [("p1", self.p1), ("p2", self.p2), ("p_readout", self.p_readout)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(NoiseError::BadProbability { name, value });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("noise model serialize")
    }

    pub fn from_json(src: &str) -> Result<Self, NoiseError> {
        let nm: NoiseModel = serde_json::from_str(src).map_err(|e| NoiseError::Json(e.to_string()))?;
        nm.validate()?;
        Ok(nm)
    }
}

/// Seed for shot `shot`. The base seed goes through splitmix64 first so that
/// neighbouring base seeds do not share per-shot streams.
pub fn shot_seed(seed: u64, shot: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    (z ^ (z >> 31)) ^ shot
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Channel {
    None,
    One,
    Two,
}

struct Op {
    inst: Instruction,
    channel: Channel,
}

/// Gate sequence over local indices, plus where each clbit reads from.
struct Reduced {
    n_local: usize,
    ops: Vec<Op>,
    /// clbit → local qubit of its last measurement
    readout: Vec<Option<usize>>,
}

fn reduce(tc: &TranspiledCircuit) -> Result<Reduced, NoiseError> {
    let flat = tc.circuit.inlined();
    let n_clbits = flat.n_clbits();
    if n_clbits == 0 || n_clbits > MAX_NOISY_CLBITS {
        return Err(NoiseError::ClbitWidth(n_clbits));
    }
    let active = flat.active_qubits();
    if active.len() > MAX_NOISY_ACTIVE {
        return Err(NoiseError::ReductionTooLarge { active: active.len(), max: MAX_NOISY_ACTIVE });
    }
    let mut local = vec![usize::MAX; flat.n_qubits()];
    for (i, &p) in active.iter().enumerate() {
        local[p] = i;
    }

    let mut measured = vec![false; active.len()];
    let mut readout = vec![None; n_clbits];
    let mut ops = Vec::new();
    for inst in flat.instructions() {
        match inst.kind {
            GateKind::BARRIER => {}
            GateKind::MEASURE => {
                let q = local[inst.qubits[0]];
                measured[q] = true;
                readout[inst.clbit.expect("validated measure")] = Some(q);
            }
            _ => {
                let qubits: Vec<usize> = inst.qubits.iter().map(|&p| local[p]).collect();
                if let Some(&q) = qubits.iter().find(|&&q| measured[q]) {
                    return Err(NoiseError::NonTerminalMeasurement(active[q]));
                }
                let channel = match (&inst.kind, qubits.len()) {
                    (GateKind::RZ(_) | GateKind::ID, _) => Channel::None,
                    (_, 1) => Channel::One,
                    _ => Channel::Two,
                };
                ops.push(Op { inst: Instruction { kind: inst.kind.clone(), qubits, clbit: None }, channel });
            }
        }
    }
    Ok(Reduced { n_local: active.len(), ops, readout })
}

const PAULIS: [Mat2; 3] = [gates::PAULI_X, gates::PAULI_Y, gates::PAULI_Z];

/// Error events of one shot: (op index, Pauli label). Label 0..3 for 1q
/// channels; 1..16 for 2q channels with `label % 4` on the first qubit and
/// `label / 4` on the second (0 = I, 1 = X, 2 = Y, 3 = Z).
fn draw_errors(ops: &[Op], nm: &NoiseModel, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut events = Vec::new();
    for (i, op) in ops.iter().enumerate() {
        match op.channel {
            Channel::One if nm.p1 > 0.0 && rng.random::<f64>() < nm.p1 => {
                events.push((i, rng.random_range(0..3)));
            }
            Channel::Two if nm.p2 > 0.0 && rng.random::<f64>() < nm.p2 => {
                events.push((i, rng.random_range(1..16)));
            }
            _ => {}
        }
    }
    events
}

fn inject(sv: &mut Statevector, op: &Op, label: usize) {
    match op.channel {
        Channel::One => sv.apply_1q(&PAULIS[label], op.inst.qubits[0]),
        Channel::Two => {
            for (q, p) in op.inst.qubits.iter().zip([label % 4, label / 4]) {
                if p > 0 {
                    sv.apply_1q(&PAULIS[p - 1], *q);
                }
            }
        }
        Channel::None => unreachable!("noiseless op drew an error"),
    }
}

struct Checkpoints {
    stride: usize,
    /// state before op `k * stride`
    states: Vec<Statevector>,
    ideal: Sampler,
}

impl Checkpoints {
    fn build(r: &Reduced) -> Result<Self, NoiseError> {
        let state_bytes = (16usize << r.n_local).max(1);
        let max_states = (CHECKPOINT_BUDGET_BYTES / state_bytes).max(1);
        let stride = r.ops.len().div_ceil(max_states).max(1);
        let mut sv = Statevector::zero(r.n_local)?;
        let mut states = Vec::new();
        for (i, op) in r.ops.iter().enumerate() {
            if i % stride == 0 {
                states.push(sv.clone());
            }
            sv.apply_instruction(&op.inst)?;
        }
        Ok(Checkpoints { stride, states, ideal: Sampler::new(sv.probabilities()) })
    }

    fn run_with_errors(&self, r: &Reduced, events: &[(usize, usize)]) -> Result<Statevector, NoiseError> {
        let first = events[0].0;
        let k = first / self.stride;
        let mut sv = self.states[k].clone();
        let mut pending = events.iter().peekable();
        for (i, op) in r.ops.iter().enumerate().skip(k * self.stride) {
            sv.apply_instruction(&op.inst)?;
            while let Some(&&(at, label)) = pending.peek() {
                if at != i {
                    break;
                }
                inject(&mut sv, op, label);
                pending.next();
            }
        }
        Ok(sv)
    }
}

fn run_shot(r: &Reduced, cp: &Checkpoints, nm: &NoiseModel, shot: u64) -> Result<usize, NoiseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(shot_seed(nm.seed, shot));
    let events = draw_errors(&r.ops, nm, &mut rng);
    let basis = if events.is_empty() {
        cp.ideal.draw(&mut rng)
    } else {
        let sv = cp.run_with_errors(r, &events)?;
        Sampler::new(sv.probabilities()).draw(&mut rng)
    };
    let mut out = 0usize;
    for (c, q) in r.readout.iter().enumerate() {
        let mut bit = q.is_some_and(|q| basis >> q & 1 == 1);
        if nm.p_readout > 0.0 && rng.random::<f64>() < nm.p_readout {
            bit = !bit;
        }
        out |= usize::from(bit) << c;
    }
    Ok(out)
}

/// Monte Carlo execution of `tc` under `nm`. The result depends only on
/// `(tc, nm, shots)`; shots are spread over the available cores.
pub fn noisy_sample(tc: &TranspiledCircuit, nm: &NoiseModel, shots: u64) -> Result<CountsDistribution, NoiseError> {
    nm.validate()?;
    let r = reduce(tc)?;
    let cp = Checkpoints::build(&r)?;
    let n_clbits = r.readout.len();

    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(shots.max(1) as usize);
    let chunk = shots.div_ceil(workers as u64).max(1);
    let results: Vec<Result<Vec<usize>, NoiseError>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers as u64)
            .map(|w| {
                let (r, cp) = (&r, &cp);
                s.spawn(move || {
                    let lo = w * chunk;
                    let hi = (lo + chunk).min(shots);
                    (lo..hi).map(|shot| run_shot(r, cp, nm, shot)).collect()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("shot worker panicked")).collect()
    });
    let mut outcomes = Vec::with_capacity(shots as usize);
    for chunk in results {
        outcomes.extend(chunk?);
    }
    Ok(CountsDistribution::from_outcomes(n_clbits, outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_ghz, Circuit};
    use crate::transpiler::{heavy_hex_target, transpile, Layout, TargetPreset, TranspileOptions};

    fn ghz_tc(n: usize) -> TranspiledCircuit {
        let t = heavy_hex_target(TargetPreset::Eagle127).unwrap();
        transpile(&build_ghz(n).unwrap(), &t, &TranspileOptions::default()).unwrap()
    }

    #[test]
    fn model_validation_and_json() {
        assert!(NoiseModel::new(0.1, 1.1, 0.0, 0).is_err());
        assert!(NoiseModel::new(f64::NAN, 0.0, 0.0, 0).is_err());
        let nm = NoiseModel::default();
        assert_eq!(NoiseModel::from_json(&nm.to_json()).unwrap(), nm);
        assert!(NoiseModel::from_json(r#"{"p1":0,"p2":0,"p_readout":-1,"seed":1}"#).is_err());
        assert!(NoiseModel::from_json(r#"{"p1":0,"p2":0,"p_readout":0,"seed":1,"t1":5}"#).is_err());
        assert!(NoiseModel::from_json(r#"{"p1":0,"p2":0,"seed":1}"#).is_err());
    }

    #[test]
    fn shot_seeds_differ_across_base_seeds() {
        let a: Vec<u64> = (0..64).map(|s| shot_seed(0, s)).collect();
        let b: Vec<u64> = (0..64).map(|s| shot_seed(1, s)).collect();
        assert!(a.iter().all(|x| !b.contains(x)));
    }

    #[test]
    fn deterministic_and_sums_to_shots() {
        let tc = ghz_tc(4);
        let nm = NoiseModel { seed: 9, ..Default::default() };
        let a = noisy_sample(&tc, &nm, 777).unwrap();
        assert_eq!(a, noisy_sample(&tc, &nm, 777).unwrap());
        assert_eq!(a.shots(), 777);
        assert!(a.counts().keys().all(|k| k.len() == 4));
    }

    #[test]
    fn full_readout_flip_inverts_everything() {
        let tc = ghz_tc(3);
        let nm = NoiseModel::new(0.0, 0.0, 1.0, 0).unwrap();
        let counts = noisy_sample(&tc, &nm, 500).unwrap();
        assert_eq!(counts.get("000") + counts.get("111"), 500);
    }

    #[test]
    fn pauli_injection_matches_hand_computed_channel() {
        // single X with p1 = 1: the injected Pauli is X, Y or Z uniformly, so
        // the measured bit is 0 w.p. 2/3
        let mut c = Circuit::new(1, 1).unwrap();
        c.gate(GateKind::X, &[0]).unwrap().measure(0, 0).unwrap();
        let tc = TranspiledCircuit {
            stats: crate::circuit::circuit_stats(&c, false),
            circuit: c,
            layout: Layout::trivial(&[0]),
            dd_pulses: Vec::new(),
        };
        let nm = NoiseModel::new(1.0, 0.0, 0.0, 3).unwrap();
        let counts = noisy_sample(&tc, &nm, 6000).unwrap();
        let zero = counts.get("0") as f64 / 6000.0;
        assert!((zero - 2.0 / 3.0).abs() < 0.03, "{zero}");
    }

    #[test]
    fn unmeasured_clbits_read_zero() {
        let mut c = Circuit::new(2, 3).unwrap();
        c.gate(GateKind::X, &[1]).unwrap().measure(1, 2).unwrap();
        let tc = TranspiledCircuit {
            stats: crate::circuit::circuit_stats(&c, false),
            circuit: c,
            layout: Layout::trivial(&[0, 1]),
            dd_pulses: Vec::new(),
        };
        let counts = noisy_sample(&tc, &NoiseModel::noiseless(0), 10).unwrap();
        assert_eq!(counts.get("100"), 10);
    }

    #[test]
    fn rejects_mid_circuit_measurement_and_empty_register() {
        let mut c = Circuit::new(1, 1).unwrap();
        c.measure(0, 0).unwrap().gate(GateKind::SX, &[0]).unwrap();
        let mut tc = TranspiledCircuit {
            stats: crate::circuit::circuit_stats(&c, false),
            circuit: c,
            layout: Layout::trivial(&[0]),
            dd_pulses: Vec::new(),
        };
        let nm = NoiseModel::noiseless(0);
        assert_eq!(noisy_sample(&tc, &nm, 1).unwrap_err(), NoiseError::NonTerminalMeasurement(0));
        tc.circuit = Circuit::new(1, 0).unwrap();
        assert_eq!(noisy_sample(&tc, &nm, 1).unwrap_err(), NoiseError::ClbitWidth(0));
    }

    #[test]
    fn active_cap_is_enforced() {
        let mut c = Circuit::new(21, 1).unwrap();
        for q in 0..21 {
            c.gate(GateKind::X, &[q]).unwrap();
        }
        c.measure(0, 0).unwrap();
        let tc = TranspiledCircuit {
            stats: crate::circuit::circuit_stats(&c, false),
            circuit: c,
            layout: Layout::trivial(&[0]),
            dd_pulses: Vec::new(),
        };
        assert_eq!(
            noisy_sample(&tc, &NoiseModel::noiseless(0), 1).unwrap_err(),
            NoiseError::ReductionTooLarge { active: 21, max: 20 }
        );
    }

    #[test]
    fn checkpointed_replay_matches_direct_replay() {
        let tc = ghz_tc(5);
        let r = reduce(&tc).unwrap();
        let cp = Checkpoints::build(&r).unwrap();
        let forced = Checkpoints { stride: 3, states: Vec::new(), ideal: Sampler::new([1.0]) };
        // rebuild with a small stride to exercise mid-stride restarts
        let mut sv = Statevector::zero(r.n_local).unwrap();
        let mut states = Vec::new();
        for (i, op) in r.ops.iter().enumerate() {
            if i % forced.stride == 0 {
                states.push(sv.clone());
            }
            sv.apply_instruction(&op.inst).unwrap();
        }
        let small = Checkpoints { states, ..forced };
        let noisy: Vec<usize> = (0..r.ops.len()).filter(|&i| r.ops[i].channel != Channel::None).collect();
        let label = |i: usize| if r.ops[i].channel == Channel::Two { 5 } else { 1 };
        let sorted = [(noisy[4], label(noisy[4])), (noisy[7], label(noisy[7]))];
        let a = cp.run_with_errors(&r, &sorted).unwrap();
        let b = small.run_with_errors(&r, &sorted).unwrap();
        assert!((a.inner(&b).norm() - 1.0).abs() < 1e-12);
    }
}
