//! Dense statevector simulation, shot sampling and the memory model.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circuit::{Circuit, Family, GateKind, Instruction, MAX_BUILD_QUBITS};
use crate::counts::{bitstring, CountsDistribution, CountsError, Distribution};
use crate::gates::{matrix_1q, matrix_2q, Mat2, Mat4, C64};

/// In-process simulator cap (2^24 amplitudes, 256 MiB).
pub const MAX_SIM_QUBITS: usize = 24;

/// Bytes per amplitude: one double-precision complex number.
pub const BYTES_PER_AMPLITUDE: u128 = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("{n} qubits exceeds the simulator limit of {max}")]
    TooManyQubits { n: usize, max: usize },
    #[error("state has {state} qubits but the circuit has {circuit}")]
    WidthMismatch { state: usize, circuit: usize },
    #[error("amplitude vector length {0} is not a power of two")]
    BadLength(usize),
    #[error("amplitudes have squared norm {0}, expected 1")]
    NotNormalized(f64),
    #[error("n = {n} is outside {min}..={max}")]
    OutOfRange { n: usize, min: usize, max: usize },
    #[error("gate {0} has no matrix in the simulator")]
    UnsupportedGate(String),
    #[error(transparent)]
    Counts(#[from] CountsError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl Statevector {
    pub fn zero(n_qubits: usize) -> Result<Self, SimError> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self, SimError> {
        if n_qubits > MAX_SIM_QUBITS {
            return Err(SimError::TooManyQubits { n: n_qubits, max: MAX_SIM_QUBITS });
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        let len = amps.len();
        amps[index % len] = C64::new(1.0, 0.0);
        Ok(Statevector { n_qubits, amps })
    }

    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self, SimError> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(SimError::BadLength(len));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_SIM_QUBITS {
            return Err(SimError::TooManyQubits { n: n_qubits, max: MAX_SIM_QUBITS });
        }
        let sv = Statevector { n_qubits, amps };
        let norm = sv.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(SimError::NotNormalized(norm));
        }
        Ok(sv)
    }

    /// Tensor product of single-qubit states; `states[0]` is qubit 0.
    pub fn product(states: &[[C64; 2]]) -> Result<Self, SimError> {
        let mut amps = vec![C64::new(1.0, 0.0)];
        for s in states.iter().rev() {
            amps = amps.iter().flat_map(|&a| [a * s[0], a * s[1]]).collect();
        }
        Self::from_amplitudes(amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Statevector) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn apply_1q(&mut self, m: &Mat2, q: usize) {
        let bit = 1usize << q;
        for base in 0..self.amps.len() {
            if base & bit != 0 {
                continue;
            }
            let (a0, a1) = (self.amps[base], self.amps[base | bit]);
            self.amps[base] = m[0][0] * a0 + m[0][1] * a1;
            self.amps[base | bit] = m[1][0] * a0 + m[1][1] * a1;
        }
    }

    /// `m` is indexed by `bit(q0) + 2·bit(q1)`.
    pub fn apply_2q(&mut self, m: &Mat4, q0: usize, q1: usize) {
        let (b0, b1) = (1usize << q0, 1usize << q1);
        for base in 0..self.amps.len() {
            if base & (b0 | b1) != 0 {
                continue;
            }
            let idx = [base, base | b0, base | b1, base | b0 | b1];
            let v = idx.map(|i| self.amps[i]);
            for (r, &i) in idx.iter().enumerate() {
                self.amps[i] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
            }
        }
    }

    /// Apply one instruction; measurements and barriers leave the state untouched.
    pub fn apply_instruction(&mut self, inst: &Instruction) -> Result<(), SimError> {
        match &inst.kind {
            GateKind::MEASURE | GateKind::BARRIER => Ok(()),
            GateKind::COMPOSITE { body, .. } => {
                for sub in body.instructions() {
                    let mapped = Instruction {
                        kind: sub.kind.clone(),
                        qubits: sub.qubits.iter().map(|&q| inst.qubits[q]).collect(),
                        clbit: None,
                    };
                    self.apply_instruction(&mapped)?;
                }
                Ok(())
            }
            kind => {
                if let Some(m) = matrix_1q(kind) {
                    self.apply_1q(&m, inst.qubits[0]);
                } else if let Some(m) = matrix_2q(kind) {
                    self.apply_2q(&m, inst.qubits[0], inst.qubits[1]);
                } else {
                    return Err(SimError::UnsupportedGate(kind.name().to_string()));
                }
                Ok(())
            }
        }
    }

    pub fn apply_circuit(&mut self, c: &Circuit) -> Result<(), SimError> {
        if c.n_qubits() != self.n_qubits {
            return Err(SimError::WidthMismatch { state: self.n_qubits, circuit: c.n_qubits() });
        }
        for inst in c.instructions() {
            self.apply_instruction(inst)?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,re,im\n");
        for (i, a) in self.amps.iter().enumerate() {
            out.push_str(&format!("{i},{:?},{:?}\n", a.re, a.im));
        }
        out
    }
}

/// Final state of `c` on `|0…0⟩`; measurements are ignored.
pub fn simulate(c: &Circuit) -> Result<Statevector, SimError> {
    let mut sv = Statevector::zero(c.n_qubits())?;
    sv.apply_circuit(c)?;
    Ok(sv)
}

/// Inverse-CDF sampler over basis-state probabilities.
pub(crate) struct Sampler {
    cumulative: Vec<f64>,
}

impl Sampler {
    pub(crate) fn new(probs: impl IntoIterator<Item = f64>) -> Self {
        let mut acc = 0.0;
        let cumulative = probs
            .into_iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Sampler { cumulative }
    }

    pub(crate) fn draw(&self, rng: &mut impl Rng) -> usize {
        let total = *self.cumulative.last().unwrap_or(&1.0);
        let u = rng.random::<f64>() * total;
        self.cumulative.partition_point(|&c| c <= u).min(self.cumulative.len() - 1)
    }
}

/// Multinomial shot sampling over all qubits of `sv`.
pub fn sample_counts(sv: &Statevector, shots: u64, seed: u64) -> CountsDistribution {
    let sampler = Sampler::new(sv.probabilities());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CountsDistribution::from_outcomes(sv.n_qubits(), (0..shots).map(|_| sampler.draw(&mut rng)))
}

/// Closed-form output distribution of each benchmark family (QFT on `|0…0⟩`).
pub fn ideal_distribution(family: Family, n: usize) -> Result<Distribution, SimError> {
    if n < family.min_qubits() || n > MAX_BUILD_QUBITS {
        return Err(SimError::OutOfRange { n, min: family.min_qubits(), max: MAX_BUILD_QUBITS });
    }
    let mut probs = BTreeMap::new();
    match family {
        Family::Qft => {
            let p = 1.0 / (1u64 << n) as f64;
            for i in 0..1usize << n {
                probs.insert(bitstring(i, n), p);
            }
        }
        Family::Ghz => {
            probs.insert("0".repeat(n), 0.5);
            probs.insert("1".repeat(n), 0.5);
        }
        Family::W => {
            for i in 0..n {
                probs.insert(bitstring(1 << i, n), 1.0 / n as f64);
            }
        }
    }
    Ok(Distribution::new(n, probs)?)
}

/// Bytes needed to hold an `n`-qubit state at double precision. Saturates for `n > 123`.
pub fn memory_required(n: u32) -> u128 {
    1u128.checked_shl(n).map_or(u128::MAX, |q| q.saturating_mul(BYTES_PER_AMPLITUDE))
}

/// Render a byte count in binary gigabytes, labelled "GB".
pub fn format_gb(bytes: u128) -> String {
    const GIB: u128 = 1 << 30;
    if bytes.is_multiple_of(GIB) {
        format!("{} GB", bytes / GIB)
    } else {
        format!("{:.6} GB", bytes as f64 / GIB as f64)
    }
}
