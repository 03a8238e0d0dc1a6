//! Gate-level circuit IR shared by the builders, the simulator and the transpiler.

mod builders;
mod stats;
mod text;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use builders::{build_ghz, build_qft, build_w, w_angle, Family, MAX_BUILD_QUBITS};
pub use stats::{circuit_stats, CircuitStats};
pub use text::{parse_circuit, ParseError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("{what} = {value} is outside the supported range {min}..={max}")]
    Bounds { what: &'static str, value: usize, min: usize, max: usize },
    #[error("qubit index {index} out of range for a {n_qubits}-qubit circuit")]
    QubitIndex { index: usize, n_qubits: usize },
    #[error("clbit index {index} out of range for a circuit with {n_clbits} clbits")]
    ClbitIndex { index: usize, n_clbits: usize },
    #[error("{gate} expects {expected} qubit(s), got {got}")]
    Arity { gate: String, expected: usize, got: usize },
    #[error("{gate} references qubit {qubit} more than once")]
    RepeatedQubit { gate: String, qubit: usize },
    #[error("{gate} has a non-finite angle")]
    NonFiniteAngle { gate: String },
    #[error("MEASURE needs exactly one clbit")]
    MissingClbit,
    #[error("{gate} does not take a clbit")]
    UnexpectedClbit { gate: String },
    #[error("a circuit needs at least one qubit")]
    NoQubits,
}

/// One operation kind. Angles are in radians.
#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    H,
    X,
    SX,
    RZ(f64),
    RY(f64),
    CX,
    CP(f64),
    CRY(f64),
    SWAP,
    ECR,
    ID,
    MEASURE,
    BARRIER,
    COMPOSITE { name: String, body: Arc<Circuit> },
}

impl GateKind {
    /// Mnemonic used by the text format and by gate histograms.
    pub fn name(&self) -> &str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::SX => "SX",
            GateKind::RZ(_) => "RZ",
            GateKind::RY(_) => "RY",
            GateKind::CX => "CX",
            GateKind::CP(_) => "CP",
            GateKind::CRY(_) => "CRY",
            GateKind::SWAP => "SWAP",
            GateKind::ECR => "ECR",
            GateKind::ID => "ID",
            GateKind::MEASURE => "MEASURE",
            GateKind::BARRIER => "BARRIER",
            GateKind::COMPOSITE { name, .. } => name,
        }
    }

    /// Fixed qubit count, or `None` for barriers (any number of qubits).
    pub fn arity(&self) -> Option<usize> {
        match self {
            GateKind::H
            | GateKind::X
            | GateKind::SX
            | GateKind::RZ(_)
            | GateKind::RY(_)
            | GateKind::ID
            | GateKind::MEASURE => Some(1),
            GateKind::CX | GateKind::CP(_) | GateKind::CRY(_) | GateKind::SWAP | GateKind::ECR => Some(2),
            GateKind::BARRIER => None,
            GateKind::COMPOSITE { body, .. } => Some(body.n_qubits()),
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateKind::RZ(t) | GateKind::RY(t) | GateKind::CP(t) | GateKind::CRY(t) => Some(t),
            _ => None,
        }
    }

    /// True for unitary operations (everything except measurement and barrier).
    pub fn is_gate(&self) -> bool {
        !matches!(self, GateKind::MEASURE | GateKind::BARRIER)
    }

    /// Look up a primitive gate by mnemonic. Composite, measure and barrier are not primitives.
    pub fn from_name(name: &str, angle: Option<f64>) -> Option<GateKind> {
        let g = match (name, angle) {
            ("H", None) => GateKind::H,
            ("X", None) => GateKind::X,
            ("SX", None) => GateKind::SX,
            ("ID", None) => GateKind::ID,
            ("CX", None) => GateKind::CX,
            ("SWAP", None) => GateKind::SWAP,
            ("ECR", None) => GateKind::ECR,
            ("RZ", Some(t)) => GateKind::RZ(t),
            ("RY", Some(t)) => GateKind::RY(t),
            ("CP", Some(t)) => GateKind::CP(t),
            ("CRY", Some(t)) => GateKind::CRY(t),
            _ => return None,
        };
        Some(g)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instruction {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub clbit: Option<usize>,
}

impl Instruction {
    pub fn new(kind: GateKind, qubits: Vec<usize>) -> Self {
        Instruction { kind, qubits, clbit: None }
    }
}

/// An ordered instruction list over `n_qubits` qubits and `n_clbits` classical bits.
///
/// Every instruction is validated on insertion, so a `Circuit` value always
/// satisfies the index, arity and distinct-qubit invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    n_clbits: usize,
    instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(n_qubits: usize, n_clbits: usize) -> Result<Self, CircuitError> {
        if n_qubits == 0 {
            return Err(CircuitError::NoQubits);
        }
        Ok(Circuit { n_qubits, n_clbits, instructions: Vec::new() })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_clbits(&self) -> usize {
        self.n_clbits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn push(&mut self, inst: Instruction) -> Result<&mut Self, CircuitError> {
        self.validate(&inst)?;
        self.instructions.push(inst);
        Ok(self)
    }

    pub fn gate(&mut self, kind: GateKind, qubits: &[usize]) -> Result<&mut Self, CircuitError> {
        self.push(Instruction::new(kind, qubits.to_vec()))
    }

    pub fn measure(&mut self, qubit: usize, clbit: usize) -> Result<&mut Self, CircuitError> {
        self.push(Instruction { kind: GateKind::MEASURE, qubits: vec![qubit], clbit: Some(clbit) })
    }

    pub fn barrier_all(&mut self) -> Result<&mut Self, CircuitError> {
        let all: Vec<usize> = (0..self.n_qubits).collect();
        self.push(Instruction::new(GateKind::BARRIER, all))
    }

    /// Barrier over every qubit followed by `MEASURE i -> i`.
    /// Requires at least as many clbits as qubits.
    pub fn measure_all(&mut self) -> Result<&mut Self, CircuitError> {
        self.barrier_all()?;
        for q in 0..self.n_qubits {
            self.measure(q, q)?;
        }
        Ok(self)
    }

    fn validate(&self, inst: &Instruction) -> Result<(), CircuitError> {
        let name = inst.kind.name();
        if let Some(expected) = inst.kind.arity() {
            if inst.qubits.len() != expected {
                return Err(CircuitError::Arity { gate: name.to_string(), expected, got: inst.qubits.len() });
            }
        } else if inst.qubits.is_empty() {
            return Err(CircuitError::Arity { gate: name.to_string(), expected: 1, got: 0 });
        }
        if let Some(t) = inst.kind.angle() {
            if !t.is_finite() {
                return Err(CircuitError::NonFiniteAngle { gate: name.to_string() });
            }
        }
        for (i, &q) in inst.qubits.iter().enumerate() {
            if q >= self.n_qubits {
                return Err(CircuitError::QubitIndex { index: q, n_qubits: self.n_qubits });
            }
            if inst.qubits[..i].contains(&q) {
                return Err(CircuitError::RepeatedQubit { gate: name.to_string(), qubit: q });
            }
        }
        match (&inst.kind, inst.clbit) {
            (GateKind::MEASURE, None) => return Err(CircuitError::MissingClbit),
            (GateKind::MEASURE, Some(c)) if c >= self.n_clbits => {
                return Err(CircuitError::ClbitIndex { index: c, n_clbits: self.n_clbits })
            }
            (GateKind::MEASURE, Some(_)) => {}
            (_, Some(_)) => return Err(CircuitError::UnexpectedClbit { gate: name.to_string() }),
            (_, None) => {}
        }
        Ok(())
    }

    /// Expand every composite instruction (recursively) into its body.
    pub fn inlined(&self) -> Circuit {
        let mut out = Circuit { n_qubits: self.n_qubits, n_clbits: self.n_clbits, instructions: Vec::new() };
        inline_into(&mut out.instructions, &self.instructions, &|q| q);
        out
    }

    /// Copy without measurements and barriers.
    pub fn without_measurements(&self) -> Circuit {
        let instructions = self.instructions.iter().filter(|i| i.kind.is_gate()).cloned().collect();
        Circuit { n_qubits: self.n_qubits, n_clbits: self.n_clbits, instructions }
    }

    /// Copy with the instruction list replaced. Caller guarantees validity.
    pub(crate) fn with_instructions_unchecked(&self, instructions: Vec<Instruction>) -> Circuit {
        Circuit { n_qubits: self.n_qubits, n_clbits: self.n_clbits, instructions }
    }

    pub(crate) fn from_parts_unchecked(n_qubits: usize, n_clbits: usize, instructions: Vec<Instruction>) -> Circuit {
        Circuit { n_qubits, n_clbits, instructions }
    }

    /// Qubits touched by at least one gate or measurement, in increasing order.
    pub fn active_qubits(&self) -> Vec<usize> {
        let mut used = vec![false; self.n_qubits];
        for inst in &self.instructions {
            if inst.kind != GateKind::BARRIER {
                for &q in &inst.qubits {
                    used[q] = true;
                }
            }
        }
        used.iter().enumerate().filter(|(_, &u)| u).map(|(q, _)| q).collect()
    }
}

fn inline_into(out: &mut Vec<Instruction>, src: &[Instruction], map: &dyn Fn(usize) -> usize) {
    for inst in src {
        match &inst.kind {
            GateKind::COMPOSITE { body, .. } => {
                let outer: Vec<usize> = inst.qubits.iter().map(|&q| map(q)).collect();
                inline_into(out, &body.instructions, &|q| outer[q]);
            }
            _ => out.push(Instruction {
                kind: inst.kind.clone(),
                qubits: inst.qubits.iter().map(|&q| map(q)).collect(),
                clbit: inst.clbit,
            }),
        }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::to_text(self))
    }
}

impl std::str::FromStr for Circuit {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_circuit(s)
    }
}
