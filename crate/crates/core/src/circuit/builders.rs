use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Circuit, CircuitError, GateKind};

/// Upper qubit bound for builders (the in-process simulator cap).
pub const MAX_BUILD_QUBITS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "QFT")]
    Qft,
    #[serde(rename = "GHZ")]
    Ghz,
    #[serde(rename = "W")]
    W,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Qft, Family::Ghz, Family::W];

    pub fn min_qubits(self) -> usize {
        match self {
            Family::Ghz => 2,
            Family::Qft | Family::W => 1,
        }
    }

    /// The circuit used by the benchmark: measured, with QFT boxed.
    pub fn build(self, n: usize) -> Result<Circuit, CircuitError> {
        match self {
            Family::Qft => build_qft(n, true, true),
            Family::Ghz => build_ghz(n),
            Family::W => build_w(n),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Qft => "QFT",
            Family::Ghz => "GHZ",
            Family::W => "W",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "qft" => Ok(Family::Qft),
            "ghz" => Ok(Family::Ghz),
            "w" => Ok(Family::W),
            other => Err(format!("unknown circuit family `{other}` (expected qft, ghz or w)")),
        }
    }
}

fn check_range(n: usize, min: usize) -> Result<(), CircuitError> {
    if n < min || n > MAX_BUILD_QUBITS {
        return Err(CircuitError::Bounds { what: "n", value: n, min, max: MAX_BUILD_QUBITS });
    }
    Ok(())
}

/// Quantum Fourier transform on `n` qubits, qubit 0 least significant.
///
/// The rotation ladder starts from the most significant qubit so that, with
/// the final swaps, the unitary is exactly `q^{-1/2} e^{2πi·ac/q}` in the
/// little-endian basis. `boxed` wraps the body into a single composite named
/// `QFT` and appends a barrier plus one measurement per qubit.
pub fn build_qft(n: usize, with_swaps: bool, boxed: bool) -> Result<Circuit, CircuitError> {
    check_range(n, 1)?;
    let mut body = Circuit::new(n, 0)?;
    for j in (0..n).rev() {
        body.gate(GateKind::H, &[j])?;
        for k in (0..j).rev() {
            body.gate(GateKind::CP(PI / (1u64 << (j - k)) as f64), &[k, j])?;
        }
    }
    if with_swaps {
        for i in 0..n / 2 {
            body.gate(GateKind::SWAP, &[i, n - 1 - i])?;
        }
    }
    if !boxed {
        return Ok(body);
    }
    let mut c = Circuit::new(n, n)?;
    let qubits: Vec<usize> = (0..n).collect();
    c.gate(GateKind::COMPOSITE { name: "QFT".to_string(), body: Arc::new(body) }, &qubits)?;
    c.measure_all()?;
    Ok(c)
}

/// `(|0…0⟩ + |1…1⟩)/√2` via a Hadamard and a CX chain, then measured.
pub fn build_ghz(n: usize) -> Result<Circuit, CircuitError> {
    check_range(n, 2)?;
    let mut c = Circuit::new(n, n)?;
    c.gate(GateKind::H, &[0])?;
    for i in 0..n - 1 {
        c.gate(GateKind::CX, &[i, i + 1])?;
    }
    c.measure_all()?;
    Ok(c)
}

/// Rotation angle that leaves amplitude `1/√(n−i)` behind on qubit `i`.
pub fn w_angle(n: usize, i: usize) -> f64 {
    2.0 * (1.0 / ((n - i) as f64).sqrt()).acos()
}

/// Equal superposition of the `n` one-hot states, built from an explicit
/// CRY/CX cascade, then measured.
pub fn build_w(n: usize) -> Result<Circuit, CircuitError> {
    check_range(n, 1)?;
    let mut c = Circuit::new(n, n)?;
    c.gate(GateKind::X, &[0])?;
    for i in 0..n.saturating_sub(1) {
        c.gate(GateKind::CRY(w_angle(n, i)), &[i, i + 1])?;
        c.gate(GateKind::CX, &[i + 1, i])?;
    }
    c.measure_all()?;
    Ok(c)
}
