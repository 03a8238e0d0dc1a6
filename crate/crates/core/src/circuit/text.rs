//! Line-oriented circuit text format.
//!
//! ```text
//! qubits 4 clbits 4
//! H 0
//! CP 0,1 0.7853981633974483
//! BEGIN QFT 0,1,2,3
//!   H 3
//! END
//! BARRIER
//! MEASURE 0 -> 0
//! ```
//!
//! `BARRIER` with no operands spans every qubit. Composite bodies use their
//! own local qubit numbering `0..arity`. Angles are written in Rust's
//! shortest round-trip float notation, so `to_text(parse(s))` is stable.

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use super::{Circuit, CircuitError, GateKind, Instruction};

/// Largest register accepted by the parser.
pub const MAX_PARSE_BITS: usize = 4096;
const MAX_NESTING: usize = 32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("missing `qubits N clbits C` header")]
    MissingHeader,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: CircuitError },
    #[error("line {line}: BEGIN without matching END")]
    UnclosedComposite { line: usize },
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

pub(super) fn to_text(c: &Circuit) -> String {
    let mut out = format!("qubits {} clbits {}\n", c.n_qubits(), c.n_clbits());
    write_body(&mut out, c, 0);
    out
}

fn join(qubits: &[usize]) -> String {
    qubits.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",")
}

fn write_body(out: &mut String, c: &Circuit, indent: usize) {
    let pad = "  ".repeat(indent);
    for inst in c.instructions() {
        out.push_str(&pad);
        match &inst.kind {
            GateKind::MEASURE => {
                let _ = writeln!(out, "MEASURE {} -> {}", inst.qubits[0], inst.clbit.unwrap_or(0));
            }
            GateKind::BARRIER => {
                let all = inst.qubits.iter().copied().eq(0..c.n_qubits());
                if all {
                    out.push_str("BARRIER\n");
                } else {
                    let _ = writeln!(out, "BARRIER {}", join(&inst.qubits));
                }
            }
            GateKind::COMPOSITE { name, body } => {
                let _ = writeln!(out, "BEGIN {} {}", name, join(&inst.qubits));
                write_body(out, body, indent + 1);
                out.push_str(&pad);
                out.push_str("END\n");
            }
            kind => {
                let _ = write!(out, "{} {}", kind.name(), join(&inst.qubits));
                if let Some(t) = kind.angle() {
                    let _ = write!(out, " {t:?}");
                }
                out.push('\n');
            }
        }
    }
}

fn parse_index(tok: &str, line: usize) -> Result<usize, ParseError> {
    tok.parse::<usize>().map_err(|_| syntax(line, format!("bad index `{tok}`")))
}

fn parse_qubit_list(tok: &str, line: usize) -> Result<Vec<usize>, ParseError> {
    tok.split(',').map(|t| parse_index(t, line)).collect()
}

fn parse_angle(tok: &str, line: usize) -> Result<f64, ParseError> {
    let t: f64 = tok.parse().map_err(|_| syntax(line, format!("bad angle `{tok}`")))?;
    if !t.is_finite() {
        return Err(syntax(line, format!("non-finite angle `{tok}`")));
    }
    Ok(t)
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_' || ch == '-')
        && !matches!(name, "MEASURE" | "BARRIER" | "BEGIN" | "END")
        && GateKind::from_name(name, None).is_none()
        && GateKind::from_name(name, Some(0.0)).is_none()
}

struct Frame {
    circuit: Circuit,
    // (name, outer qubits, line of BEGIN) for composite frames
    header: Option<(String, Vec<usize>, usize)>,
}

pub fn parse_circuit(src: &str) -> Result<Circuit, ParseError> {
    let mut lines = src
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let h: Vec<&str> = header.split_whitespace().collect();
    let (n_qubits, n_clbits) = match h.as_slice() {
        ["qubits", nq, "clbits", nc] => (parse_index(nq, hline)?, parse_index(nc, hline)?),
        _ => return Err(ParseError::MissingHeader),
    };
    if n_qubits > MAX_PARSE_BITS || n_clbits > MAX_PARSE_BITS {
        return Err(syntax(hline, format!("register larger than {MAX_PARSE_BITS}")));
    }
    let root = Circuit::new(n_qubits, n_clbits).map_err(|source| ParseError::Invalid { line: hline, source })?;
    let mut stack = vec![Frame { circuit: root, header: None }];

    for (line, text) in lines {
        let toks: Vec<&str> = text.split_whitespace().collect();
        let inst = match toks.as_slice() {
            ["END"] => {
                let frame = stack.pop().expect("stack never empty");
                let Some((name, qubits, _)) = frame.header else {
                    return Err(syntax(line, "END without BEGIN"));
                };
                Instruction::new(GateKind::COMPOSITE { name, body: Arc::new(frame.circuit) }, qubits)
            }
            ["BEGIN", name, qubits] => {
                if !valid_name(name) {
                    return Err(syntax(line, format!("invalid composite name `{name}`")));
                }
                if stack.len() > MAX_NESTING {
                    return Err(syntax(line, "composites nested too deeply"));
                }
                let qubits = parse_qubit_list(qubits, line)?;
                let body = Circuit::new(qubits.len(), 0).map_err(|source| ParseError::Invalid { line, source })?;
                stack.push(Frame { circuit: body, header: Some((name.to_string(), qubits, line)) });
                continue;
            }
            ["MEASURE", q, "->", c] => Instruction {
                kind: GateKind::MEASURE,
                qubits: vec![parse_index(q, line)?],
                clbit: Some(parse_index(c, line)?),
            },
            ["BARRIER"] => {
                let n = stack.last().expect("stack never empty").circuit.n_qubits();
                Instruction::new(GateKind::BARRIER, (0..n).collect())
            }
            ["BARRIER", qubits] => Instruction::new(GateKind::BARRIER, parse_qubit_list(qubits, line)?),
            [name, qubits] | [name, qubits, _] => {
                let angle = match toks.get(2) {
                    Some(t) => Some(parse_angle(t, line)?),
                    None => None,
                };
                let kind = GateKind::from_name(name, angle)
                    .ok_or_else(|| syntax(line, format!("unknown gate `{name}` with {} operand(s)", toks.len() - 1)))?;
                Instruction::new(kind, parse_qubit_list(qubits, line)?)
            }
            _ => return Err(syntax(line, format!("cannot parse `{text}`"))),
        };
        stack
            .last_mut()
            .expect("stack never empty")
            .circuit
            .push(inst)
            .map_err(|source| ParseError::Invalid { line, source })?;
    }

    let frame = stack.pop().expect("stack never empty");
    if let Some((_, _, line)) = frame.header {
        return Err(ParseError::UnclosedComposite { line });
    }
    Ok(frame.circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_qft, build_w};
    use proptest::prelude::*;

    #[test]
    fn boxed_qft_text_round_trip_is_bit_exact() {
        let c = build_qft(4, true, true).unwrap();
        let text = to_text(&c);
        assert!(text.starts_with("qubits 4 clbits 4\nBEGIN QFT 0,1,2,3\n  H 3\n  CP 2,3 1.5707963267948966\n"));
        let back = parse_circuit(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(to_text(&back), text);
    }

    #[test]
    fn comments_and_subset_barrier() {
        let src = "# demo\nqubits 3 clbits 1\nH 0 # first\nBARRIER 0,2\nMEASURE 2 -> 0\n";
        let c = parse_circuit(src).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(to_text(&c), "qubits 3 clbits 1\nH 0\nBARRIER 0,2\nMEASURE 2 -> 0\n");
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(parse_circuit(""), Err(ParseError::MissingHeader));
        let e = parse_circuit("qubits 2 clbits 0\nH 0\nCX 0,5\n").unwrap_err();
        assert!(matches!(e, ParseError::Invalid { line: 3, .. }));
        let e = parse_circuit("qubits 2 clbits 0\nFOO 0\n").unwrap_err();
        assert!(matches!(e, ParseError::Syntax { line: 2, .. }));
        let e = parse_circuit("qubits 2 clbits 0\nRZ 0 inf\n").unwrap_err();
        assert!(matches!(e, ParseError::Syntax { line: 2, .. }));
        let e = parse_circuit("qubits 2 clbits 0\nBEGIN B 0,1\nH 0\n").unwrap_err();
        assert_eq!(e, ParseError::UnclosedComposite { line: 2 });
        assert!(parse_circuit("qubits 2 clbits 0\nEND\n").is_err());
        assert!(parse_circuit("qubits 99999 clbits 0\n").is_err());
    }

    #[test]
    fn gate_names_cannot_be_composite_names() {
        assert!(parse_circuit("qubits 2 clbits 0\nBEGIN CX 0,1\nEND\n").is_err());
    }

    fn arb_circuit() -> impl Strategy<Value = Circuit> {
        let n = 3usize;
        let op = (0u8..9, 0..n, 1..n, -10.0f64..10.0);
        proptest::collection::vec(op, 0..30).prop_map(move |ops| {
            let mut c = Circuit::new(n, 2).unwrap();
            for (k, a, off, t) in ops {
                let b = (a + off) % n;
                let _ = match k {
                    0 => c.gate(GateKind::H, &[a]),
                    1 => c.gate(GateKind::RZ(t), &[a]),
                    2 => c.gate(GateKind::RY(t * 1e-7), &[a]),
                    3 => c.gate(GateKind::CP(t), &[a, b]),
                    4 => c.gate(GateKind::CRY(t), &[a, b]),
                    5 => c.gate(GateKind::ECR, &[a, b]),
                    6 => c.measure(a, off - 1),
                    7 => c.gate(GateKind::BARRIER, &[b]),
                    _ => c.gate(GateKind::SWAP, &[a, b]),
                };
            }
            c
        })
    }

    proptest! {
        #[test]
        fn round_trip(c in arb_circuit()) {
            let text = to_text(&c);
            let back = parse_circuit(&text).unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert_eq!(to_text(&back), text);
        }
    }

    #[test]
    fn w_round_trip() {
        let c = build_w(5).unwrap();
        assert_eq!(parse_circuit(&to_text(&c)).unwrap(), c);
    }
}
