//! Translation of source gates into {ECR, RZ, SX, X}.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::circuit::{GateKind, Instruction};
use crate::gates::{matrix_1q, Mat2, C64};

use super::TranspileError;

const ANGLE_EPS: f64 = 1e-12;

/// Angles of the chain `RZ(alpha) · SX · RZ(beta) · SX · RZ(gamma)` in
/// circuit order (alpha first), each in (−π, π].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZsxAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl ZsxAngles {
    pub fn instructions(&self, q: usize) -> Vec<Instruction> {
        vec![
            Instruction::new(GateKind::RZ(self.alpha), vec![q]),
            Instruction::new(GateKind::SX, vec![q]),
            Instruction::new(GateKind::RZ(self.beta), vec![q]),
            Instruction::new(GateKind::SX, vec![q]),
            Instruction::new(GateKind::RZ(self.gamma), vec![q]),
        ]
    }
}

pub fn normalize_angle(a: f64) -> f64 {
    let x = a.rem_euclid(TAU);
    if x > PI {
        x - TAU
    } else {
        x
    }
}

fn is_zero_angle(a: f64) -> bool {
    normalize_angle(a).abs() < ANGLE_EPS || (TAU - normalize_angle(a).abs()) < ANGLE_EPS
}

/// `U ≅ RZ(phi) · RY(theta) · RZ(lambda)` up to global phase.
pub(crate) fn zyz_angles(u: &Mat2) -> (f64, f64, f64) {
    let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    let scale = C64::new(1.0, 0.0) / det.sqrt();
    let v = [[u[0][0] * scale, u[0][1] * scale], [u[1][0] * scale, u[1][1] * scale]];
    let (c, s) = (v[0][0].norm(), v[1][0].norm());
    let theta = 2.0 * s.atan2(c);
    let sum = if c > 1e-14 { 2.0 * v[1][1].arg() } else { 0.0 };
    let diff = if s > 1e-14 { 2.0 * v[1][0].arg() } else { 0.0 };
    (theta, (sum + diff) / 2.0, (sum - diff) / 2.0)
}

/// Euler decomposition onto the ZSXZSXZ chain.
///
/// Note that all-zero angles give `SX·SX = X`; the identity comes out as
/// `(0, π, π)`.
pub fn decompose_1q(u: &Mat2) -> Result<ZsxAngles, TranspileError> {
    if !crate::gates::is_unitary2(u, 1e-10) {
        return Err(TranspileError::NonUnitary);
    }
    let (theta, phi, lambda) = zyz_angles(u);
    Ok(ZsxAngles {
        alpha: normalize_angle(lambda),
        beta: normalize_angle(theta + PI),
        gamma: normalize_angle(phi + PI),
    })
}

fn rz(angle: f64, q: usize, out: &mut Vec<Instruction>) {
    if !is_zero_angle(angle) {
        out.push(Instruction::new(GateKind::RZ(normalize_angle(angle)), vec![q]));
    }
}

/// Shortest basis sequence for `u` on qubit `q`: nothing, one RZ, RZ·X, RZ·SX·RZ,
/// or the full two-SX chain.
pub fn synth_1q(u: &Mat2, q: usize) -> Vec<Instruction> {
    let (theta, phi, lambda) = zyz_angles(u);
    let mut out = Vec::new();
    let half = (theta / 2.0).sin_cos();
    if half.0.abs() < ANGLE_EPS {
        rz(phi + lambda, q, &mut out);
    } else if half.1.abs() < ANGLE_EPS {
        rz(lambda - phi + PI, q, &mut out);
        out.push(Instruction::new(GateKind::X, vec![q]));
    } else if (theta - FRAC_PI_2).abs() < ANGLE_EPS {
        rz(lambda - FRAC_PI_2, q, &mut out);
        out.push(Instruction::new(GateKind::SX, vec![q]));
        rz(phi + FRAC_PI_2, q, &mut out);
    } else {
        rz(lambda, q, &mut out);
        out.push(Instruction::new(GateKind::SX, vec![q]));
        rz(theta + PI, q, &mut out);
        out.push(Instruction::new(GateKind::SX, vec![q]));
        rz(phi + PI, q, &mut out);
    }
    out
}

/// CX(control → target) as X·SX·ECR·RZ: one ECR, exact up to global phase.
pub fn cx_to_ecr(control: usize, target: usize) -> Vec<Instruction> {
    vec![
        Instruction::new(GateKind::X, vec![control]),
        Instruction::new(GateKind::SX, vec![target]),
        Instruction::new(GateKind::ECR, vec![control, target]),
        Instruction::new(GateKind::RZ(FRAC_PI_2), vec![control]),
    ]
}

/// Expand one physical instruction into basis gates. Measurements and
/// barriers pass through; 1q gates go through `synth_1q` (or stay as-is when
/// already native).
pub(crate) fn translate(inst: &Instruction, out: &mut Vec<Instruction>) {
    let q = &inst.qubits;
    match inst.kind {
        GateKind::MEASURE | GateKind::BARRIER | GateKind::ECR => out.push(inst.clone()),
        GateKind::X | GateKind::SX | GateKind::ID => out.push(inst.clone()),
        GateKind::RZ(t) => rz(t, q[0], out),
        GateKind::H | GateKind::RY(_) => {
            let m = matrix_1q(&inst.kind).expect("1q gate has a matrix");
            out.extend(synth_1q(&m, q[0]));
        }
        GateKind::CX => out.extend(cx_to_ecr(q[0], q[1])),
        GateKind::CP(t) => {
            rz(t / 2.0, q[0], out);
            out.extend(cx_to_ecr(q[0], q[1]));
            rz(-t / 2.0, q[1], out);
            out.extend(cx_to_ecr(q[0], q[1]));
            rz(t / 2.0, q[1], out);
        }
        GateKind::CRY(t) => {
            out.extend(synth_1q(&crate::gates::ry(t / 2.0), q[1]));
            out.extend(cx_to_ecr(q[0], q[1]));
            out.extend(synth_1q(&crate::gates::ry(-t / 2.0), q[1]));
            out.extend(cx_to_ecr(q[0], q[1]));
        }
        GateKind::SWAP => {
            out.extend(cx_to_ecr(q[0], q[1]));
            out.extend(cx_to_ecr(q[1], q[0]));
            out.extend(cx_to_ecr(q[0], q[1]));
        }
        GateKind::COMPOSITE { .. } => unreachable!("composites are inlined before translation"),
    }
}
