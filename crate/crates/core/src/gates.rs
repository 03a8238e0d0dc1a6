//! Dense matrices for the fixed gate set.
//!
//! Two-qubit matrices are written in a little-endian local basis: for an
//! instruction on qubits `[a, b]` the local index is `bit(a) + 2 * bit(b)`.
//! The first listed qubit is therefore the low (right-hand) tensor factor.

use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::circuit::GateKind;

pub type C64 = Complex64;
pub type Mat2 = [[C64; 2]; 2];
pub type Mat4 = [[C64; 4]; 4];

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

pub const IDENTITY: Mat2 = [[ONE, ZERO], [ZERO, ONE]];
pub const PAULI_X: Mat2 = [[ZERO, ONE], [ONE, ZERO]];
pub const PAULI_Y: Mat2 = [[ZERO, C64::new(0.0, -1.0)], [I, ZERO]];
pub const PAULI_Z: Mat2 = [[ONE, ZERO], [ZERO, C64::new(-1.0, 0.0)]];

pub fn hadamard() -> Mat2 {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

pub fn sx() -> Mat2 {
    let a = C64::new(0.5, 0.5);
    let b = C64::new(0.5, -0.5);
    [[a, b], [b, a]]
}

pub fn rz(theta: f64) -> Mat2 {
    [[C64::from_polar(1.0, -theta / 2.0), ZERO], [ZERO, C64::from_polar(1.0, theta / 2.0)]]
}

pub fn ry(theta: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [[C64::new(c, 0.0), C64::new(-s, 0.0)], [C64::new(s, 0.0), C64::new(c, 0.0)]]
}

/// `kron(high, low)`: `low` acts on the first listed qubit.
pub fn kron(high: &Mat2, low: &Mat2) -> Mat4 {
    let mut out = [[ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[r][c] = high[r >> 1][c >> 1] * low[r & 1][c & 1];
        }
    }
    out
}

/// Echoed cross-resonance, `(I⊗X − X⊗Y)/√2` with the right factor on the first qubit.
pub fn ecr() -> Mat4 {
    let ix = kron(&IDENTITY, &PAULI_X);
    let xy = kron(&PAULI_X, &PAULI_Y);
    let mut out = [[ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[r][c] = (ix[r][c] - xy[r][c]) * FRAC_1_SQRT_2;
        }
    }
    out
}

fn permutation4(map: [usize; 4]) -> Mat4 {
    let mut out = [[ZERO; 4]; 4];
    for (col, &row) in map.iter().enumerate() {
        out[row][col] = ONE;
    }
    out
}

/// Controlled-X, control on the first qubit.
pub fn cx() -> Mat4 {
    permutation4([0, 3, 2, 1])
}

pub fn swap() -> Mat4 {
    permutation4([0, 2, 1, 3])
}

pub fn cp(theta: f64) -> Mat4 {
    let mut out = permutation4([0, 1, 2, 3]);
    out[3][3] = C64::from_polar(1.0, theta);
    out
}

/// Controlled-RY, control on the first qubit.
pub fn cry(theta: f64) -> Mat4 {
    let r = ry(theta);
    let mut out = permutation4([0, 1, 2, 3]);
    out[1][1] = r[0][0];
    out[1][3] = r[0][1];
    out[3][1] = r[1][0];
    out[3][3] = r[1][1];
    out
}

pub fn matrix_1q(kind: &GateKind) -> Option<Mat2> {
    Some(match *kind {
        GateKind::H => hadamard(),
        GateKind::X => PAULI_X,
        GateKind::SX => sx(),
        GateKind::RZ(t) => rz(t),
        GateKind::RY(t) => ry(t),
        GateKind::ID => IDENTITY,
        _ => return None,
    })
}

pub fn matrix_2q(kind: &GateKind) -> Option<Mat4> {
    Some(match *kind {
        GateKind::CX => cx(),
        GateKind::CP(t) => cp(t),
        GateKind::CRY(t) => cry(t),
        GateKind::SWAP => swap(),
        GateKind::ECR => ecr(),
        _ => return None,
    })
}

pub fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

pub fn mul4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[r][c] = (0..4).map(|k| a[r][k] * b[k][c]).sum();
        }
    }
    out
}

/// Largest entrywise distance between `a` and `e^{iφ} b`, minimised over the global phase.
pub fn phase_distance2(a: &Mat2, b: &Mat2) -> f64 {
    phase_distance(a.iter().flatten().copied(), b.iter().flatten().copied())
}

pub fn phase_distance4(a: &Mat4, b: &Mat4) -> f64 {
    phase_distance(a.iter().flatten().copied(), b.iter().flatten().copied())
}

fn phase_distance(a: impl Iterator<Item = C64> + Clone, b: impl Iterator<Item = C64> + Clone) -> f64 {
    let overlap: C64 = a.clone().zip(b.clone()).map(|(x, y)| y.conj() * x).sum();
    let phase = if overlap.norm() > 1e-300 { overlap / overlap.norm() } else { ONE };
    a.zip(b).map(|(x, y)| (x - phase * y).norm()).fold(0.0, f64::max)
}

pub fn is_unitary2(u: &Mat2, tol: f64) -> bool {
    let mut adj = [[ZERO; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            adj[r][c] = u[c][r].conj();
        }
    }
    let p = mul2(&adj, u);
    (0..2).all(|r| (0..2).all(|c| (p[r][c] - if r == c { ONE } else { ZERO }).norm() <= tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close4(a: &Mat4, b: &Mat4) -> bool {
        a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| (x - y).norm() < 1e-12)
    }

    #[test]
    fn ecr_matches_reference_layout() {
        let s = FRAC_1_SQRT_2;
        let expect: Mat4 = [
            [ZERO, ONE * s, ZERO, I * s],
            [ONE * s, ZERO, -I * s, ZERO],
            [ZERO, I * s, ZERO, ONE * s],
            [-I * s, ZERO, ONE * s, ZERO],
        ];
        assert!(close4(&ecr(), &expect));
    }

    #[test]
    fn sx_squares_to_x() {
        let p = mul2(&sx(), &sx());
        assert!(phase_distance2(&p, &PAULI_X) < 1e-12);
    }

    #[test]
    fn cx_flips_target_when_control_set() {
        // local index 1 = control set, target clear -> 3
        let m = cx();
        assert_eq!(m[3][1], ONE);
        assert_eq!(m[0][0], ONE);
    }

    #[test]
    fn cry_pi_acts_like_controlled_y_up_to_sign() {
        let m = cry(std::f64::consts::PI);
        assert!((m[3][1] - ONE).norm() < 1e-12);
        assert!((m[1][3] + ONE).norm() < 1e-12);
        assert!((m[0][0] - ONE).norm() < 1e-12);
    }
}
