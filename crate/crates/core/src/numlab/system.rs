//! The heptagon relation as a real polynomial system.
//!
//! Unknowns are the seven 3x3 matrices, simplex order 1..7, each row-major
//! with rows keyed by input legs and columns by output legs of the fixed
//! wiring. Residuals are the 36 entries of `lhs - rhs`, row-major.

use nalgebra::{DMatrix, Matrix6};

use crate::ansatz::{heptagon_matrix, ParameterSet};
use crate::combinatorics::{legs_of, wiring, Move, Side};
use crate::error::Result;

pub const UNKNOWNS: usize = 63;
pub const RESIDUALS: usize = 36;

pub type Mat3 = [[f64; 3]; 3];

struct Factor {
    /// 0-based simplex index into the unknown vector.
    simplex: usize,
    /// 0-based positions.
    positions: [usize; 3],
}

fn factors(side: Side) -> Vec<Factor> {
    wiring(Move::Heptagon, side)
        .steps
        .iter()
        .map(|s| Factor {
            simplex: s.simplex as usize - 1,
            positions: [s.positions[0] - 1, s.positions[1] - 1, s.positions[2] - 1],
        })
        .collect()
}

fn embedded(x: &[f64], f: &Factor) -> Matrix6<f64> {
    let mut e = Matrix6::identity();
    let base = f.simplex * 9;
    for (a, &pa) in f.positions.iter().enumerate() {
        for (b, &pb) in f.positions.iter().enumerate() {
            e[(pa, pb)] = x[base + 3 * a + b];
        }
    }
    e
}

fn product(x: &[f64], side: Side) -> Matrix6<f64> {
    factors(side)
        .iter()
        .fold(Matrix6::identity(), |acc, f| acc * embedded(x, f))
}

/// Both 6x6 side products.
pub fn side_matrices(x: &[f64]) -> (Matrix6<f64>, Matrix6<f64>) {
    assert_eq!(x.len(), UNKNOWNS, "expected {UNKNOWNS} unknowns");
    (product(x, Side::Lhs), product(x, Side::Rhs))
}

pub fn residual(x: &[f64]) -> Vec<f64> {
    let (l, r) = side_matrices(x);
    let d = l - r;
    (0..6).flat_map(|i| (0..6).map(move |j| d[(i, j)])).collect()
}

/// Analytic Jacobian: `∂(P E_t S)/∂A_t[a][b] = P[:, pos_a] ⊗ S[pos_b, :]`.
pub fn jacobian(x: &[f64]) -> DMatrix<f64> {
    assert_eq!(x.len(), UNKNOWNS, "expected {UNKNOWNS} unknowns");
    let mut jac = DMatrix::zeros(RESIDUALS, UNKNOWNS);
    for (side, sign) in [(Side::Lhs, 1.0), (Side::Rhs, -1.0)] {
        let fs = factors(side);
        let es: Vec<Matrix6<f64>> = fs.iter().map(|f| embedded(x, f)).collect();
        for (t, f) in fs.iter().enumerate() {
            let prefix = es[..t].iter().fold(Matrix6::identity(), |acc, e| acc * e);
            let suffix = es[t + 1..].iter().fold(Matrix6::identity(), |acc, e| acc * e);
            for (a, &pa) in f.positions.iter().enumerate() {
                for (b, &pb) in f.positions.iter().enumerate() {
                    let col = f.simplex * 9 + 3 * a + b;
                    for i in 0..6 {
                        let pi = prefix[(i, pa)];
                        if pi == 0.0 {
                            continue;
                        }
                        for j in 0..6 {
                            jac[(6 * i + j, col)] += sign * pi * suffix[(pb, j)];
                        }
                    }
                }
            }
        }
    }
    jac
}

pub fn to_matrices(x: &[f64]) -> Vec<Mat3> {
    x.chunks(9)
        .map(|c| [[c[0], c[1], c[2]], [c[3], c[4], c[5]], [c[6], c[7], c[8]]])
        .collect()
}

pub fn from_matrices(ms: &[Mat3]) -> Vec<f64> {
    ms.iter().flat_map(|m| m.iter().flatten().copied()).collect()
}

/// The ansatz matrices of `params`, cast to `f64`, in unknown-vector layout.
pub fn ansatz_point(params: &ParameterSet) -> Result<Vec<f64>> {
    let mut x = Vec::with_capacity(UNKNOWNS);
    for p in 1..=7 {
        let (ins, outs) = legs_of(Move::Heptagon, p)?;
        let m = heptagon_matrix(p, &ins, &outs, params)?;
        x.extend(m.entries.to_f64_rows().into_iter().flatten());
    }
    Ok(x)
}

pub fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| if x.is_nan() { f64::NAN } else { m.max(x.abs()) })
}
