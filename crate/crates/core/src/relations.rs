//! Side products and exact verification of the heptagon and pentagon relations.
//!
//! A side is the ordered product of its embedded transfer matrices
//! `A ⊕ 1`, leftmost factor applied first to a row vector.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::ansatz::{transfer_matrix, ParameterSet, TransferMatrix};
use crate::combinatorics::{wiring, FaceId, Move, Side, Vertex, WiringDiagram, WiringStep};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalars::{FieldConfig, Scalar};

/// Entrywise tolerance used when verifying over `float64`.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// `m ⊕ 1` on an `n`-row: row `r` of `m` lands on global row `positions[r]`
/// (1-based), column `c` on `positions[c]`.
pub fn embed(m: &Matrix, positions: &[usize], n: usize) -> Result<Matrix> {
    let bad = || Error::BadPositions(positions.to_vec());
    if positions.len() != m.rows() || m.rows() != m.cols() {
        return Err(bad());
    }
    for (a, &p) in positions.iter().enumerate() {
        if p == 0 || p > n || positions[a + 1..].contains(&p) {
            return Err(bad());
        }
    }
    let mut out = Matrix::identity(m.field(), n);
    for (r, &pr) in positions.iter().enumerate() {
        for (c, &pc) in positions.iter().enumerate() {
            out[(pr - 1, pc - 1)] = m[(r, c)].clone();
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SideProduct {
    pub mv: Move,
    pub side: Side,
    pub matrix: Matrix,
    pub factors: Vec<TransferMatrix>,
    pub wiring: WiringDiagram,
}

fn check_shape(mv: Move, params: &ParameterSet) -> Result<()> {
    if params.n() != mv.n_vertices() {
        return Err(Error::ParameterShape(format!(
            "{mv} needs {} vertices, parameters have {}",
            mv.n_vertices(),
            params.n()
        )));
    }
    Ok(())
}

/// Product of a side for an arbitrary wiring diagram.
pub fn side_product_for(w: &WiringDiagram, params: &ParameterSet) -> Result<SideProduct> {
    check_shape(w.mv, params)?;
    let n = w.mv.row_len();
    let mut acc = Matrix::identity(params.field(), n);
    let mut factors = Vec::with_capacity(w.steps.len());
    for step in &w.steps {
        let tm = transfer_matrix(w.mv, step.simplex, &step.input_legs, &step.output_legs, params)?;
        acc = acc.mul(&embed(&tm.entries, &step.positions, n)?)?;
        factors.push(tm);
    }
    Ok(SideProduct {
        mv: w.mv,
        side: w.side,
        matrix: acc,
        factors,
        wiring: w.clone(),
    })
}

pub fn side_product(mv: Move, side: Side, params: &ParameterSet) -> Result<SideProduct> {
    side_product_for(&wiring(mv, side), params)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mismatch {
    pub row: usize,
    pub col: usize,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    #[serde(rename = "move")]
    pub mv: Move,
    pub field: FieldConfig,
    pub params_digest: String,
    pub equal: bool,
    /// 1-based row and column of the first differing entry.
    pub first_mismatch: Option<Mismatch>,
    pub max_discrepancy: String,
    #[serde(skip)]
    pub sides: (SideProduct, SideProduct),
}

/// Builds both sides and compares them: exactly for rational and prime fields,
/// within [`FLOAT_TOLERANCE`] for `float64`.
pub fn verify_relation(mv: Move, params: &ParameterSet) -> Result<VerificationReport> {
    check_shape(mv, params)?;
    params.require_generic()?;
    let lhs = side_product(mv, Side::Lhs, params)?;
    let rhs = side_product(mv, Side::Rhs, params)?;
    let (a, b) = (&lhs.matrix, &rhs.matrix);
    let first_mismatch = a.first_mismatch(b, FLOAT_TOLERANCE)?.map(|(r, c)| Mismatch {
        row: r + 1,
        col: c + 1,
        lhs: a[(r, c)].clone(),
        rhs: b[(r, c)].clone(),
    });
    let max_discrepancy = discrepancy(a, b);
    Ok(VerificationReport {
        mv,
        field: params.field(),
        params_digest: params.digest(),
        equal: first_mismatch.is_none(),
        first_mismatch,
        max_discrepancy,
        sides: (lhs, rhs),
    })
}

fn discrepancy(a: &Matrix, b: &Matrix) -> String {
    let diffs: Vec<Scalar> = (0..a.rows())
        .flat_map(|r| (0..a.cols()).map(move |c| (r, c)))
        .map(|(r, c)| &a[(r, c)] - &b[(r, c)])
        .collect();
    match a.field() {
        FieldConfig::Rational => diffs
            .into_iter()
            .map(|d| d.as_rational().map(num_traits::Signed::abs).unwrap())
            .max()
            .map(|m| Scalar::Rational(m).to_string())
            .unwrap_or_else(|| "0".into()),
        FieldConfig::Prime { .. } => {
            let k = diffs.iter().filter(|d| !d.is_zero()).count();
            if k == 0 {
                "0".into()
            } else {
                format!("{k} entries differ")
            }
        }
        FieldConfig::Float64 => {
            let m = diffs.iter().map(|d| d.to_f64().abs()).fold(0.0, f64::max);
            Scalar::Float(m).to_string()
        }
    }
}

/// Colors seen by one step.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepValues {
    pub simplex: Vertex,
    pub inputs: Vec<(FaceId, Scalar)>,
    pub outputs: Vec<(FaceId, Scalar)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Transport {
    /// Final row, labelled by the final assignment.
    pub outputs: Vec<(FaceId, Scalar)>,
    pub steps: Vec<StepValues>,
}

impl Transport {
    pub fn final_row(&self) -> Vec<Scalar> {
        self.outputs.iter().map(|(_, s)| s.clone()).collect()
    }

    /// Every face color produced or consumed along the way.
    pub fn face_values(&self) -> BTreeMap<FaceId, Scalar> {
        self.steps
            .iter()
            .flat_map(|s| s.inputs.iter().chain(&s.outputs))
            .map(|(f, v)| (*f, v.clone()))
            .collect()
    }
}

/// Pushes a boundary row (ordered by the initial assignment) through one side,
/// one step at a time.
pub fn transport(row: &[Scalar], mv: Move, side: Side, params: &ParameterSet) -> Result<Transport> {
    check_shape(mv, params)?;
    let w = wiring(mv, side);
    if row.len() != mv.row_len() {
        return Err(Error::Dimension(format!("row of length {}, expected {}", row.len(), mv.row_len())));
    }
    let mut state = row.to_vec();
    let mut steps = Vec::with_capacity(w.steps.len());
    for step in &w.steps {
        let tm = transfer_matrix(mv, step.simplex, &step.input_legs, &step.output_legs, params)?;
        let local: Vec<Scalar> = step.positions.iter().map(|&p| state[p - 1].clone()).collect();
        let out = tm.entries.apply_row(&local)?;
        for (&p, v) in step.positions.iter().zip(&out) {
            state[p - 1] = v.clone();
        }
        steps.push(StepValues {
            simplex: step.simplex,
            inputs: step.input_legs.iter().copied().zip(local).collect(),
            outputs: step.output_legs.iter().copied().zip(out).collect(),
        });
    }
    Ok(Transport {
        outputs: w.final_assignment.iter().copied().zip(state).collect(),
        steps,
    })
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(k - 1) {
        for slot in 0..k {
            let mut p = rest.clone();
            p.insert(slot, k - 1);
            out.push(p);
        }
    }
    out
}

/// All diagrams obtained from the fixed one by reordering each step's outputs,
/// with inputs re-derived from the faces the positions carry, that replay
/// cleanly and end in the fixed final assignment.
fn reorderings(base: &WiringDiagram) -> Vec<WiringDiagram> {
    let k = base.mv.block();
    let perms = permutations(k);
    let mut choices: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in &base.steps {
        choices = choices
            .into_iter()
            .flat_map(|c| (0..perms.len()).map(move |p| [c.clone(), vec![p]].concat()))
            .collect();
    }
    let mut out = Vec::new();
    'choice: for choice in choices {
        let mut state = base.initial_assignment.clone();
        let mut steps = Vec::new();
        for (step, &pi) in base.steps.iter().zip(&choice) {
            let inputs: Vec<FaceId> = step.positions.iter().map(|&p| state[p - 1]).collect();
            if inputs.iter().any(|f| !f.contains(step.simplex)) {
                continue 'choice;
            }
            let outputs: Vec<FaceId> = perms[pi].iter().map(|&r| step.output_legs[r]).collect();
            for (&p, &f) in step.positions.iter().zip(&outputs) {
                state[p - 1] = f;
            }
            steps.push(WiringStep {
                simplex: step.simplex,
                positions: step.positions.clone(),
                input_legs: inputs,
                output_legs: outputs,
            });
        }
        if state != base.final_assignment {
            continue;
        }
        let w = WiringDiagram {
            steps,
            ..base.clone()
        };
        if w.check_flow().is_ok() {
            out.push(w);
        }
    }
    out
}

/// Searches over per-step output orderings (with fixed boundary assignments)
/// for the pairs of diagrams whose side products agree on `params`.
pub fn search_wirings(mv: Move, params: &ParameterSet) -> Result<Vec<(WiringDiagram, WiringDiagram)>> {
    check_shape(mv, params)?;
    params.require_generic()?;
    let products = |side| -> Result<Vec<(WiringDiagram, Matrix)>> {
        reorderings(&wiring(mv, side))
            .into_iter()
            .map(|w| {
                let m = side_product_for(&w, params)?.matrix;
                Ok((w, m))
            })
            .collect()
    };
    let lhs = products(Side::Lhs)?;
    let rhs = products(Side::Rhs)?;
    let mut found = Vec::new();
    for (wl, ml) in &lhs {
        for (wr, mr) in &rhs {
            if ml.first_mismatch(mr, FLOAT_TOLERANCE)?.is_none() {
                found.push((wl.clone(), wr.clone()));
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::default_vandermonde;

    fn q(v: i64) -> Scalar {
        Scalar::from_i64(FieldConfig::Rational, v)
    }

    #[test]
    fn embed_identity_and_index_map() {
        let f = FieldConfig::Rational;
        assert_eq!(embed(&Matrix::identity(f, 3), &[1, 2, 3], 6).unwrap(), Matrix::identity(f, 6));
        let mut m = Matrix::zeros(f, 3, 3);
        m[(0, 2)] = q(9);
        let e = embed(&m, &[2, 4, 6], 6).unwrap();
        assert_eq!(e[(1, 5)], q(9));
        assert_eq!(e[(0, 0)], q(1));
        assert_eq!(e[(1, 1)], q(0));
        assert_eq!(embed(&m, &[1, 1, 2], 6).unwrap_err(), Error::BadPositions(vec![1, 1, 2]));
        assert!(embed(&m, &[1, 2, 7], 6).is_err());
    }

    #[test]
    fn vandermonde_sides_agree() {
        let ps = default_vandermonde(FieldConfig::Rational, 7).unwrap();
        let r = verify_relation(Move::Heptagon, &ps).unwrap();
        assert!(r.equal, "{:?}", r.first_mismatch);
        assert_eq!(r.max_discrepancy, "0");
        // First row of the common product, evaluated independently.
        let expected = ["3/8", "1/10", "1/80", "0", "0", "0"];
        let row: Vec<String> = r.sides.0.matrix.row(0).iter().map(ToString::to_string).collect();
        assert_eq!(row, expected);
        let ps5 = default_vandermonde(FieldConfig::Rational, 5).unwrap();
        assert!(verify_relation(Move::Pentagon, &ps5).unwrap().equal);
    }

    #[test]
    fn non_generic_rejected() {
        let e = |a, b, c| [q(a), q(b), q(c)];
        let ps = ParameterSet::new(
            FieldConfig::Rational,
            vec![e(1, 0, 0), e(0, 1, 0), e(1, 1, 0), e(2, 3, 5), e(7, 1, 4), e(3, 3, 8), e(1, 9, 2)],
        )
        .unwrap();
        match verify_relation(Move::Heptagon, &ps) {
            Err(Error::NonGenericParameters(v)) => assert!(v.contains(&[1, 2, 3])),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_vertex_count() {
        let ps = default_vandermonde(FieldConfig::Rational, 5).unwrap();
        assert!(matches!(verify_relation(Move::Heptagon, &ps), Err(Error::ParameterShape(_))));
    }

    #[test]
    fn transport_zero_row() {
        let ps = default_vandermonde(FieldConfig::Rational, 7).unwrap();
        let t = transport(&vec![q(0); 6], Move::Heptagon, Side::Lhs, &ps).unwrap();
        assert!(t.final_row().iter().all(Scalar::is_zero));
        assert_eq!(t.steps.len(), 4);
    }

    #[test]
    fn float_relation_within_tolerance() {
        let ps = default_vandermonde(FieldConfig::Rational, 7).unwrap().to_float();
        let r = verify_relation(Move::Heptagon, &ps).unwrap();
        assert!(r.equal);
        assert!(r.max_discrepancy.parse::<f64>().unwrap() < FLOAT_TOLERANCE);
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(2).len(), 2);
    }
}
