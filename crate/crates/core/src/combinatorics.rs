//! Vertex and face bookkeeping for the boundaries of the 6-simplex
//! (heptagon) and the 4-simplex (pentagon).
//!
//! Codimension-one simplices are labelled by the single vertex they omit, and
//! the codimension-two faces that carry colors are labelled by the pair of
//! vertices they omit: face `pq` is the common face of simplices `p` and `q`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u8;

/// Unordered pair of distinct vertices, stored as `(lo, hi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceId {
    lo: Vertex,
    hi: Vertex,
}

impl FaceId {
    /// Canonical face for an unordered pair; no range check.
    pub const fn pair(p: Vertex, q: Vertex) -> FaceId {
        if p < q {
            FaceId { lo: p, hi: q }
        } else {
            FaceId { lo: q, hi: p }
        }
    }

    pub fn lo(&self) -> Vertex {
        self.lo
    }

    pub fn hi(&self) -> Vertex {
        self.hi
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.lo == v || self.hi == v
    }

    pub fn meets(&self, other: FaceId) -> bool {
        self.contains(other.lo) || self.contains(other.hi)
    }

    /// The endpoint that is not `v`. Panics when `v` is not an endpoint.
    pub fn other(&self, v: Vertex) -> Vertex {
        if self.lo == v {
            self.hi
        } else if self.hi == v {
            self.lo
        } else {
            panic!("vertex {v} is not on face {self}")
        }
    }

    /// Vertices of the face itself: the complement of the pair.
    pub fn vertex_set(&self, n: u8) -> Vec<Vertex> {
        (1..=n).filter(|&v| !self.contains(v)).collect()
    }
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.lo, self.hi)
    }
}

impl Serialize for FaceId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FaceId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let b = s.as_bytes();
        if b.len() != 2 || !b.iter().all(u8::is_ascii_digit) || b[0] == b[1] {
            return Err(serde::de::Error::custom(format!("bad face label {s:?}")));
        }
        Ok(FaceId::pair(b[0] - b'0', b[1] - b'0'))
    }
}

fn check_vertex(v: Vertex, n: u8) -> Result<()> {
    if (1..=n).contains(&v) {
        Ok(())
    } else {
        Err(Error::InvalidVertex { vertex: v, n })
    }
}

/// Canonical face for `{p, q}` together with its sorted vertex set.
pub fn face_of_pair(p: Vertex, q: Vertex, n: u8) -> Result<(FaceId, Vec<Vertex>)> {
    check_vertex(p, n)?;
    check_vertex(q, n)?;
    if p == q {
        return Err(Error::InvalidVertex { vertex: p, n });
    }
    let face = FaceId::pair(p, q);
    Ok((face, face.vertex_set(n)))
}

/// All faces of an `n`-vertex boundary in lexicographic order.
pub fn all_faces(n: u8) -> Vec<FaceId> {
    let mut out = Vec::new();
    for p in 1..=n {
        for q in p + 1..=n {
            out.push(FaceId::pair(p, q));
        }
    }
    out
}

/// Position of `face` in [`all_faces`].
pub fn face_index(face: FaceId, n: u8) -> usize {
    let (lo, hi) = (face.lo as usize, face.hi as usize);
    let n = n as usize;
    // Faces with smaller first vertex come first: sum_{a<lo} (n - a).
    (1..lo).map(|a| n - a).sum::<usize>() + (hi - lo - 1)
}

/// Faces that contain the edge `{i, j}`, i.e. pairs avoiding both endpoints.
pub fn support_faces(i: Vertex, j: Vertex, n: u8) -> Result<Vec<FaceId>> {
    face_of_pair(i, j, n)?;
    Ok(all_faces(n)
        .into_iter()
        .filter(|f| !f.contains(i) && !f.contains(j))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PermutationSign(i8);

impl PermutationSign {
    pub const PLUS: PermutationSign = PermutationSign(1);
    pub const MINUS: PermutationSign = PermutationSign(-1);

    pub fn value(self) -> i8 {
        self.0
    }

    pub fn compose(self, other: PermutationSign) -> PermutationSign {
        PermutationSign(self.0 * other.0)
    }
}

/// Sign of the permutation taking `labels` to increasing order.
pub fn permutation_sign(labels: &[Vertex]) -> Result<PermutationSign> {
    let mut seen = BTreeSet::new();
    for &v in labels {
        if !seen.insert(v) {
            return Err(Error::DuplicateLabel(v));
        }
    }
    let inversions = labels
        .iter()
        .enumerate()
        .map(|(a, x)| labels[a + 1..].iter().filter(|y| *y < x).count())
        .sum::<usize>();
    Ok(if inversions % 2 == 0 {
        PermutationSign::PLUS
    } else {
        PermutationSign::MINUS
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Move {
    Heptagon,
    Pentagon,
}

impl Move {
    pub fn n_vertices(self) -> u8 {
        match self {
            Move::Heptagon => 7,
            Move::Pentagon => 5,
        }
    }

    /// Length of the boundary rows the side products act on.
    pub fn row_len(self) -> usize {
        match self {
            Move::Heptagon => 6,
            Move::Pentagon => 3,
        }
    }

    /// Size of one transfer matrix.
    pub fn block(self) -> usize {
        match self {
            Move::Heptagon => 3,
            Move::Pentagon => 2,
        }
    }

    pub fn for_vertices(n: usize) -> Result<Move> {
        match n {
            7 => Ok(Move::Heptagon),
            5 => Ok(Move::Pentagon),
            _ => Err(Error::UnsupportedSize(n)),
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Move::Heptagon => "heptagon",
            Move::Pentagon => "pentagon",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lhs,
    Rhs,
}

/// One factor of a side: simplex `simplex` acting on `positions` (1-based).
///
/// Row `r` of the transfer matrix reads the color at `positions[r]`, which
/// carries `input_legs[r]`; afterwards that position carries `output_legs[r]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WiringStep {
    pub simplex: Vertex,
    pub positions: Vec<usize>,
    pub input_legs: Vec<FaceId>,
    pub output_legs: Vec<FaceId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WiringDiagram {
    #[serde(rename = "move")]
    pub mv: Move,
    pub side: Side,
    pub steps: Vec<WiringStep>,
    /// Face carried by position `k + 1` before the first step.
    pub initial_assignment: Vec<FaceId>,
    /// Face carried by position `k + 1` after the last step.
    pub final_assignment: Vec<FaceId>,
}

const fn f(p: Vertex, q: Vertex) -> FaceId {
    FaceId::pair(p, q)
}

/// Simplex, positions, input legs, output legs.
type StepTable<const K: usize = 3> = (Vertex, &'static [usize], [FaceId; K], [FaceId; K]);

const HEPTAGON_INITIAL: [FaceId; 6] = [f(1, 5), f(1, 6), f(1, 7), f(2, 6), f(2, 7), f(3, 7)];
const HEPTAGON_FINAL: [FaceId; 6] = [f(2, 5), f(3, 5), f(4, 5), f(3, 6), f(4, 6), f(4, 7)];

const HEPTAGON_LHS: [StepTable; 4] = [
    (1, &[1, 2, 3], [f(1, 5), f(1, 6), f(1, 7)], [f(1, 2), f(1, 3), f(1, 4)]),
    (2, &[1, 4, 5], [f(1, 2), f(2, 6), f(2, 7)], [f(2, 5), f(2, 3), f(2, 4)]),
    (3, &[2, 4, 6], [f(1, 3), f(2, 3), f(3, 7)], [f(3, 5), f(3, 6), f(3, 4)]),
    (4, &[3, 5, 6], [f(1, 4), f(2, 4), f(3, 4)], [f(4, 5), f(4, 6), f(4, 7)]),
];

const HEPTAGON_RHS: [StepTable; 3] = [
    (7, &[3, 5, 6], [f(1, 7), f(2, 7), f(3, 7)], [f(5, 7), f(6, 7), f(4, 7)]),
    (6, &[2, 4, 5], [f(1, 6), f(2, 6), f(6, 7)], [f(5, 6), f(3, 6), f(4, 6)]),
    (5, &[1, 2, 3], [f(1, 5), f(5, 6), f(5, 7)], [f(2, 5), f(3, 5), f(4, 5)]),
];

const PENTAGON_INITIAL: [FaceId; 3] = [f(1, 4), f(1, 5), f(2, 5)];
const PENTAGON_FINAL: [FaceId; 3] = [f(2, 4), f(3, 4), f(3, 5)];

const PENTAGON_LHS: [StepTable<2>; 3] = [
    (1, &[1, 2], [f(1, 4), f(1, 5)], [f(1, 2), f(1, 3)]),
    (2, &[1, 3], [f(1, 2), f(2, 5)], [f(2, 4), f(2, 3)]),
    (3, &[2, 3], [f(1, 3), f(2, 3)], [f(3, 4), f(3, 5)]),
];

const PENTAGON_RHS: [StepTable<2>; 2] = [
    (5, &[2, 3], [f(1, 5), f(2, 5)], [f(4, 5), f(3, 5)]),
    (4, &[1, 2], [f(1, 4), f(4, 5)], [f(2, 4), f(3, 4)]),
];

fn steps_from<const K: usize>(table: &[StepTable<K>]) -> Vec<WiringStep> {
    table
        .iter()
        .map(|(s, pos, i, o)| WiringStep {
            simplex: *s,
            positions: pos.to_vec(),
            input_legs: i.to_vec(),
            output_legs: o.to_vec(),
        })
        .collect()
}

/// The fixed wiring for one side of a move.
pub fn wiring(mv: Move, side: Side) -> WiringDiagram {
    let (steps, initial, fin) = match (mv, side) {
        (Move::Heptagon, Side::Lhs) => (steps_from(&HEPTAGON_LHS), &HEPTAGON_INITIAL[..], &HEPTAGON_FINAL[..]),
        (Move::Heptagon, Side::Rhs) => (steps_from(&HEPTAGON_RHS), &HEPTAGON_INITIAL[..], &HEPTAGON_FINAL[..]),
        (Move::Pentagon, Side::Lhs) => (steps_from(&PENTAGON_LHS), &PENTAGON_INITIAL[..], &PENTAGON_FINAL[..]),
        (Move::Pentagon, Side::Rhs) => (steps_from(&PENTAGON_RHS), &PENTAGON_INITIAL[..], &PENTAGON_FINAL[..]),
    };
    WiringDiagram {
        mv,
        side,
        steps,
        initial_assignment: initial.to_vec(),
        final_assignment: fin.to_vec(),
    }
}

/// Input and output legs of simplex `p`, taken from whichever side it sits on.
pub fn legs_of(mv: Move, p: Vertex) -> Result<(Vec<FaceId>, Vec<FaceId>)> {
    for side in [Side::Lhs, Side::Rhs] {
        if let Some(step) = wiring(mv, side).steps.into_iter().find(|s| s.simplex == p) {
            return Ok((step.input_legs, step.output_legs));
        }
    }
    Err(Error::InvalidVertex {
        vertex: p,
        n: mv.n_vertices(),
    })
}

impl WiringDiagram {
    /// Simplices acting on this side, in application order.
    pub fn simplices(&self) -> Vec<Vertex> {
        self.steps.iter().map(|s| s.simplex).collect()
    }

    /// Faces produced by one step and consumed by a later one.
    pub fn inner_faces(&self) -> BTreeSet<FaceId> {
        let produced: BTreeSet<FaceId> = self.steps.iter().flat_map(|s| s.output_legs.iter().copied()).collect();
        let consumed: BTreeSet<FaceId> = self.steps.iter().flat_map(|s| s.input_legs.iter().copied()).collect();
        produced.intersection(&consumed).copied().collect()
    }

    /// Faces on the common boundary: initial and final assignments.
    pub fn boundary_faces(&self) -> BTreeSet<FaceId> {
        self.initial_assignment
            .iter()
            .chain(self.final_assignment.iter())
            .copied()
            .collect()
    }

    /// Replays the diagram position by position and checks every structural
    /// invariant: leg membership, leg/position agreement, that each inner face
    /// is produced once and consumed once later, and the final assignment.
    pub fn check_flow(&self) -> Result<()> {
        let n = self.mv.n_vertices();
        let k = self.mv.block();
        let bad = |why: String| Error::InvalidFace(format!("{} {:?} wiring: {why}", self.mv, self.side));
        let mut state: BTreeMap<usize, FaceId> = self
            .initial_assignment
            .iter()
            .enumerate()
            .map(|(i, f)| (i + 1, *f))
            .collect();
        if state.len() != self.mv.row_len() {
            return Err(bad("initial assignment has wrong length".into()));
        }
        let mut produced = BTreeSet::new();
        let mut consumed = BTreeSet::new();
        for step in &self.steps {
            let p = step.simplex;
            if step.positions.len() != k || step.input_legs.len() != k || step.output_legs.len() != k {
                return Err(bad(format!("step {p} has wrong arity")));
            }
            for leg in step.input_legs.iter().chain(&step.output_legs) {
                if !leg.contains(p) || leg.lo < 1 || leg.hi > n {
                    return Err(bad(format!("leg {leg} does not belong to simplex {p}")));
                }
            }
            for (r, &pos) in step.positions.iter().enumerate() {
                if state.get(&pos) != Some(&step.input_legs[r]) {
                    return Err(bad(format!("position {pos} does not carry input {}", step.input_legs[r])));
                }
                if !consumed.insert(step.input_legs[r]) {
                    return Err(bad(format!("face {} consumed twice", step.input_legs[r])));
                }
            }
            for (r, &pos) in step.positions.iter().enumerate() {
                let out = step.output_legs[r];
                if !produced.insert(out) {
                    return Err(bad(format!("face {out} produced twice")));
                }
                state.insert(pos, out);
            }
        }
        let fin: Vec<FaceId> = state.values().copied().collect();
        if fin != self.final_assignment {
            return Err(bad("final assignment does not match the replay".into()));
        }
        Ok(())
    }
}
