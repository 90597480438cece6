//! Edge vectors of the boundary of the 6-simplex and their exact properties.
//!
//! The edge vector of `{i, j}` colors face `u` (omitting `l, m`) with
//! `d_{ilm} d_{jlm}`, and every face whose omitted pair meets `{i, j}` with
//! zero. Everything below is checked in exact arithmetic: permittedness, the
//! vertex dependences with coefficients `ε_{ijklm} d_{klm}`, the global and
//! local spans, and recovery of the transfer matrices from the vectors.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::ansatz::{generalized_vector, heptagon_matrix, transfer_matrix, ParameterSet, TransferMatrix};
use crate::combinatorics::{all_faces, face_index, legs_of, permutation_sign, FaceId, Move, Side, Vertex};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::relations::{transport, Transport, FLOAT_TOLERANCE};
use crate::scalars::{FieldConfig, Scalar};

/// A color for every codimension-two face, keyed by the omitted pair.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryColoring {
    n: u8,
    values: BTreeMap<FaceId, Scalar>,
}

impl BoundaryColoring {
    pub fn zero(field: FieldConfig, n: u8) -> BoundaryColoring {
        BoundaryColoring {
            n,
            values: all_faces(n).into_iter().map(|f| (f, Scalar::zero(field))).collect(),
        }
    }

    /// Colors listed in [`all_faces`] order.
    pub fn from_row(n: u8, row: Vec<Scalar>) -> Result<BoundaryColoring> {
        let faces = all_faces(n);
        if faces.len() != row.len() {
            return Err(Error::Dimension(format!("{} colors for {} faces", row.len(), faces.len())));
        }
        Ok(BoundaryColoring {
            n,
            values: faces.into_iter().zip(row).collect(),
        })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn get(&self, face: FaceId) -> &Scalar {
        &self.values[&face]
    }

    pub fn set(&mut self, face: FaceId, value: Scalar) {
        self.values.insert(face, value);
    }

    pub fn as_row(&self) -> Vec<Scalar> {
        self.values.values().cloned().collect()
    }

    pub fn restrict(&self, faces: &[FaceId]) -> Vec<Scalar> {
        faces.iter().map(|f| self.get(*f).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(Scalar::is_zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FaceId, &Scalar)> {
        self.values.iter()
    }

    /// Nonzero components keyed `"kl"`, the edge-vector dump form.
    pub fn support_map(&self) -> BTreeMap<String, String> {
        self.values
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(f, v)| (f.to_string(), v.to_string()))
            .collect()
    }
}

fn require_heptagon(params: &ParameterSet) -> Result<()> {
    if params.n() != 7 {
        return Err(Error::ParameterShape(format!(
            "edge vectors live on 7 vertices, parameters have {}",
            params.n()
        )));
    }
    Ok(())
}

fn d(i: Vertex, j: Vertex, k: Vertex, params: &ParameterSet) -> Scalar {
    crate::ansatz::det3(i, j, k, params).expect("distinct in-range indices")
}

/// `e_{ij}`: `d_{ilm} d_{jlm}` on faces `lm` avoiding `i, j`, zero elsewhere.
pub fn edge_vector(i: Vertex, j: Vertex, params: &ParameterSet) -> Result<BoundaryColoring> {
    require_heptagon(params)?;
    crate::combinatorics::face_of_pair(i, j, 7)?;
    params.require_generic()?;
    let mut c = BoundaryColoring::zero(params.field(), 7);
    for face in all_faces(7) {
        if face.contains(i) || face.contains(j) {
            continue;
        }
        let (l, m) = (face.lo(), face.hi());
        c.set(face, d(i, l, m, params) * d(j, l, m, params));
    }
    Ok(c)
}

/// All 21 edge vectors in [`all_faces`] order of their edges.
pub fn all_edge_vectors(params: &ParameterSet) -> Result<Vec<(FaceId, BoundaryColoring)>> {
    all_faces(7)
        .into_iter()
        .map(|e| Ok((e, edge_vector(e.lo(), e.hi(), params)?)))
        .collect()
}

/// The coloring whose component at each face is [`generalized_vector`].
pub fn generalized_coloring(sigma: &[Vertex], params: &ParameterSet) -> Result<BoundaryColoring> {
    let n = params.n();
    let row = all_faces(n)
        .into_iter()
        .map(|v| generalized_vector(n, sigma, v, params))
        .collect::<Result<Vec<_>>>()?;
    BoundaryColoring::from_row(n, row)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimplexCheck {
    pub simplex: Vertex,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PermittedReport {
    pub simplices: Vec<SimplexCheck>,
}

impl PermittedReport {
    pub fn all_pass(&self) -> bool {
        self.simplices.iter().all(|s| s.pass)
    }
}

/// Checks `inputs · A^(p) = outputs` on every codimension-one simplex, with
/// the move picked from the coloring's vertex count.
pub fn check_permitted(c: &BoundaryColoring, params: &ParameterSet) -> Result<PermittedReport> {
    let mv = Move::for_vertices(c.n() as usize)?;
    let mut simplices = Vec::new();
    for p in 1..=c.n() {
        let (ins, outs) = legs_of(mv, p)?;
        let a = transfer_matrix(mv, p, &ins, &outs, params)?;
        let got = a.entries.apply_row(&c.restrict(&ins))?;
        let want = c.restrict(&outs);
        let mut pass = true;
        for (g, w) in got.iter().zip(&want) {
            pass &= g.approx_eq(w, FLOAT_TOLERANCE)?;
        }
        simplices.push(SimplexCheck { simplex: p, pass });
    }
    Ok(PermittedReport { simplices })
}

/// Linear system whose kernel is the space of permitted colorings: one row
/// per (simplex, output leg), one column per face in [`all_faces`] order.
pub fn permittedness_system(mv: Move, params: &ParameterSet) -> Result<Matrix> {
    let n = mv.n_vertices();
    let faces = all_faces(n);
    let k = mv.block();
    let mut sys = Matrix::zeros(params.field(), n as usize * k, faces.len());
    for p in 1..=n {
        let (ins, outs) = legs_of(mv, p)?;
        let a = transfer_matrix(mv, p, &ins, &outs, params)?;
        for c in 0..k {
            let row = (p as usize - 1) * k + c;
            for r in 0..k {
                sys[(row, face_index(ins[r], n))] = a.entries[(r, c)].clone();
            }
            sys[(row, face_index(outs[c], n))] = Scalar::from_i64(params.field(), -1);
        }
    }
    Ok(sys)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DependenceCoefficient {
    pub u: Vec<Vertex>,
    pub vertex: Vertex,
    pub edge: FaceId,
    pub value: Scalar,
}

fn pentachoron(u: &[Vertex]) -> Result<Vec<Vertex>> {
    let mut v = u.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.len() != 5 || u.len() != 5 || v.iter().any(|&x| !(1..=7).contains(&x)) {
        return Err(Error::InvalidFace(format!("{u:?} is not a 4-face of the 6-simplex")));
    }
    Ok(v)
}

/// `λ^{(u)}_{i,ij} = ε_{ijklm} d_{klm}` with `(k, l, m)` the rest of `u`, increasing.
pub fn lambda_coeff(u: &[Vertex], i: Vertex, j: Vertex, params: &ParameterSet) -> Result<DependenceCoefficient> {
    require_heptagon(params)?;
    let u = pentachoron(u)?;
    if i == j || !u.contains(&i) || !u.contains(&j) {
        return Err(Error::InvalidFace(format!("edge {i}{j} is not inside {u:?}")));
    }
    let rest: Vec<Vertex> = u.iter().copied().filter(|&x| x != i && x != j).collect();
    let sign = permutation_sign(&[i, j, rest[0], rest[1], rest[2]])?;
    let det = d(rest[0], rest[1], rest[2], params);
    let value = if sign.value() > 0 { det } else { -det };
    Ok(DependenceCoefficient {
        u,
        vertex: i,
        edge: FaceId::pair(i, j),
        value,
    })
}

fn column_matrix(field: FieldConfig, columns: &[Vec<Scalar>]) -> Result<Matrix> {
    Ok(Matrix::from_rows(field, columns.to_vec())?.transpose())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexDependence {
    pub u: Vec<Vertex>,
    pub vertex: Vertex,
    pub lambdas: Vec<(FaceId, Scalar)>,
    /// `Σ λ e_b = 0` on all 21 faces.
    pub sum_vanishes: bool,
    /// Rank of the four edge vectors.
    pub rank: usize,
    /// `c` with `λ = c · k`, where `k` is the exact kernel vector of the four
    /// edge vectors with its free coordinate set to 1; `None` if not proportional.
    pub kernel_ratio: Option<Scalar>,
}

impl VertexDependence {
    pub fn pass(&self) -> bool {
        self.sum_vanishes && self.rank == 3 && self.kernel_ratio.is_some()
    }
}

pub fn verify_vertex_dependence(u: &[Vertex], i: Vertex, params: &ParameterSet) -> Result<VertexDependence> {
    let u = pentachoron(u)?;
    if !u.contains(&i) {
        return Err(Error::InvalidFace(format!("vertex {i} is not in {u:?}")));
    }
    let field = params.field();
    let mut lambdas = Vec::new();
    let mut vectors = Vec::new();
    let mut sum = vec![Scalar::zero(field); 21];
    for &j in u.iter().filter(|&&j| j != i) {
        let lam = lambda_coeff(&u, i, j, params)?.value;
        let e = edge_vector(i, j, params)?.as_row();
        for (s, x) in sum.iter_mut().zip(&e) {
            *s = &*s + &(&lam * x);
        }
        lambdas.push((FaceId::pair(i, j), lam));
        vectors.push(e);
    }
    let sum_vanishes = sum.iter().all(Scalar::is_zero);
    let stacked = column_matrix(field, &vectors)?;
    let (rank, kernel) = stacked.rank_and_nullspace()?;
    let kernel_ratio = match kernel.as_slice() {
        [k] => {
            let lead = k.iter().position(|x| !x.is_zero()).expect("kernel vector is nonzero");
            let scale = &lambdas[lead].1 / &k[lead];
            let proportional = lambdas.iter().zip(k).all(|((_, l), kv)| *l == &scale * kv);
            proportional.then_some(scale)
        }
        _ => None,
    };
    Ok(VertexDependence {
        u,
        vertex: i,
        lambdas,
        sum_vanishes,
        rank,
        kernel_ratio,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeCancellation {
    pub edge: FaceId,
    pub lambda_i: Scalar,
    pub lambda_j: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DependenceOfDependences {
    pub u: Vec<Vertex>,
    pub edges: Vec<EdgeCancellation>,
}

impl DependenceOfDependences {
    pub fn pass(&self) -> bool {
        self.edges.iter().all(|e| (&e.lambda_i + &e.lambda_j).is_zero())
    }
}

/// Pairwise cancellation `λ_{i,ij} + λ_{j,ij} = 0` over the 10 edges of `u`.
pub fn verify_dependence_of_dependences(u: &[Vertex], params: &ParameterSet) -> Result<DependenceOfDependences> {
    let u = pentachoron(u)?;
    let mut edges = Vec::new();
    for (a, &i) in u.iter().enumerate() {
        for &j in &u[a + 1..] {
            edges.push(EdgeCancellation {
                edge: FaceId::pair(i, j),
                lambda_i: lambda_coeff(&u, i, j, params)?.value,
                lambda_j: lambda_coeff(&u, j, i, params)?.value,
            });
        }
    }
    Ok(DependenceOfDependences { u, edges })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GlobalSpan {
    pub edge_rank: usize,
    pub permitted_dim: usize,
    pub spans_coincide: bool,
    /// Basis of the permitted space.
    pub basis: Vec<BoundaryColoring>,
}

impl GlobalSpan {
    pub fn pass(&self) -> bool {
        self.edge_rank == 6 && self.permitted_dim == 6 && self.spans_coincide
    }
}

pub fn global_span_rank(params: &ParameterSet) -> Result<GlobalSpan> {
    let field = params.field();
    let edges: Vec<Vec<Scalar>> = all_edge_vectors(params)?.into_iter().map(|(_, e)| e.as_row()).collect();
    let edge_matrix = Matrix::from_rows(field, edges.clone())?;
    let edge_rank = edge_matrix.rank()?;
    let system = permittedness_system(Move::Heptagon, params)?;
    let kernel = system.nullspace()?;
    let permitted_dim = kernel.len();
    let stacked = Matrix::from_rows(field, edges.iter().cloned().chain(kernel.iter().cloned()).collect())?;
    let spans_coincide = edge_rank == permitted_dim && stacked.rank()? == edge_rank;
    let basis = kernel
        .into_iter()
        .map(|row| BoundaryColoring::from_row(7, row))
        .collect::<Result<_>>()?;
    Ok(GlobalSpan {
        edge_rank,
        permitted_dim,
        spans_coincide,
        basis,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalSpan {
    pub simplex: Vertex,
    pub edge_rank: usize,
    pub permitted_dim: usize,
}

impl LocalSpan {
    pub fn pass(&self) -> bool {
        self.edge_rank == 3 && self.permitted_dim == 3
    }
}

fn local_legs(p: Vertex) -> Result<Vec<FaceId>> {
    let (ins, outs) = legs_of(Move::Heptagon, p)?;
    Ok(ins.into_iter().chain(outs).collect())
}

/// Rank of the edge vectors restricted to the six legs of `p`, next to the
/// dimension of that simplex's own permitted space.
pub fn local_span_rank(p: Vertex, params: &ParameterSet) -> Result<LocalSpan> {
    let field = params.field();
    let legs = local_legs(p)?;
    let rows: Vec<Vec<Scalar>> = all_edge_vectors(params)?
        .into_iter()
        .map(|(_, e)| e.restrict(&legs))
        .collect();
    let edge_rank = Matrix::from_rows(field, rows)?.rank()?;
    let (ins, outs) = legs_of(Move::Heptagon, p)?;
    let a = heptagon_matrix(p, &ins, &outs, params)?;
    let mut sys = Matrix::zeros(field, 3, 6);
    for c in 0..3 {
        for r in 0..3 {
            sys[(c, r)] = a.entries[(r, c)].clone();
        }
        sys[(c, 3 + c)] = Scalar::from_i64(field, -1);
    }
    let permitted_dim = sys.nullspace()?.len();
    Ok(LocalSpan {
        simplex: p,
        edge_rank,
        permitted_dim,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OnlyOnJ {
    pub vertex: Vertex,
    pub kernel_dim: usize,
    pub annihilated: bool,
    pub span_rank: usize,
}

impl OnlyOnJ {
    pub fn pass(&self) -> bool {
        self.kernel_dim == 3 && self.annihilated && self.span_rank == 3
    }
}

/// Every linear relation among the triples `(α_j, β_j, γ_j)`, `j ≠ i`, also
/// holds among the `e_{ij}`; and those six vectors span a 3-space.
pub fn verify_only_on_j(i: Vertex, params: &ParameterSet) -> Result<OnlyOnJ> {
    require_heptagon(params)?;
    let field = params.field();
    let others: Vec<Vertex> = (1..=7).filter(|&j| j != i).collect();
    if others.len() != 6 {
        return Err(Error::InvalidVertex { vertex: i, n: 7 });
    }
    let triples: Vec<Vec<Scalar>> = others.iter().map(|&j| params.triple(j).to_vec()).collect();
    let grid = column_matrix(field, &triples)?;
    let kernel = grid.nullspace()?;
    let vectors: Vec<Vec<Scalar>> = others
        .iter()
        .map(|&j| Ok(edge_vector(i, j, params)?.as_row()))
        .collect::<Result<_>>()?;
    let annihilated = kernel.iter().all(|c| {
        (0..21).all(|f| {
            c.iter()
                .zip(&vectors)
                .fold(Scalar::zero(field), |acc, (cj, e)| &acc + &(cj * &e[f]))
                .is_zero()
        })
    });
    let span_rank = Matrix::from_rows(field, vectors)?.rank()?;
    Ok(OnlyOnJ {
        vertex: i,
        kernel_dim: kernel.len(),
        annihilated,
        span_rank,
    })
}

/// Recovers `A^(p)` from the local permitted space spanned by restricted edge
/// vectors: picks three vectors with an invertible input block `X_in` and
/// returns `X_in⁻¹ X_out`, after checking every other vector against it.
pub fn reconstruct_matrix(p: Vertex, params: &ParameterSet) -> Result<TransferMatrix> {
    let field = params.field();
    let (ins, outs) = legs_of(Move::Heptagon, p)?;
    let restricted: Vec<(Vec<Scalar>, Vec<Scalar>)> = all_edge_vectors(params)?
        .into_iter()
        .map(|(_, e)| (e.restrict(&ins), e.restrict(&outs)))
        .collect();
    let mut chosen: Vec<usize> = Vec::new();
    for (idx, (xin, _)) in restricted.iter().enumerate() {
        let mut rows: Vec<Vec<Scalar>> = chosen.iter().map(|&c| restricted[c].0.clone()).collect();
        rows.push(xin.clone());
        if Matrix::from_rows(field, rows)?.rank()? == chosen.len() + 1 {
            chosen.push(idx);
            if chosen.len() == 3 {
                break;
            }
        }
    }
    if chosen.len() < 3 {
        return Err(Error::SingularInputBlock(p));
    }
    let xin = Matrix::from_rows(field, chosen.iter().map(|&c| restricted[c].0.clone()).collect())?;
    let xout = Matrix::from_rows(field, chosen.iter().map(|&c| restricted[c].1.clone()).collect())?;
    let inv = xin.inverse()?.ok_or(Error::SingularInputBlock(p))?;
    let a = inv.mul(&xout)?;
    for (xi, xo) in &restricted {
        if a.apply_row(xi)? != *xo {
            return Err(Error::SingularInputBlock(p));
        }
    }
    Ok(TransferMatrix {
        simplex: p,
        entries: a,
        input_legs: ins,
        output_legs: outs,
    })
}

/// An edge vector pushed through both sides of the move.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Walkthrough {
    pub edge: FaceId,
    pub lhs: Transport,
    pub rhs: Transport,
    /// Zero exactly on faces whose pair meets the edge.
    pub zero_pattern_ok: bool,
    /// Every intermediate color equals the edge vector's component.
    pub consistent: bool,
    pub nonzero: bool,
}

impl Walkthrough {
    pub fn pass(&self) -> bool {
        self.zero_pattern_ok && self.consistent && self.nonzero
    }
}

pub fn walkthrough(i: Vertex, j: Vertex, params: &ParameterSet) -> Result<Walkthrough> {
    let e = edge_vector(i, j, params)?;
    let edge = FaceId::pair(i, j);
    let zero_pattern_ok = e.iter().all(|(f, v)| v.is_zero() == f.meets(edge));
    let initial = crate::combinatorics::wiring(Move::Heptagon, Side::Lhs).initial_assignment;
    let row = e.restrict(&initial);
    let lhs = transport(&row, Move::Heptagon, Side::Lhs, params)?;
    let rhs = transport(&row, Move::Heptagon, Side::Rhs, params)?;
    let consistent = [&lhs, &rhs].iter().all(|t| {
        t.face_values().iter().all(|(f, v)| v == e.get(*f)) && t.outputs.iter().all(|(f, v)| v == e.get(*f))
    });
    Ok(Walkthrough {
        edge,
        lhs,
        rhs,
        zero_pattern_ok,
        consistent,
        nonzero: !e.is_zero(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Permitted,
    Deps,
    Ll,
    Span,
    Zvezda,
    Reconstruct,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::Permitted,
        Check::Deps,
        Check::Ll,
        Check::Span,
        Check::Zvezda,
        Check::Reconstruct,
    ];
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: Check,
    pub target: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub results: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn count(&self, check: Check) -> (usize, usize) {
        let of: Vec<_> = self.results.iter().filter(|r| r.check == check).collect();
        (of.iter().filter(|r| r.pass).count(), of.len())
    }
}

fn result(check: Check, target: String, pass: bool, witness: impl FnOnce() -> String) -> CheckResult {
    CheckResult {
        check,
        target,
        pass,
        witness: (!pass).then(witness),
    }
}

fn fmt_u(u: &[Vertex]) -> String {
    u.iter().map(ToString::to_string).collect()
}

/// Runs the selected exact checks; independent targets run in parallel.
pub fn run_suite(params: &ParameterSet, checks: &[Check]) -> Result<SuiteReport> {
    require_heptagon(params)?;
    params.require_generic()?;
    if !params.field().is_exact() {
        return Err(Error::InexactComparison);
    }
    let pentachora: Vec<Vec<Vertex>> = all_faces(7).iter().rev().map(|f| f.vertex_set(7)).collect();
    let mut results = Vec::new();
    for &check in checks {
        let batch: Vec<Result<CheckResult>> = match check {
            Check::Permitted => all_faces(7)
                .par_iter()
                .map(|e| {
                    let r = check_permitted(&edge_vector(e.lo(), e.hi(), params)?, params)?;
                    Ok(result(check, format!("e_{e}"), r.all_pass(), || {
                        let bad: Vec<_> = r.simplices.iter().filter(|s| !s.pass).map(|s| s.simplex).collect();
                        format!("fails on simplices {bad:?}")
                    }))
                })
                .collect(),
            Check::Deps => pentachora
                .par_iter()
                .flat_map(|u| u.par_iter().map(move |&i| (u.clone(), i)))
                .map(|(u, i)| {
                    let r = verify_vertex_dependence(&u, i, params)?;
                    Ok(result(check, format!("u={} i={i}", fmt_u(&u)), r.pass(), || {
                        format!("sum_vanishes={} rank={} proportional={}", r.sum_vanishes, r.rank, r.kernel_ratio.is_some())
                    }))
                })
                .collect(),
            Check::Ll => pentachora
                .par_iter()
                .map(|u| {
                    let r = verify_dependence_of_dependences(u, params)?;
                    Ok(result(check, format!("u={}", fmt_u(u)), r.pass(), || format!("{:?}", r.edges)))
                })
                .collect(),
            Check::Span => {
                let g = global_span_rank(params)?;
                let mut v = vec![Ok(result(check, "global".into(), g.pass(), || {
                    format!("edge_rank={} permitted_dim={} coincide={}", g.edge_rank, g.permitted_dim, g.spans_coincide)
                }))];
                v.extend((1..=7u8).into_par_iter().map(|p| {
                    let l = local_span_rank(p, params)?;
                    Ok(result(check, format!("simplex {p}"), l.pass(), || {
                        format!("edge_rank={} permitted_dim={}", l.edge_rank, l.permitted_dim)
                    }))
                }).collect::<Vec<_>>());
                v
            }
            Check::Zvezda => (1..=7u8)
                .into_par_iter()
                .map(|i| {
                    let r = verify_only_on_j(i, params)?;
                    Ok(result(check, format!("vertex {i}"), r.pass(), || format!("{r:?}")))
                })
                .collect(),
            Check::Reconstruct => (1..=7u8)
                .into_par_iter()
                .map(|p| {
                    let (ins, outs) = legs_of(Move::Heptagon, p)?;
                    let ansatz = heptagon_matrix(p, &ins, &outs, params)?;
                    let (pass, witness) = match reconstruct_matrix(p, params) {
                        Ok(m) => {
                            let mism = m.entries.first_mismatch(&ansatz.entries, 0.0)?;
                            (mism.is_none(), format!("first mismatch at {mism:?}"))
                        }
                        Err(e) => (false, e.to_string()),
                    };
                    Ok(result(check, format!("A^({p})"), pass, || witness))
                })
                .collect(),
        };
        for r in batch {
            results.push(r?);
        }
    }
    Ok(SuiteReport { results })
}
