//! Numerical detection of edge-vector structure in a real heptagon solution.
//!
//! Every rank and nullity here comes from [`numeric_nullspace`] with the
//! declared singular-value ratio; the thresholds travel with the report.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::lm::NumericRun;
use super::svd::numeric_nullspace;
use super::system::{from_matrices, Mat3};
use crate::combinatorics::{all_faces, face_index, legs_of, FaceId, Move, Vertex};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    /// Singular values below `svd_tol · σ_max` count as zero.
    pub svd_tol: f64,
    /// Threshold for the pairwise cancellation of normalized dependences.
    pub ll_tol: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            svd_tol: 1e-8,
            ll_tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeFinding {
    pub edge: FaceId,
    pub exists: bool,
    pub nullity: usize,
    /// Unit-norm representative over all 21 faces, first nonzero entry positive.
    pub vector: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexFinding {
    pub u: String,
    pub vertex: Vertex,
    /// Exactly one dependence among the four edge vectors.
    pub dependence_found: bool,
    pub quadruple_rank: usize,
    /// Coefficients on edges `{vertex, j}`, `j` increasing.
    pub kernel: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceFinding {
    pub u: String,
    /// `max |s_i λ_{i,ij} + s_j λ_{j,ij}|` for the best unit normalization `s`.
    pub ll_residual: Option<f64>,
    pub min_weight: Option<f64>,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Properties {
    /// Edge vectors exist for all 21 edges.
    pub edges_exist: bool,
    /// Exactly one dependence at every (pentachoron, vertex).
    pub vertex_dependences: bool,
    /// Dependences cancel pairwise after normalization, on every pentachoron.
    pub dependences_cancel: bool,
    /// Edge vectors span the whole permitted space.
    pub global_span: bool,
    /// Edge vectors span each simplex's permitted space.
    pub local_span: bool,
}

impl Properties {
    pub fn all(&self) -> bool {
        self.edges_exist && self.vertex_dependences && self.dependences_cancel && self.global_span && self.local_span
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub seed: Option<u64>,
    pub residual: Option<f64>,
    pub tolerances: AnalysisOptions,
    /// Matrix entries below `svd_tol` times the largest entry.
    pub zero_entries: usize,
    pub edges: Vec<EdgeFinding>,
    pub vertex_dependences: Vec<VertexFinding>,
    pub faces: Vec<FaceFinding>,
    pub global_rank: usize,
    pub permitted_dim: usize,
    pub spans_coincide: bool,
    pub local_ranks: Vec<usize>,
    pub local_permitted: Vec<usize>,
    pub properties: Properties,
}

/// 21x21 permittedness system for raw matrices (rows per simplex and output).
pub fn permittedness_system(ms: &[Mat3]) -> Result<DMatrix<f64>> {
    let mut sys = DMatrix::zeros(21, 21);
    for p in 1..=7u8 {
        let (ins, outs) = legs_of(Move::Heptagon, p)?;
        let a = &ms[p as usize - 1];
        for c in 0..3 {
            let row = (p as usize - 1) * 3 + c;
            for r in 0..3 {
                sys[(row, face_index(ins[r], 7))] += a[r][c];
            }
            sys[(row, face_index(outs[c], 7))] -= 1.0;
        }
    }
    Ok(sys)
}

fn normalize(v: &DVector<f64>) -> Vec<f64> {
    let norm = v.norm();
    let mut out: Vec<f64> = v.iter().map(|x| x / norm).collect();
    let max = out.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(first) = out.iter().find(|x| x.abs() > 1e-8 * max) {
        if *first < 0.0 {
            out.iter_mut().for_each(|x| *x = -*x);
        }
    }
    out
}

fn label(u: &[Vertex]) -> String {
    u.iter().map(ToString::to_string).collect()
}

pub fn analyze(run: &NumericRun, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    if !run.converged {
        return Err(Error::NotConverged { seed: run.seed });
    }
    let mut report = analyze_matrices(&run.matrices, opts)?;
    report.seed = Some(run.seed);
    report.residual = Some(run.residual);
    Ok(report)
}

/// Structure detection on arbitrary matrices, without a convergence gate.
pub fn analyze_matrices(ms: &[Mat3], opts: &AnalysisOptions) -> Result<AnalysisReport> {
    if ms.len() != 7 || from_matrices(ms).iter().any(|x| !x.is_finite()) {
        return Err(Error::Dimension("expected seven finite 3x3 matrices".into()));
    }
    let flat = from_matrices(ms);
    let scale = flat.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let zero_entries = flat.iter().filter(|x| x.abs() <= opts.svd_tol * scale).count();
    let faces = all_faces(7);
    let system = permittedness_system(ms)?;

    // (i) edge vectors
    let mut edges = Vec::new();
    for &e in &faces {
        let support: Vec<usize> = faces
            .iter()
            .filter(|f| !f.meets(e))
            .map(|f| face_index(*f, 7))
            .collect();
        let sub = DMatrix::from_fn(21, support.len(), |r, c| system[(r, support[c])]);
        let k = numeric_nullspace(&sub, opts.svd_tol);
        let mut vector = vec![0.0; 21];
        if let Some(b) = k.basis.first() {
            for (c, &col) in support.iter().enumerate() {
                vector[col] = b[c];
            }
            vector = normalize(&DVector::from_vec(vector));
        }
        edges.push(EdgeFinding {
            edge: e,
            exists: k.nullity >= 1,
            nullity: k.nullity,
            vector,
        });
    }
    let edge_vec = |e: FaceId| &edges[face_index(e, 7)];

    // (ii) one dependence per (pentachoron, vertex); (iii) their cancellation
    let mut vertex_dependences = Vec::new();
    let mut face_findings = Vec::new();
    for u_face in faces.iter().rev() {
        let u = u_face.vertex_set(7);
        let mut kernels: Vec<Option<Vec<f64>>> = Vec::new();
        for &i in &u {
            let others: Vec<Vertex> = u.iter().copied().filter(|&j| j != i).collect();
            let cols: Vec<&EdgeFinding> = others.iter().map(|&j| edge_vec(FaceId::pair(i, j))).collect();
            let all_exist = cols.iter().all(|c| c.exists);
            let m = DMatrix::from_fn(21, 4, |r, c| cols[c].vector[r]);
            let k = numeric_nullspace(&m, opts.svd_tol);
            let found = all_exist && k.nullity == 1;
            let kernel = if found { normalize(&k.basis[0]) } else { Vec::new() };
            kernels.push(found.then(|| kernel.clone()));
            vertex_dependences.push(VertexFinding {
                u: label(&u),
                vertex: i,
                dependence_found: found,
                quadruple_rank: 4 - k.nullity,
                kernel,
            });
        }
        face_findings.push(cancellation(&u, &kernels, opts));
    }

    // (iv) global span versus the permitted space
    let g = DMatrix::from_fn(21, 21, |r, c| edges[r].vector[c]);
    let global_rank = numeric_nullspace(&g, opts.svd_tol).rank();
    let permitted = numeric_nullspace(&system, opts.svd_tol);
    let permitted_dim = permitted.nullity;
    let mut stacked = DMatrix::zeros(21 + permitted_dim, 21);
    stacked.view_mut((0, 0), (21, 21)).copy_from(&g);
    for (k, b) in permitted.basis.iter().enumerate() {
        stacked.row_mut(21 + k).copy_from(&b.transpose());
    }
    let stacked_rank = numeric_nullspace(&stacked, opts.svd_tol).rank();
    let spans_coincide = global_rank == permitted_dim && stacked_rank == global_rank;

    // (v) local spans
    let mut local_ranks = Vec::new();
    let mut local_permitted = Vec::new();
    for p in 1..=7u8 {
        let (ins, outs) = legs_of(Move::Heptagon, p)?;
        let legs: Vec<usize> = ins.iter().chain(&outs).map(|f| face_index(*f, 7)).collect();
        let restricted = DMatrix::from_fn(21, 6, |r, c| edges[r].vector[legs[c]]);
        local_ranks.push(numeric_nullspace(&restricted, opts.svd_tol).rank());
        let a = &ms[p as usize - 1];
        let local = DMatrix::from_fn(3, 6, |c, k| if k < 3 { a[k][c] } else if k - 3 == c { -1.0 } else { 0.0 });
        local_permitted.push(numeric_nullspace(&local, opts.svd_tol).nullity);
    }

    let properties = Properties {
        edges_exist: edges.iter().all(|e| e.exists),
        vertex_dependences: vertex_dependences.iter().all(|v| v.dependence_found),
        dependences_cancel: face_findings.iter().all(|f| f.holds),
        global_span: edges.iter().all(|e| e.exists) && spans_coincide,
        local_span: local_ranks.iter().zip(&local_permitted).all(|(r, p)| r == p),
    };
    Ok(AnalysisReport {
        seed: None,
        residual: None,
        tolerances: *opts,
        zero_entries,
        edges,
        vertex_dependences,
        faces: face_findings,
        global_rank,
        permitted_dim,
        spans_coincide,
        local_ranks,
        local_permitted,
        properties,
    })
}

/// Finds weights `s` (one per vertex of `u`) making the five detected
/// dependences cancel edge by edge, and reports how well they do.
fn cancellation(u: &[Vertex], kernels: &[Option<Vec<f64>>], opts: &AnalysisOptions) -> FaceFinding {
    let missing = FaceFinding {
        u: label(u),
        ll_residual: None,
        min_weight: None,
        holds: false,
    };
    let Some(kernels) = kernels.iter().cloned().collect::<Option<Vec<Vec<f64>>>>() else {
        return missing;
    };
    // Coefficient of edge {u[a], u[b]} in the dependence at u[a].
    let coeff = |a: usize, b: usize| kernels[a][if b < a { b } else { b - 1 }];
    let mut m = DMatrix::zeros(10, 5);
    let mut row = 0;
    for a in 0..5 {
        for b in a + 1..5 {
            m[(row, a)] = coeff(a, b);
            m[(row, b)] = coeff(b, a);
            row += 1;
        }
    }
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let weakest = (0..svd.singular_values.len())
        .min_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]))
        .expect("five singular values");
    let s = v_t.row(weakest).transpose();
    let residual = (&m * &s).amax();
    let min_weight = s.iter().fold(f64::INFINITY, |acc, x| acc.min(x.abs()));
    FaceFinding {
        u: label(u),
        ll_residual: Some(residual),
        min_weight: Some(min_weight),
        holds: residual < opts.ll_tol && min_weight > opts.ll_tol,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub runs_analyzed: usize,
    pub edges_exist: f64,
    pub vertex_dependences: f64,
    pub dependences_cancel: f64,
    pub global_span: f64,
    pub local_span: f64,
    pub all_properties: f64,
    /// Runs whose matrices have no zero entries.
    pub generic_runs: usize,
    /// Fraction of those runs exhibiting all five properties.
    pub all_properties_generic: Option<f64>,
}

/// Fraction of reports exhibiting each property.
pub fn aggregate(reports: &[AnalysisReport]) -> Aggregate {
    let n = reports.len();
    let frac = |f: &dyn Fn(&Properties) -> bool| {
        if n == 0 {
            0.0
        } else {
            reports.iter().filter(|r| f(&r.properties)).count() as f64 / n as f64
        }
    };
    let generic: Vec<&AnalysisReport> = reports.iter().filter(|r| r.zero_entries == 0).collect();
    Aggregate {
        runs_analyzed: n,
        edges_exist: frac(&|p| p.edges_exist),
        vertex_dependences: frac(&|p| p.vertex_dependences),
        dependences_cancel: frac(&|p| p.dependences_cancel),
        global_span: frac(&|p| p.global_span),
        local_span: frac(&|p| p.local_span),
        all_properties: frac(&|p| p.all()),
        generic_runs: generic.len(),
        all_properties_generic: (!generic.is_empty())
            .then(|| generic.iter().filter(|r| r.properties.all()).count() as f64 / generic.len() as f64),
    }
}
