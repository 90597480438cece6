//! The determinant ansatz.
//!
//! Every vertex `i` carries a triple `(α_i, β_i, γ_i)`. All matrix entries
//! are ratios of the 3x3 determinants
//!
//! ```text
//!            | α_i  α_j  α_k |
//! d_{ijk} =  | β_i  β_j  β_k |
//!            | γ_i  γ_j  γ_k |
//! ```
//!
//! evaluated with columns in the written index order, so `d` is fully
//! antisymmetric. The heptagon matrix of 5-simplex `p` has entry
//! `d_{jlp} d_{klp} / (d_{ijp} d_{ikp})` at row `ip`, column `lp`, where `jp`
//! and `kp` are the other two inputs; the pentagon matrix uses
//! `d_{jlp} / d_{ijp}`. Matrices act on row vectors from the right.

use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::combinatorics::{FaceId, Move, Vertex};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalars::{sample_scalar, FieldConfig, Scalar};

/// Attempts made by [`ParameterSet::random`] before giving up.
pub const MAX_RESAMPLES: u64 = 100;

#[derive(Debug)]
pub struct ParameterSet {
    field: FieldConfig,
    triples: Vec<[Scalar; 3]>,
    vandermonde: Option<Vec<Scalar>>,
    dets: OnceLock<Vec<Scalar>>,
}

impl Clone for ParameterSet {
    fn clone(&self) -> Self {
        ParameterSet {
            field: self.field,
            triples: self.triples.clone(),
            vandermonde: self.vandermonde.clone(),
            dets: self.dets.clone(),
        }
    }
}

impl PartialEq for ParameterSet {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.triples == other.triples && self.vandermonde == other.vandermonde
    }
}

impl ParameterSet {
    /// Explicit triples, one per vertex. Genericity is not enforced here;
    /// see [`genericity_check`] and [`ParameterSet::require_generic`].
    pub fn new(field: FieldConfig, triples: Vec<[Scalar; 3]>) -> Result<ParameterSet> {
        field.validate()?;
        if triples.len() != 5 && triples.len() != 7 {
            return Err(Error::UnsupportedSize(triples.len()));
        }
        if let Some(bad) = triples.iter().flatten().find(|s| s.field() != field) {
            return Err(Error::FieldMismatch(field.to_string(), bad.field().to_string()));
        }
        Ok(ParameterSet {
            field,
            triples,
            vandermonde: None,
            dets: OnceLock::new(),
        })
    }

    pub fn field(&self) -> FieldConfig {
        self.field
    }

    pub fn n(&self) -> u8 {
        self.triples.len() as u8
    }

    pub fn triples(&self) -> &[[Scalar; 3]] {
        &self.triples
    }

    pub fn triple(&self, v: Vertex) -> &[Scalar; 3] {
        &self.triples[v as usize - 1]
    }

    /// The generating `t` values when built by [`vandermonde_params`].
    pub fn vandermonde_t(&self) -> Option<&[Scalar]> {
        self.vandermonde.as_deref()
    }

    pub fn require_generic(&self) -> Result<()> {
        let bad = genericity_check(self);
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::NonGenericParameters(bad))
        }
    }

    /// Seeded random triples, resampled with an incremented seed until generic.
    /// Returns the set and the seed that produced it.
    pub fn random(field: FieldConfig, n: usize, seed: u64) -> Result<(ParameterSet, u64)> {
        for attempt in 0..MAX_RESAMPLES {
            let s = seed.wrapping_add(attempt);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let triples = (0..n)
                .map(|_| std::array::from_fn(|_| sample_scalar(&mut rng, field)))
                .collect();
            let ps = ParameterSet::new(field, triples)?;
            if genericity_check(&ps).is_empty() {
                return Ok((ps, s));
            }
        }
        Err(Error::NonGenericParameters(Vec::new()))
    }

    /// Every triple multiplied by a common factor.
    pub fn scaled(&self, factor: &Scalar) -> Result<ParameterSet> {
        let triples = self
            .triples
            .iter()
            .map(|t| {
                let [a, b, c] = t;
                Ok([a.checked_mul(factor)?, b.checked_mul(factor)?, c.checked_mul(factor)?])
            })
            .collect::<Result<Vec<_>>>()?;
        ParameterSet::new(self.field, triples)
    }

    /// Same triples cast to `f64`.
    pub fn to_float(&self) -> ParameterSet {
        let triples = self
            .triples
            .iter()
            .map(|t| std::array::from_fn(|k| Scalar::Float(t[k].to_f64())))
            .collect();
        ParameterSet::new(FieldConfig::Float64, triples).expect("float parameters")
    }

    fn det_table(&self) -> &[Scalar] {
        self.dets.get_or_init(|| {
            let n = self.n();
            let mut table = Vec::with_capacity((n as usize).pow(3));
            for i in 1..=n {
                for j in 1..=n {
                    for k in 1..=n {
                        table.push(raw_det(self.triple(i), self.triple(j), self.triple(k)));
                    }
                }
            }
            table
        })
    }

    fn d(&self, i: Vertex, j: Vertex, k: Vertex) -> &Scalar {
        let n = self.n() as usize;
        let idx = ((i as usize - 1) * n + (j as usize - 1)) * n + (k as usize - 1);
        &self.det_table()[idx]
    }

    pub fn to_file(&self) -> ParamsFile {
        match &self.vandermonde {
            Some(t) => ParamsFile {
                field: self.field,
                n: self.triples.len(),
                mode: ParamsMode::Vandermonde,
                triples: None,
                t: Some(t.iter().map(ToString::to_string).collect()),
            },
            None => ParamsFile {
                field: self.field,
                n: self.triples.len(),
                mode: ParamsMode::Explicit,
                triples: Some(
                    self.triples
                        .iter()
                        .map(|t| t.iter().map(ToString::to_string).collect())
                        .collect(),
                ),
                t: None,
            },
        }
    }

    pub fn from_file(file: &ParamsFile) -> Result<ParameterSet> {
        file.field.validate()?;
        let parse = |s: &String| Scalar::parse(file.field, s);
        let ps = match file.mode {
            ParamsMode::Vandermonde => {
                let t = file
                    .t
                    .as_ref()
                    .ok_or_else(|| Error::Schema("vandermonde mode requires \"t\"".into()))?;
                vandermonde_params(file.field, t.iter().map(parse).collect::<Result<_>>()?)?
            }
            ParamsMode::Explicit => {
                let rows = file
                    .triples
                    .as_ref()
                    .ok_or_else(|| Error::Schema("explicit mode requires \"triples\"".into()))?;
                let triples = rows
                    .iter()
                    .map(|r| {
                        if r.len() != 3 {
                            return Err(Error::Schema(format!("triple of length {}", r.len())));
                        }
                        Ok([parse(&r[0])?, parse(&r[1])?, parse(&r[2])?])
                    })
                    .collect::<Result<Vec<_>>>()?;
                ParameterSet::new(file.field, triples)?
            }
        };
        if ps.triples.len() != file.n {
            return Err(Error::Schema(format!("n = {} but {} vertices given", file.n, ps.triples.len())));
        }
        Ok(ps)
    }

    /// SHA-256 of the canonical JSON form.
    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(&self.to_file()).expect("params serialize");
        hex::encode(Sha256::digest(&json))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamsMode {
    Explicit,
    Vandermonde,
}

/// On-disk form of a [`ParameterSet`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub field: FieldConfig,
    pub n: usize,
    pub mode: ParamsMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triples: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<String>>,
}

fn raw_det(a: &[Scalar; 3], b: &[Scalar; 3], c: &[Scalar; 3]) -> Scalar {
    // Columns a, b, c; rows α, β, γ.
    let m1 = &(&b[1] * &c[2]) - &(&c[1] * &b[2]);
    let m2 = &(&a[1] * &c[2]) - &(&c[1] * &a[2]);
    let m3 = &(&a[1] * &b[2]) - &(&b[1] * &a[2]);
    &(&(&a[0] * &m1) - &(&b[0] * &m2)) + &(&c[0] * &m3)
}

fn check_vertex(ps: &ParameterSet, v: Vertex) -> Result<()> {
    if (1..=ps.n()).contains(&v) {
        Ok(())
    } else {
        Err(Error::InvalidVertex { vertex: v, n: ps.n() })
    }
}

/// `d_{ijk}` with columns in the given order.
pub fn det3(i: Vertex, j: Vertex, k: Vertex, params: &ParameterSet) -> Result<Scalar> {
    for v in [i, j, k] {
        check_vertex(params, v)?;
    }
    if i == j || j == k || i == k {
        return Err(Error::DuplicateIndex(i, j, k));
    }
    Ok(params.d(i, j, k).clone())
}

/// `α_i = 1, β_i = t_i, γ_i = t_i²`, so that
/// `d_{ijk} = (t_j - t_i)(t_k - t_i)(t_k - t_j)`.
pub fn vandermonde_params(field: FieldConfig, t: Vec<Scalar>) -> Result<ParameterSet> {
    for a in 0..t.len() {
        for b in a + 1..t.len() {
            if t[a].approx_eq(&t[b], 0.0)? {
                return Err(Error::DuplicateParameter(a as u8 + 1, b as u8 + 1));
            }
        }
    }
    let triples = t
        .iter()
        .map(|x| [Scalar::one(field), x.clone(), x * x])
        .collect();
    let mut ps = ParameterSet::new(field, triples)?;
    ps.vandermonde = Some(t);
    Ok(ps)
}

/// Vandermonde parameters with `t = (1, ..., n)`.
pub fn default_vandermonde(field: FieldConfig, n: usize) -> Result<ParameterSet> {
    vandermonde_params(field, (1..=n as i64).map(|v| Scalar::from_i64(field, v)).collect())
}

/// Sorted triples `i < j < k` whose determinant vanishes; empty when generic.
///
/// For `float64` sets a determinant counts as vanishing only when exactly zero.
pub fn genericity_check(params: &ParameterSet) -> Vec<[Vertex; 3]> {
    let n = params.n();
    let mut bad = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                if params.d(i, j, k).is_zero() {
                    bad.push([i, j, k]);
                }
            }
        }
    }
    bad
}

/// A transfer matrix with labelled legs: rows are inputs, columns outputs.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferMatrix {
    pub simplex: Vertex,
    pub entries: Matrix,
    pub input_legs: Vec<FaceId>,
    pub output_legs: Vec<FaceId>,
}

impl TransferMatrix {
    pub fn entry(&self, input: FaceId, output: FaceId) -> Option<&Scalar> {
        let r = self.input_legs.iter().position(|&f| f == input)?;
        let c = self.output_legs.iter().position(|&f| f == output)?;
        Some(&self.entries[(r, c)])
    }
}

fn check_legs(p: Vertex, inputs: &[FaceId], outputs: &[FaceId], k: usize, params: &ParameterSet) -> Result<()> {
    let mismatch = |reason: String| Error::LegMismatch { simplex: p, reason };
    check_vertex(params, p)?;
    if inputs.len() != k || outputs.len() != k {
        return Err(mismatch(format!(
            "expected {k} inputs and {k} outputs, got {} and {}",
            inputs.len(),
            outputs.len()
        )));
    }
    let all: Vec<FaceId> = inputs.iter().chain(outputs).copied().collect();
    for (a, leg) in all.iter().enumerate() {
        if !leg.contains(p) {
            return Err(mismatch(format!("leg {leg} does not contain {p}")));
        }
        if leg.other(p) > params.n() {
            return Err(mismatch(format!("leg {leg} is outside the complex")));
        }
        if all[a + 1..].contains(leg) {
            return Err(mismatch(format!("leg {leg} repeated")));
        }
    }
    Ok(())
}

fn nonzero(d: &Scalar, idx: (Vertex, Vertex, Vertex)) -> Result<()> {
    if d.is_zero() {
        Err(Error::ZeroDenominator(idx.0, idx.1, idx.2))
    } else {
        Ok(())
    }
}

/// The 3x3 heptagon matrix of 5-simplex `p`.
pub fn heptagon_matrix(
    p: Vertex,
    input_legs: &[FaceId],
    output_legs: &[FaceId],
    params: &ParameterSet,
) -> Result<TransferMatrix> {
    check_legs(p, input_legs, output_legs, 3, params)?;
    let ins: Vec<Vertex> = input_legs.iter().map(|f| f.other(p)).collect();
    let outs: Vec<Vertex> = output_legs.iter().map(|f| f.other(p)).collect();
    let mut m = Matrix::zeros(params.field(), 3, 3);
    for (r, &i) in ins.iter().enumerate() {
        let others: Vec<Vertex> = ins.iter().copied().filter(|&x| x != i).collect();
        let (j, k) = (others[0], others[1]);
        let dij = params.d(i, j, p);
        let dik = params.d(i, k, p);
        nonzero(dij, (i, j, p))?;
        nonzero(dik, (i, k, p))?;
        let den = dij * dik;
        for (c, &l) in outs.iter().enumerate() {
            let num = params.d(j, l, p) * params.d(k, l, p);
            m[(r, c)] = num.checked_div(&den)?;
        }
    }
    Ok(TransferMatrix {
        simplex: p,
        entries: m,
        input_legs: input_legs.to_vec(),
        output_legs: output_legs.to_vec(),
    })
}

/// The 2x2 pentagon matrix of tetrahedron `p`.
pub fn pentagon_matrix(
    p: Vertex,
    input_legs: &[FaceId],
    output_legs: &[FaceId],
    params: &ParameterSet,
) -> Result<TransferMatrix> {
    check_legs(p, input_legs, output_legs, 2, params)?;
    let ins: Vec<Vertex> = input_legs.iter().map(|f| f.other(p)).collect();
    let outs: Vec<Vertex> = output_legs.iter().map(|f| f.other(p)).collect();
    let mut m = Matrix::zeros(params.field(), 2, 2);
    for (r, &i) in ins.iter().enumerate() {
        let j = ins[1 - r];
        let dij = params.d(i, j, p);
        nonzero(dij, (i, j, p))?;
        for (c, &l) in outs.iter().enumerate() {
            m[(r, c)] = params.d(j, l, p).checked_div(dij)?;
        }
    }
    Ok(TransferMatrix {
        simplex: p,
        entries: m,
        input_legs: input_legs.to_vec(),
        output_legs: output_legs.to_vec(),
    })
}

/// Dispatches on the move; the parameter set must have the move's vertex count.
pub fn transfer_matrix(
    mv: Move,
    p: Vertex,
    input_legs: &[FaceId],
    output_legs: &[FaceId],
    params: &ParameterSet,
) -> Result<TransferMatrix> {
    if params.n() != mv.n_vertices() {
        return Err(Error::ParameterShape(format!(
            "{mv} needs {} vertices, parameters have {}",
            mv.n_vertices(),
            params.n()
        )));
    }
    match mv {
        Move::Heptagon => heptagon_matrix(p, input_legs, output_legs, params),
        Move::Pentagon => pentagon_matrix(p, input_legs, output_legs, params),
    }
}

/// Component at face `v` (given by its omitted pair `{l, m}`) of the vector
/// belonging to the `(n-5)/2`-simplex `sigma`: the product of `d_{ilm}` over
/// `i ∈ sigma`, or zero when `sigma` meets `{l, m}`.
///
/// The pair is oriented cyclically, `m - l ≡ 1, ..., (n-1)/2 (mod n)`. This
/// only matters when `sigma` has an odd number of vertices; for `n = 5` it is
/// the orientation under which the vertex vectors are permitted.
pub fn generalized_vector(n: u8, sigma: &[Vertex], v: FaceId, params: &ParameterSet) -> Result<Scalar> {
    if n != 5 && n != 7 {
        return Err(Error::UnsupportedSize(n as usize));
    }
    if params.n() != n {
        return Err(Error::ParameterShape(format!("n = {n} but parameters have {} vertices", params.n())));
    }
    let want = (n as usize - 5) / 2 + 1;
    if sigma.len() != want {
        return Err(Error::InvalidFace(format!("simplex of {} vertices, expected {want}", sigma.len())));
    }
    for (a, &s) in sigma.iter().enumerate() {
        if !(1..=n).contains(&s) || sigma[a + 1..].contains(&s) {
            return Err(Error::InvalidFace(format!("bad simplex {sigma:?}")));
        }
    }
    let (lo, hi) = (v.lo(), v.hi());
    if lo < 1 || hi > n {
        return Err(Error::InvalidFace(format!("face {v} outside the complex")));
    }
    if sigma.iter().any(|&s| v.contains(s)) {
        return Ok(Scalar::zero(params.field()));
    }
    let (l, m) = if hi - lo <= (n - 1) / 2 { (lo, hi) } else { (hi, lo) };
    Ok(sigma
        .iter()
        .fold(Scalar::one(params.field()), |acc, &i| &acc * params.d(i, l, m)))
}
