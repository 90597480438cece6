//! Determinant ansatz for direct-sum heptagon and pentagon relations.
//!
//! Each vertex of a simplex carries a parameter triple `(α, β, γ)`; the 3x3
//! determinants of these triples give the entries of transfer matrices that
//! satisfy the heptagon relation (for a 6-simplex) and the pentagon relation
//! (for a 4-simplex) exactly. The crate verifies both relations over exact
//! rationals and prime fields, constructs edge vectors and checks their
//! linear dependences, and runs a numerical search for further solutions.
//!
//! ```
//! use hepta::{default_vandermonde, verify_relation, FieldConfig, Move};
//!
//! let params = default_vandermonde(FieldConfig::Rational, 7).unwrap();
//! assert!(verify_relation(Move::Heptagon, &params).unwrap().equal);
//! ```

pub mod ansatz;
pub mod cli;
pub mod combinatorics;
pub mod edgevectors;
pub mod error;
pub mod linalg;
pub mod numlab;
pub mod relations;
pub mod scalars;

pub use ansatz::{
    default_vandermonde, det3, generalized_vector, genericity_check, heptagon_matrix, pentagon_matrix,
    transfer_matrix, vandermonde_params, ParameterSet, ParamsFile, TransferMatrix,
};
pub use combinatorics::{all_faces, wiring, FaceId, Move, Side, Vertex, WiringDiagram};
pub use edgevectors::{edge_vector, run_suite, BoundaryColoring, Check, SuiteReport};
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use relations::{side_product, transport, verify_relation, VerificationReport};
pub use scalars::{FieldConfig, Scalar};
