//! Floating-point experiments: the heptagon relation with seven unknown 3x3
//! matrices, solved by Levenberg-Marquardt from random starts, and SVD-based
//! detection of edge-vector structure in the solutions.

pub mod analyze;
pub mod lm;
pub mod svd;
pub mod system;

pub use analyze::{aggregate, analyze, analyze_matrices, Aggregate, AnalysisOptions, AnalysisReport, Properties};
pub use lm::{derive_seed, lm_solve, lm_solve_from, multistart, LmOptions, NumericRun};
pub use svd::{numeric_nullspace, NumericKernel};
pub use system::{ansatz_point, jacobian, residual, Mat3, RESIDUALS, UNKNOWNS};
