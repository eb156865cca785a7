//! Finite-section laboratory for Schur multipliers, CAR-valued Hankel
//! matrices and Foguel block operators.
//!
//! Every infinite matrix is realized as a leading `N x N` section (or a grid
//! of blocks), and every boundedness statement is probed through operator
//! norms computed by a dense eigen-decomposition oracle or, past its size
//! cap, by matrix-free power iteration.

pub mod car;
pub mod error;
pub mod foguel;
pub mod hankel;
pub mod linalg;
pub mod schur;
pub mod sequences;

pub use error::{LabError, Result};
pub use linalg::{ComplexMatrix, NormEstimate, NormMethod, SparseMatrix};
pub use num_complex::Complex64;
pub use sequences::WeightSequence;
