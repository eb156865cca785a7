//! Dense and sparse complex matrices plus operator-norm estimation.

mod matrix;
mod norm;
mod sparse;

pub use matrix::{make_block_shift, make_shift, ComplexMatrix, ONE, ZERO};
pub use norm::{
    norm2, op_norm_dense, op_norm_dense_capped, op_norm_power, op_norm_power_dense, op_norm_sparse,
    NormEstimate, NormMethod, DEFAULT_DENSE_CAP, POWER_WINDOW,
};
pub use sparse::SparseMatrix;
