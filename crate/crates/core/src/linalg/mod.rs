//! Exact Gaussian-rational scalars, sparse matrices and row reduction.

mod echelon;
mod matrix;
mod scalar;
mod span;
mod tensor;

pub use echelon::{axpy, nullspace, rank, scale_vec, Echelon, SparseVec};
pub use matrix::{MatrixJson, SparseMat};
pub use scalar::{format_rational, parse_rational, Scalar};
pub use span::{span_closure, SpanClosure};
pub use tensor::TensorElement;
