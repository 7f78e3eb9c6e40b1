//! Exact linear algebra over Q and F_p, univariate polynomial matrices, and
//! parameter families.

pub mod counting;
pub mod json;
pub mod matrix;
pub mod param;
pub mod poly;
pub mod polymatrix;
pub mod scalar;
pub mod span;

pub use counting::gaussian_binomial;
pub use matrix::{Matrix, Solve};
pub use param::{evaluate_param, ParamMatrix, ParamTensor};
pub use poly::{charpoly, Poly};
pub use polymatrix::{hermite_kernel, KernelBasis, PolyMatrix, UniPolyMatrix};
pub use scalar::{Field, Scalar};
pub use span::Span;
