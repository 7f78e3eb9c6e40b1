//! Order-3 tensors: flattenings and conciseness, 2x2x2 classification, rank
//! over small finite fields, and secant dimensions of Segre varieties.

mod brute;
mod classify;
mod ops;
mod secant;
mod tensor;

pub use brute::{brute_force_rank_fq, rank_one_tensors, FieldRank};
pub use classify::{
    classify_2x2x2, classify_2x2x2_checked, hyperdeterminant, pencil_quadratic, quadratic_separable, Classification222,
    OrbitLabel,
};
pub use ops::{conciseness, multiplication_tensor, tensor_from_bilin, unit_tensor};
pub use secant::{secant_bound, secant_dimension, SecantReport};
pub use tensor::{Tensor3, TensorJson};
