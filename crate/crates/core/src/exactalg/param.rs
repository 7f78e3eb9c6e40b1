//! Families of matrices and tensors whose entries are polynomials in a
//! parameter `t`; limits at `t -> 0` are evaluations at 0.

use super::poly::Poly;
use super::polymatrix::PolyMatrix;
use super::scalar::{Field, Scalar};
use super::Matrix;
use crate::error::{Error, Result};
use crate::tensorlab::Tensor3;

/// Matrix family `t -> F(t)`.
pub type ParamMatrix = PolyMatrix;

/// Tensor family with polynomial coefficients, indexed like [`Tensor3`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamTensor {
    field: Field,
    dims: [usize; 3],
    coeffs: Vec<Poly>,
}

impl ParamTensor {
    pub fn new(field: Field, dims: [usize; 3], coeffs: Vec<Poly>) -> Result<Self> {
        if coeffs.len() != dims.iter().product::<usize>() {
            return Err(Error::Shape(format!("{} coefficients for dims {dims:?}", coeffs.len())));
        }
        Ok(ParamTensor { field, dims, coeffs })
    }

    pub fn zeros(field: Field, dims: [usize; 3]) -> Self {
        ParamTensor { field, dims, coeffs: vec![Poly::zero(field); dims.iter().product()] }
    }

    /// Constant family.
    pub fn constant(t: &Tensor3) -> Self {
        ParamTensor {
            field: t.field(),
            dims: t.dims(),
            coeffs: t.coeffs().iter().map(|c| Poly::constant(c.clone())).collect(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Poly {
        &self.coeffs[self.index(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, p: Poly) {
        let idx = self.index(i, j, k);
        self.coeffs[idx] = p;
    }

    pub fn evaluate(&self, t: &Scalar) -> Tensor3 {
        let coeffs = self.coeffs.iter().map(|p| p.eval(t)).collect();
        Tensor3::new(self.field, self.dims, coeffs).expect("shape preserved")
    }
}

/// Anything that can be evaluated at a parameter value.
pub trait Family {
    type Value;
    fn evaluate_at(&self, t: &Scalar) -> Self::Value;
}

impl Family for ParamMatrix {
    type Value = Matrix;
    fn evaluate_at(&self, t: &Scalar) -> Matrix {
        self.evaluate(t)
    }
}

impl Family for ParamTensor {
    type Value = Tensor3;
    fn evaluate_at(&self, t: &Scalar) -> Tensor3 {
        self.evaluate(t)
    }
}

/// Entrywise polynomial evaluation of a family at `t0`.
pub fn evaluate_param<F: Family>(family: &F, t0: &Scalar) -> F::Value {
    family.evaluate_at(t0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diag_zero_t() {
        let q = Field::Rational;
        let fam = ParamMatrix::from_fn(q, 2, 2, |i, j| if i == 1 && j == 1 { Poly::x(q) } else { Poly::zero(q) });
        assert_eq!(evaluate_param(&fam, &q.zero()), Matrix::zeros(q, 2, 2));
        assert_eq!(evaluate_param(&fam, &q.one()), Matrix::from_i64(q, &[&[0, 0], &[0, 1]]));
    }
}
