use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix, Scalar};

/// Order-3 tensor in `k^{d1} (x) k^{d2} (x) k^{d3}`, coefficients stored with
/// index order `(i, j, k)` lexicographic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "TensorJson", try_from = "TensorJson")]
pub struct Tensor3 {
    field: Field,
    dims: [usize; 3],
    coeffs: Vec<Scalar>,
}

/// Wire form `{"dims": [d1, d2, d3], "coeffs": [...], "field": "Q" | "F:<p>"}`.
/// `field` defaults to Q when absent.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TensorJson {
    pub dims: [usize; 3],
    pub coeffs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
}

impl From<Tensor3> for TensorJson {
    fn from(t: Tensor3) -> Self {
        TensorJson {
            dims: t.dims,
            coeffs: t.coeffs.iter().map(Scalar::to_text).collect(),
            field: Some(t.field.to_string()),
        }
    }
}

impl TryFrom<TensorJson> for Tensor3 {
    type Error = Error;
    fn try_from(j: TensorJson) -> Result<Self> {
        let field: Field = j.field.as_deref().unwrap_or("Q").parse()?;
        let coeffs = j.coeffs.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>()?;
        Tensor3::new(field, j.dims, coeffs)
    }
}

impl Tensor3 {
    pub fn new(field: Field, dims: [usize; 3], coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.len() != dims.iter().product::<usize>() {
            return Err(Error::Shape(format!("{} coefficients for dims {dims:?}", coeffs.len())));
        }
        if let Some(bad) = coeffs.iter().find(|c| c.field() != field) {
            return Err(Error::MixedField(field.to_string(), bad.field().to_string()));
        }
        Ok(Tensor3 { field, dims, coeffs })
    }

    pub fn zeros(field: Field, dims: [usize; 3]) -> Self {
        Tensor3 { field, dims, coeffs: vec![field.zero(); dims.iter().product()] }
    }

    pub fn from_fn(field: Field, dims: [usize; 3], mut f: impl FnMut(usize, usize, usize) -> Scalar) -> Self {
        let mut coeffs = Vec::with_capacity(dims.iter().product());
        for i in 0..dims[0] {
            for j in 0..dims[1] {
                for k in 0..dims[2] {
                    coeffs.push(f(i, j, k));
                }
            }
        }
        Tensor3 { field, dims, coeffs }
    }

    /// Sum of `e_i (x) e_j (x) e_k` terms with integer weights.
    pub fn from_terms(field: Field, dims: [usize; 3], terms: &[(usize, usize, usize, i64)]) -> Self {
        let mut t = Self::zeros(field, dims);
        for &(i, j, k, c) in terms {
            let v = t.get(i, j, k) + &field.from_i64(c);
            t.set(i, j, k, v);
        }
        t
    }

    /// `a (x) b (x) c`.
    pub fn rank_one(a: &[Scalar], b: &[Scalar], c: &[Scalar]) -> Self {
        let field = a[0].field();
        Self::from_fn(field, [a.len(), b.len(), c.len()], |i, j, k| &(&a[i] * &b[j]) * &c[k])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    #[inline]
    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.coeffs[self.index(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        let idx = self.index(i, j, k);
        self.coeffs[idx] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Tensor3) -> Tensor3 {
        assert_eq!(self.dims, other.dims);
        Tensor3 {
            field: self.field,
            dims: self.dims,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    /// Flattening along `factor` (0, 1 or 2): a `d_factor x (product of the
    /// other two)` matrix. Its rank is the multilinear rank on that factor.
    pub fn flattening(&self, factor: usize) -> Matrix {
        let [d1, d2, d3] = self.dims;
        match factor {
            0 => Matrix::from_fn(self.field, d1, d2 * d3, |i, c| self.get(i, c / d3, c % d3).clone()),
            1 => Matrix::from_fn(self.field, d2, d1 * d3, |j, c| self.get(c / d3, j, c % d3).clone()),
            2 => Matrix::from_fn(self.field, d3, d1 * d2, |k, c| self.get(c / d2, c % d2, k).clone()),
            _ => panic!("factor index {factor} out of range"),
        }
    }

    pub fn flattening_ranks(&self) -> [usize; 3] {
        [0, 1, 2].map(|f| self.flattening(f).rank())
    }

    /// Slice with the third index fixed: a `d1 x d2` matrix.
    pub fn slice3(&self, k: usize) -> Matrix {
        Matrix::from_fn(self.field, self.dims[0], self.dims[1], |i, j| self.get(i, j, k).clone())
    }

    /// `(g1 (x) g2 (x) g3) . T`, i.e. `T'(i,j,k) = sum g1[i,a] g2[j,b] g3[k,c] T(a,b,c)`.
    pub fn change_basis(&self, g1: &Matrix, g2: &Matrix, g3: &Matrix) -> Tensor3 {
        let [d1, d2, d3] = self.dims;
        assert!(g1.rows() == d1 && g1.cols() == d1);
        assert!(g2.rows() == d2 && g2.cols() == d2);
        assert!(g3.rows() == d3 && g3.cols() == d3);
        let f = self.field;
        // apply one factor at a time
        let step1 = Tensor3::from_fn(f, self.dims, |i, j, k| {
            (0..d1).fold(f.zero(), |acc, a| &acc + &(g1.get(i, a) * self.get(a, j, k)))
        });
        let step2 = Tensor3::from_fn(f, self.dims, |i, j, k| {
            (0..d2).fold(f.zero(), |acc, b| &acc + &(g2.get(j, b) * step1.get(i, b, k)))
        });
        Tensor3::from_fn(f, self.dims, |i, j, k| {
            (0..d3).fold(f.zero(), |acc, c| &acc + &(g3.get(k, c) * step2.get(i, j, c)))
        })
    }
}
