use super::matrix::Matrix;
use super::scalar::{Field, Scalar};

/// Incrementally built subspace of `k^dim`, kept in reduced echelon form.
#[derive(Clone, Debug)]
pub struct Span {
    field: Field,
    dim: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Span {
    pub fn new(field: Field, dim: usize) -> Self {
        Span { field, dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.dim
    }

    /// Residual of `v` after reduction against the current basis.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let c = w[p].clone();
            for (wi, ri) in w.iter_mut().zip(row) {
                if !ri.is_zero() {
                    *wi = &*wi - &(&c * ri);
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].inv().unwrap();
        for x in w.iter_mut() {
            *x = &*x * &inv;
        }
        // keep existing rows reduced at the new pivot
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (ri, wi) in row.iter_mut().zip(&w) {
                if !wi.is_zero() {
                    *ri = &*ri - &(&c * wi);
                }
            }
        }
        self.rows.push(w);
        self.pivots.push(p);
        true
    }

    /// Basis vectors as the rows of a matrix.
    pub fn basis_rows(&self) -> Matrix {
        Matrix::from_rows(self.field, self.dim, &self.rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_and_contains() {
        let q = Field::Rational;
        let v = |a: &[i64]| a.iter().map(|&x| q.from_i64(x)).collect::<Vec<_>>();
        let mut s = Span::new(q, 3);
        assert!(s.insert(&v(&[1, 2, 3])));
        assert!(s.insert(&v(&[0, 1, 1])));
        assert!(!s.insert(&v(&[1, 3, 4])));
        assert!(s.contains(&v(&[2, 5, 7])));
        assert!(!s.contains(&v(&[0, 0, 1])));
        assert_eq!(s.dim(), 2);
    }
}
