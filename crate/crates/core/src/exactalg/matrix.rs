//! Dense matrices over an exact field.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::json::MatrixJson;
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix whose entries all live in one field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "MatrixJson", try_from = "MatrixJson")]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

/// Outcome of [`Matrix::solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solve {
    Solved(Matrix),
    /// `rank [A | B] > rank A`.
    Inconsistent { rank_a: usize, rank_ab: usize },
}

impl Solve {
    pub fn ok(self) -> Option<Matrix> {
        match self {
            Solve::Solved(x) => Some(x),
            Solve::Inconsistent { .. } => None,
        }
    }
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| e.field() != field) {
            return Err(Error::MixedField(field.to_string(), bad.field().to_string()));
        }
        Ok(Matrix { field, rows, cols, entries })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, entries: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Self::from_fn(field, n, n, |i, j| if i == j { field.one() } else { field.zero() })
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { field, rows, cols, entries }
    }

    /// Integer matrix mapped into `field`. Panics on ragged input.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(field, r, c, |i, j| field.from_i64(rows[i][j]))
    }

    pub fn column_vector(field: Field, v: &[Scalar]) -> Self {
        Matrix { field, rows: v.len(), cols: 1, entries: v.to_vec() }
    }

    pub fn diagonal(field: Field, diag: &[Scalar]) -> Self {
        let n = diag.len();
        Self::from_fn(field, n, n, |i, j| if i == j { diag[i].clone() } else { field.zero() })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        debug_assert_eq!(v.field(), self.field);
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn try_mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        self.check_field(rhs)?;
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.entries[idx] = &out.entries[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.same_shape(rhs)?;
        Ok(self.zip(rhs, |a, b| a + b))
    }

    pub fn try_sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.same_shape(rhs)?;
        Ok(self.zip(rhs, |a, b| a - b))
    }

    fn zip(&self, rhs: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    fn same_shape(&self, rhs: &Matrix) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        self.check_field(rhs)
    }

    fn check_field(&self, rhs: &Matrix) -> Result<()> {
        if self.field != rhs.field {
            return Err(Error::MixedField(self.field.to_string(), rhs.field.to_string()));
        }
        Ok(())
    }

    /// `self * rhs - rhs * self`.
    pub fn commutator(&self, rhs: &Matrix) -> Matrix {
        &(self * rhs) - &(rhs * self)
    }

    /// Kronecker product; the index `(i, j)` of the factors maps to `i * rhs_dim + j`.
    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        Matrix::from_fn(self.field, self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            self.get(i / rhs.rows, j / rhs.cols) * rhs.get(i % rhs.rows, j % rhs.cols)
        })
    }

    pub fn hstack(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.rows != rhs.rows {
            return Err(Error::Shape(format!("hstack of {} and {} rows", self.rows, rhs.rows)));
        }
        self.check_field(rhs)?;
        Ok(Matrix::from_fn(self.field, self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - self.cols).clone()
            }
        }))
    }

    pub fn vstack(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.cols {
            return Err(Error::Shape(format!("vstack of {} and {} columns", self.cols, rhs.cols)));
        }
        self.check_field(rhs)?;
        let mut entries = self.entries.clone();
        entries.extend(rhs.entries.iter().cloned());
        Ok(Matrix { field: self.field, rows: self.rows + rhs.rows, cols: self.cols, entries })
    }

    /// Matrix whose columns are `cols` of `self`, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, rows.len(), self.cols, |i, j| self.get(rows[i], j).clone())
    }

    /// Matrix with the given vectors as columns; all of length `len`.
    pub fn from_columns(field: Field, len: usize, columns: &[Vec<Scalar>]) -> Matrix {
        Matrix::from_fn(field, len, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn from_rows(field: Field, len: usize, rows: &[Vec<Scalar>]) -> Matrix {
        Matrix::from_fn(field, rows.len(), len, |i, j| rows[i][j].clone())
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: u32) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.field, self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.entries.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = self.get(r, c).inv().expect("nonzero pivot");
            for j in c..cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..cols {
                    let sub = &factor * self.get(r, j);
                    if sub.is_zero() {
                        continue;
                    }
                    let v = self.get(i, j) - &sub;
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rank and a basis of the right kernel `{v : M v = 0}`.
    ///
    /// Matrices cannot hold mixed-field entries (rejected by [`Matrix::new`]),
    /// so this is infallible.
    pub fn rank_and_kernel(&self) -> (usize, Vec<Vec<Scalar>>) {
        let (r, pivots) = self.rref();
        let f = self.field;
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, free);
            }
            basis.push(v);
        }
        (pivots.len(), basis)
    }

    /// Columns form a basis of the right kernel.
    pub fn kernel_matrix(&self) -> Matrix {
        let (_, basis) = self.rank_and_kernel();
        Matrix::from_columns(self.field, self.cols, &basis)
    }

    /// Rows form a basis of `{w : w M = 0}`.
    pub fn left_kernel_matrix(&self) -> Matrix {
        self.transpose().kernel_matrix().transpose()
    }

    /// Solves `A X = B` exactly, or certifies inconsistency.
    pub fn solve(&self, b: &Matrix) -> Result<Solve> {
        if self.rows != b.rows {
            return Err(Error::Shape(format!(
                "A has {} rows, B has {} rows",
                self.rows, b.rows
            )));
        }
        self.check_field(b)?;
        let aug = self.hstack(b)?;
        let (r, pivots) = aug.rref();
        let rank_ab = pivots.len();
        let rank_a = pivots.iter().filter(|&&p| p < self.cols).count();
        if rank_a < rank_ab {
            return Ok(Solve::Inconsistent { rank_a, rank_ab });
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, r.get(row, self.cols + j).clone());
            }
        }
        Ok(Solve::Solved(x))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        match self.solve(&Matrix::identity(self.field, n)).ok()? {
            Solve::Solved(x) if (self * &x) == Matrix::identity(self.field, n) => Some(x),
            _ => None,
        }
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return self.field.zero();
            };
            if p != c {
                for j in 0..n {
                    m.entries.swap(p * n + j, c * n + j);
                }
                det = -&det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                let factor = m.get(i, c) * &inv;
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j) - &(&factor * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Row-major flattening as a column vector.
    pub fn vectorize(&self) -> Vec<Scalar> {
        self.entries.clone()
    }

    pub fn from_vector(field: Field, rows: usize, cols: usize, v: &[Scalar]) -> Matrix {
        assert_eq!(v.len(), rows * cols);
        Matrix { field, rows, cols, entries: v.to_vec() }
    }
}

impl<'a> std::ops::Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &'a Matrix) -> Matrix {
        self.try_mul(rhs).expect("matrix product")
    }
}

impl<'a> std::ops::Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &'a Matrix) -> Matrix {
        self.try_add(rhs).expect("matrix sum")
    }
}

impl<'a> std::ops::Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &'a Matrix) -> Matrix {
        self.try_sub(rhs).expect("matrix difference")
    }
}

impl std::ops::Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(&-&self.field.one())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(Scalar::to_text).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn identity_has_full_rank() {
        let (rank, ker) = Matrix::identity(Q, 3).rank_and_kernel();
        assert_eq!(rank, 3);
        assert!(ker.is_empty());
    }

    #[test]
    fn zero_map_kernel_is_everything() {
        let (rank, ker) = Matrix::zeros(Q, 2, 4).rank_and_kernel();
        assert_eq!(rank, 0);
        assert_eq!(ker.len(), 4);
    }

    #[test]
    fn proportional_rows() {
        let m = Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]);
        let (rank, ker) = m.rank_and_kernel();
        assert_eq!(rank, 1);
        assert_eq!(ker, vec![vec![Q.from_i64(-2), Q.from_i64(1)]]);
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let b = Matrix::from_i64(Q, &[&[1, 5], &[-3, 7], &[0, 2]]);
        let x = Matrix::identity(Q, 3).solve(&b).unwrap().ok().unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn solve_zero_system_is_inconsistent() {
        let b = Matrix::from_i64(Q, &[&[1], &[0]]);
        let out = Matrix::zeros(Q, 2, 2).solve(&b).unwrap();
        assert_eq!(out, Solve::Inconsistent { rank_a: 0, rank_ab: 1 });
    }

    #[test]
    fn solve_scalar_division() {
        let a = Matrix::from_i64(Q, &[&[2]]);
        let b = Matrix::from_i64(Q, &[&[3]]);
        let x = a.solve(&b).unwrap().ok().unwrap();
        assert_eq!(x.get(0, 0), &Q.fraction(3, 2).unwrap());
    }

    #[test]
    fn solve_rejects_shape_mismatch() {
        let a = Matrix::zeros(Q, 2, 2);
        let b = Matrix::zeros(Q, 3, 1);
        assert!(matches!(a.solve(&b), Err(Error::Shape(_))));
    }

    #[test]
    fn mixed_entries_rejected() {
        let f5 = Field::prime(5).unwrap();
        let err = Matrix::new(Q, 1, 2, vec![Q.one(), f5.one()]).unwrap_err();
        assert!(matches!(err, Error::MixedField(_, _)));
    }

    #[test]
    fn determinant_and_inverse() {
        let m = Matrix::from_i64(Q, &[&[2, 1], &[7, 4]]);
        assert_eq!(m.determinant(), Q.one());
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(Q, 2));
        assert!(Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn kron_index_convention() {
        let a = Matrix::from_i64(Q, &[&[1, 2], &[3, 4]]);
        let b = Matrix::identity(Q, 2);
        let k = a.kron(&b);
        assert_eq!(k.get(2, 0), &Q.from_i64(3));
        assert_eq!(k.get(3, 1), &Q.from_i64(3));
        assert_eq!(k.get(2, 1), &Q.zero());
    }
}
