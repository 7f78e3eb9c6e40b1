//! Matrices over k[x]: column echelon reduction, kernels, and a truncated
//! linear-algebra certificate for kernel generation.

use super::matrix::Matrix;
use super::poly::Poly;
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Dense matrix of univariate polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

/// k[x]-module presentations use the variable `x`.
pub type UniPolyMatrix = PolyMatrix;

impl PolyMatrix {
    pub fn new(field: Field, rows: usize, cols: usize, entries: Vec<Poly>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for {rows}x{cols}", entries.len())));
        }
        if let Some(bad) = entries.iter().find(|e| e.field() != field) {
            return Err(Error::MixedField(field.to_string(), bad.field().to_string()));
        }
        Ok(PolyMatrix { field, rows, cols, entries })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        PolyMatrix { field, rows, cols, entries: vec![Poly::zero(field); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Poly::one(field));
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix { field, rows, cols, entries }
    }

    /// Constant polynomial matrix.
    pub fn from_matrix(m: &Matrix) -> Self {
        Self::from_fn(m.field(), m.rows(), m.cols(), |i, j| Poly::constant(m.get(i, j).clone()))
    }

    /// `A + x B` style affine matrices: entry `(i, j)` is `sum_k coeffs[k](i, j) x^k`.
    pub fn from_coefficients(coeffs: &[Matrix]) -> Self {
        let first = coeffs.first().expect("at least one coefficient matrix");
        let field = first.field();
        Self::from_fn(field, first.rows(), first.cols(), |i, j| {
            Poly::new(field, coeffs.iter().map(|c| c.get(i, j).clone()).collect())
        })
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

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(field: Field, rows: usize, cols: &[Vec<Poly>]) -> Self {
        Self::from_fn(field, rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(self.field, rows.len(), self.cols, |i, j| self.get(rows[i], j).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(Poly::degree).max()
    }

    /// Degree of column `j`, `None` for a zero column.
    pub fn column_degree(&self, j: usize) -> Option<usize> {
        (0..self.rows).filter_map(|i| self.get(i, j).degree()).max()
    }

    pub fn try_mul(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(PolyMatrix::from_fn(self.field, self.rows, rhs.cols, |i, j| {
            let mut acc = Poly::zero(self.field);
            for k in 0..self.cols {
                acc = &acc + &(self.get(i, k) * rhs.get(k, j));
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Poly::zero(self.field);
                for (k, vk) in v.iter().enumerate() {
                    acc = &acc + &(self.get(i, k) * vk);
                }
                acc
            })
            .collect()
    }

    /// Entrywise evaluation at a scalar.
    pub fn evaluate(&self, t: &Scalar) -> Matrix {
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j).eval(t))
    }

    fn col_axpy(&mut self, dst: usize, q: &Poly, src: usize) {
        // col_dst -= q * col_src
        for i in 0..self.rows {
            let v = self.get(i, src) * q;
            if v.is_zero() {
                continue;
            }
            let nv = self.get(i, dst) - &v;
            self.set(i, dst, nv);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Column echelon form by Euclidean column operations: returns `(H, U, pivot_rows)`
    /// with `H = self * U`, `U` unimodular, column `t < pivots.len()` of `H` zero above
    /// row `pivot_rows[t]`, and the remaining columns of `H` identically zero.
    pub fn column_echelon(&self) -> (PolyMatrix, PolyMatrix, Vec<usize>) {
        let c = self.cols;
        // Augmented [self; I] so that column ops are tracked in the lower block.
        let mut aug = PolyMatrix::from_fn(self.field, self.rows + c, c, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else if i - self.rows == j {
                Poly::one(self.field)
            } else {
                Poly::zero(self.field)
            }
        });
        let mut pivots = Vec::new();
        let mut s = 0;
        for i in 0..self.rows {
            if s == c {
                break;
            }
            loop {
                let best = (s..c)
                    .filter(|&j| !aug.get(i, j).is_zero())
                    .min_by_key(|&j| aug.get(i, j).degree().unwrap());
                let Some(best) = best else { break };
                aug.swap_cols(s, best);
                let pivot = aug.get(i, s).clone();
                let mut done = true;
                for j in s + 1..c {
                    if aug.get(i, j).is_zero() {
                        continue;
                    }
                    let (q, r) = aug.get(i, j).div_rem(&pivot);
                    aug.col_axpy(j, &q, s);
                    if !r.is_zero() {
                        done = false;
                    }
                }
                if done {
                    pivots.push(i);
                    s += 1;
                    break;
                }
            }
        }
        let h = PolyMatrix::from_fn(self.field, self.rows, c, |i, j| aug.get(i, j).clone());
        let u = PolyMatrix::from_fn(self.field, c, c, |i, j| aug.get(self.rows + i, j).clone());
        (h, u, pivots)
    }

    /// Column-reduces a full-column-rank matrix: afterwards the leading
    /// coefficient matrix has full column rank, so every k[x]-combination has
    /// degree equal to the maximum of the termwise degrees.
    pub fn column_reduced(&self) -> PolyMatrix {
        let mut m = self.clone();
        loop {
            let degs: Vec<usize> = (0..m.cols).map(|j| m.column_degree(j).unwrap_or(0)).collect();
            let lead = Matrix::from_fn(self.field, m.rows, m.cols, |i, j| m.get(i, j).coeff(degs[j]));
            let (_, ker) = lead.rank_and_kernel();
            let Some(dep) = ker.into_iter().next() else {
                return m;
            };
            // The column with maximal degree among those in the dependency gets replaced.
            let target = (0..m.cols)
                .filter(|&j| !dep[j].is_zero())
                .max_by_key(|&j| degs[j])
                .unwrap();
            let inv = dep[target].inv().unwrap();
            let mut newcol = vec![Poly::zero(self.field); m.rows];
            for j in (0..m.cols).filter(|&j| !dep[j].is_zero()) {
                let coef = Poly::monomial(&dep[j] * &inv, degs[target] - degs[j]);
                for (i, slot) in newcol.iter_mut().enumerate() {
                    *slot = &*slot + &(m.get(i, j) * &coef);
                }
            }
            for (i, p) in newcol.into_iter().enumerate() {
                m.set(i, target, p);
            }
        }
    }

    /// Coordinates of `v` in the k[x]-span of the (independent) columns of `self`,
    /// or `None` when `v` is not in that span.
    pub fn lattice_coordinates(&self, v: &[Poly]) -> Option<Vec<Poly>> {
        assert_eq!(v.len(), self.rows);
        let (h, u, pivots) = self.column_echelon();
        let mut coef = vec![Poly::zero(self.field); self.cols];
        for (t, &row) in pivots.iter().enumerate() {
            let mut rhs = v[row].clone();
            for (tp, c) in coef.iter().enumerate().take(t) {
                rhs = &rhs - &(h.get(row, tp) * c);
            }
            coef[t] = rhs.exact_div(h.get(row, t))?;
        }
        let hc = h.mul_vec(&coef);
        if hc.iter().zip(v).any(|(a, b)| a != b) {
            return None;
        }
        Some(u.mul_vec(&coef))
    }
}

/// Kernel of a k[x]-linear map between free modules, with its certificate.
#[derive(Clone, Debug)]
pub struct KernelBasis {
    /// Columns form a column-reduced basis of the kernel.
    pub basis: PolyMatrix,
    /// Truncation degrees at which the certificate was checked.
    pub certified_at: Vec<usize>,
}

/// Generators (in fact a basis) of `ker P` over k[x], computed by Euclidean
/// column reduction and certified at truncation degrees `D` and `D + 2`.
///
/// `D` defaults to one more than the largest kernel column degree.
pub fn hermite_kernel(p: &PolyMatrix, degree: Option<usize>) -> Result<KernelBasis> {
    let (_, u, pivots) = p.column_echelon();
    let free: Vec<Vec<Poly>> = (pivots.len()..p.cols()).map(|j| u.column(j)).collect();
    let basis = PolyMatrix::from_columns(p.field(), p.cols(), &free).column_reduced();
    let d = degree.unwrap_or_else(|| basis.max_degree().unwrap_or(0) + 1);
    for dd in [d, d + 2] {
        if !kernel_certificate(p, &basis, dd) {
            return Err(Error::Consistency(format!("kernel certificate failed at degree {dd}")));
        }
    }
    Ok(KernelBasis { basis, certified_at: vec![d, d + 2] })
}

/// Checks that the columns of `k` lie in `ker p` and that, in degrees at most
/// `deg`, their k[x]-span has the same dimension as the full truncated kernel
/// `{v : deg v <= deg, p v = 0}`. Assumes `k` column-reduced.
pub fn kernel_certificate(p: &PolyMatrix, k: &PolyMatrix, deg: usize) -> bool {
    if k.cols() > 0 && !p.try_mul(k).map(|m| m.is_zero()).unwrap_or(false) {
        return false;
    }
    let spanned: usize = (0..k.cols())
        .map(|j| {
            let cd = k.column_degree(j).unwrap_or(0);
            if cd <= deg {
                deg - cd + 1
            } else {
                0
            }
        })
        .sum();
    spanned == truncated_kernel_dim(p, deg)
}

/// Dimension of `{v in k[x]^c : deg v <= deg, p v = 0}` by plain linear algebra.
pub fn truncated_kernel_dim(p: &PolyMatrix, deg: usize) -> usize {
    let field = p.field();
    let pd = p.max_degree().unwrap_or(0);
    let out_deg = pd + deg + 1;
    let unknowns = p.cols() * (deg + 1);
    // Row (i, e): coefficient of x^e in output row i; column (j, a): coefficient x^a of v_j.
    let sys = Matrix::from_fn(field, p.rows() * out_deg, unknowns, |row, col| {
        let (i, e) = (row / out_deg, row % out_deg);
        let (j, a) = (col / (deg + 1), col % (deg + 1));
        if e >= a {
            p.get(i, j).coeff(e - a)
        } else {
            field.zero()
        }
    });
    unknowns - sys.rank()
}
