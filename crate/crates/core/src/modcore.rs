//! Framed modules over `S = k[x_1, ..., x_n]`: `n` commuting action matrices on
//! `k^d` together with a `d x r` framing matrix whose columns generate.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{charpoly, Field, Matrix, Scalar, Span};

/// A point of `Quot_d^r(A^n)` in matrix form: `x_i` acts by `x[i]`, the framing
/// generator `e_a` maps to column `a` of `g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "FramedModuleJson", try_from = "FramedModuleJson")]
pub struct FramedModule {
    n: usize,
    d: usize,
    r: usize,
    x: Vec<Matrix>,
    g: Matrix,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FramedModuleJson {
    pub n: usize,
    pub d: usize,
    pub r: usize,
    #[serde(rename = "X")]
    pub x: Vec<Matrix>,
    #[serde(rename = "G")]
    pub g: Matrix,
}

impl From<FramedModule> for FramedModuleJson {
    fn from(m: FramedModule) -> Self {
        FramedModuleJson { n: m.n, d: m.d, r: m.r, x: m.x, g: m.g }
    }
}

impl TryFrom<FramedModuleJson> for FramedModule {
    type Error = Error;
    fn try_from(j: FramedModuleJson) -> Result<Self> {
        let m = FramedModule::new(j.x, j.g)?;
        if (m.n, m.d, m.r) != (j.n, j.d, j.r) {
            return Err(Error::Shape(format!(
                "declared (n, d, r) = ({}, {}, {}) but matrices give ({}, {}, {})",
                j.n, j.d, j.r, m.n, m.d, m.r
            )));
        }
        Ok(m)
    }
}

/// Outcome of [`validate_framed`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub commuting: bool,
    pub generating: bool,
    /// First non-commuting pair `(i, j)`.
    pub commutator_witness: Option<(usize, usize)>,
    /// Dimension of the smallest `X`-stable subspace containing the framing columns.
    pub krylov_dim: usize,
    /// Basis (rows) of that subspace when it is proper.
    pub invariant_subspace: Option<Matrix>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.commuting && self.generating
    }
}

/// Monomial exponent vector.
pub type Monomial = Vec<u32>;

impl FramedModule {
    /// Builds a module from action matrices and framing, checking shapes and
    /// fields only. Use [`validate_framed`] or [`FramedModule::validated`] for
    /// the module conditions.
    pub fn new(x: Vec<Matrix>, g: Matrix) -> Result<Self> {
        let d = g.rows();
        let r = g.cols();
        let field = g.field();
        for (i, xi) in x.iter().enumerate() {
            if xi.rows() != d || xi.cols() != d {
                return Err(Error::Shape(format!(
                    "X[{i}] is {}x{}, expected {d}x{d}",
                    xi.rows(),
                    xi.cols()
                )));
            }
            if xi.field() != field {
                return Err(Error::MixedField(field.to_string(), xi.field().to_string()));
            }
        }
        Ok(FramedModule { n: x.len(), d, r, x, g })
    }

    /// [`FramedModule::new`] followed by validation.
    pub fn validated(x: Vec<Matrix>, g: Matrix) -> Result<Self> {
        let m = Self::new(x, g)?;
        let report = validate_framed(&m);
        if !report.commuting {
            let (i, j) = report.commutator_witness.unwrap();
            return Err(Error::InvalidModule(format!("X[{i}] and X[{j}] do not commute")));
        }
        if !report.generating {
            return Err(Error::InvalidModule(format!(
                "framing generates a subspace of dimension {} < {}",
                report.krylov_dim, m.d
            )));
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn field(&self) -> Field {
        self.g.field()
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.x
    }

    pub fn action(&self, i: usize) -> &Matrix {
        &self.x[i]
    }

    pub fn framing(&self) -> &Matrix {
        &self.g
    }

    /// `m(X) v` for a monomial `m`.
    pub fn apply_monomial(&self, m: &[u32], v: &[Scalar]) -> Vec<Scalar> {
        let mut w = v.to_vec();
        for (i, &e) in m.iter().enumerate() {
            for _ in 0..e {
                w = self.x[i].mul_vec(&w);
            }
        }
        w
    }

    /// Greedy basis of the Krylov span of the given columns: candidates
    /// `m(X) g_a` are scanned in graded-lex order of `(m, a)` and kept when
    /// independent of the earlier ones. Returns the selected `(monomial, column)`
    /// labels and the span.
    pub fn krylov_basis(&self, columns: &[usize]) -> (Vec<(Monomial, usize)>, Span) {
        let mut span = Span::new(self.field(), self.d);
        let mut selected = Vec::new();
        let mut queue: BTreeSet<(u32, Monomial, usize)> = BTreeSet::new();
        for &a in columns {
            queue.insert((0, vec![0; self.n], a));
        }
        let mut seen = queue.clone();
        while let Some(item) = queue.pop_first() {
            if span.dim() == self.d {
                break;
            }
            let (deg, mono, a) = item;
            let v = self.apply_monomial(&mono, &self.g.column(a));
            if span.insert(&v) {
                for i in 0..self.n {
                    let mut next = mono.clone();
                    next[i] += 1;
                    let key = (deg + 1, next, a);
                    if seen.insert(key.clone()) {
                        queue.insert(key);
                    }
                }
                selected.push((mono, a));
            }
        }
        (selected, span)
    }

    /// Gauge transform `(g X_i g^-1, g G)`.
    pub fn transformed(&self, gauge: &Matrix) -> Result<FramedModule> {
        let inv = gauge
            .inverse()
            .ok_or_else(|| Error::InvalidArgument("gauge matrix is singular".into()))?;
        let x = self.x.iter().map(|xi| &(gauge * xi) * &inv).collect();
        FramedModule::new(x, gauge * &self.g)
    }

    /// Gauge-invariant normal form: the framed module rewritten in the greedy
    /// Krylov basis. Two framed modules define the same quotient (equal
    /// kernels) exactly when their normal forms agree.
    pub fn normal_form(&self) -> Result<FramedModule> {
        let cols: Vec<usize> = (0..self.r).collect();
        let (selected, _) = self.krylov_basis(&cols);
        if selected.len() != self.d {
            return Err(Error::InvalidModule("framing does not generate".into()));
        }
        let basis: Vec<Vec<Scalar>> =
            selected.iter().map(|(m, a)| self.apply_monomial(m, &self.g.column(*a))).collect();
        let b = Matrix::from_columns(self.field(), self.d, &basis);
        let binv = b.inverse().expect("Krylov basis is invertible");
        self.transformed(&binv)
    }
}

/// Checks commutativity of the actions and generation by the framing.
pub fn validate_framed(m: &FramedModule) -> ValidationReport {
    let mut witness = None;
    'outer: for i in 0..m.n {
        for j in i + 1..m.n {
            if !m.x[i].commutator(&m.x[j]).is_zero() {
                witness = Some((i, j));
                break 'outer;
            }
        }
    }
    let cols: Vec<usize> = (0..m.r).collect();
    let (_, span) = m.krylov_basis(&cols);
    let generating = span.dim() == m.d;
    ValidationReport {
        commuting: witness.is_none(),
        generating,
        commutator_witness: witness,
        krylov_dim: span.dim(),
        invariant_subspace: (!generating).then(|| span.basis_rows()),
    }
}

/// `M1 (x)_S M2` as a quotient of `k^{d1 d2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorProductResult {
    pub dim12: usize,
    /// `dim12 x (d1 d2)` surjection with kernel `sum_i Im(X_i (x) 1 - 1 (x) Y_i)`.
    pub q: Matrix,
    /// Induced action of `x_i` on the quotient: `q (X_i (x) 1) = actions[i] q`.
    pub actions: Vec<Matrix>,
}

/// Tensor product over `S`, computed as the cokernel of the relations
/// `X_i (x) 1 - 1 (x) Y_i` inside `k^{d1} (x) k^{d2}`.
pub fn tensor_over_s(m1: &FramedModule, m2: &FramedModule) -> Result<TensorProductResult> {
    if m1.n != m2.n {
        return Err(Error::Shape(format!("variable counts {} and {} differ", m1.n, m2.n)));
    }
    if m1.field() != m2.field() {
        return Err(Error::MixedField(m1.field().to_string(), m2.field().to_string()));
    }
    let field = m1.field();
    let (d1, d2) = (m1.d, m2.d);
    let id1 = Matrix::identity(field, d1);
    let id2 = Matrix::identity(field, d2);
    let left: Vec<Matrix> = m1.x.iter().map(|x| x.kron(&id2)).collect();
    let mut relations = Matrix::zeros(field, d1 * d2, 0);
    for (l, y) in left.iter().zip(&m2.x) {
        let rel = l - &id1.kron(y);
        relations = relations.hstack(&rel)?;
    }
    let q = relations.left_kernel_matrix();
    let dim12 = q.rows();
    let actions = if dim12 == 0 {
        vec![Matrix::zeros(field, 0, 0); m1.n]
    } else {
        let right_inv = q
            .solve(&Matrix::identity(field, dim12))?
            .ok()
            .expect("full row rank has a right inverse");
        left.iter().map(|l| &(&q * l) * &right_inv).collect()
    };
    Ok(TensorProductResult { dim12, q, actions })
}

/// Dimension of the unital algebra generated by the actions, i.e. `dim S/Ann(M)`.
pub fn annihilator_algebra_dim(m: &FramedModule) -> usize {
    let field = m.field();
    let d = m.d;
    let mut span = Span::new(field, d * d);
    let mut frontier = vec![Matrix::identity(field, d)];
    span.insert(&frontier[0].vectorize());
    while let Some(a) = frontier.pop() {
        for x in &m.x {
            let b = &a * x;
            if span.insert(&b.vectorize()) {
                frontier.push(b);
            }
        }
    }
    span.dim()
}

/// Eigenvalues of the single action matrix in the computation field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Support {
    /// Points with multiplicities (dimension of the localization).
    pub points: Vec<(Scalar, usize)>,
    /// False when the characteristic polynomial does not split.
    pub split: bool,
}

impl Support {
    pub fn distinct(&self) -> usize {
        self.points.len()
    }
}

/// Support of a univariate module: roots of the characteristic polynomial of `X`.
pub fn support_univariate(m: &FramedModule) -> Result<Support> {
    if m.n != 1 {
        return Err(Error::NotUnivariate(m.n));
    }
    let (points, split) = charpoly(&m.x[0]).roots();
    Ok(Support { points, split })
}

/// Module of `d` distinct points of `A^n`: diagonal actions, framing `g`.
pub fn make_tuple_of_points(points: &[Vec<Scalar>], g: Matrix) -> Result<FramedModule> {
    let d = points.len();
    if g.rows() != d {
        return Err(Error::Shape(format!("framing has {} rows for {d} points", g.rows())));
    }
    let n = points.first().map_or(0, Vec::len);
    if points.iter().any(|p| p.len() != n) {
        return Err(Error::Shape("points have different numbers of coordinates".into()));
    }
    for i in 0..d {
        for j in i + 1..d {
            if points[i] == points[j] {
                return Err(Error::InvalidArgument(format!("duplicate point at positions {i} and {j}")));
            }
        }
    }
    let field = g.field();
    let x = (0..n)
        .map(|c| Matrix::diagonal(field, &points.iter().map(|p| p[c].clone()).collect::<Vec<_>>()))
        .collect();
    FramedModule::validated(x, g)
}

/// Cyclic module `S/I` of distinct points: framing rank 1, all-ones generator.
pub fn make_cyclic_points(field: Field, points: &[Vec<Scalar>]) -> Result<FramedModule> {
    let g = Matrix::from_fn(field, points.len(), 1, |_, _| field.one());
    make_tuple_of_points(points, g)
}

/// Totally degenerate module `(S/m)^{d}` at the origin framed by `a` (rank `d`).
pub fn make_degenerate(n: usize, a: Matrix) -> Result<FramedModule> {
    let d = a.rows();
    let rank = a.rank();
    if rank < d {
        return Err(Error::InvalidArgument(format!("framing has rank {rank} < d = {d}")));
    }
    let field = a.field();
    FramedModule::validated(vec![Matrix::zeros(field, d, d); n], a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Poly;

    const Q: Field = Field::Rational;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64(Q, rows)
    }

    fn pts(v: &[&[i64]]) -> Vec<Vec<Scalar>> {
        v.iter().map(|p| p.iter().map(|&c| Q.from_i64(c)).collect()).collect()
    }

    #[test]
    fn diagonal_with_identity_framing_is_valid() {
        let md = FramedModule::new(vec![m(&[&[0, 0], &[0, 1]])], Matrix::identity(Q, 2)).unwrap();
        assert!(validate_framed(&md).is_valid());
    }

    #[test]
    fn noncommuting_pair_reports_witness() {
        let md = FramedModule::new(vec![m(&[&[0, 1], &[0, 0]]), m(&[&[0, 0], &[1, 0]])], Matrix::identity(Q, 2))
            .unwrap();
        let rep = validate_framed(&md);
        assert!(!rep.commuting);
        assert_eq!(rep.commutator_witness, Some((0, 1)));
    }

    #[test]
    fn eigenvector_framing_does_not_generate() {
        let md = FramedModule::new(vec![m(&[&[0, 0], &[0, 1]])], m(&[&[1], &[0]])).unwrap();
        let rep = validate_framed(&md);
        assert!(rep.commuting && !rep.generating);
        assert_eq!(rep.krylov_dim, 1);
        assert_eq!(rep.invariant_subspace.unwrap().rows(), 1);
    }

    #[test]
    fn shape_mismatch_rejected() {
        assert!(matches!(FramedModule::new(vec![Matrix::identity(Q, 3)], Matrix::identity(Q, 2)), Err(Error::Shape(_))));
    }

    #[test]
    fn disjoint_support_tensor_vanishes() {
        let a = make_cyclic_points(Q, &pts(&[&[0]])).unwrap();
        let b = make_cyclic_points(Q, &pts(&[&[1]])).unwrap();
        assert_eq!(tensor_over_s(&a, &b).unwrap().dim12, 0);
    }

    #[test]
    fn degenerate_square_tensor() {
        let a = make_degenerate(1, Matrix::identity(Q, 2)).unwrap();
        let t = tensor_over_s(&a, &a).unwrap();
        assert_eq!(t.dim12, 4);
    }

    #[test]
    fn cyclic_nilpotent_tensor() {
        let nil = m(&[&[0, 0], &[1, 0]]);
        let a = FramedModule::validated(vec![nil], m(&[&[1], &[0]])).unwrap();
        let t = tensor_over_s(&a, &a).unwrap();
        assert_eq!(t.dim12, 2);
        // induced action is again nilpotent of order 2
        assert!(!t.actions[0].is_zero());
        assert!((&t.actions[0] * &t.actions[0]).is_zero());
    }

    #[test]
    fn tensor_variable_mismatch() {
        let a = make_degenerate(1, Matrix::identity(Q, 1)).unwrap();
        let b = make_degenerate(2, Matrix::identity(Q, 1)).unwrap();
        assert!(tensor_over_s(&a, &b).is_err());
    }

    #[test]
    fn annihilator_dims() {
        let diag = FramedModule::new(vec![m(&[&[0, 0], &[0, 1]])], Matrix::identity(Q, 2)).unwrap();
        assert_eq!(annihilator_algebra_dim(&diag), 2);
        let nil = FramedModule::new(vec![m(&[&[0, 1], &[0, 0]])], Matrix::identity(Q, 2)).unwrap();
        assert_eq!(annihilator_algebra_dim(&nil), 2);
        let zero = make_degenerate(2, Matrix::identity(Q, 2)).unwrap();
        assert_eq!(annihilator_algebra_dim(&zero), 1);
    }

    #[test]
    fn supports() {
        let diag = FramedModule::new(vec![m(&[&[0, 0], &[0, 1]])], Matrix::identity(Q, 2)).unwrap();
        let s = support_univariate(&diag).unwrap();
        assert!(s.split);
        assert_eq!(s.points, vec![(Q.zero(), 1), (Q.one(), 1)]);
        let nil = FramedModule::new(vec![m(&[&[0, 1], &[0, 0]])], Matrix::identity(Q, 2)).unwrap();
        assert_eq!(support_univariate(&nil).unwrap().points, vec![(Q.zero(), 2)]);
        // companion matrix of x^2 + 1
        let comp = FramedModule::new(vec![m(&[&[0, -1], &[1, 0]])], Matrix::identity(Q, 2)).unwrap();
        assert_eq!(charpoly(comp.action(0)), Poly::from_i64(Q, &[1, 0, 1]));
        assert!(!support_univariate(&comp).unwrap().split);
    }

    #[test]
    fn tuple_of_points_constructors() {
        let a = make_tuple_of_points(&pts(&[&[0], &[1]]), Matrix::identity(Q, 2)).unwrap();
        assert_eq!(a.action(0), &m(&[&[0, 0], &[0, 1]]));
        let c = make_cyclic_points(Q, &pts(&[&[0], &[1]])).unwrap();
        assert_eq!(c.r(), 1);
        // X satisfies x(x - 1) = 0 and is cyclic: S/(x(x-1))
        assert_eq!(charpoly(c.action(0)), Poly::from_i64(Q, &[0, -1, 1]));
        let two = make_cyclic_points(Q, &pts(&[&[0, 0], &[1, 2]])).unwrap();
        assert_eq!(two.action(0), &m(&[&[0, 0], &[0, 1]]));
        assert_eq!(two.action(1), &m(&[&[0, 0], &[0, 2]]));
        assert!(make_tuple_of_points(&pts(&[&[1], &[1]]), Matrix::identity(Q, 2)).is_err());
        // rank-deficient framing with a zero row fails generation
        assert!(make_tuple_of_points(&pts(&[&[0], &[1]]), m(&[&[1], &[0]])).is_err());
    }

    #[test]
    fn degenerate_constructor() {
        assert!(make_degenerate(1, Matrix::identity(Q, 2)).is_ok());
        assert!(make_degenerate(1, m(&[&[1, 0, 0], &[0, 1, 0]])).is_ok());
        assert!(make_degenerate(1, m(&[&[1, 1], &[1, 1]])).is_err());
    }

    #[test]
    fn normal_form_is_gauge_invariant() {
        let a = FramedModule::validated(vec![m(&[&[1, 2], &[0, 3]])], m(&[&[1, 0], &[1, 1]])).unwrap();
        let g = m(&[&[2, 1], &[1, 1]]);
        let b = a.transformed(&g).unwrap();
        assert_ne!(a, b);
        assert_eq!(a.normal_form().unwrap(), b.normal_form().unwrap());
    }

    #[test]
    fn json_shape() {
        let a = make_degenerate(1, Matrix::identity(Q, 1)).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.starts_with(r#"{"n":1,"d":1,"r":1,"X":[{"field":"Q""#));
        let back: FramedModule = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }
}
