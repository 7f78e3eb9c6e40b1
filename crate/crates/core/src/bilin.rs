//! Points of the bilinear scheme: two framed modules `M1`, `M2` and a surjection
//! `M1 (x)_S M2 -> M3`, stored as its lift `Pihat` on `k^{d1} (x) k^{d2}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix, Poly, Scalar, Solve};
use crate::linsys::{kernel_modulo, Layout};
use crate::modcore::{make_tuple_of_points, validate_framed, FramedModule, ValidationReport};
use crate::quot::{
    elementary_matrices, first_order_commutator, hom_space, kernel_presentation, tangent_to_hom, KernelPresentation,
    QuotTangentVector,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "BilinPointJson", try_from = "BilinPointJson")]
pub struct BilinPoint {
    m1: FramedModule,
    m2: FramedModule,
    d3: usize,
    z: Vec<Matrix>,
    pihat: Matrix,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BilinPointJson {
    #[serde(rename = "M1")]
    pub m1: FramedModule,
    #[serde(rename = "M2")]
    pub m2: FramedModule,
    pub d3: usize,
    #[serde(rename = "Z")]
    pub z: Vec<Matrix>,
    #[serde(rename = "Pihat")]
    pub pihat: Matrix,
}

impl From<BilinPoint> for BilinPointJson {
    fn from(b: BilinPoint) -> Self {
        BilinPointJson { m1: b.m1, m2: b.m2, d3: b.d3, z: b.z, pihat: b.pihat }
    }
}

impl TryFrom<BilinPointJson> for BilinPoint {
    type Error = Error;
    fn try_from(j: BilinPointJson) -> Result<Self> {
        let b = BilinPoint::new(j.m1, j.m2, j.z, j.pihat)?;
        if b.d3 != j.d3 {
            return Err(Error::Shape(format!("declared d3 = {} but Pihat has {} rows", j.d3, b.d3)));
        }
        Ok(b)
    }
}

/// Which equivariance family failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EquivarianceSide {
    /// `Pihat (X_i (x) 1) = Z_i Pihat`.
    Left,
    /// `Pihat (1 (x) Y_i) = Z_i Pihat`.
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivarianceFailure {
    pub side: EquivarianceSide,
    pub index: usize,
    pub residual: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BilinValidation {
    pub m1: ValidationReport,
    pub m2: ValidationReport,
    pub z_commuting: bool,
    pub z_witness: Option<(usize, usize)>,
    pub equivariance: Option<EquivarianceFailure>,
    pub pihat_rank: usize,
    pub surjective: bool,
}

impl BilinValidation {
    pub fn is_valid(&self) -> bool {
        self.m1.is_valid() && self.m2.is_valid() && self.z_commuting && self.equivariance.is_none() && self.surjective
    }
}

impl BilinPoint {
    /// Checks shapes and fields only; see [`validate_bilin`].
    pub fn new(m1: FramedModule, m2: FramedModule, z: Vec<Matrix>, pihat: Matrix) -> Result<Self> {
        let field = m1.field();
        if m2.field() != field || pihat.field() != field || z.iter().any(|m| m.field() != field) {
            return Err(Error::MixedField(field.to_string(), "another field".into()));
        }
        if m1.n() != m2.n() || z.len() != m1.n() {
            return Err(Error::Shape(format!(
                "variable counts differ: M1 {}, M2 {}, Z {}",
                m1.n(),
                m2.n(),
                z.len()
            )));
        }
        let d3 = pihat.rows();
        if pihat.cols() != m1.d() * m2.d() {
            return Err(Error::Shape(format!(
                "Pihat has {} columns, expected d1*d2 = {}",
                pihat.cols(),
                m1.d() * m2.d()
            )));
        }
        if let Some(i) = z.iter().position(|m| m.rows() != d3 || m.cols() != d3) {
            return Err(Error::Shape(format!("Z[{i}] is not {d3}x{d3}")));
        }
        Ok(BilinPoint { m1, m2, d3, z, pihat })
    }

    pub fn m1(&self) -> &FramedModule {
        &self.m1
    }

    pub fn m2(&self) -> &FramedModule {
        &self.m2
    }

    pub fn d3(&self) -> usize {
        self.d3
    }

    pub fn z(&self) -> &[Matrix] {
        &self.z
    }

    pub fn pihat(&self) -> &Matrix {
        &self.pihat
    }

    pub fn n(&self) -> usize {
        self.m1.n()
    }

    pub fn field(&self) -> Field {
        self.m1.field()
    }

    /// `d3 x (r1 r2)` framing of `M3`, column `a r2 + b` equal to `Pihat (g_a (x) h_b)`.
    pub fn induced_framing(&self) -> Matrix {
        &self.pihat * &self.m1.framing().kron(self.m2.framing())
    }

    /// The target module with its induced framing.
    pub fn m3(&self) -> Result<FramedModule> {
        FramedModule::new(self.z.clone(), self.induced_framing())
    }

    /// Change of bases `(g1, g2, g3)` on `M1`, `M2`, `M3`.
    pub fn transformed(&self, g1: &Matrix, g2: &Matrix, g3: &Matrix) -> Result<BilinPoint> {
        let singular = || Error::InvalidArgument("gauge matrix is singular".into());
        let g3inv = g3.inverse().ok_or_else(singular)?;
        let g12inv = g1.kron(g2).inverse().ok_or_else(singular)?;
        BilinPoint::new(
            self.m1.transformed(g1)?,
            self.m2.transformed(g2)?,
            self.z.iter().map(|z| &(g3 * z) * &g3inv).collect(),
            &(g3 * &self.pihat) * &g12inv,
        )
    }

    /// Gauge-invariant key: normal forms of `M1`, `M2` and of `M3` with its induced framing.
    /// Two valid points define the same point of the scheme exactly when their keys agree.
    pub fn key(&self) -> Result<(FramedModule, FramedModule, FramedModule)> {
        Ok((self.m1.normal_form()?, self.m2.normal_form()?, self.m3()?.normal_form()?))
    }
}

fn commutation_witness(z: &[Matrix]) -> Option<(usize, usize)> {
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            if !z[i].commutator(&z[j]).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

/// Checks both modules, commutation of `Z`, double equivariance and surjectivity.
pub fn validate_bilin(b: &BilinPoint) -> BilinValidation {
    let field = b.field();
    let id1 = Matrix::identity(field, b.m1.d());
    let id2 = Matrix::identity(field, b.m2.d());
    let mut equivariance = None;
    'outer: for (side, actions) in [(EquivarianceSide::Left, b.m1.actions()), (EquivarianceSide::Right, b.m2.actions())] {
        for (i, a) in actions.iter().enumerate() {
            let lifted = match side {
                EquivarianceSide::Left => a.kron(&id2),
                EquivarianceSide::Right => id1.kron(a),
            };
            let residual = &(&b.pihat * &lifted) - &(&b.z[i] * &b.pihat);
            if !residual.is_zero() {
                equivariance = Some(EquivarianceFailure { side, index: i, residual });
                break 'outer;
            }
        }
    }
    let z_witness = commutation_witness(&b.z);
    let pihat_rank = b.pihat.rank();
    BilinValidation {
        m1: validate_framed(&b.m1),
        m2: validate_framed(&b.m2),
        z_commuting: z_witness.is_none(),
        z_witness,
        equivariance,
        pihat_rank,
        surjective: pihat_rank == b.d3,
    }
}

fn require_valid(b: &BilinPoint) -> Result<()> {
    let v = validate_bilin(b);
    if v.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidPoint(describe_failure(&v)))
    }
}

/// Short human-readable reason for an invalid point.
pub fn describe_failure(v: &BilinValidation) -> String {
    if !v.m1.is_valid() {
        return "M1 is not a valid framed module".into();
    }
    if !v.m2.is_valid() {
        return "M2 is not a valid framed module".into();
    }
    if let Some((i, j)) = v.z_witness {
        return format!("Z_{i} and Z_{j} do not commute");
    }
    if let Some(f) = &v.equivariance {
        return format!("equivariance fails on the {:?} side at index {}", f.side, f.index);
    }
    if !v.surjective {
        return format!("Pihat has rank {} below d3", v.pihat_rank);
    }
    "valid".into()
}

/// Outcome of [`factor_membership`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    /// The assembled point when the framed target factors through `M1 (x)_S M2`.
    pub point: Option<BilinPoint>,
    /// Dimension of the solution space in the `Pihat` unknowns (0 means unique).
    pub solution_dim: usize,
    /// `(rank A, rank [A | b])` when the linear system is inconsistent.
    pub inconsistency: Option<(usize, usize)>,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        self.point.is_some()
    }
}

/// Decides whether the framing `S^{r1 r2} -> M3` factors through `M1 (x)_S M2`,
/// by solving for `Pihat` with `Pihat (g_a (x) h_b) = f_{ab}` and both
/// equivariance families.
pub fn factor_membership(m1: &FramedModule, m2: &FramedModule, m3: &FramedModule) -> Result<Membership> {
    for (name, m) in [("M1", m1), ("M2", m2)] {
        if !validate_framed(m).is_valid() {
            return Err(Error::InvalidModule(format!("{name} is not valid")));
        }
    }
    if m1.n() != m2.n() || m3.n() != m1.n() {
        return Err(Error::Shape("variable counts differ".into()));
    }
    if m3.r() != m1.r() * m2.r() {
        return Err(Error::Shape(format!("M3 framing has {} columns, expected r1*r2 = {}", m3.r(), m1.r() * m2.r())));
    }
    if commutation_witness(m3.actions()).is_some() {
        return Err(Error::InvalidModule("M3 actions do not commute".into()));
    }
    let field = m1.field();
    let (d1, d2, d3) = (m1.d(), m2.d(), m3.d());
    let id1 = Matrix::identity(field, d1);
    let id2 = Matrix::identity(field, d2);
    let gh = m1.framing().kron(m2.framing());
    let left: Vec<Matrix> = m1.actions().iter().map(|x| x.kron(&id2)).collect();
    let right: Vec<Matrix> = m2.actions().iter().map(|y| id1.kron(y)).collect();
    let layout = Layout::new(field, &[(d3, d1 * d2)]);
    let system = layout.operator_matrix(|b| {
        let p = &b[0];
        let mut out = vec![p * &gh];
        for (i, z) in m3.actions().iter().enumerate() {
            out.push(&(p * &left[i]) - &(z * p));
            out.push(&(p * &right[i]) - &(z * p));
        }
        out
    });
    let mut rhs = m3.framing().vectorize();
    rhs.resize(system.rows(), field.zero());
    let rhs = Matrix::column_vector(field, &rhs);
    let (rank, _) = system.rank_and_kernel();
    let solution_dim = layout.len() - rank;
    match system.solve(&rhs)? {
        Solve::Inconsistent { rank_a, rank_ab } => {
            Ok(Membership { point: None, solution_dim, inconsistency: Some((rank_a, rank_ab)) })
        }
        Solve::Solved(v) => {
            let pihat = layout.unpack(&v.column(0)).remove(0);
            let point = BilinPoint::new(m1.clone(), m2.clone(), m3.actions().to_vec(), pihat)?;
            let ok = validate_bilin(&point).is_valid();
            Ok(Membership { point: ok.then_some(point), solution_dim, inconsistency: None })
        }
    }
}

/// First-order deformation of a bilinear point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BilinTangentVector {
    #[serde(rename = "Xdot")]
    pub xdot: Vec<Matrix>,
    #[serde(rename = "Gdot")]
    pub gdot: Matrix,
    #[serde(rename = "Ydot")]
    pub ydot: Vec<Matrix>,
    #[serde(rename = "Hdot")]
    pub hdot: Matrix,
    #[serde(rename = "Zdot")]
    pub zdot: Vec<Matrix>,
    #[serde(rename = "Pihatdot")]
    pub pihatdot: Matrix,
}

impl BilinTangentVector {
    fn from_blocks(n: usize, mut blocks: Vec<Matrix>) -> Self {
        let pihatdot = blocks.pop().unwrap();
        let zdot = blocks.split_off(2 * n + 2);
        let hdot = blocks.pop().unwrap();
        let ydot = blocks.split_off(n + 1);
        let gdot = blocks.pop().unwrap();
        BilinTangentVector { xdot: blocks, gdot, ydot, hdot, zdot, pihatdot }
    }

    fn into_blocks(self) -> Vec<Matrix> {
        let mut v = self.xdot;
        v.push(self.gdot);
        v.extend(self.ydot);
        v.push(self.hdot);
        v.extend(self.zdot);
        v.push(self.pihatdot);
        v
    }

    /// All residuals of the linearized conditions (commutation in three
    /// families, both equivariance families).
    pub fn residuals(&self, b: &BilinPoint) -> Vec<Matrix> {
        first_order_residuals(b, &self.xdot, &self.ydot, &self.zdot, &self.pihatdot)
    }

    pub fn satisfies_first_order(&self, b: &BilinPoint) -> bool {
        self.residuals(b).iter().all(Matrix::is_zero)
    }
}

fn first_order_residuals(b: &BilinPoint, xd: &[Matrix], yd: &[Matrix], zd: &[Matrix], pd: &Matrix) -> Vec<Matrix> {
    let n = b.n();
    let field = b.field();
    let id1 = Matrix::identity(field, b.m1.d());
    let id2 = Matrix::identity(field, b.m2.d());
    let (x, y, z, p) = (b.m1.actions(), b.m2.actions(), &b.z, &b.pihat);
    let mut out = Vec::new();
    for (fam, dfam) in [(x, xd), (y, yd), (z.as_slice(), zd)] {
        for i in 0..n {
            for j in i + 1..n {
                out.push(first_order_commutator(&fam[i], &dfam[i], &fam[j], &dfam[j]));
            }
        }
    }
    for i in 0..n {
        let lhs = &(pd * &x[i].kron(&id2)) + &(p * &xd[i].kron(&id2));
        let rhs = &(&zd[i] * p) + &(&z[i] * pd);
        out.push(&lhs - &rhs);
        let lhs = &(pd * &id1.kron(&y[i])) + &(p * &id1.kron(&yd[i]));
        out.push(&lhs - &(&(&zd[i] * p) + &(&z[i] * pd)));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct BilinTangentReport {
    pub dim: usize,
    pub nullity: usize,
    pub gauge: usize,
    pub basis: Vec<BilinTangentVector>,
}

fn bilin_layout(b: &BilinPoint) -> Layout {
    let n = b.n();
    let (d1, d2, d3) = (b.m1.d(), b.m2.d(), b.d3);
    let mut shapes = vec![(d1, d1); n];
    shapes.push((d1, b.m1.r()));
    shapes.extend(vec![(d2, d2); n]);
    shapes.push((d2, b.m2.r()));
    shapes.extend(vec![(d3, d3); n]);
    shapes.push((d3, d1 * d2));
    Layout::new(b.field(), &shapes)
}

/// Tangent vectors induced by infinitesimal basis changes on the three spaces.
pub fn bilin_gauge_vectors(b: &BilinPoint) -> Vec<BilinTangentVector> {
    let field = b.field();
    let (d1, d2, d3) = (b.m1.d(), b.m2.d(), b.d3);
    let id1 = Matrix::identity(field, d1);
    let id2 = Matrix::identity(field, d2);
    let zero = |rows: usize, cols: usize| Matrix::zeros(field, rows, cols);
    let zeros = |d: usize| vec![zero(d, d); b.n()];
    let mut out = Vec::new();
    for delta in elementary_matrices(field, d1) {
        out.push(BilinTangentVector {
            xdot: b.m1.actions().iter().map(|x| delta.commutator(x)).collect(),
            gdot: &delta * b.m1.framing(),
            ydot: zeros(d2),
            hdot: zero(d2, b.m2.r()),
            zdot: zeros(d3),
            pihatdot: -&(&b.pihat * &delta.kron(&id2)),
        });
    }
    for delta in elementary_matrices(field, d2) {
        out.push(BilinTangentVector {
            xdot: zeros(d1),
            gdot: zero(d1, b.m1.r()),
            ydot: b.m2.actions().iter().map(|y| delta.commutator(y)).collect(),
            hdot: &delta * b.m2.framing(),
            zdot: zeros(d3),
            pihatdot: -&(&b.pihat * &id1.kron(&delta)),
        });
    }
    for delta in elementary_matrices(field, d3) {
        out.push(BilinTangentVector {
            xdot: zeros(d1),
            gdot: zero(d1, b.m1.r()),
            ydot: zeros(d2),
            hdot: zero(d2, b.m2.r()),
            zdot: b.z.iter().map(|z| delta.commutator(z)).collect(),
            pihatdot: &delta * &b.pihat,
        });
    }
    out
}

/// Tangent space: solutions of the linearized conditions in
/// `(Xdot, Gdot, Ydot, Hdot, Zdot, Pihatdot)` modulo the gauge directions.
pub fn bilin_tangent(b: &BilinPoint) -> Result<BilinTangentReport> {
    require_valid(b)?;
    let n = b.n();
    let field = b.field();
    let layout = bilin_layout(b);
    let system = layout.operator_matrix(|blk| {
        let v = BilinTangentVector::from_blocks(n, blk.to_vec());
        first_order_residuals(b, &v.xdot, &v.ydot, &v.zdot, &v.pihatdot)
    });
    let gauge: Vec<Vec<Scalar>> =
        bilin_gauge_vectors(b).into_iter().map(|v| layout.pack(&v.into_blocks())).collect();
    let expected = gauge.len();
    let sol = kernel_modulo(field, layout.len(), &system, &gauge);
    if sol.gauge_rank != expected {
        return Err(Error::Consistency(format!("gauge map has rank {} < {expected}", sol.gauge_rank)));
    }
    let basis = sol
        .representatives
        .iter()
        .map(|v| BilinTangentVector::from_blocks(n, layout.unpack(v)))
        .collect();
    Ok(BilinTangentReport { dim: sol.nullity - expected, nullity: sol.nullity, gauge: expected, basis })
}

/// Kernels `K1`, `K2`, `K3` of the three framings of a univariate point.
#[derive(Clone, Debug)]
pub struct BilinKernels {
    pub k1: KernelPresentation,
    pub k2: KernelPresentation,
    pub k3: KernelPresentation,
    m3: FramedModule,
    /// Coordinates in `K3`'s basis of `k (x) e_b` for generators `k` of `K1`,
    /// indexed `[generator][b]`.
    left: Vec<Vec<Vec<Poly>>>,
    /// Coordinates of `e_a (x) k` for generators `k` of `K2`, indexed `[generator][a]`.
    right: Vec<Vec<Vec<Poly>>>,
}

/// Maps `K_i -> M_i` given by their values on the kernel generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomTriple {
    pub phi1: Matrix,
    pub phi2: Matrix,
    pub phi3: Matrix,
}

pub fn bilin_kernels(b: &BilinPoint) -> Result<BilinKernels> {
    if b.n() != 1 {
        return Err(Error::NotUnivariate(b.n()));
    }
    require_valid(b)?;
    let field = b.field();
    let (r1, r2) = (b.m1.r(), b.m2.r());
    let m3 = b.m3()?;
    let k1 = kernel_presentation(&b.m1)?;
    let k2 = kernel_presentation(&b.m2)?;
    let k3 = kernel_presentation(&m3)?;
    let coords = |v: Vec<Poly>| {
        k3.generators
            .lattice_coordinates(&v)
            .ok_or_else(|| Error::Consistency("K1 (x) F2 + F1 (x) K2 is not contained in K3".into()))
    };
    let mut left = Vec::new();
    for j in 0..k1.generators.cols() {
        let k = k1.generators.column(j);
        let per_b = (0..r2)
            .map(|bb| {
                let v: Vec<Poly> =
                    (0..r1 * r2).map(|idx| if idx % r2 == bb { k[idx / r2].clone() } else { Poly::zero(field) }).collect();
                coords(v)
            })
            .collect::<Result<Vec<_>>>()?;
        left.push(per_b);
    }
    let mut right = Vec::new();
    for j in 0..k2.generators.cols() {
        let k = k2.generators.column(j);
        let per_a = (0..r1)
            .map(|a| {
                let v: Vec<Poly> =
                    (0..r1 * r2).map(|idx| if idx / r2 == a { k[idx % r2].clone() } else { Poly::zero(field) }).collect();
                coords(v)
            })
            .collect::<Result<Vec<_>>>()?;
        right.push(per_a);
    }
    Ok(BilinKernels { k1, k2, k3, m3, left, right })
}

/// Residual vectors of the two compatibility equations
/// `phi3(k1 (x) e_b) = Pihat(phi1(k1) (x) h_b)` and
/// `phi3(e_a (x) k2) = Pihat(g_a (x) phi2(k2))` over all generators.
pub fn hom_triple_residuals(b: &BilinPoint, kernels: &BilinKernels, t: &HomTriple) -> Vec<Vec<Scalar>> {
    let field = b.field();
    let z = &b.z[0];
    let phi3_at = |coords: &[Poly]| {
        let mut acc = vec![field.zero(); b.d3];
        for (l, c) in coords.iter().enumerate() {
            let w = c.eval_matrix(z).mul_vec(&t.phi3.column(l));
            for (s, x) in acc.iter_mut().zip(&w) {
                *s = &*s + x;
            }
        }
        acc
    };
    let sub = |a: Vec<Scalar>, c: Vec<Scalar>| a.iter().zip(&c).map(|(x, y)| x - y).collect::<Vec<_>>();
    let mut out = Vec::new();
    for (j, per_b) in kernels.left.iter().enumerate() {
        let phi = t.phi1.column(j);
        for (bb, coords) in per_b.iter().enumerate() {
            let lhs = phi3_at(coords);
            let v = Matrix::column_vector(field, &phi).kron(&Matrix::column_vector(field, &b.m2.framing().column(bb)));
            out.push(sub(lhs, b.pihat.mul_vec(&v.column(0))));
        }
    }
    for (j, per_a) in kernels.right.iter().enumerate() {
        let phi = t.phi2.column(j);
        for (a, coords) in per_a.iter().enumerate() {
            let lhs = phi3_at(coords);
            let v = Matrix::column_vector(field, &b.m1.framing().column(a)).kron(&Matrix::column_vector(field, &phi));
            out.push(sub(lhs, b.pihat.mul_vec(&v.column(0))));
        }
    }
    out
}

/// Verifies the compatibility equations for a triple of maps on kernel generators
/// (generators as returned by [`bilin_kernels`]).
pub fn hom_triple_check(b: &BilinPoint, t: &HomTriple) -> Result<bool> {
    let kernels = bilin_kernels(b)?;
    let shapes = [
        (&t.phi1, b.m1.d(), kernels.k1.generators.cols()),
        (&t.phi2, b.m2.d(), kernels.k2.generators.cols()),
        (&t.phi3, b.d3, kernels.k3.generators.cols()),
    ];
    for (phi, rows, cols) in shapes {
        if phi.rows() != rows || phi.cols() != cols {
            return Err(Error::Shape(format!("map has shape {}x{}, expected {rows}x{cols}", phi.rows(), phi.cols())));
        }
    }
    Ok(hom_triple_residuals(b, &kernels, t).iter().all(|v| v.iter().all(Scalar::is_zero)))
}

/// Hom-triple of a tangent vector: each module's first-order deformation
/// translated to a map on its kernel generators. `M3` deforms with `Zdot` and
/// the derivative of the induced framing.
pub fn tangent_to_hom_triple(b: &BilinPoint, kernels: &BilinKernels, v: &BilinTangentVector) -> HomTriple {
    let gh = b.m1.framing().kron(b.m2.framing());
    let f3dot = &(&(&v.pihatdot * &gh) + &(&b.pihat * &v.gdot.kron(b.m2.framing())))
        + &(&b.pihat * &b.m1.framing().kron(&v.hdot));
    let q1 = QuotTangentVector { xdot: v.xdot.clone(), gdot: v.gdot.clone() };
    let q2 = QuotTangentVector { xdot: v.ydot.clone(), gdot: v.hdot.clone() };
    let q3 = QuotTangentVector { xdot: v.zdot.clone(), gdot: f3dot };
    HomTriple {
        phi1: tangent_to_hom(&b.m1, &kernels.k1, &q1),
        phi2: tangent_to_hom(&b.m2, &kernels.k2, &q2),
        phi3: tangent_to_hom(&kernels.m3, &kernels.k3, &q3),
    }
}

/// Dimension of the space of compatible Hom-triples, computed directly on the
/// Hom side.
pub fn hom_triple_space_dim(b: &BilinPoint) -> Result<usize> {
    let kernels = bilin_kernels(b)?;
    let field = b.field();
    let (h1, n1) = hom_space(&b.m1, &kernels.k1)?;
    let (h2, n2) = hom_space(&b.m2, &kernels.k2)?;
    let (h3, n3) = hom_space(&kernels.m3, &kernels.k3)?;
    let combine = |basis: &[Matrix], c: &Matrix, shape: (usize, usize)| {
        basis
            .iter()
            .enumerate()
            .fold(Matrix::zeros(field, shape.0, shape.1), |acc, (i, m)| &acc + &m.scale(c.get(i, 0)))
    };
    let s = |k: &KernelPresentation| k.generators.cols();
    let layout = Layout::new(field, &[(n1, 1), (n2, 1), (n3, 1)]);
    let system = layout.operator_matrix(|blk| {
        let t = HomTriple {
            phi1: combine(&h1, &blk[0], (b.m1.d(), s(&kernels.k1))),
            phi2: combine(&h2, &blk[1], (b.m2.d(), s(&kernels.k2))),
            phi3: combine(&h3, &blk[2], (b.d3, s(&kernels.k3))),
        };
        hom_triple_residuals(b, &kernels, &t).iter().map(|v| Matrix::column_vector(field, v)).collect()
    });
    Ok(kernel_modulo(field, layout.len(), &system, &[]).nullity)
}

/// Point of the main component: `M1 = M2 = M3 = S/I` for distinct points, with
/// `Pihat` the componentwise product in the diagonal basis.
pub fn main_component_point(points: &[Vec<Scalar>], g1: Matrix, g2: Matrix) -> Result<BilinPoint> {
    let m1 = make_tuple_of_points(points, g1)?;
    let m2 = make_tuple_of_points(points, g2)?;
    let d = points.len();
    let field = m1.field();
    let pihat =
        Matrix::from_fn(field, d, d * d, |k, c| if c / d == k && c % d == k { field.one() } else { field.zero() });
    let z = m1.actions().to_vec();
    let b = BilinPoint::new(m1, m2, z, pihat)?;
    require_valid(&b)?;
    Ok(b)
}

/// Totally degenerate point: all actions zero, framings `a1`, `a2`, `Pihat = pi`.
pub fn degenerate_point(n: usize, a1: Matrix, a2: Matrix, pi: Matrix) -> Result<BilinPoint> {
    let d = a1.rows();
    let field = a1.field();
    if a2.rows() != d || pi.rows() != d || pi.cols() != d * d {
        return Err(Error::Shape(format!("expected d = {d} throughout and Pi of shape {d}x{}", d * d)));
    }
    for (name, m) in [("A1", &a1), ("A2", &a2), ("Pi", &pi)] {
        let rank = m.rank();
        if rank < d {
            return Err(Error::InvalidArgument(format!("{name} has rank {rank} < {d}")));
        }
    }
    let zeros = vec![Matrix::zeros(field, d, d); n];
    let m1 = FramedModule::new(zeros.clone(), a1)?;
    let m2 = FramedModule::new(zeros.clone(), a2)?;
    BilinPoint::new(m1, m2, zeros, pi)
}

/// Dimension counts and reducibility predicates for `d1 = d2 = d3 = d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub n: usize,
    pub d: usize,
    pub r1: usize,
    pub r2: usize,
    pub main_dim: usize,
    pub degenerate_dim: Option<usize>,
    pub reducible_by_count: bool,
    pub reducible_by_secant: bool,
    pub irreducible: bool,
    pub reasons: Vec<String>,
}

pub fn bilin_dims(n: usize, d: usize, r1: usize, r2: usize) -> Result<DimensionReport> {
    if n == 0 || d == 0 || r1 == 0 || r2 == 0 {
        return Err(Error::InvalidArgument(format!("need n, d, r1, r2 >= 1, got ({n}, {d}, {r1}, {r2})")));
    }
    let main_dim = n * d + (r1 - 1) * d + (r2 - 1) * d;
    let wide = r1 >= d && r2 >= d;
    let degenerate_dim = wide.then(|| (r1 - d) * d + (r2 - d) * d + (d * d - d) * d);
    let threshold = (d * d + 2).saturating_sub(3 * d);
    let reducible_by_count = wide && n < threshold;
    let reducible_by_secant = wide && d >= 3;
    let irreducible = d <= 2;
    let mut reasons = Vec::new();
    match degenerate_dim {
        Some(dd) => reasons.push(format!("degenerate locus dimension {dd} vs main component {main_dim}")),
        None => reasons.push("degenerate locus undefined: some r_i < d".into()),
    }
    if reducible_by_count {
        reasons.push(format!("n = {n} < d^2 - 3d + 2 = {threshold}"));
    }
    if reducible_by_secant {
        reasons.push(format!("d = {d} >= 3: concise tensors of minimal border rank do not fill the ambient space"));
    }
    if irreducible {
        reasons.push(format!("d = {d} <= 2: every tensor has border rank <= d"));
    }
    Ok(DimensionReport { n, d, r1, r2, main_dim, degenerate_dim, reducible_by_count, reducible_by_secant, irreducible, reasons })
}
