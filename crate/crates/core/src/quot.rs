//! Points of the Quot scheme of points: tangent spaces (first-order
//! deformations of the framed matrices modulo gauge, and the univariate
//! `Hom(K, M)` oracle), dimension formulas, the degenerate locus and its
//! Grassmannian count, and degenerations of length-2 quotients.

use std::collections::HashSet;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{charpoly, gaussian_binomial, hermite_kernel, Field, Matrix, ParamMatrix, Poly, PolyMatrix, Scalar};
use crate::linsys::{kernel_modulo, Layout};
use crate::modcore::{make_degenerate, validate_framed, FramedModule};

/// First-order deformation `(X + eps Xdot, G + eps Gdot)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotTangentVector {
    #[serde(rename = "Xdot")]
    pub xdot: Vec<Matrix>,
    #[serde(rename = "Gdot")]
    pub gdot: Matrix,
}

impl QuotTangentVector {
    /// Residual of the first-order commutation identity for the pair `(i, j)`.
    pub fn commutation_residual(&self, p: &FramedModule, i: usize, j: usize) -> Matrix {
        first_order_commutator(p.action(i), &self.xdot[i], p.action(j), &self.xdot[j])
    }

    pub fn satisfies_commutation(&self, p: &FramedModule) -> bool {
        (0..p.n()).all(|i| (i + 1..p.n()).all(|j| self.commutation_residual(p, i, j).is_zero()))
    }
}

/// `Xdot_i X_j + X_i Xdot_j - Xdot_j X_i - X_j Xdot_i`.
pub(crate) fn first_order_commutator(xi: &Matrix, dxi: &Matrix, xj: &Matrix, dxj: &Matrix) -> Matrix {
    &(&(&(dxi * xj) + &(xi * dxj)) - &(dxj * xi)) - &(xj * dxi)
}

/// Tangent space at a Quot point.
#[derive(Clone, Debug, Serialize)]
pub struct QuotTangentReport {
    pub dim: usize,
    pub nullity: usize,
    pub gauge: usize,
    pub basis: Vec<QuotTangentVector>,
}

fn require_valid(p: &FramedModule) -> Result<()> {
    let report = validate_framed(p);
    if !report.commuting {
        let (i, j) = report.commutator_witness.unwrap();
        return Err(Error::InvalidModule(format!("X_{i} and X_{j} do not commute")));
    }
    if !report.generating {
        return Err(Error::InvalidModule(format!(
            "framing generates a subspace of dimension {} < {}",
            report.krylov_dim,
            p.d()
        )));
    }
    Ok(())
}

fn quot_layout(p: &FramedModule) -> Layout {
    let (n, d, r) = (p.n(), p.d(), p.r());
    let mut shapes = vec![(d, d); n];
    shapes.push((d, r));
    Layout::new(p.field(), &shapes)
}

/// Tangent vector induced by an infinitesimal basis change `delta`.
pub fn quot_gauge_vector(p: &FramedModule, delta: &Matrix) -> QuotTangentVector {
    QuotTangentVector { xdot: p.actions().iter().map(|x| delta.commutator(x)).collect(), gdot: delta * p.framing() }
}

/// Tangent space as solutions of the linearized commutation equations modulo
/// the gauge directions `([Delta, X_i], Delta G)`.
pub fn quot_tangent(p: &FramedModule) -> Result<QuotTangentReport> {
    require_valid(p)?;
    let (n, d) = (p.n(), p.d());
    let field = p.field();
    let layout = quot_layout(p);
    let system = layout.operator_matrix(|b| {
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                out.push(first_order_commutator(p.action(i), &b[i], p.action(j), &b[j]));
            }
        }
        out
    });
    let gauge: Vec<Vec<Scalar>> = elementary_matrices(field, d)
        .map(|delta| {
            let v = quot_gauge_vector(p, &delta);
            let mut blocks = v.xdot;
            blocks.push(v.gdot);
            layout.pack(&blocks)
        })
        .collect();
    let sol = kernel_modulo(field, layout.len(), &system, &gauge);
    if sol.gauge_rank != d * d {
        return Err(Error::Consistency(format!("gauge map has rank {} < {}", sol.gauge_rank, d * d)));
    }
    let basis = sol
        .representatives
        .iter()
        .map(|v| {
            let mut blocks = layout.unpack(v);
            let gdot = blocks.pop().unwrap();
            QuotTangentVector { xdot: blocks, gdot }
        })
        .collect();
    Ok(QuotTangentReport { dim: sol.nullity - d * d, nullity: sol.nullity, gauge: d * d, basis })
}

pub(crate) fn elementary_matrices(field: Field, d: usize) -> impl Iterator<Item = Matrix> {
    (0..d * d).map(move |e| {
        let mut m = Matrix::zeros(field, d, d);
        m.set(e / d, e % d, field.one());
        m
    })
}

/// Generators of `K = ker(k[x]^r -> M)` for a univariate framed module.
#[derive(Clone, Debug)]
pub struct KernelPresentation {
    /// `r x s` matrix over `k[x]`; its columns form a basis of `K`.
    pub generators: PolyMatrix,
    /// `dim_k k[x]^r / K`.
    pub colength: usize,
}

/// `K` as the projection to the first `r` coordinates of `ker [G | X - x I]`.
pub fn kernel_presentation(p: &FramedModule) -> Result<KernelPresentation> {
    if p.n() != 1 {
        return Err(Error::NotUnivariate(p.n()));
    }
    require_valid(p)?;
    let (d, r) = (p.d(), p.r());
    let field = p.field();
    let x = p.action(0);
    let pres = PolyMatrix::from_fn(field, d, r + d, |i, j| {
        if j < r {
            Poly::constant(p.framing().get(i, j).clone())
        } else {
            let c = j - r;
            let mut entry = Poly::constant(x.get(i, c).clone());
            if i == c {
                entry = &entry - &Poly::x(field);
            }
            entry
        }
    });
    let ker = hermite_kernel(&pres, Some(d + 1))?;
    let rows: Vec<usize> = (0..r).collect();
    let generators = ker.basis.select_rows(&rows);
    let colength = lattice_colength(&generators)?;
    if colength != d {
        return Err(Error::Consistency(format!("kernel has colength {colength}, expected {d}")));
    }
    Ok(KernelPresentation { generators, colength })
}

/// `deg det` of a square full-rank polynomial matrix, read off its column echelon form.
fn lattice_colength(k: &PolyMatrix) -> Result<usize> {
    if k.rows() != k.cols() {
        return Err(Error::Consistency(format!("kernel has {} generators in rank {}", k.cols(), k.rows())));
    }
    let (h, _, pivots) = k.column_echelon();
    if pivots.len() != k.rows() {
        return Err(Error::Consistency("kernel is not of full rank".into()));
    }
    Ok(pivots.iter().enumerate().map(|(t, &row)| h.get(row, t).degree().unwrap()).sum())
}

/// `Df(X)[Xdot]`, the derivative of `X -> f(X)` in direction `Xdot`.
pub fn poly_directional_derivative(f: &Poly, x: &Matrix, xdot: &Matrix) -> Matrix {
    let field = x.field();
    let d = x.rows();
    // Horner: f = c_0 + X (c_1 + X (...)), so D(X A) = Xdot A + X DA.
    let mut value = Matrix::zeros(field, d, d);
    let mut deriv = Matrix::zeros(field, d, d);
    for c in f.coeffs().iter().rev() {
        deriv = &(xdot * &value) + &(x * &deriv);
        value = &(x * &value) + &Matrix::identity(field, d).scale(c);
    }
    deriv
}

/// Maps `K -> M` for a univariate module, recorded by their values on the
/// kernel generators (columns of a `d x s` matrix).
#[derive(Clone, Debug, Serialize)]
pub struct HomReport {
    pub dim: usize,
    #[serde(skip)]
    pub kernel: Option<KernelPresentation>,
    pub basis: Vec<Matrix>,
}

/// `Hom_S(K, M)` computed directly: values on the generators of `K` subject to
/// the `k[x]`-linear relations among them.
pub fn hom_km_univariate(p: &FramedModule) -> Result<HomReport> {
    let kp = kernel_presentation(p)?;
    let (basis, dim) = hom_space(p, &kp)?;
    Ok(HomReport { dim, kernel: Some(kp), basis })
}

pub(crate) fn hom_space(p: &FramedModule, kp: &KernelPresentation) -> Result<(Vec<Matrix>, usize)> {
    let field = p.field();
    let d = p.d();
    let s = kp.generators.cols();
    let x = p.action(0);
    let syz = hermite_kernel(&kp.generators, None)?.basis;
    let layout = Layout::new(field, &[(d, s)]);
    let system = layout.operator_matrix(|b| {
        let phi = &b[0];
        (0..syz.cols())
            .map(|c| {
                let mut acc = Matrix::zeros(field, d, 1);
                for j in 0..s {
                    let col = Matrix::column_vector(field, &phi.column(j));
                    acc = &acc + &(&syz.get(j, c).eval_matrix(x) * &col);
                }
                acc
            })
            .collect()
    });
    let sol = kernel_modulo(field, layout.len(), &system, &[]);
    let basis: Vec<Matrix> = sol.representatives.iter().map(|v| layout.unpack(v).remove(0)).collect();
    let dim = basis.len();
    Ok((basis, dim))
}

/// Image in `Hom(K, M)` of a tangent vector, as values on the kernel
/// generators: `phi(k) = -sum_a [f_a(X) gdot_a + Df_a(X)[Xdot] g_a]` for `k = (f_a)`.
pub fn tangent_to_hom(p: &FramedModule, kp: &KernelPresentation, v: &QuotTangentVector) -> Matrix {
    let field = p.field();
    let (d, r) = (p.d(), p.r());
    let x = p.action(0);
    let columns: Vec<Vec<Scalar>> = (0..kp.generators.cols())
        .map(|j| {
            let mut acc = vec![field.zero(); d];
            for a in 0..r {
                let f = kp.generators.get(a, j);
                let t1 = f.eval_matrix(x).mul_vec(&v.gdot.column(a));
                let t2 = poly_directional_derivative(f, x, &v.xdot[0]).mul_vec(&p.framing().column(a));
                for (slot, (u, w)) in acc.iter_mut().zip(t1.iter().zip(&t2)) {
                    *slot = &*slot - &(u + w);
                }
            }
            acc
        })
        .collect();
    Matrix::from_columns(field, d, &columns)
}

/// Dimension formulas for `Quot_d^r(A^n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotDims {
    pub n: usize,
    pub d: usize,
    pub r: usize,
    /// Dimension of the component of tuples of points: `nd + (r-1)d`.
    pub principal_dim: usize,
    /// Dimension of the locus `(S/m)^d` over a fixed point: `(r-d)d`; `None` when `r < d`.
    pub degenerate_dim: Option<usize>,
    /// Whether the degenerate loci alone exceed the principal dimension: `n < 1 - d`.
    pub reducible_by_count: bool,
}

pub fn quot_dims(n: usize, d: usize, r: usize) -> Result<QuotDims> {
    if n == 0 || d == 0 || r == 0 {
        return Err(Error::InvalidArgument(format!("need n, d, r >= 1, got ({n}, {d}, {r})")));
    }
    Ok(QuotDims {
        n,
        d,
        r,
        principal_dim: n * d + (r - 1) * d,
        degenerate_dim: (r >= d).then(|| (r - d) * d),
        reducible_by_count: (n as i64) < 1 - d as i64,
    })
}

/// Exhaustive comparison of the degenerate locus over `F_q` with the Gaussian binomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrassmannianReport {
    pub d: usize,
    pub r: usize,
    pub q: u64,
    /// Number of `d x r` matrices scanned.
    pub matrices: u128,
    /// Those of rank `d`.
    pub full_rank: u128,
    /// Distinct points (framings up to `GL_d`).
    pub points: u128,
    #[serde(serialize_with = "ser_biguint")]
    pub gaussian_binomial: BigUint,
    pub matches: bool,
}

fn ser_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Enumerates every rank-`d` framing `A` of `(S/m)^d` over `F_q` and counts the
/// distinct quotients, keyed by normal form.
pub fn degenerate_grassmannian_check(d: usize, r: usize, q: u64, cap: u128) -> Result<GrassmannianReport> {
    if r < d || d == 0 {
        return Err(Error::InvalidArgument(format!("need 1 <= d <= r, got d = {d}, r = {r}")));
    }
    let field = Field::prime(q)?;
    let cells = (d * r) as u32;
    let needed = (q as u128).checked_pow(cells).unwrap_or(u128::MAX);
    if needed > cap {
        return Err(Error::CapExceeded { needed, cap });
    }
    let elements = field.elements().expect("finite field");
    let mut keys = HashSet::new();
    let mut full_rank = 0u128;
    for code in 0..needed {
        let mut c = code;
        let entries: Vec<Scalar> = (0..d * r)
            .map(|_| {
                let e = elements[(c % q as u128) as usize].clone();
                c /= q as u128;
                e
            })
            .collect();
        let a = Matrix::new(field, d, r, entries)?;
        if a.rank() < d {
            continue;
        }
        full_rank += 1;
        let nf = make_degenerate(1, a)?.normal_form()?;
        keys.insert(nf);
    }
    let gb = gaussian_binomial(d as u32, r as u32, q)?;
    let points = keys.len() as u128;
    Ok(GrassmannianReport {
        d,
        r,
        q,
        matrices: needed,
        full_rank,
        points,
        matches: BigUint::from(points) == gb,
        gaussian_binomial: gb,
    })
}

/// Which construction [`quot2_limit_family`] used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LimitBranch {
    /// Already two distinct points.
    DistinctSupport,
    /// `m M = 0`: the single point splits along the first coordinate.
    Reduced,
    /// `m^2 M = 0`, `m M != 0`: the nilpotent part is deformed to `x^2 = t x`.
    Curvilinear,
}

/// One-parameter family of framed modules `(X(t), G(t))`.
#[derive(Clone, Debug)]
pub struct LimitFamily {
    pub branch: LimitBranch,
    pub x: Vec<ParamMatrix>,
    pub g: ParamMatrix,
}

impl LimitFamily {
    pub fn at(&self, t: &Scalar) -> Result<FramedModule> {
        FramedModule::new(self.x.iter().map(|x| x.evaluate(t)).collect(), self.g.evaluate(t))
    }
}

/// Family through a length-2 point whose general member is a pair of distinct points.
pub fn quot2_limit_family(p: &FramedModule) -> Result<LimitFamily> {
    if p.d() != 2 {
        return Err(Error::InvalidArgument(format!("limit families need d = 2, got {}", p.d())));
    }
    require_valid(p)?;
    let field = p.field();
    let n = p.n();
    let id = Matrix::identity(field, 2);
    let constant = |m: &Matrix| ParamMatrix::from_matrix(m);
    let mut centre = Vec::with_capacity(n);
    let mut distinct = false;
    for x in p.actions() {
        let (roots, split) = charpoly(x).roots();
        if !split {
            return Err(Error::NonSplit);
        }
        if roots.len() > 1 {
            distinct = true;
        }
        centre.push(roots[0].0.clone());
    }
    if distinct {
        return Ok(LimitFamily {
            branch: LimitBranch::DistinctSupport,
            x: p.actions().iter().map(constant).collect(),
            g: constant(p.framing()),
        });
    }
    let nilpotent: Vec<Matrix> = p.actions().iter().zip(&centre).map(|(x, c)| x - &id.scale(c)).collect();
    let Some(lead) = nilpotent.iter().position(|m| !m.is_zero()) else {
        let mut e22 = Matrix::zeros(field, 2, 2);
        e22.set(1, 1, field.one());
        let mut x: Vec<ParamMatrix> = p.actions().iter().map(constant).collect();
        x[0] = ParamMatrix::from_coefficients(&[p.action(0).clone(), e22]);
        return Ok(LimitFamily { branch: LimitBranch::Reduced, x, g: constant(p.framing()) });
    };
    let nl = &nilpotent[lead];
    let gcol = (0..p.r())
        .map(|a| p.framing().column(a))
        .find(|v| nl.mul_vec(v).iter().any(|c| !c.is_zero()))
        .ok_or_else(|| Error::Consistency("nilpotent part kills the framing".into()))?;
    let ng = nl.mul_vec(&gcol);
    let b = Matrix::from_columns(field, 2, &[gcol.clone(), ng.clone()]);
    let binv = b.inverse().ok_or_else(|| Error::Consistency("{g, N g} is not a basis".into()))?;
    let mut e22 = Matrix::zeros(field, 2, 2);
    e22.set(1, 1, field.one());
    let e = &(&b * &e22) * &binv;
    let pos = ng.iter().position(|c| !c.is_zero()).unwrap();
    let mut x = Vec::with_capacity(n);
    for (xi, ni) in p.actions().iter().zip(&nilpotent) {
        // N_i = lambda_i N, read off on g
        let lambda = ni.mul_vec(&gcol)[pos].div(&ng[pos])?;
        if *ni != nl.scale(&lambda) {
            return Err(Error::Consistency("nilpotent parts are not proportional".into()));
        }
        x.push(ParamMatrix::from_coefficients(&[xi.clone(), e.scale(&lambda)]));
    }
    Ok(LimitFamily { branch: LimitBranch::Curvilinear, x, g: constant(p.framing()) })
}
