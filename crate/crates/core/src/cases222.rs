//! Points of the bilinear scheme with `n = 1`, `d1 = d2 = d3 = 2`, `r1 = r2 = 2`:
//! named tensors and their degenerations, classification of points by module
//! types, and exhaustive enumeration over small prime fields.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::bilin::{validate_bilin, BilinPoint};
use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix, ParamTensor, Poly, Scalar};
use crate::modcore::{annihilator_algebra_dim, support_univariate, tensor_over_s, FramedModule};
use crate::tensorlab::{classify_2x2x2, tensor_from_bilin, Classification222, OrbitLabel, Tensor3};

/// A named tensor: fixed, or a family in `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Named {
    Fixed(Tensor3),
    Family(ParamTensor),
}

pub const NAMES: [&str; 8] = ["mu1", "mu2", "mu3", "mu4", "mu2_t", "mu3_t", "mu4_t", "pi5_sample"];

const MU1: &[(usize, usize, usize)] = &[(0, 0, 0), (1, 1, 1)];
const MU2: &[(usize, usize, usize)] = &[(0, 0, 0), (0, 1, 1), (1, 0, 1)];
const MU3: &[(usize, usize, usize)] = &[(0, 0, 0), (0, 1, 1)];
const MU4: &[(usize, usize, usize)] = &[(0, 0, 0), (1, 0, 1)];

fn fixed(field: Field, terms: &[(usize, usize, usize)]) -> Tensor3 {
    let t: Vec<_> = terms.iter().map(|&(i, j, k)| (i, j, k, 1)).collect();
    Tensor3::from_terms(field, [2, 2, 2], &t)
}

/// `base + t e_2 (x) e_2 (x) e_2`.
fn family(field: Field, base: &[(usize, usize, usize)]) -> ParamTensor {
    let mut f = ParamTensor::constant(&fixed(field, base));
    f.set(1, 1, 1, Poly::x(field));
    f
}

/// Coefficient arrays of the named tensors; index `(i, j, k)` is the
/// coefficient of `e_i* (x) e_j* (x) e_k`.
pub fn named_tensor(field: Field, name: &str) -> Result<Named> {
    Ok(match name {
        "mu1" => Named::Fixed(fixed(field, MU1)),
        "mu2" => Named::Fixed(fixed(field, MU2)),
        "mu3" => Named::Fixed(fixed(field, MU3)),
        "mu4" => Named::Fixed(fixed(field, MU4)),
        "mu2_t" => Named::Family(family(field, MU2)),
        "mu3_t" => Named::Family(family(field, MU3)),
        "mu4_t" => Named::Family(family(field, MU4)),
        "pi5_sample" => Named::Fixed(tensor_from_bilin(&pi5_point(field)?)),
        other => return Err(Error::InvalidArgument(format!("unknown tensor name {other:?}; known: {NAMES:?}"))),
    })
}

/// Totally degenerate point with `Pihat = [[1,0,0,0],[0,1,1,0]]`.
pub fn pi5_point(field: Field) -> Result<BilinPoint> {
    let pi = Matrix::from_i64(field, &[&[1, 0, 0, 0], &[0, 1, 1, 0]]);
    crate::bilin::degenerate_point(1, Matrix::identity(field, 2), Matrix::identity(field, 2), pi)
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitSample {
    pub t: Scalar,
    pub class: Classification222,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    /// `F(0)` equals the target coefficientwise.
    pub limit_matches: bool,
    pub limit_class: Classification222,
    pub samples: Vec<LimitSample>,
    /// Every sample is concise of rank 2.
    pub samples_generic: bool,
    /// Every sample classifies like the limit.
    pub constant_class: bool,
    /// The samples are generic while the limit is not: a degeneration witnessing border rank 2.
    pub degenerates: bool,
}

pub fn verify_limit(f: &ParamTensor, target: &Tensor3, samples: &[Scalar]) -> Result<LimitReport> {
    let at0 = f.evaluate(&f.field().zero());
    let limit_class = classify_2x2x2(&at0)?;
    let samples = samples
        .iter()
        .map(|t| {
            if t.is_zero() {
                return Err(Error::InvalidArgument("samples must be nonzero".into()));
            }
            Ok(LimitSample { t: t.clone(), class: classify_2x2x2(&f.evaluate(t))? })
        })
        .collect::<Result<Vec<_>>>()?;
    let samples_generic = samples.iter().all(|s| s.class.label == OrbitLabel::Generic);
    let constant_class = samples.iter().all(|s| s.class == limit_class);
    Ok(LimitReport {
        limit_matches: &at0 == target,
        degenerates: samples_generic && limit_class.label != OrbitLabel::Generic,
        limit_class,
        samples,
        samples_generic,
        constant_class,
    })
}

/// Isomorphism type of a length-2 module over `k[x]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ModuleType {
    /// `S/((x - c1)(x - c2))`, `c1 != c2`.
    Split(Scalar, Scalar),
    /// `S/(x - c)^2`.
    Curvilinear(Scalar),
    /// `(S/(x - c))^2`.
    Double(Scalar),
}

impl ModuleType {
    fn support(&self) -> Vec<Scalar> {
        match self {
            ModuleType::Split(a, b) => vec![a.clone(), b.clone()],
            ModuleType::Curvilinear(c) | ModuleType::Double(c) => vec![c.clone()],
        }
    }
}

pub fn module_type(m: &FramedModule) -> Result<ModuleType> {
    if m.d() != 2 {
        return Err(Error::InvalidArgument(format!("expected d = 2, got {}", m.d())));
    }
    let s = support_univariate(m)?;
    if !s.split {
        return Err(Error::NonSplit);
    }
    Ok(match s.points.as_slice() {
        [(a, _), (b, _)] => ModuleType::Split(a.clone(), b.clone()),
        [(c, _)] if annihilator_algebra_dim(m) == 2 => ModuleType::Curvilinear(c.clone()),
        [(c, _)] => ModuleType::Double(c.clone()),
        _ => unreachable!("a length-2 module has one or two support points"),
    })
}

/// Case of a point, by the isomorphism types of `(M1, M2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CaseLabel {
    /// Both two distinct points.
    MainSplit,
    /// Both `S/(x - c)^2`.
    CyclicNilpotent,
    /// `(S/(x - c)^2, (S/(x - c))^2)`.
    Mixed12,
    /// `((S/(x - c))^2, S/(x - c)^2)`.
    Mixed21,
    /// `(two points, (S/(x - c))^2)`.
    SplitDegenerate12,
    /// `((S/(x - c))^2, two points)`.
    SplitDegenerate21,
    /// Both `(S/(x - c))^2`.
    TotallyDegenerate,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 7] = [
        CaseLabel::MainSplit,
        CaseLabel::CyclicNilpotent,
        CaseLabel::Mixed12,
        CaseLabel::Mixed21,
        CaseLabel::SplitDegenerate12,
        CaseLabel::SplitDegenerate21,
        CaseLabel::TotallyDegenerate,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CaseLabel::MainSplit => "MAIN_SPLIT",
            CaseLabel::CyclicNilpotent => "CYCLIC_NILPOTENT",
            CaseLabel::Mixed12 => "MIXED_12",
            CaseLabel::Mixed21 => "MIXED_21",
            CaseLabel::SplitDegenerate12 => "SPLIT_DEGENERATE_12",
            CaseLabel::SplitDegenerate21 => "SPLIT_DEGENERATE_21",
            CaseLabel::TotallyDegenerate => "TOTALLY_DEGENERATE",
        }
    }
}

/// Classification of one point together with the checks its case forces.
#[derive(Clone, Debug, Serialize)]
pub struct PointCase {
    pub label: CaseLabel,
    pub tensor: Classification222,
    pub m1: ModuleType,
    pub m2: ModuleType,
    pub m3: ModuleType,
    /// Failed forced consequences (empty when all hold).
    pub violations: Vec<String>,
}

pub fn classify_point_222(b: &BilinPoint) -> Result<PointCase> {
    if b.n() != 1 || b.m1().d() != 2 || b.m2().d() != 2 || b.d3() != 2 || b.m1().r() != 2 || b.m2().r() != 2 {
        return Err(Error::InvalidArgument("expected n = 1, all dimensions 2, r1 = r2 = 2".into()));
    }
    let v = validate_bilin(b);
    if !v.is_valid() {
        return Err(Error::InvalidPoint(crate::bilin::describe_failure(&v)));
    }
    let t1 = module_type(b.m1())?;
    let t2 = module_type(b.m2())?;
    let t3 = module_type(&b.m3()?)?;
    let tensor = classify_2x2x2(&tensor_from_bilin(b))?;
    use ModuleType::*;
    let label = match (&t1, &t2) {
        (Split(..), Split(..)) => CaseLabel::MainSplit,
        (Curvilinear(_), Curvilinear(_)) => CaseLabel::CyclicNilpotent,
        (Curvilinear(_), Double(_)) => CaseLabel::Mixed12,
        (Double(_), Curvilinear(_)) => CaseLabel::Mixed21,
        (Split(..), Double(_)) => CaseLabel::SplitDegenerate12,
        (Double(_), Split(..)) => CaseLabel::SplitDegenerate21,
        (Double(_), Double(_)) => CaseLabel::TotallyDegenerate,
        _ => {
            return Err(Error::Consistency(format!(
                "module types {t1:?} and {t2:?} admit no length-2 quotient of their tensor product"
            )))
        }
    };
    let mut violations = Vec::new();
    let mut need = |ok: bool, what: &str| {
        if !ok {
            violations.push(what.to_string());
        }
    };
    need(tensor.border_rank <= 2, "border rank exceeds 2");
    need(tensor.concise[2], "tensor not concise on the third factor");
    let same_support = |a: &ModuleType, b: &ModuleType| {
        let (mut x, mut y) = (a.support(), b.support());
        x.sort_by_key(Scalar::to_text);
        y.sort_by_key(Scalar::to_text);
        x == y
    };
    let within = |a: &ModuleType, b: &ModuleType| a.support().iter().all(|c| b.support().contains(c));
    match label {
        CaseLabel::MainSplit => {
            need(same_support(&t1, &t2) && same_support(&t1, &t3), "supports of M1, M2, M3 differ");
            need(matches!(t3, Split(..)), "M3 is not two points");
            need(tensor.label == OrbitLabel::Generic, "tensor is not the unit orbit");
        }
        CaseLabel::CyclicNilpotent => {
            need(same_support(&t1, &t2) && same_support(&t1, &t3), "supports of M1, M2, M3 differ");
            need(matches!(t3, Curvilinear(_)), "M3 is not S/(x - c)^2");
            need(tensor.label == OrbitLabel::WType, "tensor is not W-type");
        }
        CaseLabel::Mixed12 | CaseLabel::SplitDegenerate12 => {
            need(matches!(t3, Double(_)) && within(&t2, &t1) && same_support(&t2, &t3), "M3 is not (S/m)^2 at the common point");
            need(tensor.label == OrbitLabel::NonConcise(0), "tensor is concise on the first factor");
        }
        CaseLabel::Mixed21 | CaseLabel::SplitDegenerate21 => {
            need(matches!(t3, Double(_)) && within(&t1, &t2) && same_support(&t1, &t3), "M3 is not (S/m)^2 at the common point");
            need(tensor.label == OrbitLabel::NonConcise(1), "tensor is concise on the second factor");
        }
        CaseLabel::TotallyDegenerate => {
            need(matches!(t3, Double(_)) && same_support(&t1, &t2) && same_support(&t1, &t3), "M3 is not (S/m)^2 at the common point");
        }
    }
    Ok(PointCase { label, tensor, m1: t1, m2: t2, m3: t3, violations })
}

/// All framed modules with `n = 1`, `d = r = 2` over `F_q`, one per quotient
/// (normal forms), in a fixed order.
pub fn quot_points_122(field: Field) -> Result<Vec<FramedModule>> {
    let elements = field.elements().ok_or_else(|| Error::InvalidField("enumeration needs a finite field".into()))?;
    let q = elements.len();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for code in 0..q.pow(8) {
        let mut c = code;
        let mut digit = || {
            let e = elements[c % q].clone();
            c /= q;
            e
        };
        let x = Matrix::new(field, 2, 2, (0..4).map(|_| digit()).collect())?;
        let g = Matrix::new(field, 2, 2, (0..4).map(|_| digit()).collect())?;
        let m = FramedModule::new(vec![x], g)?;
        let Ok(nf) = m.normal_form() else { continue };
        if seen.insert(nf.clone()) {
            out.push(nf);
        }
    }
    Ok(out)
}

/// Rank-2 matrices `2 x dim` in reduced row echelon form over the field.
fn rref_2_rows(field: Field, dim: usize) -> Vec<Matrix> {
    let elements = field.elements().expect("finite field");
    let mut out = Vec::new();
    for p0 in 0..dim {
        for p1 in p0 + 1..dim {
            // free entries: row 0 at columns > p0 except p1; row 1 at columns > p1
            let free: Vec<(usize, usize)> = (p0 + 1..dim)
                .filter(|&c| c != p1)
                .map(|c| (0, c))
                .chain((p1 + 1..dim).map(|c| (1, c)))
                .collect();
            let total = elements.len().pow(free.len() as u32);
            for code in 0..total {
                let mut m = Matrix::zeros(field, 2, dim);
                m.set(0, p0, field.one());
                m.set(1, p1, field.one());
                let mut c = code;
                for &(r, col) in &free {
                    m.set(r, col, elements[c % elements.len()].clone());
                    c /= elements.len();
                }
                out.push(m);
            }
        }
    }
    out
}

/// Every point over `(M1, M2)`: length-2 quotients of `M1 (x)_S M2` stable
/// under `x`, each given by a row-reduced surjection `Q'` with `Q' A = Z Q'`;
/// then `Pihat = Q' q`.
pub fn points_over_pair(m1: &FramedModule, m2: &FramedModule) -> Result<Vec<BilinPoint>> {
    let field = m1.field();
    let tp = tensor_over_s(m1, m2)?;
    if tp.dim12 < 2 {
        return Ok(Vec::new());
    }
    let a = &tp.actions[0];
    let mut out = Vec::new();
    for qp in rref_2_rows(field, tp.dim12) {
        let qa = &qp * a;
        // Z Q' = Q' A, solved as Q'^T Z^T = (Q' A)^T
        let Some(zt) = qp.transpose().solve(&qa.transpose())?.ok() else { continue };
        let point = BilinPoint::new(m1.clone(), m2.clone(), vec![zt.transpose()], &qp * &tp.q)?;
        out.push(point);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CensusRow {
    pub label: String,
    pub tensor_class: String,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Census {
    pub q: u64,
    /// Distinct framed modules with `n = 1`, `d = r = 2`.
    pub quot_points: usize,
    pub total_points: usize,
    pub by_label: BTreeMap<String, usize>,
    pub rows: Vec<CensusRow>,
    /// Points with a module whose support does not split over `F_q`.
    pub nonsplit_points: usize,
    pub border_rank_3: usize,
    pub violations: Vec<String>,
}

#[derive(Default)]
struct Partial {
    total: usize,
    cells: BTreeMap<(CaseLabel, String), usize>,
    nonsplit: usize,
    border3: usize,
    violations: Vec<String>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.total += other.total;
        for (k, v) in other.cells {
            *self.cells.entry(k).or_default() += v;
        }
        self.nonsplit += other.nonsplit;
        self.border3 += other.border3;
        self.violations.extend(other.violations);
        self
    }
}

/// Exhaustive census of points over `F_q`. The outer loop over `M1` runs on
/// the current rayon pool; merging is order-independent and the output sorted.
pub fn enumerate_222(q: u64, cap: u128) -> Result<Census> {
    let field = Field::prime(q)?;
    let needed = (q as u128).pow(8);
    if needed > cap {
        return Err(Error::CapExceeded { needed, cap });
    }
    let quot = quot_points_122(field)?;
    let partials = quot
        .par_iter()
        .enumerate()
        .map(|(i, m1)| -> Result<Partial> {
            let mut part = Partial::default();
            for (j, m2) in quot.iter().enumerate() {
                for b in points_over_pair(m1, m2)? {
                    part.total += 1;
                    match classify_point_222(&b) {
                        Ok(case) => {
                            if case.tensor.border_rank > 2 {
                                part.border3 += 1;
                            }
                            for v in &case.violations {
                                part.violations.push(format!("pair ({i}, {j}) {}: {v}", case.label.name()));
                            }
                            *part.cells.entry((case.label, case.tensor.label.name())).or_default() += 1;
                        }
                        Err(Error::NonSplit) => part.nonsplit += 1,
                        Err(e) => return Err(e),
                    }
                }
            }
            Ok(part)
        })
        .collect::<Result<Vec<_>>>()?;
    let merged = partials.into_iter().fold(Partial::default(), Partial::merge);
    let mut by_label: BTreeMap<String, usize> = CaseLabel::ALL.iter().map(|l| (l.name().to_string(), 0)).collect();
    let mut rows = Vec::new();
    for ((label, class), count) in &merged.cells {
        *by_label.get_mut(label.name()).unwrap() += count;
        rows.push(CensusRow { label: label.name().into(), tensor_class: class.clone(), count: *count });
    }
    let mut violations = merged.violations;
    violations.sort();
    Ok(Census {
        q,
        quot_points: quot.len(),
        total_points: merged.total,
        by_label,
        rows,
        nonsplit_points: merged.nonsplit,
        border_rank_3: merged.border3,
        violations,
    })
}

impl Census {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("label,tensor_class,count\n");
        for r in &self.rows {
            s.push_str(&format!("{},{},{}\n", r.label, r.tensor_class, r.count));
        }
        s.push_str(&format!("NON_SPLIT,-,{}\n", self.nonsplit_points));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilin::{degenerate_point, main_component_point};

    const Q: Field = Field::Rational;

    fn fixed_named(name: &str) -> Tensor3 {
        match named_tensor(Q, name).unwrap() {
            Named::Fixed(t) => t,
            Named::Family(_) => panic!("{name} is a family"),
        }
    }

    fn family_named(field: Field, name: &str) -> ParamTensor {
        match named_tensor(field, name).unwrap() {
            Named::Family(f) => f,
            Named::Fixed(_) => panic!("{name} is fixed"),
        }
    }

    #[test]
    fn families_limit_to_named() {
        for (fam, base) in [("mu2_t", "mu2"), ("mu3_t", "mu3"), ("mu4_t", "mu4")] {
            assert_eq!(family_named(Q, fam).evaluate(&Q.zero()), fixed_named(base));
        }
        assert!(named_tensor(Q, "mu9").is_err());
    }

    #[test]
    fn limit_reports() {
        let f5 = Field::prime(5).unwrap();
        let ts: Vec<Scalar> = (1..=3).map(|t| f5.from_i64(t)).collect();
        let mu2 = match named_tensor(f5, "mu2").unwrap() {
            Named::Fixed(t) => t,
            _ => unreachable!(),
        };
        let r = verify_limit(&family_named(f5, "mu2_t"), &mu2, &ts).unwrap();
        assert!(r.limit_matches && r.samples_generic && r.degenerates);
        assert_eq!(r.limit_class.rank, 3);
        let c = verify_limit(&ParamTensor::constant(&fixed_named("mu1")), &fixed_named("mu1"), &[Q.one()]).unwrap();
        assert!(c.constant_class && !c.degenerates);
    }

    #[test]
    fn point_cases() {
        let pts = vec![vec![Q.zero()], vec![Q.one()]];
        let main = main_component_point(&pts, Matrix::identity(Q, 2), Matrix::identity(Q, 2)).unwrap();
        let c = classify_point_222(&main).unwrap();
        assert_eq!((c.label, c.tensor.label), (CaseLabel::MainSplit, OrbitLabel::Generic));
        assert!(c.violations.is_empty());

        let pi = Matrix::from_i64(Q, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let deg = degenerate_point(1, Matrix::identity(Q, 2), Matrix::identity(Q, 2), pi).unwrap();
        assert_eq!(classify_point_222(&deg).unwrap().label, CaseLabel::TotallyDegenerate);

        let w = classify_point_222(&pi5_point(Q).unwrap()).unwrap();
        assert_eq!(w.tensor.label, OrbitLabel::WType);
    }

    #[test]
    fn cyclic_nilpotent_point_from_pairs() {
        let f2 = Field::prime(2).unwrap();
        let dual = FramedModule::validated(vec![Matrix::from_i64(f2, &[&[0, 0], &[1, 0]])], Matrix::identity(f2, 2))
            .unwrap()
            .normal_form()
            .unwrap();
        let pts = points_over_pair(&dual, &dual).unwrap();
        assert_eq!(pts.len(), 1);
        let c = classify_point_222(&pts[0]).unwrap();
        assert_eq!((c.label, c.tensor.label), (CaseLabel::CyclicNilpotent, OrbitLabel::WType));
        assert!(c.violations.is_empty());
    }
}
