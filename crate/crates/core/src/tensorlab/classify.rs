use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{Field, Scalar};

use super::Tensor3;

/// Orbit type of a 2x2x2 tensor over the algebraic closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OrbitLabel {
    Zero,
    RankOne,
    /// Rank 2, not concise on exactly this factor (0-based).
    NonConcise(usize),
    /// Concise with a separable pencil: the unit tensor orbit.
    Generic,
    /// Concise with an inseparable pencil: rank 3, border rank 2.
    WType,
}

impl OrbitLabel {
    pub fn name(&self) -> String {
        match self {
            OrbitLabel::Zero => "zero".into(),
            OrbitLabel::RankOne => "rank-one".into(),
            OrbitLabel::NonConcise(f) => format!("non-concise-{}", f + 1),
            OrbitLabel::Generic => "generic".into(),
            OrbitLabel::WType => "W-type".into(),
        }
    }
}

/// Geometric rank, border rank and conciseness of a 2x2x2 tensor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Classification222 {
    pub rank: u8,
    pub border_rank: u8,
    pub concise: [bool; 3],
    pub flattening_ranks: [usize; 3],
    pub label: OrbitLabel,
    /// Whether `det(x A + y B)` has distinct roots over the closure
    /// (`None` unless the tensor is concise).
    pub separable_pencil: Option<bool>,
}

/// Coefficients `(a, b, c)` of `det(x A + y B) = a x^2 + b x y + c y^2` for the
/// third-factor slices `A = T(., ., 0)`, `B = T(., ., 1)`.
pub fn pencil_quadratic(t: &Tensor3) -> (Scalar, Scalar, Scalar) {
    let a = t.slice3(0).determinant();
    let c = t.slice3(1).determinant();
    let sum = &t.slice3(0) + &t.slice3(1);
    let b = &(&sum.determinant() - &a) - &c;
    (a, b, c)
}

/// Separability of a nonzero binary quadratic, aware of characteristic 2.
pub fn quadratic_separable(field: Field, a: &Scalar, b: &Scalar, c: &Scalar) -> bool {
    if field.characteristic() == 2 {
        !b.is_zero()
    } else {
        !discriminant(field, a, b, c).is_zero()
    }
}

fn discriminant(field: Field, a: &Scalar, b: &Scalar, c: &Scalar) -> Scalar {
    &(b * b) - &(&field.from_i64(4) * &(a * c))
}

/// Cayley's hyperdeterminant of a 2x2x2 tensor.
pub fn hyperdeterminant(t: &Tensor3) -> Scalar {
    let f = t.field();
    let g = |i, j, k| t.get(i, j, k).clone();
    let (a000, a001, a010, a011) = (g(0, 0, 0), g(0, 0, 1), g(0, 1, 0), g(0, 1, 1));
    let (a100, a101, a110, a111) = (g(1, 0, 0), g(1, 0, 1), g(1, 1, 0), g(1, 1, 1));
    let p = |xs: &[&Scalar]| xs.iter().fold(f.one(), |acc, x| &acc * *x);
    let squares = p(&[&a000, &a000, &a111, &a111])
        + p(&[&a001, &a001, &a110, &a110])
        + p(&[&a010, &a010, &a101, &a101])
        + p(&[&a100, &a100, &a011, &a011]);
    let mixed = p(&[&a000, &a001, &a110, &a111])
        + p(&[&a000, &a010, &a101, &a111])
        + p(&[&a000, &a100, &a011, &a111])
        + p(&[&a001, &a010, &a101, &a110])
        + p(&[&a001, &a100, &a011, &a110])
        + p(&[&a010, &a100, &a011, &a101]);
    let quartic = p(&[&a000, &a011, &a101, &a110]) + p(&[&a001, &a010, &a100, &a111]);
    squares - f.from_i64(2) * mixed + f.from_i64(4) * quartic
}

/// Classifies a 2x2x2 tensor by flattening ranks and pencil separability.
/// Labels are geometric: a separable pencil with roots outside the field
/// still counts as rank 2.
pub fn classify_2x2x2(t: &Tensor3) -> Result<Classification222> {
    if t.dims() != [2, 2, 2] {
        return Err(Error::Shape(format!("expected dims [2, 2, 2], got {:?}", t.dims())));
    }
    let ranks = t.flattening_ranks();
    let concise = ranks.map(|r| r == 2);
    let mut out = Classification222 {
        rank: 0,
        border_rank: 0,
        concise,
        flattening_ranks: ranks,
        label: OrbitLabel::Zero,
        separable_pencil: None,
    };
    if t.is_zero() {
        return Ok(out);
    }
    if ranks.iter().all(|&r| r == 1) {
        out.rank = 1;
        out.border_rank = 1;
        out.label = OrbitLabel::RankOne;
        return Ok(out);
    }
    out.border_rank = 2;
    if let Some(f) = ranks.iter().position(|&r| r == 1) {
        out.rank = 2;
        out.label = OrbitLabel::NonConcise(f);
        return Ok(out);
    }
    let (a, b, c) = pencil_quadratic(t);
    if a.is_zero() && b.is_zero() && c.is_zero() {
        return Err(Error::Consistency("concise tensor with a degenerate pencil".into()));
    }
    let separable = quadratic_separable(t.field(), &a, &b, &c);
    out.separable_pencil = Some(separable);
    if separable {
        out.rank = 2;
        out.label = OrbitLabel::Generic;
    } else {
        out.rank = 3;
        out.label = OrbitLabel::WType;
    }
    Ok(out)
}

/// [`classify_2x2x2`] plus, in characteristic other than 2, the check that the
/// hyperdeterminant equals the pencil discriminant.
pub fn classify_2x2x2_checked(t: &Tensor3) -> Result<Classification222> {
    let cls = classify_2x2x2(t)?;
    let field = t.field();
    if field.characteristic() != 2 {
        let (a, b, c) = pencil_quadratic(t);
        let disc = discriminant(field, &a, &b, &c);
        let hd = hyperdeterminant(t);
        if disc != hd {
            return Err(Error::Consistency(format!("hyperdeterminant {hd} differs from pencil discriminant {disc}")));
        }
    }
    Ok(cls)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensorlab::unit_tensor;

    const Q: Field = Field::Rational;

    fn t(terms: &[(usize, usize, usize, i64)]) -> Tensor3 {
        Tensor3::from_terms(Q, [2, 2, 2], terms)
    }

    #[test]
    fn named_classes() {
        let mu1 = classify_2x2x2_checked(&unit_tensor(Q, 2)).unwrap();
        assert_eq!((mu1.rank, mu1.border_rank, mu1.label), (2, 2, OrbitLabel::Generic));
        let mu2 = classify_2x2x2_checked(&t(&[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)])).unwrap();
        assert_eq!((mu2.rank, mu2.border_rank, mu2.label), (3, 2, OrbitLabel::WType));
        let mu3 = classify_2x2x2_checked(&t(&[(0, 0, 0, 1), (0, 1, 1, 1)])).unwrap();
        assert_eq!((mu3.rank, mu3.label), (2, OrbitLabel::NonConcise(0)));
        let mu4 = classify_2x2x2_checked(&t(&[(0, 0, 0, 1), (1, 0, 1, 1)])).unwrap();
        assert_eq!((mu4.rank, mu4.label), (2, OrbitLabel::NonConcise(1)));
        let one = classify_2x2x2(&t(&[(1, 0, 1, 3)])).unwrap();
        assert_eq!((one.rank, one.border_rank), (1, 1));
        assert_eq!(classify_2x2x2(&t(&[])).unwrap().label, OrbitLabel::Zero);
    }

    #[test]
    fn char_two_separability() {
        let f2 = Field::prime(2).unwrap();
        let mu1 = unit_tensor(f2, 2);
        assert_eq!(classify_2x2x2(&mu1).unwrap().label, OrbitLabel::Generic);
        // x^2 + xy + y^2 is separable in characteristic 2 with roots outside F_2
        let irr = Tensor3::from_terms(f2, [2, 2, 2], &[(0, 0, 0, 1), (1, 1, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 1, 1)]);
        let (_, b, _) = pencil_quadratic(&irr);
        assert!(!b.is_zero());
        assert_eq!(classify_2x2x2(&irr).unwrap().rank, 2);
    }

    #[test]
    fn rejects_wrong_dims() {
        assert!(classify_2x2x2(&Tensor3::zeros(Q, [2, 2, 3])).is_err());
    }
}
