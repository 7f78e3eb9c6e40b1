//! Dense univariate polynomials over an exact field.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::scalar::{Field, Scalar};

/// Univariate polynomial, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: Field) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: Scalar) -> Self {
        let field = c.field();
        Self::new(field, vec![c])
    }

    /// The variable itself.
    pub fn x(field: Field) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    /// `c * x^k`.
    pub fn monomial(c: Scalar, k: usize) -> Self {
        let field = c.field();
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        Self::new(field, coeffs)
    }

    pub fn from_i64(field: Field, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { field: self.field, coeffs }
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    pub fn eval(&self, t: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * t) + c;
        }
        acc
    }

    /// `f(X)` for a square matrix `X`.
    pub fn eval_matrix(&self, x: &Matrix) -> Matrix {
        let n = x.rows();
        let mut acc = Matrix::zeros(self.field, n, n);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &Matrix::identity(self.field, n).scale(c);
        }
        acc
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return (Poly::zero(self.field), Poly::zero(self.field));
        };
        if sd < dd {
            return (Poly::zero(self.field), self.clone());
        }
        let mut quot = vec![self.field.zero(); sd - dd + 1];
        for k in (dd..=sd).rev() {
            let c = &rem[k] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                let idx = k - dd + i;
                rem[idx] = &rem[idx] - &(&c * dc);
            }
            quot[k - dd] = c;
        }
        (Poly::new(self.field, quot), Poly::new(self.field, rem))
    }

    /// Exact quotient, `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.div_rem(m).1;
        let mut acc = Poly::one(self.field).div_rem(m).1;
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).div_rem(m).1;
            }
            base = (&base * &base).div_rem(m).1;
            e >>= 1;
        }
        acc
    }

    /// Roots lying in the coefficient field, with multiplicities, in ascending
    /// order of their text form. The second component is true when the roots
    /// account for the full degree (the polynomial splits).
    pub fn roots(&self) -> (Vec<(Scalar, usize)>, bool) {
        let Some(deg) = self.degree() else {
            return (Vec::new(), false);
        };
        let candidates = match self.field {
            Field::Rational => rational_root_candidates(self),
            Field::Prime(p) => prime_field_roots(self, p),
        };
        let mut rest = self.clone();
        let mut out = Vec::new();
        for c in candidates {
            let lin = Poly::new(self.field, vec![-&c, self.field.one()]);
            let mut mult = 0;
            while let Some(q) = rest.exact_div(&lin) {
                if rest.degree() == Some(0) {
                    break;
                }
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((c, mult));
            }
        }
        out.sort_by(|a, b| root_order(&a.0, &b.0));
        let total: usize = out.iter().map(|(_, m)| m).sum();
        (out, total == deg)
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &self.field.from_i64(k as i64))
            .collect();
        Poly::new(self.field, coeffs)
    }
}

fn root_order(a: &Scalar, b: &Scalar) -> std::cmp::Ordering {
    match (a, b) {
        (Scalar::Q(x), Scalar::Q(y)) => x.cmp(y),
        (Scalar::Fp { value: x, .. }, Scalar::Fp { value: y, .. }) => x.cmp(y),
        _ => std::cmp::Ordering::Equal,
    }
}

/// Candidate rational roots p/q with p | a_0 and q | a_n of the integer-scaled
/// polynomial (after removing the root 0).
fn rational_root_candidates(f: &Poly) -> Vec<Scalar> {
    let mut ints: Vec<BigInt> = {
        let mut lcm = BigInt::one();
        for c in f.coeffs() {
            if let Scalar::Q(q) = c {
                lcm = lcm.lcm(q.denom());
            }
        }
        f.coeffs()
            .iter()
            .map(|c| match c {
                Scalar::Q(q) => (q * num_rational::BigRational::from_integer(lcm.clone())).to_integer(),
                _ => unreachable!(),
            })
            .collect()
    };
    let mut out = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if low > 0 {
        out.push(Field::Rational.zero());
        ints.drain(..low);
    }
    if ints.len() <= 1 {
        return out;
    }
    let a0 = ints[0].abs();
    let an = ints.last().unwrap().abs();
    let ps = divisors(&a0);
    let qs = divisors(&an);
    let mut seen = std::collections::BTreeSet::new();
    for p in &ps {
        for q in &qs {
            for sign in [1i32, -1] {
                let r = num_rational::BigRational::new(p * BigInt::from(sign), q.clone());
                if seen.insert(r.clone()) {
                    let s = Scalar::Q(r);
                    if f.eval(&s).is_zero() {
                        out.push(s);
                    }
                }
            }
        }
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = BigInt::one();
    while &i * &i <= *n {
        if (n % &i).is_zero() {
            small.push(i.clone());
            let other = n / &i;
            if other != i {
                large.push(other);
            }
        }
        i += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Distinct roots in F_p: brute force for small p, otherwise equal-degree
/// splitting of gcd(f, x^p - x) with deterministic shifts.
fn prime_field_roots(f: &Poly, p: u64) -> Vec<Scalar> {
    let field = f.field();
    if p <= 1024 {
        return field.elements().unwrap().into_iter().filter(|c| f.eval(c).is_zero()).collect();
    }
    let x = Poly::x(field);
    let xp = x.pow_mod(p, f);
    let g = f.gcd(&(&xp - &x));
    let mut out = Vec::new();
    split_linear(&g, p, &mut out);
    out
}

fn split_linear(g: &Poly, p: u64, out: &mut Vec<Scalar>) {
    let field = g.field();
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let g = g.monic();
            out.push(-&g.coeff(0));
        }
        Some(_) => {
            for a in 0..p {
                let shifted = Poly::new(field, vec![field.from_i64(a as i64), field.one()]);
                let h = &shifted.pow_mod((p - 1) / 2, g) - &Poly::one(field);
                let d = g.gcd(&h);
                if let Some(dd) = d.degree() {
                    if dd > 0 && Some(dd) < g.degree() {
                        split_linear(&d, p, out);
                        split_linear(&g.div_rem(&d).0, p, out);
                        return;
                    }
                }
            }
        }
    }
}

impl<'a> std::ops::Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect();
        Poly::new(self.field, coeffs)
    }
}

impl<'a> std::ops::Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect();
        Poly::new(self.field, coeffs)
    }
}

impl<'a> std::ops::Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Poly::new(self.field, coeffs)
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => c.to_text(),
                1 => format!("{}*x", c.to_text()),
                _ => format!("{}*x^{k}", c.to_text()),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Characteristic polynomial `det(x I - A)` by Berkowitz's division-free algorithm.
pub fn charpoly(a: &Matrix) -> Poly {
    assert!(a.is_square());
    let field = a.field();
    let n = a.rows();
    if n == 0 {
        return Poly::one(field);
    }
    // Berkowitz: build Toeplitz vectors for leading principal submatrices.
    let mut v: Vec<Scalar> = vec![field.one(), -a.get(0, 0)];
    for r in 1..n {
        // partition of the leading (r+1)x(r+1) block: [[A_r, C],[R, a_rr]]
        let big_r: Vec<Scalar> = (0..r).map(|j| a.get(r, j).clone()).collect();
        let c: Vec<Scalar> = (0..r).map(|i| a.get(i, r).clone()).collect();
        let ar = Matrix::from_fn(field, r, r, |i, j| a.get(i, j).clone());
        // t = [1, -a_rr, -R C, -R A C, ..., -R A^{r-1} C]
        let mut t = vec![field.one(), -a.get(r, r)];
        let mut w = c.clone();
        for _ in 0..r {
            let rc = big_r.iter().zip(&w).fold(field.zero(), |acc, (x, y)| &acc + &(x * y));
            t.push(-&rc);
            w = ar.mul_vec(&w);
        }
        // new v = T * v where T is the (r+2)x(r+1) lower-triangular Toeplitz matrix of t
        let mut nv = vec![field.zero(); r + 2];
        for (i, slot) in nv.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                if i >= j {
                    *slot = &*slot + &(&t[i - j] * vj);
                }
            }
        }
        v = nv;
    }
    // v holds coefficients from x^n down to x^0
    v.reverse();
    Poly::new(field, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn division_and_gcd() {
        let f = Poly::from_i64(Q, &[0, 0, 1]); // x^2
        let g = Poly::from_i64(Q, &[0, -1, 1]); // x^2 - x
        assert_eq!(f.gcd(&g), Poly::x(Q));
        let (q, r) = Poly::from_i64(Q, &[1, 0, 1]).div_rem(&Poly::from_i64(Q, &[-1, 1]));
        assert_eq!(q, Poly::from_i64(Q, &[1, 1]));
        assert_eq!(r, Poly::from_i64(Q, &[2]));
    }

    #[test]
    fn charpoly_matches_determinant_expansion() {
        let a = Matrix::from_i64(Q, &[&[2, 1, 0], &[1, 3, 4], &[0, 5, -1]]);
        let p = charpoly(&a);
        // det(xI - A) evaluated at a few points equals the direct determinant
        for t in -2..3 {
            let ts = Q.from_i64(t);
            let m = &Matrix::identity(Q, 3).scale(&ts) - &a;
            assert_eq!(p.eval(&ts), m.determinant());
        }
        assert!(p.eval_matrix(&a).is_zero());
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // (x - 1/2)^2 (x + 3) x
        let f = &(&Poly::from_i64(Q, &[-1, 2]) * &Poly::from_i64(Q, &[-1, 2]))
            * &(&Poly::from_i64(Q, &[3, 1]) * &Poly::x(Q));
        let (roots, split) = f.roots();
        assert!(split);
        assert_eq!(roots.len(), 3);
        assert_eq!(roots[0], (Q.from_i64(-3), 1));
        assert_eq!(roots[1], (Q.zero(), 1));
        assert_eq!(roots[2], (Q.fraction(1, 2).unwrap(), 2));
        let (r, split) = Poly::from_i64(Q, &[1, 0, 1]).roots();
        assert!(r.is_empty() && !split);
    }

    #[test]
    fn large_prime_roots_split() {
        let f = Field::prime(1_000_003).unwrap();
        // (x - 5)(x - 77)(x - 123456)^2 (x^2 + 1)? -1 is a square mod p iff p = 1 mod 4; p = 3 mod 4
        let lin = |c: i64| Poly::new(f, vec![f.from_i64(-c), f.one()]);
        let poly = &(&(&lin(5) * &lin(77)) * &(&lin(123456) * &lin(123456))) * &Poly::from_i64(f, &[1, 0, 1]);
        let (roots, split) = poly.roots();
        assert!(!split);
        let got: Vec<(u64, usize)> = roots.iter().map(|(c, m)| (c.as_residue().unwrap(), *m)).collect();
        assert_eq!(got, vec![(5, 1), (77, 1), (123456, 2)]);
    }
}
