use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix, Scalar};

/// Dimension of the `r`-th secant variety of the Segre `P^{d-1} x P^{d-1} x P^{d-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SecantReport {
    pub d: usize,
    pub r: usize,
    pub field: String,
    pub seed: u64,
    /// `min(d^3 - 1, r (3(d-1) + 1) - 1)`.
    pub bound: usize,
    /// `d^3 - 1`.
    pub ambient: usize,
    /// Projective dimension from the span of tangent spaces at `r` random points (best trial).
    pub terracini_dim: usize,
    #[serde(rename = "fills")]
    pub fills_ambient: bool,
    pub per_trial: Vec<usize>,
}

pub fn secant_bound(d: usize, r: usize) -> usize {
    (d * d * d - 1).min(r * (3 * (d - 1) + 1) - 1)
}

fn random_scalar(field: Field, rng: &mut ChaCha8Rng) -> Scalar {
    match field {
        Field::Rational => field.from_i64(rng.gen_range(-99..=99)),
        Field::Prime(p) => field.from_i64(rng.gen_range(0..p) as i64),
    }
}

fn random_nonzero_vector(field: Field, d: usize, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    loop {
        let v: Vec<Scalar> = (0..d).map(|_| random_scalar(field, rng)).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

fn outer(a: &[Scalar], b: &[Scalar], c: &[Scalar]) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(a.len() * b.len() * c.len());
    for x in a {
        for y in b {
            let xy = x * y;
            for z in c {
                out.push(&xy * z);
            }
        }
    }
    out
}

/// Rank of the stacked affine tangent spaces `A (x) b (x) c + a (x) B (x) c + a (x) b (x) C`
/// at `r` random points.
fn terracini_rank(field: Field, d: usize, r: usize, rng: &mut ChaCha8Rng) -> usize {
    let unit = |i: usize| -> Vec<Scalar> { (0..d).map(|j| if i == j { field.one() } else { field.zero() }).collect() };
    let mut rows = Vec::with_capacity(3 * d * r);
    for _ in 0..r {
        let a = random_nonzero_vector(field, d, rng);
        let b = random_nonzero_vector(field, d, rng);
        let c = random_nonzero_vector(field, d, rng);
        for i in 0..d {
            let e = unit(i);
            rows.push(outer(&e, &b, &c));
            rows.push(outer(&a, &e, &c));
            rows.push(outer(&a, &b, &e));
        }
    }
    Matrix::from_rows(field, d * d * d, &rows).rank()
}

/// Terracini computation; trial `i` draws from a ChaCha stream seeded with
/// `seed + i`, so results do not depend on scheduling.
pub fn secant_dimension(field: Field, d: usize, r: usize, trials: usize, seed: u64) -> Result<SecantReport> {
    if d == 0 || r == 0 || trials == 0 {
        return Err(Error::InvalidArgument(format!("need d, r, trials >= 1, got ({d}, {r}, {trials})")));
    }
    let per_trial: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            terracini_rank(field, d, r, &mut rng) - 1
        })
        .collect();
    let terracini_dim = *per_trial.iter().max().unwrap();
    let ambient = d * d * d - 1;
    Ok(SecantReport {
        d,
        r,
        field: field.to_string(),
        seed,
        bound: secant_bound(d, r),
        ambient,
        terracini_dim,
        fills_ambient: terracini_dim == ambient,
        per_trial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let q = Field::Rational;
        let s = secant_dimension(q, 2, 2, 3, 7).unwrap();
        assert_eq!((s.terracini_dim, s.fills_ambient), (7, true));
        let s = secant_dimension(q, 2, 1, 3, 7).unwrap();
        assert_eq!(s.terracini_dim, 3);
        let s = secant_dimension(q, 3, 3, 2, 7).unwrap();
        assert_eq!((s.bound, s.ambient, s.fills_ambient), (20, 26, false));
        assert!(s.terracini_dim <= s.bound);
    }

    #[test]
    fn deterministic_under_seed() {
        let f = Field::prime(101).unwrap();
        assert_eq!(secant_dimension(f, 3, 2, 4, 11).unwrap(), secant_dimension(f, 3, 2, 4, 11).unwrap());
    }
}
