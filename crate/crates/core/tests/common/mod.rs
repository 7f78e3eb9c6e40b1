#![allow(dead_code)]

use bilin_core::exactalg::{Field, Matrix, Scalar};
use bilin_core::modcore::{validate_framed, FramedModule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn scalar(field: Field, rng: &mut ChaCha8Rng) -> Scalar {
    match field {
        Field::Rational => field.from_i64(rng.gen_range(-4..=4)),
        Field::Prime(p) => field.from_i64(rng.gen_range(0..p) as i64),
    }
}

pub fn matrix(field: Field, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_fn(field, rows, cols, |_, _| scalar(field, rng))
}

pub fn invertible(field: Field, d: usize, rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let m = matrix(field, d, d, rng);
        if m.rank() == d {
            return m;
        }
    }
}

/// Random valid univariate framed module. Half the draws use a sparse action
/// so that repeated eigenvalues and nilpotent parts are common.
pub fn module_n1(field: Field, d: usize, r: usize, rng: &mut ChaCha8Rng) -> FramedModule {
    loop {
        let x = if rng.gen_bool(0.5) {
            Matrix::from_fn(field, d, d, |i, j| if j <= i && rng.gen_bool(0.4) { scalar(field, rng) } else { field.zero() })
        } else {
            matrix(field, d, d, rng)
        };
        let m = FramedModule::new(vec![x], matrix(field, d, r, rng)).unwrap();
        if validate_framed(&m).is_valid() {
            return m;
        }
    }
}

/// Random valid framed module with commuting actions, built as polynomials in one matrix.
pub fn module(field: Field, n: usize, d: usize, r: usize, rng: &mut ChaCha8Rng) -> FramedModule {
    loop {
        let base = matrix(field, d, d, rng);
        let x: Vec<Matrix> = (0..n)
            .map(|_| {
                let (a, b) = (scalar(field, rng), scalar(field, rng));
                &(&base * &base).scale(&a) + &base.scale(&b)
            })
            .collect();
        let m = FramedModule::new(x, matrix(field, d, r, rng)).unwrap();
        if validate_framed(&m).is_valid() {
            return m;
        }
    }
}

pub fn fields() -> [Field; 2] {
    [Field::Rational, Field::prime(5).unwrap()]
}
