use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Number of `d`-dimensional quotients of `F_q^r`:
/// `prod_{i<d} (q^(r-i) - 1) / (q^(d-i) - 1)`.
pub fn gaussian_binomial(d: u32, r: u32, q: u64) -> Result<BigUint> {
    if d > r {
        return Err(Error::InvalidArgument(format!("d = {d} exceeds r = {r}")));
    }
    if q < 2 {
        return Err(Error::InvalidArgument(format!("q = {q} is not a prime power")));
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..d {
        num *= q.pow(r - i) - BigUint::one();
        den *= q.pow(d - i) - BigUint::one();
    }
    Ok(num / den)
}
