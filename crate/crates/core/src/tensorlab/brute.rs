use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::Field;

use super::Tensor3;

/// Rank over `F_q` found by exhaustive search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum FieldRank {
    Exact(usize),
    /// No decomposition with at most this many terms.
    Exceeds(usize),
}

fn nonzero_vectors(q: u64, len: usize, projective: bool) -> Vec<Vec<u64>> {
    let total = q.pow(len as u32);
    (1..total)
        .map(|mut c| {
            (0..len)
                .map(|_| {
                    let v = c % q;
                    c /= q;
                    v
                })
                .collect::<Vec<_>>()
        })
        // projective representatives: first nonzero coordinate equal to 1
        .filter(|v| !projective || v.iter().find(|&&x| x != 0) == Some(&1))
        .collect()
}

/// All distinct rank-one tensors over `F_q` with the given dims, as residue vectors.
pub fn rank_one_tensors(q: u64, dims: [usize; 3]) -> Vec<Vec<u64>> {
    let a = nonzero_vectors(q, dims[0], true);
    let b = nonzero_vectors(q, dims[1], true);
    let c = nonzero_vectors(q, dims[2], false);
    let mut out = Vec::with_capacity(a.len() * b.len() * c.len());
    for x in &a {
        for y in &b {
            for z in &c {
                let mut t = Vec::with_capacity(dims.iter().product());
                for xi in x {
                    for yj in y {
                        for zk in z {
                            t.push(xi * yj % q * zk % q);
                        }
                    }
                }
                out.push(t);
            }
        }
    }
    out
}

/// Smallest `r <= rmax` such that `t` is a sum of `r` rank-one tensors over `F_q`.
/// The search is a breadth-first expansion of the sets of sums of `k` rank-one
/// tensors, guarded by `cap` on the ambient space size.
pub fn brute_force_rank_fq(t: &Tensor3, rmax: usize, cap: u128) -> Result<FieldRank> {
    let field = t.field();
    let Field::Prime(q) = field else {
        return Err(Error::InvalidField("exhaustive rank needs a finite field".into()));
    };
    let cells: usize = t.dims().iter().product();
    let needed = (q as u128).checked_pow(cells as u32).unwrap_or(u128::MAX);
    if needed > cap {
        return Err(Error::CapExceeded { needed, cap });
    }
    let target: Vec<u64> = t.coeffs().iter().map(|c| c.as_residue().unwrap()).collect();
    if target.iter().all(|&x| x == 0) {
        return Ok(FieldRank::Exact(0));
    }
    let ones = rank_one_tensors(q, t.dims());
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    seen.insert(vec![0; cells]);
    let mut frontier = vec![vec![0; cells]];
    for r in 1..=rmax {
        let mut next = Vec::new();
        for s in &frontier {
            for one in &ones {
                let sum: Vec<u64> = s.iter().zip(one).map(|(a, b)| (a + b) % q).collect();
                if sum == target {
                    return Ok(FieldRank::Exact(r));
                }
                if seen.insert(sum.clone()) {
                    next.push(sum);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(FieldRank::Exceeds(rmax))
}
