use crate::bilin::BilinPoint;
use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix};
use crate::modcore::FramedModule;

use super::Tensor3;

/// Conciseness on each factor: the flattening onto factor `i` has rank `d_i`.
pub fn conciseness(t: &Tensor3) -> [bool; 3] {
    let ranks = t.flattening_ranks();
    [0, 1, 2].map(|f| ranks[f] == t.dims()[f])
}

/// `sum_i e_i (x) e_i (x) e_i`.
pub fn unit_tensor(field: Field, d: usize) -> Tensor3 {
    Tensor3::from_fn(field, [d; 3], |i, j, k| if i == j && j == k { field.one() } else { field.zero() })
}

/// Structure tensor `T(i, j, k) = Pihat[k, i d2 + j]` of the bilinear map of a point.
pub fn tensor_from_bilin(b: &BilinPoint) -> Tensor3 {
    let (d1, d2) = (b.m1().d(), b.m2().d());
    let p = b.pihat();
    Tensor3::from_fn(b.field(), [d1, d2, b.d3()], |i, j, k| p.get(k, i * d2 + j).clone())
}

/// Structure constants of `S/Ann(M)` for a module cyclic on framing column
/// `generator`, in the monomial basis `m_s(X) g` chosen greedily in graded-lex order.
pub fn multiplication_tensor(m: &FramedModule, generator: usize) -> Result<Tensor3> {
    if generator >= m.r() {
        return Err(Error::InvalidArgument(format!("generator index {generator} >= r = {}", m.r())));
    }
    let d = m.d();
    let (selected, _) = m.krylov_basis(&[generator]);
    if selected.len() != d {
        return Err(Error::InvalidModule(format!(
            "column {generator} generates a subspace of dimension {} < {d}",
            selected.len()
        )));
    }
    let field = m.field();
    let g = m.framing().column(generator);
    let basis: Vec<_> = selected.iter().map(|(mono, _)| m.apply_monomial(mono, &g)).collect();
    let binv = Matrix::from_columns(field, d, &basis).inverse().expect("Krylov basis");
    let mut t = Tensor3::zeros(field, [d; 3]);
    for (s, (ms, _)) in selected.iter().enumerate() {
        for (u, (mu, _)) in selected.iter().enumerate() {
            let prod: Vec<u32> = ms.iter().zip(mu).map(|(a, b)| a + b).collect();
            let coords = binv.mul_vec(&m.apply_monomial(&prod, &g));
            for (k, c) in coords.into_iter().enumerate() {
                t.set(s, u, k, c);
            }
        }
    }
    Ok(t)
}
