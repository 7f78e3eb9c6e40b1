//! Exact-arithmetic toolkit for framed modules over polynomial rings, points of
//! Quot schemes and of the bilinear scheme of module quotients, their tangent
//! spaces, and small tensors (conciseness, 2x2x2 rank/border rank, secant
//! dimensions).

pub mod error;
pub mod exactalg;
pub mod modcore;
pub mod quot;
pub mod bilin;
pub mod cases222;
mod linsys;
pub mod tensorlab;

pub use error::{Error, Result};
