//! Special functions: generalized Laguerre polynomials, Γ and the upper
//! incomplete Γ(a, x) for any real order.

mod gamma;
mod laguerre;

pub use gamma::{gamma_fn, ln_gamma_abs, upper_incomplete_gamma};
pub use laguerre::{laguerre, laguerre_eval, LaguerreSpec};
