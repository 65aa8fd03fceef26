//! Independent numerical oracles: adaptive quadrature, residual sweeps,
//! inner products and norms.

mod quadrature;
mod sweep;

pub use quadrature::{inner_product, integrate, integrate_detailed, integrate_fn, norm_squared, Quadrature, QuadratureSpec};
pub use sweep::{riccati_residual_sweep, schrodinger_residual_sweep, schrodinger_residual_sweep_in, ResidualSweep};
