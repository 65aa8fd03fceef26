//! Riccati equations and the SL(2,R) gauge group acting on them: Möbius
//! action on solutions, affine action on coefficients, the linear
//! representation `B` and its cocycle `θ`.

mod equation;
mod gauge;

pub use equation::{residual, CoefficientTriple, RiccatiEquation};
pub use gauge::{
    act_on_coefficients, act_on_solution, cocycle_theta, compose, random_gauge_curve, representation_B, representation_matrix, GaugeCurve,
    POLE_GUARD,
};
