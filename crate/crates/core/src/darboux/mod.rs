//! Transformation theorems: the finite-difference Bäcklund formula, its
//! generalization with a gauge function `γ(x)` at Riccati and Schrödinger
//! level, and the classical intertwining (factorization) construction.

mod backlund;
mod checks;
mod intertwine;

pub use backlund::{
    backlund_element, finite_difference_backlund, finite_difference_backlund_with, generalized_backlund,
    generalized_backlund_with, generalized_element, schrodinger_backlund, schrodinger_backlund_with, GammaGauge,
};
pub use checks::{riccati_plus, Tolerances, TransformReport, CANCELLATION_LIMIT};
pub use intertwine::{intertwine_pair, intertwine_pair_with, map_eigenfunction, FactorizationData};
