//! Exactly solvable families (radial oscillator and Coulomb-like, each
//! with a shifted variant) and the four worked transformations built on
//! them.

pub mod closed_forms;
mod examples;
mod families;

pub use examples::{run_example, run_example_with, ClosedFormCheck, Example, ExampleParams, ExampleResult};
pub use families::{
    coulomb_eigenpair, coulomb_wavefunction, formal_coulomb_eigenpair, oscillator_eigenpair, oscillator_wavefunction,
    CoulombParams, EigenPair, OscillatorParams,
};
