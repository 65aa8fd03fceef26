//! Real functions on unions of open intervals, and their calculus.

mod function;
mod interval;
mod roots;

pub use function::{make_function, ScalarFunction};
pub use interval::{Domain, Interval, WINDOW_HI, WINDOW_LO};
pub use roots::{restrict_to_sign_intervals, restrict_to_sign_intervals_in, sign_changes, zeros_in};

/// `f'` as a function on the same domain. See [`ScalarFunction::derivative`].
pub fn derivative<T: crate::Real>(f: &ScalarFunction<T>) -> ScalarFunction<T> {
    f.derivative()
}
