//! Closed forms printed alongside the worked examples. They are only used
//! to cross-check the generic pipeline.

use crate::scalar::Real;
use crate::specfun::{gamma_fn, upper_incomplete_gamma};
use crate::Result;

use super::families::coulomb_wavefunction;

pub fn osc71_potential<T: Real>(l: T, b: T, x: T) -> T {
    let two = T::lit(2.0);
    let d = b * x * x - two * (l + T::one());
    b * b * x * x / T::lit(4.0) + (l + T::one()) * (l + two) / (x * x) - b * (l + T::lit(1.5))
        + T::lit(6.0) * b * (l + T::one()) / (d * d)
}

pub fn osc71_eta<T: Real>(l: T, b: T, x: T) -> Result<T> {
    let c = (b.powf(l + T::lit(2.5)) / (T::lit(2.0).powf(l + T::lit(1.5)) * gamma_fn(l + T::lit(2.5))?)).sqrt();
    Ok(c * x.powf(l + T::lit(2.0)) * (-b * x * x / T::lit(4.0)).exp() / (b * x * x - T::lit(2.0) * (l + T::one())).sqrt())
}

/// `e^{-l-1}/2 · (-l-1)^{l+3/2} · Γ(-l-3/2, -l-1)`.
pub fn osc71_norm_sq<T: Real>(l: T) -> Result<T> {
    let m = -l - T::one();
    Ok(m.exp() / T::lit(2.0) * m.powf(l + T::lit(1.5)) * upper_incomplete_gamma(-l - T::lit(1.5), m)?)
}

/// `V_{l-k, q l/(l+1)}`.
pub fn coul72_potential<T: Real>(l: T, q: T, k: usize, x: T) -> T {
    let lk = l - T::count(k);
    let qs = q * l / (l + T::one());
    T::lit(2.0) * qs / x + lk * (lk + T::one()) / (x * x)
}

/// `√(l/(l+1)) ζ_{k-1}^{l-k, q l/(l+1)}`.
pub fn coul72_eta<T: Real>(l: T, q: T, k: usize, x: T) -> Result<T> {
    let z = coulomb_wavefunction(l - T::count(k), q * l / (l + T::one()), k - 1)?;
    Ok((l / (l + T::one())).sqrt() * z.eval(x))
}

fn coul73_radicand<T: Real>(l: T, q: T, x: T) -> T {
    let a = (T::lit(2.0) * l + T::lit(3.0)) * q * q / ((l + T::one()).powi(2) * (l + T::lit(2.0)).powi(2));
    a * x * x - T::lit(4.0) * q * x - T::lit(2.0) * (l + T::one())
}

fn coul74_radicand<T: Real>(l: T, q: T, x: T) -> T {
    let a = (T::lit(2.0) * l + T::lit(3.0)) * q * q / ((l + T::one()).powi(2) * (l + T::lit(2.0)).powi(2));
    a * x * x - T::lit(2.0) * (l + T::one())
}

pub fn coul73_potential<T: Real>(l: T, q: T, x: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let (l1, l2, l3) = (l + one, l + two, two * l + T::lit(3.0));
    let base = two * q / x + l1 * l2 / (x * x) + q * q / (l2 * l2);
    let d = two * l1 * l1 * l2 * l2 * (l1 + two * q * x) - l3 * q * q * x * x;
    let t1 = two * l1 * q * (two * l1 * l2.powi(3) + (two * l * l + T::lit(6.0) * l + T::lit(5.0)) * q * x)
        / (two * l1 * l1 * l2 * l2 * (l1 + two * q * x) * x - l3 * q * q * x.powi(3));
    let t2 = T::lit(4.0) * l1 * l1 * l2 * l2 * l3 * q.powi(3) * x * x / (x * d * d);
    let poly = two * l.powi(3) + T::lit(10.0) * l * l + T::lit(10.0) * l - one;
    let t3 = two * l1.powi(3) * l2 * l2 * q * (poly * q * x + T::lit(4.0) * l1 * l1 * l2 * l2) / (x * d * d);
    base + t1 + t2 - t3
}

pub fn coul74_potential<T: Real>(l: T, q: T, x: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let (l1, l2, l3) = (l + one, l + two, two * l + T::lit(3.0));
    let base = q * q / (l2 * l2) + two * q / x + l1 * l2 / (x * x);
    let t1 = two * l1 * q * (two * l1 * l2 * l2 + l3 * q * x) / (two * l1.powi(3) * l2 * l2 * x - l3 * q * q * x.powi(3));
    let d = two * l1.powi(3) * l2 * l2 - l3 * q * q * x * x;
    let t2 = T::lit(6.0) * l1.powi(3) * l2 * l2 * l3 * q * q / (d * d);
    base - t1 + t2
}

fn coul7x_prefactor<T: Real>(l: T, q: T, x: T) -> Result<T> {
    let two = T::lit(2.0);
    let l2 = l + two;
    Ok(-two.powf(l + T::one()) * q.abs().powf(l + T::lit(2.5)) * (q * x / l2).exp() * x.powf(l2)
        / ((l + T::one()) * l2.powf(l + T::lit(4.0)) * gamma_fn(two * l + T::lit(4.0))?.sqrt()))
}

pub fn coul73_eta<T: Real>(l: T, q: T, x: T) -> Result<T> {
    let f = (l + T::one()) * (l + T::lit(2.0)) + (T::lit(2.0) * l + T::lit(3.0)) * q * x;
    Ok(coul7x_prefactor(l, q, x)? * f / coul73_radicand(l, q, x).sqrt())
}

pub fn coul74_eta<T: Real>(l: T, q: T, x: T) -> Result<T> {
    let f = (l + T::one()) * (l + T::lit(2.0)) - q * x;
    Ok(coul7x_prefactor(l, q, x)? * f / coul74_radicand(l, q, x).sqrt())
}

/// Zero of the coul-7.4 eigenstate, `(l+1)(l+2)/q`.
pub fn coul74_zero<T: Real>(l: T, q: T) -> T {
    (l + T::one()) * (l + T::lit(2.0)) / q
}

