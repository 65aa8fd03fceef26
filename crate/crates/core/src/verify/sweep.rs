use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fnspace::{Interval, ScalarFunction};
use crate::riccati::RiccatiEquation;
use crate::scalar::Real;

/// Worst residual found on a sample grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSweep<T> {
    pub grid_size: usize,
    pub max_abs: T,
    pub max_rel: T,
    pub worst_x: T,
}

impl<T: Real> ResidualSweep<T> {
    /// NaN-aware: a NaN residual never counts as passing.
    pub fn passes(&self, tol: T) -> bool {
        self.max_rel <= tol
    }
}

fn evaluate<T, F>(grid: &[T], f: F) -> Vec<T>
where
    T: Real,
    F: Fn(T) -> T + Sync,
{
    // fixed chunking, results gathered in grid order
    grid.par_iter().map(|&x| f(x)).collect()
}

/// Index of the largest |value|; NaN wins.
fn worst_index<T: Real>(values: &[T]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        match best {
            None => best = Some(i),
            Some(b) => {
                let current = values[b];
                if current.is_nan() {
                    break;
                }
                if v.is_nan() || v.abs() > current.abs() {
                    best = Some(i);
                }
            }
        }
    }
    best
}

/// `-φ'' + (V - E)φ` over `gridSize` points of `dom(V) ∩ dom(φ)` inside the
/// default window, log-spaced on half-lines. `φ''` uses the five-point
/// stencil of [`ScalarFunction::second_difference`]. `max_rel` divides by
/// `max|φ| · (1 + max|V - E|)` over the sweep.
pub fn schrodinger_residual_sweep<T: Real>(
    potential: &ScalarFunction<T>,
    energy: T,
    phi: &ScalarFunction<T>,
    grid_size: usize,
) -> Result<ResidualSweep<T>> {
    schrodinger_residual_sweep_in(potential, energy, phi, grid_size, &Interval::default_window())
}

/// [`schrodinger_residual_sweep`] inside an explicit window.
pub fn schrodinger_residual_sweep_in<T: Real>(
    potential: &ScalarFunction<T>,
    energy: T,
    phi: &ScalarFunction<T>,
    grid_size: usize,
    window: &Interval<T>,
) -> Result<ResidualSweep<T>> {
    let domain = potential.domain().intersect(phi.domain());
    let grid = domain.grid(grid_size, window);
    if grid.is_empty() {
        return Err(Error::Domain("residual sweep has no interior points".into()));
    }
    let phis = evaluate(&grid, |x| phi.eval(x));
    let shifts = evaluate(&grid, |x| potential.eval(x) - energy);
    let max_phi = phis.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if max_phi == T::zero() {
        return Err(Error::DegenerateInput("wavefunction vanishes on the sweep grid".into()));
    }
    let max_shift = shifts.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let residuals: Vec<T> = grid
        .par_iter()
        .zip(phis.par_iter().zip(shifts.par_iter()))
        .map(|(&x, (&p, &s))| -phi.second_difference(x) + s * p)
        .collect();
    let i = worst_index(&residuals).expect("non-empty grid");
    let max_abs = residuals[i].abs();
    Ok(ResidualSweep {
        grid_size: grid.len(),
        max_abs,
        max_rel: max_abs / (max_phi * (T::one() + max_shift)),
        worst_x: grid[i],
    })
}

/// Riccati residual `y' - a₂y² - a₁y - a₀` at the given points. `max_rel`
/// is the largest pointwise residual scaled by
/// `1 + |y'| + |a₂y²| + |a₁y| + |a₀|`.
pub fn riccati_residual_sweep<T: Real>(eq: &RiccatiEquation<T>, y: &ScalarFunction<T>, grid: &[T]) -> Result<ResidualSweep<T>> {
    if grid.is_empty() {
        return Err(Error::Domain("residual sweep has no interior points".into()));
    }
    let dy = y.derivative();
    let pairs: Vec<(T, T)> = grid
        .par_iter()
        .map(|&x| {
            let (r, scale) = eq.residual_parts(y, &dy, x);
            (r, r.abs() / scale)
        })
        .collect();
    let abs: Vec<T> = pairs.iter().map(|p| p.0).collect();
    let rel: Vec<T> = pairs.iter().map(|p| p.1).collect();
    let ia = worst_index(&abs).expect("non-empty grid");
    let ir = worst_index(&rel).expect("non-empty grid");
    Ok(ResidualSweep {
        grid_size: grid.len(),
        max_abs: abs[ia].abs(),
        max_rel: rel[ir].abs(),
        worst_x: grid[ir],
    })
}
