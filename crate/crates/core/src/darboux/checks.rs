use crate::error::{Error, Result};
use crate::fnspace::{Domain, Interval, ScalarFunction};
use crate::reduction::{log_derivative, SignConvention};
use crate::riccati::RiccatiEquation;
use crate::scalar::Real;
use crate::verify::{riccati_residual_sweep, schrodinger_residual_sweep_in};

/// Thresholds and sampling used to verify inputs and outputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Largest residual accepted for an input solution.
    pub precondition: T,
    /// Largest residual accepted for a transformed solution.
    pub residual: T,
    /// Sampling window on half-lines.
    pub window: Interval<T>,
    pub grid: usize,
    /// When false, an output residual above `residual` is reported in the
    /// [`TransformReport`] instead of raised.
    pub enforce: bool,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            precondition: T::lit(1e-6),
            residual: T::lit(1e-5),
            window: Interval::default_window(),
            grid: 500,
            enforce: true,
        }
    }
}

/// Result of a transformation.
///
/// `new_potential_shift` is `V̄ - ε̄` as a single function; `energy` is the
/// `ε` the transformation was driven with, so callers can split the shift
/// using whatever convention their example needs.
#[derive(Debug, Clone)]
pub struct TransformReport<T: Real> {
    pub new_potential_shift: ScalarFunction<T>,
    pub new_solution: ScalarFunction<T>,
    pub energy: T,
    pub max_residual: T,
    pub domain: Domain<T>,
    /// Sample points left out of `max_residual` because the inputs cancel
    /// there beyond double-precision resolution (see
    /// [`CANCELLATION_LIMIT`]).
    pub skipped_points: usize,
}

impl<T: Real> TransformReport<T> {
    pub fn passes(&self, tol: T) -> bool {
        self.max_residual <= tol
    }
}

/// Largest relative rounding error accepted in a difference `a - b` of two
/// input solutions, estimated as `ε_mach (|a| + |b|)/|a - b|`. Below the
/// origin scale where two log-derivatives share a `c/x` singularity the
/// difference has no correct digits left, so such points are not sampled.
pub const CANCELLATION_LIMIT: f64 = 1e-7;

/// `w' = -w² + shift`, i.e. `w' + w² = V - ε`.
pub fn riccati_plus<T: Real>(shift: &ScalarFunction<T>) -> Result<RiccatiEquation<T>> {
    let d = shift.domain().clone();
    RiccatiEquation::new(
        ScalarFunction::constant(-T::one(), d.clone()),
        ScalarFunction::constant(T::zero(), d),
        shift.clone(),
    )
}

/// Scaled Riccati residual of `w` in `w' + w² = shift` on the grid.
pub(crate) fn riccati_residual<T: Real>(w: &ScalarFunction<T>, shift: &ScalarFunction<T>, tol: &Tolerances<T>) -> Result<T> {
    let eq = riccati_plus(shift)?;
    let grid = w.domain().intersect(shift.domain()).grid(tol.grid, &tol.window);
    Ok(riccati_residual_sweep(&eq, w, &grid)?.max_rel)
}

/// Like [`riccati_residual`] but skipping points where `a - b` is
/// dominated by rounding. Returns the residual and the number skipped.
pub(crate) fn riccati_residual_conditioned<T: Real>(
    w: &ScalarFunction<T>,
    shift: &ScalarFunction<T>,
    a: &ScalarFunction<T>,
    b: &ScalarFunction<T>,
    tol: &Tolerances<T>,
) -> Result<(T, usize)> {
    let eq = riccati_plus(shift)?;
    let all = w.domain().intersect(shift.domain()).grid(tol.grid, &tol.window);
    let limit = T::lit(CANCELLATION_LIMIT);
    let grid: Vec<T> = all
        .iter()
        .copied()
        .filter(|&x| {
            let (u, v) = (a.eval(x), b.eval(x));
            T::epsilon() * (u.abs() + v.abs()) <= limit * (u - v).abs()
        })
        .collect();
    let skipped = all.len() - grid.len();
    Ok((riccati_residual_sweep(&eq, w, &grid)?.max_rel, skipped))
}

pub(crate) fn require_riccati<T: Real>(
    what: &str,
    w: &ScalarFunction<T>,
    shift: &ScalarFunction<T>,
    tol: &Tolerances<T>,
) -> Result<()> {
    let r = riccati_residual(w, shift, tol)?;
    if r <= tol.precondition {
        Ok(())
    } else {
        Err(Error::InvalidSolution {
            what: what.into(),
            residual: r.to_f64_lossy(),
            tolerance: tol.precondition.to_f64_lossy(),
        })
    }
}

pub(crate) fn require_schrodinger<T: Real>(
    what: &str,
    phi: &ScalarFunction<T>,
    potential: &ScalarFunction<T>,
    energy: T,
    tol: &Tolerances<T>,
) -> Result<()> {
    let grid = phi.domain().intersect(potential.domain()).grid(tol.grid, &tol.window);
    let r = if grid.iter().all(|&x| phi.eval(x).is_finite()) {
        schrodinger_residual_sweep_in(potential, energy, phi, tol.grid, &tol.window)?.max_rel
    } else {
        // φ overflows (formal, growing solutions); φ'/φ does not
        let w = log_derivative(phi, SignConvention::Plus)?;
        riccati_residual(&w, &potential.offset(-energy), tol)?
    };
    if r <= tol.precondition {
        Ok(())
    } else {
        Err(Error::InvalidSolution {
            what: what.into(),
            residual: r.to_f64_lossy(),
            tolerance: tol.precondition.to_f64_lossy(),
        })
    }
}

pub(crate) fn check_output<T: Real>(stage: &str, residual: T, tol: &Tolerances<T>) -> Result<()> {
    if !tol.enforce || residual <= tol.residual {
        Ok(())
    } else {
        Err(Error::ResidualExceeded {
            stage: stage.into(),
            residual: residual.to_f64_lossy(),
            tolerance: tol.residual.to_f64_lossy(),
        })
    }
}
