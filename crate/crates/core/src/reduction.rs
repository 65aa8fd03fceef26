//! Log-derivative reduction between Schrödinger equations and Riccati
//! equations, in both sign conventions.

use crate::error::{Error, Result};
use crate::fnspace::{restrict_to_sign_intervals, Interval, ScalarFunction};
use crate::riccati::RiccatiEquation;
use crate::scalar::Real;
use crate::verify::{integrate_fn, QuadratureSpec};

/// `W₊ = φ'/φ` or `W₋ = -φ'/φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignConvention {
    Plus,
    Minus,
}

impl SignConvention {
    pub fn factor<T: Real>(self) -> T {
        match self {
            SignConvention::Plus => T::one(),
            SignConvention::Minus => -T::one(),
        }
    }
}

/// `-φ'' + (V - ε)φ = 0`.
#[derive(Debug, Clone)]
pub struct SchrodingerProblem<T: Real> {
    pub potential: ScalarFunction<T>,
    pub energy: T,
}

impl<T: Real> SchrodingerProblem<T> {
    pub fn new(potential: ScalarFunction<T>, energy: T) -> Self {
        Self { potential, energy }
    }

    /// `V - ε` as a function.
    pub fn shift(&self) -> ScalarFunction<T> {
        self.potential.offset(-self.energy)
    }
}

/// `±φ'/φ` on the sign intervals of `φ`.
pub fn log_derivative<T: Real>(phi: &ScalarFunction<T>, sign: SignConvention) -> Result<ScalarFunction<T>> {
    let grid = phi.domain().grid(1000, &Interval::default_window());
    if grid.iter().all(|&x| phi.eval(x) == T::zero()) {
        return Err(Error::DegenerateInput("wavefunction vanishes identically on the window".into()));
    }
    let domain = restrict_to_sign_intervals(phi);
    if domain.is_empty() {
        return Err(Error::DegenerateInput("wavefunction has no sign interval".into()));
    }
    let w = phi.log_derivative().restrict(&domain);
    Ok(match sign {
        SignConvention::Plus => w,
        SignConvention::Minus => -w,
    })
}

/// PLUS: `w' = -w² + (V - ε)`; MINUS: `w' = w² - (V - ε)`.
pub fn schrodinger_to_riccati<T: Real>(p: &SchrodingerProblem<T>, sign: SignConvention) -> Result<RiccatiEquation<T>> {
    let d = p.potential.domain().clone();
    let s = sign.factor::<T>();
    RiccatiEquation::new(
        ScalarFunction::constant(-s, d.clone()),
        ScalarFunction::constant(T::zero(), d),
        p.shift().scale(s),
    )
}

fn reconstructed<T: Real>(core: ScalarFunction<T>, w: ScalarFunction<T>) -> ScalarFunction<T> {
    let c = core.clone();
    core.with_derivative_fn(move || &reconstructed(c.clone(), w.clone()) * &w)
}

/// `x ↦ exp(∫_{x0}^x w)` on the interval of `w`'s domain containing `x0`,
/// so the result equals 1 at `x0`. The integral is computed by adaptive
/// quadrature at every evaluation.
pub fn reconstruct_wavefunction<T: Real>(w: &ScalarFunction<T>, x0: T) -> Result<ScalarFunction<T>> {
    let iv = *w
        .domain()
        .component(x0)
        .ok_or_else(|| Error::Domain(format!("anchor {x0} is outside the domain of w")))?;
    let spec = QuadratureSpec {
        abs_tol: T::lit(1e-13),
        rel_tol: T::lit(1e-12),
        ..QuadratureSpec::default()
    };
    let integrand = w.clone();
    let eval = move |x: T| {
        if x == x0 {
            return T::one();
        }
        let (a, b, s) = if x > x0 { (x0, x, T::one()) } else { (x, x0, -T::one()) };
        let window = Interval::new(a, b).expect("distinct points");
        let integral = match integrate_fn(|t| integrand.eval(t), &window, &spec) {
            Ok(q) => q.value,
            Err(Error::Convergence { estimate, .. }) => T::lit(estimate),
            Err(_) => T::nan(),
        };
        (s * integral).exp()
    };
    let domain = crate::fnspace::Domain::new(vec![iv])?;
    let hint = w.restrict(&domain);
    let core = ScalarFunction::new(eval, domain)?.with_log_derivative_fn(move || hint.clone());
    Ok(reconstructed(core, w.restrict(&crate::fnspace::Domain::new(vec![iv])?)))
}
