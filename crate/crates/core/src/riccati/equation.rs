use std::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::fnspace::{Domain, ScalarFunction};
use crate::scalar::Real;

/// Pointwise coefficients `(a₂, a₁, a₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoefficientTriple<T> {
    pub c2: T,
    pub c1: T,
    pub c0: T,
}

impl<T: Real> CoefficientTriple<T> {
    pub fn new(c2: T, c1: T, c0: T) -> Self {
        Self { c2, c1, c0 }
    }

    pub fn to_array(self) -> [T; 3] {
        [self.c2, self.c1, self.c0]
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    /// Largest component in absolute value.
    pub fn max_abs(self) -> T {
        self.c2.abs().max(self.c1.abs()).max(self.c0.abs())
    }

    pub fn is_finite(self) -> bool {
        self.c2.is_finite() && self.c1.is_finite() && self.c0.is_finite()
    }
}

impl<T: Real> Add for CoefficientTriple<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.c2 + o.c2, self.c1 + o.c1, self.c0 + o.c0)
    }
}

impl<T: Real> Sub for CoefficientTriple<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.c2 - o.c2, self.c1 - o.c1, self.c0 - o.c0)
    }
}

/// `y' = a₂ y² + a₁ y + a₀` on the common domain of the coefficients.
#[derive(Debug, Clone)]
pub struct RiccatiEquation<T: Real> {
    a2: ScalarFunction<T>,
    a1: ScalarFunction<T>,
    a0: ScalarFunction<T>,
    domain: Domain<T>,
}

impl<T: Real> RiccatiEquation<T> {
    pub fn new(a2: ScalarFunction<T>, a1: ScalarFunction<T>, a0: ScalarFunction<T>) -> Result<Self> {
        let domain = a2.domain().intersect(a1.domain()).intersect(a0.domain());
        if domain.is_empty() {
            return Err(Error::Domain("Riccati coefficients share no common interval".into()));
        }
        Ok(Self { a2, a1, a0, domain })
    }

    /// Constant coefficients on `domain`.
    pub fn constant(c: CoefficientTriple<T>, domain: Domain<T>) -> Result<Self> {
        Self::new(
            ScalarFunction::constant(c.c2, domain.clone()),
            ScalarFunction::constant(c.c1, domain.clone()),
            ScalarFunction::constant(c.c0, domain),
        )
    }

    pub fn a2(&self) -> &ScalarFunction<T> {
        &self.a2
    }

    pub fn a1(&self) -> &ScalarFunction<T> {
        &self.a1
    }

    pub fn a0(&self) -> &ScalarFunction<T> {
        &self.a0
    }

    pub fn domain(&self) -> &Domain<T> {
        &self.domain
    }

    pub fn coefficients_at(&self, x: T) -> CoefficientTriple<T> {
        CoefficientTriple::new(self.a2.eval(x), self.a1.eval(x), self.a0.eval(x))
    }

    /// Residual and its natural scale `1 + |y'| + |a₂y²| + |a₁y| + |a₀|`,
    /// given a precomputed `dy = y'`.
    pub fn residual_parts(&self, y: &ScalarFunction<T>, dy: &ScalarFunction<T>, x: T) -> (T, T) {
        let yv = y.eval(x);
        let d = dy.eval(x);
        let c = self.coefficients_at(x);
        let t2 = c.c2 * yv * yv;
        let t1 = c.c1 * yv;
        let r = d - t2 - t1 - c.c0;
        (r, T::one() + d.abs() + t2.abs() + t1.abs() + c.c0.abs())
    }

    /// Residual of `y` as a function.
    pub fn residual_function(&self, y: &ScalarFunction<T>) -> ScalarFunction<T> {
        &(&(&y.derivative() - &(&self.a2 * &y.powi(2))) - &(&self.a1 * y)) - &self.a0
    }
}

/// `y'(x) - a₂(x)y(x)² - a₁(x)y(x) - a₀(x)`.
pub fn residual<T: Real>(eq: &RiccatiEquation<T>, y: &ScalarFunction<T>, x: T) -> T {
    let yv = y.eval(x);
    let c = eq.coefficients_at(x);
    y.derivative_at(x) - c.c2 * yv * yv - c.c1 * yv - c.c0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reciprocal_solves_minus_y_squared() {
        let eq = RiccatiEquation::constant(CoefficientTriple::new(-1.0f64, 0.0, 0.0), Domain::half_line()).unwrap();
        let y = ScalarFunction::identity(Domain::half_line()).recip();
        for x in [0.1f64, 1.0, 7.5] {
            assert!(residual(&eq, &y, x).abs() < 1e-12);
        }
    }

    #[test]
    fn oscillator_ground_state_log_derivative() {
        // w = 1/x - x solves w' + w² = x² - 3
        let d = Domain::half_line();
        let x = ScalarFunction::identity(d.clone());
        let w = &x.recip() - &x;
        let eq = RiccatiEquation::new(
            ScalarFunction::constant(-1.0, d.clone()),
            ScalarFunction::constant(0.0, d.clone()),
            x.powi(2).offset(-3.0),
        )
        .unwrap();
        for t in [0.01f64, 0.5, 2.0, 30.0] {
            let (r, scale) = eq.residual_parts(&w, &w.derivative(), t);
            assert!(r.abs() / scale < 1e-13, "{t}: {r}");
        }
    }

    #[test]
    fn disjoint_coefficients_are_rejected() {
        let a = ScalarFunction::constant(1.0, Domain::single(0.0, 1.0).unwrap());
        let b = ScalarFunction::constant(1.0, Domain::single(2.0, 3.0).unwrap());
        assert!(RiccatiEquation::new(a.clone(), b, a).is_err());
    }
}
