use crate::error::{Error, Result};
use crate::scalar::Real;

/// Degree and parameter of a generalized Laguerre polynomial `L_k^a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaguerreSpec<T> {
    degree: usize,
    parameter: T,
}

impl<T: Real> LaguerreSpec<T> {
    pub fn new(degree: i64, parameter: T) -> Result<Self> {
        let degree = usize::try_from(degree)
            .map_err(|_| Error::Argument(format!("Laguerre degree must be nonnegative, got {degree}")))?;
        Ok(Self { degree, parameter })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn parameter(&self) -> T {
        self.parameter
    }
}

/// `L_k^a(u)` by the three-term recurrence.
pub fn laguerre<T: Real>(spec: &LaguerreSpec<T>, u: T) -> T {
    laguerre_eval(spec.degree, spec.parameter, u)
}

/// `L_k^a(u)` by the upward recurrence
/// `n L_n = (2n - 1 + a - u) L_{n-1} - (n - 1 + a) L_{n-2}`.
pub fn laguerre_eval<T: Real>(degree: usize, a: T, u: T) -> T {
    let mut prev = T::one();
    if degree == 0 {
        return prev;
    }
    let mut cur = T::one() + a - u;
    for n in 2..=degree {
        let nt = T::count(n);
        let next = ((T::lit(2.0) * nt - T::one() + a - u) * cur - (nt - T::one() + a) * prev) / nt;
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma_fn;

    /// Σ_j (-1)^j C(k+a, k-j) u^j / j!, with the generalized binomial via Γ.
    fn series(k: usize, a: f64, u: f64) -> f64 {
        let binom = |n: f64, m: usize| {
            gamma_fn(n + 1.0).unwrap() / (gamma_fn(m as f64 + 1.0).unwrap() * gamma_fn(n - m as f64 + 1.0).unwrap())
        };
        (0..=k)
            .map(|j| {
                let fact: f64 = (1..=j).map(|i| i as f64).product();
                (-1f64).powi(j as i32) * binom(k as f64 + a, k - j) * u.powi(j as i32) / fact
            })
            .sum()
    }

    #[test]
    fn low_degrees() {
        assert_eq!(laguerre_eval(0, 3.3, -7.0), 1.0);
        assert_eq!(laguerre_eval(1, 0.5, 2.0), -0.5);
    }

    #[test]
    fn degree_five_matches_series() {
        let r = laguerre_eval(5, 1.5, 3.7);
        let s = series(5, 1.5, 3.7);
        assert!((r - s).abs() <= 1e-12 * s.abs().max(1.0), "{r} vs {s}");
    }

    #[test]
    fn negative_degree_rejected() {
        assert!(LaguerreSpec::new(-1, 0.5).is_err());
        let spec = LaguerreSpec::new(2, 0.0f64).unwrap();
        // L_2^0(u) = 1 - 2u + u²/2
        assert!((laguerre(&spec, 1.5) - (1.0 - 3.0 + 1.125)).abs() < 1e-15);
    }

    #[test]
    fn single_precision_instantiates() {
        let v: f32 = laguerre_eval(3, 0.5f32, 1.0);
        assert!((v as f64 - laguerre_eval(3, 0.5, 1.0)).abs() < 1e-5);
    }
}
