use crate::error::{Error, Result};
use crate::fnspace::{zeros_in, ScalarFunction};
use crate::scalar::Real;

use super::checks::{require_riccati, Tolerances};

/// Superpotential `W` and factorization energy `ε` with
/// `W' + W² = V - ε`.
#[derive(Debug, Clone)]
pub struct FactorizationData<T: Real> {
    pub superpotential: ScalarFunction<T>,
    pub energy: T,
}

impl<T: Real> FactorizationData<T> {
    pub fn new(superpotential: ScalarFunction<T>, energy: T) -> Self {
        Self { superpotential, energy }
    }

    /// `V = W' + W² + ε`.
    pub fn lower_potential(&self) -> ScalarFunction<T> {
        let w = &self.superpotential;
        (&w.derivative() + &w.powi(2)).offset(self.energy)
    }

    /// `Ṽ = -W' + W² + ε`.
    pub fn upper_potential(&self) -> ScalarFunction<T> {
        let w = &self.superpotential;
        (&w.powi(2) - &w.derivative()).offset(self.energy)
    }
}

/// Partner potential `V₁ = V₀ - 2W₁'` with `W₁ = ψ₀'/ψ₀`.
pub fn intertwine_pair<T: Real>(
    v0: &ScalarFunction<T>,
    ground_state: &ScalarFunction<T>,
    e0: T,
) -> Result<(ScalarFunction<T>, FactorizationData<T>)> {
    intertwine_pair_with(v0, ground_state, e0, &Tolerances::default())
}

pub fn intertwine_pair_with<T: Real>(
    v0: &ScalarFunction<T>,
    ground_state: &ScalarFunction<T>,
    e0: T,
    tol: &Tolerances<T>,
) -> Result<(ScalarFunction<T>, FactorizationData<T>)> {
    if let Some(x) = zeros_in(ground_state, &tol.window).first() {
        return Err(Error::NotGroundState(format!("sign change near x = {x}")));
    }
    let w1 = ground_state.log_derivative().restrict(v0.domain());
    let v1 = v0 - &w1.derivative().scale(T::lit(2.0));
    require_riccati("W1 against V0", &w1, &v0.offset(-e0), tol)?;
    require_riccati("-W1 against V1", &(-&w1), &v1.offset(-e0), tol)?;
    Ok((v1, FactorizationData::new(w1, e0)))
}

/// `ψ⁽¹⁾ = (-ψ' + W₁ψ)/√(E - E₀)`.
pub fn map_eigenfunction<T: Real>(w1: &FactorizationData<T>, psi: &ScalarFunction<T>, energy: T) -> Result<ScalarFunction<T>> {
    if !(energy > w1.energy) {
        return Err(Error::EnergyOrder {
            energy: energy.to_f64_lossy(),
            factorization_energy: w1.energy.to_f64_lossy(),
        });
    }
    let s = T::one() / (energy - w1.energy).sqrt();
    Ok((&(&w1.superpotential * psi) - &psi.derivative()).scale(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fnspace::Domain;

    fn x() -> ScalarFunction<f64> {
        ScalarFunction::identity(Domain::half_line())
    }

    #[test]
    fn oscillator_partner_is_shape_invariant() {
        let v0 = x().powi(2).offset(-3.0);
        let g = &x() * &x().powi(2).scale(-0.5).exp();
        let (v1, w) = intertwine_pair(&v0, &g, 0.0).unwrap();
        for t in [0.1, 1.0, 5.0] {
            // l -> 1: x² + 2/x² - 3 + 2
            let expect = t * t + 2.0 / (t * t) - 1.0;
            assert!((v1.eval(t) - expect).abs() < 1e-9 * expect.abs());
            assert!((w.superpotential.eval(t) - (1.0 / t - t)).abs() < 1e-12 * (1.0 / t + t));
        }
    }

    #[test]
    fn excited_state_is_not_a_ground_state() {
        let v0 = x().powi(2).offset(-3.0);
        let p1 = &(&x() * &x().powi(2).scale(-1.0).offset(1.5)) * &x().powi(2).scale(-0.5).exp();
        assert!(matches!(intertwine_pair(&v0, &p1, 4.0), Err(Error::NotGroundState(_))));
    }

    #[test]
    fn energy_must_exceed_factorization_energy() {
        let w = FactorizationData::new(x().recip(), 1.0);
        assert!(matches!(map_eigenfunction(&w, &x(), 1.0), Err(Error::EnergyOrder { .. })));
    }
}
