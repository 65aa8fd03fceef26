use std::str::FromStr;

use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::fnspace::{make_function, Domain, Interval, ScalarFunction};
use crate::riccati::{
    act_on_coefficients, act_on_solution, cocycle_theta, compose, random_gauge_curve, representation_B, GaugeCurve, RiccatiEquation,
};
use crate::verify::{riccati_residual_sweep, QuadratureSpec};

use super::config::Family;
use super::pipeline::{eigenpair, gram_deviation};
use super::report::Outcome;

pub const GROUP_LAW_CURVES: usize = 20;
pub const GROUP_LAW_SEED: u64 = 0x5eed_0001;
const GROUP_LAW_GRID: usize = 500;
const GROUP_LAW_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    GroupLaw,
    Orthonormality,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "group-law" | "group_law" => Ok(Suite::GroupLaw),
            "orthonormality" => Ok(Suite::Orthonormality),
            "all" => Ok(Suite::All),
            _ => Err(Error::Config(format!("suite must be group-law, orthonormality or all, got '{s}'"))),
        }
    }
}

/// Worst pointwise `|a - b| / (1 + |b|)` over `grid`, skipping points
/// outside either domain.
fn pointwise(a: &ScalarFunction<f64>, b: &ScalarFunction<f64>, grid: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for &x in grid {
        if !(a.domain().contains(x) && b.domain().contains(x)) {
            continue;
        }
        let (u, v) = (a.eval(x), b.eval(x));
        let d = (u - v).abs() / (1.0 + v.abs());
        if d.is_nan() {
            return f64::NAN;
        }
        worst = worst.max(d);
    }
    worst
}

/// `y' = 1 - y²` with `y = tanh x`.
fn reference_equation(domain: &Domain<f64>) -> Result<(RiccatiEquation<f64>, ScalarFunction<f64>)> {
    let y = make_function(f64::tanh, Some(|x: f64| 1.0 / x.cosh().powi(2)), domain.clone())?;
    let eq = RiccatiEquation::new(
        ScalarFunction::constant(-1.0, domain.clone()),
        ScalarFunction::constant(0.0, domain.clone()),
        ScalarFunction::constant(1.0, domain.clone()),
    )?;
    Ok((eq, y))
}

/// NaN-sticky maximum.
fn bump(m: &mut f64, v: f64) {
    if m.is_nan() || v.is_nan() {
        *m = f64::NAN;
    } else {
        *m = m.max(v);
    }
}

/// Smooth equation used for the coefficient-level composition.
fn generic_equation(domain: &Domain<f64>) -> Result<RiccatiEquation<f64>> {
    let x = ScalarFunction::identity(domain.clone());
    RiccatiEquation::new(
        x.scale(0.3).offset(-1.0),
        x.scale(-0.2).exp(),
        x.powi(2).scale(0.05).offset(0.5),
    )
}

/// Seeded group-law, composition and cocycle checks on `(0.1, 10)`.
pub fn group_law(o: &mut Outcome, tol: f64) -> Result<()> {
    let domain = Domain::single(0.1, 10.0)?;
    let grid = Interval::new(0.1, 10.0)?.grid(GROUP_LAW_GRID);
    let mut rng = StdRng::seed_from_u64(GROUP_LAW_SEED);
    let curves: Vec<GaugeCurve<f64>> = (0..GROUP_LAW_CURVES).map(|_| random_gauge_curve(&mut rng, &domain)).collect();
    let (eq, y) = reference_equation(&domain)?;
    let generic = generic_equation(&domain)?;

    let (mut action, mut coefficients, mut cocycle, mut residual) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (i, a1) in curves.iter().enumerate() {
        let a2 = &curves[(i + 1) % curves.len()];
        let a12 = compose(a1, a2);

        let nested = act_on_solution(a1, &act_on_solution(a2, &y)?)?;
        let direct = act_on_solution(&a12, &y)?;
        bump(&mut action, pointwise(&nested, &direct, &grid));

        let nested_eq = act_on_coefficients(a1, &act_on_coefficients(a2, &generic)?)?;
        let direct_eq = act_on_coefficients(&a12, &generic)?;
        for (u, v) in [
            (nested_eq.a2(), direct_eq.a2()),
            (nested_eq.a1(), direct_eq.a1()),
            (nested_eq.a0(), direct_eq.a0()),
        ] {
            bump(&mut coefficients, pointwise(u, v, &grid));
        }

        for &x in &grid {
            let lhs = cocycle_theta(&a12, x);
            let rhs = representation_B(a1, cocycle_theta(a2, x), x) + cocycle_theta(a1, x);
            let d = (lhs - rhs).max_abs() / (1.0 + lhs.max_abs());
            bump(&mut cocycle, d);
        }

        let moved_eq = act_on_coefficients(a1, &eq)?;
        let moved_y = act_on_solution(a1, &y)?;
        let g = moved_y.domain().grid(GROUP_LAW_GRID, &Interval::new(0.1, 10.0)?);
        bump(&mut residual, riccati_residual_sweep(&moved_eq, &moved_y, &g)?.max_rel);
    }
    o.at_most("group_law.action", action, GROUP_LAW_TOL);
    o.at_most("group_law.coefficients", coefficients, GROUP_LAW_TOL);
    o.at_most("group_law.cocycle", cocycle, GROUP_LAW_TOL);
    o.residual("group_law.transported_solution", residual, tol);
    o.diag("group_law.curves", GROUP_LAW_CURVES);
    o.diag("group_law.seed", GROUP_LAW_SEED);
    Ok(())
}

/// Gram matrix of the first `kmax + 1` eigenfunctions.
pub fn orthonormality(o: &mut Outcome, family: &Family, kmax: usize) -> Result<()> {
    let states = (0..=kmax)
        .map(|k| eigenpair(family, k).map(|e| e.wavefunction))
        .collect::<Result<Vec<_>>>()?;
    let dev = gram_deviation(&states, &QuadratureSpec::default())?;
    o.norm("gram.deviation", dev);
    o.at_most("orthonormality.gram", dev, 2e-4);
    o.diag("orthonormality.kmax", kmax);
    o.diag("orthonormality.family", family.name());
    Ok(())
}
