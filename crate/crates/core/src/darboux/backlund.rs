use crate::error::{Error, Result};
use crate::fnspace::{zeros_in, ScalarFunction};
use crate::reduction::{log_derivative, SignConvention};
use crate::riccati::{GaugeCurve, POLE_GUARD};
use crate::scalar::Real;
use crate::verify::schrodinger_residual_sweep_in;

use super::checks::{check_output, require_riccati, require_schrodinger, riccati_residual_conditioned, Tolerances, TransformReport};

/// A gauge function `γ` that never vanishes on its domain.
#[derive(Debug, Clone)]
pub struct GammaGauge<T: Real> {
    gamma: ScalarFunction<T>,
}

impl<T: Real> GammaGauge<T> {
    pub fn new(gamma: ScalarFunction<T>) -> Result<Self> {
        let window = crate::fnspace::Interval::default_window();
        let crossings = zeros_in(&gamma, &window);
        if let Some(x) = crossings.first() {
            return Err(Error::Gauge(format!("gamma changes sign near x = {x}")));
        }
        for x in gamma.domain().grid(1000, &window) {
            let g = gamma.eval(x);
            if g == T::zero() || !g.is_finite() {
                return Err(Error::Gauge(format!("gamma({x}) = {g}")));
            }
        }
        Ok(Self { gamma })
    }

    /// Constant gauge on `domain`.
    pub fn constant(c: T, domain: crate::fnspace::Domain<T>) -> Result<Self> {
        Self::new(ScalarFunction::constant(c, domain))
    }

    pub fn gamma(&self) -> &ScalarFunction<T> {
        &self.gamma
    }

    pub fn negated(&self) -> Self {
        Self { gamma: -&self.gamma }
    }

    /// `1/γ²`.
    pub fn inverse_square(&self) -> ScalarFunction<T> {
        self.gamma.powi(-2)
    }
}

/// `A₀ = (1/√a) [[h, a - h²], [-1, h]]`.
pub fn backlund_element<T: Real>(h: &ScalarFunction<T>, a: T) -> Result<GaugeCurve<T>> {
    if !(a > T::zero()) {
        return Err(Error::Order(format!("A0 needs a positive energy gap, got {a}")));
    }
    let s = T::one() / a.sqrt();
    let d = h.domain().clone();
    GaugeCurve::new(
        h.scale(s),
        h.powi(2).scale(-T::one()).offset(a).scale(s),
        ScalarFunction::constant(-s, d),
        h.scale(s),
    )
}

/// `C₀ = γ [[-v + γ'/γ, v² - vγ'/γ - 1/γ²], [1, -v]]`.
pub fn generalized_element<T: Real>(gauge: &GammaGauge<T>, v: &ScalarFunction<T>) -> Result<GaugeCurve<T>> {
    let g = gauge.gamma();
    let dg = g.derivative();
    let gv = g * v;
    GaugeCurve::new(
        &dg - &gv,
        &(&(&gv * v) - &(v * &dg)) - &g.recip(),
        g.clone(),
        -gv,
    )
}

fn excise_crossings<T: Real>(diff: &ScalarFunction<T>, tol: &Tolerances<T>) -> Result<crate::fnspace::Domain<T>> {
    let roots = zeros_in(diff, &tol.window);
    let domain = diff.domain().excise(&roots, T::lit(POLE_GUARD));
    if domain.is_empty() {
        return Err(Error::Domain("no interval where the two solutions differ".into()));
    }
    Ok(domain)
}

/// `w_kl = -w_k - (ε_k - ε_l)/(w_k - w_l)`, a solution of
/// `w' + w² = V - 2w_k' - ε_l`.
pub fn finite_difference_backlund<T: Real>(
    w_k: &ScalarFunction<T>,
    w_l: &ScalarFunction<T>,
    eps_k: T,
    eps_l: T,
    potential: &ScalarFunction<T>,
) -> Result<TransformReport<T>> {
    finite_difference_backlund_with(w_k, w_l, eps_k, eps_l, potential, &Tolerances::default())
}

pub fn finite_difference_backlund_with<T: Real>(
    w_k: &ScalarFunction<T>,
    w_l: &ScalarFunction<T>,
    eps_k: T,
    eps_l: T,
    potential: &ScalarFunction<T>,
    tol: &Tolerances<T>,
) -> Result<TransformReport<T>> {
    if !(eps_k < eps_l) {
        return Err(Error::Order(format!("need eps_k < eps_l, got {eps_k} and {eps_l}")));
    }
    require_riccati("w_k", w_k, &potential.offset(-eps_k), tol)?;
    require_riccati("w_l", w_l, &potential.offset(-eps_l), tol)?;
    let domain = excise_crossings(&(w_k - w_l).restrict(potential.domain()), tol)?;
    let w_k = w_k.restrict(&domain);
    let diff = &w_k - w_l;
    let out = (&(-&w_k) - &diff.recip().scale(eps_k - eps_l)).restrict(&domain);
    let shift = (&(potential - &w_k.derivative().scale(T::lit(2.0)))).offset(-eps_l).restrict(&domain);
    let (r, skipped_points) = riccati_residual_conditioned(&out, &shift, &w_k, w_l, tol)?;
    check_output("finite-difference Backlund", r, tol)?;
    Ok(TransformReport {
        new_potential_shift: shift,
        new_solution: out,
        energy: eps_l,
        max_residual: r,
        domain,
        skipped_points,
    })
}

/// `V - 2(γ'/γ v + v') + γ''/γ - ε`.
fn generalized_shift<T: Real>(
    v: &ScalarFunction<T>,
    gauge: &GammaGauge<T>,
    potential: &ScalarFunction<T>,
    eps: T,
) -> ScalarFunction<T> {
    let g = gauge.gamma();
    let dg = g.derivative();
    let ddg = dg.derivative();
    let drift = &(&(&dg / g) * v) + &v.derivative();
    (&(potential - &drift.scale(T::lit(2.0))) + &(&ddg / g)).offset(-eps)
}

/// `w̄ = -v - (1/γ²)/(w - v) + γ'/γ`.
pub fn generalized_backlund<T: Real>(
    w: &ScalarFunction<T>,
    v: &ScalarFunction<T>,
    gauge: &GammaGauge<T>,
    potential: &ScalarFunction<T>,
    eps: T,
) -> Result<TransformReport<T>> {
    generalized_backlund_with(w, v, gauge, potential, eps, &Tolerances::default())
}

pub fn generalized_backlund_with<T: Real>(
    w: &ScalarFunction<T>,
    v: &ScalarFunction<T>,
    gauge: &GammaGauge<T>,
    potential: &ScalarFunction<T>,
    eps: T,
    tol: &Tolerances<T>,
) -> Result<TransformReport<T>> {
    let g = gauge.gamma();
    let inv_sq = gauge.inverse_square();
    require_riccati("w", w, &potential.offset(-eps), tol)?;
    require_riccati("v", v, &(potential + &inv_sq).offset(-eps), tol)?;
    let diff = (w - v).restrict(&potential.domain().intersect(g.domain()));
    let domain = excise_crossings(&diff, tol)?;
    let v = v.restrict(&domain);
    let out = (&(&(-&v) - &(&inv_sq / &diff)) + &(&g.derivative() / g)).restrict(&domain);
    let shift = generalized_shift(&v, gauge, potential, eps).restrict(&domain);
    let (r, skipped_points) = riccati_residual_conditioned(&out, &shift, w, &v, tol)?;
    check_output("generalized Backlund", r, tol)?;
    Ok(TransformReport {
        new_potential_shift: shift,
        new_solution: out,
        energy: eps,
        max_residual: r,
        domain,
        skipped_points,
    })
}

/// `φ_w̄ = γ(-φ_w' + (φ_v'/φ_v) φ_w)`, a solution of
/// `-φ'' + (V̄ - ε̄)φ = 0` with the shift of [`generalized_backlund`].
/// The output is not normalized.
pub fn schrodinger_backlund<T: Real>(
    phi_w: &ScalarFunction<T>,
    phi_v: &ScalarFunction<T>,
    gauge: &GammaGauge<T>,
    potential: &ScalarFunction<T>,
    eps: T,
) -> Result<TransformReport<T>> {
    schrodinger_backlund_with(phi_w, phi_v, gauge, potential, eps, &Tolerances::default())
}

pub fn schrodinger_backlund_with<T: Real>(
    phi_w: &ScalarFunction<T>,
    phi_v: &ScalarFunction<T>,
    gauge: &GammaGauge<T>,
    potential: &ScalarFunction<T>,
    eps: T,
    tol: &Tolerances<T>,
) -> Result<TransformReport<T>> {
    let g = gauge.gamma();
    require_schrodinger("phi_w", phi_w, potential, eps, tol)?;
    require_schrodinger("phi_v", phi_v, &(potential + &gauge.inverse_square()), eps, tol)?;
    let v = log_derivative(phi_v, SignConvention::Plus)?;
    let w = log_derivative(phi_w, SignConvention::Plus)?;
    let common = v.domain().intersect(g.domain()).intersect(potential.domain());
    let grid = common.intersect(w.domain()).grid(tol.grid, &tol.window);
    let distinct = grid.iter().any(|&x| {
        let (a, b) = (w.eval(x), v.eval(x));
        (a - b).abs() > T::lit(1e-9) * (T::one() + a.abs() + b.abs())
    });
    if !distinct {
        return Err(Error::DegenerateInput("phi_v is proportional to phi_w".into()));
    }
    let domain = phi_w.domain().intersect(&common);
    let phi_w = phi_w.restrict(&domain);
    let out = (g * &(&(&v * &phi_w) - &phi_w.derivative())).restrict(&domain);
    let shift = generalized_shift(&v, gauge, potential, eps).restrict(&domain);
    let r = schrodinger_residual_sweep_in(&shift, T::zero(), &out, tol.grid, &tol.window)?.max_rel;
    check_output("Schrodinger-level Backlund", r, tol)?;
    Ok(TransformReport {
        new_potential_shift: shift,
        new_solution: out,
        energy: eps,
        max_residual: r,
        domain,
        skipped_points: 0,
    })
}
