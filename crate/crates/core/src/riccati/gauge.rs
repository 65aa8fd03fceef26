use crate::error::{Error, Result};
use crate::fnspace::{zeros_in, Domain, Interval, ScalarFunction};
use crate::scalar::Real;

use super::equation::{CoefficientTriple, RiccatiEquation};

/// Half-width of the band removed around each pole of a Möbius image.
pub const POLE_GUARD: f64 = 1e-4;

const DET_SAMPLES: usize = 200;
const DET_TOL: f64 = 1e-9;

/// `x ↦ [[α, β], [γ, δ]]` with unit determinant.
#[derive(Debug, Clone)]
pub struct GaugeCurve<T: Real> {
    alpha: ScalarFunction<T>,
    beta: ScalarFunction<T>,
    gamma: ScalarFunction<T>,
    delta: ScalarFunction<T>,
    domain: Domain<T>,
}

impl<T: Real> GaugeCurve<T> {
    /// Validates `αδ - βγ = 1` on a 200-point grid of the common domain.
    /// The tolerance `1e-9` is taken relative to `max(1, |αδ| + |βγ|)`, so
    /// curves with large entries are not rejected for rounding alone.
    pub fn new(
        alpha: ScalarFunction<T>,
        beta: ScalarFunction<T>,
        gamma: ScalarFunction<T>,
        delta: ScalarFunction<T>,
    ) -> Result<Self> {
        let domain = alpha
            .domain()
            .intersect(beta.domain())
            .intersect(gamma.domain())
            .intersect(delta.domain());
        if domain.is_empty() {
            return Err(Error::Domain("gauge entries share no common interval".into()));
        }
        let curve = Self {
            alpha,
            beta,
            gamma,
            delta,
            domain,
        };
        for x in curve.domain.grid(DET_SAMPLES, &Interval::default_window()) {
            let [[a, b], [c, d]] = curve.at(x);
            let ad = a * d;
            let bc = b * c;
            let det = ad - bc;
            let scale = T::one().max(ad.abs() + bc.abs());
            if !((det - T::one()).abs() <= T::lit(DET_TOL) * scale) {
                return Err(Error::Gauge(format!("determinant {det} != 1 at x = {x}")));
            }
        }
        Ok(curve)
    }

    /// Constant matrix on `domain`.
    pub fn constant(m: [[T; 2]; 2], domain: Domain<T>) -> Result<Self> {
        let c = |v: T| ScalarFunction::constant(v, domain.clone());
        Self::new(c(m[0][0]), c(m[0][1]), c(m[1][0]), c(m[1][1]))
    }

    pub fn identity(domain: Domain<T>) -> Self {
        Self::constant([[T::one(), T::zero()], [T::zero(), T::one()]], domain).expect("identity has unit determinant")
    }

    /// `[[δ, -β], [-γ, α]]`.
    pub fn inverse(&self) -> Self {
        Self {
            alpha: self.delta.clone(),
            beta: -&self.beta,
            gamma: -&self.gamma,
            delta: self.alpha.clone(),
            domain: self.domain.clone(),
        }
    }

    pub fn at(&self, x: T) -> [[T; 2]; 2] {
        [
            [self.alpha.eval(x), self.beta.eval(x)],
            [self.gamma.eval(x), self.delta.eval(x)],
        ]
    }

    /// Entry derivatives at `x`, same layout as [`GaugeCurve::at`].
    pub fn derivative_at(&self, x: T) -> [[T; 2]; 2] {
        [
            [self.alpha.derivative_at(x), self.beta.derivative_at(x)],
            [self.gamma.derivative_at(x), self.delta.derivative_at(x)],
        ]
    }

    pub fn alpha(&self) -> &ScalarFunction<T> {
        &self.alpha
    }

    pub fn beta(&self) -> &ScalarFunction<T> {
        &self.beta
    }

    pub fn gamma(&self) -> &ScalarFunction<T> {
        &self.gamma
    }

    pub fn delta(&self) -> &ScalarFunction<T> {
        &self.delta
    }

    pub fn domain(&self) -> &Domain<T> {
        &self.domain
    }

    pub fn determinant_at(&self, x: T) -> T {
        let [[a, b], [c, d]] = self.at(x);
        a * d - b * c
    }
}

/// Pointwise product `A₁A₂`.
pub fn compose<T: Real>(a1: &GaugeCurve<T>, a2: &GaugeCurve<T>) -> GaugeCurve<T> {
    let alpha = &(&a1.alpha * &a2.alpha) + &(&a1.beta * &a2.gamma);
    let beta = &(&a1.alpha * &a2.beta) + &(&a1.beta * &a2.delta);
    let gamma = &(&a1.gamma * &a2.alpha) + &(&a1.delta * &a2.gamma);
    let delta = &(&a1.gamma * &a2.beta) + &(&a1.delta * &a2.delta);
    let domain = a1.domain.intersect(&a2.domain);
    GaugeCurve {
        alpha,
        beta,
        gamma,
        delta,
        domain,
    }
}

/// `B(A(x))` as a 3×3 matrix acting on `(a₂, a₁, a₀)ᵀ`.
pub fn representation_matrix<T: Real>(a: &GaugeCurve<T>, x: T) -> [[T; 3]; 3] {
    let [[al, be], [ga, de]] = a.at(x);
    let two = T::lit(2.0);
    [
        [de * de, -de * ga, ga * ga],
        [-two * be * de, al * de + be * ga, -two * al * ga],
        [be * be, -al * be, al * al],
    ]
}

/// `B(A(x)) c`, the linear part of the coefficient action.
#[allow(non_snake_case)]
pub fn representation_B<T: Real>(a: &GaugeCurve<T>, c: CoefficientTriple<T>, x: T) -> CoefficientTriple<T> {
    let m = representation_matrix(a, x);
    let v = c.to_array();
    let row = |r: [T; 3]| r[0] * v[0] + r[1] * v[1] + r[2] * v[2];
    CoefficientTriple::new(row(m[0]), row(m[1]), row(m[2]))
}

/// `θ(A)(x) = (γδ' - δγ', δα' - αδ' + βγ' - γβ', αβ' - βα')`.
pub fn cocycle_theta<T: Real>(a: &GaugeCurve<T>, x: T) -> CoefficientTriple<T> {
    let [[al, be], [ga, de]] = a.at(x);
    let [[dal, dbe], [dga, dde]] = a.derivative_at(x);
    CoefficientTriple::new(
        ga * dde - de * dga,
        de * dal - al * dde + be * dga - ga * dbe,
        al * dbe - be * dal,
    )
}

/// Möbius image `(αy + β)/(γy + δ)`, with a band of half-width
/// [`POLE_GUARD`] removed around every sign change of `γy + δ`.
pub fn act_on_solution<T: Real>(a: &GaugeCurve<T>, y: &ScalarFunction<T>) -> Result<ScalarFunction<T>> {
    let overlap = a.domain.intersect(y.domain());
    if overlap.is_empty() {
        return Err(Error::Domain("gauge curve and solution do not overlap".into()));
    }
    let y = y.restrict(&overlap);
    let num = &(&a.alpha * &y) + &a.beta;
    let den = &(&a.gamma * &y) + &a.delta;
    let poles = zeros_in(&den, &Interval::default_window());
    let domain = overlap.excise(&poles, T::lit(POLE_GUARD));
    if domain.is_empty() {
        return Err(Error::Domain("Möbius image has no pole-free interval".into()));
    }
    Ok((&num / &den).restrict(&domain))
}

/// Coefficients of the transformed equation:
/// `ā = B(A) a + θ(A)`, with the entry derivatives taken analytically when
/// the entries carry them.
pub fn act_on_coefficients<T: Real>(a: &GaugeCurve<T>, eq: &RiccatiEquation<T>) -> Result<RiccatiEquation<T>> {
    let overlap = a.domain.intersect(eq.domain());
    if overlap.is_empty() {
        return Err(Error::Domain("gauge curve and equation do not overlap".into()));
    }
    let (al, be, ga, de) = (&a.alpha, &a.beta, &a.gamma, &a.delta);
    let (dal, dbe, dga, dde) = (al.derivative(), be.derivative(), ga.derivative(), de.derivative());
    let (a2, a1, a0) = (eq.a2(), eq.a1(), eq.a0());

    let new_a2 = &(&(&(&(de * de) * a2) - &(&(de * ga) * a1)) + &(&(ga * ga) * a0)) + &(&(ga * &dde) - &(de * &dga));

    let cross = &(al * de) + &(be * ga);
    let lin1 = &(&(&(be * de) * a2).scale(T::lit(-2.0)) + &(&cross * a1)) - &(&(al * ga) * a0).scale(T::lit(2.0));
    let th1 = &(&(&(de * &dal) - &(al * &dde)) + &(be * &dga)) - &(ga * &dbe);
    let new_a1 = &lin1 + &th1;

    let new_a0 = &(&(&(&(be * be) * a2) - &(&(al * be) * a1)) + &(&(al * al) * a0)) + &(&(al * &dbe) - &(be * &dal));

    RiccatiEquation::new(new_a2.restrict(&overlap), new_a1.restrict(&overlap), new_a0.restrict(&overlap))
}

/// Smooth random curve `U(f) L(g) D(s)` with shears
/// `U = [[1, f], [0, 1]]`, `L = [[1, 0], [g, 1]]` and `D = diag(e^s, e^{-s})`,
/// where `f, g` are `a + b·e^{cx}` and `s` is affine. Coefficients are drawn
/// so entries stay moderate on `x ∈ (0, 10)`.
pub fn random_gauge_curve<T: Real, R: rand::Rng + ?Sized>(rng: &mut R, domain: &Domain<T>) -> GaugeCurve<T> {
    let mut draw = |lo: f64, hi: f64| T::lit(rng.gen_range(lo..hi));
    let x = ScalarFunction::identity(domain.clone());
    let mut bump = || {
        let (a, b, c) = (draw(-1.0, 1.0), draw(-1.0, 1.0), draw(-0.3, 0.3));
        x.scale(c).exp().scale(b).offset(a)
    };
    let f = bump();
    let g = bump();
    let s = x.scale(draw(-0.1, 0.1)).offset(draw(-0.5, 0.5));
    let one = ScalarFunction::constant(T::one(), domain.clone());
    let zero = ScalarFunction::constant(T::zero(), domain.clone());
    let u = GaugeCurve {
        alpha: one.clone(),
        beta: f,
        gamma: zero.clone(),
        delta: one.clone(),
        domain: domain.clone(),
    };
    let l = GaugeCurve {
        alpha: one.clone(),
        beta: zero.clone(),
        gamma: g,
        delta: one,
        domain: domain.clone(),
    };
    let d = GaugeCurve {
        alpha: s.exp(),
        beta: zero.clone(),
        gamma: zero,
        delta: (-&s).exp(),
        domain: domain.clone(),
    };
    compose(&compose(&u, &l), &d)
}
