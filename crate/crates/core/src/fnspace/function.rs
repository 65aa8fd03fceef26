use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use super::interval::Domain;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun;

type Eval<T> = Arc<dyn Fn(T) -> T + Send + Sync>;
type Lazy<T> = Arc<dyn Fn() -> ScalarFunction<T> + Send + Sync>;

/// Builds on first use, then hands out clones of the cached result.
fn lazy<T: Real, F>(build: F) -> Lazy<T>
where
    F: Fn() -> ScalarFunction<T> + Send + Sync + 'static,
{
    let cell = OnceLock::new();
    Arc::new(move || cell.get_or_init(&build).clone())
}

/// Real function on a union of open intervals.
///
/// A function is an immutable evaluator, optionally carrying an analytic
/// derivative and an analytic logarithmic derivative. Both are produced
/// lazily, so combinators such as `&f * &g` or [`ScalarFunction::exp`] can
/// propagate exact derivatives to any order without materializing them up
/// front. When no analytic derivative exists, [`ScalarFunction::derivative`]
/// falls back to central differences.
///
/// The log-derivative channel exists because eigenfunctions such as
/// `x e^{-x²/2}` underflow long before their logarithmic derivative becomes
/// large; `f'/f` evaluated pointwise would turn into `0/0`.
#[derive(Clone)]
pub struct ScalarFunction<T: Real> {
    eval: Eval<T>,
    deriv: Option<Lazy<T>>,
    log_deriv: Option<Lazy<T>>,
    domain: Domain<T>,
}

impl<T: Real> fmt::Debug for ScalarFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("domain", &self.domain)
            .field("analytic_derivative", &self.deriv.is_some())
            .finish()
    }
}

impl<T: Real> ScalarFunction<T> {
    /// Wraps an evaluator. Fails on an empty domain.
    pub fn new<F>(eval: F, domain: Domain<T>) -> Result<Self>
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        if domain.is_empty() {
            return Err(Error::Domain("function domain is empty".into()));
        }
        Ok(Self::raw(eval, domain))
    }

    fn raw<F>(eval: F, domain: Domain<T>) -> Self
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(eval),
            deriv: None,
            log_deriv: None,
            domain,
        }
    }

    /// Attaches an analytic derivative.
    pub fn with_derivative(mut self, d: ScalarFunction<T>) -> Self {
        self.deriv = Some(lazy(move || d.clone()));
        self
    }

    /// Attaches a lazily built analytic derivative.
    pub fn with_derivative_fn<F>(mut self, d: F) -> Self
    where
        F: Fn() -> ScalarFunction<T> + Send + Sync + 'static,
    {
        self.deriv = Some(lazy(d));
        self
    }

    /// Attaches a lazily built analytic logarithmic derivative `f'/f`.
    pub fn with_log_derivative_fn<F>(mut self, d: F) -> Self
    where
        F: Fn() -> ScalarFunction<T> + Send + Sync + 'static,
    {
        self.log_deriv = Some(lazy(d));
        self
    }

    pub fn constant(c: T, domain: Domain<T>) -> Self {
        let d = domain.clone();
        let mut f = Self::raw(move |_| c, domain);
        f.deriv = Some(lazy(move || Self::constant(T::zero(), d.clone())));
        let d = f.domain.clone();
        f.log_deriv = Some(lazy(move || Self::constant(T::zero(), d.clone())));
        f
    }

    /// `x ↦ x`.
    pub fn identity(domain: Domain<T>) -> Self {
        let d = domain.clone();
        let mut f = Self::raw(|x| x, domain);
        f.deriv = Some(lazy(move || Self::constant(T::one(), d.clone())));
        let d = f.domain.clone();
        f.log_deriv = Some(lazy(move || Self::identity(d.clone()).powi(-1)));
        f
    }

    #[inline]
    pub fn eval(&self, x: T) -> T {
        (self.eval)(x)
    }

    /// Evaluates only inside the domain.
    pub fn try_eval(&self, x: T) -> Result<T> {
        if self.domain.contains(x) {
            Ok(self.eval(x))
        } else {
            Err(Error::Domain(format!("{x} is outside the function domain")))
        }
    }

    pub fn domain(&self) -> &Domain<T> {
        &self.domain
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.deriv.is_some()
    }

    pub fn has_analytic_log_derivative(&self) -> bool {
        self.log_deriv.is_some()
    }

    /// Same evaluator on `domain ∩ self.domain`.
    pub fn restrict(&self, domain: &Domain<T>) -> Self {
        let dom = self.domain.intersect(domain);
        let mut out = self.clone();
        out.domain = dom.clone();
        if let Some(d) = self.deriv.clone() {
            let dom = dom.clone();
            out.deriv = Some(lazy(move || d().restrict(&dom)));
        }
        if let Some(d) = self.log_deriv.clone() {
            out.log_deriv = Some(lazy(move || d().restrict(&dom)));
        }
        out
    }

    /// `f'` on the same domain: analytic when known, central differences
    /// otherwise. Applying it twice gives `f''`.
    pub fn derivative(&self) -> Self {
        match &self.deriv {
            Some(d) => {
                let mut g = d();
                g.domain = self.domain.intersect(&g.domain);
                g
            }
            None => {
                let f = self.clone();
                Self::raw(move |x| f.central_difference(x), self.domain.clone())
            }
        }
    }

    pub fn derivative_at(&self, x: T) -> T {
        match &self.deriv {
            Some(d) => d().eval(x),
            None => self.central_difference(x),
        }
    }

    /// `f'/f`, analytic when the function was assembled from factors whose
    /// log-derivatives are known.
    pub fn log_derivative(&self) -> Self {
        match &self.log_deriv {
            Some(d) => {
                let mut g = d();
                g.domain = self.domain.intersect(&g.domain);
                g
            }
            None => &self.derivative() / self,
        }
    }

    /// Second-order finite-difference derivative with step
    /// `h = max(1e-6, 1e-6·|x|)`; one-sided near an interval boundary.
    pub fn central_difference(&self, x: T) -> T {
        let h = T::lit(1e-6).max(T::lit(1e-6) * x.abs());
        let (lo, hi) = self
            .domain
            .component(x)
            .map(|iv| (iv.lo(), iv.hi()))
            .unwrap_or((T::neg_infinity(), T::infinity()));
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let four = T::lit(4.0);
        if x - h > lo && x + h < hi {
            (self.eval(x + h) - self.eval(x - h)) / (two * h)
        } else if x + two * h < hi && x - h <= lo {
            (-three * self.eval(x) + four * self.eval(x + h) - self.eval(x + two * h)) / (two * h)
        } else if x - two * h > lo && x + h >= hi {
            (three * self.eval(x) - four * self.eval(x - h) + self.eval(x - two * h)) / (two * h)
        } else {
            let h = (x - lo).min(hi - x) / two;
            (self.eval(x + h) - self.eval(x - h)) / (two * h)
        }
    }

    /// Five-point central stencil for `f''` with step `1e-4·max(1, |x|)`.
    /// Close to an interval end the step drops to 1/50 of the distance to
    /// it, which keeps power-law behavior like `x^{l+1}` at the origin
    /// resolved.
    pub fn second_difference(&self, x: T) -> T {
        let mut h = T::lit(1e-4) * T::one().max(x.abs());
        if let Some(iv) = self.domain.component(x) {
            let room = (x - iv.lo()).min(iv.hi() - x);
            h = h.min(room / T::lit(50.0));
        }
        let f = |k: f64| self.eval(x + T::lit(k) * h);
        (-f(2.0) + T::lit(16.0) * f(1.0) - T::lit(30.0) * f(0.0) + T::lit(16.0) * f(-1.0) - f(-2.0))
            / (T::lit(12.0) * h * h)
    }

    pub fn scale(&self, c: T) -> Self {
        let f = self.clone();
        let g = self.clone();
        let mut out = Self::raw(move |x| c * f.eval(x), self.domain.clone());
        out.deriv = Some(lazy(move || g.derivative().scale(c)));
        out.log_deriv = self.log_deriv.clone();
        out
    }

    /// `f + c`.
    pub fn offset(&self, c: T) -> Self {
        let f = self.clone();
        let g = self.clone();
        let mut out = Self::raw(move |x| f.eval(x) + c, self.domain.clone());
        out.deriv = Some(lazy(move || g.derivative()));
        out
    }

    /// `f^p` for real `p`; the function must be positive where evaluated
    /// unless `p` is an integer.
    pub fn powf(&self, p: T) -> Self {
        let f = self.clone();
        let g = self.clone();
        let h = self.clone();
        let mut out = Self::raw(move |x| f.eval(x).powf(p), self.domain.clone());
        out.deriv = Some(lazy(move || &g.powf(p - T::one()).scale(p) * &g.derivative()));
        out.log_deriv = Some(lazy(move || h.log_derivative().scale(p)));
        out
    }

    pub fn powi(&self, n: i32) -> Self {
        let f = self.clone();
        let g = self.clone();
        let h = self.clone();
        let mut out = Self::raw(move |x| f.eval(x).powi(n), self.domain.clone());
        out.deriv = Some(lazy(move || {
            let nt = T::from_i32(n).expect("small integer");
            &g.powi(n - 1).scale(nt) * &g.derivative()
        }));
        out.log_deriv = Some(lazy(move || {
            h.log_derivative().scale(T::from_i32(n).expect("small integer"))
        }));
        out
    }

    pub fn sqrt(&self) -> Self {
        self.powf(T::lit(0.5))
    }

    pub fn recip(&self) -> Self {
        self.powi(-1)
    }

    pub fn exp(&self) -> Self {
        let f = self.clone();
        let g = self.clone();
        let h = self.clone();
        let mut out = Self::raw(move |x| f.eval(x).exp(), self.domain.clone());
        out.deriv = Some(lazy(move || &g.exp() * &g.derivative()));
        out.log_deriv = Some(lazy(move || h.derivative()));
        out
    }

    /// `L_k^a ∘ f`, using `d/du L_k^a(u) = -L_{k-1}^{a+1}(u)`.
    pub fn laguerre(&self, degree: usize, parameter: T) -> Self {
        let f = self.clone();
        let g = self.clone();
        let mut out = Self::raw(
            move |x| specfun::laguerre_eval(degree, parameter, f.eval(x)),
            self.domain.clone(),
        );
        out.deriv = Some(lazy(move || {
            if degree == 0 {
                Self::constant(T::zero(), g.domain.clone())
            } else {
                -&(&g.laguerre(degree - 1, parameter + T::one()) * &g.derivative())
            }
        }));
        out
    }

    /// Samples the function on `grid`.
    pub fn sample(&self, grid: &[T]) -> Vec<T> {
        grid.iter().map(|&x| self.eval(x)).collect()
    }
}

/// Builds a function from an evaluator and an optional analytic derivative.
/// Without a derivative, derivative requests fall back to central differences.
pub fn make_function<T, F, D>(eval: F, deriv: Option<D>, domain: Domain<T>) -> Result<ScalarFunction<T>>
where
    T: Real,
    F: Fn(T) -> T + Send + Sync + 'static,
    D: Fn(T) -> T + Send + Sync + 'static,
{
    let f = ScalarFunction::new(eval, domain.clone())?;
    Ok(match deriv {
        Some(d) => f.with_derivative(ScalarFunction::raw(d, domain)),
        None => f,
    })
}

fn has_any_log_hint<T: Real>(a: &ScalarFunction<T>, b: &ScalarFunction<T>) -> bool {
    a.log_deriv.is_some() || b.log_deriv.is_some()
}

impl<T: Real> Add for &ScalarFunction<T> {
    type Output = ScalarFunction<T>;
    fn add(self, rhs: Self) -> ScalarFunction<T> {
        let (f, g) = (self.clone(), rhs.clone());
        let (fd, gd) = (self.clone(), rhs.clone());
        let mut out = ScalarFunction::raw(move |x| f.eval(x) + g.eval(x), self.domain.intersect(&rhs.domain));
        out.deriv = Some(lazy(move || &fd.derivative() + &gd.derivative()));
        out
    }
}

impl<T: Real> Sub for &ScalarFunction<T> {
    type Output = ScalarFunction<T>;
    fn sub(self, rhs: Self) -> ScalarFunction<T> {
        let (f, g) = (self.clone(), rhs.clone());
        let (fd, gd) = (self.clone(), rhs.clone());
        let mut out = ScalarFunction::raw(move |x| f.eval(x) - g.eval(x), self.domain.intersect(&rhs.domain));
        out.deriv = Some(lazy(move || &fd.derivative() - &gd.derivative()));
        out
    }
}

impl<T: Real> Mul for &ScalarFunction<T> {
    type Output = ScalarFunction<T>;
    fn mul(self, rhs: Self) -> ScalarFunction<T> {
        let (f, g) = (self.clone(), rhs.clone());
        let (fd, gd) = (self.clone(), rhs.clone());
        let mut out = ScalarFunction::raw(move |x| f.eval(x) * g.eval(x), self.domain.intersect(&rhs.domain));
        out.deriv = Some(lazy(move || &(&fd.derivative() * &gd) + &(&fd * &gd.derivative())));
        if has_any_log_hint(self, rhs) {
            let (fl, gl) = (self.clone(), rhs.clone());
            out.log_deriv = Some(lazy(move || &fl.log_derivative() + &gl.log_derivative()));
        }
        out
    }
}

impl<T: Real> Div for &ScalarFunction<T> {
    type Output = ScalarFunction<T>;
    fn div(self, rhs: Self) -> ScalarFunction<T> {
        let (f, g) = (self.clone(), rhs.clone());
        let (fd, gd) = (self.clone(), rhs.clone());
        let mut out = ScalarFunction::raw(move |x| f.eval(x) / g.eval(x), self.domain.intersect(&rhs.domain));
        out.deriv = Some(lazy(move || {
            let num = &(&fd.derivative() * &gd) - &(&fd * &gd.derivative());
            &num / &gd.powi(2)
        }));
        if has_any_log_hint(self, rhs) {
            let (fl, gl) = (self.clone(), rhs.clone());
            out.log_deriv = Some(lazy(move || &fl.log_derivative() - &gl.log_derivative()));
        }
        out
    }
}

impl<T: Real> Neg for &ScalarFunction<T> {
    type Output = ScalarFunction<T>;
    fn neg(self) -> ScalarFunction<T> {
        self.scale(-T::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Real> $tr for ScalarFunction<T> {
            type Output = ScalarFunction<T>;
            fn $m(self, rhs: Self) -> ScalarFunction<T> {
                (&self).$m(&rhs)
            }
        }
        impl<T: Real> $tr<&ScalarFunction<T>> for ScalarFunction<T> {
            type Output = ScalarFunction<T>;
            fn $m(self, rhs: &ScalarFunction<T>) -> ScalarFunction<T> {
                (&self).$m(rhs)
            }
        }
        impl<T: Real> $tr<ScalarFunction<T>> for &ScalarFunction<T> {
            type Output = ScalarFunction<T>;
            fn $m(self, rhs: ScalarFunction<T>) -> ScalarFunction<T> {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl<T: Real> Neg for ScalarFunction<T> {
    type Output = ScalarFunction<T>;
    fn neg(self) -> ScalarFunction<T> {
        -&self
    }
}
