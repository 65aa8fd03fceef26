use crate::error::{Error, Result};
use crate::fnspace::{Domain, ScalarFunction};
use crate::scalar::Real;
use crate::specfun::gamma_fn;

/// Known eigenpair of a solvable potential.
#[derive(Debug, Clone)]
pub struct EigenPair<T: Real> {
    pub k: usize,
    pub energy: T,
    pub wavefunction: ScalarFunction<T>,
    pub normalizable: bool,
    pub potential: ScalarFunction<T>,
}

fn degree(k: i64) -> Result<usize> {
    usize::try_from(k).map_err(|_| Error::Parameter(format!("k must be nonnegative, got {k}")))
}

fn x<T: Real>() -> ScalarFunction<T> {
    ScalarFunction::identity(Domain::half_line())
}

/// Radial oscillator `b²x²/4 + l(l+1)/x²`, optionally shifted down by
/// `b(l + 3/2)` so the ground state sits at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams<T> {
    pub l: T,
    pub b: T,
    pub shifted: bool,
}

impl<T: Real> OscillatorParams<T> {
    pub fn new(l: T, b: T, shifted: bool) -> Result<Self> {
        if !(b > T::zero()) {
            return Err(Error::Parameter(format!("oscillator needs b > 0, got b = {b}")));
        }
        if !(l > T::lit(-1.5)) {
            return Err(Error::Parameter(format!("oscillator needs l > -3/2, got l = {l}")));
        }
        Ok(Self { l, b, shifted })
    }

    pub fn potential(&self) -> ScalarFunction<T> {
        let (l, b) = (self.l, self.b);
        let v = &x::<T>().powi(2).scale(b * b / T::lit(4.0)) + &x::<T>().powi(-2).scale(l * (l + T::one()));
        if self.shifted {
            v.offset(-b * (l + T::lit(1.5)))
        } else {
            v
        }
    }

    pub fn energy(&self, k: usize) -> T {
        let two_k = T::lit(2.0) * T::count(k);
        if self.shifted {
            self.b * two_k
        } else {
            self.b * (two_k + self.l + T::lit(1.5))
        }
    }
}

/// `ζ_k^{l,b}`, unit-normalized on `(0, ∞)`.
pub fn oscillator_wavefunction<T: Real>(l: T, b: T, k: usize) -> Result<ScalarFunction<T>> {
    let kt = T::count(k);
    let norm = (gamma_fn(kt + T::one())? / gamma_fn(kt + l + T::lit(1.5))?).sqrt()
        * (b.powf(T::lit(2.0) * l + T::lit(3.0)) / T::lit(2.0).powf(T::lit(2.0) * l + T::one())).powf(T::lit(0.25));
    let x = x::<T>();
    let x2 = x.powi(2);
    let f = &(&x.powf(l + T::one()) * &x2.scale(-b / T::lit(4.0)).exp()) * &x2.scale(b / T::lit(2.0)).laguerre(k, l + T::lit(0.5));
    Ok(f.scale(norm))
}

pub fn oscillator_eigenpair<T: Real>(p: &OscillatorParams<T>, k: i64) -> Result<EigenPair<T>> {
    let k = degree(k)?;
    Ok(EigenPair {
        k,
        energy: p.energy(k),
        wavefunction: oscillator_wavefunction(p.l, p.b, k)?,
        normalizable: true,
        potential: p.potential(),
    })
}

/// Coulomb-like `2q/x + l(l+1)/x²`, optionally shifted up by `q²/(l+1)²`
/// so the ground state sits at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoulombParams<T> {
    pub l: T,
    pub q: T,
    pub shifted: bool,
}

impl<T: Real> CoulombParams<T> {
    pub fn new(l: T, q: T, shifted: bool) -> Result<Self> {
        if q == T::zero() || !q.is_finite() {
            return Err(Error::Parameter(format!("Coulomb family needs q != 0, got q = {q}")));
        }
        if !(l > T::lit(-1.5)) {
            return Err(Error::Parameter(format!("Coulomb family needs l > -3/2, got l = {l}")));
        }
        if shifted && l == -T::one() {
            return Err(Error::Parameter("shifted Coulomb family needs l != -1".into()));
        }
        Ok(Self { l, q, shifted })
    }

    pub fn potential(&self) -> ScalarFunction<T> {
        let (l, q) = (self.l, self.q);
        let v = &x::<T>().recip().scale(T::lit(2.0) * q) + &x::<T>().powi(-2).scale(l * (l + T::one()));
        if self.shifted {
            v.offset(q * q / (l + T::one()).powi(2))
        } else {
            v
        }
    }

    pub fn energy(&self, k: usize) -> Result<T> {
        let n = T::count(k) + self.l + T::one();
        if n == T::zero() {
            return Err(Error::Parameter("k + l + 1 must not vanish".into()));
        }
        let e = -self.q * self.q / (n * n);
        Ok(if self.shifted {
            e + self.q * self.q / (self.l + T::one()).powi(2)
        } else {
            e
        })
    }

    /// `(l ∈ (-3/2, -1), q > 0, k = 0)` or `(l > -1, q < 0)`.
    pub fn is_normalizable(&self, k: usize) -> bool {
        let (l, q) = (self.l, self.q);
        (l > T::lit(-1.5) && l < -T::one() && q > T::zero() && k == 0) || (l > -T::one() && q < T::zero())
    }
}

/// `ζ_k^{l,q}`. The prefactor uses `|Γ(2l+2+k)|` and `|k+l+1|`, which makes
/// it the unit-norm choice on both normalizable branches; elsewhere it is
/// just a fixed scale.
pub fn coulomb_wavefunction<T: Real>(l: T, q: T, k: usize) -> Result<ScalarFunction<T>> {
    let kt = T::count(k);
    let n = kt + l + T::one();
    if n == T::zero() {
        return Err(Error::Parameter("k + l + 1 must not vanish".into()));
    }
    let two = T::lit(2.0);
    let norm = (gamma_fn(kt + T::one())? / gamma_fn(two * l + two + kt)?.abs()).sqrt() * two.powf(l + T::one())
        * q.abs().powf(l + T::lit(1.5))
        / n.abs().powf(l + two);
    let x = x::<T>();
    let f = &(&x.powf(l + T::one()) * &x.scale(q / n).exp()) * &x.scale(-two * q / n).laguerre(k, two * l + T::one());
    Ok(f.scale(norm))
}

/// Normalizable Coulomb eigenpair; outside the admissible set this is a
/// [`Error::NotNormalizable`].
pub fn coulomb_eigenpair<T: Real>(p: &CoulombParams<T>, k: i64) -> Result<EigenPair<T>> {
    let pair = formal_coulomb_eigenpair(p, k)?;
    if !pair.normalizable {
        return Err(Error::NotNormalizable(format!(
            "l = {}, q = {}, k = {}: need l in (-3/2,-1) with q > 0 and k = 0, or l > -1 with q < 0",
            p.l, p.q, pair.k
        )));
    }
    Ok(pair)
}

/// The same closed form without the normalizability requirement.
pub fn formal_coulomb_eigenpair<T: Real>(p: &CoulombParams<T>, k: i64) -> Result<EigenPair<T>> {
    let k = degree(k)?;
    Ok(EigenPair {
        k,
        energy: p.energy(k)?,
        wavefunction: coulomb_wavefunction(p.l, p.q, k)?,
        normalizable: p.is_normalizable(k),
        potential: p.potential(),
    })
}
