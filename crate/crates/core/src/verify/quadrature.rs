use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::fnspace::{Interval, ScalarFunction};
use crate::scalar::Real;

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_634_275_397,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const MAX_SEGMENTS: usize = 20_000;

/// Tolerances and window for [`integrate`].
///
/// `window.lo() == 0` and `window.hi() == ∞` are both allowed; the
/// corresponding ends are handled by a change of variables so integrable
/// endpoint singularities and slowly decaying tails need no truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_depth: usize,
    pub window: Interval<T>,
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::lit(1e-13),
            rel_tol: T::lit(1e-11),
            max_depth: 60,
            window: Interval::half_line(),
        }
    }
}

impl<T: Real> QuadratureSpec<T> {
    pub fn new(abs_tol: T, rel_tol: T, max_depth: usize, window: Interval<T>) -> Result<Self> {
        if !(abs_tol > T::zero()) || !(rel_tol > T::zero()) || max_depth < 1 {
            return Err(Error::Argument(
                "quadrature tolerances must be positive and max_depth at least 1".into(),
            ));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_depth,
            window,
        })
    }

    pub fn with_window(mut self, window: Interval<T>) -> Self {
        self.window = window;
        self
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: T,
    /// Estimate of `∫|f|` beyond a finite upper window edge when the
    /// function's domain continues past it; zero otherwise.
    pub tail: T,
    pub evaluations: usize,
}

struct Segment<T> {
    a: T,
    b: T,
    depth: usize,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T: Real> Eq for Segment<T> {}
impl<T: Real> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

fn rescale_error<T: Real>(err: T, res_abs: T, res_asc: T) -> T {
    let mut e = err.abs();
    if res_asc != T::zero() && e != T::zero() {
        let scale = (T::lit(200.0) * e / res_asc).powf(T::lit(1.5));
        e = if scale < T::one() { res_asc * scale } else { res_asc };
    }
    let fifty_eps = T::lit(50.0) * T::epsilon();
    if res_abs > T::min_positive_value() / fifty_eps {
        e = e.max(fifty_eps * res_abs);
    }
    e
}

fn finite_or_zero<T: Real>(v: T) -> T {
    if v.is_finite() {
        v
    } else {
        T::zero()
    }
}

/// One 21-point Gauss–Kronrod panel on `[a, b]`: `(value, error)`.
fn kronrod21<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let fc = f(center);
    let mut res_g = T::zero();
    let mut res_k = fc * T::lit(WGK[10]);
    let mut res_abs = (fc * T::lit(WGK[10])).abs();
    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];
    for j in 0..10 {
        let dx = half_len * T::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let w = T::lit(WGK[j]);
        res_k = res_k + w * (f1 + f2);
        res_abs = res_abs + w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g = res_g + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    let mean = res_k * half;
    let mut res_asc = T::lit(WGK[10]) * (fc - mean).abs();
    for j in 0..10 {
        res_asc = res_asc + T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let abs_len = half_len.abs();
    let err = (res_k - res_g) * half_len;
    (
        res_k * half_len,
        rescale_error(err, res_abs * abs_len, res_asc * abs_len),
    )
}

/// Globally adaptive bisection on a finite interval.
fn adaptive<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T, spec: &QuadratureSpec<T>) -> Result<(T, T, usize)> {
    let (v, e) = kronrod21(f, a, b);
    let mut evals = 21;
    let mut heap = BinaryHeap::new();
    let mut frozen_value = T::zero();
    let mut frozen_error = T::zero();
    heap.push(Segment {
        a,
        b,
        depth: 0,
        value: v,
        error: e,
    });
    let mut total_v = v;
    let mut total_e = e;
    loop {
        let target = spec.abs_tol.max(spec.rel_tol * total_v.abs());
        if total_e <= target {
            return Ok((total_v, total_e, evals));
        }
        let worst = match heap.pop() {
            Some(s) => s,
            None => break,
        };
        let mid = T::lit(0.5) * (worst.a + worst.b);
        let splittable = worst.depth < spec.max_depth && mid > worst.a && mid < worst.b;
        if !splittable || heap.len() + 2 > MAX_SEGMENTS {
            // cannot improve this piece any further
            frozen_value = frozen_value + worst.value;
            frozen_error = frozen_error + worst.error;
            if heap.is_empty() || heap.len() + 2 > MAX_SEGMENTS {
                break;
            }
            continue;
        }
        let (v1, e1) = kronrod21(f, worst.a, mid);
        let (v2, e2) = kronrod21(f, mid, worst.b);
        evals += 42;
        total_v = total_v - worst.value + v1 + v2;
        total_e = total_e - worst.error + e1 + e2;
        for (lo, hi, value, error) in [(worst.a, mid, v1, e1), (mid, worst.b, v2, e2)] {
            heap.push(Segment {
                a: lo,
                b: hi,
                depth: worst.depth + 1,
                value,
                error,
            });
        }
    }
    // recompute totals exactly from what is left
    let v = heap.iter().fold(frozen_value, |acc, s| acc + s.value);
    let e = heap.iter().fold(frozen_error, |acc, s| acc + s.error);
    let target = spec.abs_tol.max(spec.rel_tol * v.abs());
    if e <= target {
        Ok((v, e, evals))
    } else {
        Err(Error::Convergence {
            estimate: v.to_f64_lossy(),
            error: e.to_f64_lossy(),
        })
    }
}

/// `∫_lo^hi f` for `0 ≤ lo < hi ≤ ∞` (`lo` may be any finite value when it
/// is not zero-anchored). The origin piece uses `x = c·exp(-t/(1-t))`, the
/// infinite tail `x = c + t/(1-t)`.
pub fn integrate_fn<T, F>(f: F, window: &Interval<T>, spec: &QuadratureSpec<T>) -> Result<Quadrature<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    let (lo, hi) = (window.lo(), window.hi());
    let mut value = T::zero();
    let mut error = T::zero();
    let mut evaluations = 0;
    let mut failed = false;

    let mut add = |r: Result<(T, T, usize)>| match r {
        Ok((v, e, n)) => {
            value = value + v;
            error = error + e;
            evaluations += n;
        }
        Err(Error::Convergence { estimate, error: e }) => {
            value = value + T::lit(estimate);
            error = error + T::lit(e);
            failed = true;
        }
        Err(other) => panic!("unexpected quadrature failure: {other}"),
    };

    let one = T::one();
    let mid_lo = if lo == T::zero() {
        let c = if hi.is_finite() { one.min(T::lit(0.5) * hi) } else { one };
        let g = |t: T| {
            if t >= one {
                return T::zero();
            }
            let s = t / (one - t);
            let x = c * (-s).exp();
            if x == T::zero() {
                return T::zero();
            }
            finite_or_zero(f(x) * x / ((one - t) * (one - t)))
        };
        add(adaptive(&g, T::zero(), one, spec));
        c
    } else {
        lo
    };

    if hi.is_finite() {
        if mid_lo < hi {
            add(adaptive(&f, mid_lo, hi, spec));
        }
    } else {
        let c = mid_lo;
        let g = |t: T| {
            if t >= one {
                return T::zero();
            }
            let x = c + t / (one - t);
            if !x.is_finite() {
                return T::zero();
            }
            finite_or_zero(f(x) / ((one - t) * (one - t)))
        };
        add(adaptive(&g, T::zero(), one, spec));
    }

    if failed {
        return Err(Error::Convergence {
            estimate: value.to_f64_lossy(),
            error: error.to_f64_lossy(),
        });
    }
    Ok(Quadrature {
        value,
        error,
        tail: T::zero(),
        evaluations,
    })
}

/// `∫ f` over `domain(f) ∩ spec.window`, with diagnostics.
pub fn integrate_detailed<T: Real>(f: &ScalarFunction<T>, spec: &QuadratureSpec<T>) -> Result<Quadrature<T>> {
    let pieces = f.domain().clip(&spec.window);
    let mut total = Quadrature {
        value: T::zero(),
        error: T::zero(),
        tail: T::zero(),
        evaluations: 0,
    };
    for iv in pieces.intervals() {
        let q = integrate_fn(|x| f.eval(x), iv, spec)?;
        total.value = total.value + q.value;
        total.error = total.error + q.error;
        total.evaluations += q.evaluations;
    }
    let hi = spec.window.hi();
    if hi.is_finite() {
        let beyond = f
            .domain()
            .intervals()
            .iter()
            .any(|iv| iv.hi() > hi);
        if beyond {
            let tail_window = Interval::new(hi, T::lit(2.0) * hi)?;
            total.tail = integrate_fn(|x| f.eval(x).abs(), &tail_window, spec)
                .map(|q| q.value)
                .unwrap_or(T::infinity());
        }
    }
    Ok(total)
}

/// `∫ f` over `domain(f) ∩ spec.window`.
pub fn integrate<T: Real>(f: &ScalarFunction<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    integrate_detailed(f, spec).map(|q| q.value)
}

/// `∫ f·g`.
pub fn inner_product<T: Real>(f: &ScalarFunction<T>, g: &ScalarFunction<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    integrate(&(f * g), spec)
}

/// `∫ f²`.
pub fn norm_squared<T: Real>(f: &ScalarFunction<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    let g = f.clone();
    let sq = ScalarFunction::new(move |x| g.eval(x).powi(2), f.domain().clone())?;
    integrate(&sq, spec)
}
