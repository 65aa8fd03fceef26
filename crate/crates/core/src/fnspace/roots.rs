use super::function::ScalarFunction;
use super::interval::{Domain, Interval};
use crate::scalar::Real;

const SCAN_CELLS: usize = 1000;
const SCAN_SPAN_CAP: f64 = 100.0;
const BISECT_REL: f64 = 1e-12;

/// Sign changes of `f` inside `(a, b)`, refined by bisection.
///
/// The scan uses `1000` cells over `min(b - a, 100)`, plus `1000`
/// log-spaced points when `(a, b)` spans two decades; exact zeros and
/// subnormal values (underflowed tails) carry no sign and never count as a
/// change on their own.
pub fn sign_changes<T: Real>(f: &ScalarFunction<T>, a: T, b: T) -> Vec<T> {
    if !(a < b) {
        return Vec::new();
    }
    let span = (b - a).min(T::lit(SCAN_SPAN_CAP));
    let cells = if b - a > span {
        // uncapped scan length, capped resolution
        let step = span / T::count(SCAN_CELLS);
        ((b - a) / step).ceil().to_usize().unwrap_or(SCAN_CELLS)
    } else {
        SCAN_CELLS
    };
    let step = (b - a) / T::count(cells);
    let half = T::lit(0.5);
    let mut xs: Vec<T> = (0..cells).map(|i| a + (T::count(i) + half) * step).collect();
    // log-spaced pass resolves nodes close to the origin
    if let Ok(iv) = Interval::new(a, b) {
        if iv.prefers_log_spacing() {
            xs.extend(iv.grid(SCAN_CELLS));
            xs.sort_by(|p, q| p.partial_cmp(q).expect("scan points are not NaN"));
            xs.dedup();
        }
    }
    let mut roots = Vec::new();
    let mut last: Option<(T, T)> = None;
    for x in xs {
        let v = f.eval(x);
        // underflowed tails are sign noise
        if v.is_nan() || v.abs() < T::min_positive_value() {
            continue;
        }
        if let Some((xp, vp)) = last {
            if (vp > T::zero()) != (v > T::zero()) {
                roots.push(bisect(f, xp, x, vp));
            }
        }
        last = Some((x, v));
    }
    roots
}

fn bisect<T: Real>(f: &ScalarFunction<T>, mut lo: T, mut hi: T, f_lo: T) -> T {
    let positive_lo = f_lo > T::zero();
    let tol = T::lit(BISECT_REL);
    for _ in 0..200 {
        let mid = T::lit(0.5) * (lo + hi);
        if hi - lo <= tol * lo.abs().max(hi.abs()).max(T::min_positive_value()) {
            break;
        }
        let v = f.eval(mid);
        if v == T::zero() {
            return mid;
        }
        if (v > T::zero()) == positive_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    T::lit(0.5) * (lo + hi)
}

/// Zeros of `f` on its domain, scanned inside `window` (used to bound
/// infinite intervals).
pub fn zeros_in<T: Real>(f: &ScalarFunction<T>, window: &Interval<T>) -> Vec<T> {
    f.domain()
        .clip(window)
        .intervals()
        .iter()
        .flat_map(|iv| sign_changes(f, iv.lo(), iv.hi()))
        .collect()
}

/// Sub-domain where `f` is nonzero: the domain split at every detected sign
/// change, scanning infinite intervals inside the default window `[1e-6, 60]`.
pub fn restrict_to_sign_intervals<T: Real>(f: &ScalarFunction<T>) -> Domain<T> {
    restrict_to_sign_intervals_in(f, &Interval::default_window())
}

/// [`restrict_to_sign_intervals`] with an explicit scan window.
pub fn restrict_to_sign_intervals_in<T: Real>(f: &ScalarFunction<T>, window: &Interval<T>) -> Domain<T> {
    let roots = zeros_in(f, window);
    f.domain().excise(&roots, T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_function_splits_at_one() {
        let f = ScalarFunction::new(|x: f64| x - 1.0, Domain::half_line()).unwrap();
        let d = restrict_to_sign_intervals(&f);
        assert_eq!(d.len(), 2);
        assert!((d.intervals()[0].hi() - 1.0).abs() < 1e-11);
        assert_eq!(d.intervals()[0].lo(), 0.0);
        assert!(d.intervals()[1].hi().is_infinite());
    }

    #[test]
    fn nodeless_function_keeps_full_domain() {
        let f = ScalarFunction::new(|x: f64| x * (-x * x / 2.0).exp(), Domain::half_line()).unwrap();
        // the tail underflows to exactly zero; that must not count as a node
        assert_eq!(f.eval(59.0), 0.0);
        assert_eq!(restrict_to_sign_intervals(&f), Domain::half_line());
    }

    #[test]
    fn node_near_origin_is_found() {
        let f = ScalarFunction::new(|x: f64| x - 0.005, Domain::half_line()).unwrap();
        let r = zeros_in(&f, &Interval::default_window());
        assert_eq!(r.len(), 1);
        assert!((r[0] - 0.005).abs() < 1e-12);
    }

    #[test]
    fn several_roots_are_refined() {
        let f = ScalarFunction::new(|x: f64| x.sin(), Domain::single(0.5, 10.0).unwrap()).unwrap();
        let r = zeros_in(&f, &Interval::new(0.0, 100.0).unwrap());
        assert_eq!(r.len(), 3);
        for (k, root) in r.iter().enumerate() {
            let exact = std::f64::consts::PI * (k + 1) as f64;
            assert!((root - exact).abs() < 1e-10 * exact);
        }
    }
}
