//! Special functions and norms against independent quadrature and series.

use rand::{Rng, SeedableRng};
use rand::rngs::StdRng;
use riccati_forge::fnspace::Interval;
use riccati_forge::potentials::{oscillator_wavefunction, run_example, Example, ExampleParams};
use riccati_forge::specfun::{gamma_fn, laguerre_eval, upper_incomplete_gamma};
use riccati_forge::verify::{integrate_fn, norm_squared, QuadratureSpec};

fn tight() -> QuadratureSpec<f64> {
    QuadratureSpec::new(1e-15, 1e-13, 80, Interval::half_line()).unwrap()
}

/// `∫_x^∞ t^{a-1} e^{-t} dt` by quadrature.
fn gamma_tail(a: f64, x: f64) -> f64 {
    let w = Interval::new(x, f64::INFINITY).unwrap();
    integrate_fn(|t: f64| t.powf(a - 1.0) * (-t).exp(), &w, &tight()).unwrap().value
}

#[test]
fn gamma_matches_integral() {
    let q = integrate_fn(|t: f64| t.powf(1.75) * (-t).exp(), &Interval::half_line(), &tight()).unwrap();
    let g = gamma_fn(2.75).unwrap();
    assert!((g - q.value).abs() <= 1e-12 * g, "{g} vs {}", q.value);
}

#[test]
fn incomplete_gamma_at_negative_order() {
    // Γ(-l-3/2, -l-1) at l = -1.25
    let exact = gamma_tail(-0.75, 0.25);
    let g = upper_incomplete_gamma(-0.75, 0.25).unwrap();
    assert!((g - exact).abs() <= 1e-10 * exact.abs(), "{g} vs {exact}");
}

#[test]
fn incomplete_gamma_random_orders() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..100 {
        let a = rng.gen_range(-2.0..5.0);
        let x = rng.gen_range(0.05..8.0);
        let exact = gamma_tail(a, x);
        let g = upper_incomplete_gamma(a, x).unwrap();
        assert!((g - exact).abs() <= 1e-8 * exact.abs(), "a={a} x={x}: {g} vs {exact}");
    }
}

/// `Σ_j (-1)^j C(k+a, k-j) u^j / j!`, binomials as falling products.
fn laguerre_series(k: usize, a: f64, u: f64) -> f64 {
    let binom = |n: f64, m: usize| (0..m).fold(1.0, |acc, i| acc * (n - i as f64) / (i + 1) as f64);
    let mut fact = 1.0;
    let mut sum = 0.0;
    for j in 0..=k {
        if j > 0 {
            fact *= j as f64;
        }
        sum += (-1f64).powi(j as i32) * binom(k as f64 + a, k - j) * u.powi(j as i32) / fact;
    }
    sum
}

#[test]
fn laguerre_recurrence_matches_series() {
    let mut rng = StdRng::seed_from_u64(11);
    for k in 0..=8 {
        for _ in 0..25 {
            let a = rng.gen_range(-0.9..4.0);
            let u = rng.gen_range(0.0..6.0);
            let r = laguerre_eval(k, a, u);
            let s = laguerre_series(k, a, u);
            let scale = (0..=k).map(|j| laguerre_series(j, a, u).abs()).fold(1.0, f64::max);
            assert!((r - s).abs() <= 1e-10 * scale, "k={k} a={a} u={u}: {r} vs {s}");
        }
    }
}

#[test]
fn ground_state_is_unit_norm() {
    let z = oscillator_wavefunction(-1.25f64, 2.0, 0).unwrap();
    let n = norm_squared(&z, &QuadratureSpec::default()).unwrap();
    assert!((n - 1.0).abs() < 1e-6, "{n}");
}

fn i_k(l: f64, k: i32, d: impl Fn(f64) -> f64) -> f64 {
    integrate_fn(|t: f64| (-t).exp() * t.powf(2.0 * l + 3.0 + k as f64) / d(t), &Interval::half_line(), &tight())
        .unwrap()
        .value
}

#[test]
fn coul73_integrals_converge() {
    let l = -1.25f64;
    let d = |t: f64| (3.0 + 2.0 * l) * t * t + 8.0 * (l + 2.0) * (l + 1.0).powi(2) * t - 8.0 * (l + 1.0).powi(3);
    for k in 1..=3 {
        let v = i_k(l, k, d);
        assert!(v.is_finite() && v > 0.0, "I_{k} = {v}");
    }
}

#[test]
fn coul74_norm_matches_integral_formula() {
    for l in [-1.45f64, -1.25, -1.05] {
        let d = |t: f64| (3.0 + 2.0 * l) * t * t - 8.0 * (l + 1.0).powi(3);
        let (i1, i2, i3) = (i_k(l, 1, d), i_k(l, 2, d), i_k(l, 3, d));
        let formula = (4.0 * (l + 1.0).powi(2) * i1 + 4.0 * (l + 1.0) * i2 + i3) / (2.0 * (l + 2.0) * gamma_fn(2.0 * l + 4.0).unwrap());
        let p = ExampleParams { l, q: -1.0, ..ExampleParams::default() };
        let r = run_example(Example::Coul74, &p).unwrap();
        assert!((r.norm_sq - formula).abs() <= 1e-7 * formula, "l={l}: {} vs {formula}", r.norm_sq);
    }
}
