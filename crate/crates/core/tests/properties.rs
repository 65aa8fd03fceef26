//! Property tests for the algebraic and numerical invariants.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use riccati_forge::darboux::{generalized_backlund, GammaGauge};
use riccati_forge::fnspace::{make_function, restrict_to_sign_intervals, Domain, Interval, ScalarFunction};
use riccati_forge::potentials::oscillator_wavefunction;
use riccati_forge::reduction::{log_derivative, SignConvention};
use riccati_forge::riccati::{
    act_on_solution, cocycle_theta, compose, random_gauge_curve, representation_B, CoefficientTriple, GaugeCurve,
};
use riccati_forge::specfun::upper_incomplete_gamma;
use riccati_forge::verify::{integrate, schrodinger_residual_sweep, QuadratureSpec};

fn x() -> ScalarFunction<f64> {
    ScalarFunction::identity(Domain::half_line())
}

fn line() -> Domain<f64> {
    Domain::single(0.1, 10.0).unwrap()
}

fn constant_curve(a: f64, b: f64, c: f64) -> GaugeCurve<f64> {
    // [[a, b], [c, (1 + b c)/a]] has unit determinant
    GaugeCurve::constant([[a, b], [c, (1.0 + b * c) / a]], line()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn integration_is_linear(a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let f = x().scale(-1.0).exp();
        let g = &x() * &x().powi(2).scale(-1.0).exp();
        let spec = QuadratureSpec::default();
        let lhs = integrate(&(&f.scale(a) + &g.scale(b)), &spec).unwrap();
        let rhs = a * integrate(&f, &spec).unwrap() + b * integrate(&g, &spec).unwrap();
        prop_assert!((lhs - rhs).abs() <= 3.0 * spec.abs_tol.max(spec.rel_tol * rhs.abs()));
    }

    #[test]
    fn moebius_action_is_a_group_action(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a1 = random_gauge_curve(&mut rng, &line());
        let a2 = random_gauge_curve(&mut rng, &line());
        let y = ScalarFunction::new(|t: f64| (0.3 * t).sin(), line()).unwrap();
        let nested = act_on_solution(&a1, &act_on_solution(&a2, &y).unwrap()).unwrap();
        let direct = act_on_solution(&compose(&a1, &a2), &y).unwrap();
        for t in Interval::new(0.1, 10.0).unwrap().grid(200) {
            if nested.domain().contains(t) && direct.domain().contains(t) {
                let (u, v) = (nested.eval(t), direct.eval(t));
                prop_assert!((u - v).abs() <= 1e-7 * (1.0 + v.abs()), "{t}: {u} vs {v}");
            }
        }
    }

    #[test]
    fn theta_is_a_cocycle(seed in any::<u64>(), t in 0.1f64..10.0) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a1 = random_gauge_curve(&mut rng, &line());
        let a2 = random_gauge_curve(&mut rng, &line());
        let lhs = cocycle_theta(&compose(&a1, &a2), t);
        let rhs = representation_B(&a1, cocycle_theta(&a2, t), t) + cocycle_theta(&a1, t);
        prop_assert!((lhs - rhs).max_abs() <= 1e-7 * (1.0 + lhs.max_abs()));
    }

    #[test]
    fn representation_is_multiplicative(
        a in 0.5f64..2.0, b in -1.0f64..1.0, c in -1.0f64..1.0,
        d in 0.5f64..2.0, e in -1.0f64..1.0, f in -1.0f64..1.0,
        c2 in -1.0f64..1.0, c1 in -1.0f64..1.0, c0 in -1.0f64..1.0,
    ) {
        let (m1, m2) = (constant_curve(a, b, c), constant_curve(d, e, f));
        let v = CoefficientTriple::new(c2, c1, c0);
        let lhs = representation_B(&compose(&m1, &m2), v, 1.0);
        let rhs = representation_B(&m1, representation_B(&m2, v, 1.0), 1.0);
        prop_assert!((lhs - rhs).max_abs() <= 1e-12 * (1.0 + lhs.max_abs()));
    }

    #[test]
    fn constant_curves_have_no_cocycle(a in 0.5f64..2.0, b in -1.0f64..1.0, c in -1.0f64..1.0, t in 0.2f64..9.0) {
        prop_assert!(cocycle_theta(&constant_curve(a, b, c), t).max_abs() <= 1e-12);
    }

    #[test]
    fn analytic_and_numerical_derivatives_agree(p in -1.0f64..2.0, s in 0.1f64..1.0, t in 0.3f64..4.0) {
        // f = x^p e^{-s x²}, derivative through the combinators
        let f = &x().powf(p) * &x().powi(2).scale(-s).exp();
        let exact = f.eval(t) * (p / t - 2.0 * s * t);
        let analytic = f.derivative().eval(t);
        let numeric = f.central_difference(t);
        prop_assert!((analytic - exact).abs() <= 1e-12 * (1.0 + exact.abs()));
        prop_assert!((numeric - exact).abs() <= 1e-6 * (1.0 + exact.abs()));
    }

    #[test]
    fn sign_intervals_split_at_roots(r1 in 0.2f64..5.0, gap in 0.1f64..5.0) {
        let r2 = r1 + gap;
        let f = make_function(move |t: f64| (t - r1) * (t - r2), None::<fn(f64) -> f64>, Domain::half_line()).unwrap();
        let d = restrict_to_sign_intervals(&f);
        prop_assert_eq!(d.len(), 3);
        prop_assert!((d.intervals()[0].hi() - r1).abs() <= 1e-10 * r1);
        prop_assert!((d.intervals()[1].hi() - r2).abs() <= 1e-10 * r2);
    }

    #[test]
    fn residual_sweeps_are_scale_covariant(c in prop::sample::select(vec![-10.0f64, 0.1, 10.0, 1e3])) {
        let phi = &x() * &x().powi(2).scale(-0.5).exp();
        let v = x().powi(2);
        // off-shell energy: the residual is signal, not rounding noise
        let base = schrodinger_residual_sweep(&v, 2.5, &phi, 300).unwrap();
        let scaled = schrodinger_residual_sweep(&v, 2.5, &phi.scale(c), 300).unwrap();
        prop_assert!((scaled.max_abs - c.abs() * base.max_abs).abs() <= 1e-6 * c.abs() * base.max_abs);
        prop_assert!((scaled.max_rel - base.max_rel).abs() <= 1e-9);
    }

    #[test]
    fn incomplete_gamma_recurrence(a in -1.9f64..4.0, t in 0.05f64..8.0) {
        // Γ(a+1, x) = a Γ(a, x) + x^a e^{-x}
        let lhs = upper_incomplete_gamma(a + 1.0, t).unwrap();
        let rhs = a * upper_incomplete_gamma(a, t).unwrap() + t.powf(a) * (-t).exp();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (lhs.abs() + t.powf(a) * (-t).exp()));
    }

    #[test]
    fn sign_conventions_are_opposite(l in -1.4f64..2.0, b in 0.5f64..4.0, k in 0usize..4) {
        let phi = oscillator_wavefunction(l, b, k).unwrap();
        let plus = log_derivative(&phi, SignConvention::Plus).unwrap();
        let minus = log_derivative(&phi, SignConvention::Minus).unwrap();
        for t in plus.domain().grid(50, &Interval::new(0.05, 6.0).unwrap()) {
            prop_assert_eq!(plus.eval(t), -minus.eval(t));
        }
    }

    #[test]
    fn gauge_sign_does_not_matter(k in 0usize..3) {
        // oscillator l = 0, b = 2: E_k = 4k + 3
        let v = x().powi(2);
        let wk = log_derivative(&oscillator_wavefunction(0.0, 2.0, k).unwrap(), SignConvention::Plus).unwrap();
        let wl = log_derivative(&oscillator_wavefunction(0.0, 2.0, k + 1).unwrap(), SignConvention::Plus).unwrap();
        let el = 4.0 * (k + 1) as f64 + 3.0;
        let g = GammaGauge::constant(0.5, Domain::half_line()).unwrap();
        let r1 = generalized_backlund(&wl, &wk, &g, &v, el).unwrap();
        let r2 = generalized_backlund(&wl, &wk, &g.negated(), &v, el).unwrap();
        for t in r1.domain.grid(100, &Interval::new(0.05, 6.0).unwrap()) {
            prop_assert_eq!(r1.new_solution.eval(t), r2.new_solution.eval(t));
        }
    }
}
