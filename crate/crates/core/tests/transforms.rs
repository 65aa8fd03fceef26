//! Theorem- and example-level behavior of the transformations.

use riccati_forge::darboux::{
    backlund_element, finite_difference_backlund, generalized_backlund, intertwine_pair, map_eigenfunction, GammaGauge,
};
use riccati_forge::fnspace::{zeros_in, Domain, Interval, ScalarFunction};
use riccati_forge::potentials::{
    coulomb_wavefunction, oscillator_eigenpair, run_example, CoulombParams, Example, ExampleParams, OscillatorParams,
};
use riccati_forge::reduction::{log_derivative, SignConvention};
use riccati_forge::riccati::{act_on_solution, POLE_GUARD};
use riccati_forge::verify::{inner_product, norm_squared, schrodinger_residual_sweep, QuadratureSpec};

fn moderate() -> Interval<f64> {
    Interval::new(0.01, 8.0).unwrap()
}

fn max_rel_dev(a: &ScalarFunction<f64>, b: &ScalarFunction<f64>, excise: &[f64]) -> f64 {
    let d = a.domain().intersect(b.domain()).excise(excise, POLE_GUARD);
    d.grid(400, &moderate())
        .into_iter()
        .map(|x| (a.eval(x) - b.eval(x)).abs() / (1.0 + b.eval(x).abs()))
        .fold(0.0, f64::max)
}

fn shifted_oscillator_pair(l: f64) -> (ScalarFunction<f64>, ScalarFunction<f64>, ScalarFunction<f64>, f64) {
    let p = OscillatorParams::new(l, 2.0, true).unwrap();
    let z0 = oscillator_eigenpair(&p, 0).unwrap();
    let z1 = oscillator_eigenpair(&p, 1).unwrap();
    let w0 = log_derivative(&z0.wavefunction, SignConvention::Plus).unwrap();
    let w1 = log_derivative(&z1.wavefunction, SignConvention::Plus).unwrap();
    (p.potential(), w0, w1, z1.energy)
}

#[test]
fn theorem_one_across_l() {
    for l in [-1.25, -0.5, 0.0, 1.0, 2.5] {
        let (v, w0, w1, el) = shifted_oscillator_pair(l);
        assert_eq!(el, 4.0);
        let r = finite_difference_backlund(&w0, &w1, 0.0, el, &v).unwrap();
        assert!(r.max_residual <= 1e-5, "l={l}: {:e}", r.max_residual);
        let via = act_on_solution(&backlund_element(&w0, el).unwrap(), &w1).unwrap();
        let d = max_rel_dev(&r.new_solution, &via, &[]);
        assert!(d <= 1e-9, "l={l}: group route deviates by {d:e}");
    }
}

#[test]
fn corollary_matches_theorem_one() {
    for l in [-1.25, 0.0, 1.0] {
        let (v, w0, w1, el) = shifted_oscillator_pair(l);
        let fd = finite_difference_backlund(&w0, &w1, 0.0, el, &v).unwrap();
        let g = GammaGauge::constant(1.0 / el.sqrt(), Domain::half_line()).unwrap();
        let gen = generalized_backlund(&w1, &w0, &g, &v, el).unwrap();
        let d = max_rel_dev(&gen.new_solution, &fd.new_solution, &[]);
        assert!(d <= 1e-9, "l={l}: {d:e}");
        let shift_dev = max_rel_dev(&gen.new_potential_shift, &fd.new_potential_shift, &[]);
        assert!(shift_dev <= 1e-9, "l={l}: target equations differ by {shift_dev:e}");
    }
}

#[test]
fn osc71_image_state_solves_image_equation() {
    let r = run_example::<f64>(Example::Osc71, &ExampleParams::default()).unwrap();
    let sweep = schrodinger_residual_sweep(&r.image_potential, r.image_energy, &r.eta, 1000).unwrap();
    assert!(sweep.max_rel <= 1e-5, "{:e}", sweep.max_rel);
}

#[test]
fn osc71_norm_depends_on_l_only() {
    for l in [-1.45, -1.25, -1.05] {
        let norms: Vec<f64> = [1.0, 2.0, 4.0]
            .iter()
            .map(|&b| run_example::<f64>(Example::Osc71, &ExampleParams { l, b, ..ExampleParams::default() }).unwrap().norm_sq)
            .collect();
        assert!((norms[0] - norms[1]).abs() < 1e-8 && (norms[2] - norms[1]).abs() < 1e-8, "l={l}: {norms:?}");
    }
}

#[test]
fn coul72_recovers_scaled_coupling() {
    let (l, q) = (2.0, -1.0);
    let r = run_example::<f64>(Example::Coul72, &ExampleParams { l, q, k: 1, ..ExampleParams::default() }).unwrap();
    // V_{l-k, q l/(l+1)} built from the family, not from the printed form
    let target = CoulombParams::new(l - 1.0, q * l / (l + 1.0), false).unwrap().potential();
    let d = max_rel_dev(&r.image_potential, &target, &[]);
    assert!(d <= 1e-6, "{d:e}");
    let z = coulomb_wavefunction(1.0, q * l / (l + 1.0), 0).unwrap();
    let spec = QuadratureSpec::default();
    let cos = inner_product(&r.eta, &z, &spec).unwrap()
        / (norm_squared(&r.eta, &spec).unwrap() * norm_squared(&z, &spec).unwrap()).sqrt();
    assert!((cos.abs() - 1.0).abs() <= 1e-6, "{cos}");
    assert!((r.norm_sq - 2.0 / 3.0).abs() <= 1e-6);
}

#[test]
fn coul72_higher_k_has_k_minus_one_nodes() {
    let r = run_example::<f64>(Example::Coul72, &ExampleParams { l: 3.0, q: -1.0, k: 2, ..ExampleParams::default() }).unwrap();
    assert_eq!(r.eta_zeros.len(), 1);
    assert!((r.norm_sq - 0.75).abs() <= 1e-6);
    let target = CoulombParams::new(1.0, -0.75, false).unwrap().potential();
    assert!(max_rel_dev(&r.image_potential, &target, &[]) <= 1e-6);
}

#[test]
fn coul74_single_node() {
    let (l, q) = (-1.25f64, -1.0);
    let r = run_example::<f64>(Example::Coul74, &ExampleParams { l, q, ..ExampleParams::default() }).unwrap();
    assert_eq!(r.eta_zeros.len(), 1);
    let x0 = (l + 1.0) * (l + 2.0) / q;
    assert!((r.eta_zeros[0] - x0).abs() <= 1e-8 * x0);
    assert!((x0 - 0.1875).abs() < 1e-15);
}

fn oscillator_l0() -> (OscillatorParams<f64>, ScalarFunction<f64>, ScalarFunction<f64>, f64) {
    let p = OscillatorParams::new(0.0, 2.0, false).unwrap();
    let g = oscillator_eigenpair(&p, 0).unwrap();
    (p, p.potential(), g.wavefunction, g.energy)
}

#[test]
fn factorization_reproduces_h0() {
    // (-d/dx - W)(d/dx - W)φ + E0 φ = -φ'' + V0 φ
    let (p, v0, psi0, e0) = oscillator_l0();
    let (_, fd) = intertwine_pair(&v0, &psi0, e0).unwrap();
    let w = &fd.superpotential;
    for k in [1, 2] {
        let phi = oscillator_eigenpair(&p, k).unwrap().wavefunction;
        let a_phi = &phi.derivative() - &(w * &phi);
        let lhs = &(&(-&a_phi.derivative()) - &(w * &a_phi)) + &phi.scale(e0);
        let rhs = &(-&phi.derivative().derivative()) + &(&v0 * &phi);
        let scale = phi.sample(&moderate().grid(400)).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for x in moderate().grid(400) {
            assert!((lhs.eval(x) - rhs.eval(x)).abs() <= 1e-8 * scale * (1.0 + v0.eval(x).abs()), "k={k} x={x}");
        }
    }
}

#[test]
fn mapped_states_match_group_form() {
    let (p, v0, psi0, e0) = oscillator_l0();
    let (_, fd) = intertwine_pair(&v0, &psi0, e0).unwrap();
    for n in 1..=4 {
        let e = oscillator_eigenpair(&p, n).unwrap();
        let psi1 = map_eigenfunction(&fd, &e.wavefunction, e.energy).unwrap();
        let wn = log_derivative(&e.wavefunction, SignConvention::Plus).unwrap();
        let bn = backlund_element(&fd.superpotential, e.energy - e0).unwrap();
        let via = act_on_solution(&bn, &wn).unwrap();
        let zeros = zeros_in(&psi1, &moderate());
        let d = max_rel_dev(&psi1.log_derivative(), &via, &zeros);
        assert!(d <= 1e-6, "n={n}: {d:e}");
    }
    let first = map_eigenfunction(&fd, &oscillator_eigenpair(&p, 1).unwrap().wavefunction, p.energy(1)).unwrap();
    assert!((norm_squared(&first, &QuadratureSpec::default()).unwrap() - 1.0).abs() <= 1e-4);
}

#[test]
fn inverse_ground_state_solves_partner() {
    let (_, v0, psi0, e0) = oscillator_l0();
    let (v1, _) = intertwine_pair(&v0, &psi0, e0).unwrap();
    let inv = psi0.recip().restrict(&Domain::single(0.01, 6.0).unwrap());
    let r = schrodinger_residual_sweep(&v1, e0, &inv, 500).unwrap();
    assert!(r.max_rel <= 1e-5, "{:e}", r.max_rel);
}
