use serde_json::json;

use crate::darboux::{
    backlund_element, finite_difference_backlund_with, generalized_backlund_with, intertwine_pair_with, map_eigenfunction,
    schrodinger_backlund_with, FactorizationData, GammaGauge, Tolerances,
};
use crate::error::{Error, Result};
use crate::fnspace::{zeros_in, Domain, Interval, ScalarFunction};
use crate::potentials::closed_forms::coul74_zero;
use crate::potentials::{
    coulomb_eigenpair, oscillator_eigenpair, run_example_with, CoulombParams, EigenPair, Example, ExampleParams, OscillatorParams,
};
use crate::reduction::{log_derivative, SignConvention};
use crate::riccati::{act_on_solution, POLE_GUARD};
use crate::verify::{inner_product, norm_squared, schrodinger_residual_sweep_in, QuadratureSpec};

use super::config::{Family, Pipeline, PipelineKind, Theorem};
use super::report::{Outcome, Table};

const AGREEMENT_GRID: usize = 500;

/// Window for pointwise comparisons away from the origin and the far tail.
fn check_window() -> Interval<f64> {
    Interval::new(0.01, 8.0).expect("valid window")
}

/// `max |a - b| / (1 + |b|)` on `dom(a) ∩ dom(b)` minus `[p ± guard]`
/// around each of `excise`. NaN anywhere makes the result NaN.
pub fn agreement(a: &ScalarFunction<f64>, b: &ScalarFunction<f64>, window: &Interval<f64>, excise: &[f64]) -> f64 {
    let domain = a.domain().intersect(b.domain()).excise(excise, POLE_GUARD);
    let mut worst = 0.0f64;
    for x in domain.grid(AGREEMENT_GRID, window) {
        let (u, v) = (a.eval(x), b.eval(x));
        let d = (u - v).abs() / (1.0 + v.abs());
        if d.is_nan() {
            return f64::NAN;
        }
        worst = worst.max(d);
    }
    worst
}

/// Largest `|G - I|` entry of the Gram matrix of `fs`.
pub fn gram_deviation(fs: &[ScalarFunction<f64>], spec: &QuadratureSpec<f64>) -> Result<f64> {
    let mut worst = 0.0f64;
    for (i, f) in fs.iter().enumerate() {
        for (j, g) in fs.iter().enumerate().skip(i) {
            let ip = inner_product(f, g, spec)?;
            let target = if i == j { 1.0 } else { 0.0 };
            let d = (ip - target).abs();
            if d.is_nan() {
                return Ok(f64::NAN);
            }
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

pub fn eigenpair(family: &Family, k: usize) -> Result<EigenPair<f64>> {
    match family {
        Family::Oscillator(p) => oscillator_eigenpair(p, k as i64),
        Family::Coulomb(p) => coulomb_eigenpair(p, k as i64),
    }
}

/// Same family with `l -> l + 1`.
fn raised(family: &Family) -> Result<Family> {
    Ok(match family {
        Family::Oscillator(p) => Family::Oscillator(OscillatorParams::new(p.l + 1.0, p.b, p.shifted)?),
        Family::Coulomb(p) => Family::Coulomb(CoulombParams::new(p.l + 1.0, p.q, p.shifted)?),
    })
}

fn potential(family: &Family) -> ScalarFunction<f64> {
    match family {
        Family::Oscillator(p) => p.potential(),
        Family::Coulomb(p) => p.potential(),
    }
}

fn tolerances(p: &Pipeline) -> Tolerances<f64> {
    Tolerances {
        residual: p.seed_tol,
        window: p.window,
        enforce: false,
        ..Tolerances::default()
    }
}

/// Runs a validated pipeline. `with_table` controls curve sampling.
pub fn run(p: &Pipeline, with_table: bool) -> Result<Outcome> {
    let mut o = Outcome::default();
    match &p.kind {
        PipelineKind::Example { which, params } => example(&mut o, p, *which, params)?,
        PipelineKind::Family { family, theorem, k, gauge } => match theorem {
            Theorem::T1 | Theorem::T2 | Theorem::T3 => theorem_pipeline(&mut o, p, family, *theorem, *k, *gauge)?,
            Theorem::Intertwine => intertwine(&mut o, p, family, *k)?,
        },
    }
    if !with_table {
        o.table = None;
    }
    Ok(o)
}

/// The norm a sweep reports for this pipeline.
pub fn headline_norm(p: &Pipeline, o: &Outcome) -> Option<f64> {
    let key = match &p.kind {
        PipelineKind::Example { .. } => "eta_sq",
        PipelineKind::Family {
            theorem: Theorem::Intertwine,
            ..
        } => "psi1_1",
        PipelineKind::Family { .. } => "phi_out_sq",
    };
    o.norms.get(key).copied()
}

fn expected_zero_count(which: Example, params: &ExampleParams<f64>) -> usize {
    match which {
        Example::Coul72 => params.k - 1,
        Example::Coul74 => 1,
        _ => 0,
    }
}

fn example(o: &mut Outcome, p: &Pipeline, which: Example, params: &ExampleParams<f64>) -> Result<()> {
    let tol = tolerances(p);
    let r = run_example_with(which, params, &tol)?;
    o.residual("schrodinger_backlund", r.report.max_residual, p.seed_tol);
    o.residual("generalized_backlund", r.riccati_report.max_residual, p.seed_tol);
    o.at_most("riccati_vs_schrodinger.log_derivative", r.log_derivative_deviation, 1e-7);
    o.at_most("closed_form.potential", r.closed_form.potential_deviation, 1e-6);
    o.at_most("closed_form.eta_ratio_spread", r.closed_form.eta_ratio_spread, 1e-6);

    o.norm("eta_sq", r.norm_sq);
    if let Some(reference) = r.reference_norm_sq {
        o.norm("reference_eta_sq", reference);
        o.close_to("norm.eta_sq_vs_reference", r.norm_sq, reference, 1e-6);
    }

    let expected = expected_zero_count(which, params);
    o.diag("eta_zero_count", r.eta_zeros.len());
    o.diag("eta_zero_count_expected", expected);
    o.close_to("eta.zero_count_mismatch", r.eta_zeros.len() as f64, expected as f64, 0.0);
    if which == Example::Coul74 && r.eta_zeros.len() == 1 {
        let x0 = coul74_zero(params.l, params.q);
        o.diag("eta_zero_expected", x0);
        o.at_most("eta.zero_location", ((r.eta_zeros[0] - x0) / x0).abs(), 1e-8);
    }

    o.diag("eta_zeros", r.eta_zeros.clone());
    o.diag("eta_ratio_to_closed_form", r.closed_form.eta_ratio);
    o.diag("initial_energy", r.initial_energy);
    o.diag("image_energy", r.image_energy);
    o.diag("skipped_points", r.riccati_report.skipped_points);
    o.diag("notes", r.notes.clone());

    let grid = p.window.grid(p.samples);
    o.table = Some(Table::sample(
        &grid,
        &[
            ("V0", &r.initial_potential),
            ("V_intermediate", &r.intermediate_potential),
            ("V_image", &r.image_potential),
            ("phi_in", &r.phi_in),
            ("phi_out", &r.eta),
        ],
    ));
    Ok(())
}

/// The constant gauge `1/√(ε_l - ε_k)`, or a user value with the same square.
fn constant_gauge(requested: Option<f64>, gap: f64, domain: &Domain<f64>) -> Result<GammaGauge<f64>> {
    let natural = 1.0 / gap.sqrt();
    let c = match requested {
        None => natural,
        Some(c) if c.is_finite() && ((1.0 / (c * c)) - gap).abs() <= 1e-9 * gap => c,
        Some(c) => {
            return Err(Error::Config(format!(
                "a constant gauge needs 1/gauge^2 = E_(k+1) - E_k = {gap}, i.e. gauge = ±{natural}, got {c}"
            )))
        }
    };
    GammaGauge::constant(c, domain.clone())
}

fn theorem_pipeline(o: &mut Outcome, p: &Pipeline, family: &Family, theorem: Theorem, k: usize, gauge: Option<f64>) -> Result<()> {
    let tol = tolerances(p);
    let v = potential(family);
    let lo = eigenpair(family, k)?;
    let hi = eigenpair(family, k + 1)?;
    let gap = hi.energy - lo.energy;
    let wk = log_derivative(&lo.wavefunction, SignConvention::Plus)?;
    let wl = log_derivative(&hi.wavefunction, SignConvention::Plus)?;
    o.diag("energy_k", lo.energy);
    o.diag("energy_l", hi.energy);

    let fd = finite_difference_backlund_with(&wk, &wl, lo.energy, hi.energy, &v, &tol)?;
    let mapped = map_eigenfunction(&FactorizationData::new(wk.clone(), lo.energy), &hi.wavefunction, hi.energy)?;
    let (solution, shift, intermediate) = match theorem {
        Theorem::T1 => {
            o.residual("finite_difference_backlund", fd.max_residual, p.seed_tol);
            o.diag("skipped_points", fd.skipped_points);
            let a0 = backlund_element(&wk, gap)?;
            let via = act_on_solution(&a0, &wl)?;
            o.at_most("group_route.agreement", agreement(&fd.new_solution, &via, &check_window(), &[]), 1e-9);
            (fd.new_solution.clone(), fd.new_potential_shift.clone(), None)
        }
        Theorem::T2 | Theorem::T3 => {
            let g = constant_gauge(gauge, gap, v.domain())?;
            o.diag("gauge", g.gamma().eval(1.0));
            let t2 = generalized_backlund_with(&wl, &wk, &g, &v, hi.energy, &tol)?;
            o.residual("generalized_backlund", t2.max_residual, p.seed_tol);
            o.diag("skipped_points", t2.skipped_points);
            o.at_most("corollary.agreement", agreement(&t2.new_solution, &fd.new_solution, &check_window(), &[]), 1e-9);
            let flipped = generalized_backlund_with(&wl, &wk, &g.negated(), &v, hi.energy, &tol)?;
            o.at_most("gauge_sign.agreement", agreement(&flipped.new_solution, &t2.new_solution, &check_window(), &[]), 1e-12);
            let intermediate = &v + &g.inverse_square();
            if theorem == Theorem::T3 {
                let t3 = schrodinger_backlund_with(&hi.wavefunction, &lo.wavefunction, &g, &v, hi.energy, &tol)?;
                o.residual("schrodinger_backlund", t3.max_residual, p.seed_tol);
                let zeros = zeros_in(&t3.new_solution, &check_window());
                let dev = agreement(&t3.new_solution.log_derivative(), &t2.new_solution, &check_window(), &zeros);
                o.at_most("riccati_vs_schrodinger.log_derivative", dev, 1e-7);
                o.at_most("schrodinger_vs_mapped", agreement(&t3.new_solution, &mapped, &check_window(), &[]), 1e-9);
            }
            (t2.new_solution, t2.new_potential_shift, Some(intermediate))
        }
        Theorem::Intertwine => unreachable!("handled by intertwine"),
    };

    let image = shift.offset(hi.energy);
    let out_residual = schrodinger_residual_sweep_in(&shift, 0.0, &mapped, tol.grid, &p.window)?.max_rel;
    o.residual("phi_out", out_residual, p.seed_tol);
    let zeros = zeros_in(&mapped, &check_window());
    o.at_most(
        "phi_out.log_derivative",
        agreement(&mapped.log_derivative(), &solution, &check_window(), &zeros),
        1e-6,
    );
    if k == 0 {
        // mapped first excited state of a nodeless factorization
        let n = norm_squared(&mapped, &QuadratureSpec::default())?;
        o.norm("phi_out_sq", n);
        o.close_to("norm.phi_out_sq", n, 1.0, 1e-4);
    }

    let grid = p.window.grid(p.samples);
    let mut columns: Vec<(&str, &ScalarFunction<f64>)> = vec![("V0", &v)];
    if let Some(f) = &intermediate {
        columns.push(("V_intermediate", f));
    }
    columns.extend([("V_image", &image), ("phi_in", &hi.wavefunction), ("phi_out", &mapped)]);
    o.table = Some(Table::sample(&grid, &columns));
    Ok(())
}

fn intertwine(o: &mut Outcome, p: &Pipeline, family: &Family, nmax: usize) -> Result<()> {
    if nmax == 0 {
        return Err(Error::Config("INTERTWINE maps states n = 1..k; k must be at least 1".into()));
    }
    let tol = tolerances(p);
    let v0 = potential(family);
    let ground = eigenpair(family, 0)?;
    let (v1, fd) = intertwine_pair_with(&v0, &ground.wavefunction, ground.energy, &tol)?;
    let w1 = fd.superpotential.clone();

    let mut states = Vec::with_capacity(nmax);
    let mut first = None;
    for n in 1..=nmax {
        let e = eigenpair(family, n)?;
        let psi1 = map_eigenfunction(&fd, &e.wavefunction, e.energy)?;
        let r = schrodinger_residual_sweep_in(&v1, e.energy, &psi1, tol.grid, &p.window)?.max_rel;
        o.residual(&format!("psi1_{n}"), r, p.seed_tol);

        let wn = log_derivative(&e.wavefunction, SignConvention::Plus)?;
        let expected = &(-&w1) + &(&w1 - &wn).recip().scale(e.energy - ground.energy);
        let zeros = zeros_in(&psi1, &check_window());
        let dev = agreement(&psi1.log_derivative(), &expected, &check_window(), &zeros);
        o.at_most(&format!("psi1_{n}.log_derivative"), dev, 1e-6);

        if first.is_none() {
            first = Some(e.wavefunction.clone());
        }
        states.push(psi1);
    }
    let spec = QuadratureSpec::default();
    for (i, s) in states.iter().enumerate() {
        o.norm(&format!("psi1_{}", i + 1), norm_squared(s, &spec)?);
    }
    o.at_most("gram.deviation", gram_deviation(&states, &spec)?, 2e-4);

    // V1 - V_{l+1} must be the constant E_1(l) - E_0(l+1)
    let up = raised(family)?;
    let target = eigenpair(family, 1)?.energy - eigenpair(&up, 0)?.energy;
    let diff = &v1 - &potential(&up);
    let samples = diff.sample(&diff.domain().grid(AGREEMENT_GRID, &Interval::new(0.01, 10.0)?));
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let spread = samples.iter().fold(0.0f64, |m, &d| {
        let e = (d - mean).abs() / mean.abs().max(1.0);
        if e.is_nan() {
            f64::NAN
        } else {
            m.max(e)
        }
    });
    o.diag("shape_invariance_constant", mean);
    o.diag("shape_invariance_expected", target);
    o.at_most("shape_invariance.spread", spread, 1e-6);
    o.close_to("shape_invariance.constant", mean, target, 1e-6);

    // 1/ψ₀ solves the partner equation at E₀
    let inverse = ground.wavefunction.recip();
    let r = schrodinger_residual_sweep_in(&v1, ground.energy, &inverse, tol.grid, &Interval::new(0.01, 6.0)?)?.max_rel;
    o.residual("inverse_ground_state", r, p.seed_tol);

    o.diag("ground_energy", ground.energy);
    o.diag("states", json!((1..=nmax).collect::<Vec<_>>()));

    let grid = p.window.grid(p.samples);
    let psi = first.expect("nmax >= 1");
    o.table = Some(Table::sample(
        &grid,
        &[("V0", &v0), ("V_image", &v1), ("phi_in", &psi), ("phi_out", &states[0])],
    ));
    Ok(())
}
