use std::fmt;
use std::str::FromStr;

use crate::darboux::{generalized_backlund_with, schrodinger_backlund_with, GammaGauge, Tolerances, TransformReport};
use crate::error::{Error, Result};
use crate::fnspace::{zeros_in, Domain, Interval, ScalarFunction};
use crate::reduction::{log_derivative, SignConvention};
use crate::scalar::Real;
use crate::verify::{norm_squared, QuadratureSpec};

use super::closed_forms as cf;
use super::families::{coulomb_wavefunction, oscillator_wavefunction, CoulombParams, OscillatorParams};

/// The four worked transformations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Example {
    /// Oscillator, `ζ₀^{l+1,b}` transformed with `ζ₀^{l,b}`.
    Osc71,
    /// Coulomb, `ζ_k^{l-k,q}` transformed with `ζ₀^{l,q}`.
    Coul72,
    /// Shifted Coulomb, intermediate state `ζ₀^{l,-q}`.
    Coul73,
    /// Shifted Coulomb, non-normalizable intermediate state `ζ₀^{l,q}`.
    Coul74,
}

impl Example {
    pub const ALL: [Example; 4] = [Example::Osc71, Example::Coul72, Example::Coul73, Example::Coul74];

    pub fn name(self) -> &'static str {
        match self {
            Example::Osc71 => "osc-7.1",
            Example::Coul72 => "coul-7.2",
            Example::Coul73 => "coul-7.3",
            Example::Coul74 => "coul-7.4",
        }
    }
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Example {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        match key.as_str() {
            "osc-7.1" | "osc-71" | "osc71" | "7.1" => Ok(Example::Osc71),
            "coul-7.2" | "coul-72" | "coul72" | "7.2" => Ok(Example::Coul72),
            "coul-7.3" | "coul-73" | "coul73" | "7.3" => Ok(Example::Coul73),
            "coul-7.4" | "coul-74" | "coul74" | "7.4" => Ok(Example::Coul74),
            _ => Err(Error::Config(format!("unknown example '{s}'"))),
        }
    }
}

/// Parameters of an example; unused ones are ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExampleParams<T> {
    pub l: T,
    pub b: T,
    pub q: T,
    pub k: usize,
}

impl<T: Real> Default for ExampleParams<T> {
    fn default() -> Self {
        Self {
            l: T::lit(-1.25),
            b: T::lit(2.0),
            q: -T::one(),
            k: 1,
        }
    }
}

/// Comparison of the pipeline against the printed closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormCheck<T> {
    /// `max |V_pipeline - V_printed| / max(1, |V_printed|)`.
    pub potential_deviation: T,
    /// Mean of `η_pipeline / η_printed`.
    pub eta_ratio: T,
    /// `max |ratio - mean| / |mean|`.
    pub eta_ratio_spread: T,
}

/// Everything an example run produces.
#[derive(Debug, Clone)]
pub struct ExampleResult<T: Real> {
    pub example: Example,
    pub params: ExampleParams<T>,
    pub initial_potential: ScalarFunction<T>,
    pub initial_energy: T,
    /// `V + 1/γ²`, solved by the intermediate state at the same energy.
    pub intermediate_potential: ScalarFunction<T>,
    pub image_potential: ScalarFunction<T>,
    pub image_energy: T,
    pub gauge: GammaGauge<T>,
    pub phi_in: ScalarFunction<T>,
    pub phi_intermediate: ScalarFunction<T>,
    pub eta: ScalarFunction<T>,
    pub norm_sq: T,
    /// Norm given in closed form, when there is one.
    pub reference_norm_sq: Option<T>,
    pub report: TransformReport<T>,
    /// The same transformation done on log-derivatives.
    pub riccati_report: TransformReport<T>,
    /// `max |(log η)' - w̄| / (1 + |w̄|)`.
    pub log_derivative_deviation: T,
    pub closed_form: ClosedFormCheck<T>,
    pub eta_zeros: Vec<T>,
    pub notes: Vec<String>,
}

struct Setup<T: Real> {
    potential: ScalarFunction<T>,
    energy: T,
    phi_w: ScalarFunction<T>,
    phi_v: ScalarFunction<T>,
    gauge: GammaGauge<T>,
    image_energy: T,
    notes: Vec<String>,
}

fn x<T: Real>() -> ScalarFunction<T> {
    ScalarFunction::identity(Domain::half_line())
}

fn require(ok: bool, example: Example, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{example} requires {what}")))
    }
}

fn check_params<T: Real>(which: Example, p: &ExampleParams<T>) -> Result<()> {
    let l = p.l;
    match which {
        Example::Osc71 => {
            require(l > T::lit(-1.5) && l < -T::one(), which, "-3/2 < l < -1")?;
            require(p.b > T::zero(), which, "b > 0")
        }
        Example::Coul72 => {
            require(p.k >= 1, which, "k - 1 >= 0")?;
            require(l > T::count(p.k) - T::one(), which, "l > k - 1")?;
            require(p.q < T::zero(), which, "q < 0")
        }
        Example::Coul73 | Example::Coul74 => {
            require(l > T::lit(-1.5) && l < -T::one(), which, "-3/2 < l < -1")?;
            require(p.q < T::zero(), which, "q < 0")
        }
    }
}

fn setup<T: Real>(which: Example, p: &ExampleParams<T>) -> Result<Setup<T>> {
    check_params(which, p)?;
    let (l, b, q) = (p.l, p.b, p.q);
    let one = T::one();
    let two = T::lit(2.0);
    let x = x::<T>();
    Ok(match which {
        Example::Osc71 => {
            let gamma = x.powi(-2).scale(-two * (l + one)).offset(b).powf(T::lit(-0.5));
            Setup {
                potential: OscillatorParams::new(l + one, b, true)?.potential(),
                energy: T::zero(),
                phi_w: oscillator_wavefunction(l + one, b, 0)?,
                phi_v: oscillator_wavefunction(l, b, 0)?,
                gauge: GammaGauge::new(gamma)?,
                image_energy: T::zero(),
                notes: Vec::new(),
            }
        }
        Example::Coul72 => {
            let k = p.k;
            let kt = T::count(k);
            let energy = -q * q / (l + one).powi(2);
            let gamma = x.scale(one / (kt * (two * l + one - kt)).sqrt());
            Setup {
                potential: CoulombParams::new(l - kt, q, false)?.potential(),
                energy,
                phi_w: coulomb_wavefunction(l - kt, q, k)?,
                phi_v: coulomb_wavefunction(l, q, 0)?,
                gauge: GammaGauge::new(gamma)?,
                image_energy: energy,
                notes: Vec::new(),
            }
        }
        Example::Coul73 | Example::Coul74 => {
            let a = (two * l + T::lit(3.0)) * q * q / ((l + one).powi(2) * (l + two).powi(2));
            let linear = if which == Example::Coul73 { T::lit(-4.0) * q } else { T::zero() };
            let radicand = (&x.powi(2).scale(a) + &x.scale(linear)).offset(-two * (l + one));
            let gamma = &x * &radicand.powf(T::lit(-0.5));
            let (phi_v, notes) = if which == Example::Coul73 {
                (
                    coulomb_wavefunction(l, -q, 0)?,
                    vec!["eta is nodeless and expected to be the ground state of the image potential".to_string()],
                )
            } else {
                (
                    coulomb_wavefunction(l, q, 0)?,
                    vec![
                        "intermediate state is the formal, non-normalizable zero-energy solution".to_string(),
                        "eta has one node; a negative-energy ground state is expected but not constructed".to_string(),
                    ],
                )
            };
            Setup {
                potential: CoulombParams::new(l + one, q, true)?.potential(),
                energy: T::zero(),
                phi_w: coulomb_wavefunction(l + one, q, 0)?,
                phi_v,
                gauge: GammaGauge::new(gamma)?,
                image_energy: T::zero(),
                notes,
            }
        }
    })
}

fn closed_potential<T: Real>(which: Example, p: &ExampleParams<T>, x: T) -> T {
    match which {
        Example::Osc71 => cf::osc71_potential(p.l, p.b, x),
        Example::Coul72 => cf::coul72_potential(p.l, p.q, p.k, x),
        Example::Coul73 => cf::coul73_potential(p.l, p.q, x),
        Example::Coul74 => cf::coul74_potential(p.l, p.q, x),
    }
}

fn closed_eta<T: Real>(which: Example, p: &ExampleParams<T>, x: T) -> Result<T> {
    match which {
        Example::Osc71 => cf::osc71_eta(p.l, p.b, x),
        Example::Coul72 => cf::coul72_eta(p.l, p.q, p.k, x),
        Example::Coul73 => cf::coul73_eta(p.l, p.q, x),
        Example::Coul74 => cf::coul74_eta(p.l, p.q, x),
    }
}

fn closed_form_check<T: Real>(
    which: Example,
    p: &ExampleParams<T>,
    image: &ScalarFunction<T>,
    eta: &ScalarFunction<T>,
    window: &Interval<T>,
) -> Result<ClosedFormCheck<T>> {
    let mut potential_deviation = T::zero();
    for x in image.domain().grid(500, window) {
        let c = closed_potential(which, p, x);
        let d = (image.eval(x) - c).abs() / T::one().max(c.abs());
        if !(d <= potential_deviation) {
            potential_deviation = d;
        }
    }
    let grid = eta.domain().grid(500, &Interval::new(T::lit(1e-3), T::lit(20.0))?);
    let mut pairs = Vec::with_capacity(grid.len());
    for &x in &grid {
        pairs.push((eta.eval(x), closed_eta(which, p, x)?));
    }
    let peak = pairs.iter().fold(T::zero(), |m, &(_, c)| m.max(c.abs()));
    let ratios: Vec<T> = pairs
        .iter()
        .filter(|&&(_, c)| c.abs() > T::lit(1e-8) * peak)
        .map(|&(e, c)| e / c)
        .collect();
    if ratios.is_empty() {
        return Err(Error::DegenerateInput("closed-form eigenstate vanishes on the check grid".into()));
    }
    let mean = ratios.iter().copied().sum::<T>() / T::count(ratios.len());
    let spread = ratios.iter().fold(T::zero(), |m, &r| {
        let d = (r - mean).abs() / mean.abs();
        if d.is_nan() || d > m {
            d
        } else {
            m
        }
    });
    Ok(ClosedFormCheck {
        potential_deviation,
        eta_ratio: mean,
        eta_ratio_spread: spread,
    })
}

/// Runs an example with default tolerances.
pub fn run_example<T: Real>(which: Example, params: &ExampleParams<T>) -> Result<ExampleResult<T>> {
    run_example_with(which, params, &Tolerances::default())
}

/// Assembles `γ` and the two input states, applies the Schrödinger-level
/// transformation, and cross-checks the result at Riccati level and
/// against the printed closed forms.
pub fn run_example_with<T: Real>(which: Example, params: &ExampleParams<T>, tol: &Tolerances<T>) -> Result<ExampleResult<T>> {
    let s = setup(which, params)?;
    let report = schrodinger_backlund_with(&s.phi_w, &s.phi_v, &s.gauge, &s.potential, s.energy, tol)?;
    let image_potential = report.new_potential_shift.offset(s.image_energy);
    let eta = report.new_solution.clone();

    let w = log_derivative(&s.phi_w, SignConvention::Plus)?;
    let v = log_derivative(&s.phi_v, SignConvention::Plus)?;
    let riccati_report = generalized_backlund_with(&w, &v, &s.gauge, &s.potential, s.energy, tol)?;

    let check_window = Interval::new(T::lit(0.01), T::lit(8.0))?;
    let eta_zeros = zeros_in(&eta, &tol.window);
    let eta_log = eta.log_derivative();
    let mut log_derivative_deviation = T::zero();
    let domain = riccati_report.domain.excise(&eta_zeros, T::lit(crate::riccati::POLE_GUARD));
    for x in domain.grid(500, &check_window) {
        let wb = riccati_report.new_solution.eval(x);
        let d = (eta_log.eval(x) - wb).abs() / (T::one() + wb.abs());
        if !(d <= log_derivative_deviation) {
            log_derivative_deviation = d;
        }
    }

    let norm_sq = norm_squared(&eta, &QuadratureSpec::default())?;
    let reference_norm_sq = match which {
        Example::Osc71 => Some(cf::osc71_norm_sq(params.l)?),
        Example::Coul72 => Some(params.l / (params.l + T::one())),
        _ => None,
    };
    let closed_form = closed_form_check(which, params, &image_potential, &eta, &tol.window)?;
    let intermediate_potential = &s.potential + &s.gauge.inverse_square();

    Ok(ExampleResult {
        example: which,
        params: *params,
        initial_potential: s.potential,
        initial_energy: s.energy,
        intermediate_potential,
        image_potential,
        image_energy: s.image_energy,
        gauge: s.gauge,
        phi_in: s.phi_w,
        phi_intermediate: s.phi_v,
        eta,
        norm_sq,
        reference_norm_sq,
        report,
        riccati_report,
        log_derivative_deviation,
        closed_form,
        eta_zeros,
        notes: s.notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for e in Example::ALL {
            assert_eq!(e.name().parse::<Example>().unwrap(), e);
        }
        assert!("osc-9".parse::<Example>().is_err());
    }

    #[test]
    fn parameter_ranges_name_the_inequality() {
        let p = ExampleParams {
            l: -0.5,
            ..ExampleParams::default()
        };
        match run_example::<f64>(Example::Osc71, &p) {
            Err(Error::Parameter(m)) => assert!(m.contains("-3/2 < l < -1"), "{m}"),
            other => panic!("{other:?}"),
        }
        let p = ExampleParams {
            l: 2.0,
            q: 1.0,
            ..ExampleParams::default()
        };
        assert!(matches!(run_example::<f64>(Example::Coul72, &p), Err(Error::Parameter(_))));
    }

    #[test]
    fn osc71_reference_run() {
        let r = run_example::<f64>(Example::Osc71, &ExampleParams::default()).unwrap();
        assert!(r.report.max_residual <= 1e-5);
        assert!(r.closed_form.potential_deviation < 1e-6, "{:?}", r.closed_form);
        assert!(r.closed_form.eta_ratio_spread < 1e-8);
        assert!((r.norm_sq - r.reference_norm_sq.unwrap()).abs() < 1e-6);
        assert!(r.eta_zeros.is_empty());
    }
}
