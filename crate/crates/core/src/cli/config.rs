use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fnspace::Interval;
use crate::potentials::{CoulombParams, Example, ExampleParams, OscillatorParams};

pub const SEED_TOL_ENV: &str = "RICCATI_FORGE_SEED_TOL";
pub const DEFAULT_SEED_TOL: f64 = 1e-5;
pub const DEFAULT_SAMPLES: usize = 2000;

/// `--gauge`: a constant value or the gauge named by the example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GaugeSpec {
    Constant(f64),
    Named(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub lo: f64,
    pub hi: f64,
}

/// Pipeline configuration as read from `--config` and flags. Everything
/// is optional here; [`PipelineConfig::resolve`] applies defaults and
/// validates.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub family: Option<String>,
    pub variant: Option<String>,
    pub theorem: Option<String>,
    pub example: Option<String>,
    pub params: BTreeMap<String, f64>,
    pub gauge: Option<GaugeSpec>,
    pub window: Option<WindowSpec>,
    pub samples: Option<usize>,
    pub outputs: Vec<String>,
    pub out_dir: Option<PathBuf>,
    pub suite: Option<String>,
    pub kmax: Option<usize>,
    pub param: Option<String>,
    pub grid: Option<Vec<f64>>,
}

impl PipelineConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `other` win.
    pub fn overlay(mut self, other: PipelineConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(family, variant, theorem, example, gauge, window, samples, out_dir, suite, kmax, param, grid);
        self.params.extend(other.params);
        if !other.outputs.is_empty() {
            self.outputs = other.outputs;
        }
        self
    }

    pub fn set_param(&mut self, name: &str, value: f64) {
        self.params.insert(name.to_string(), value);
    }

    /// Defaults and validation.
    pub fn resolve(&self) -> Result<Pipeline> {
        let window = match self.window {
            Some(w) => Interval::new(w.lo, w.hi)
                .map_err(|_| Error::Config(format!("window needs lo < hi, got ({}, {})", w.lo, w.hi)))?,
            None => Interval::default_window(),
        };
        if window.lo() < 0.0 {
            return Err(Error::Config("window must lie on the half-line x > 0".into()));
        }
        let samples = self.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        for key in self.params.keys() {
            if !["l", "b", "q", "k"].contains(&key.as_str()) {
                return Err(Error::Config(format!("unknown parameter '{key}'")));
            }
        }
        let k = match self.params.get("k") {
            Some(&k) if k < 0.0 || k.fract() != 0.0 => {
                return Err(Error::Config(format!("k must be a nonnegative integer, got {k}")))
            }
            Some(&k) => Some(k as usize),
            None => None,
        };
        let get = |name: &str, default: f64| self.params.get(name).copied().unwrap_or(default);

        let kind = if let Some(name) = &self.example {
            let which: Example = name.parse()?;
            if let Some(t) = &self.theorem {
                if t.parse::<Theorem>()? != Theorem::T3 {
                    return Err(Error::Config(format!("{which} runs the Schrodinger-level theorem (T3), not {t}")));
                }
            }
            match &self.gauge {
                None => {}
                Some(GaugeSpec::Named(g)) if g == "example" || g == which.name() => {}
                Some(g) => return Err(Error::Config(format!("{which} uses its own gauge, got {g:?}"))),
            }
            let default_l = if which == Example::Coul72 { 2.0 } else { -1.25 };
            PipelineKind::Example {
                which,
                params: ExampleParams {
                    l: get("l", default_l),
                    b: get("b", 2.0),
                    q: get("q", -1.0),
                    k: k.unwrap_or(1),
                },
            }
        } else {
            let family: FamilyName = self
                .family
                .as_deref()
                .ok_or_else(|| Error::Config("either --example or --family is required".into()))?
                .parse()?;
            let shifted = match self.variant.as_deref().unwrap_or("unshifted") {
                "shifted" => true,
                "unshifted" => false,
                other => return Err(Error::Config(format!("variant must be shifted or unshifted, got '{other}'"))),
            };
            let theorem: Theorem = self.theorem.as_deref().unwrap_or("INTERTWINE").parse()?;
            let l = get("l", 0.0);
            let family = match family {
                FamilyName::Oscillator => Family::Oscillator(OscillatorParams::new(l, get("b", 2.0), shifted)?),
                FamilyName::Coulomb => Family::Coulomb(CoulombParams::new(l, get("q", -1.0), shifted)?),
            };
            let gauge = match &self.gauge {
                None => None,
                Some(GaugeSpec::Constant(c)) => Some(*c),
                Some(GaugeSpec::Named(s)) => match s.parse::<f64>() {
                    Ok(c) => Some(c),
                    Err(_) => return Err(Error::Config(format!("family pipelines take a constant gauge, got '{s}'"))),
                },
            };
            if gauge.is_some() && !matches!(theorem, Theorem::T2 | Theorem::T3) {
                return Err(Error::Config(format!("a gauge only applies to T2 and T3, not {theorem}")));
            }
            PipelineKind::Family {
                family,
                theorem,
                // INTERTWINE: number of mapped states
                k: match theorem {
                    Theorem::Intertwine => k.or(self.kmax).unwrap_or(4),
                    _ => k.unwrap_or(0),
                },
                gauge,
            }
        };
        Ok(Pipeline {
            kind,
            window,
            samples,
            seed_tol: seed_tolerance()?,
        })
    }
}

/// Global residual threshold, from `RICCATI_FORGE_SEED_TOL` when set.
pub fn seed_tolerance() -> Result<f64> {
    match std::env::var(SEED_TOL_ENV) {
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
            _ => Err(Error::Config(format!("{SEED_TOL_ENV} must be a positive number, got '{s}'"))),
        },
        Err(_) => Ok(DEFAULT_SEED_TOL),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FamilyName {
    Oscillator,
    Coulomb,
}

impl FromStr for FamilyName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "oscillator" | "osc" => Ok(FamilyName::Oscillator),
            "coulomb" | "coul" => Ok(FamilyName::Coulomb),
            _ => Err(Error::Config(format!("family must be oscillator or coulomb, got '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    T1,
    T2,
    T3,
    Intertwine,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::T1 => "T1",
            Theorem::T2 => "T2",
            Theorem::T3 => "T3",
            Theorem::Intertwine => "INTERTWINE",
        })
    }
}

impl FromStr for Theorem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "T1" => Ok(Theorem::T1),
            "T2" => Ok(Theorem::T2),
            "T3" => Ok(Theorem::T3),
            "INTERTWINE" => Ok(Theorem::Intertwine),
            _ => Err(Error::Config(format!("theorem must be T1, T2, T3 or INTERTWINE, got '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Oscillator(OscillatorParams<f64>),
    Coulomb(CoulombParams<f64>),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Oscillator(_) => "oscillator",
            Family::Coulomb(_) => "coulomb",
        }
    }

    pub fn shifted(&self) -> bool {
        match self {
            Family::Oscillator(p) => p.shifted,
            Family::Coulomb(p) => p.shifted,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PipelineKind {
    Example { which: Example, params: ExampleParams<f64> },
    Family { family: Family, theorem: Theorem, k: usize, gauge: Option<f64> },
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Pipeline {
    pub kind: PipelineKind,
    pub window: Interval<f64>,
    pub samples: usize,
    pub seed_tol: f64,
}

impl Pipeline {
    /// Short name used for output files.
    pub fn stem(&self) -> String {
        match &self.kind {
            PipelineKind::Example { which, .. } => which.name().to_string(),
            PipelineKind::Family { family, theorem, .. } => {
                format!("{}-{}", family.name(), theorem.to_string().to_ascii_lowercase())
            }
        }
    }

    /// Parameters echoed into reports.
    pub fn parameters(&self) -> BTreeMap<String, serde_json::Value> {
        use serde_json::json;
        let mut m = BTreeMap::new();
        match &self.kind {
            PipelineKind::Example { which, params } => {
                m.insert("example".into(), json!(which.name()));
                m.insert("l".into(), json!(params.l));
                match which {
                    Example::Osc71 => {
                        m.insert("b".into(), json!(params.b));
                    }
                    Example::Coul72 => {
                        m.insert("q".into(), json!(params.q));
                        m.insert("k".into(), json!(params.k));
                    }
                    _ => {
                        m.insert("q".into(), json!(params.q));
                    }
                }
            }
            PipelineKind::Family { family, theorem, k, gauge } => {
                m.insert("family".into(), json!(family.name()));
                m.insert("variant".into(), json!(if family.shifted() { "shifted" } else { "unshifted" }));
                m.insert("theorem".into(), json!(theorem.to_string()));
                m.insert("k".into(), json!(k));
                match family {
                    Family::Oscillator(p) => {
                        m.insert("l".into(), json!(p.l));
                        m.insert("b".into(), json!(p.b));
                    }
                    Family::Coulomb(p) => {
                        m.insert("l".into(), json!(p.l));
                        m.insert("q".into(), json!(p.q));
                    }
                }
                if let Some(g) = gauge {
                    m.insert("gauge".into(), json!(g));
                }
            }
        }
        m.insert("window".into(), json!([self.window.lo(), self.window.hi()]));
        m.insert("samples".into(), json!(self.samples));
        m.insert("seed_tol".into(), json!(self.seed_tol));
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_values() {
        let file: PipelineConfig =
            serde_json::from_str(r#"{"example": "osc-7.1", "params": {"l": -1.45, "b": 1.0}, "samples": 10}"#).unwrap();
        let mut flags = PipelineConfig::default();
        flags.set_param("l", -1.05);
        let merged = file.overlay(flags);
        assert_eq!(merged.params["l"], -1.05);
        assert_eq!(merged.params["b"], 1.0);
        assert_eq!(merged.samples, Some(10));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<PipelineConfig>(r#"{"famly": "oscillator"}"#).is_err());
        let mut c = PipelineConfig {
            family: Some("oscillator".into()),
            ..Default::default()
        };
        c.set_param("z", 1.0);
        assert!(c.resolve().is_err());
    }

    #[test]
    fn validation_names_the_invariant() {
        let mut c = PipelineConfig {
            family: Some("oscillator".into()),
            ..Default::default()
        };
        c.set_param("b", -1.0);
        let e = c.resolve().unwrap_err().to_string();
        assert!(e.contains("b > 0"), "{e}");
    }

    #[test]
    fn gauge_accepts_numbers_and_names() {
        let c: PipelineConfig = serde_json::from_str(r#"{"gauge": 0.5}"#).unwrap();
        assert_eq!(c.gauge, Some(GaugeSpec::Constant(0.5)));
        let c: PipelineConfig = serde_json::from_str(r#"{"gauge": "example"}"#).unwrap();
        assert_eq!(c.gauge, Some(GaugeSpec::Named("example".into())));
    }
}
