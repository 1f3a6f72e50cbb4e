use std::f64::consts::{E, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extremal::{crescent_f, g_xi, CrescentMapParams, GxiParams};
use crate::geometry::{Disc, Domain, HalfPlane, Strip};
use crate::series::AnalyticFunction;

/// Containment is checked with this relative slack.
pub const CONTAINMENT_SLACK: f64 = 1e-12;

/// A builtin function, optionally with family parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum FunctionSpec {
    /// `z` on the unit disc.
    Z,
    /// `z²` on the unit disc.
    Z2,
    /// `1 + z` into the right half-plane.
    OnePlusZ,
    /// `z/(2 - z)` into the strip `|Re w| < 1`.
    Mobius,
    /// The extremal family member into its image disc.
    GXi {
        #[serde(default = "default_xi")]
        xi: Complex64,
        #[serde(default = "unit")]
        radius: f64,
    },
    /// The crescent map into the crescent.
    Crescent {
        #[serde(default = "unit")]
        a: f64,
        #[serde(default = "minus_i")]
        p: Complex64,
    },
    /// `exp` on the unit disc into `|w| < e`.
    Exp,
}

fn default_xi() -> Complex64 {
    Complex64::new(2.0, 0.0)
}

fn unit() -> f64 {
    1.0
}

fn minus_i() -> Complex64 {
    Complex64::new(0.0, -1.0)
}

pub const BUILTIN_NAMES: [&str; 7] = ["z", "z2", "one_plus_z", "mobius", "g_xi", "crescent", "exp"];

fn polynomial(label: &str, coeffs: Vec<Complex64>) -> Result<AnalyticFunction> {
    let degree = coeffs.len() - 1;
    let eval_coeffs = coeffs.clone();
    Ok(AnalyticFunction::new(label, 1.0, move |z| {
        eval_coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    })?
    .with_coefficients(move |n| {
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        for (k, c) in coeffs.iter().enumerate().take(n + 1) {
            out[k] = *c;
        }
        out
    })
    .with_polynomial_degree(degree))
}

impl FunctionSpec {
    pub fn from_name(name: &str) -> Result<Self> {
        Ok(match name {
            "z" => FunctionSpec::Z,
            "z2" => FunctionSpec::Z2,
            "one_plus_z" => FunctionSpec::OnePlusZ,
            "mobius" => FunctionSpec::Mobius,
            "g_xi" => FunctionSpec::GXi {
                xi: default_xi(),
                radius: 1.0,
            },
            "crescent" => FunctionSpec::Crescent { a: 1.0, p: minus_i() },
            "exp" => FunctionSpec::Exp,
            other => {
                return Err(Error::Config(format!(
                    "unknown builtin `{other}`; expected one of {}",
                    BUILTIN_NAMES.join(", ")
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            FunctionSpec::Z => "z",
            FunctionSpec::Z2 => "z2",
            FunctionSpec::OnePlusZ => "one_plus_z",
            FunctionSpec::Mobius => "mobius",
            FunctionSpec::GXi { .. } => "g_xi",
            FunctionSpec::Crescent { .. } => "crescent",
            FunctionSpec::Exp => "exp",
        }
    }

    /// The function with its default image domain.
    pub fn build(&self) -> Result<(AnalyticFunction, Domain)> {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        Ok(match *self {
            FunctionSpec::Z => (polynomial("z", vec![zero, one])?, Domain::Disc(Disc::new(zero, 1.0)?)),
            FunctionSpec::Z2 => (
                polynomial("z^2", vec![zero, zero, one])?,
                Domain::Disc(Disc::new(zero, 1.0)?),
            ),
            FunctionSpec::OnePlusZ => (
                polynomial("1+z", vec![one, one])?,
                Domain::HalfPlane(HalfPlane::new(-one, 0.0)?),
            ),
            FunctionSpec::Mobius => {
                let two = Complex64::new(2.0, 0.0);
                let f = AnalyticFunction::new("z/(2-z)", 1.0, move |z| z / (two - z))?
                    .with_singularities([two])?
                    .with_coefficients(move |n| {
                        (0..=n)
                            .map(|k| if k == 0 { zero } else { Complex64::new(0.5f64.powi(k as i32), 0.0) })
                            .collect()
                    });
                (f, Domain::Strip(Strip::new(one, -1.0, 1.0)?))
            }
            FunctionSpec::GXi { xi, radius } => {
                let params = GxiParams::new(xi, radius)?;
                (g_xi(params)?, Domain::Disc(Disc::new(zero, params.image_radius())?))
            }
            FunctionSpec::Crescent { a, p } => {
                let params = CrescentMapParams::new(a, p)?;
                (crescent_f(params)?, Domain::Crescent(params.domain()))
            }
            FunctionSpec::Exp => {
                let f = AnalyticFunction::new("exp", 1.0, |z: Complex64| z.exp())?.with_coefficients(|n| {
                    let mut out = Vec::with_capacity(n + 1);
                    let mut term = 1.0;
                    for k in 0..=n {
                        if k > 0 {
                            term /= k as f64;
                        }
                        out.push(Complex64::new(term, 0.0));
                    }
                    out
                });
                (f, Domain::Disc(Disc::new(zero, E)?))
            }
        })
    }
}

/// A (function, domain) pair whose image containment has been sampled.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub function: AnalyticFunction,
    pub domain: Domain,
    pub containment_validated: bool,
}

impl CorpusEntry {
    /// Validates `f(𝒟_R) ⊂ G` by sampling and returns the checked entry.
    pub fn new(name: impl Into<String>, function: AnalyticFunction, domain: Domain) -> Result<Self> {
        domain.validate()?;
        validate_containment(&function, &domain)?;
        Ok(Self {
            name: name.into(),
            function,
            domain,
            containment_validated: true,
        })
    }

    pub fn from_spec(spec: &FunctionSpec, domain: Option<Domain>) -> Result<Self> {
        let (function, default_domain) = spec.build()?;
        CorpusEntry::new(spec.name(), function, domain.unwrap_or(default_domain))
    }
}

/// Samples interior circles and the exhaustion radii `R(1 - 2^{-k})`.
pub fn containment_grid(radius: f64) -> Vec<Complex64> {
    let mut pts = vec![Complex64::new(0.0, 0.0)];
    let mut ring = |r: f64, n: usize| {
        for j in 0..n {
            pts.push(Complex64::from_polar(r, 2.0 * PI * (j as f64 + 0.5) / n as f64));
        }
    };
    for j in 1..16 {
        ring(radius * j as f64 / 16.0, 256);
    }
    for k in 5..=12 {
        ring(radius * (1.0 - 0.5f64.powi(k)), 2048);
    }
    pts
}

pub fn validate_containment(f: &AnalyticFunction, domain: &Domain) -> Result<()> {
    for z in containment_grid(f.radius()) {
        let w = f.eval(z)?;
        if !domain.contains(w, CONTAINMENT_SLACK) {
            return Err(Error::HypothesisViolation(format!(
                "{}({z}) = {w} lies outside the image domain",
                f.label()
            )));
        }
    }
    Ok(())
}

/// An entry that failed validation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Exclusion {
    pub name: String,
    pub reason: String,
}

/// Validated builtins plus the entries that were excluded.
pub fn builtin_corpus_report() -> (Vec<CorpusEntry>, Vec<Exclusion>) {
    let mut entries = Vec::new();
    let mut excluded = Vec::new();
    for name in BUILTIN_NAMES {
        match FunctionSpec::from_name(name).and_then(|s| CorpusEntry::from_spec(&s, None)) {
            Ok(entry) => entries.push(entry),
            Err(e) => excluded.push(Exclusion {
                name: name.to_string(),
                reason: e.to_string(),
            }),
        }
    }
    (entries, excluded)
}

pub fn builtin_corpus() -> Vec<CorpusEntry> {
    builtin_corpus_report().0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{q_functional, QVariant, SupSchedule};

    #[test]
    fn all_builtins_validate() {
        let (entries, excluded) = builtin_corpus_report();
        assert!(excluded.is_empty(), "{excluded:?}");
        assert!(entries.len() >= 6);
        assert!(entries.iter().all(|e| e.containment_validated && e.domain.hull_is_proper()));
    }

    #[test]
    fn half_plane_entry_positive_real_part() {
        let entry = CorpusEntry::from_spec(&FunctionSpec::OnePlusZ, None).unwrap();
        let q = q_functional(&entry.function, Complex64::new(0.0, 0.0), QVariant::PositiveRe, &SupSchedule::default()).unwrap();
        assert!((q.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn containment_failure_is_reported() {
        let small = Domain::Disc(Disc::new(Complex64::new(0.0, 0.0), 0.5).unwrap());
        let err = CorpusEntry::from_spec(&FunctionSpec::Z, Some(small)).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolation(_)));
    }

    #[test]
    fn spec_json_roundtrip() {
        let spec: FunctionSpec = serde_json::from_str(r#"{"name": "g_xi", "xi": [3.0, 0.0]}"#).unwrap();
        assert_eq!(spec, FunctionSpec::GXi { xi: Complex64::new(3.0, 0.0), radius: 1.0 });
        let spec: FunctionSpec = serde_json::from_str(r#"{"name": "crescent"}"#).unwrap();
        assert_eq!(spec, FunctionSpec::from_name("crescent").unwrap());
        assert!(FunctionSpec::from_name("nope").is_err());
    }
}
