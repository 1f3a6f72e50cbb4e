use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::{bohr_coeff, deriv_bound_coeff, increment_coeff, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::extremal::{CrescentMapParams, DerivSweep};
use crate::geometry::Domain;

use super::corpus::FunctionSpec;
use super::suite::{Inequality, SuiteGrid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Check,
    Sweep,
    Coeffs,
    Corpus,
}

/// A builtin name, or a parametrized function with an optional domain override.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubjectSpec {
    Name(String),
    Full {
        function: FunctionSpec,
        #[serde(default)]
        domain: Option<Domain>,
    },
}

impl SubjectSpec {
    pub fn resolve(&self) -> Result<(FunctionSpec, Option<Domain>)> {
        match self {
            SubjectSpec::Name(name) => Ok((FunctionSpec::from_name(name)?, None)),
            SubjectSpec::Full { function, domain } => Ok((function.clone(), domain.clone())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CheckConfig {
    /// Empty means the whole builtin corpus.
    pub subjects: Vec<SubjectSpec>,
    pub inequalities: Vec<Inequality>,
    pub grid: SuiteGrid,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            subjects: Vec::new(),
            inequalities: Inequality::ALL.to_vec(),
            grid: SuiteGrid::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BohrSweepConfig {
    pub m: u32,
    pub q: f64,
    /// Values of `r/|p|`, one table row each.
    pub r_fractions: Vec<f64>,
    pub a: f64,
    pub p: Complex64,
    pub order: usize,
}

impl Default for BohrSweepConfig {
    fn default() -> Self {
        Self {
            m: 1,
            q: 1.0,
            r_fractions: vec![0.1, 1.0 / 3.0, 0.5, 0.9],
            a: 1.0,
            p: Complex64::new(0.0, -1.0),
            order: crate::series::DEFAULT_ORDER,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IncrementSweepConfig {
    pub n: u32,
    pub radius: f64,
    pub r: f64,
    pub schedule: Vec<f64>,
}

impl Default for IncrementSweepConfig {
    fn default() -> Self {
        Self {
            n: 1,
            radius: 1.0,
            r: 0.5,
            schedule: vec![1.1, 1.01, 1.001],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum SweepConfig {
    Deriv(DerivSweep),
    Bohr(BohrSweepConfig),
    Increment(IncrementSweepConfig),
}

impl SweepConfig {
    pub fn family(&self) -> &'static str {
        match self {
            SweepConfig::Deriv(_) => "deriv",
            SweepConfig::Bohr(_) => "bohr",
            SweepConfig::Increment(_) => "increment",
        }
    }
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig::Deriv(DerivSweep::default())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CoeffsConfig {
    pub family: String,
    pub a: f64,
    pub p: Complex64,
    pub order: usize,
}

impl Default for CoeffsConfig {
    fn default() -> Self {
        Self {
            family: "crescent".into(),
            a: 1.0,
            p: Complex64::new(0.0, -1.0),
            order: 8,
        }
    }
}

/// A single JSON experiment document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: Kind,
    #[serde(default)]
    pub check: CheckConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub coeffs: CoeffsConfig,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub jobs: Option<usize>,
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

fn config_err(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

impl ExperimentConfig {
    pub fn new(kind: Kind) -> Self {
        Self {
            kind,
            check: CheckConfig::default(),
            sweep: SweepConfig::default(),
            coeffs: CoeffsConfig::default(),
            tolerance: DEFAULT_TOLERANCE,
            out: None,
            jobs: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Checks names and the preconditions of the selected operations.
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.jobs == Some(0) {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        match self.kind {
            Kind::Check => {
                if self.check.inequalities.is_empty() {
                    return Err(Error::Config("no inequalities selected".into()));
                }
                for s in &self.check.subjects {
                    let (_, domain) = s.resolve()?;
                    if let Some(d) = domain {
                        d.validate().map_err(config_err)?;
                    }
                }
                let g = &self.check.grid;
                if g.r_fractions.iter().any(|f| !(*f >= 0.0 && *f < 1.0)) {
                    return Err(Error::Config("r fractions must lie in [0, 1)".into()));
                }
                if g.ra_fractions.iter().any(|f| !(*f >= 0.0 && *f <= 1.0)) {
                    return Err(Error::Config("r_a fractions must lie in [0, 1]".into()));
                }
                if g.a_fractions.iter().any(|f| !(*f >= 0.0 && *f < 1.0)) {
                    return Err(Error::Config("|a| fractions must lie in [0, 1)".into()));
                }
                if g.ns.contains(&0) || g.ms.contains(&0) {
                    return Err(Error::Config("derivative orders and Bohr indices start at 1".into()));
                }
                if g.qs.iter().any(|q| !(*q > 0.0 && q.is_finite())) {
                    return Err(Error::Config("q must be positive".into()));
                }
            }
            Kind::Sweep => match &self.sweep {
                SweepConfig::Deriv(s) => {
                    deriv_bound_coeff(s.n, s.radius, s.r, s.r_a).map_err(config_err)?;
                    check_schedule(&s.schedule)?;
                }
                SweepConfig::Bohr(s) => {
                    CrescentMapParams::new(s.a, s.p).map_err(config_err)?;
                    if s.r_fractions.is_empty() {
                        return Err(Error::Config("Bohr sweep needs at least one r fraction".into()));
                    }
                    for f in &s.r_fractions {
                        if !(*f > 0.0 && *f < 1.0) {
                            return Err(Error::Config(format!("r fraction {f} must lie in (0, 1)")));
                        }
                        bohr_coeff(s.m, s.q, 1.0, *f).map_err(config_err)?;
                    }
                    if s.order < 1 {
                        return Err(Error::Config("order must be at least 1".into()));
                    }
                }
                SweepConfig::Increment(s) => {
                    increment_coeff(s.n, s.radius, s.r).map_err(config_err)?;
                    check_schedule(&s.schedule)?;
                }
            },
            Kind::Coeffs => {
                if self.coeffs.family != "crescent" {
                    return Err(Error::Config(format!(
                        "unknown coefficient family `{}`; expected crescent",
                        self.coeffs.family
                    )));
                }
                CrescentMapParams::new(self.coeffs.a, self.coeffs.p).map_err(config_err)?;
                if self.coeffs.order < 1 {
                    return Err(Error::Config("order must be at least 1".into()));
                }
            }
            Kind::Corpus => {}
        }
        Ok(())
    }
}

fn check_schedule(schedule: &[f64]) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::Config("schedule is empty".into()));
    }
    if let Some(bad) = schedule.iter().find(|f| !(**f > 1.0 && f.is_finite())) {
        return Err(Error::Config(format!("schedule values ρ/R must exceed 1, got {bad}")));
    }
    Ok(())
}
