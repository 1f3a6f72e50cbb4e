use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    bohr_coeff, centered_deriv_bound_coeff, check_bound, deriv_bound_coeff, increment_coeff,
    recentered_bohr_coeff, BoundReport,
};
use crate::error::{Error, Result};
use crate::geometry::dist_to_hull_boundary;
use crate::series::{recenter, tail_q_sum, Differentiator, PowerSeries, DEFAULT_ORDER};

use super::corpus::CorpusEntry;

/// The five geometric inequalities of the bound suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Inequality {
    /// `|f^{(n)}(z)| ≤ 2n!R(R-r_a)/((R-r)^{n+1}(R+r_a)) · dist(f(a), ∂G̃)`.
    Deriv,
    /// `|f^{(n)}(z)| ≤ 2n!R/(R-r)^{n+1} · dist(f(0), ∂G̃)`.
    DerivCentered,
    /// `(Σ_{n≥m} |c_n|^q r^{nq})^{1/q} ≤ bohr_coeff · dist(f(0), ∂G̃)`.
    Bohr,
    /// `Σ_{n≥1} |c_n(a)| r^n ≤ 2Rr/((2R-d_a)(d_a-r)) · dist(f(a), ∂G̃)`.
    BohrRecentered,
    /// `|f^{(n)}(z) - f^{(n)}(0)| ≤ increment_coeff · dist(f(0), ∂G̃)`.
    Increment,
}

impl Inequality {
    pub const ALL: [Inequality; 5] = [
        Inequality::Deriv,
        Inequality::DerivCentered,
        Inequality::Bohr,
        Inequality::BohrRecentered,
        Inequality::Increment,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Inequality::Deriv => "deriv",
            Inequality::DerivCentered => "deriv-centered",
            Inequality::Bohr => "bohr",
            Inequality::BohrRecentered => "bohr-recentered",
            Inequality::Increment => "increment",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        Inequality::ALL
            .into_iter()
            .find(|i| i.id() == id)
            .ok_or_else(|| Error::Config(format!("unknown inequality `{id}`")))
    }
}

/// Parameter grid of the bound suite; radii are fractions of `R`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteGrid {
    pub thetas: Vec<f64>,
    pub ns: Vec<u32>,
    pub r_fractions: Vec<f64>,
    /// `r_a` as fractions of `r`.
    pub ra_fractions: Vec<f64>,
    pub ms: Vec<u32>,
    pub qs: Vec<f64>,
    /// `|a|` as fractions of `R`.
    pub a_fractions: Vec<f64>,
    pub increment_ns: Vec<u32>,
}

impl Default for SuiteGrid {
    fn default() -> Self {
        Self {
            thetas: vec![0.0, 0.5 * PI, PI, 1.5 * PI],
            ns: vec![1, 2, 3],
            r_fractions: vec![0.1, 0.5, 0.9],
            ra_fractions: vec![0.0, 0.5, 1.0],
            ms: vec![1, 2],
            qs: vec![0.5, 1.0, 2.0],
            a_fractions: vec![0.0, 0.25, 0.5],
            increment_ns: vec![0, 1, 2, 3],
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Task {
    Deriv { n: u32, r: f64, r_a: f64, theta: f64 },
    DerivCentered { n: u32, r: f64, theta: f64 },
    Bohr { m: u32, q: f64, r: f64 },
    Recentered { a_abs: f64, theta: f64 },
    Increment { n: u32, r: f64, theta: f64 },
}

impl Task {
    fn inequality(&self) -> Inequality {
        match self {
            Task::Deriv { .. } => Inequality::Deriv,
            Task::DerivCentered { .. } => Inequality::DerivCentered,
            Task::Bohr { .. } => Inequality::Bohr,
            Task::Recentered { .. } => Inequality::BohrRecentered,
            Task::Increment { .. } => Inequality::Increment,
        }
    }
}

fn tasks(grid: &SuiteGrid, big_r: f64, selection: &[Inequality]) -> Vec<Task> {
    let mut out = Vec::new();
    let radii: Vec<f64> = grid.r_fractions.iter().map(|f| f * big_r).collect();
    for ineq in Inequality::ALL.into_iter().filter(|i| selection.contains(i)) {
        match ineq {
            Inequality::Deriv => {
                for &n in &grid.ns {
                    for &r in &radii {
                        for &fa in &grid.ra_fractions {
                            for &theta in &grid.thetas {
                                out.push(Task::Deriv { n, r, r_a: fa * r, theta });
                            }
                        }
                    }
                }
            }
            Inequality::DerivCentered => {
                for &n in &grid.ns {
                    for &r in &radii {
                        for &theta in &grid.thetas {
                            out.push(Task::DerivCentered { n, r, theta });
                        }
                    }
                }
            }
            Inequality::Bohr => {
                for &m in &grid.ms {
                    for &q in &grid.qs {
                        for &r in &radii {
                            out.push(Task::Bohr { m, q, r });
                        }
                    }
                }
            }
            Inequality::BohrRecentered => {
                for &fa in &grid.a_fractions {
                    for &theta in &grid.thetas {
                        out.push(Task::Recentered { a_abs: fa * big_r, theta });
                        if fa == 0.0 {
                            break;
                        }
                    }
                }
            }
            Inequality::Increment => {
                for &n in &grid.increment_ns {
                    for &r in &radii {
                        for &theta in &grid.thetas {
                            out.push(Task::Increment { n, r, theta });
                        }
                    }
                }
            }
        }
    }
    out
}

/// A report standing in for a check whose numerics failed.
pub fn numerical_failure(id: &str, subject: &str, err: &Error) -> BoundReport {
    BoundReport {
        inequality_id: id.to_string(),
        subject: subject.to_string(),
        lhs: f64::NAN,
        rhs: f64::NAN,
        ratio: f64::NAN,
        margin: f64::NAN,
        passed: false,
        parameters: Default::default(),
        warnings: vec![format!("numerical failure: {err}")],
    }
}

struct Context<'a> {
    entry: &'a CorpusEntry,
    diff: Differentiator,
    series: PowerSeries,
    r_fractions: Vec<f64>,
    tolerance: f64,
}

impl Context<'_> {
    fn dist(&self, w: Complex64) -> Result<f64> {
        let d = dist_to_hull_boundary(w, &self.entry.domain)?;
        if d.outside {
            return Err(Error::HypothesisViolation(format!("f(a) = {w} lies outside the hull")));
        }
        Ok(d.distance)
    }

    fn run(&self, task: Task) -> Vec<BoundReport> {
        let id = task.inequality().id();
        let subject = &self.entry.name;
        match self.try_run(task) {
            Ok(reports) => reports.into_iter().map(|r| r.with_subject(subject.clone())).collect(),
            Err(e) => vec![decorate(numerical_failure(id, subject, &e), task, self.entry.function.radius())],
        }
    }

    fn try_run(&self, task: Task) -> Result<Vec<BoundReport>> {
        let big_r = self.entry.function.radius();
        let f = &self.entry.function;
        let origin = Complex64::new(0.0, 0.0);
        let report = |r: Result<BoundReport>| r.map(|b| decorate(b, task, big_r));
        Ok(match task {
            Task::Deriv { n, r, r_a, theta } => {
                let z = Complex64::from_polar(r, theta);
                let a = Complex64::from_polar(r_a, theta);
                let d = self.diff.derivative(n as usize, z)?;
                let scale = self.dist(f.eval(a)?)?;
                let coeff = deriv_bound_coeff(n, big_r, r, r_a)?;
                vec![report(check_bound(Inequality::Deriv.id(), d.value.norm(), coeff, scale, self.tolerance))?
                    .with_warnings(d.warnings)]
            }
            Task::DerivCentered { n, r, theta } => {
                let z = Complex64::from_polar(r, theta);
                let d = self.diff.derivative(n as usize, z)?;
                let scale = self.dist(f.eval(origin)?)?;
                let coeff = centered_deriv_bound_coeff(n, big_r, r)?;
                vec![report(check_bound(Inequality::DerivCentered.id(), d.value.norm(), coeff, scale, self.tolerance))?
                    .with_warnings(d.warnings)]
            }
            Task::Bohr { m, q, r } => {
                let sum = tail_q_sum(&self.series, r, m as usize, q)?;
                let scale = self.dist(self.series.coeffs()[0])?;
                let coeff = bohr_coeff(m, q, big_r, r)?;
                vec![report(check_bound(Inequality::Bohr.id(), sum.conservative(), coeff, scale, self.tolerance))?
                    .with_warnings(sum.warning)]
            }
            Task::Recentered { a_abs, theta } => {
                let a = Complex64::from_polar(a_abs, theta);
                let d_a = big_r - a_abs;
                let series = recenter(f, a, DEFAULT_ORDER)?;
                let scale = self.dist(f.eval(a)?)?;
                let mut out = Vec::new();
                for r in self.r_fractions.iter().map(|f| f * big_r).filter(|r| *r < d_a) {
                    let sum = tail_q_sum(&series, r, 1, 1.0)?;
                    let coeff = recentered_bohr_coeff(big_r, d_a, r)?;
                    let b = check_bound(Inequality::BohrRecentered.id(), sum.conservative(), coeff, scale, self.tolerance)?
                        .with_param("R", big_r)
                        .with_param("a_abs", a_abs)
                        .with_param("theta", theta)
                        .with_param("d_a", d_a)
                        .with_param("r", r)
                        .with_warnings(sum.warning);
                    out.push(b);
                }
                out
            }
            Task::Increment { n, r, theta } => {
                let z = Complex64::from_polar(r, theta);
                let lhs = self.diff.increment(n as usize, z)?;
                let scale = self.dist(f.eval(origin)?)?;
                let coeff = increment_coeff(n, big_r, r)?;
                vec![report(check_bound(Inequality::Increment.id(), lhs, coeff, scale, self.tolerance))?]
            }
        })
    }
}

fn decorate(b: BoundReport, task: Task, big_r: f64) -> BoundReport {
    let b = b.with_param("R", big_r);
    match task {
        Task::Deriv { n, r, r_a, theta } => b
            .with_param("n", n as f64)
            .with_param("r", r)
            .with_param("r_a", r_a)
            .with_param("theta", theta),
        Task::DerivCentered { n, r, theta } => b.with_param("n", n as f64).with_param("r", r).with_param("theta", theta),
        Task::Bohr { m, q, r } => b.with_param("m", m as f64).with_param("q", q).with_param("r", r),
        Task::Recentered { a_abs, theta } => b
            .with_param("a_abs", a_abs)
            .with_param("theta", theta)
            .with_param("d_a", big_r - a_abs),
        Task::Increment { n, r, theta } => b.with_param("n", n as f64).with_param("r", r).with_param("theta", theta),
    }
}

/// Runs the selected inequalities over the grid for one validated entry.
pub fn run_suite(
    entry: &CorpusEntry,
    grid: &SuiteGrid,
    selection: &[Inequality],
    tolerance: f64,
) -> Result<Vec<BoundReport>> {
    if !entry.containment_validated {
        return Err(Error::HypothesisViolation(format!(
            "entry `{}` has not been containment-validated",
            entry.name
        )));
    }
    let diff = Differentiator::new(entry.function.clone(), DEFAULT_ORDER)?;
    let series = diff.series().clone();
    let ctx = Context {
        entry,
        diff,
        series,
        r_fractions: grid.r_fractions.clone(),
        tolerance,
    };
    let tasks = tasks(grid, entry.function.radius(), selection);
    let mut reports: Vec<BoundReport> = tasks.par_iter().flat_map_iter(|t| ctx.run(*t)).collect();
    sort_reports(&mut reports);
    Ok(reports)
}

/// Canonical order: subject, inequality, then parameters.
pub fn sort_reports(reports: &mut [BoundReport]) {
    let order = |id: &str| Inequality::from_id(id).map(|i| i as usize).unwrap_or(usize::MAX);
    reports.sort_by(|x, y| {
        x.subject
            .cmp(&y.subject)
            .then(order(&x.inequality_id).cmp(&order(&y.inequality_id)))
            .then_with(|| {
                let kx: Vec<(&String, &f64)> = x.parameters.iter().collect();
                let ky: Vec<(&String, &f64)> = y.parameters.iter().collect();
                for ((ka, va), (kb, vb)) in kx.iter().zip(&ky) {
                    let c = ka.cmp(kb).then(va.total_cmp(vb));
                    if c.is_ne() {
                        return c;
                    }
                }
                kx.len().cmp(&ky.len())
            })
    });
}
