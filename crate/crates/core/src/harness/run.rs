use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::bounds::BoundReport;
use crate::error::{Error, Result};
use crate::extremal::{
    coefficient_discrepancy, crescent_coefficients, sharpness_sweep_bohr_with_order, sharpness_sweep_deriv,
    sharpness_sweep_increment, CrescentMapParams, SweepRow,
};

use super::config::{ExperimentConfig, Kind, SweepConfig};
use super::corpus::{builtin_corpus_report, CorpusEntry, Exclusion, FunctionSpec};
use super::report::{corpus_csv, discrepancy_csv, reports_csv, sweep_csv};
use super::suite::{run_suite, sort_reports};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Pass,
    CheckFailure,
    NumericalFailure,
}

impl RunStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            RunStatus::Pass => 0,
            RunStatus::CheckFailure => 1,
            RunStatus::NumericalFailure => 3,
        }
    }
}

/// Exit code for an error that aborted a run.
pub fn error_exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::InvalidParameter(_) | Error::InvalidDomain(_) | Error::Json(_) | Error::Io(_) => 2,
        Error::HypothesisViolation(_) => 1,
        _ => 3,
    }
}

/// A named report file.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub status: RunStatus,
    pub artifacts: Vec<Artifact>,
    pub summary: String,
}

impl RunOutcome {
    pub fn artifact(&self, name: &str) -> Option<&str> {
        self.artifacts.iter().find(|a| a.name == name).map(|a| a.contents.as_str())
    }

    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        self.artifacts
            .iter()
            .map(|a| {
                let path = dir.join(&a.name);
                std::fs::write(&path, &a.contents)?;
                Ok(path)
            })
            .collect()
    }
}

fn artifact(name: &str, contents: String) -> Artifact {
    Artifact {
        name: name.to_string(),
        contents,
    }
}

fn pretty(value: &impl Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// Validates the config, runs it on a pool of `jobs` threads and writes
/// the artifacts to `out` when set.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunOutcome> {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = config.jobs {
        builder = builder.num_threads(jobs);
    }
    let pool = builder.build().map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let outcome = pool.install(|| match config.kind {
        Kind::Check => run_check(config),
        Kind::Sweep => run_sweep(config),
        Kind::Coeffs => run_coeffs(config),
        Kind::Corpus => run_corpus(),
    })?;
    if let Some(dir) = &config.out {
        outcome.write_to(dir)?;
    }
    Ok(outcome)
}

fn subject_name(spec: &FunctionSpec, entry_label: &str) -> String {
    match FunctionSpec::from_name(spec.name()) {
        Ok(default) if default == *spec => spec.name().to_string(),
        _ => entry_label.to_string(),
    }
}

fn check_subjects(config: &ExperimentConfig) -> Result<(Vec<CorpusEntry>, Vec<Exclusion>)> {
    if config.check.subjects.is_empty() {
        return Ok(builtin_corpus_report());
    }
    let mut entries = Vec::new();
    let mut excluded = Vec::new();
    for subject in &config.check.subjects {
        let (spec, domain) = subject.resolve()?;
        let (function, default_domain) = spec.build().map_err(|e| Error::Config(e.to_string()))?;
        let name = subject_name(&spec, function.label());
        let custom_domain = domain.is_some();
        match CorpusEntry::new(name.clone(), function, domain.unwrap_or(default_domain)) {
            Ok(mut entry) => {
                if custom_domain {
                    entry.name = format!("{name} on {}", serde_json::to_string(&entry.domain)?);
                }
                entries.push(entry)
            }
            Err(e) => excluded.push(Exclusion {
                name,
                reason: e.to_string(),
            }),
        }
    }
    Ok((entries, excluded))
}

fn status_of_reports(reports: &[BoundReport], excluded: usize) -> RunStatus {
    if excluded > 0 || reports.iter().any(|r| !r.passed && r.lhs.is_finite()) {
        RunStatus::CheckFailure
    } else if reports.iter().any(|r| !r.passed) {
        RunStatus::NumericalFailure
    } else {
        RunStatus::Pass
    }
}

fn run_check(config: &ExperimentConfig) -> Result<RunOutcome> {
    let (entries, excluded) = check_subjects(config)?;
    let per_entry: Vec<Vec<BoundReport>> = entries
        .par_iter()
        .map(|e| run_suite(e, &config.check.grid, &config.check.inequalities, config.tolerance))
        .collect::<Result<_>>()?;
    let mut reports: Vec<BoundReport> = per_entry.into_iter().flatten().collect();
    sort_reports(&mut reports);
    let status = status_of_reports(&reports, excluded.len());
    let failed = reports.iter().filter(|r| !r.passed).count();
    let worst = reports
        .iter()
        .map(|r| r.ratio)
        .filter(|x| x.is_finite())
        .fold(0.0, f64::max);
    let meta = json!({
        "kind": "check",
        "tolerance": config.tolerance,
        "grid": config.check.grid,
        "inequalities": config.check.inequalities,
        "entries": entries.iter().map(|e| json!({
            "name": e.name,
            "label": e.function.label(),
            "R": e.function.radius(),
            "domain": e.domain,
            "containment_validated": e.containment_validated,
        })).collect::<Vec<_>>(),
        "excluded": excluded,
        "checks": reports.len(),
        "failed": failed,
        "max_ratio": worst,
        "status": status,
    });
    let summary = format!(
        "{} checks over {} entries, {} failed, {} excluded, max ratio {worst}",
        reports.len(),
        entries.len(),
        failed,
        excluded.len()
    );
    Ok(RunOutcome {
        status,
        artifacts: vec![artifact("report.csv", reports_csv(&reports)?), artifact("metadata.json", pretty(&meta)?)],
        summary,
    })
}

fn status_of_rows(rows: &[SweepRow], tolerance: f64) -> RunStatus {
    if rows.iter().any(|r| !r.flagged && r.ratio > 1.0 + tolerance) {
        RunStatus::CheckFailure
    } else if rows.iter().any(|r| r.flagged || !r.ratio.is_finite()) {
        RunStatus::NumericalFailure
    } else {
        RunStatus::Pass
    }
}

fn run_sweep(config: &ExperimentConfig) -> Result<RunOutcome> {
    let sweep = &config.sweep;
    let mut extra = serde_json::Map::new();
    let rows = match sweep {
        SweepConfig::Deriv(s) => sharpness_sweep_deriv(s)?,
        SweepConfig::Increment(s) => sharpness_sweep_increment(s.n, s.radius, s.r, &s.schedule)?,
        SweepConfig::Bohr(s) => {
            let params = CrescentMapParams::new(s.a, s.p)?;
            let results = s
                .r_fractions
                .par_iter()
                .map(|f| sharpness_sweep_bohr_with_order(s.m, s.q, *f, params, s.order))
                .collect::<Result<Vec<_>>>()?;
            extra.insert(
                "lower_bounds".into(),
                json!(results
                    .iter()
                    .map(|b| json!({"r": b.row.r, "lower_bound": b.lower_bound, "coefficient": b.coefficient, "gap_ratio": b.gap_ratio}))
                    .collect::<Vec<_>>()),
            );
            results.into_iter().map(|b| b.row).collect()
        }
    };
    let status = status_of_rows(&rows, config.tolerance);
    let family = sweep.family();
    let mut meta = json!({
        "kind": "sweep",
        "family": family,
        "descriptor": sweep,
        "rows": rows.len(),
        "status": status,
    });
    meta.as_object_mut().expect("object").extend(extra);
    let ratios: Vec<String> = rows.iter().map(|r| format!("{}", r.ratio)).collect();
    Ok(RunOutcome {
        status,
        summary: format!("{family} sweep, {} rows, ratios [{}]", rows.len(), ratios.join(", ")),
        artifacts: vec![
            artifact(&format!("sweep_{family}.csv"), sweep_csv(&rows)?),
            artifact(&format!("sweep_{family}.json"), pretty(&meta)?),
        ],
    })
}

fn run_coeffs(config: &ExperimentConfig) -> Result<RunOutcome> {
    let c = &config.coeffs;
    let params = CrescentMapParams::new(c.a, c.p)?;
    let series = crescent_coefficients(params, c.order)?;
    let discrepancy = coefficient_discrepancy(params, c.order)?;
    let c0 = series.coeffs()[0];
    Ok(RunOutcome {
        status: RunStatus::Pass,
        summary: format!("crescent series to order {}, c0 = {}", c.order, crate::complex::format_complex(c0)),
        artifacts: vec![
            artifact("coeffs_crescent.json", pretty(&series)?),
            artifact("coefficient_discrepancy.csv", discrepancy_csv(&discrepancy)?),
        ],
    })
}

fn run_corpus() -> Result<RunOutcome> {
    let (entries, excluded) = builtin_corpus_report();
    let status = if excluded.is_empty() {
        RunStatus::Pass
    } else {
        RunStatus::CheckFailure
    };
    Ok(RunOutcome {
        status,
        summary: format!("{} entries validated, {} excluded", entries.len(), excluded.len()),
        artifacts: vec![artifact("corpus.csv", corpus_csv(&entries, &excluded)?)],
    })
}
