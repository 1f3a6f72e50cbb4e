use crate::bounds::BoundReport;
use crate::error::Result;
use crate::extremal::{CoefficientDiscrepancy, SweepRow};

use super::corpus::{CorpusEntry, Exclusion};

fn fmt(x: f64) -> String {
    format!("{x}")
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_default()
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

const REPORT_PARAMS: [&str; 9] = ["n", "m", "q", "R", "r", "r_a", "a_abs", "theta", "d_a"];

pub fn reports_csv(reports: &[BoundReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["inequality_id", "subject"];
    header.extend(REPORT_PARAMS);
    header.extend(["lhs", "rhs", "ratio", "margin", "passed", "warnings"]);
    w.write_record(&header)?;
    for b in reports {
        let mut row = vec![b.inequality_id.clone(), b.subject.clone()];
        row.extend(REPORT_PARAMS.iter().map(|k| opt(b.param(k))));
        row.extend([
            fmt(b.lhs),
            fmt(b.rhs),
            fmt(b.ratio),
            fmt(b.margin),
            b.passed.to_string(),
            b.warnings.join("; "),
        ]);
        w.write_record(&row)?;
    }
    finish(w)
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "family", "n", "m", "q", "R", "r", "r_a", "rho_or_p", "lhs", "scale", "rhs_coeff", "ratio", "flagged",
        "warnings",
    ])?;
    for s in rows {
        let bohr = s.q.is_some();
        let order = s.order.to_string();
        w.write_record([
            s.family.clone(),
            if bohr { String::new() } else { order.clone() },
            if bohr { order } else { String::new() },
            opt(s.q),
            fmt(s.radius),
            fmt(s.r),
            opt(s.r_a),
            s.rho_or_p.clone(),
            fmt(s.lhs),
            fmt(s.scale),
            fmt(s.rhs_coeff),
            fmt(s.ratio),
            s.flagged.to_string(),
            s.warnings.join("; "),
        ])?;
    }
    finish(w)
}

pub fn discrepancy_csv(rows: &[CoefficientDiscrepancy]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "recurrence_abs", "claimed_abs", "ratio"])?;
    for d in rows {
        w.write_record([d.n.to_string(), fmt(d.recurrence_abs), fmt(d.claimed_abs), fmt(d.ratio)])?;
    }
    finish(w)
}

pub fn corpus_csv(entries: &[CorpusEntry], excluded: &[Exclusion]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["name", "label", "R", "domain", "containment_validated", "reason"])?;
    for e in entries {
        let domain = serde_json::to_string(&e.domain)?;
        w.write_record([
            e.name.clone(),
            e.function.label().to_string(),
            fmt(e.function.radius()),
            domain,
            e.containment_validated.to_string(),
            String::new(),
        ])?;
    }
    for x in excluded {
        w.write_record([x.name.clone(), String::new(), String::new(), String::new(), "false".into(), x.reason.clone()])?;
    }
    finish(w)
}
