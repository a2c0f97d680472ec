//! Wire formats: NDJSON curves, CSV driving functions, CSV report rows.
//! All writers are deterministic (field order fixed, shortest-roundtrip
//! float formatting) so reruns produce byte-identical artifacts.

use crate::conditions::ReportRow;
use crate::error::{Error, Result};
use crate::geometry::{Curve, CurveMeta, Point};
use crate::loewner::DrivingFunction;
use serde::{Deserialize, Serialize};

/// One curve as an NDJSON record.
#[derive(Debug, Serialize, Deserialize)]
struct CurveRecord {
    model: String,
    seed: u64,
    spacing: f64,
    points: Vec<[f64; 2]>,
}

pub fn curve_to_ndjson(c: &Curve) -> String {
    let rec = CurveRecord {
        model: c.meta.model.clone(),
        seed: c.meta.seed,
        spacing: c.meta.spacing,
        points: c.points().iter().map(|p| [p.x, p.y]).collect(),
    };
    serde_json::to_string(&rec).expect("curve serialization")
}

pub fn curve_from_ndjson(line: &str) -> Result<Curve> {
    let rec: CurveRecord = serde_json::from_str(line)?;
    Curve::new(
        rec.points.iter().map(|&[x, y]| Point::new(x, y)).collect(),
        CurveMeta { model: rec.model, seed: rec.seed, spacing: rec.spacing, simple: false },
    )
}

pub fn curves_to_ndjson(curves: &[Curve]) -> String {
    let mut out = String::new();
    for c in curves {
        out.push_str(&curve_to_ndjson(c));
        out.push('\n');
    }
    out
}

pub fn curves_from_ndjson(text: &str) -> Result<Vec<Curve>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(curve_from_ndjson)
        .collect()
}

/// CSV with header "t,w".
pub fn driving_to_csv(w: &DrivingFunction) -> String {
    let mut out = String::from("t,w\n");
    for (&t, &v) in w.times().iter().zip(w.values()) {
        out.push_str(&format!("{t},{v}\n"));
    }
    out
}

pub fn driving_from_csv(text: &str) -> Result<DrivingFunction> {
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if i == 0 {
            if line != "t,w" {
                return Err(Error::SchemaMismatch(format!(
                    "driving CSV header must be 't,w', got '{line}'"
                )));
            }
            continue;
        }
        let (t, v) = line
            .split_once(',')
            .ok_or_else(|| Error::invalid(format!("bad driving row '{line}'")))?;
        times.push(t.trim().parse::<f64>().map_err(|e| Error::invalid(e.to_string()))?);
        values.push(v.trim().parse::<f64>().map_err(|e| Error::invalid(e.to_string()))?);
    }
    DrivingFunction::new(times, values)
}

pub const REPORT_HEADER: &str = "model,shape,z0x,z0y,r,R,tau_rule,trials,hits,ci_lo,ci_hi";

pub fn report_to_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.model, r.shape, r.z0x, r.z0y, r.r, r.big_r, r.tau_rule, r.trials, r.hits, r.ci_lo,
            r.ci_hi
        ));
    }
    out
}

pub fn report_from_csv(text: &str) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if i == 0 {
            if line != REPORT_HEADER {
                return Err(Error::SchemaMismatch(format!("unexpected report header '{line}'")));
            }
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 11 {
            return Err(Error::SchemaMismatch(format!("report row has {} fields", f.len())));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| Error::invalid(e.to_string()));
        let int = |s: &str| s.parse::<u64>().map_err(|e| Error::invalid(e.to_string()));
        rows.push(ReportRow {
            model: f[0].into(),
            shape: f[1].into(),
            z0x: num(f[2])?,
            z0y: num(f[3])?,
            r: num(f[4])?,
            big_r: num(f[5])?,
            tau_rule: f[6].into(),
            trials: int(f[7])?,
            hits: int(f[8])?,
            ci_lo: num(f[9])?,
            ci_hi: num(f[10])?,
        });
    }
    Ok(rows)
}

/// Count-additive merge of report shards; confidence intervals are
/// recomputed from the merged counts. Rows are keyed by (model, shape,
/// center, radii, rule).
pub fn merge_reports(shards: &[Vec<ReportRow>]) -> Result<Vec<ReportRow>> {
    use std::collections::BTreeMap;
    let mut merged: BTreeMap<String, ReportRow> = BTreeMap::new();
    for shard in shards {
        for row in shard {
            let key = format!(
                "{}|{}|{}|{}|{}|{}|{}",
                row.model, row.shape, row.z0x, row.z0y, row.r, row.big_r, row.tau_rule
            );
            match merged.get_mut(&key) {
                Some(acc) => {
                    acc.trials += row.trials;
                    acc.hits += row.hits;
                }
                None => {
                    merged.insert(key, row.clone());
                }
            }
        }
    }
    let mut rows: Vec<ReportRow> = merged.into_values().collect();
    for r in &mut rows {
        r.refresh_ci();
    }
    Ok(rows)
}
