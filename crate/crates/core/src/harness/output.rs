//! Serialized projection results.
//!
//! JSON numbers are written with 17 significant digits (`{:.16e}`) so that
//! they parse back to the same `f64`.

use serde::Serialize;
use serde_json::value::RawValue;

use super::bench::BenchRecord;
use super::io::HarnessError;
use super::regions::{RegionFractions, RegionTally};
use super::regress::RegressReport;
use crate::composite::ProjectionResult;

// a dual can overflow after unscaling an extreme input; JSON has no inf
fn number(v: f64) -> Box<RawValue> {
    let text = if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_string()
    };
    RawValue::from_string(text).expect("formatted floats are valid JSON")
}

#[derive(Serialize)]
struct ProjectionJson {
    x: Vec<Box<RawValue>>,
    lambda1: Box<RawValue>,
    lambda2: Box<RawValue>,
    region: &'static str,
    iterations: usize,
    residual: Box<RawValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<Vec<Box<RawValue>>>,
}

/// `{x, lambda1, lambda2, region, iterations, residual, d?}`; `d` holds the
/// per-group caps and is present for q = inf only.
pub fn projection_json(r: &ProjectionResult) -> Result<String, HarnessError> {
    let doc = ProjectionJson {
        x: r.x.values().iter().copied().map(number).collect(),
        lambda1: number(r.duals.lambda1),
        lambda2: number(r.duals.lambda2),
        region: r.region.label(),
        iterations: r.iterations,
        residual: number(r.residual),
        d: r.caps
            .as_ref()
            .map(|d| d.iter().copied().map(number).collect()),
    };
    serde_json::to_string(&doc).map_err(|e| HarnessError::Output(e.to_string()))
}

/// `index,group,x` rows, one per coordinate.
pub fn projection_csv(r: &ProjectionResult) -> Result<String, HarnessError> {
    let out = |e: csv::Error| HarnessError::Output(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["index", "group", "x"]).map_err(out)?;
    for (i, (g, v)) in r.x.group_index().iter().zip(r.x.values()).enumerate() {
        w.write_record([i.to_string(), g.to_string(), format!("{v:.16e}")])
            .map_err(out)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| HarnessError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| HarnessError::Output(e.to_string()))
}

fn csv_string<T: Serialize>(rows: &[T]) -> Result<String, HarnessError> {
    let out = |e: csv::Error| HarnessError::Output(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(out)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| HarnessError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| HarnessError::Output(e.to_string()))
}

/// One row per method.
pub fn bench_csv(records: &[BenchRecord]) -> Result<String, HarnessError> {
    csv_string(records)
}

pub fn regress_json(r: &RegressReport) -> Result<String, HarnessError> {
    serde_json::to_string(r).map_err(|e| HarnessError::Output(e.to_string()))
}

#[derive(Serialize)]
struct TallyJson<'a> {
    #[serde(flatten)]
    tally: &'a RegionTally,
    fractions: RegionFractions,
}

pub fn tally_json(t: &RegionTally) -> Result<String, HarnessError> {
    serde_json::to_string(&TallyJson {
        tally: t,
        fractions: t.fractions(),
    })
    .map_err(|e| HarnessError::Output(e.to_string()))
}

#[derive(Serialize)]
struct TallyRow<'a> {
    g: usize,
    n: usize,
    q: &'a str,
    tau1: f64,
    tau2: f64,
    seed: u64,
    samples: usize,
    inside: usize,
    region_i: usize,
    region_ii: usize,
    region_iii: usize,
    frac_inside: f64,
    frac_region_i: f64,
    frac_region_ii: f64,
    frac_region_iii: f64,
}

pub fn tally_csv(t: &RegionTally) -> Result<String, HarnessError> {
    let f = t.fractions();
    csv_string(&[TallyRow {
        g: t.g,
        n: t.n,
        q: &t.q,
        tau1: t.tau1,
        tau2: t.tau2,
        seed: t.seed,
        samples: t.samples,
        inside: t.counts.inside,
        region_i: t.counts.region_i,
        region_ii: t.counts.region_ii,
        region_iii: t.counts.region_iii,
        frac_inside: f.inside,
        frac_region_i: f.region_i,
        frac_region_ii: f.region_ii,
        frac_region_iii: f.region_iii,
    }])
}
