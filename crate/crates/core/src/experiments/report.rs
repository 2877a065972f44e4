use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::stats::Crossing;
use super::sweep::SweepResult;
use crate::error::ExperimentError;

pub const CSV_HEADER: [&str; 8] = ["scenario", "p", "L", "trials", "failures", "rate", "ci_lo", "ci_hi"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub scenario: String,
    pub p_th: Option<f64>,
    pub ci: Option<[f64; 2]>,
    pub config_hash: String,
    /// Set when no crossing was bracketed.
    pub error: Option<String>,
    pub crossing: Option<Crossing>,
}

impl SweepSummary {
    pub fn new(result: &SweepResult, crossing: Result<&Crossing, &ExperimentError>) -> Self {
        let (p_th, ci, error, crossing) = match crossing {
            Ok(c) => (Some(c.p_th), Some(c.ci), None, Some(c.clone())),
            Err(e) => (None, None, Some(e.to_string()), None),
        };
        SweepSummary {
            scenario: result.config.scenario.clone(),
            p_th,
            ci,
            config_hash: result.config.hash(),
            error,
            crossing,
        }
    }
}

/// CSV rows for all results, in the given order; header only when empty.
pub fn write_csv<W: Write>(results: &[SweepResult], out: W) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in results {
        for pt in &r.points {
            w.write_record([
                r.config.scenario.clone(),
                pt.p.to_string(),
                pt.size.to_string(),
                pt.trials.to_string(),
                pt.failures.to_string(),
                pt.rate.to_string(),
                pt.ci_lo.to_string(),
                pt.ci_hi.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(results: &[SweepResult]) -> String {
    let mut buf = Vec::new();
    write_csv(results, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

/// Writes `sweep.csv` and `summary.json` under `dir`.
pub fn write_report(dir: &Path, results: &[SweepResult], summaries: &[SweepSummary]) -> Result<(), ExperimentError> {
    fs::create_dir_all(dir)?;
    write_csv(results, fs::File::create(dir.join("sweep.csv"))?)?;
    let json = serde_json::to_string_pretty(summaries)?;
    fs::write(dir.join("summary.json"), json + "\n")?;
    Ok(())
}
