//! Threshold sweeps: sample effective errors, decode, count logical
//! failures, and estimate the crossing of failure-rate curves.

mod report;
mod stats;
mod sweep;

pub use report::{csv_string, write_csv, write_report, ReportFormat, SweepSummary, CSV_HEADER};
pub use stats::{
    crossing_of_curves, crossing_point, crossing_point_with, wilson_interval, Crossing, Curve, PairCrossing,
    BOOTSTRAP_REPLICATES, Z_95,
};
pub use sweep::{
    resolve_workers, run_sweep, run_sweep_with_workers, SweepConfig, SweepPoint, SweepResult, MIN_TRIALS, WORKERS_ENV,
};
