//! The benchmark proper: scaled-problem sizing, domain decomposition, the
//! two-phase ingest recipe, concurrent SPMD workers against the simulated
//! store, verification, and report emission.

pub mod cli;

mod config;
mod error;
mod phases;
mod report;
mod runner;
mod splits;
mod verify;

pub use config::BenchmarkConfig;
pub use error::BenchError;
pub use phases::{execution_phase, setup_phase, setup_phase_on, SetupOutput, SPLIT_FILE, TABLE};
pub use report::{
    load_config, parse_throughput_csv, read_json, throughput_csv, write_json, IngestReport,
    ManifestOutputs, RunManifest, ScalingCurve, ScalingPoint, SweepSummary, WorkerRunReport,
    LINEAR_RATE_BAND, MANIFEST_FILE, REPORT_FILE, SCALING_FILE, SWEEP_SUMMARY_FILE,
    THROUGHPUT_FILE,
};
pub use runner::{run_benchmark, run_execution, RunOutput};
pub use splits::{assign_local_splits, compute_global_splits, WorkerIdentity};
pub use verify::{verify_ingest, CheckResult, VerificationReport};
