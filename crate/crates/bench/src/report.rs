//! Run artifacts: the manifest that makes a run reproducible, the ingest
//! report, the throughput time series, and scaling-sweep curves. JSON uses
//! serde; the CSV formats are fixed single-purpose tables written and parsed
//! here so that parse-then-serialize is byte-identical.

use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use tablestack_store::{windowed_rate, ServerMetrics, ThroughputSample};

use crate::config::BenchmarkConfig;
use crate::error::BenchError;

/// Per-worker outcome; the rate covers the insert phase only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkerRunReport {
    pub pid: usize,
    pub entries_inserted: u64,
    /// Distinct `(row, col)` pairs of the worker's base graph.
    pub distinct_entries: u64,
    pub generate_secs: f64,
    pub insert_secs: f64,
    pub entries_per_sec: f64,
}

/// Aggregate outcome of one benchmark run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestReport {
    pub per_worker: Vec<WorkerRunReport>,
    pub total_entries: u64,
    pub wall_secs: f64,
    pub aggregate_entries_per_sec: f64,
    pub per_server_entries_per_sec: f64,
    pub per_worker_mean_entries_per_sec: f64,
    /// Simulated seconds the balancer needed during setup.
    pub balance_secs: f64,
    pub throughput: Vec<ThroughputSample>,
    pub store_totals: ServerMetrics,
}

/// Everything needed to reproduce a run: the exact config (including the
/// seed) plus provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub started_at_unix: u64,
    pub config: BenchmarkConfig,
    pub outputs: ManifestOutputs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestOutputs {
    pub manifest: String,
    pub report: String,
    pub throughput: String,
    pub split_file: String,
}

pub const MANIFEST_FILE: &str = "manifest.json";
pub const REPORT_FILE: &str = "report.json";
pub const THROUGHPUT_FILE: &str = "throughput.csv";
pub const SCALING_FILE: &str = "scaling.csv";
pub const SWEEP_SUMMARY_FILE: &str = "sweep_summary.json";

impl RunManifest {
    pub fn new(config: BenchmarkConfig) -> RunManifest {
        RunManifest {
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_at_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            config,
            outputs: ManifestOutputs {
                manifest: MANIFEST_FILE.to_string(),
                report: REPORT_FILE.to_string(),
                throughput: THROUGHPUT_FILE.to_string(),
                split_file: crate::phases::SPLIT_FILE.to_string(),
            },
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), BenchError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, BenchError> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

/// Loads a `BenchmarkConfig` from either a bare flat config file or a run
/// manifest (recognized by its `config` field), so a manifest is directly
/// reusable as the input of a reproduction run.
pub fn load_config(path: &Path) -> Result<BenchmarkConfig, BenchError> {
    let text = fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("config").is_some() {
        let manifest: RunManifest = serde_json::from_value(value)?;
        Ok(manifest.config)
    } else {
        Ok(serde_json::from_value(value)?)
    }
}

pub const THROUGHPUT_HEADER: &str = "elapsed_seconds,cumulative_inserts,windowed_rate";

/// Renders the throughput series; each row's windowed rate is the rate as of
/// that sample.
pub fn throughput_csv(samples: &[ThroughputSample], window_secs: f64) -> String {
    let mut out = String::from(THROUGHPUT_HEADER);
    out.push('\n');
    for (i, s) in samples.iter().enumerate() {
        let rate = windowed_rate(&samples[..=i], s.elapsed_secs, window_secs);
        out.push_str(&format!(
            "{},{},{}\n",
            s.elapsed_secs, s.cumulative_inserts, rate
        ));
    }
    out
}

pub fn parse_throughput_csv(text: &str) -> Result<Vec<(f64, u64, f64)>, BenchError> {
    let malformed = |reason: String| BenchError::Format {
        what: "throughput csv".into(),
        reason,
    };
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == THROUGHPUT_HEADER => {}
        other => return Err(malformed(format!("bad header {other:?}"))),
    }
    let mut rows = Vec::new();
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(malformed(format!("expected 3 fields, got {}", fields.len())));
        }
        rows.push((
            fields[0].parse().map_err(|e| malformed(format!("{e}")))?,
            fields[1].parse().map_err(|e| malformed(format!("{e}")))?,
            fields[2].parse().map_err(|e| malformed(format!("{e}")))?,
        ));
    }
    Ok(rows)
}

/// One sweep measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub n_server: usize,
    pub n_ingest: usize,
    pub n_p: usize,
    pub aggregate_entries_per_sec: f64,
    pub per_worker_entries_per_sec: f64,
}

/// Sweep rows, kept sorted by `(n_server, n_ingest)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScalingCurve {
    pub points: Vec<ScalingPoint>,
}

pub const SCALING_HEADER: &str = "n_server,n_ingest,n_p,aggregate_entries_per_sec,per_worker_entries_per_sec";

/// Per-worker rates are considered linear while they stay within this
/// fraction of the sweep's first (fewest-workers) point.
pub const LINEAR_RATE_BAND: f64 = 0.30;

/// Dispersion of per-worker rates across a sweep, measured against the
/// first point as the baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub baseline_per_worker_rate: f64,
    /// Largest per-worker rate over the baseline.
    pub max_over_baseline: f64,
    /// Smallest per-worker rate over the baseline.
    pub min_over_baseline: f64,
    /// max/min ratio of per-worker rates across the sweep.
    pub dispersion: f64,
    pub linear: bool,
}

impl ScalingCurve {
    pub fn sort(&mut self) {
        self.points
            .sort_by_key(|p| (p.n_server, p.n_ingest));
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(SCALING_HEADER);
        out.push('\n');
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                p.n_server, p.n_ingest, p.n_p, p.aggregate_entries_per_sec, p.per_worker_entries_per_sec
            ));
        }
        out
    }

    pub fn parse_csv(text: &str) -> Result<ScalingCurve, BenchError> {
        let malformed = |reason: String| BenchError::Format {
            what: "scaling csv".into(),
            reason,
        };
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h == SCALING_HEADER => {}
            other => return Err(malformed(format!("bad header {other:?}"))),
        }
        let mut points = Vec::new();
        for line in lines {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 5 {
                return Err(malformed(format!("expected 5 fields, got {}", f.len())));
            }
            let parse_err = |e: String| malformed(e);
            points.push(ScalingPoint {
                n_server: f[0].parse().map_err(|e| parse_err(format!("{e}")))?,
                n_ingest: f[1].parse().map_err(|e| parse_err(format!("{e}")))?,
                n_p: f[2].parse().map_err(|e| parse_err(format!("{e}")))?,
                aggregate_entries_per_sec: f[3].parse().map_err(|e| parse_err(format!("{e}")))?,
                per_worker_entries_per_sec: f[4].parse().map_err(|e| parse_err(format!("{e}")))?,
            });
        }
        Ok(ScalingCurve { points })
    }

    pub fn summary(&self) -> Option<SweepSummary> {
        let baseline = self.points.first()?.per_worker_entries_per_sec;
        let rates: Vec<f64> = self
            .points
            .iter()
            .map(|p| p.per_worker_entries_per_sec)
            .collect();
        let max = rates.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = rates.iter().cloned().fold(f64::INFINITY, f64::min);
        let linear = rates
            .iter()
            .all(|r| (r / baseline - 1.0).abs() <= LINEAR_RATE_BAND);
        Some(SweepSummary {
            baseline_per_worker_rate: baseline,
            max_over_baseline: max / baseline,
            min_over_baseline: min / baseline,
            dispersion: max / min,
            linear,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn throughput_csv_round_trip_is_idempotent() {
        let samples = vec![
            ThroughputSample {
                elapsed_secs: 0.5,
                cumulative_inserts: 100,
            },
            ThroughputSample {
                elapsed_secs: 1.25,
                cumulative_inserts: 350,
            },
        ];
        let text = throughput_csv(&samples, 30.0);
        let rows = parse_throughput_csv(&text).unwrap();
        assert_eq!(rows.len(), 2);
        let again: String = format!(
            "{THROUGHPUT_HEADER}\n{}",
            rows.iter()
                .map(|(a, b, c)| format!("{a},{b},{c}\n"))
                .collect::<String>()
        );
        assert_eq!(text, again);
    }

    #[test]
    fn scaling_csv_round_trip() {
        let mut curve = ScalingCurve::default();
        curve.points.push(ScalingPoint {
            n_server: 2,
            n_ingest: 1,
            n_p: 2,
            aggregate_entries_per_sec: 1000.0,
            per_worker_entries_per_sec: 500.0,
        });
        curve.points.push(ScalingPoint {
            n_server: 1,
            n_ingest: 1,
            n_p: 1,
            aggregate_entries_per_sec: 500.0,
            per_worker_entries_per_sec: 500.0,
        });
        curve.sort();
        assert_eq!(curve.points[0].n_server, 1);
        let text = curve.to_csv();
        assert_eq!(ScalingCurve::parse_csv(&text).unwrap(), curve);
        assert_eq!(ScalingCurve::parse_csv(&text).unwrap().to_csv(), text);
    }

    #[test]
    fn sweep_summary_flags_linearity() {
        let curve = ScalingCurve {
            points: vec![
                ScalingPoint {
                    n_server: 1,
                    n_ingest: 1,
                    n_p: 1,
                    aggregate_entries_per_sec: 100.0,
                    per_worker_entries_per_sec: 100.0,
                },
                ScalingPoint {
                    n_server: 2,
                    n_ingest: 1,
                    n_p: 2,
                    aggregate_entries_per_sec: 180.0,
                    per_worker_entries_per_sec: 90.0,
                },
            ],
        };
        let summary = curve.summary().unwrap();
        assert!(summary.linear);
        assert!((summary.dispersion - 100.0 / 90.0).abs() < 1e-12);

        let curve_bad = ScalingCurve {
            points: vec![
                ScalingPoint {
                    n_server: 1,
                    n_ingest: 1,
                    n_p: 1,
                    aggregate_entries_per_sec: 100.0,
                    per_worker_entries_per_sec: 100.0,
                },
                ScalingPoint {
                    n_server: 8,
                    n_ingest: 1,
                    n_p: 8,
                    aggregate_entries_per_sec: 200.0,
                    per_worker_entries_per_sec: 25.0,
                },
            ],
        };
        assert!(!curve_bad.summary().unwrap().linear);
    }

    #[test]
    fn manifest_or_bare_config_both_load() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = BenchmarkConfig::default();

        let bare = dir.path().join("config.json");
        write_json(&bare, &cfg).unwrap();
        assert_eq!(load_config(&bare).unwrap(), cfg);

        let manifest = RunManifest::new(cfg.clone());
        let mpath = dir.path().join("manifest.json");
        write_json(&mpath, &manifest).unwrap();
        assert_eq!(load_config(&mpath).unwrap(), cfg);

        let back: RunManifest = read_json(&mpath).unwrap();
        assert_eq!(back, manifest);
    }
}
