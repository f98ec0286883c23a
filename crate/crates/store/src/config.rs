use serde::{Deserialize, Serialize};

use crate::error::StoreError;

/// Option key for the per-server cap on simultaneous minor compactions.
pub const OPT_MAX_MINOR_COMPACTIONS: &str = "tserver.compaction.minor.concurrent.max";
/// Option key toggling the write-ahead-log cost on the insert path.
pub const OPT_WALOG_ENABLED: &str = "table.walog.enabled";

/// Tuning knobs of the simulated store.
///
/// `walog_cost_factor` and `ingest_service_secs_per_byte` parameterize the
/// simulation's insert-path cost model: applying a block occupies its
/// server's service line for `bytes * ingest_service_secs_per_byte` seconds,
/// multiplied by `walog_cost_factor` while the write-ahead log is enabled.
/// The per-byte default corresponds to a few hundred thousand small entries
/// per second per server, the throughput class of a commodity tablet server.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StoreConfig {
    /// Splits the balancer migrates per simulated second.
    pub balancer_rate: f64,
    /// Per-server cap on concurrently running minor compactions.
    pub max_concurrent_minor_compactions: usize,
    pub walog_enabled: bool,
    /// Multiplicative insert-path slowdown while the write-ahead log is on.
    pub walog_cost_factor: f64,
    /// Memtable entries per tablet before a minor compaction is queued.
    pub memtable_flush_threshold: usize,
    /// Batch writer flush block size in serialized bytes.
    pub batch_block_bytes: usize,
    /// Simulated server-side service time per block byte; zero disables
    /// ingest pacing entirely.
    pub ingest_service_secs_per_byte: f64,
    /// Window for the ingest-rate average reported by metrics snapshots.
    pub averaging_window_secs: f64,
}

impl Default for StoreConfig {
    fn default() -> StoreConfig {
        StoreConfig {
            balancer_rate: 50.0,
            max_concurrent_minor_compactions: 4,
            walog_enabled: true,
            walog_cost_factor: 1.3,
            memtable_flush_threshold: 100_000,
            batch_block_bytes: 500_000,
            ingest_service_secs_per_byte: 2e-7,
            averaging_window_secs: 30.0,
        }
    }
}

impl StoreConfig {
    pub fn validate(&self) -> Result<(), StoreError> {
        let bad = |msg: &str| Err(StoreError::InvalidConfig(msg.to_string()));
        if !(self.balancer_rate > 0.0) {
            return bad("balancer_rate must be positive");
        }
        if self.max_concurrent_minor_compactions == 0 {
            return bad("max_concurrent_minor_compactions must be positive");
        }
        if !(self.walog_cost_factor >= 1.0) {
            return bad("walog_cost_factor must be >= 1");
        }
        if self.memtable_flush_threshold == 0 || self.batch_block_bytes == 0 {
            return bad("memtable_flush_threshold and batch_block_bytes must be positive");
        }
        if !(self.ingest_service_secs_per_byte >= 0.0) {
            return bad("ingest_service_secs_per_byte must be non-negative");
        }
        if !(self.averaging_window_secs > 0.0) {
            return bad("averaging_window_secs must be positive");
        }
        Ok(())
    }
}
