use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

/// One point of the cumulative ingest series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThroughputSample {
    pub elapsed_secs: f64,
    pub cumulative_inserts: u64,
}

/// Counter snapshot, either for one server or summed over all of them.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ServerMetrics {
    pub inserts_accepted: u64,
    pub entries_flushed: u64,
    pub compactions_run: u64,
    pub compactions_queued_peak: u64,
    pub compactions_running_peak: u64,
    pub splits_migrated: u64,
    /// Simulated seconds the server's ingest service line was occupied.
    pub ingest_busy_secs: f64,
}

impl ServerMetrics {
    fn accumulate(&mut self, other: &ServerMetrics) {
        self.inserts_accepted += other.inserts_accepted;
        self.entries_flushed += other.entries_flushed;
        self.compactions_run += other.compactions_run;
        self.compactions_queued_peak += other.compactions_queued_peak;
        self.compactions_running_peak = self.compactions_running_peak.max(other.compactions_running_peak);
        self.splits_migrated += other.splits_migrated;
        self.ingest_busy_secs += other.ingest_busy_secs;
    }
}

/// Full metrics snapshot: totals, per-server counters, the sample series,
/// and the rate over the configured averaging window.
#[derive(Debug, Clone, Serialize)]
pub struct StoreMetrics {
    pub totals: ServerMetrics,
    pub per_server: Vec<ServerMetrics>,
    pub samples: Vec<ThroughputSample>,
    pub windowed_rate: f64,
}

/// Ingest rate in entries/second over the `window` ending at `now`,
/// measured between the newest sample and the newest sample at or before
/// `now - window` (the origin when the series is younger than the window).
pub fn windowed_rate(samples: &[ThroughputSample], now: f64, window: f64) -> f64 {
    let Some(last) = samples.last() else {
        return 0.0;
    };
    let cutoff = now - window;
    let base = samples
        .iter()
        .rev()
        .find(|s| s.elapsed_secs <= cutoff)
        .map(|s| (s.elapsed_secs, s.cumulative_inserts))
        .unwrap_or((0.0, 0));
    let dt = last.elapsed_secs - base.0;
    if dt <= 0.0 {
        return 0.0;
    }
    (last.cumulative_inserts - base.1) as f64 / dt
}

/// Lock-free accumulation counters for one server shard.
#[derive(Debug, Default)]
pub(crate) struct ServerCounters {
    pub inserts_accepted: AtomicU64,
    pub entries_flushed: AtomicU64,
    pub compactions_run: AtomicU64,
    pub compactions_queued_peak: AtomicUsize,
    pub compactions_running_peak: AtomicUsize,
    pub splits_migrated: AtomicU64,
    pub ingest_busy_nanos: AtomicU64,
}

impl ServerCounters {
    pub fn snapshot(&self) -> ServerMetrics {
        ServerMetrics {
            inserts_accepted: self.inserts_accepted.load(Ordering::Acquire),
            entries_flushed: self.entries_flushed.load(Ordering::Acquire),
            compactions_run: self.compactions_run.load(Ordering::Acquire),
            compactions_queued_peak: self.compactions_queued_peak.load(Ordering::Acquire) as u64,
            compactions_running_peak: self.compactions_running_peak.load(Ordering::Acquire) as u64,
            splits_migrated: self.splits_migrated.load(Ordering::Acquire),
            ingest_busy_secs: self.ingest_busy_nanos.load(Ordering::Acquire) as f64 / 1e9,
        }
    }
}

pub(crate) fn totals_of(per_server: &[ServerMetrics]) -> ServerMetrics {
    let mut totals = ServerMetrics::default();
    for m in per_server {
        totals.accumulate(m);
    }
    totals
}

pub(crate) fn bump_peak(peak: &AtomicUsize, current: usize) {
    peak.fetch_max(current, Ordering::AcqRel);
}
