//! Drives a full run: setup, then all workers concurrently, with a sampler
//! recording the cumulative-insert series while they work.

use std::path::Path;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Barrier, Mutex};
use std::time::{Duration, Instant};

use tablestack_store::{SimClock, SplitTable, TabletStore};

use crate::config::BenchmarkConfig;
use crate::error::BenchError;
use crate::phases::{execution_phase, setup_phase, SetupOutput};
use crate::report::IngestReport;

const SAMPLE_INTERVAL: Duration = Duration::from_millis(20);

/// A finished run: the report plus the live store for verification.
pub struct RunOutput {
    pub report: IngestReport,
    pub store: Arc<TabletStore>,
    pub table: String,
    pub splits: SplitTable,
    /// Clock the ingest series was stamped with (seconds since the workers
    /// were released).
    pub clock: SimClock,
}

/// Runs setup then all `N_p` workers concurrently and aggregates their
/// reports. `run_dir` receives the split file.
pub fn run_benchmark(cfg: &BenchmarkConfig, run_dir: &Path) -> Result<RunOutput, BenchError> {
    let setup = setup_phase(cfg, run_dir)?;
    run_execution(cfg, setup)
}

/// The execution half, reusable against an existing setup.
pub fn run_execution(cfg: &BenchmarkConfig, setup: SetupOutput) -> Result<RunOutput, BenchError> {
    let SetupOutput {
        store,
        table,
        splits,
        split_file,
        workers,
        balance_secs,
        ..
    } = setup;

    // One barrier party per worker plus the sampler and the coordinator, so
    // the measured window starts with every worker ready.
    let n_p = workers.len();
    let barrier = Barrier::new(n_p + 2);
    let done = AtomicBool::new(false);
    let ingest_clock = SimClock::new();
    let results: Mutex<Vec<_>> = Mutex::new(Vec::with_capacity(n_p));

    let wall_secs = std::thread::scope(|scope| {
        for me in &workers {
            let store = &store;
            let table = table.as_str();
            let split_file = split_file.as_path();
            let barrier = &barrier;
            let results = &results;
            scope.spawn(move || {
                barrier.wait();
                // A panicking worker must still report, or the coordinator
                // would wait forever.
                let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
                    execution_phase(me, cfg, split_file, store, table)
                }))
                .unwrap_or_else(|_| Err(BenchError::WorkerPanic));
                results.lock().unwrap().push((me.pid, outcome));
            });
        }

        // Sampler: map wall time onto the ingest clock and snapshot the
        // cumulative counter until every worker is done.
        let sampler_store = &store;
        let sampler_clock = &ingest_clock;
        let sampler_done = &done;
        let sampler_barrier = &barrier;
        let sampler = scope.spawn(move || {
            sampler_barrier.wait();
            let start = Instant::now();
            sampler_store.record_sample(sampler_clock);
            while !sampler_done.load(Ordering::Acquire) {
                std::thread::park_timeout(SAMPLE_INTERVAL);
                sampler_clock.advance_to(start.elapsed().as_secs_f64());
                sampler_store.record_sample(sampler_clock);
            }
        });

        barrier.wait();
        let start = Instant::now();
        // The scope joins the workers; the sampler needs the stop flag once
        // every result has been reported.
        loop {
            if results.lock().unwrap().len() == n_p {
                break;
            }
            std::thread::sleep(Duration::from_millis(2));
        }
        let wall = start.elapsed().as_secs_f64();
        done.store(true, Ordering::Release);
        sampler.thread().unpark();
        wall
    });

    let mut outcomes = results.into_inner().unwrap();
    outcomes.sort_by_key(|(pid, _)| *pid);
    let mut per_worker = Vec::with_capacity(n_p);
    for (pid, outcome) in outcomes {
        per_worker.push(outcome.map_err(|source| BenchError::Worker {
            pid,
            source: Box::new(source),
        })?);
    }

    // Final sample, then drain any queued compactions.
    store.record_sample(&ingest_clock);
    for server in 0..store.n_servers() {
        store.run_minor_compactions(server);
    }

    let metrics = store.snapshot_metrics(&ingest_clock);
    let total_entries: u64 = per_worker.iter().map(|w| w.entries_inserted).sum();
    let planned = cfg.planned_entries();
    if total_entries != planned {
        return Err(BenchError::Conservation(format!(
            "workers report {total_entries} inserts, planned {planned}"
        )));
    }
    if metrics.totals.inserts_accepted != planned {
        return Err(BenchError::Conservation(format!(
            "store accepted {} inserts, planned {planned}",
            metrics.totals.inserts_accepted
        )));
    }

    let per_worker_mean = per_worker
        .iter()
        .map(|w| w.entries_per_sec)
        .sum::<f64>()
        / n_p as f64;
    let report = IngestReport {
        total_entries,
        wall_secs,
        aggregate_entries_per_sec: total_entries as f64 / wall_secs,
        per_server_entries_per_sec: total_entries as f64 / wall_secs / cfg.n_server as f64,
        per_worker_mean_entries_per_sec: per_worker_mean,
        balance_secs,
        throughput: metrics.samples.clone(),
        store_totals: metrics.totals,
        per_worker,
    };
    Ok(RunOutput {
        report,
        store,
        table,
        splits,
        clock: ingest_clock,
    })
}
