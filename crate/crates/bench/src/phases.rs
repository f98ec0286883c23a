//! The two-phase benchmark recipe.
//!
//! Setup starts the store, applies the tuning options through their option
//! strings, creates and pre-splits the table, waits for balance, and
//! publishes the split file. Execution is what every worker runs: read the
//! split file, claim local tablets, generate one base graph, and ingest one
//! re-keyed copy of it per tablet through a batch writer.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use tablestack_assoc::{keys, Triple, Value};
use tablestack_graphgen::{edges_to_assoc, generate};
use tablestack_store::{
    SimClock, SplitTable, StoreConfig, TabletStore, OPT_MAX_MINOR_COMPACTIONS, OPT_WALOG_ENABLED,
};

use crate::config::BenchmarkConfig;
use crate::error::BenchError;
use crate::report::WorkerRunReport;
use crate::splits::{assign_local_splits, compute_global_splits, WorkerIdentity};

/// Name of the benchmark table.
pub const TABLE: &str = "graph";
/// Name of the split file inside a run directory.
pub const SPLIT_FILE: &str = "splits.txt";

/// Everything setup hands to the execution phase.
pub struct SetupOutput {
    pub store: Arc<TabletStore>,
    pub table: String,
    pub splits: SplitTable,
    pub split_file: PathBuf,
    /// The launch roster: one contiguous block of `n_ingest` pids per server.
    pub workers: Vec<WorkerIdentity>,
    /// Simulated seconds the balancer spent distributing the pre-splits.
    pub balance_secs: f64,
    /// Clock used for setup (balancer) accounting.
    pub setup_clock: SimClock,
}

fn step<T>(number: u8, result: Result<T, BenchError>) -> Result<T, BenchError> {
    result.map_err(|source| BenchError::SetupStep {
        step: number,
        source: Box::new(source),
    })
}

/// Runs the setup recipe on a freshly started store.
pub fn setup_phase(cfg: &BenchmarkConfig, run_dir: &Path) -> Result<SetupOutput, BenchError> {
    cfg.validate()?;
    // Step 1: start the store with n_server shards. It comes up with stock
    // defaults (write-ahead log on, compaction cap 4); the recipe's tuning
    // is applied through the option strings below.
    let stock = StoreConfig {
        walog_enabled: true,
        max_concurrent_minor_compactions: 4,
        ..cfg.store.clone()
    };
    let store = step(1, TabletStore::new(cfg.n_server, stock).map_err(Into::into))?;
    setup_phase_on(&store, cfg, run_dir)
}

/// The setup recipe, steps 2..7, against an already started store. Split
/// out so a duplicate setup against one store fails at the table-creation
/// step exactly like re-running the recipe would.
pub fn setup_phase_on(
    store: &Arc<TabletStore>,
    cfg: &BenchmarkConfig,
    run_dir: &Path,
) -> Result<SetupOutput, BenchError> {
    cfg.validate()?;
    // Step 2: per-server minor-compaction cap.
    step(
        2,
        store
            .set_option(
                None,
                OPT_MAX_MINOR_COMPACTIONS,
                &cfg.store.max_concurrent_minor_compactions.to_string(),
            )
            .map_err(Into::into),
    )?;
    // Step 3: create the table.
    step(3, store.create_table(TABLE).map_err(Into::into))?;
    // Step 4: write-ahead log, normally disabled for ingest runs.
    step(
        4,
        store
            .set_option(
                Some(TABLE),
                OPT_WALOG_ENABLED,
                if cfg.store.walog_enabled { "true" } else { "false" },
            )
            .map_err(Into::into),
    )?;
    // Step 5: pre-split and wait for the balancer.
    let setup_clock = SimClock::new();
    let planned = compute_global_splits(cfg);
    let balance_secs = step(5, {
        let keys: Vec<String> = planned.splits.iter().map(|(k, _)| k.clone()).collect();
        store
            .add_splits(TABLE, &keys)
            .and_then(|()| store.run_balancer_until_stable(TABLE, &setup_clock))
            .map_err(Into::into)
    })?;
    // Step 6: publish split locations to the shared file.
    let split_file = run_dir.join(SPLIT_FILE);
    let splits = step(6, {
        store
            .get_split_locations(TABLE)
            .and_then(|s| s.write_file(&split_file).map(|()| s))
            .map_err(Into::into)
    })?;
    // Step 7: the launch roster, one block of n_ingest workers per server.
    let workers = (0..cfg.n_workers())
        .map(|pid| WorkerIdentity::new(pid, cfg.n_workers(), cfg.n_ingest))
        .collect();
    Ok(SetupOutput {
        store: store.clone(),
        table: TABLE.to_string(),
        splits,
        split_file,
        workers,
        balance_secs,
        setup_clock,
    })
}

/// Validates a split file against the run config; a file from a different
/// config or a partially balanced table must not be ingested against.
fn check_split_file(cfg: &BenchmarkConfig, splits: &SplitTable) -> Result<(), BenchError> {
    let expected = cfg.total_tablets();
    if splits.tablet_count() != expected {
        return Err(BenchError::StaleSplitFile(format!(
            "expected {expected} tablets, found {}",
            splits.tablet_count()
        )));
    }
    let n = cfg.n_vertices();
    let width = cfg.row_key_width();
    for (i, (key, _)) in splits.splits.iter().enumerate() {
        let want = keys::encode((i as u64 + 1) * n, width)?;
        if *key != want {
            return Err(BenchError::StaleSplitFile(format!(
                "boundary {i} is {key:?}, expected {want:?}"
            )));
        }
    }
    Ok(())
}

/// One worker's run. Reads the split file fresh from disk (the only shared
/// input), so behavior is a function of `(cfg, pid)` alone.
pub fn execution_phase(
    me: &WorkerIdentity,
    cfg: &BenchmarkConfig,
    split_file: &Path,
    store: &Arc<TabletStore>,
    table: &str,
) -> Result<WorkerRunReport, BenchError> {
    // Step 1: read the split file.
    let splits = SplitTable::read_file(split_file)?;
    check_split_file(cfg, &splits)?;

    // Step 2: claim the local share of tablets.
    let mine = assign_local_splits(me, &splits, cfg.n_ingest)?;
    if mine.len() != cfg.n_tablet {
        return Err(BenchError::StaleSplitFile(format!(
            "worker {} drew {} tablets, expected {}",
            me.pid,
            mine.len(),
            cfg.n_tablet
        )));
    }

    // Step 3: generate the base graph and its associative-array view.
    let gen_start = Instant::now();
    let edges = generate(&cfg.generator_config(me.pid))?;
    let base = edges_to_assoc(&edges, cfg.col_key_width())?;
    let generate_secs = gen_start.elapsed().as_secs_f64();

    // Steps 4 and 5: per assigned tablet, re-key the base graph to the
    // tablet's starting row, then push the stream through the batch writer.
    // The writer sees one triple per source edge: repeated edges count as
    // inserts and collapse in the store, leaving the re-keyed array. The
    // insert clock covers the writer interaction only, not the re-keying.
    let n = cfg.n_vertices();
    let row_width = cfg.row_key_width();
    let col_width = cfg.col_key_width();
    let mut writer = store.open_batch_writer(table)?;
    let mut inserted = 0u64;
    let mut insert_secs = 0.0;
    for &tablet in &mine {
        let offset = tablet as u64 * n;
        let mut stream = Vec::with_capacity(edges.edges.len());
        for &(start, end) in &edges.edges {
            stream.push(Triple::new(
                keys::encode(start + offset, row_width)?,
                keys::encode(end, col_width)?,
                Value::one(),
            ));
        }
        let timer = Instant::now();
        for chunk in stream.chunks(2048) {
            writer.put(chunk)?;
        }
        insert_secs += timer.elapsed().as_secs_f64();
        inserted += stream.len() as u64;
    }
    let timer = Instant::now();
    writer.close()?;
    insert_secs += timer.elapsed().as_secs_f64();

    Ok(WorkerRunReport {
        pid: me.pid,
        entries_inserted: inserted,
        distinct_entries: base.nnz() as u64,
        generate_secs,
        insert_secs,
        entries_per_sec: inserted as f64 / insert_secs,
    })
}
