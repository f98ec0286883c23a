use std::collections::{BTreeMap, VecDeque};
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Arc;

use parking_lot::{Mutex, RwLock};
use serde::Serialize;
use tablestack_assoc::Triple;

use crate::clock::SimClock;
use crate::config::{StoreConfig, OPT_MAX_MINOR_COMPACTIONS, OPT_WALOG_ENABLED};
use crate::error::StoreError;
use crate::metrics::{
    bump_peak, totals_of, windowed_rate, ServerCounters, StoreMetrics, ThroughputSample,
};
use crate::split::SplitTable;
use crate::tablet::Tablet;
use crate::writer::BatchWriter;

pub(crate) struct ServerShard {
    pub counters: ServerCounters,
    pub compaction_queue: Mutex<VecDeque<Arc<Tablet>>>,
    pub compactions_running: AtomicUsize,
    /// Serializes simulated ingest service: a server works one block at a
    /// time.
    pub service_line: Mutex<()>,
}

pub(crate) struct TableState {
    /// Sorted by low bound; always a total partition of the key space.
    pub tablets: RwLock<Vec<Arc<Tablet>>>,
}

impl TableState {
    /// Index of the tablet owning `row` in a sorted tablet list.
    fn route(tablets: &[Arc<Tablet>], row: &str) -> usize {
        let idx = tablets.partition_point(|t| t.low.as_deref().map_or(true, |low| low <= row));
        debug_assert!(idx > 0, "first tablet is unbounded below");
        idx - 1
    }
}

/// Identity and state summary of one tablet, in key order.
#[derive(Debug, Clone, Serialize)]
pub struct TabletSummary {
    pub index: usize,
    pub tablet_id: u64,
    pub low: Option<String>,
    pub high: Option<String>,
    pub server: usize,
    pub inserts_accepted: u64,
    pub memtable_entries: usize,
    pub flushed_entries: usize,
}

/// A stored row found outside its tablet's range.
#[derive(Debug, Clone, Serialize)]
pub struct ContainmentViolation {
    pub tablet_index: usize,
    pub row: String,
}

/// The simulated store: `n_servers` in-process shards hosting
/// range-partitioned tables.
pub struct TabletStore {
    n_servers: usize,
    config: StoreConfig,
    walog_enabled: AtomicBool,
    max_minor_compactions: AtomicUsize,
    tables: RwLock<BTreeMap<String, Arc<TableState>>>,
    servers: Vec<ServerShard>,
    samples: Mutex<Vec<ThroughputSample>>,
    next_tablet_id: AtomicU64,
}

impl TabletStore {
    pub fn new(n_servers: usize, config: StoreConfig) -> Result<Arc<TabletStore>, StoreError> {
        if n_servers == 0 {
            return Err(StoreError::InvalidConfig("n_servers must be positive".into()));
        }
        config.validate()?;
        let servers = (0..n_servers)
            .map(|_| ServerShard {
                counters: ServerCounters::default(),
                compaction_queue: Mutex::new(VecDeque::new()),
                compactions_running: AtomicUsize::new(0),
                service_line: Mutex::new(()),
            })
            .collect();
        Ok(Arc::new(TabletStore {
            n_servers,
            walog_enabled: AtomicBool::new(config.walog_enabled),
            max_minor_compactions: AtomicUsize::new(config.max_concurrent_minor_compactions),
            config,
            tables: RwLock::new(BTreeMap::new()),
            servers,
            samples: Mutex::new(Vec::new()),
            next_tablet_id: AtomicU64::new(0),
        }))
    }

    pub fn n_servers(&self) -> usize {
        self.n_servers
    }

    pub fn config(&self) -> &StoreConfig {
        &self.config
    }

    pub fn walog_enabled(&self) -> bool {
        self.walog_enabled.load(Ordering::Acquire)
    }

    pub fn max_minor_compactions(&self) -> usize {
        self.max_minor_compactions.load(Ordering::Acquire)
    }

    fn table(&self, name: &str) -> Result<Arc<TableState>, StoreError> {
        self.tables
            .read()
            .get(name)
            .cloned()
            .ok_or_else(|| StoreError::TableNotFound(name.to_string()))
    }

    fn new_tablet_id(&self) -> u64 {
        self.next_tablet_id.fetch_add(1, Ordering::AcqRel)
    }

    /// Creates `name` with a single unbounded tablet on server 0.
    pub fn create_table(&self, name: &str) -> Result<(), StoreError> {
        let mut tables = self.tables.write();
        if tables.contains_key(name) {
            return Err(StoreError::TableExists(name.to_string()));
        }
        let tablet = Arc::new(Tablet::new(self.new_tablet_id(), None, None, 0));
        tables.insert(
            name.to_string(),
            Arc::new(TableState {
                tablets: RwLock::new(vec![tablet]),
            }),
        );
        Ok(())
    }

    /// Applies one of the recognized option strings. `table` scopes the
    /// table-level option when given; the simulation applies both options
    /// store-wide, so the server-level option accepts `None`.
    pub fn set_option(
        &self,
        table: Option<&str>,
        key: &str,
        value: &str,
    ) -> Result<(), StoreError> {
        if let Some(name) = table {
            self.table(name)?;
        }
        let invalid = || StoreError::InvalidOptionValue {
            key: key.to_string(),
            value: value.to_string(),
        };
        match key {
            OPT_MAX_MINOR_COMPACTIONS => {
                let cap: usize = value.parse().map_err(|_| invalid())?;
                if cap == 0 {
                    return Err(invalid());
                }
                self.max_minor_compactions.store(cap, Ordering::Release);
                Ok(())
            }
            OPT_WALOG_ENABLED => {
                let enabled: bool = value.parse().map_err(|_| invalid())?;
                self.walog_enabled.store(enabled, Ordering::Release);
                Ok(())
            }
            _ => Err(StoreError::UnknownOption(key.to_string())),
        }
    }

    /// Splits tablets at each key. Keys must be strictly increasing, new,
    /// and non-empty; every new tablet stays on its parent's server, so a
    /// freshly created table ends up with every tablet on one server until
    /// the balancer runs.
    pub fn add_splits(&self, table: &str, split_keys: &[String]) -> Result<(), StoreError> {
        for w in split_keys.windows(2) {
            if w[0] >= w[1] {
                return Err(StoreError::InvalidSplits(format!(
                    "split keys must be strictly increasing ({:?} before {:?})",
                    w[0], w[1]
                )));
            }
        }
        if split_keys.iter().any(|k| k.is_empty()) {
            return Err(StoreError::InvalidSplits("empty split key".into()));
        }
        let table = self.table(table)?;
        let mut tablets = table.tablets.write();
        for key in split_keys {
            let idx = TableState::route(&tablets, key);
            let parent = tablets[idx].clone();
            if parent.low.as_deref() == Some(key.as_str()) {
                return Err(StoreError::InvalidSplits(format!(
                    "split key {key:?} already exists"
                )));
            }
            let server = parent.server();
            let left = Arc::new(Tablet::new(
                self.new_tablet_id(),
                parent.low.clone(),
                Some(key.clone()),
                server,
            ));
            let right = Arc::new(Tablet::new(
                self.new_tablet_id(),
                Some(key.clone()),
                parent.high.clone(),
                server,
            ));

            // Move stored data to the side of the split it belongs to. The
            // insert counter stays with the left (original-range) tablet;
            // the intended flow pre-splits empty tables, where it is zero.
            {
                let mut data = parent.data.lock();
                let mut right_data = right.data.lock();
                let right_memtable = data.memtable.split_off(key);
                right_data.memtable_entries =
                    right_memtable.values().map(|cols| cols.len()).sum();
                data.memtable_entries -= right_data.memtable_entries;
                right_data.memtable = right_memtable;

                let runs = std::mem::take(&mut data.flushed);
                data.flushed_entries = 0;
                for run in runs {
                    let cut = run.partition_point(|t| t.row.as_str() < key.as_str());
                    let (l, r) = run.split_at(cut);
                    if !l.is_empty() {
                        data.flushed_entries += l.len();
                        data.flushed.push(l.to_vec());
                    }
                    if !r.is_empty() {
                        right_data.flushed_entries += r.len();
                        right_data.flushed.push(r.to_vec());
                    }
                }
                let mut left_data = left.data.lock();
                *left_data = std::mem::take(&mut *data);
            }
            left.inserts_accepted
                .store(parent.inserts_accepted.load(Ordering::Acquire), Ordering::Release);

            tablets.splice(idx..=idx, [left, right]);
        }
        Ok(())
    }

    /// Migrates tablets until per-server counts differ by at most one,
    /// consuming `balancer_rate` migrations per simulated second. A table
    /// that is already balanced is left untouched; otherwise tablets move to
    /// a contiguous key-order layout, the placement that keeps each server's
    /// rows in one block.
    pub fn run_balancer_until_stable(
        &self,
        table: &str,
        clock: &SimClock,
    ) -> Result<f64, StoreError> {
        let table = self.table(table)?;
        let tablets = table.tablets.read();
        let mut counts = vec![0usize; self.n_servers];
        for t in tablets.iter() {
            counts[t.server()] += 1;
        }
        let spread = counts.iter().max().unwrap() - counts.iter().min().unwrap();
        if spread <= 1 {
            return Ok(0.0);
        }

        let total = tablets.len();
        let mut migrations = 0u64;
        for (i, tablet) in tablets.iter().enumerate() {
            let target = i * self.n_servers / total;
            if tablet.server() != target {
                tablet.set_server(target);
                self.servers[target]
                    .counters
                    .splits_migrated
                    .fetch_add(1, Ordering::AcqRel);
                migrations += 1;
            }
        }
        let elapsed = migrations as f64 / self.config.balancer_rate;
        clock.advance(elapsed);
        Ok(elapsed)
    }

    /// Current boundaries and placements, in key order.
    pub fn get_split_locations(&self, table: &str) -> Result<SplitTable, StoreError> {
        let table = self.table(table)?;
        let tablets = table.tablets.read();
        let first_tablet_server = tablets[0].server();
        let splits = tablets
            .iter()
            .skip(1)
            .map(|t| {
                let low = t.low.clone().expect("non-first tablet has a low bound");
                (low, t.server())
            })
            .collect();
        Ok(SplitTable {
            splits,
            first_tablet_server,
        })
    }

    /// The serving server and tablet id for `row`. The partition is total,
    /// so this cannot miss; a split key routes to the tablet starting there.
    pub fn locate(&self, table: &str, row: &str) -> Result<(usize, u64), StoreError> {
        let table = self.table(table)?;
        let tablets = table.tablets.read();
        let tablet = &tablets[TableState::route(&tablets, row)];
        Ok((tablet.server(), tablet.id))
    }

    pub fn open_batch_writer(self: &Arc<Self>, table: &str) -> Result<BatchWriter, StoreError> {
        let table = self.table(table)?;
        Ok(BatchWriter::new(self.clone(), table))
    }

    /// Routes and applies one writer block. Holding the tablet-list read
    /// lock across the whole application keeps in-flight blocks and splits
    /// mutually exclusive; concurrent writers share the read lock freely.
    pub(crate) fn apply_block(&self, table: &TableState, block: &[Triple]) {
        if block.is_empty() {
            return;
        }
        let tablets = table.tablets.read();

        // Group the block per tablet, preserving arrival order per tablet
        // so last-write-wins stays the writer's order.
        let mut per_tablet: BTreeMap<usize, Vec<&Triple>> = BTreeMap::new();
        for t in block {
            per_tablet
                .entry(TableState::route(&tablets, &t.row))
                .or_default()
                .push(t);
        }

        // Group tablets per owning server (read once; the balancer does not
        // run concurrently with ingest in the benchmark flow, and a block is
        // attributed to the owner observed at application time).
        let mut per_server: BTreeMap<usize, Vec<(usize, Vec<&Triple>)>> = BTreeMap::new();
        for (idx, triples) in per_tablet {
            per_server
                .entry(tablets[idx].server())
                .or_default()
                .push((idx, triples));
        }

        let walog = self.walog_enabled();
        for (server, groups) in per_server {
            let shard = &self.servers[server];
            // The server's share of the block service time, scaled by the
            // write-ahead-log factor while the log is on.
            let bytes: usize = groups
                .iter()
                .flat_map(|(_, ts)| ts.iter())
                .map(|t| crate::writer::serialized_size(t))
                .sum();
            let mut service = bytes as f64 * self.config.ingest_service_secs_per_byte;
            if walog {
                service *= self.config.walog_cost_factor;
            }

            let _line = shard.service_line.lock();
            if service > 0.0 {
                shard
                    .counters
                    .ingest_busy_nanos
                    .fetch_add((service * 1e9).round() as u64, Ordering::AcqRel);
                std::thread::sleep(std::time::Duration::from_secs_f64(service));
            }
            for (idx, triples) in groups {
                let tablet = &tablets[idx];
                tablet.apply(&triples);
                shard
                    .counters
                    .inserts_accepted
                    .fetch_add(triples.len() as u64, Ordering::AcqRel);
                self.maybe_queue_compaction(tablet, server);
            }
        }
    }

    fn maybe_queue_compaction(&self, tablet: &Arc<Tablet>, server: usize) {
        let over = tablet.data.lock().memtable_entries > self.config.memtable_flush_threshold;
        if over
            && !tablet
                .pending_compaction
                .swap(true, Ordering::AcqRel)
        {
            let mut queue = self.servers[server].compaction_queue.lock();
            queue.push_back(tablet.clone());
            bump_peak(
                &self.servers[server].counters.compactions_queued_peak,
                queue.len(),
            );
        }
    }

    pub fn pending_compactions(&self, server: usize) -> usize {
        self.servers[server].compaction_queue.lock().len()
    }

    /// Runs every queued minor compaction on `server` in waves of at most
    /// the configured cap, each wave's flushes running concurrently.
    /// Returns the number of compactions executed.
    pub fn run_minor_compactions(&self, server: usize) -> usize {
        let shard = &self.servers[server];
        let mut executed = 0;
        loop {
            let cap = self.max_minor_compactions();
            let wave: Vec<Arc<Tablet>> = {
                let mut queue = shard.compaction_queue.lock();
                let take = cap.min(queue.len());
                queue.drain(..take).collect()
            };
            if wave.is_empty() {
                return executed;
            }
            std::thread::scope(|scope| {
                for tablet in &wave {
                    scope.spawn(move || {
                        let running = shard.compactions_running.fetch_add(1, Ordering::AcqRel) + 1;
                        bump_peak(&shard.counters.compactions_running_peak, running);
                        let flushed = tablet.flush();
                        shard
                            .counters
                            .entries_flushed
                            .fetch_add(flushed as u64, Ordering::AcqRel);
                        shard.counters.compactions_run.fetch_add(1, Ordering::AcqRel);
                        tablet.pending_compaction.store(false, Ordering::Release);
                        shard.compactions_running.fetch_sub(1, Ordering::AcqRel);
                    });
                }
            });
            executed += wave.len();
        }
    }

    /// Merged view over `[lo, hi)` (unbounded where `None`), sorted by
    /// `(row, col)`, newest value per key.
    pub fn scan(
        &self,
        table: &str,
        lo: Option<&str>,
        hi: Option<&str>,
    ) -> Result<Vec<Triple>, StoreError> {
        if let (Some(lo), Some(hi)) = (lo, hi) {
            if lo > hi {
                return Err(StoreError::InvalidRange {
                    lo: lo.to_string(),
                    hi: hi.to_string(),
                });
            }
        }
        let table = self.table(table)?;
        let tablets = table.tablets.read();
        let mut out = Vec::new();
        // Tablets are disjoint and ordered, so concatenation stays sorted.
        for tablet in tablets.iter().filter(|t| t.overlaps(lo, hi)) {
            out.extend(
                tablet
                    .merged(lo, hi)
                    .into_iter()
                    .map(|((row, col), val)| Triple::new(row, col, val)),
            );
        }
        Ok(out)
    }

    pub fn tablet_summaries(&self, table: &str) -> Result<Vec<TabletSummary>, StoreError> {
        let table = self.table(table)?;
        let tablets = table.tablets.read();
        Ok(tablets
            .iter()
            .enumerate()
            .map(|(index, t)| {
                let data = t.data.lock();
                TabletSummary {
                    index,
                    tablet_id: t.id,
                    low: t.low.clone(),
                    high: t.high.clone(),
                    server: t.server(),
                    inserts_accepted: t.inserts_accepted.load(Ordering::Acquire),
                    memtable_entries: data.memtable_entries,
                    flushed_entries: data.flushed_entries,
                }
            })
            .collect())
    }

    /// Checks that every stored row sits inside its tablet's range.
    pub fn validate_containment(
        &self,
        table: &str,
    ) -> Result<Vec<ContainmentViolation>, StoreError> {
        let table = self.table(table)?;
        let tablets = table.tablets.read();
        let mut violations = Vec::new();
        for (index, tablet) in tablets.iter().enumerate() {
            for row in tablet.stored_rows() {
                if !tablet.contains(&row) {
                    violations.push(ContainmentViolation {
                        tablet_index: index,
                        row,
                    });
                }
            }
        }
        Ok(violations)
    }

    /// Test hook: inserts directly into a tablet's memtable, bypassing
    /// routing, so containment violations can be injected.
    #[doc(hidden)]
    pub fn debug_insert_raw(
        &self,
        table: &str,
        tablet_index: usize,
        triple: Triple,
    ) -> Result<(), StoreError> {
        let table = self.table(table)?;
        let tablets = table.tablets.read();
        let tablet = tablets
            .get(tablet_index)
            .ok_or(StoreError::TabletIndex(tablet_index))?;
        let mut data = tablet.data.lock();
        let prev = data
            .memtable
            .entry(triple.row)
            .or_default()
            .insert(triple.col, triple.val);
        if prev.is_none() {
            data.memtable_entries += 1;
        }
        Ok(())
    }

    /// Appends a point to the cumulative ingest series, stamped with the
    /// simulated clock.
    pub fn record_sample(&self, clock: &SimClock) {
        let cumulative = self
            .servers
            .iter()
            .map(|s| s.counters.inserts_accepted.load(Ordering::Acquire))
            .sum();
        self.samples.lock().push(ThroughputSample {
            elapsed_secs: clock.now(),
            cumulative_inserts: cumulative,
        });
    }

    pub fn snapshot_metrics(&self, clock: &SimClock) -> StoreMetrics {
        let per_server: Vec<_> = self.servers.iter().map(|s| s.counters.snapshot()).collect();
        let samples = self.samples.lock().clone();
        let rate = windowed_rate(&samples, clock.now(), self.config.averaging_window_secs);
        StoreMetrics {
            totals: totals_of(&per_server),
            per_server,
            samples,
            windowed_rate: rate,
        }
    }
}
