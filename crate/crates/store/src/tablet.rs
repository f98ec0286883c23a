use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};

use parking_lot::Mutex;
use tablestack_assoc::{Triple, Value};

/// One contiguous row range of a table, homed on a single server.
///
/// Bounds are immutable; splitting replaces the tablet with two new ones.
/// The server assignment is atomic so the balancer can re-home a tablet
/// between blocks without taking the data lock.
#[derive(Debug)]
pub(crate) struct Tablet {
    pub id: u64,
    /// Inclusive low bound; `None` is unbounded below.
    pub low: Option<String>,
    /// Exclusive high bound; `None` is unbounded above.
    pub high: Option<String>,
    server: AtomicUsize,
    pub inserts_accepted: AtomicU64,
    pub pending_compaction: AtomicBool,
    pub data: Mutex<TabletData>,
}

/// Mutable storage: an in-memory sorted map plus immutable flushed runs,
/// oldest first.
#[derive(Debug, Default)]
pub(crate) struct TabletData {
    pub memtable: BTreeMap<String, BTreeMap<String, Value>>,
    pub memtable_entries: usize,
    pub flushed: Vec<Vec<Triple>>,
    pub flushed_entries: usize,
}

impl Tablet {
    pub fn new(id: u64, low: Option<String>, high: Option<String>, server: usize) -> Tablet {
        Tablet {
            id,
            low,
            high,
            server: AtomicUsize::new(server),
            inserts_accepted: AtomicU64::new(0),
            pending_compaction: AtomicBool::new(false),
            data: Mutex::new(TabletData::default()),
        }
    }

    pub fn server(&self) -> usize {
        self.server.load(Ordering::Acquire)
    }

    pub fn set_server(&self, server: usize) {
        self.server.store(server, Ordering::Release);
    }

    pub fn contains(&self, row: &str) -> bool {
        self.low.as_deref().map_or(true, |l| l <= row)
            && self.high.as_deref().map_or(true, |h| row < h)
    }

    /// True if this tablet's range intersects `[lo, hi)` (`None` unbounded).
    pub fn overlaps(&self, lo: Option<&str>, hi: Option<&str>) -> bool {
        let above_lo = match (lo, self.high.as_deref()) {
            (Some(lo), Some(high)) => lo < high,
            _ => true,
        };
        let below_hi = match (hi, self.low.as_deref()) {
            (Some(hi), Some(low)) => low < hi,
            _ => true,
        };
        above_lo && below_hi
    }

    /// Applies triples last-write-wins into the memtable. Callers have
    /// already routed: every row must be inside this tablet's range.
    pub fn apply(&self, triples: &[&Triple]) {
        let mut data = self.data.lock();
        for t in triples {
            debug_assert!(self.contains(&t.row));
            let prev = data
                .memtable
                .entry(t.row.clone())
                .or_default()
                .insert(t.col.clone(), t.val.clone());
            if prev.is_none() {
                data.memtable_entries += 1;
            }
        }
        self.inserts_accepted
            .fetch_add(triples.len() as u64, Ordering::AcqRel);
    }

    /// Freezes the memtable into a new immutable sorted run. Returns the
    /// number of entries flushed (zero if the memtable was already empty).
    pub fn flush(&self) -> usize {
        let mut data = self.data.lock();
        if data.memtable_entries == 0 {
            return 0;
        }
        let memtable = std::mem::take(&mut data.memtable);
        let run: Vec<Triple> = memtable
            .into_iter()
            .flat_map(|(row, cols)| {
                cols.into_iter()
                    .map(move |(col, val)| Triple::new(row.clone(), col, val))
            })
            .collect();
        let count = run.len();
        data.memtable_entries = 0;
        data.flushed_entries += count;
        data.flushed.push(run);
        count
    }

    /// Newest-wins merged view of the runs and the memtable, restricted to
    /// rows in `[lo, hi)`.
    pub fn merged(&self, lo: Option<&str>, hi: Option<&str>) -> BTreeMap<(String, String), Value> {
        let in_range =
            |row: &str| lo.map_or(true, |l| l <= row) && hi.map_or(true, |h| row < h);
        let data = self.data.lock();
        let mut merged = BTreeMap::new();
        for run in &data.flushed {
            for t in run {
                if in_range(&t.row) {
                    merged.insert((t.row.clone(), t.col.clone()), t.val.clone());
                }
            }
        }
        for (row, cols) in &data.memtable {
            if in_range(row) {
                for (col, val) in cols {
                    merged.insert((row.clone(), col.clone()), val.clone());
                }
            }
        }
        merged
    }

    /// Every row key currently stored, including flushed runs.
    pub fn stored_rows(&self) -> Vec<String> {
        let data = self.data.lock();
        let mut rows: Vec<String> = data.memtable.keys().cloned().collect();
        rows.extend(
            data.flushed
                .iter()
                .flat_map(|run| run.iter().map(|t| t.row.clone())),
        );
        rows.sort();
        rows.dedup();
        rows
    }
}
