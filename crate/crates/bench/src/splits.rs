//! Domain decomposition: where every tablet of the stacked table starts,
//! which server it belongs on, and which worker fills it.

use serde::{Deserialize, Serialize};
use tablestack_assoc::keys;
use tablestack_store::SplitTable;

use crate::config::BenchmarkConfig;
use crate::error::BenchError;

/// One SPMD worker's identity. Workers are identical programs distinguished
/// only by `pid`; everything else derives from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkerIdentity {
    /// Rank in `[0, n_p)`.
    pub pid: usize,
    /// Total workers in the run.
    pub n_p: usize,
    /// Workers per server; server blocks are contiguous pid ranges.
    pub n_ingest: usize,
    pub hostname: String,
}

impl WorkerIdentity {
    pub fn new(pid: usize, n_p: usize, n_ingest: usize) -> WorkerIdentity {
        WorkerIdentity {
            pid,
            n_p,
            n_ingest,
            hostname: format!("server-{}", pid / n_ingest),
        }
    }

    pub fn server_id(&self) -> usize {
        self.pid / self.n_ingest
    }

    /// Rank among the workers sharing this worker's server.
    pub fn local_rank(&self) -> usize {
        self.pid % self.n_ingest
    }
}

/// Plans the stacked table's layout. Tablet `t` covers rows
/// `[t * N, (t + 1) * N)` as fixed-width decimal keys, with split keys at
/// every multiple of `N`, and is intended for server
/// `t / (n_ingest * n_tablet)` — contiguous blocks of tablets per server.
pub fn compute_global_splits(cfg: &BenchmarkConfig) -> SplitTable {
    let tablets = cfg.total_tablets();
    let n = cfg.n_vertices();
    let width = cfg.row_key_width();
    let tablets_per_server = cfg.n_ingest * cfg.n_tablet;
    let splits = (1..tablets)
        .map(|t| {
            let key = keys::encode(t as u64 * n, width).expect("row width covers all rows");
            (key, t / tablets_per_server)
        })
        .collect();
    SplitTable {
        splits,
        first_tablet_server: 0,
    }
}

/// Picks the worker's tablets from a split table: the tablets on its server,
/// in key order, taken round-robin by local rank so the workers sharing a
/// server divide them evenly and disjointly.
pub fn assign_local_splits(
    me: &WorkerIdentity,
    splits: &SplitTable,
    n_ingest: usize,
) -> Result<Vec<usize>, BenchError> {
    let local: Vec<usize> = (0..splits.tablet_count())
        .filter(|&t| splits.tablet_server(t) == me.server_id())
        .collect();
    if local.is_empty() {
        return Err(BenchError::NoLocalTablets(me.server_id()));
    }
    Ok(local
        .into_iter()
        .enumerate()
        .filter(|(position, _)| position % n_ingest == me.local_rank())
        .map(|(_, tablet)| tablet)
        .collect())
}
