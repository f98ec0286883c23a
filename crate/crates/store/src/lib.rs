//! An in-process simulation of a multi-server, range-partitioned, sorted
//! key-value store.
//!
//! Tables are split into tablets, each covering a contiguous block of rows
//! and homed on one of `n_servers` in-process shards. The pieces a bulk
//! ingest benchmark exercises are modeled faithfully: pre-splitting, a
//! rate-limited balancer, block-buffered batch writers, bounded concurrent
//! minor compactions, and a write-ahead-log cost toggle.
//!
//! Two time domains coexist. Balancer work is accounted on a [`SimClock`]
//! (no real waiting, so huge split counts balance in microseconds of wall
//! time), while the ingest path paces real threads: applying a block holds
//! its server's service line for a duration proportional to the block's
//! bytes, so measured ingest throughput reflects the simulated store's
//! per-server capacity rather than host scheduling.

mod clock;
mod config;
mod error;
mod metrics;
mod split;
mod store;
mod tablet;
mod writer;

pub use clock::SimClock;
pub use config::{StoreConfig, OPT_MAX_MINOR_COMPACTIONS, OPT_WALOG_ENABLED};
pub use error::StoreError;
pub use metrics::{windowed_rate, ServerMetrics, StoreMetrics, ThroughputSample};
pub use split::SplitTable;
pub use store::{ContainmentViolation, TabletStore, TabletSummary};
pub use writer::BatchWriter;
