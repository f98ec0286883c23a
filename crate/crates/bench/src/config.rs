use serde::{Deserialize, Serialize};
use tablestack_assoc::keys;
use tablestack_graphgen::{rng, GeneratorConfig};
use tablestack_store::StoreConfig;

use crate::error::BenchError;

/// Full description of one benchmark run.
///
/// The table is `n_server * n_ingest * n_tablet` stacked base graphs: each of
/// the `n_server * n_ingest` workers owns `n_tablet` tablets and fills each
/// with one re-keyed copy of its base graph, so the planned work per worker
/// is constant no matter how many servers or workers a run uses.
///
/// Serialized form is flat JSON: the store knobs live at the top level next
/// to the benchmark fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchmarkConfig {
    pub n_server: usize,
    /// Ingest workers per server.
    pub n_ingest: usize,
    /// Tablets owned by each worker.
    pub n_tablet: usize,
    /// Base graph size: `2^scale` vertices, `8 * 2^scale` edges.
    pub scale: u32,
    pub seed: u64,
    /// Informational target duration recorded with reports; desk-scale runs
    /// finish when their fixed volume is ingested.
    pub run_seconds: f64,
    #[serde(flatten)]
    pub store: StoreConfig,
}

impl Default for BenchmarkConfig {
    fn default() -> BenchmarkConfig {
        BenchmarkConfig {
            n_server: 1,
            n_ingest: 1,
            n_tablet: 32,
            scale: 10,
            seed: 1,
            run_seconds: 300.0,
            // The ingest recipe runs with the write-ahead log off and the
            // per-server minor-compaction cap raised to 5; both are applied
            // through the option strings during setup.
            store: StoreConfig {
                walog_enabled: false,
                max_concurrent_minor_compactions: 5,
                ..StoreConfig::default()
            },
        }
    }
}

impl BenchmarkConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.n_server == 0 || self.n_ingest == 0 || self.n_tablet == 0 {
            return Err(BenchError::InvalidConfig(
                "n_server, n_ingest, and n_tablet must be positive".into(),
            ));
        }
        if self.scale == 0 {
            return Err(BenchError::InvalidConfig("scale must be positive".into()));
        }
        if !(self.run_seconds > 0.0) {
            return Err(BenchError::InvalidConfig("run_seconds must be positive".into()));
        }
        self.generator_config(0).validate()?;
        self.store.validate()?;
        Ok(())
    }

    /// `N`: vertices per base graph.
    pub fn n_vertices(&self) -> u64 {
        1u64 << self.scale
    }

    /// `M`: edges per base graph, eight per vertex.
    pub fn edges_per_graph(&self) -> u64 {
        8 * self.n_vertices()
    }

    /// `N_p`: total concurrent workers.
    pub fn n_workers(&self) -> usize {
        self.n_server * self.n_ingest
    }

    pub fn total_tablets(&self) -> usize {
        self.n_server * self.n_ingest * self.n_tablet
    }

    /// Total rows of the stacked table.
    pub fn n_rows(&self) -> u64 {
        self.total_tablets() as u64 * self.n_vertices()
    }

    /// Inserts the whole run will issue: one per edge per stacked graph.
    pub fn planned_entries(&self) -> u64 {
        self.total_tablets() as u64 * self.edges_per_graph()
    }

    /// Width of row keys: every row id of the stacked table fits, so
    /// lexicographic order equals numeric order.
    pub fn row_key_width(&self) -> usize {
        keys::decimal_width(self.n_rows() - 1)
    }

    /// Width of column keys, covering one base graph's vertex ids.
    pub fn col_key_width(&self) -> usize {
        keys::decimal_width(self.n_vertices() - 1)
    }

    /// Generator config for one worker: same shape, worker-derived seed.
    pub fn generator_config(&self, pid: usize) -> GeneratorConfig {
        GeneratorConfig::new(self.scale, rng::derive_seed(self.seed, pid as u64))
    }
}
