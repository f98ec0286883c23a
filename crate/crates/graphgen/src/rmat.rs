use rand::Rng;

use crate::error::GenError;
use crate::rng::stream_rng;

/// Default quadrant probabilities `(a, b, c, d)`.
///
/// Strongly diagonal-skewed: across seeds at scale 17 the fitted log-log
/// degree slope of the generated graphs stays near -0.7, the hub/median
/// degree ratio stays in the thousands, and both are stable from scale 14 up.
pub const DEFAULT_RMAT_PROBS: [f64; 4] = [0.78, 0.085, 0.085, 0.05];

/// Keeps `2^scale * edge_factor` comfortably inside addressable memory.
const MAX_SCALE: u32 = 40;

const EDGE_STREAM: u64 = 0;
const PERMUTE_STREAM: u64 = 1;

/// Sizing and shape parameters for one generated graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    /// `N = 2^scale` vertices.
    pub scale: u32,
    /// `M = edge_factor * N` edges.
    pub edge_factor: u32,
    /// Quadrant probabilities `(a, b, c, d)`, summing to 1.
    pub rmat_probs: [f64; 4],
    pub seed: u64,
    /// Relabel vertices with a seed-derived random permutation so the
    /// recursive structure is not visible in id order.
    pub permute_vertices: bool,
    /// Keep edges with identical endpoints; when false, self edges are
    /// redrawn so the edge count stays exact.
    pub keep_self_edges: bool,
}

impl GeneratorConfig {
    pub fn new(scale: u32, seed: u64) -> GeneratorConfig {
        GeneratorConfig {
            scale,
            edge_factor: 8,
            rmat_probs: DEFAULT_RMAT_PROBS,
            seed,
            permute_vertices: true,
            keep_self_edges: true,
        }
    }

    pub fn n_vertices(&self) -> u64 {
        1u64 << self.scale
    }

    pub fn n_edges(&self) -> u64 {
        u64::from(self.edge_factor) * self.n_vertices()
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.scale < 1 || self.scale > MAX_SCALE {
            return Err(GenError::InvalidScale {
                got: self.scale,
                max: MAX_SCALE,
            });
        }
        if self.edge_factor < 1 {
            return Err(GenError::InvalidEdgeFactor);
        }
        let [a, b, c, d] = self.rmat_probs;
        let sum = a + b + c + d;
        if self.rmat_probs.iter().any(|p| !(0.0..=1.0).contains(p)) || (sum - 1.0).abs() > 1e-12 {
            return Err(GenError::InvalidProbabilities(self.rmat_probs));
        }
        if !self.keep_self_edges && b + c == 0.0 {
            return Err(GenError::UndrawableSelfEdges);
        }
        Ok(())
    }
}

/// A generated graph: `edges.len() == edge_factor * n_vertices`, every id in
/// `[0, n_vertices)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeList {
    pub n_vertices: u64,
    pub edges: Vec<(u64, u64)>,
}

/// Draws the full edge list for `cfg`. Deterministic for a fixed config.
pub fn generate(cfg: &GeneratorConfig) -> Result<EdgeList, GenError> {
    cfg.validate()?;
    let n = cfg.n_vertices();
    let m = cfg.n_edges();
    let [a, b, c, _] = cfg.rmat_probs;
    let (t1, t2, t3) = (a, a + b, a + b + c);

    let mut rng = stream_rng(cfg.seed, EDGE_STREAM);
    let mut edges = Vec::with_capacity(m as usize);
    for _ in 0..m {
        loop {
            let mut row = 0u64;
            let mut col = 0u64;
            for _ in 0..cfg.scale {
                let u: f64 = rng.gen();
                let (rbit, cbit) = if u < t1 {
                    (0, 0)
                } else if u < t2 {
                    (0, 1)
                } else if u < t3 {
                    (1, 0)
                } else {
                    (1, 1)
                };
                row = row << 1 | rbit;
                col = col << 1 | cbit;
            }
            if cfg.keep_self_edges || row != col {
                edges.push((row, col));
                break;
            }
        }
    }

    if cfg.permute_vertices {
        let mut prng = stream_rng(cfg.seed, PERMUTE_STREAM);
        let mut perm: Vec<u64> = (0..n).collect();
        for i in (1..perm.len()).rev() {
            let j = prng.gen_range(0..=i);
            perm.swap(i, j);
        }
        for e in &mut edges {
            *e = (perm[e.0 as usize], perm[e.1 as usize]);
        }
    }

    Ok(EdgeList {
        n_vertices: n,
        edges,
    })
}
