//! Scalable power-law graph generation.
//!
//! Edges are drawn by the recursive-quadrant (Kronecker) scheme: each edge
//! makes `scale` quadrant choices with probabilities `(a, b, c, d)`, yielding
//! `N = 2^scale` vertices and `M = edge_factor * N` edges with a heavy-tailed
//! degree distribution. The module also provides degree-distribution
//! analysis used to validate the generated structure, conversion of edge
//! lists into associative arrays, and the plain-text edge-list file format.

pub mod rng;

mod convert;
mod degree;
mod error;
mod io;
mod rmat;

pub use convert::edges_to_assoc;
pub use degree::{degree_distribution, power_law_slope, DegreeStats};
pub use error::GenError;
pub use io::{read_edge_list, write_edge_list};
pub use rmat::{generate, EdgeList, GeneratorConfig, DEFAULT_RMAT_PROBS};
