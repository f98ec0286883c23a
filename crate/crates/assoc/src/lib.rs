//! Sparse two-dimensional associative arrays keyed by strings.
//!
//! An [`AssocArray`] maps pairs of string keys to values, stores only the
//! non-empty entries, and keeps both key axes sorted and duplicate-free.
//! Every query and algebraic operation returns a new associative array, so
//! operations compose: selecting rows of a product of two arrays is as
//! well-formed as the product itself.
//!
//! Arrays are immutable after construction and safe to share across threads.

pub mod keys;

mod algebra;
mod array;
mod error;
mod triple;
mod value;

pub use array::{AssocArray, CollisionPolicy};
pub use error::AssocError;
pub use triple::{read_triples, triples_to_string, write_triples, Triple};
pub use value::{Value, ValueKind};
