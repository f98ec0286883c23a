use tablestack_assoc::{keys, AssocArray, CollisionPolicy, Triple, Value};

use crate::error::GenError;
use crate::rmat::EdgeList;

/// Adjacency-array view of an edge list: `A(pad(i), pad(j)) = 1` for every
/// edge, with both ids zero-padded to exactly `key_width` digits. Duplicate
/// edges collapse to a single entry.
pub fn edges_to_assoc(e: &EdgeList, key_width: usize) -> Result<AssocArray, GenError> {
    let max_id = e.n_vertices.saturating_sub(1);
    if keys::decimal_width(max_id) > key_width {
        return Err(GenError::KeyWidthTooSmall {
            width: key_width,
            max_id,
        });
    }
    let triples: Vec<Triple> = e
        .edges
        .iter()
        .map(|&(s, t)| {
            Ok(Triple::new(
                keys::encode(s, key_width)?,
                keys::encode(t, key_width)?,
                Value::one(),
            ))
        })
        .collect::<Result<_, GenError>>()?;
    Ok(AssocArray::from_triples(&triples, CollisionPolicy::KeepLast)?)
}
