//! Array algebra: element-wise sums, sparsity-pattern logic, matrix product,
//! and the one-step neighbor expansion built on it.
//!
//! Textual arrays participate through their numeric projection (every stored
//! text becomes the number 1), which matches the adjacency-matrix reading of
//! a textual edge table. Results that compute to exact zero are dropped, so
//! every result is again a well-formed sparse array.

use std::collections::{BTreeMap, HashMap};

use crate::array::AssocArray;
use crate::value::{Value, ValueKind};

/// Row key of the indicator vector produced by [`AssocArray::bfs_step`].
const FRONTIER_ROW: &str = "frontier";

fn assert_finite(x: f64) -> f64 {
    assert!(x.is_finite(), "numeric overflow in associative-array algebra");
    x
}

impl AssocArray {
    /// Replaces every textual value with numeric 1; numeric arrays come back
    /// unchanged.
    pub fn numeric_projection(&self) -> AssocArray {
        if self.value_kind() == ValueKind::Numeric {
            return self.clone();
        }
        let map = self
            .iter()
            .map(|(r, c, _)| ((r.to_string(), c.to_string()), Value::one()))
            .collect();
        AssocArray::from_map(map, ValueKind::Numeric)
    }

    fn merge_numeric(&self, other: &AssocArray, sign: f64) -> AssocArray {
        let a = self.numeric_projection();
        let b = other.numeric_projection();
        let mut acc: BTreeMap<(String, String), f64> = BTreeMap::new();
        for (r, c, v) in a.iter() {
            acc.insert((r.to_string(), c.to_string()), v.as_num().unwrap());
        }
        for (r, c, v) in b.iter() {
            let slot = acc.entry((r.to_string(), c.to_string())).or_insert(0.0);
            *slot = assert_finite(*slot + sign * v.as_num().unwrap());
        }
        let map = acc
            .into_iter()
            .filter(|(_, v)| *v != 0.0)
            .map(|(k, v)| (k, Value::Num(v)))
            .collect();
        AssocArray::from_map(map, ValueKind::Numeric)
    }

    /// Key-union element-wise sum. Textual inputs are projected first;
    /// entries that sum to exact zero are dropped.
    pub fn add(&self, other: &AssocArray) -> AssocArray {
        self.merge_numeric(other, 1.0)
    }

    /// Key-union element-wise difference; `a.sub(a)` is the empty array.
    pub fn sub(&self, other: &AssocArray) -> AssocArray {
        self.merge_numeric(other, -1.0)
    }

    /// Sparsity-pattern intersection: keys present in both arrays, all values
    /// numeric 1.
    pub fn and(&self, other: &AssocArray) -> AssocArray {
        let map = self
            .iter()
            .filter(|(r, c, _)| other.get(r, c).is_some())
            .map(|(r, c, _)| ((r.to_string(), c.to_string()), Value::one()))
            .collect();
        AssocArray::from_map(map, ValueKind::Numeric)
    }

    /// Sparsity-pattern union: keys present in either array, all values
    /// numeric 1.
    pub fn or(&self, other: &AssocArray) -> AssocArray {
        let map = self
            .iter()
            .chain(other.iter())
            .map(|(r, c, _)| ((r.to_string(), c.to_string()), Value::one()))
            .collect();
        AssocArray::from_map(map, ValueKind::Numeric)
    }

    /// Sparse matrix product: `C(i,j) = sum_k A(i,k) * B(k,j)`, where `k`
    /// ranges over exact string matches between `A`'s column keys and `B`'s
    /// row keys. Textual inputs are projected; exact-zero sums are dropped.
    pub fn matmul(&self, other: &AssocArray) -> AssocArray {
        let a = self.numeric_projection();
        let b = other.numeric_projection();

        let mut b_rows: HashMap<&str, Vec<(&str, f64)>> = HashMap::new();
        for (r, c, v) in b.iter() {
            b_rows.entry(r).or_default().push((c, v.as_num().unwrap()));
        }

        let mut acc: BTreeMap<(String, String), f64> = BTreeMap::new();
        for (r, k, v) in a.iter() {
            let Some(matches) = b_rows.get(k) else {
                continue;
            };
            let va = v.as_num().unwrap();
            for (c, vb) in matches {
                let slot = acc.entry((r.to_string(), c.to_string())).or_insert(0.0);
                *slot = assert_finite(*slot + va * vb);
            }
        }
        let map = acc
            .into_iter()
            .filter(|(_, v)| *v != 0.0)
            .map(|(k, v)| (k, Value::Num(v)))
            .collect();
        AssocArray::from_map(map, ValueKind::Numeric)
    }

    /// Swaps the row and column axes; an involution.
    pub fn transpose(&self) -> AssocArray {
        let map = self
            .iter()
            .map(|(r, c, v)| ((c.to_string(), r.to_string()), v.clone()))
            .collect();
        AssocArray::from_map(map, self.value_kind())
    }

    /// One breadth-first expansion: treating rows as source vertices and
    /// columns as destinations, returns a single-row array whose column keys
    /// are the vertices reachable from `frontier`.
    ///
    /// Computed as `indicator * numeric_projection(self)` with an indicator
    /// row vector over the frontier keys; the result's row key is
    /// `"frontier"`. On an adjacency array (all entries 1, as textual arrays
    /// project to) the values count each neighbor's in-frontier predecessors;
    /// other numeric arrays yield weighted sums instead.
    pub fn bfs_step<S: AsRef<str>>(&self, frontier: &[S]) -> AssocArray {
        let map: BTreeMap<(String, String), Value> = frontier
            .iter()
            .map(|k| k.as_ref())
            .filter(|k| !k.is_empty())
            .map(|k| ((FRONTIER_ROW.to_string(), k.to_string()), Value::one()))
            .collect();
        let indicator = AssocArray::from_map(map, ValueKind::Numeric);
        indicator.matmul(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::CollisionPolicy;
    use crate::triple::Triple;

    fn num(triples: &[(&str, &str, f64)]) -> AssocArray {
        let ts: Vec<Triple> = triples
            .iter()
            .map(|(r, c, v)| Triple::new(*r, *c, Value::num(*v)))
            .collect();
        AssocArray::from_triples(&ts, CollisionPolicy::KeepLast).unwrap()
    }

    fn text(triples: &[(&str, &str, &str)]) -> AssocArray {
        let ts: Vec<Triple> = triples
            .iter()
            .map(|(r, c, v)| Triple::new(*r, *c, Value::text(*v)))
            .collect();
        AssocArray::from_triples(&ts, CollisionPolicy::KeepLast).unwrap()
    }

    #[test]
    fn numeric_projection_maps_text_to_one() {
        let a = text(&[("alice", "bob", "cited")]);
        let p = a.numeric_projection();
        assert_eq!(p.get("alice", "bob"), Some(&Value::one()));
        assert_eq!(p.nnz(), a.nnz());
        let n = num(&[("a", "x", 2.5)]);
        assert_eq!(n.numeric_projection(), n);
    }

    #[test]
    fn add_identity_and_overlap() {
        let a = num(&[("a", "x", 2.0)]);
        let b = num(&[("a", "x", 3.0)]);
        assert_eq!(a.add(&AssocArray::empty()), a);
        assert_eq!(a.add(&b).get("a", "x"), Some(&Value::num(5.0)));
    }

    #[test]
    fn sub_self_is_empty() {
        let a = num(&[("a", "x", 2.0), ("b", "y", 7.0)]);
        assert!(a.sub(&a).is_empty());
    }

    #[test]
    fn and_or_pattern_semantics() {
        let a = num(&[("a", "x", 5.0), ("b", "y", 2.0)]);
        let same = a.and(&a);
        assert_eq!(same.nnz(), a.nnz());
        assert!(same.iter().all(|(_, _, v)| *v == Value::one()));
        assert_eq!(a.or(&AssocArray::empty()).nnz(), a.nnz());

        let b = num(&[("c", "z", 1.0)]);
        assert!(a.and(&b).is_empty());
        assert_eq!(a.or(&b).nnz(), a.nnz() + b.nnz());
    }

    #[test]
    fn matmul_hand_computed_product() {
        let a = num(&[("a", "x", 1.0), ("a", "y", 1.0)]);
        let b = num(&[("x", "b", 1.0), ("y", "b", 1.0)]);
        let c = a.matmul(&b);
        assert_eq!(c.get("a", "b"), Some(&Value::num(2.0)));
        assert_eq!(c.nnz(), 1);
        assert!(a.matmul(&AssocArray::empty()).is_empty());
    }

    #[test]
    fn matmul_drops_exact_zero_sums() {
        let a = num(&[("r", "x", 1.0), ("r", "y", -1.0)]);
        let b = num(&[("x", "c", 1.0), ("y", "c", 1.0)]);
        assert!(a.matmul(&b).is_empty());
    }

    #[test]
    fn transpose_swaps_and_involutes() {
        let a = num(&[("alice", "bob", 1.0)]);
        let t = a.transpose();
        assert_eq!(t.get("bob", "alice"), Some(&Value::one()));
        assert!(AssocArray::empty().transpose().is_empty());
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn bfs_step_finds_neighbors() {
        // alice -> bob, alice -> carl: one hop from alice reaches both.
        let g = text(&[("alice", "bob", "friend"), ("alice", "carl", "friend")]);
        let step = g.bfs_step(&["alice"]);
        assert_eq!(step.row_keys(), &["frontier".to_string()]);
        assert_eq!(
            step.col_keys(),
            &["bob".to_string(), "carl".to_string()]
        );
        assert!(g.bfs_step::<&str>(&[]).is_empty());
    }

    #[test]
    fn bfs_step_counts_predecessors() {
        let g = num(&[("a", "t", 1.0), ("b", "t", 1.0), ("b", "u", 1.0)]);
        let step = g.bfs_step(&["a", "b"]);
        assert_eq!(step.get("frontier", "t"), Some(&Value::num(2.0)));
        assert_eq!(step.get("frontier", "u"), Some(&Value::num(1.0)));
    }

    #[test]
    fn algebra_results_are_well_formed() {
        let a = text(&[("alice", "bob", "cited"), ("bob", "carl", "knows")]);
        let b = num(&[("bob", "carl", 4.0), ("carl", "alice", 2.0)]);
        for result in [
            a.add(&b),
            a.sub(&b),
            a.and(&b),
            a.or(&b),
            a.matmul(&b),
            a.transpose(),
            a.numeric_projection(),
            a.bfs_step(&["alice", "bob"]),
        ] {
            result.validate().unwrap();
        }
    }
}
