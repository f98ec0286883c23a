use std::collections::BTreeMap;

use crate::error::AssocError;
use crate::keys;
use crate::triple::Triple;
use crate::value::{Value, ValueKind};

/// How duplicate `(row, col)` pairs are resolved during construction.
///
/// `KeepLast` mirrors store overwrite semantics; `Sum` mirrors sparse-matrix
/// accumulation and requires numeric values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollisionPolicy {
    KeepLast,
    Sum,
}

/// A sparse 2-D array keyed by sorted, duplicate-free string keys.
///
/// Only non-empty entries are stored: the empty string is the textual empty
/// value and exact zero is the numeric one, so neither ever appears in an
/// array. Key vectors hold exactly the keys used by at least one entry, which
/// makes the representation canonical — two arrays are equal iff they hold the
/// same entries. An array with no entries is the empty array regardless of
/// how it was produced.
///
/// All operations return new arrays and never mutate their inputs. Row
/// selection comes in key, prefix, range, and position forms; the column
/// variants are their compositions with [`AssocArray::transpose`].
#[derive(Debug, Clone, PartialEq)]
pub struct AssocArray {
    rows: Vec<String>,
    cols: Vec<String>,
    // Sorted by (row index, col index); with sorted key vectors this is
    // exactly (row, col) lexicographic order.
    entries: BTreeMap<(usize, usize), Value>,
    kind: ValueKind,
}

impl AssocArray {
    /// The empty array.
    pub fn empty() -> AssocArray {
        AssocArray {
            rows: Vec::new(),
            cols: Vec::new(),
            entries: BTreeMap::new(),
            kind: ValueKind::Numeric,
        }
    }

    /// Builds an array from triples, resolving duplicate `(row, col)` pairs
    /// per `policy`.
    ///
    /// All values must share one kind. With `Sum`, duplicates accumulate and
    /// an accumulation that lands on exact zero is dropped as empty.
    pub fn from_triples(
        triples: &[Triple],
        policy: CollisionPolicy,
    ) -> Result<AssocArray, AssocError> {
        let mut kind: Option<ValueKind> = None;
        for t in triples {
            t.validate()?;
            match kind {
                None => kind = Some(t.val.kind()),
                Some(k) if k != t.val.kind() => return Err(AssocError::MixedValueKinds),
                Some(_) => {}
            }
        }
        if policy == CollisionPolicy::Sum && kind == Some(ValueKind::Textual) {
            return Err(AssocError::SumRequiresNumeric);
        }

        let mut map: BTreeMap<(String, String), Value> = BTreeMap::new();
        for t in triples {
            let key = (t.row.clone(), t.col.clone());
            match policy {
                CollisionPolicy::KeepLast => {
                    map.insert(key, t.val.clone());
                }
                CollisionPolicy::Sum => {
                    let add = t.val.as_num().expect("sum policy is numeric");
                    let acc = map
                        .get(&key)
                        .map(|v| v.as_num().expect("uniform kind"))
                        .unwrap_or(0.0);
                    let sum = acc + add;
                    if !sum.is_finite() {
                        return Err(AssocError::NonFiniteNumber(sum));
                    }
                    if sum == 0.0 {
                        map.remove(&key);
                    } else {
                        map.insert(key, Value::Num(sum));
                    }
                }
            }
        }
        Ok(Self::from_map(map, kind.unwrap_or(ValueKind::Numeric)))
    }

    /// Rebuilds the canonical form from a `(row, col) -> value` map. Callers
    /// guarantee values are valid, non-empty, and uniformly of `kind`.
    pub(crate) fn from_map(
        map: BTreeMap<(String, String), Value>,
        kind: ValueKind,
    ) -> AssocArray {
        if map.is_empty() {
            return AssocArray::empty();
        }
        // Map iteration is (row, col)-sorted, so rows arrive grouped and sorted.
        let mut rows: Vec<String> = map.keys().map(|(r, _)| r.clone()).collect();
        rows.dedup();
        let mut cols: Vec<String> = map.keys().map(|(_, c)| c.clone()).collect();
        cols.sort();
        cols.dedup();

        let mut entries = BTreeMap::new();
        for ((r, c), v) in map {
            let ri = rows.binary_search(&r).expect("row key present");
            let ci = cols.binary_search(&c).expect("col key present");
            entries.insert((ri, ci), v);
        }
        AssocArray {
            rows,
            cols,
            entries,
            kind,
        }
    }

    pub fn row_keys(&self) -> &[String] {
        &self.rows
    }

    pub fn col_keys(&self) -> &[String] {
        &self.cols
    }

    pub fn value_kind(&self) -> ValueKind {
        self.kind
    }

    /// Number of stored (non-empty) entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, row: &str, col: &str) -> Option<&Value> {
        let ri = self.rows.binary_search_by(|k| k.as_str().cmp(row)).ok()?;
        let ci = self.cols.binary_search_by(|k| k.as_str().cmp(col)).ok()?;
        self.entries.get(&(ri, ci))
    }

    /// Entries in `(row, col)` order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, &Value)> {
        self.entries
            .iter()
            .map(move |(&(ri, ci), v)| (self.rows[ri].as_str(), self.cols[ci].as_str(), v))
    }

    /// The triple-store view of the array, sorted by `(row, col)`.
    pub fn to_triples(&self) -> Vec<Triple> {
        self.iter()
            .map(|(r, c, v)| Triple::new(r, c, v.clone()))
            .collect()
    }

    fn retain_rows(&self, mut keep: impl FnMut(&str) -> bool) -> AssocArray {
        let map = self
            .iter()
            .filter(|(r, _, _)| keep(r))
            .map(|(r, c, v)| ((r.to_string(), c.to_string()), v.clone()))
            .collect();
        Self::from_map(map, self.kind)
    }

    /// Sub-array of the listed rows. Keys that do not exist are silently
    /// ignored; column keys are rebuilt from the surviving entries.
    pub fn rows_by_keys<S: AsRef<str>>(&self, keys: &[S]) -> AssocArray {
        let wanted: std::collections::BTreeSet<&str> = keys.iter().map(|k| k.as_ref()).collect();
        self.retain_rows(|r| wanted.contains(r))
    }

    /// Sub-array of the rows whose key starts with `prefix`. The empty prefix
    /// selects every row.
    pub fn rows_by_prefix(&self, prefix: &str) -> AssocArray {
        self.retain_rows(|r| r.starts_with(prefix))
    }

    /// Sub-array of the rows with `lo <= key <= hi` (inclusive both ends).
    pub fn rows_by_range(&self, lo: &str, hi: &str) -> Result<AssocArray, AssocError> {
        if lo > hi {
            return Err(AssocError::InvalidRange {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(self.retain_rows(|r| lo <= r && r <= hi))
    }

    /// Sub-array of the rows at 1-based positions `start..=stop` in sorted
    /// row-key order. Positions past the last row are ignored.
    pub fn rows_by_position(&self, start: usize, stop: usize) -> Result<AssocArray, AssocError> {
        if start < 1 || start > stop {
            return Err(AssocError::InvalidPosition { start, stop });
        }
        let selected: std::collections::BTreeSet<&str> = self
            .rows
            .iter()
            .skip(start - 1)
            .take(stop - start + 1)
            .map(|s| s.as_str())
            .collect();
        Ok(self.retain_rows(|r| selected.contains(r)))
    }

    /// Entries whose value equals `v` exactly. A kind mismatch yields the
    /// empty array.
    pub fn filter_value(&self, v: &Value) -> AssocArray {
        if self.is_empty() || v.kind() != self.kind {
            return AssocArray::empty();
        }
        let map = self
            .iter()
            .filter(|(_, _, val)| *val == v)
            .map(|(r, c, val)| ((r.to_string(), c.to_string()), val.clone()))
            .collect();
        Self::from_map(map, self.kind)
    }

    /// Re-keys every row from `k` to `parse(k) + offset`, zero-padded to
    /// exactly `width` digits. Values and column keys are unchanged.
    ///
    /// Every row key must already be an unsigned decimal integer, and every
    /// shifted key must fit in `width` digits.
    pub fn apply_row_offset(&self, offset: u64, width: usize) -> Result<AssocArray, AssocError> {
        let mut renamed: BTreeMap<String, String> = BTreeMap::new();
        for row in &self.rows {
            let id = keys::decode(row)?;
            let shifted = id
                .checked_add(offset)
                .ok_or(AssocError::KeyWidthOverflow {
                    value: u64::MAX,
                    width,
                })?;
            renamed.insert(row.clone(), keys::encode(shifted, width)?);
        }
        let map = self
            .iter()
            .map(|(r, c, v)| ((renamed[r].clone(), c.to_string()), v.clone()))
            .collect();
        Ok(Self::from_map(map, self.kind))
    }

    /// Checks every representation invariant; used by tests.
    pub fn validate(&self) -> Result<(), AssocError> {
        let sorted_unique =
            |ks: &[String]| ks.windows(2).all(|w| w[0] < w[1]) && !ks.iter().any(|k| k.is_empty());
        if !sorted_unique(&self.rows) || !sorted_unique(&self.cols) {
            return Err(AssocError::MalformedTriple {
                line: 0,
                reason: "key vectors must be sorted, unique, and non-empty".into(),
            });
        }
        if self.entries.is_empty()
            && (!self.rows.is_empty() || !self.cols.is_empty() || self.kind != ValueKind::Numeric)
        {
            return Err(AssocError::MalformedTriple {
                line: 0,
                reason: "empty array must have no keys and numeric kind".into(),
            });
        }
        let mut used_rows = vec![false; self.rows.len()];
        let mut used_cols = vec![false; self.cols.len()];
        for (&(ri, ci), v) in &self.entries {
            if ri >= self.rows.len() || ci >= self.cols.len() {
                return Err(AssocError::MalformedTriple {
                    line: 0,
                    reason: "entry index out of range".into(),
                });
            }
            used_rows[ri] = true;
            used_cols[ci] = true;
            v.validate()?;
            if v.kind() != self.kind {
                return Err(AssocError::MixedValueKinds);
            }
        }
        if !(used_rows.into_iter().all(|u| u) && used_cols.into_iter().all(|u| u)) {
            return Err(AssocError::MalformedTriple {
                line: 0,
                reason: "unused key in key vector".into(),
            });
        }
        Ok(())
    }
}
