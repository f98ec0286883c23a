use std::fs;
use std::path::Path;

use crate::error::StoreError;

/// Ordered tablet boundaries of one table plus tablet-to-server placement.
///
/// A split key is the inclusive low bound of the tablet that starts there;
/// tablet 0 is unbounded below. A table with `k` splits has `k + 1` tablets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitTable {
    /// `(split row key, server of the tablet starting at that key)`, with
    /// strictly increasing keys.
    pub splits: Vec<(String, usize)>,
    /// Placement of the unbounded first tablet.
    pub first_tablet_server: usize,
}

impl SplitTable {
    pub fn tablet_count(&self) -> usize {
        self.splits.len() + 1
    }

    /// Server of tablet `index` in key order (0 is the first tablet).
    pub fn tablet_server(&self, index: usize) -> usize {
        if index == 0 {
            self.first_tablet_server
        } else {
            self.splits[index - 1].1
        }
    }

    /// Inclusive low bound of tablet `index`; `None` for the first tablet.
    pub fn tablet_low(&self, index: usize) -> Option<&str> {
        if index == 0 {
            None
        } else {
            Some(self.splits[index - 1].0.as_str())
        }
    }

    /// Exclusive high bound of tablet `index`; `None` for the last tablet.
    pub fn tablet_high(&self, index: usize) -> Option<&str> {
        self.splits.get(index).map(|(k, _)| k.as_str())
    }

    pub fn validate(&self) -> Result<(), StoreError> {
        for w in self.splits.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(StoreError::InvalidSplits(format!(
                    "split keys must be strictly increasing ({:?} before {:?})",
                    w[0].0, w[1].0
                )));
            }
        }
        if self.splits.iter().any(|(k, _)| k.is_empty()) {
            return Err(StoreError::InvalidSplits("empty split key".into()));
        }
        Ok(())
    }

    /// Serializes to the split file format: one `key<TAB>server` line per
    /// boundary in key order, then a `#first_tablet<TAB>server` line for the
    /// unbounded first tablet.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for (key, server) in &self.splits {
            out.push_str(key);
            out.push('\t');
            out.push_str(&server.to_string());
            out.push('\n');
        }
        out.push_str(&format!("#first_tablet\t{}\n", self.first_tablet_server));
        out
    }

    pub fn parse(text: &str) -> Result<SplitTable, StoreError> {
        let mut splits = Vec::new();
        let mut first_tablet_server = None;
        for (idx, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let err = |reason: &str| StoreError::SplitFileFormat {
                line: idx + 1,
                reason: reason.to_string(),
            };
            let (key, server) = line.split_once('\t').ok_or_else(|| err("missing tab"))?;
            let server: usize = server.parse().map_err(|_| err("bad server id"))?;
            if key == "#first_tablet" {
                if first_tablet_server.replace(server).is_some() {
                    return Err(err("duplicate #first_tablet line"));
                }
            } else {
                if first_tablet_server.is_some() {
                    return Err(err("boundary line after #first_tablet"));
                }
                splits.push((key.to_string(), server));
            }
        }
        let first_tablet_server = first_tablet_server.ok_or(StoreError::SplitFileFormat {
            line: 0,
            reason: "missing #first_tablet line".to_string(),
        })?;
        let table = SplitTable {
            splits,
            first_tablet_server,
        };
        table.validate()?;
        Ok(table)
    }

    pub fn write_file(&self, path: &Path) -> Result<(), StoreError> {
        fs::write(path, self.to_file_string())?;
        Ok(())
    }

    pub fn read_file(path: &Path) -> Result<SplitTable, StoreError> {
        SplitTable::parse(&fs::read_to_string(path)?)
    }
}
