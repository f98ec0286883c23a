//! Post-run verification: exact per-tablet insert counts, exact distinct-key
//! contents against the re-derived offset graphs, and range containment.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;
use tablestack_assoc::Value;
use tablestack_graphgen::{edges_to_assoc, generate};
use tablestack_store::TabletStore;

use crate::config::BenchmarkConfig;
use crate::error::BenchError;
use crate::splits::{assign_local_splits, WorkerIdentity};

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }
}

fn check(name: &str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Re-derives every worker's graphs deterministically and checks the store
/// against them: (a) every tablet accepted exactly `M` inserts, (b) every
/// tablet's distinct keys are exactly its offset base graph with value 1,
/// (c) no stored key sits outside its tablet's range.
pub fn verify_ingest(
    store: &Arc<TabletStore>,
    table: &str,
    cfg: &BenchmarkConfig,
) -> Result<VerificationReport, BenchError> {
    let mut checks = Vec::new();
    let m = cfg.edges_per_graph();
    let summaries = store.tablet_summaries(table)?;

    // (a) Perfect balance: every tablet accepted exactly M inserts.
    let off = summaries
        .iter()
        .find(|s| s.inserts_accepted != m);
    checks.push(match off {
        None => check(
            "tablet_insert_counts",
            true,
            format!("{} tablets, {} inserts each", summaries.len(), m),
        ),
        Some(s) => check(
            "tablet_insert_counts",
            false,
            format!(
                "tablet {} accepted {} inserts, expected {}",
                s.index, s.inserts_accepted, m
            ),
        ),
    });

    // (b) Distinct keys per tablet equal the offset base graph exactly.
    let splits = store.get_split_locations(table)?;
    let n = cfg.n_vertices();
    let row_width = cfg.row_key_width();
    let mut contents = check("tablet_distinct_keys", true, String::new());
    let mut tablets_checked = 0usize;
    'outer: for pid in 0..cfg.n_workers() {
        let me = WorkerIdentity::new(pid, cfg.n_workers(), cfg.n_ingest);
        let mine = assign_local_splits(&me, &splits, cfg.n_ingest)?;
        let edges = generate(&cfg.generator_config(pid))?;
        let base = edges_to_assoc(&edges, cfg.col_key_width())?;
        for tablet in mine {
            let offset = tablet as u64 * n;
            let expected: BTreeSet<(String, String)> = base
                .apply_row_offset(offset, row_width)?
                .iter()
                .map(|(r, c, _)| (r.to_string(), c.to_string()))
                .collect();
            let scanned = store.scan(
                table,
                splits.tablet_low(tablet),
                splits.tablet_high(tablet),
            )?;
            let mut got = BTreeSet::new();
            for t in &scanned {
                if t.val != Value::one() {
                    contents = check(
                        "tablet_distinct_keys",
                        false,
                        format!("tablet {tablet} holds a value other than 1"),
                    );
                    break 'outer;
                }
                got.insert((t.row.clone(), t.col.clone()));
            }
            if got != expected {
                contents = check(
                    "tablet_distinct_keys",
                    false,
                    format!(
                        "tablet {tablet}: {} distinct keys stored, {} expected",
                        got.len(),
                        expected.len()
                    ),
                );
                break 'outer;
            }
            tablets_checked += 1;
        }
    }
    if contents.passed {
        contents.detail = format!("{tablets_checked} tablets match their offset graphs");
    }
    checks.push(contents);

    // (c) Containment: nothing stored outside its tablet's range.
    let violations = store.validate_containment(table)?;
    checks.push(match violations.first() {
        None => check("containment", true, "no key outside its tablet range".into()),
        Some(v) => check(
            "containment",
            false,
            format!("tablet {} holds stray row {:?}", v.tablet_index, v.row),
        ),
    });

    Ok(VerificationReport { checks })
}
