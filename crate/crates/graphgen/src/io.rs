//! Edge-list text format: a `N M` header line, then one `start end` pair per
//! line, all decimal.

use std::io::{BufRead, Write};

use crate::error::GenError;
use crate::rmat::EdgeList;

pub fn write_edge_list<W: Write>(out: &mut W, e: &EdgeList) -> Result<(), GenError> {
    writeln!(out, "{} {}", e.n_vertices, e.edges.len())?;
    for &(s, t) in &e.edges {
        writeln!(out, "{s} {t}")?;
    }
    Ok(())
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<EdgeList, GenError> {
    let malformed = |line: usize, reason: &str| GenError::MalformedEdgeList {
        line,
        reason: reason.to_string(),
    };
    let mut lines = input.lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| malformed(1, "missing `N M` header"))?;
    let header = header?;
    let mut parts = header.split_ascii_whitespace();
    let (n, m) = match (parts.next(), parts.next(), parts.next()) {
        (Some(n), Some(m), None) => (
            n.parse::<u64>().map_err(|_| malformed(1, "bad N"))?,
            m.parse::<u64>().map_err(|_| malformed(1, "bad M"))?,
        ),
        _ => return Err(malformed(1, "header must be `N M`")),
    };

    let mut edges = Vec::with_capacity(m as usize);
    for (idx, line) in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_ascii_whitespace();
        let (s, t) = match (parts.next(), parts.next(), parts.next()) {
            (Some(s), Some(t), None) => (
                s.parse::<u64>().map_err(|_| malformed(idx + 1, "bad id"))?,
                t.parse::<u64>().map_err(|_| malformed(idx + 1, "bad id"))?,
            ),
            _ => return Err(malformed(idx + 1, "expected `start end`")),
        };
        if s >= n || t >= n {
            return Err(malformed(idx + 1, "vertex id out of range"));
        }
        edges.push((s, t));
    }
    if edges.len() as u64 != m {
        return Err(malformed(0, "edge count does not match header"));
    }
    Ok(EdgeList {
        n_vertices: n,
        edges,
    })
}
