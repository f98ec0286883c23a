use std::io::{BufRead, Write};

use crate::error::AssocError;
use crate::value::Value;

/// A `(row, column, value)` triple, the interchange form of one array entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Triple {
    pub row: String,
    pub col: String,
    pub val: Value,
}

impl Triple {
    pub fn new(row: impl Into<String>, col: impl Into<String>, val: Value) -> Triple {
        Triple {
            row: row.into(),
            col: col.into(),
            val,
        }
    }

    pub(crate) fn validate(&self) -> Result<(), AssocError> {
        if self.row.is_empty() {
            return Err(AssocError::EmptyKey("row"));
        }
        if self.col.is_empty() {
            return Err(AssocError::EmptyKey("column"));
        }
        self.val.validate()
    }
}

fn field_ok(s: &str) -> bool {
    !s.contains('\t') && !s.contains('\n') && !s.contains('\r')
}

/// Writes triples in the text interchange format: one
/// `row<TAB>col<TAB>value` line per triple, sorted by `(row, col)`.
pub fn write_triples<W: Write>(out: &mut W, triples: &[Triple]) -> Result<(), AssocError> {
    let mut ordered: Vec<&Triple> = triples.iter().collect();
    ordered.sort_by(|a, b| (&a.row, &a.col).cmp(&(&b.row, &b.col)));
    for t in ordered {
        let val = t.val.to_string();
        if !field_ok(&t.row) || !field_ok(&t.col) || !field_ok(&val) {
            return Err(AssocError::UnserializableText);
        }
        writeln!(out, "{}\t{}\t{}", t.row, t.col, val)?;
    }
    Ok(())
}

pub fn triples_to_string(triples: &[Triple]) -> Result<String, AssocError> {
    let mut buf = Vec::new();
    write_triples(&mut buf, triples)?;
    Ok(String::from_utf8(buf).expect("triple text is UTF-8"))
}

/// Parses the text interchange format. A value field that parses as a finite
/// float is read back as numeric; anything else is textual.
pub fn read_triples<R: BufRead>(input: R) -> Result<Vec<Triple>, AssocError> {
    let mut triples = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let (row, col, val) = match (fields.next(), fields.next(), fields.next(), fields.next()) {
            (Some(r), Some(c), Some(v), None) => (r, c, v),
            _ => {
                return Err(AssocError::MalformedTriple {
                    line: idx + 1,
                    reason: "expected exactly three tab-separated fields".into(),
                })
            }
        };
        if val.is_empty() {
            return Err(AssocError::MalformedTriple {
                line: idx + 1,
                reason: "empty value field".into(),
            });
        }
        let val = match val.parse::<f64>() {
            Ok(x) if x.is_finite() => Value::Num(x),
            _ => Value::Text(val.to_string()),
        };
        triples.push(Triple::new(row, col, val));
    }
    Ok(triples)
}
