use std::fmt;

use crate::error::AssocError;

/// The two value kinds an array can hold. All entries of one array share a
/// kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    Textual,
    Numeric,
}

/// A single stored value: non-empty text or a finite, non-zero 64-bit float.
///
/// Zero is the numeric empty value (empty entries are never stored), and the
/// empty string is the textual one. [`Value::validate`] enforces both;
/// construction through enum variants is unchecked, so array constructors
/// validate on ingestion.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Text(String),
    Num(f64),
}

impl Value {
    pub fn text(s: impl Into<String>) -> Value {
        Value::Text(s.into())
    }

    pub fn num(x: f64) -> Value {
        Value::Num(x)
    }

    /// The numeric 1 used by graph adjacency entries and pattern algebra.
    pub fn one() -> Value {
        Value::Num(1.0)
    }

    pub fn kind(&self) -> ValueKind {
        match self {
            Value::Text(_) => ValueKind::Textual,
            Value::Num(_) => ValueKind::Numeric,
        }
    }

    pub fn as_num(&self) -> Option<f64> {
        match self {
            Value::Num(x) => Some(*x),
            Value::Text(_) => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Value::Text(s) => Some(s),
            Value::Num(_) => None,
        }
    }

    pub fn validate(&self) -> Result<(), AssocError> {
        match self {
            Value::Text(s) if s.is_empty() => Err(AssocError::EmptyTextValue),
            Value::Num(x) if !x.is_finite() => Err(AssocError::NonFiniteNumber(*x)),
            Value::Num(x) if *x == 0.0 => Err(AssocError::ZeroValue),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Text(s) => f.write_str(s),
            Value::Num(x) => write!(f, "{x}"),
        }
    }
}
