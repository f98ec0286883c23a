//! Fixed-width decimal row/column keys.
//!
//! Range-partitioned tables compare row keys as strings, so numeric ids are
//! encoded as zero-padded decimals of a fixed width; with uniform padding,
//! lexicographic order equals numeric order.

use crate::error::AssocError;

/// Number of decimal digits needed to print `value` (1 for zero).
pub fn decimal_width(value: u64) -> usize {
    let mut digits = 1;
    let mut v = value;
    while v >= 10 {
        v /= 10;
        digits += 1;
    }
    digits
}

/// Zero-padded decimal encoding of exactly `width` digits.
pub fn encode(value: u64, width: usize) -> Result<String, AssocError> {
    if decimal_width(value) > width {
        return Err(AssocError::KeyWidthOverflow { value, width });
    }
    Ok(format!("{value:0width$}"))
}

/// Parses a key produced by [`encode`]. Rejects signs, blanks, and any
/// non-digit byte.
pub fn decode(key: &str) -> Result<u64, AssocError> {
    if key.is_empty() || !key.bytes().all(|b| b.is_ascii_digit()) {
        return Err(AssocError::NonNumericRowKey(key.to_string()));
    }
    key.parse()
        .map_err(|_| AssocError::NonNumericRowKey(key.to_string()))
}
