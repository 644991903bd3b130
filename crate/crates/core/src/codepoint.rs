//! `U+XXXX` notation used by every file format in this crate.

use crate::{Error, Result};

pub fn format(c: char) -> String {
    format!("U+{:04X}", c as u32)
}

pub fn parse(s: &str) -> Result<char> {
    let hex = s
        .strip_prefix("U+")
        .or_else(|| s.strip_prefix("u+"))
        .ok_or_else(|| Error::Config(format!("expected U+XXXX code point, got {s:?}")))?;
    let value = u32::from_str_radix(hex, 16)
        .map_err(|_| Error::Config(format!("bad hex in code point {s:?}")))?;
    char::from_u32(value).ok_or_else(|| Error::Config(format!("{s} is not a scalar value")))
}

/// Renders every char of `s` as `U+XXXX`, space separated.
pub fn format_str(s: &str) -> String {
    s.chars().map(format).collect::<Vec<_>>().join(" ")
}
