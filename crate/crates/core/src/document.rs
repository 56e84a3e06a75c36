//! Shared plumbing for the TOML-based profile and catalog documents.

use std::ops::Range;

use crate::error::ProfileError;

/// 1-based line and column of a byte offset.
pub(crate) fn line_col(source: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(source.len());
    let before = &source[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(offset, |nl| offset - nl - 1) + 1;
    (line, column)
}

pub(crate) fn parse_error(source: &str, span: Option<Range<usize>>, message: impl Into<String>) -> ProfileError {
    let (line, column) = span.map_or((1, 1), |s| line_col(source, s.start));
    ProfileError::Parse {
        line,
        column,
        message: message.into(),
    }
}

pub(crate) fn from_toml<T: serde::de::DeserializeOwned>(source: &str) -> Result<T, ProfileError> {
    if source.trim().is_empty() {
        return Err(parse_error(source, None, "empty document"));
    }
    toml::from_str(source).map_err(|e| parse_error(source, e.span(), e.message().to_string()))
}

/// Quotes a string as a TOML basic string.
pub(crate) fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_are_one_based() {
        let src = "ab\ncd\nef";
        assert_eq!(line_col(src, 0), (1, 1));
        assert_eq!(line_col(src, 4), (2, 2));
        assert_eq!(line_col(src, 6), (3, 1));
    }
}
