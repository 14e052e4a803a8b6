use std::fmt;

use thiserror::Error;

/// 1-based position of a token in its source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    pub fn new(line: usize, column: usize, length: usize) -> Self {
        SourceSpan { line, column, length: length.max(1) }
    }

    /// Span of `text[start..end]` (byte offsets), with columns counted in chars.
    pub fn from_offsets(text: &str, start: usize, end: usize) -> Self {
        let start = start.min(text.len());
        let before = &text[..start];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |i| i + 1);
        let column = text[line_start..start].chars().count() + 1;
        let length = text.get(start..end.min(text.len())).map_or(1, |s| s.chars().count());
        SourceSpan::new(line, column, length)
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Error raised by the text readers, located in the input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{span}: {message}")]
pub struct SyntaxError {
    pub message: String,
    pub span: SourceSpan,
}

impl SyntaxError {
    pub fn new(message: impl Into<String>, span: SourceSpan) -> Self {
        SyntaxError { message: message.into(), span }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_to_line_and_column() {
        let text = "ab\ncde\nf";
        assert_eq!(SourceSpan::from_offsets(text, 0, 1), SourceSpan::new(1, 1, 1));
        assert_eq!(SourceSpan::from_offsets(text, 4, 6), SourceSpan::new(2, 2, 2));
        assert_eq!(SourceSpan::from_offsets(text, 8, 8), SourceSpan::new(3, 2, 1));
    }
}
