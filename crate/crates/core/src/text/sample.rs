//! Line-oriented sample files.
//!
//! ```text
//! props: p q
//! [positive]
//! {p} {q} | {q}      # u = {p}{q}, v = {q}
//! [negative]
//! | {q}
//! ```

use std::fmt::Write as _;

use super::span::{SourceSpan, SyntaxError};
use crate::lasso::{LassoWord, Symbol};
use crate::ltl::{Polarity, Propositions, Sample, SampleError};

fn span_in_line(line_no: usize, line: &str, start: usize, end: usize) -> SourceSpan {
    let column = line[..start].chars().count() + 1;
    SourceSpan::new(line_no, column, line[start..end].chars().count())
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Parses one `{..} .. | {..} ..` word from `line`. `resolve` maps a
/// proposition name to its index or explains why it cannot.
fn parse_word_line(
    line_no: usize,
    line: &str,
    resolve: &mut dyn FnMut(&str) -> Result<usize, String>,
) -> Result<LassoWord, SyntaxError> {
    let mut prefix = Vec::new();
    let mut period = Vec::new();
    let mut bar: Option<usize> = None;
    let mut chars = line.char_indices().peekable();
    while let Some((start, c)) = chars.next() {
        match c {
            c if c.is_whitespace() => {}
            '|' => {
                if bar.is_some() {
                    return Err(SyntaxError::new(
                        "a word has exactly one `|`",
                        span_in_line(line_no, line, start, start + 1),
                    ));
                }
                bar = Some(start);
            }
            '{' => {
                let mut symbol = Symbol::EMPTY;
                loop {
                    match chars.peek().copied() {
                        None => {
                            return Err(SyntaxError::new(
                                "unterminated symbol, expected `}`",
                                span_in_line(line_no, line, start, line.len()),
                            ))
                        }
                        Some((_, '}')) => {
                            chars.next();
                            break;
                        }
                        Some((_, c)) if c == ',' || c.is_whitespace() => {
                            chars.next();
                        }
                        Some((name_start, c)) if is_name_char(c) => {
                            let mut end = name_start;
                            while let Some(&(i, c)) = chars.peek() {
                                if !is_name_char(c) {
                                    break;
                                }
                                end = i + c.len_utf8();
                                chars.next();
                            }
                            let name = &line[name_start..end];
                            let index = resolve(name)
                                .map_err(|msg| SyntaxError::new(msg, span_in_line(line_no, line, name_start, end)))?;
                            symbol = symbol.with(index);
                        }
                        Some((i, c)) => {
                            return Err(SyntaxError::new(
                                format!("unexpected `{c}` inside a symbol"),
                                span_in_line(line_no, line, i, i + c.len_utf8()),
                            ))
                        }
                    }
                }
                if bar.is_some() { &mut period } else { &mut prefix }.push(symbol);
            }
            c => {
                return Err(SyntaxError::new(
                    format!("unexpected `{c}`, expected `{{`, `}}` or `|`"),
                    span_in_line(line_no, line, start, start + c.len_utf8()),
                ))
            }
        }
    }
    let whole = span_in_line(line_no, line, 0, line.len());
    let Some(bar) = bar else {
        return Err(SyntaxError::new("missing `|` between prefix and period", whole));
    };
    LassoWord::new(prefix, period).map_err(|_| {
        SyntaxError::new("the periodic part after `|` must be nonempty", span_in_line(line_no, line, bar, bar + 1))
    })
}

/// Parses a single word such as `{p,q} {p} | {q}`.
pub fn parse_word(
    text: &str,
    mut resolve: impl FnMut(&str) -> Result<usize, String>,
) -> Result<LassoWord, SyntaxError> {
    parse_word_line(1, text, &mut resolve)
}

pub fn read_sample(text: &str) -> Result<Sample, SyntaxError> {
    let mut props: Option<Propositions> = None;
    let mut section: Option<Polarity> = None;
    let mut positives = Vec::new();
    let mut negatives = Vec::new();
    let mut lines_of = (Vec::new(), Vec::new());
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let start = line.len() - line.trim_start().len();
        let span = span_in_line(line_no, line, start, start + trimmed.len());
        if let Some(rest) = trimmed.strip_prefix("props:") {
            if props.is_some() {
                return Err(SyntaxError::new("duplicate `props:` line", span));
            }
            let mut universe = Propositions::default();
            for name in rest.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
                if !name.chars().all(is_name_char) {
                    return Err(SyntaxError::new(format!("invalid proposition name `{name}`"), span));
                }
                universe.push(name.to_string()).map_err(|e| SyntaxError::new(e.to_string(), span))?;
            }
            props = Some(universe);
        } else if trimmed.starts_with('[') {
            section = Some(match trimmed {
                "[positive]" => Polarity::Positive,
                "[negative]" => Polarity::Negative,
                _ => return Err(SyntaxError::new(format!("unknown section `{trimmed}`"), span)),
            });
        } else {
            let Some(universe) = props.as_ref() else {
                return Err(SyntaxError::new("words must come after the `props:` line", span));
            };
            let Some(polarity) = section else {
                return Err(SyntaxError::new("words must be inside `[positive]` or `[negative]`", span));
            };
            let word = parse_word_line(line_no, line, &mut |name| {
                universe.index_of(name).ok_or_else(|| format!("unknown proposition `{name}`"))
            })?;
            match polarity {
                Polarity::Positive => {
                    positives.push(word);
                    lines_of.0.push(span);
                }
                Polarity::Negative => {
                    negatives.push(word);
                    lines_of.1.push(span);
                }
            }
        }
    }
    let Some(props) = props else {
        return Err(SyntaxError::new("missing `props:` line", SourceSpan::new(1, 1, 1)));
    };
    Sample::new(props, positives, negatives).map_err(|e| match e {
        SampleError::Overlap { positive, negative } => SyntaxError::new(
            format!(
                "negative word is the same infinite word as the positive word on line {}",
                lines_of.0[positive].line
            ),
            lines_of.1[negative],
        ),
        other => SyntaxError::new(other.to_string(), SourceSpan::new(1, 1, 1)),
    })
}

pub fn format_symbol(symbol: Symbol, props: &Propositions) -> String {
    let names: Vec<&str> = symbol.iter().map(|p| props.name(p)).collect();
    format!("{{{}}}", names.join(","))
}

pub fn format_word(word: &LassoWord, props: &Propositions) -> String {
    let join = |symbols: &[Symbol]| symbols.iter().map(|&s| format_symbol(s, props)).collect::<Vec<_>>().join(" ");
    if word.prefix().is_empty() {
        format!("| {}", join(word.period()))
    } else {
        format!("{} | {}", join(word.prefix()), join(word.period()))
    }
}

pub fn write_sample(sample: &Sample) -> String {
    let mut out = String::new();
    let props = sample.props();
    let _ = writeln!(out, "props: {}", props.names().join(" "));
    for (header, words) in [("[positive]", sample.positives()), ("[negative]", sample.negatives())] {
        let _ = writeln!(out, "{header}");
        for w in words {
            let _ = writeln!(out, "{}", format_word(w, props));
        }
    }
    out
}
