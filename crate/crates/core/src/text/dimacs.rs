//! DIMACS CNF.

use std::fmt::Write as _;

use super::span::{SourceSpan, SyntaxError};

/// Clauses as signed, 1-based variable indices.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CnfInput {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfInput {
    /// Whether `assignment[v - 1]` satisfies every clause.
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&lit| assignment[lit.unsigned_abs() as usize - 1] == (lit > 0)))
    }
}

pub fn read_dimacs(text: &str) -> Result<CnfInput, SyntaxError> {
    let mut header: Option<(usize, usize, SourceSpan)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    let mut last_span = SourceSpan::new(1, 1, 1);
    'lines: for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim_start();
        let indent = line.len() - trimmed.len();
        let line_span = SourceSpan::new(line_no, indent + 1, trimmed.trim_end().len());
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(SyntaxError::new("duplicate problem line", line_span));
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", v, c] => v.parse::<usize>().ok().zip(c.parse::<usize>().ok()),
                _ => None,
            };
            let Some((vars, count)) = parsed else {
                return Err(SyntaxError::new("expected `p cnf <variables> <clauses>`", line_span));
            };
            if vars > i32::MAX as usize {
                return Err(SyntaxError::new("too many variables", line_span));
            }
            header = Some((vars, count, line_span));
            continue;
        }
        let Some((vars, _, _)) = header else {
            return Err(SyntaxError::new("clause before the `p cnf` problem line", line_span));
        };
        let mut offset = 0;
        for token in line.split_whitespace() {
            let start = offset + line[offset..].find(token).unwrap();
            offset = start + token.len();
            let span = SourceSpan::new(line_no, start + 1, token.len());
            last_span = span;
            if token == "%" {
                break 'lines;
            }
            let lit: i64 = token.parse().map_err(|_| SyntaxError::new(format!("`{token}` is not a literal"), span))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > vars {
                return Err(SyntaxError::new(format!("literal {lit} is out of range for {vars} variables"), span));
            } else {
                current.push(lit as i32);
            }
        }
    }
    let Some((num_vars, count, header_span)) = header else {
        return Err(SyntaxError::new("missing `p cnf` problem line", SourceSpan::new(1, 1, 1)));
    };
    if !current.is_empty() {
        return Err(SyntaxError::new("last clause is not terminated by 0", last_span));
    }
    if clauses.len() != count {
        return Err(SyntaxError::new(
            format!("problem line declares {count} clauses but {} were found", clauses.len()),
            header_span,
        ));
    }
    Ok(CnfInput { num_vars, clauses })
}

pub fn write_dimacs<C, L>(num_vars: usize, clauses: C) -> String
where
    C: IntoIterator<Item = L>,
    L: IntoIterator<Item = i32>,
{
    let mut body = String::new();
    let mut count = 0;
    for clause in clauses {
        for lit in clause {
            let _ = write!(body, "{lit} ");
        }
        body.push_str("0\n");
        count += 1;
    }
    format!("p cnf {num_vars} {count}\n{body}")
}

impl CnfInput {
    pub fn to_dimacs(&self) -> String {
        write_dimacs(self.num_vars, self.clauses.iter().map(|c| c.iter().copied()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_basic_file() {
        let cnf = read_dimacs("c demo\np cnf 2 2\n1 2 0\n-1 0\n").unwrap();
        assert_eq!(cnf, CnfInput { num_vars: 2, clauses: vec![vec![1, 2], vec![-1]] });
        assert_eq!(read_dimacs(&cnf.to_dimacs()).unwrap(), cnf);
    }

    #[test]
    fn empty_clause_and_multiline_clauses() {
        let cnf = read_dimacs("p cnf 1 1\n0\n").unwrap();
        assert_eq!(cnf.clauses, vec![Vec::<i32>::new()]);
        let cnf = read_dimacs("p cnf 3 1\n1 -2\n 3 0\n%\n0\n").unwrap();
        assert_eq!(cnf.clauses, vec![vec![1, -2, 3]]);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(read_dimacs("p cnf x 1\n1 0\n").is_err());
        assert!(read_dimacs("p dnf 1 1\n1 0\n").is_err());
        let err = read_dimacs("p cnf 1 1\n2 0\n").unwrap_err();
        assert_eq!(err.span, SourceSpan::new(2, 1, 1));
        let err = read_dimacs("p cnf 1 2\n1 0\n").unwrap_err();
        assert_eq!(err.span.line, 1);
        assert!(read_dimacs("1 0\n").is_err());
        assert!(read_dimacs("p cnf 1 1\n1\n").is_err());
        assert!(read_dimacs("").is_err());
    }
}
