//! Valuation of LTL formulas on lasso words and satisfaction tables.

use thiserror::Error;

use super::dag::{BinaryOp, Label, SyntaxDag, UnaryOp};
use super::sample::{Propositions, Sample};
use crate::lasso::LassoWord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("proposition `{0}` is not in the sample's universe")]
    UnknownProposition(String),
    #[error("formula still contains placeholders")]
    Placeholder,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Op {
    Prop(usize),
    Const(bool),
    Unary(UnaryOp, usize),
    Binary(BinaryOp, usize, usize),
}

/// Resolves proposition names against `props`, rejecting placeholders.
pub(crate) fn resolve(f: &SyntaxDag, props: &Propositions) -> Result<Vec<Op>, EvalError> {
    f.nodes()
        .iter()
        .map(|n| {
            Ok(match &n.label {
                Label::Prop(p) => Op::Prop(props.index_of(p).ok_or_else(|| EvalError::UnknownProposition(p.clone()))?),
                Label::True => Op::Const(true),
                Label::False => Op::Const(false),
                Label::Unary(op) => Op::Unary(*op, n.left.unwrap()),
                Label::Binary(op) => Op::Binary(*op, n.left.unwrap(), n.right.unwrap()),
                Label::Hole(..) => return Err(EvalError::Placeholder),
            })
        })
        .collect()
}

/// Positions `t''` scanned by F, G and U from position `t`.
pub(crate) fn future_window(w: &LassoWord, t: usize) -> std::ops::Range<usize> {
    if t < w.prefix_len() {
        t..w.len()
    } else {
        w.prefix_len()..w.len()
    }
}

/// Positions strictly between `t` and `t2` along the lasso, i.e. where the
/// left operand of U has to hold before the right operand holds at `t2`.
/// `t2 == t` gives the empty set.
pub(crate) fn loop_positions(w: &LassoWord, t: usize, t2: usize) -> Vec<usize> {
    if t <= t2 {
        (t..t2).collect()
    } else {
        (w.prefix_len()..t2).chain(t..w.len()).collect()
    }
}

/// `V(f, w)`.
pub fn evaluate(f: &SyntaxDag, w: &LassoWord, props: &Propositions) -> Result<bool, EvalError> {
    let ops = resolve(f, props)?;
    Ok(Evaluator::new(&ops, w).value(SyntaxDag::ROOT, 0))
}

/// Memoized recursion over `(node, position)`; temporal operators walk the
/// lasso with [`LassoWord::successor`] for at most `|uv|` steps, which visits
/// every reachable suffix.
struct Evaluator<'a> {
    ops: &'a [Op],
    word: &'a LassoWord,
    memo: Vec<Vec<Option<bool>>>,
}

impl<'a> Evaluator<'a> {
    fn new(ops: &'a [Op], word: &'a LassoWord) -> Self {
        Evaluator { ops, word, memo: vec![vec![None; word.len()]; ops.len()] }
    }

    fn reachable(&self, t: usize) -> impl Iterator<Item = usize> + '_ {
        std::iter::successors(Some(t), |&k| Some(self.word.successor(k))).take(self.word.len())
    }

    fn value(&mut self, i: usize, t: usize) -> bool {
        if let Some(v) = self.memo[i][t] {
            return v;
        }
        let v = match self.ops[i] {
            Op::Prop(p) => self.word.symbol_at(t).contains(p),
            Op::Const(b) => b,
            Op::Unary(UnaryOp::Not, c) => !self.value(c, t),
            Op::Unary(UnaryOp::Next, c) => {
                let next = self.word.successor(t);
                self.value(c, next)
            }
            Op::Unary(UnaryOp::Finally, c) => {
                let steps: Vec<_> = self.reachable(t).collect();
                steps.into_iter().any(|k| self.value(c, k))
            }
            Op::Unary(UnaryOp::Globally, c) => {
                let steps: Vec<_> = self.reachable(t).collect();
                steps.into_iter().all(|k| self.value(c, k))
            }
            Op::Binary(BinaryOp::Or, l, r) => self.value(l, t) || self.value(r, t),
            Op::Binary(BinaryOp::And, l, r) => self.value(l, t) && self.value(r, t),
            Op::Binary(BinaryOp::Until, l, r) => {
                let steps: Vec<_> = self.reachable(t).collect();
                let mut holds = false;
                for k in steps {
                    if self.value(r, k) {
                        holds = true;
                        break;
                    }
                    if !self.value(l, k) {
                        break;
                    }
                }
                holds
            }
        };
        self.memo[i][t] = Some(v);
        v
    }
}

/// `T[i, t] = V(f[i], w[t, ∞))` for every node `i` and `0 <= t < |uv|`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SatisfactionTable {
    width: usize,
    rows: Vec<Vec<bool>>,
}

impl SatisfactionTable {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn row(&self, node: usize) -> &[bool] {
        &self.rows[node]
    }

    pub fn get(&self, node: usize, t: usize) -> bool {
        self.rows[node][t]
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    /// Row as a string of `0`/`1`.
    pub fn row_bits(&self, node: usize) -> String {
        self.rows[node].iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// Fills the table bottom-up (children have larger indices) with the row
/// recurrences for each operator.
pub fn build_table(f: &SyntaxDag, w: &LassoWord, props: &Propositions) -> Result<SatisfactionTable, EvalError> {
    let ops = resolve(f, props)?;
    let width = w.len();
    let mut rows: Vec<Vec<bool>> = vec![Vec::new(); ops.len()];
    for i in (0..ops.len()).rev() {
        let row: Vec<bool> = match ops[i] {
            Op::Prop(p) => (0..width).map(|t| w.symbol_at(t).contains(p)).collect(),
            Op::Const(b) => vec![b; width],
            Op::Unary(op, c) => {
                let child = &rows[c];
                (0..width)
                    .map(|t| match op {
                        UnaryOp::Not => !child[t],
                        UnaryOp::Next => child[w.successor(t)],
                        UnaryOp::Finally => future_window(w, t).any(|k| child[k]),
                        UnaryOp::Globally => future_window(w, t).all(|k| child[k]),
                    })
                    .collect()
            }
            Op::Binary(op, l, r) => {
                let (left, right) = (&rows[l], &rows[r]);
                (0..width)
                    .map(|t| match op {
                        BinaryOp::Or => left[t] || right[t],
                        BinaryOp::And => left[t] && right[t],
                        BinaryOp::Until => future_window(w, t)
                            .any(|k| right[k] && loop_positions(w, t, k).into_iter().all(|j| left[j])),
                    })
                    .collect()
            }
        };
        rows[i] = row;
    }
    Ok(SatisfactionTable { width, rows })
}

/// Per-word outcome of checking a formula against a sample. An entry is
/// `true` when the word is classified correctly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Verdict {
    pub positives: Vec<bool>,
    pub negatives: Vec<bool>,
}

impl Verdict {
    pub fn consistent(&self) -> bool {
        self.positives.iter().chain(&self.negatives).all(|&ok| ok)
    }
}

pub fn check_consistency(f: &SyntaxDag, sample: &Sample) -> Result<Verdict, EvalError> {
    let ops = resolve(f, sample.props())?;
    let eval = |w: &LassoWord| Evaluator::new(&ops, w).value(SyntaxDag::ROOT, 0);
    Ok(Verdict {
        positives: sample.positives().iter().map(eval).collect(),
        negatives: sample.negatives().iter().map(|w| !eval(w)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lasso::Symbol;
    use crate::ltl::dag::DagBuilder;

    fn props() -> Propositions {
        Propositions::new(["p", "q"]).unwrap()
    }

    fn w(u: &[u64], v: &[u64]) -> LassoWord {
        LassoWord::new(
            u.iter().map(|&b| Symbol::from_bits(b)).collect(),
            v.iter().map(|&b| Symbol::from_bits(b)).collect(),
        )
        .unwrap()
    }

    /// p | X q
    fn p_or_next_q() -> SyntaxDag {
        let mut b = DagBuilder::new();
        let p = b.prop("p");
        let q = b.prop("q");
        let xq = b.unary(UnaryOp::Next, q);
        let root = b.binary(BinaryOp::Or, p, xq);
        b.build(root)
    }

    #[test]
    fn running_example_table() {
        let f = p_or_next_q();
        let word = w(&[0b11, 0b01], &[0b10]);
        let table = build_table(&f, &word, &props()).unwrap();
        // nodes: 0 = p|Xq, 1 = p, 2 = Xq, 3 = q
        assert_eq!(table.row_bits(1), "110");
        assert_eq!(table.row_bits(3), "101");
        assert_eq!(table.row_bits(2), "011");
        assert_eq!(table.row_bits(0), "111");
        assert!(evaluate(&f, &word, &props()).unwrap());
    }

    #[test]
    fn until_needs_right_operand() {
        let mut b = DagBuilder::new();
        let p = b.prop("p");
        let q = b.prop("q");
        let root = b.binary(BinaryOp::Until, p, q);
        let f = b.build(root);
        assert!(!evaluate(&f, &w(&[], &[0]), &props()).unwrap());
        let table = build_table(&f, &w(&[0b01], &[0b01, 0b10]), &props()).unwrap();
        assert_eq!(table.row_bits(0), "111");
    }

    #[test]
    fn until_with_loop_back() {
        // (p, {}) loop; at position 2 U must walk 2 -> 1 -> ... ; here q holds at 1
        let mut b = DagBuilder::new();
        let p = b.prop("p");
        let q = b.prop("q");
        let root = b.binary(BinaryOp::Until, p, q);
        let f = b.build(root);
        let word = w(&[0], &[0b10, 0b01]);
        let table = build_table(&f, &word, &props()).unwrap();
        assert_eq!(table.row_bits(0), "011");
    }

    #[test]
    fn unknown_proposition_is_reported() {
        let f = SyntaxDag::prop("r");
        assert_eq!(evaluate(&f, &w(&[], &[0]), &props()), Err(EvalError::UnknownProposition("r".into())));
    }

    #[test]
    fn empty_sample_is_vacuously_consistent() {
        let sample = Sample::new(props(), vec![], vec![]).unwrap();
        assert!(check_consistency(&SyntaxDag::prop("p"), &sample).unwrap().consistent());
    }

    #[test]
    fn loop_positions_cases() {
        let word = w(&[0, 0], &[0, 0, 0]);
        assert_eq!(loop_positions(&word, 3, 3), Vec::<usize>::new());
        assert_eq!(loop_positions(&word, 2, 4), vec![2, 3]);
        assert_eq!(loop_positions(&word, 4, 3), vec![2, 4]);
        assert_eq!(future_window(&word, 1), 1..5);
        assert_eq!(future_window(&word, 3), 2..5);
    }
}
