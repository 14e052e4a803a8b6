//! Ultimately periodic words `u v^ω`, stored as a `(u, v)` pair.
//!
//! Every suffix of `u v^ω` is equal to one of the suffixes starting in the
//! first `|uv|` positions, so positions are usually taken from `0..len()` and
//! advanced with [`LassoWord::successor`], which wraps the last position back
//! to the start of the period.

use std::fmt;

use thiserror::Error;

/// Upper bound on the proposition universe; symbols are 64-bit sets.
pub const MAX_PROPOSITIONS: usize = 64;

/// A set of propositions, indexed by position in the enclosing universe.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Symbol(u64);

impl Symbol {
    pub const EMPTY: Symbol = Symbol(0);

    pub fn from_bits(bits: u64) -> Self {
        Symbol(bits)
    }

    pub fn from_props<I: IntoIterator<Item = usize>>(props: I) -> Self {
        props.into_iter().fold(Symbol::EMPTY, Symbol::with)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, prop: usize) -> bool {
        prop < MAX_PROPOSITIONS && self.0 & (1 << prop) != 0
    }

    #[must_use]
    pub fn with(self, prop: usize) -> Self {
        assert!(prop < MAX_PROPOSITIONS, "proposition index {prop} out of range");
        Symbol(self.0 | (1 << prop))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Proposition indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..MAX_PROPOSITIONS).filter(move |&p| self.contains(p))
    }

    /// Number of propositions needed to hold every member (highest index + 1).
    pub fn width(self) -> usize {
        MAX_PROPOSITIONS - self.0.leading_zeros() as usize
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LassoError {
    #[error("the periodic part of a lasso word must be nonempty")]
    EmptyPeriod,
    #[error("position {index} is out of range for a word with |uv| = {len}")]
    IndexOutOfRange { index: usize, len: usize },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LassoWord {
    prefix: Vec<Symbol>,
    period: Vec<Symbol>,
}

impl LassoWord {
    pub fn new(prefix: Vec<Symbol>, period: Vec<Symbol>) -> Result<Self, LassoError> {
        if period.is_empty() {
            return Err(LassoError::EmptyPeriod);
        }
        Ok(LassoWord { prefix, period })
    }

    /// The word `v^ω`.
    pub fn periodic(period: Vec<Symbol>) -> Result<Self, LassoError> {
        Self::new(Vec::new(), period)
    }

    pub fn prefix(&self) -> &[Symbol] {
        &self.prefix
    }

    pub fn period(&self) -> &[Symbol] {
        &self.period
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// `|uv|`, the number of possibly distinct suffixes.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbol_at(&self, t: usize) -> Symbol {
        match self.prefix.get(t) {
            Some(&s) => s,
            None => self.period[(t - self.prefix.len()) % self.period.len()],
        }
    }

    /// Position of the suffix `w[t+1, ∞)` among `0..len()`.
    pub fn successor(&self, t: usize) -> usize {
        if t + 1 < self.len() {
            t + 1
        } else {
            self.prefix.len()
        }
    }

    /// Folds an arbitrary position onto the equivalent one in `0..len()`.
    pub fn normalize_position(&self, t: usize) -> usize {
        if t < self.prefix.len() {
            t
        } else {
            self.prefix.len() + (t - self.prefix.len()) % self.period.len()
        }
    }

    fn check_index(&self, t: usize) -> Result<(), LassoError> {
        if t < self.len() {
            Ok(())
        } else {
            Err(LassoError::IndexOutOfRange { index: t, len: self.len() })
        }
    }

    /// The lasso representation of `w[t, ∞)`.
    pub fn suffix(&self, t: usize) -> Result<LassoWord, LassoError> {
        self.check_index(t)?;
        if t <= self.prefix.len() {
            Ok(LassoWord { prefix: self.prefix[t..].to_vec(), period: self.period.clone() })
        } else {
            let mut period = self.period.clone();
            period.rotate_left(t - self.prefix.len());
            Ok(LassoWord { prefix: Vec::new(), period })
        }
    }

    /// Unique minimal representative: primitive period, shortest prefix.
    pub fn canonicalize(&self) -> LassoWord {
        let mut period = primitive_root(&self.period).to_vec();
        let mut prefix = self.prefix.clone();
        while let (Some(&a), Some(&b)) = (prefix.last(), period.last()) {
            if a != b {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        LassoWord { prefix, period }
    }

    /// Bitwise union of all symbols; used to validate against a universe.
    pub fn support(&self) -> Symbol {
        Symbol::from_bits(self.prefix.iter().chain(&self.period).fold(0, |acc, s| acc | s.bits()))
    }
}

impl fmt::Debug for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({:?})^ω", self.prefix, self.period)
    }
}

fn primitive_root(v: &[Symbol]) -> &[Symbol] {
    let n = v.len();
    (1..=n).filter(|&d| n.is_multiple_of(d)).find(|&d| (d..n).all(|i| v[i] == v[i - d])).map(|d| &v[..d]).unwrap_or(v)
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Number of symbols that decide whether `w1[t1, ∞)` and `w2[t2, ∞)` coincide.
pub fn comparison_bound(w1: &LassoWord, t1: usize, w2: &LassoWord, t2: usize) -> usize {
    let rest1 = w1.prefix_len().saturating_sub(t1);
    let rest2 = w2.prefix_len().saturating_sub(t2);
    rest1.max(rest2) + lcm(w1.period_len(), w2.period_len())
}

/// Decides `w1[t1, ∞) = w2[t2, ∞)` by comparing a finite window whose length
/// is given by [`comparison_bound`].
pub fn suffix_equal(w1: &LassoWord, t1: usize, w2: &LassoWord, t2: usize) -> Result<bool, LassoError> {
    w1.check_index(t1)?;
    w2.check_index(t2)?;
    let bound = comparison_bound(w1, t1, w2, t2);
    Ok((0..bound).all(|k| w1.symbol_at(t1 + k) == w2.symbol_at(t2 + k)))
}
