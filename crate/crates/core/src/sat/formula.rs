use std::fmt;

/// Propositional variable; handles are dense and start at 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PropVar(u32);

impl PropVar {
    pub fn new(index: u32) -> Self {
        assert!(index >= 1, "variables are numbered from 1");
        PropVar(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for PropVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Clone, Debug, Default)]
pub struct VarAllocator {
    count: u32,
}

impl VarAllocator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self) -> PropVar {
        self.count += 1;
        PropVar(self.count)
    }

    /// Number of variables handed out so far.
    pub fn count(&self) -> u32 {
        self.count
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PropFormula {
    Const(bool),
    Var(PropVar),
    Not(Box<PropFormula>),
    And(Vec<PropFormula>),
    Or(Vec<PropFormula>),
    Implies(Box<PropFormula>, Box<PropFormula>),
    Iff(Box<PropFormula>, Box<PropFormula>),
}

impl From<PropVar> for PropFormula {
    fn from(v: PropVar) -> Self {
        PropFormula::Var(v)
    }
}

impl PropFormula {
    pub fn var(v: PropVar) -> Self {
        PropFormula::Var(v)
    }

    /// `v` if `positive`, else `¬v`.
    pub fn lit(v: PropVar, positive: bool) -> Self {
        if positive {
            PropFormula::Var(v)
        } else {
            PropFormula::Not(Box::new(PropFormula::Var(v)))
        }
    }

    pub fn constant(b: bool) -> Self {
        PropFormula::Const(b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: PropFormula) -> Self {
        match f {
            PropFormula::Const(b) => PropFormula::Const(!b),
            PropFormula::Not(g) => *g,
            g => PropFormula::Not(Box::new(g)),
        }
    }

    /// Conjunction; flattens nested conjunctions and folds constants.
    pub fn and<I: IntoIterator<Item = PropFormula>>(items: I) -> Self {
        let mut out = Vec::new();
        for f in items {
            match f {
                PropFormula::Const(true) => {}
                PropFormula::Const(false) => return PropFormula::Const(false),
                PropFormula::And(inner) => out.extend(inner),
                g => out.push(g),
            }
        }
        match out.len() {
            0 => PropFormula::Const(true),
            1 => out.pop().unwrap(),
            _ => PropFormula::And(out),
        }
    }

    /// Disjunction; flattens nested disjunctions and folds constants.
    pub fn or<I: IntoIterator<Item = PropFormula>>(items: I) -> Self {
        let mut out = Vec::new();
        for f in items {
            match f {
                PropFormula::Const(false) => {}
                PropFormula::Const(true) => return PropFormula::Const(true),
                PropFormula::Or(inner) => out.extend(inner),
                g => out.push(g),
            }
        }
        match out.len() {
            0 => PropFormula::Const(false),
            1 => out.pop().unwrap(),
            _ => PropFormula::Or(out),
        }
    }

    pub fn implies(a: PropFormula, b: PropFormula) -> Self {
        match (a, b) {
            (PropFormula::Const(false), _) | (_, PropFormula::Const(true)) => PropFormula::Const(true),
            (PropFormula::Const(true), b) => b,
            (a, PropFormula::Const(false)) => PropFormula::not(a),
            (a, b) => PropFormula::Implies(Box::new(a), Box::new(b)),
        }
    }

    pub fn iff(a: PropFormula, b: PropFormula) -> Self {
        match (a, b) {
            (PropFormula::Const(x), PropFormula::Const(y)) => PropFormula::Const(x == y),
            (PropFormula::Const(true), f) | (f, PropFormula::Const(true)) => f,
            (PropFormula::Const(false), f) | (f, PropFormula::Const(false)) => PropFormula::not(f),
            (a, b) => PropFormula::Iff(Box::new(a), Box::new(b)),
        }
    }

    /// At least one and pairwise at most one of `vars`.
    pub fn exactly_one(vars: &[PropVar]) -> Self {
        PropFormula::and(
            std::iter::once(PropFormula::or(vars.iter().map(|&v| PropFormula::var(v)))).chain(at_most_one(vars)),
        )
    }

    /// Pairwise at-most-one of `vars`.
    pub fn at_most_one(vars: &[PropVar]) -> Self {
        PropFormula::and(at_most_one(vars))
    }

    pub fn eval(&self, assignment: &impl Fn(PropVar) -> bool) -> bool {
        match self {
            PropFormula::Const(b) => *b,
            PropFormula::Var(v) => assignment(*v),
            PropFormula::Not(f) => !f.eval(assignment),
            PropFormula::And(fs) => fs.iter().all(|f| f.eval(assignment)),
            PropFormula::Or(fs) => fs.iter().any(|f| f.eval(assignment)),
            PropFormula::Implies(a, b) => !a.eval(assignment) || b.eval(assignment),
            PropFormula::Iff(a, b) => a.eval(assignment) == b.eval(assignment),
        }
    }

    /// Largest variable index occurring in the formula, 0 if none.
    pub fn max_var(&self) -> u32 {
        match self {
            PropFormula::Const(_) => 0,
            PropFormula::Var(v) => v.0,
            PropFormula::Not(f) => f.max_var(),
            PropFormula::And(fs) | PropFormula::Or(fs) => fs.iter().map(PropFormula::max_var).max().unwrap_or(0),
            PropFormula::Implies(a, b) | PropFormula::Iff(a, b) => a.max_var().max(b.max_var()),
        }
    }

    /// Number of connective and leaf occurrences.
    pub fn size(&self) -> usize {
        match self {
            PropFormula::Const(_) | PropFormula::Var(_) => 1,
            PropFormula::Not(f) => 1 + f.size(),
            PropFormula::And(fs) | PropFormula::Or(fs) => 1 + fs.iter().map(PropFormula::size).sum::<usize>(),
            PropFormula::Implies(a, b) | PropFormula::Iff(a, b) => 1 + a.size() + b.size(),
        }
    }
}

fn at_most_one(vars: &[PropVar]) -> impl Iterator<Item = PropFormula> + '_ {
    vars.iter().enumerate().flat_map(move |(i, &a)| {
        vars[i + 1..].iter().map(move |&b| PropFormula::or([PropFormula::lit(a, false), PropFormula::lit(b, false)]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smart_constructors_fold_constants() {
        let x = PropVar::new(1);
        assert_eq!(PropFormula::and([PropFormula::Const(true), x.into()]), PropFormula::Var(x));
        assert_eq!(PropFormula::or([PropFormula::Const(true), x.into()]), PropFormula::Const(true));
        assert_eq!(PropFormula::not(PropFormula::not(x.into())), PropFormula::Var(x));
        assert_eq!(PropFormula::and(Vec::new()), PropFormula::Const(true));
        assert_eq!(PropFormula::iff(PropFormula::Const(false), x.into()), PropFormula::lit(x, false));
    }

    #[test]
    fn exactly_one_semantics() {
        let vars: Vec<_> = (1..=3).map(PropVar::new).collect();
        let f = PropFormula::exactly_one(&vars);
        for bits in 0u32..8 {
            let holds = f.eval(&|v: PropVar| bits >> (v.index() - 1) & 1 == 1);
            assert_eq!(holds, bits.count_ones() == 1);
        }
    }
}
