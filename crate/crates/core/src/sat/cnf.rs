use std::fmt;

use super::formula::{PropFormula, PropVar};

/// Signed literal in DIMACS convention.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(i32);

impl Lit {
    pub fn new(var: PropVar, positive: bool) -> Self {
        let v = var.index() as i32;
        Lit(if positive { v } else { -v })
    }

    pub fn from_dimacs(value: i32) -> Self {
        assert!(value != 0, "0 is not a literal");
        Lit(value)
    }

    pub fn var(self) -> PropVar {
        PropVar::new(self.0.unsigned_abs())
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }

    /// Value of the literal under `assignment[var - 1]`.
    pub fn value(self, assignment: &[bool]) -> bool {
        assignment[self.0.unsigned_abs() as usize - 1] == self.is_positive()
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Clauses over variables `1..=num_vars`. Variables above `watermark` are
/// Tseitin auxiliaries.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Cnf {
    pub num_vars: u32,
    pub watermark: u32,
    pub clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    pub fn new(num_vars: u32) -> Self {
        Cnf { num_vars, watermark: num_vars, clauses: Vec::new() }
    }

    pub fn from_dimacs(num_vars: u32, clauses: &[Vec<i32>]) -> Self {
        Cnf {
            num_vars,
            watermark: num_vars,
            clauses: clauses.iter().map(|c| c.iter().map(|&l| Lit::from_dimacs(l)).collect()).collect(),
        }
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.value(assignment)))
    }

    pub fn to_dimacs(&self) -> String {
        crate::text::write_dimacs(self.num_vars as usize, self.clauses.iter().map(|c| c.iter().map(|l| l.to_dimacs())))
    }
}

/// Total assignment to the original (non-auxiliary) variables.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    pub fn new(values: Vec<bool>) -> Self {
        Model { values }
    }

    pub fn value(&self, var: PropVar) -> bool {
        self.values[var.index() as usize - 1]
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Equisatisfiable clausal form of `f`. Variables `1..=original_vars` (and
/// any larger variable occurring in `f`) keep their meaning; fresh
/// variables above that are auxiliaries defined by full equivalences.
/// Top-level conjunctions and disjunctions become clauses directly.
pub fn tseitin(f: &PropFormula, original_vars: u32) -> Cnf {
    let watermark = original_vars.max(f.max_var());
    let mut t = Tseitin { cnf: Cnf::new(watermark), truth: None };
    t.assert(f);
    t.cnf
}

struct Tseitin {
    cnf: Cnf,
    truth: Option<Lit>,
}

impl Tseitin {
    fn fresh(&mut self) -> Lit {
        self.cnf.num_vars += 1;
        Lit::new(PropVar::new(self.cnf.num_vars), true)
    }

    fn assert(&mut self, f: &PropFormula) {
        match f {
            PropFormula::Const(true) => {}
            PropFormula::And(fs) => fs.iter().for_each(|g| self.assert(g)),
            PropFormula::Or(fs) => {
                let clause = fs.iter().map(|g| self.lit(g)).collect();
                self.cnf.clauses.push(clause);
            }
            PropFormula::Implies(a, b) => {
                let clause = vec![!self.lit(a), self.lit(b)];
                self.cnf.clauses.push(clause);
            }
            PropFormula::Not(g) if matches!(**g, PropFormula::And(_)) => {
                let PropFormula::And(fs) = &**g else { unreachable!() };
                let clause = fs.iter().map(|h| !self.lit(h)).collect();
                self.cnf.clauses.push(clause);
            }
            PropFormula::Iff(a, b) => {
                let (a, b) = (self.lit(a), self.lit(b));
                self.cnf.clauses.push(vec![!a, b]);
                self.cnf.clauses.push(vec![a, !b]);
            }
            other => {
                let l = self.lit(other);
                self.cnf.clauses.push(vec![l]);
            }
        }
    }

    fn lit(&mut self, f: &PropFormula) -> Lit {
        match f {
            PropFormula::Var(v) => Lit::new(*v, true),
            PropFormula::Not(g) => !self.lit(g),
            PropFormula::Const(b) => {
                let t = match self.truth {
                    Some(t) => t,
                    None => {
                        let t = self.fresh();
                        self.cnf.clauses.push(vec![t]);
                        self.truth = Some(t);
                        t
                    }
                };
                if *b {
                    t
                } else {
                    !t
                }
            }
            PropFormula::And(fs) => {
                let lits: Vec<Lit> = fs.iter().map(|g| self.lit(g)).collect();
                let a = self.fresh();
                for &l in &lits {
                    self.cnf.clauses.push(vec![!a, l]);
                }
                self.cnf.clauses.push(std::iter::once(a).chain(lits.iter().map(|&l| !l)).collect());
                a
            }
            PropFormula::Or(fs) => {
                let lits: Vec<Lit> = fs.iter().map(|g| self.lit(g)).collect();
                let a = self.fresh();
                for &l in &lits {
                    self.cnf.clauses.push(vec![a, !l]);
                }
                self.cnf.clauses.push(std::iter::once(!a).chain(lits).collect());
                a
            }
            PropFormula::Implies(x, y) => {
                let (x, y) = (self.lit(x), self.lit(y));
                let a = self.fresh();
                self.cnf.clauses.push(vec![!a, !x, y]);
                self.cnf.clauses.push(vec![a, x]);
                self.cnf.clauses.push(vec![a, !y]);
                a
            }
            PropFormula::Iff(x, y) => {
                let (x, y) = (self.lit(x), self.lit(y));
                let a = self.fresh();
                self.cnf.clauses.push(vec![!a, !x, y]);
                self.cnf.clauses.push(vec![!a, x, !y]);
                self.cnf.clauses.push(vec![a, x, y]);
                self.cnf.clauses.push(vec![a, !x, !y]);
                a
            }
        }
    }
}
