//! Reduction from CNF satisfiability to restricted sketch existence.
//!
//! Variable `x_j` becomes the Type-0 placeholder `?0{x<j>}` under `X^{j-1}`.
//! The positive word is `{p,q}^n ∅^ω`; clause `C_i` gives the negative word
//! `F_{i,1} … F_{i,n} ∅^ω` with `F_{i,j}` = `{p}` if `x_j ∈ C_i`, `{q}` if
//! `¬x_j ∈ C_i` and `{p,q}` otherwise. Choosing `q` for `?_j` means `x_j = 1`.

use thiserror::Error;

use crate::lasso::{LassoWord, Symbol};
use crate::ltl::{Image, Label, PlaceholderId, Propositions, Sample, Sketch, Substitution};
use crate::text::{parse_formula, CnfInput};

const P: usize = 0;
const Q: usize = 1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("the formula has no variables")]
    NoVariables,
    #[error("literal {0} is outside the declared variables")]
    LiteralOutOfRange(i32),
    #[error("placeholder {0} is not mapped to `p` or `q`")]
    BadImage(PlaceholderId),
}

#[derive(Clone, Debug)]
pub struct ReductionInstance {
    pub sketch: Sketch,
    pub sample: Sample,
    /// `?_j` (id `j-1`) stands for `x_j`.
    pub num_vars: usize,
    /// Set when the CNF has an empty clause. Its negative word would equal
    /// the positive word, so it is left out and the instance is unsatisfiable
    /// by fiat.
    pub trivially_unsat: bool,
    /// Clauses that contain both `x_j` and `¬x_j` are always satisfied and
    /// give no negative word.
    pub skipped_tautologies: usize,
}

pub fn reduce_cnf(cnf: &CnfInput) -> Result<ReductionInstance, ReductionError> {
    let n = cnf.num_vars;
    if n == 0 {
        return Err(ReductionError::NoVariables);
    }
    let text = (1..=n).map(|j| format!("{}?0{{x{j}}}", "X ".repeat(j - 1))).collect::<Vec<_>>().join(" & ");
    let sketch = parse_formula(&text).expect("generated sketch parses");

    let pq = Symbol::from_props([P, Q]);
    let tail = vec![Symbol::default()];
    let positive = LassoWord::new(vec![pq; n], tail.clone()).expect("non-empty period");
    let mut negatives = Vec::new();
    let mut trivially_unsat = false;
    let mut skipped_tautologies = 0;
    for clause in &cnf.clauses {
        if clause.is_empty() {
            trivially_unsat = true;
            continue;
        }
        let mut letters = vec![pq; n];
        let mut tautology = false;
        for &lit in clause {
            let j = lit.unsigned_abs() as usize;
            if j == 0 || j > n {
                return Err(ReductionError::LiteralOutOfRange(lit));
            }
            let want = Symbol::from_props([if lit > 0 { P } else { Q }]);
            match letters[j - 1] {
                s if s == pq => letters[j - 1] = want,
                s if s == want => {}
                _ => tautology = true,
            }
        }
        if tautology {
            skipped_tautologies += 1;
            continue;
        }
        negatives.push(LassoWord::new(letters, tail.clone()).expect("non-empty period"));
    }
    let props = Propositions::new(["p", "q"]).expect("distinct names");
    let sample = Sample::new(props, vec![positive], negatives).expect("negatives differ from the positive word");
    Ok(ReductionInstance { sketch, sample, num_vars: n, trivially_unsat, skipped_tautologies })
}

/// `x_j = 1` iff `?_j` is mapped to `q`.
pub fn extract_assignment(subst: &Substitution, instance: &ReductionInstance) -> Result<Vec<bool>, ReductionError> {
    (0..instance.num_vars)
        .map(|j| {
            let id = PlaceholderId(j as u32);
            match subst.get(id) {
                Some(Image::Formula(f)) if f.size() == 1 => match f.root_label() {
                    Label::Prop(name) if name == "q" => Ok(true),
                    Label::Prop(name) if name == "p" => Ok(false),
                    _ => Err(ReductionError::BadImage(id)),
                },
                _ => Err(ReductionError::BadImage(id)),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{apply_substitution, check_consistency, SyntaxDag};
    use crate::sketcher::Sketcher;
    use crate::text::{format_formula, format_word};

    fn cnf(num_vars: usize, clauses: &[&[i32]]) -> CnfInput {
        CnfInput { num_vars, clauses: clauses.iter().map(|c| c.to_vec()).collect() }
    }

    fn all_of(inst: &ReductionInstance, names: &[&str]) -> Substitution {
        let mut s = Substitution::new();
        for (j, name) in names.iter().enumerate() {
            s.insert(PlaceholderId(j as u32), Image::Formula(SyntaxDag::prop(*name)));
        }
        assert!(s.is_complete_for(&inst.sketch));
        s
    }

    #[test]
    fn shape_of_two_variable_instance() {
        let inst = reduce_cnf(&cnf(2, &[&[1, 2]])).unwrap();
        assert_eq!(format_formula(&inst.sketch), "?0{x1} & X ?0{x2}");
        let props = inst.sample.props();
        assert_eq!(format_word(&inst.sample.positives()[0], props), "{p,q} {p,q} | {}");
        assert_eq!(format_word(&inst.sample.negatives()[0], props), "{p} {p} | {}");
        let s = all_of(&inst, &["q", "p"]);
        let f = apply_substitution(&inst.sketch, &s).unwrap();
        assert!(check_consistency(&f, &inst.sample).unwrap().consistent());
        assert_eq!(extract_assignment(&s, &inst).unwrap(), vec![true, false]);
    }

    #[test]
    fn contradiction_is_restricted_unsat() {
        let inst = reduce_cnf(&cnf(1, &[&[1], &[-1]])).unwrap();
        let r = Sketcher::default().decide_existence(&inst.sketch, &inst.sample, true).unwrap();
        assert_eq!(r.exists, Some(false));
        for name in ["p", "q"] {
            let f = apply_substitution(&inst.sketch, &all_of(&inst, &[name])).unwrap();
            assert!(!check_consistency(&f, &inst.sample).unwrap().consistent());
        }
    }

    #[test]
    fn negative_clauses_are_satisfied_by_all_p() {
        let inst = reduce_cnf(&cnf(2, &[&[-1, -2]])).unwrap();
        let s = all_of(&inst, &["p", "p"]);
        let v = extract_assignment(&s, &inst).unwrap();
        assert_eq!(v, vec![false, false]);
        assert!(cnf(2, &[&[-1, -2]]).is_satisfied_by(&v));
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(reduce_cnf(&cnf(0, &[])).unwrap_err(), ReductionError::NoVariables);
        let inst = reduce_cnf(&cnf(2, &[])).unwrap();
        assert!(inst.sample.negatives().is_empty());
        assert_eq!(Sketcher::default().decide_existence(&inst.sketch, &inst.sample, true).unwrap().exists, Some(true));
        let inst = reduce_cnf(&cnf(1, &[&[]])).unwrap();
        assert!(inst.trivially_unsat);
        let inst = reduce_cnf(&cnf(2, &[&[1, -1], &[2]])).unwrap();
        assert_eq!((inst.skipped_tautologies, inst.sample.negatives().len()), (1, 1));
        assert_eq!(reduce_cnf(&cnf(1, &[&[2]])).unwrap_err(), ReductionError::LiteralOutOfRange(2));
    }

    #[test]
    fn images_outside_p_q_are_rejected() {
        let inst = reduce_cnf(&cnf(1, &[&[1]])).unwrap();
        let mut s = Substitution::new();
        s.insert(PlaceholderId(0), Image::Formula(SyntaxDag::prop("r")));
        assert_eq!(extract_assignment(&s, &inst).unwrap_err(), ReductionError::BadImage(PlaceholderId(0)));
    }
}
