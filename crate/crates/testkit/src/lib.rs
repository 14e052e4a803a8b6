//! Brute-force oracles and random generators shared by the test suites.
//!
//! The oracles deliberately avoid the library's algorithms: evaluation walks
//! absolute positions of the unrolled word, satisfiability enumerates
//! assignments, and completion search enumerates formulas.

use std::collections::HashMap;

use ltlsketch::lasso::{LassoWord, Symbol};
use ltlsketch::ltl::{
    apply_substitution, BinaryOp, DagBuilder, HoleKind, Image, Label, Propositions, Sample, Sketch, Substitution,
    SyntaxDag, UnaryOp,
};
use ltlsketch::sat::{PropFormula, PropVar};
use ltlsketch::text::CnfInput;
use rand::Rng;

/// Truth of `f` at absolute position `t` of `w`. Temporal operators scan the
/// `|uv|` positions starting at their own position, which cover every
/// distinct suffix reachable from it.
pub fn naive_eval(f: &SyntaxDag, w: &LassoWord, props: &Propositions, t: usize) -> bool {
    let mut memo = HashMap::new();
    naive_at(f, 0, w, props, t, &mut memo)
}

fn naive_at(
    f: &SyntaxDag,
    node: usize,
    w: &LassoWord,
    props: &Propositions,
    t: usize,
    memo: &mut HashMap<(usize, usize), bool>,
) -> bool {
    if let Some(&v) = memo.get(&(node, t)) {
        return v;
    }
    let n = f.node(node);
    let horizon = w.len();
    let v = match &n.label {
        Label::True => true,
        Label::False => false,
        Label::Prop(name) => {
            let i = props.index_of(name).expect("formula over the sample's propositions");
            w.symbol_at(t).contains(i)
        }
        Label::Unary(op) => {
            let c = n.left.unwrap();
            match op {
                UnaryOp::Not => !naive_at(f, c, w, props, t, memo),
                UnaryOp::Next => naive_at(f, c, w, props, t + 1, memo),
                UnaryOp::Finally => (t..t + horizon).any(|s| naive_at(f, c, w, props, s, memo)),
                UnaryOp::Globally => (t..t + horizon).all(|s| naive_at(f, c, w, props, s, memo)),
            }
        }
        Label::Binary(op) => {
            let (l, r) = (n.left.unwrap(), n.right.unwrap());
            match op {
                BinaryOp::Or => naive_at(f, l, w, props, t, memo) || naive_at(f, r, w, props, t, memo),
                BinaryOp::And => naive_at(f, l, w, props, t, memo) && naive_at(f, r, w, props, t, memo),
                BinaryOp::Until => {
                    let mut holds = false;
                    for s in t..t + horizon {
                        if naive_at(f, r, w, props, s, memo) {
                            holds = true;
                            break;
                        }
                        if !naive_at(f, l, w, props, s, memo) {
                            break;
                        }
                    }
                    holds
                }
            }
        }
        Label::Hole(..) => panic!("naive_eval needs a formula without placeholders"),
    };
    memo.insert((node, t), v);
    v
}

pub fn naive_consistent(f: &SyntaxDag, sample: &Sample) -> bool {
    let props = sample.props();
    sample.positives().iter().all(|w| naive_eval(f, w, props, 0))
        && sample.negatives().iter().all(|w| !naive_eval(f, w, props, 0))
}

/// A satisfying assignment by enumeration; `None` if there is none.
pub fn brute_force_sat(cnf: &CnfInput) -> Option<Vec<bool>> {
    assert!(cnf.num_vars <= 24, "truth tables are for small instances");
    (0u64..1 << cnf.num_vars)
        .map(|bits| (0..cnf.num_vars).map(|i| bits >> i & 1 == 1).collect::<Vec<_>>())
        .find(|a| cnf.is_satisfied_by(a))
}

/// Whether `f` has a model over variables `1..=num_vars`, by enumeration.
pub fn truth_table_sat(f: &PropFormula, num_vars: u32) -> bool {
    assert!(num_vars <= 24, "truth tables are for small instances");
    (0u64..1 << num_vars).any(|bits| f.eval(&|v: PropVar| bits >> (v.index() - 1) & 1 == 1))
}

/// All formulas over `props` whose syntax tree has at most `max_size`
/// nodes, without constants. Grouped by tree size, duplicates removed.
pub fn enumerate_formulas(props: &[&str], max_size: usize) -> Vec<SyntaxDag> {
    let mut by_size: Vec<Vec<SyntaxDag>> = vec![Vec::new()];
    for size in 1..=max_size {
        let mut level = Vec::new();
        if size == 1 {
            level.extend(props.iter().map(|p| SyntaxDag::prop(*p)));
        } else {
            for op in UnaryOp::ALL {
                for c in &by_size[size - 1] {
                    let mut b = DagBuilder::new();
                    let c = b.import(c, 0);
                    let root = b.unary(op, c);
                    level.push(b.build(root));
                }
            }
            for ls in 1..size - 1 {
                for l in &by_size[ls] {
                    for r in &by_size[size - 1 - ls] {
                        for op in BinaryOp::ALL {
                            let mut b = DagBuilder::new();
                            let (li, ri) = (b.import(l, 0), b.import(r, 0));
                            let root = b.binary(op, li, ri);
                            level.push(b.build(root));
                        }
                    }
                }
            }
        }
        by_size.push(level);
    }
    let mut seen = std::collections::HashSet::new();
    by_size.into_iter().flatten().filter(|f| seen.insert(f.clone())).collect()
}

/// Some complete substitution whose Type-0 images come from `candidates`
/// and whose result is consistent with `sample` under [`naive_consistent`].
pub fn search_completion(sketch: &Sketch, sample: &Sample, candidates: &[SyntaxDag]) -> Option<SyntaxDag> {
    let holes = sketch.placeholders();
    let mut choice = vec![0usize; holes.len()];
    let range = |kind: HoleKind| match kind {
        HoleKind::Formula => candidates.len(),
        HoleKind::Unary => UnaryOp::ALL.len(),
        HoleKind::Binary => BinaryOp::ALL.len(),
    };
    if holes.iter().any(|h| range(h.kind) == 0) {
        return None;
    }
    loop {
        let mut subst = Substitution::new();
        for (h, &c) in holes.iter().zip(&choice) {
            let image = match h.kind {
                HoleKind::Formula => Image::Formula(candidates[c].clone()),
                HoleKind::Unary => Image::Unary(UnaryOp::ALL[c]),
                HoleKind::Binary => Image::Binary(BinaryOp::ALL[c]),
            };
            subst.insert(h.id, image);
        }
        let f = apply_substitution(sketch, &subst).expect("complete substitution");
        if naive_consistent(&f, sample) {
            return Some(f);
        }
        let mut i = 0;
        loop {
            if i == holes.len() {
                return None;
            }
            choice[i] += 1;
            if choice[i] < range(holes[i].kind) {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

pub fn prop_names(count: usize) -> Vec<String> {
    const BASE: [&str; 6] = ["p", "q", "r", "s", "t", "u"];
    (0..count).map(|i| BASE.get(i).map_or_else(|| format!("a{i}"), |s| s.to_string())).collect()
}

pub fn random_symbol<R: Rng>(rng: &mut R, num_props: usize, density: f64) -> Symbol {
    Symbol::from_props((0..num_props).filter(|_| rng.gen_bool(density)))
}

/// A word with `|u| ≤ max_u`, `1 ≤ |v| ≤ max_v`.
pub fn random_word<R: Rng>(rng: &mut R, num_props: usize, max_u: usize, max_v: usize) -> LassoWord {
    let u = rng.gen_range(0..=max_u);
    let v = rng.gen_range(1..=max_v.max(1));
    let mut sym = || random_symbol(rng, num_props, 0.5);
    let prefix = (0..u).map(|_| sym()).collect();
    let period = (0..v).map(|_| sym()).collect();
    LassoWord::new(prefix, period).expect("non-empty period")
}

/// A formula whose syntax tree has exactly `size` nodes.
pub fn random_formula<R: Rng>(rng: &mut R, props: &[String], size: usize) -> SyntaxDag {
    let mut b = DagBuilder::new();
    let root = random_tree(rng, props, size.max(1), &mut b);
    b.build(root)
}

fn random_tree<R: Rng>(rng: &mut R, props: &[String], size: usize, b: &mut DagBuilder) -> usize {
    if size == 1 {
        return b.prop(&props[rng.gen_range(0..props.len())]);
    }
    if size == 2 || rng.gen_bool(0.4) {
        let op = UnaryOp::ALL[rng.gen_range(0..4)];
        let c = random_tree(rng, props, size - 1, b);
        return b.unary(op, c);
    }
    let op = BinaryOp::ALL[rng.gen_range(0..3)];
    let left = rng.gen_range(1..size - 1);
    let l = random_tree(rng, props, left, b);
    let r = random_tree(rng, props, size - 1 - left, b);
    b.binary(op, l, r)
}

/// Disjoint positive and negative words, at least one word overall.
pub fn random_sample<R: Rng>(
    rng: &mut R,
    num_props: usize,
    max_pos: usize,
    max_neg: usize,
    max_u: usize,
    max_v: usize,
) -> Sample {
    let props = Propositions::new(prop_names(num_props)).expect("distinct names");
    loop {
        let pos: Vec<LassoWord> =
            (0..rng.gen_range(0..=max_pos)).map(|_| random_word(rng, num_props, max_u, max_v)).collect();
        let canon: Vec<LassoWord> = pos.iter().map(LassoWord::canonicalize).collect();
        let neg: Vec<LassoWord> = (0..rng.gen_range(0..=max_neg))
            .map(|_| random_word(rng, num_props, max_u, max_v))
            .filter(|w| !canon.contains(&w.canonicalize()))
            .collect();
        if pos.is_empty() && neg.is_empty() {
            continue;
        }
        return Sample::new(props.clone(), pos, neg).expect("disjoint by construction");
    }
}

/// Clauses of one to three literals over `1..=num_vars`.
pub fn random_cnf<R: Rng>(rng: &mut R, max_vars: usize, max_clauses: usize) -> CnfInput {
    let num_vars = rng.gen_range(1..=max_vars);
    let clauses = (0..rng.gen_range(0..=max_clauses))
        .map(|_| {
            (0..rng.gen_range(1..=3))
                .map(|_| {
                    let v = rng.gen_range(1..=num_vars) as i32;
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect();
    CnfInput { num_vars, clauses }
}

/// A formula over variables `1..=num_vars` with connective depth at most `depth`.
pub fn random_prop_formula<R: Rng>(rng: &mut R, num_vars: u32, depth: usize) -> PropFormula {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..20) {
            0 => PropFormula::constant(rng.gen_bool(0.5)),
            _ => PropFormula::lit(PropVar::new(rng.gen_range(1..=num_vars)), rng.gen_bool(0.7)),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..6) {
        0 => PropFormula::not(random_prop_formula(rng, num_vars, d)),
        1 | 2 => {
            let k = rng.gen_range(2..=4);
            let items: Vec<PropFormula> = (0..k).map(|_| random_prop_formula(rng, num_vars, d)).collect();
            if rng.gen_bool(0.5) {
                PropFormula::and(items)
            } else {
                PropFormula::or(items)
            }
        }
        3 => {
            let a = random_prop_formula(rng, num_vars, d);
            PropFormula::implies(a, random_prop_formula(rng, num_vars, d))
        }
        _ => {
            let a = random_prop_formula(rng, num_vars, d);
            PropFormula::iff(a, random_prop_formula(rng, num_vars, d))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ltlsketch::text::{format_dag, parse_ltl, parse_word};

    fn word(text: &str, props: &Propositions) -> LassoWord {
        parse_word(text, |n| props.index_of(n).ok_or_else(|| n.to_string())).unwrap()
    }

    #[test]
    fn naive_eval_on_hand_cases() {
        let props = Propositions::new(["p", "q"]).unwrap();
        let w = word("{p,q} {p} | {q}", &props);
        let cases = [
            ("p | X q", [true, true, true]),
            ("F G q", [true, true, true]),
            ("p U q", [true, true, true]),
            ("X p & q", [true, false, false]),
        ];
        for (text, expected) in cases {
            let f = parse_ltl(text).unwrap();
            for (t, &e) in expected.iter().enumerate() {
                assert_eq!(naive_eval(&f, &w, &props, t), e, "{text} at {t}");
            }
        }
        let g = parse_ltl("G p").unwrap();
        assert!(!naive_eval(&g, &w, &props, 0));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_formulas(&["p", "q"], 1).len(), 2);
        assert_eq!(enumerate_formulas(&["p", "q"], 2).len(), 2 + 8);
        assert_eq!(enumerate_formulas(&["p", "q"], 3).len(), 2 + 8 + 32 + 12);
        assert!(enumerate_formulas(&["p"], 3).iter().any(|f| format_dag(f) == "p U p"));
    }

    #[test]
    fn brute_force_sat_cases() {
        assert!(brute_force_sat(&CnfInput { num_vars: 1, clauses: vec![vec![1], vec![-1]] }).is_none());
        assert_eq!(
            brute_force_sat(&CnfInput { num_vars: 2, clauses: vec![vec![2], vec![-1]] }),
            Some(vec![false, true])
        );
        let x = PropFormula::var(PropVar::new(1));
        assert!(!truth_table_sat(&PropFormula::and([x.clone(), PropFormula::not(x)]), 1));
    }

    #[test]
    fn random_formula_has_requested_tree_size() {
        let mut rng = rand::thread_rng();
        let props = prop_names(2);
        for size in 1..8 {
            let f = random_formula(&mut rng, &props, size);
            assert!(f.size() <= size);
        }
    }
}
