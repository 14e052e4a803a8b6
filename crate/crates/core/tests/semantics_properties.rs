use ltlsketch::lasso::suffix_equal;
use ltlsketch::ltl::{
    apply_substitution, build_table, evaluate, BinaryOp, DagBuilder, HoleKind, Image, Label, PlaceholderId,
    Propositions, Sketch, Substitution, SyntaxDag, UnaryOp,
};
use ltlsketch_testkit::{naive_eval, prop_names, random_formula, random_word};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Case {
    props: Propositions,
    formula: SyntaxDag,
    word: ltlsketch::lasso::LassoWord,
}

fn case(seed: u64) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=3);
    let names = prop_names(n);
    let size = rng.gen_range(1..=7);
    let formula = random_formula(&mut rng, &names, size);
    let word = random_word(&mut rng, n, 5, 3);
    Case { props: Propositions::new(names).unwrap(), formula, word }
}

fn wrap(f: &SyntaxDag, build: impl FnOnce(&mut DagBuilder, usize) -> usize) -> SyntaxDag {
    let mut b = DagBuilder::new();
    let inner = b.import(f, 0);
    let root = build(&mut b, inner);
    b.build(root)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn table_matches_naive_unrolling(seed in any::<u64>()) {
        let c = case(seed);
        let table = build_table(&c.formula, &c.word, &c.props).unwrap();
        for i in 0..c.formula.size() {
            let sub = c.formula.subformula(i);
            for t in 0..c.word.len() {
                prop_assert_eq!(table.get(i, t), naive_eval(&sub, &c.word, &c.props, t));
                prop_assert_eq!(table.get(i, t), evaluate(&sub, &c.word.suffix(t).unwrap(), &c.props).unwrap());
            }
        }
    }

    #[test]
    fn evaluation_ignores_representation(seed in any::<u64>()) {
        let c = case(seed);
        let a = evaluate(&c.formula, &c.word, &c.props).unwrap();
        prop_assert_eq!(a, evaluate(&c.formula, &c.word.canonicalize(), &c.props).unwrap());
    }

    #[test]
    fn sugar_identities(seed in any::<u64>()) {
        let c = case(seed);
        let e = |f: &SyntaxDag| evaluate(f, &c.word, &c.props).unwrap();
        let fin = wrap(&c.formula, |b, x| b.unary(UnaryOp::Finally, x));
        let until = wrap(&c.formula, |b, x| {
            let t = b.leaf(Label::True);
            b.binary(BinaryOp::Until, t, x)
        });
        prop_assert_eq!(e(&fin), e(&until));
        let glob = wrap(&c.formula, |b, x| b.unary(UnaryOp::Globally, x));
        let dual = wrap(&c.formula, |b, x| {
            let n = b.unary(UnaryOp::Not, x);
            let f = b.unary(UnaryOp::Finally, n);
            b.unary(UnaryOp::Not, f)
        });
        prop_assert_eq!(e(&glob), e(&dual));
    }

    #[test]
    fn tables_respect_equal_suffixes(seed in any::<u64>(), seed2 in any::<u64>()) {
        let c = case(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed2);
        let other = random_word(&mut rng, c.props.len(), 5, 3);
        let t1 = build_table(&c.formula, &c.word, &c.props).unwrap();
        let t2 = build_table(&c.formula, &other, &c.props).unwrap();
        for a in 0..c.word.len() {
            for b in 0..other.len() {
                if suffix_equal(&c.word, a, &other, b).unwrap() {
                    for i in 0..c.formula.size() {
                        prop_assert_eq!(t1.get(i, a), t2.get(i, b));
                    }
                }
            }
        }
    }

    #[test]
    fn substitution_size_bound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let names = prop_names(2);
        let size = rng.gen_range(2..=7);
        let base = random_formula(&mut rng, &names, size);
        // Replace every leaf with the same Type-0 hole with some probability.
        let hole = Label::Hole(HoleKind::Formula, PlaceholderId(0));
        let mut b = DagBuilder::new();
        let mut handles = vec![0; base.size()];
        let mut holes = 0;
        for i in (0..base.size()).rev() {
            let n = base.node(i);
            let label = if n.label.arity() == 0 && rng.gen_bool(0.5) {
                holes += 1;
                hole.clone()
            } else {
                n.label.clone()
            };
            handles[i] = b.add(label, n.left.map(|c| handles[c]), n.right.map(|c| handles[c]));
        }
        let sk = Sketch::new(b.build(handles[0]), Default::default()).unwrap();
        let size = rng.gen_range(1..=5);
        let image = random_formula(&mut rng, &names, size);
        let mut s = Substitution::new();
        if holes > 0 {
            s.insert(PlaceholderId(0), Image::Formula(image.clone()));
        }
        let f = apply_substitution(&sk, &s).unwrap();
        let type0 = sk.nodes_of(HoleKind::Formula).len();
        let images = if type0 > 0 { image.size() } else { 0 };
        prop_assert!(f.size() <= sk.size() - type0 + images);
    }
}
