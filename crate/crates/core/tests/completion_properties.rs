use std::collections::BTreeMap;
use std::time::Duration;

use ltlsketch::ltl::{check_consistency, DagBuilder, HoleKind, Label, PlaceholderId, Propositions, Sample, Sketch};
use ltlsketch::reduction::{extract_assignment, reduce_cnf};
use ltlsketch::sketcher::{Limits, Sketcher, Status};
use ltlsketch_testkit::{
    brute_force_sat, enumerate_formulas, naive_consistent, naive_eval, prop_names, random_cnf, random_formula,
    random_sample, random_word, search_completion,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_sketch<R: Rng>(rng: &mut R) -> Sketch {
    let size = rng.gen_range(1..=5);
    let base = random_formula(rng, &prop_names(2), size);
    let mut b = DagBuilder::new();
    let mut handles = vec![0; base.size()];
    let mut next = 0;
    for i in (0..base.size()).rev() {
        let n = base.node(i);
        let hole = rng.gen_bool(0.35);
        next += 1;
        let label = match &n.label {
            _ if !hole => n.label.clone(),
            Label::Prop(_) => Label::Hole(HoleKind::Formula, PlaceholderId(next)),
            Label::Unary(_) => Label::Hole(HoleKind::Unary, PlaceholderId(next)),
            Label::Binary(_) => Label::Hole(HoleKind::Binary, PlaceholderId(next)),
            other => other.clone(),
        };
        handles[i] = b.add(label, n.left.map(|c| handles[c]), n.right.map(|c| handles[c]));
    }
    Sketch::new(b.build(handles[0]), BTreeMap::new()).unwrap()
}

fn small_sample<R: Rng>(rng: &mut R) -> Sample {
    random_sample(rng, 2, 3, 3, 2, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn algorithms_agree_and_are_sound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sketch = random_sketch(&mut rng);
        let sample = small_sample(&mut rng);
        let limits = Limits { max_n: sketch.size() + 6, timeout: Some(Duration::from_secs(10)) };
        let sketcher = Sketcher { limits, ..Sketcher::default() };
        let exists = sketcher.decide_existence(&sketch, &sample, false).unwrap().exists.unwrap();
        let learned = sketcher.complete_via_learning(&sketch, &sample).unwrap();
        let incremental = sketcher.complete_incremental(&sketch, &sample).unwrap();
        // Hitting the size cap or the clock is inconclusive, never a verdict.
        for r in [&learned, &incremental] {
            if exists {
                prop_assert_ne!(r.status, Status::NoSolution);
            } else {
                prop_assert_eq!(r.status, Status::NoSolution);
            }
        }
        if !exists {
            let candidates = enumerate_formulas(&["p", "q"], 3);
            prop_assert!(search_completion(&sketch, &sample, &candidates).is_none());
        }
        for r in [&learned, &incremental] {
            if let Some(f) = &r.formula {
                prop_assert!(check_consistency(f, &sample).unwrap().consistent());
                prop_assert!(naive_consistent(f, &sample));
            }
        }
    }

    #[test]
    fn brute_force_completions_imply_existence(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sketch = random_sketch(&mut rng);
        let sample = small_sample(&mut rng);
        let candidates = enumerate_formulas(&["p", "q"], 2);
        if search_completion(&sketch, &sample, &candidates).is_some() {
            prop_assert_eq!(Sketcher::default().decide_existence(&sketch, &sample, false).unwrap().exists, Some(true));
        }
    }

    #[test]
    fn learner_is_no_larger_than_a_planted_formula(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let names = prop_names(2);
        let size = rng.gen_range(1..=4);
        let planted = random_formula(&mut rng, &names, size);
        let props = Propositions::new(names).unwrap();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for _ in 0..5 {
            let w = random_word(&mut rng, 2, 3, 2);
            if naive_eval(&planted, &w, &props, 0) { pos.push(w) } else { neg.push(w) }
        }
        let sample = Sample::new(props, pos, neg).unwrap();
        let r = Sketcher::default().learn_minimal(&sample).unwrap();
        prop_assert_eq!(r.status, Status::Completed);
        prop_assert!(r.n_final.unwrap() <= planted.size());
    }

    #[test]
    fn reduction_matches_cnf_satisfiability(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cnf = random_cnf(&mut rng, 5, 8);
        let inst = reduce_cnf(&cnf).unwrap();
        let sketcher = Sketcher::default();
        let restricted = sketcher.decide_existence(&inst.sketch, &inst.sample, true).unwrap();
        prop_assert_eq!(restricted.exists == Some(true), brute_force_sat(&cnf).is_some());
        if let Some(decoding) = restricted.decoding {
            let assignment = extract_assignment(decoding.restricted.as_ref().unwrap(), &inst).unwrap();
            prop_assert!(cnf.is_satisfied_by(&assignment));
            let unrestricted = sketcher.decide_existence(&inst.sketch, &inst.sample, false).unwrap();
            prop_assert_eq!(unrestricted.exists, Some(true));
        }
    }
}
