use ltlsketch::sat::{tseitin, Backend, Cnf, SolveOptions, SolveOutcome};
use ltlsketch_testkit::{brute_force_sat, random_cnf, random_prop_formula, truth_table_sat};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn tseitin_solver_matches_truth_table(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vars = rng.gen_range(1..=12);
        let f = random_prop_formula(&mut rng, vars, 5);
        let cnf = tseitin(&f, vars);
        let expected = truth_table_sat(&f, vars);
        match Backend::Embedded.solve(&cnf, &SolveOptions { seed, timeout: None }).unwrap() {
            SolveOutcome::Sat(model) => {
                prop_assert!(expected);
                prop_assert_eq!(model.len(), vars as usize);
                prop_assert!(f.eval(&|v| model.value(v)));
            }
            SolveOutcome::Unsat => prop_assert!(!expected),
            SolveOutcome::Timeout => prop_assert!(false, "no timeout was set"),
        }
    }

    #[test]
    fn dimacs_instances_match_enumeration(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let input = random_cnf(&mut rng, 8, 30);
        let cnf = Cnf::from_dimacs(input.num_vars as u32, &input.clauses);
        let expected = brute_force_sat(&input).is_some();
        match Backend::Embedded.solve(&cnf, &SolveOptions::default()).unwrap() {
            SolveOutcome::Sat(model) => {
                prop_assert!(expected);
                prop_assert!(input.is_satisfied_by(model.values()));
            }
            SolveOutcome::Unsat => prop_assert!(!expected),
            SolveOutcome::Timeout => prop_assert!(false, "no timeout was set"),
        }
    }
}
