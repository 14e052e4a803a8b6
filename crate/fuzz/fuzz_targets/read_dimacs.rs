#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    if let Ok(cnf) = ltlsketch::text::read_dimacs(s) {
        assert_eq!(ltlsketch::text::read_dimacs(&cnf.to_dimacs()).unwrap(), cnf);
    }
});
