#![no_main]

use libfuzzer_sys::fuzz_target;
use ltlsketch::text::{format_formula, parse_formula};

// Printing a parsed sketch and parsing it again gives the same DAG.
fuzz_target!(|s: &str| {
    if let Ok(sketch) = parse_formula(s) {
        let text = format_formula(&sketch);
        let again = parse_formula(&text).unwrap();
        assert_eq!(again.dag(), sketch.dag(), "{text}");
    }
});
