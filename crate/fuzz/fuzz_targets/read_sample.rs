#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    if let Ok(sample) = ltlsketch::text::read_sample(s) {
        let again = ltlsketch::text::read_sample(&ltlsketch::text::write_sample(&sample)).unwrap();
        assert_eq!(again, sample);
    }
});
