//! Property patterns the benchmark formulas are drawn from: absence,
//! existence, universality, response, precedence and their scoped variants.

pub const PATTERNS: [&str; 12] = [
    "G !p",
    "F p",
    "G p",
    "G (p -> F q)",
    "G (q -> G !p)",
    "F (p & F q)",
    "!p U q",
    "G (p -> X q)",
    "F q -> (!p U q)",
    "G F p",
    "F G p",
    "(p U G q) | F G q",
];
