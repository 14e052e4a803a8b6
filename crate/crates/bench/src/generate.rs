use std::collections::HashSet;

use ltlsketch::lasso::{LassoWord, Symbol};
use ltlsketch::ltl::{
    evaluate, BinaryOp, DagBuilder, HoleKind, Image, Label, PlaceholderId, Propositions, Sample, Sketch, Substitution,
    SyntaxDag, UnaryOp,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::BenchError;

/// Word distribution for [`generate_sample`]: `|u| ≤ max_u`,
/// `1 ≤ |v| ≤ max_v`, each proposition present with probability `density`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenParams {
    pub max_u: usize,
    pub max_v: usize,
    pub density: f64,
    /// Draws allowed while a class is still short of its count.
    pub attempt_cap: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { max_u: 8, max_v: 4, density: 0.5, attempt_cap: 10_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Counts {
    pub positives: usize,
    pub negatives: usize,
}

fn random_word(rng: &mut ChaCha8Rng, num_props: usize, params: &GenParams) -> LassoWord {
    let symbol = |rng: &mut ChaCha8Rng| Symbol::from_props((0..num_props).filter(|_| rng.gen_bool(params.density)));
    let u = rng.gen_range(0..=params.max_u);
    let v = rng.gen_range(1..=params.max_v.max(1));
    let prefix = (0..u).map(|_| symbol(rng)).collect();
    let period = (0..v).map(|_| symbol(rng)).collect();
    LassoWord::new(prefix, period).expect("non-empty period")
}

/// Draws random words and files them by the verdict of `f`, skipping
/// words equal to one already drawn.
pub fn generate_sample(
    f: &SyntaxDag,
    props: &Propositions,
    counts: Counts,
    params: &GenParams,
    seed: u64,
) -> Result<Sample, BenchError> {
    if f.has_placeholders() {
        return Err(BenchError::Precondition("sample generation needs a formula without placeholders".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    let mut seen = HashSet::new();
    let mut attempts = 0;
    while pos.len() < counts.positives || neg.len() < counts.negatives {
        if attempts == params.attempt_cap {
            let class = if pos.len() < counts.positives { "positive" } else { "negative" };
            return Err(BenchError::AttemptCap { class, attempts });
        }
        attempts += 1;
        let w = random_word(&mut rng, props.len(), params);
        if !seen.insert(w.canonicalize()) {
            continue;
        }
        let verdict = evaluate(f, &w, props).map_err(|e| BenchError::Precondition(e.to_string()))?;
        let (class, want) = if verdict { (&mut pos, counts.positives) } else { (&mut neg, counts.negatives) };
        if class.len() < want {
            class.push(w);
        }
    }
    Ok(Sample::new(props.clone(), pos, neg).expect("classes are disjoint by construction"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SketchKind {
    Type0,
    Type12,
}

impl SketchKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SketchKind::Type0 => "type0",
            SketchKind::Type12 => "type12",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "type0" => Some(SketchKind::Type0),
            "type12" => Some(SketchKind::Type12),
            _ => None,
        }
    }
}

/// Whatever [`derive_sketch`] cut out of the formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Formula(SyntaxDag),
    Unary(UnaryOp),
    Binary(BinaryOp),
}

impl Provenance {
    pub fn substitution(&self) -> Substitution {
        let image = match self {
            Provenance::Formula(f) => Image::Formula(f.clone()),
            Provenance::Unary(op) => Image::Unary(*op),
            Provenance::Binary(op) => Image::Binary(*op),
        };
        let mut s = Substitution::new();
        s.insert(PlaceholderId(0), image);
        s
    }
}

/// Type0: one DAG node whose subformula has size at least `⌊|f|/2⌋`
/// becomes `?0`; the root is only picked when nothing else qualifies.
/// Type12: one operator node becomes `?1` or `?2`.
pub fn derive_sketch(f: &SyntaxDag, kind: SketchKind, seed: u64) -> Result<(Sketch, Provenance), BenchError> {
    if f.has_placeholders() {
        return Err(BenchError::Precondition("sketches are derived from formulas without placeholders".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let candidates: Vec<usize> = match kind {
        SketchKind::Type0 => {
            let half = f.size() / 2;
            let sizes = f.subformula_sizes();
            let big: Vec<usize> = (0..f.size()).filter(|&i| sizes[i] >= half).collect();
            if big.len() > 1 {
                big.into_iter().filter(|&i| i != SyntaxDag::ROOT).collect()
            } else {
                big
            }
        }
        SketchKind::Type12 => (0..f.size()).filter(|&i| f.label(i).arity() > 0).collect(),
    };
    if candidates.is_empty() {
        return Err(BenchError::Precondition(format!(
            "no node of {} can become a {} placeholder",
            f.size(),
            kind.as_str()
        )));
    }
    let target = candidates[rng.gen_range(0..candidates.len())];
    let (hole, provenance) = match f.label(target) {
        _ if kind == SketchKind::Type0 => (HoleKind::Formula, Provenance::Formula(f.subformula(target))),
        Label::Unary(op) => (HoleKind::Unary, Provenance::Unary(*op)),
        Label::Binary(op) => (HoleKind::Binary, Provenance::Binary(*op)),
        _ => unreachable!("operator nodes only"),
    };
    let mut b = DagBuilder::new();
    let mut handles = vec![0; f.size()];
    for i in (0..f.size()).rev() {
        let n = f.node(i);
        let (left, right) = (n.left.map(|c| handles[c]), n.right.map(|c| handles[c]));
        handles[i] = match (i == target, hole) {
            (true, HoleKind::Formula) => b.leaf(Label::Hole(hole, PlaceholderId(0))),
            (true, _) => b.add(Label::Hole(hole, PlaceholderId(0)), left, right),
            (false, _) => b.add(n.label.clone(), left, right),
        };
    }
    let sketch = Sketch::new(b.build(handles[SyntaxDag::ROOT]), Default::default()).expect("one placeholder");
    Ok((sketch, provenance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ltlsketch::ltl::{apply_substitution, check_consistency};
    use ltlsketch::text::{format_formula, parse_ltl};

    fn props(names: &[&str]) -> Propositions {
        Propositions::new(names.iter().copied()).unwrap()
    }

    #[test]
    fn sample_is_consistent_and_deterministic() {
        let f = parse_ltl("F p").unwrap();
        let c = Counts { positives: 2, negatives: 1 };
        let s = generate_sample(&f, &props(&["p"]), c, &GenParams::default(), 7).unwrap();
        assert_eq!((s.positives().len(), s.negatives().len()), (2, 1));
        assert!(check_consistency(&f, &s).unwrap().consistent());
        assert_eq!(generate_sample(&f, &props(&["p"]), c, &GenParams::default(), 7).unwrap(), s);
    }

    #[test]
    fn tautological_distribution_hits_the_cap() {
        let f = parse_ltl("G p").unwrap();
        let params = GenParams { density: 1.0, attempt_cap: 200, ..GenParams::default() };
        let err = generate_sample(&f, &props(&["p"]), Counts { positives: 1, negatives: 1 }, &params, 1).unwrap_err();
        assert!(matches!(err, BenchError::AttemptCap { class: "negative", .. }));
    }

    #[test]
    fn type12_on_globally() {
        let f = parse_ltl("G(p -> X F q)").unwrap();
        let found: HashSet<String> =
            (0..40).map(|seed| format_formula(&derive_sketch(&f, SketchKind::Type12, seed).unwrap().0)).collect();
        assert!(found.contains("?1 (!p | X F q)"), "{found:?}");
        assert!(derive_sketch(&parse_ltl("p").unwrap(), SketchKind::Type12, 0).is_err());
    }

    #[test]
    fn type0_replaces_a_large_subformula() {
        let f = parse_ltl("(p U G q) | F G q").unwrap();
        assert_eq!(f.size(), 6);
        for seed in 0..20 {
            let (sk, prov) = derive_sketch(&f, SketchKind::Type0, seed).unwrap();
            let Provenance::Formula(sub) = &prov else { panic!("type0 provenance is a formula") };
            assert!(sub.size() >= 3);
            assert_eq!(sk.placeholders_of(HoleKind::Formula).len(), 1);
            assert_eq!(apply_substitution(&sk, &prov.substitution()).unwrap(), f);
        }
    }
}
