use std::collections::HashMap;

use super::catalog::{Choice, Mode, VarCatalog};
use super::{guarded_definition, op_semantics, validate, EncodeError, Encoding, Op};
use crate::lasso::LassoWord;
use crate::ltl::{
    BinaryOp, HoleKind, Image, Label, PlaceholderId, Polarity, Sample, Sketch, Substitution, SyntaxDag, UnaryOp,
};
use crate::sat::{Model, PropFormula, PropVar};

/// `Φ = Φ¹² ∧ Φ_sem ∧ Φ_con ∧ Φ_suf`: satisfiable iff some complete
/// substitution makes the sketch consistent with the sample. In restricted
/// mode Type-0 placeholders may only become propositions.
pub fn encode_existence(sketch: &Sketch, sample: &Sample, restricted: bool) -> Result<Encoding, EncodeError> {
    validate(sketch, sample)?;
    let dag = sketch.dag();
    let props = sample.props();
    let words: Vec<(Polarity, &LassoWord)> = sample.words().collect();
    let lens: Vec<usize> = words.iter().map(|(_, w)| w.len()).collect();
    let mut cat = VarCatalog::new(Mode::Existence { restricted }, dag.size(), dag.size(), &lens);
    for p in sketch.placeholders() {
        match p.kind {
            HoleKind::Unary => cat.add_placeholder_x(p.id, UnaryOp::ALL.map(Choice::Unary)),
            HoleKind::Binary => cat.add_placeholder_x(p.id, BinaryOp::ALL.map(Choice::Binary)),
            HoleKind::Formula => {}
        }
    }
    let type0 = sketch.nodes_of(HoleKind::Formula);
    if restricted {
        for &i in &type0 {
            cat.add_node_x(i, (0..props.len()).map(Choice::Prop));
        }
    }

    let mut parts = Vec::new();
    let choice_vars = |choices: &[(Choice, PropVar)]| choices.iter().map(|&(_, v)| v).collect::<Vec<_>>();
    for p in sketch.placeholders() {
        if p.kind != HoleKind::Formula {
            parts.push(PropFormula::exactly_one(&choice_vars(cat.placeholder_choices(p.id))));
        }
    }
    for &i in &type0 {
        if restricted {
            parts.push(PropFormula::exactly_one(&choice_vars(cat.node_choices(i))));
        }
    }

    for (k, (_, w)) in words.iter().enumerate() {
        for (i, node) in dag.nodes().iter().enumerate() {
            let y = |t: usize| cat.y(k, i, t);
            let left = node.left.map(|c| cat.y_row(k, c));
            let right = node.right.map(|c| cat.y_row(k, c));
            match &node.label {
                Label::Prop(name) => {
                    let p = props.index_of(name).expect("validated");
                    parts.extend((0..w.len()).map(|t| PropFormula::lit(y(t), w.symbol_at(t).contains(p))));
                }
                Label::True | Label::False => {
                    let value = node.label == Label::True;
                    parts.extend((0..w.len()).map(|t| PropFormula::lit(y(t), value)));
                }
                Label::Unary(op) => {
                    let op = Op::Unary(*op);
                    parts.extend(
                        (0..w.len())
                            .map(|t| guarded_definition(&[], y(t), op_semantics(op, w, t, left.unwrap(), None))),
                    );
                }
                Label::Binary(op) => {
                    let op = Op::Binary(*op);
                    parts.extend(
                        (0..w.len())
                            .map(|t| guarded_definition(&[], y(t), op_semantics(op, w, t, left.unwrap(), right))),
                    );
                }
                Label::Hole(HoleKind::Unary | HoleKind::Binary, id) => {
                    for &(choice, x) in cat.placeholder_choices(*id) {
                        let op = match choice {
                            Choice::Unary(op) => Op::Unary(op),
                            Choice::Binary(op) => Op::Binary(op),
                            Choice::Prop(_) => unreachable!("operator placeholders choose operators"),
                        };
                        parts.extend(
                            (0..w.len())
                                .map(|t| guarded_definition(&[x], y(t), op_semantics(op, w, t, left.unwrap(), right))),
                        );
                    }
                }
                Label::Hole(HoleKind::Formula, _) => {
                    for &(choice, x) in cat.node_choices(i) {
                        let Choice::Prop(p) = choice else { unreachable!() };
                        parts.extend((0..w.len()).map(|t| {
                            PropFormula::implies(
                                PropFormula::var(x),
                                PropFormula::lit(y(t), w.symbol_at(t).contains(p)),
                            )
                        }));
                    }
                }
            }
        }
    }

    for (k, (polarity, _)) in words.iter().enumerate() {
        parts.push(PropFormula::lit(cat.y(k, SyntaxDag::ROOT, 0), *polarity == Polarity::Positive));
    }

    // Equal suffixes get equal values; chaining each class is equivalent to
    // constraining all pairs.
    let classes = suffix_classes(&words);
    for &i in &type0 {
        for class in &classes {
            for pair in class.windows(2) {
                let (a, b) = (cat.y(pair[0].0, i, pair[0].1), cat.y(pair[1].0, i, pair[1].1));
                parts.push(PropFormula::iff(PropFormula::var(a), PropFormula::var(b)));
            }
        }
    }

    Ok(Encoding { formula: PropFormula::and(parts), catalog: cat })
}

/// Positions `(word, t)` grouped by the canonical form of `w[t, ∞)`, in
/// order of first occurrence.
fn suffix_classes(words: &[(Polarity, &LassoWord)]) -> Vec<Vec<(usize, usize)>> {
    let mut index: HashMap<LassoWord, usize> = HashMap::new();
    let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
    for (k, (_, w)) in words.iter().enumerate() {
        for t in 0..w.len() {
            let key = w.suffix(t).expect("t < |uv|").canonicalize();
            let c = *index.entry(key).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[c].push((k, t));
        }
    }
    classes
}

/// Values a model assigns to the suffixes below one Type-0 node. Suffixes
/// are canonical and distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuffixLabeling {
    pub node: usize,
    pub placeholder: PlaceholderId,
    pub positives: Vec<LassoWord>,
    pub negatives: Vec<LassoWord>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExistenceDecoding {
    /// Images for Type-1/2 placeholders.
    pub operators: Substitution,
    pub labelings: Vec<SuffixLabeling>,
    /// Complete substitution, available in restricted mode.
    pub restricted: Option<Substitution>,
}

fn chosen<T: Copy>(model: &Model, choices: &[(T, PropVar)], what: &str) -> Result<T, EncodeError> {
    let mut picked = choices.iter().filter(|&&(_, v)| model.value(v)).map(|&(c, _)| c);
    match (picked.next(), picked.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(EncodeError::Internal(format!("{what} does not have exactly one choice"))),
    }
}

pub fn decode_existence_model(
    model: &Model,
    catalog: &VarCatalog,
    sketch: &Sketch,
    sample: &Sample,
) -> Result<ExistenceDecoding, EncodeError> {
    let mut operators = Substitution::new();
    for p in sketch.placeholders() {
        if p.kind == HoleKind::Formula {
            continue;
        }
        let image = match chosen(model, catalog.placeholder_choices(p.id), "operator placeholder")? {
            Choice::Unary(op) => Image::Unary(op),
            Choice::Binary(op) => Image::Binary(op),
            Choice::Prop(_) => return Err(EncodeError::Internal("operator placeholder chose a proposition".into())),
        };
        operators.insert(p.id, image);
    }

    let words: Vec<(Polarity, &LassoWord)> = sample.words().collect();
    let mut labelings = Vec::new();
    for i in sketch.nodes_of(HoleKind::Formula) {
        let Label::Hole(_, id) = *sketch.dag().label(i) else { unreachable!() };
        let mut seen: HashMap<LassoWord, bool> = HashMap::new();
        let mut labeling = SuffixLabeling { node: i, placeholder: id, positives: Vec::new(), negatives: Vec::new() };
        for (k, (_, w)) in words.iter().enumerate() {
            for t in 0..w.len() {
                let value = model.value(catalog.y(k, i, t));
                let suffix = w.suffix(t).expect("t < |uv|").canonicalize();
                match seen.get(&suffix) {
                    Some(&prev) if prev != value => {
                        return Err(EncodeError::Internal(format!(
                            "equal suffixes of word {k} disagree below node {i}"
                        )))
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(suffix.clone(), value);
                        if value { &mut labeling.positives } else { &mut labeling.negatives }.push(suffix);
                    }
                }
            }
        }
        labelings.push(labeling);
    }

    let restricted = match catalog.mode() {
        Mode::Existence { restricted: true } => {
            let mut subst = operators.clone();
            for i in sketch.nodes_of(HoleKind::Formula) {
                let Label::Hole(_, id) = *sketch.dag().label(i) else { unreachable!() };
                let Choice::Prop(p) = chosen(model, catalog.node_choices(i), "Type-0 placeholder")? else {
                    return Err(EncodeError::Internal("Type-0 placeholder chose an operator".into()));
                };
                subst.insert(id, Image::Formula(SyntaxDag::prop(sample.props().name(p))));
            }
            Some(subst)
        }
        _ => None,
    };
    Ok(ExistenceDecoding { operators, labelings, restricted })
}
