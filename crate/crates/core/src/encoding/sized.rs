use std::collections::HashMap;

use super::catalog::{Choice, Mode, VarCatalog};
use super::{guarded_definition, op_semantics, validate, EncodeError, Encoding, Op};
use crate::lasso::LassoWord;
use crate::ltl::{
    apply_substitution, check_consistency, BinaryOp, DagBuilder, HoleKind, Image, Label, Polarity, Sample, Sketch,
    Substitution, SyntaxDag, UnaryOp,
};
use crate::sat::{Model, PropFormula, PropVar};

/// `Φ_n`: satisfiable iff the sketch can be completed into a formula that is
/// consistent with the sample and whose encoding uses at most `n` nodes.
///
/// Nodes `0..k` are the sketch. Type-0 sketch nodes and the pool
/// `k..n` get a label from `props ∪ {¬,X,F,G} ∪ {∨,∧,U}`. A Type-0 node
/// picks children from the whole pool, pool node `i` from `i+1..n`. The
/// chosen children's values are copied into per-node rows `L`, `R`, so the
/// operator semantics are stated once per label instead of once per child
/// pair.
pub fn encode_sized(sketch: &Sketch, sample: &Sample, n: usize) -> Result<Encoding, EncodeError> {
    validate(sketch, sample)?;
    let dag = sketch.dag();
    let k = dag.size();
    if n < k {
        return Err(EncodeError::SizeTooSmall { n, min: k });
    }
    let props = sample.props();
    let words: Vec<(Polarity, &LassoWord)> = sample.words().collect();
    let lens: Vec<usize> = words.iter().map(|(_, w)| w.len()).collect();
    let mut cat = VarCatalog::new(Mode::Sized { n }, k, n, &lens);
    for p in sketch.placeholders() {
        match p.kind {
            HoleKind::Unary => cat.add_placeholder_x(p.id, UnaryOp::ALL.map(Choice::Unary)),
            HoleKind::Binary => cat.add_placeholder_x(p.id, BinaryOp::ALL.map(Choice::Binary)),
            HoleKind::Formula => {}
        }
    }
    let alphabet: Vec<Choice> = (0..props.len())
        .map(Choice::Prop)
        .chain(UnaryOp::ALL.map(Choice::Unary))
        .chain(BinaryOp::ALL.map(Choice::Binary))
        .collect();
    let synthesized: Vec<usize> = sketch.nodes_of(HoleKind::Formula).into_iter().chain(k..n).collect();
    for &i in &synthesized {
        cat.add_node_x(i, alphabet.iter().copied());
        cat.add_children(i, if i < k { k..n } else { i + 1..n });
    }
    for &i in &synthesized {
        cat.add_child_rows(i);
    }

    let mut parts = Vec::new();
    let vars = |choices: &[(Choice, PropVar)]| choices.iter().map(|&(_, v)| v).collect::<Vec<_>>();
    for p in sketch.placeholders() {
        if p.kind != HoleKind::Formula {
            parts.push(PropFormula::exactly_one(&vars(cat.placeholder_choices(p.id))));
        }
    }
    for &i in &synthesized {
        parts.push(PropFormula::exactly_one(&vars(cat.node_choices(i))));
        let l: Vec<PropVar> = cat.left_choices(i).iter().map(|&(_, v)| v).collect();
        let r: Vec<PropVar> = cat.right_choices(i).iter().map(|&(_, v)| v).collect();
        for &(choice, x) in cat.node_choices(i) {
            if matches!(choice, Choice::Unary(_) | Choice::Binary(_)) {
                parts.push(PropFormula::implies(
                    PropFormula::var(x),
                    PropFormula::or(l.iter().map(|&v| PropFormula::var(v))),
                ));
            }
            if matches!(choice, Choice::Binary(_)) {
                parts.push(PropFormula::implies(
                    PropFormula::var(x),
                    PropFormula::or(r.iter().map(|&v| PropFormula::var(v))),
                ));
            }
        }
        parts.push(PropFormula::at_most_one(&l));
        parts.push(PropFormula::at_most_one(&r));
    }

    for (wk, (_, w)) in words.iter().enumerate() {
        let row = |node: usize| cat.y_row(wk, node);
        for (i, node) in dag.nodes().iter().enumerate() {
            let y = |t: usize| cat.y(wk, i, t);
            let left = node.left.map(row);
            let right = node.right.map(row);
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
                Label::Hole(HoleKind::Formula, _) => {}
            }
        }
        for &i in &synthesized {
            let y = |t: usize| cat.y(wk, i, t);
            let (lrow, rrow) = (cat.left_row(wk, i), cat.right_row(wk, i));
            for (choices, child_row) in [(cat.left_choices(i), lrow), (cat.right_choices(i), rrow)] {
                for &(j, c) in choices {
                    parts.extend(
                        (0..w.len()).map(|t| guarded_definition(&[c], child_row[t], PropFormula::var(row(j)[t]))),
                    );
                }
            }
            for &(choice, x) in cat.node_choices(i) {
                let op = match choice {
                    Choice::Prop(p) => {
                        parts.extend((0..w.len()).map(|t| {
                            PropFormula::implies(
                                PropFormula::var(x),
                                PropFormula::lit(y(t), w.symbol_at(t).contains(p)),
                            )
                        }));
                        continue;
                    }
                    Choice::Unary(op) => Op::Unary(op),
                    Choice::Binary(op) => Op::Binary(op),
                };
                let right = matches!(op, Op::Binary(_)).then_some(rrow);
                parts.extend((0..w.len()).map(|t| guarded_definition(&[x], y(t), op_semantics(op, w, t, lrow, right))));
            }
        }
    }

    for (wk, (polarity, _)) in words.iter().enumerate() {
        parts.push(PropFormula::lit(cat.y(wk, SyntaxDag::ROOT, 0), *polarity == Polarity::Positive));
    }

    Ok(Encoding { formula: PropFormula::and(parts), catalog: cat })
}

fn chosen<T: Copy>(model: &Model, choices: &[(T, PropVar)]) -> Option<T> {
    let mut picked = choices.iter().filter(|&&(_, v)| model.value(v)).map(|&(c, _)| c);
    match (picked.next(), picked.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

struct Reader<'a> {
    model: &'a Model,
    catalog: &'a VarCatalog,
    sample: &'a Sample,
    builder: DagBuilder,
    memo: HashMap<usize, usize>,
}

impl Reader<'_> {
    fn node(&mut self, i: usize) -> Result<usize, EncodeError> {
        if let Some(&h) = self.memo.get(&i) {
            return Ok(h);
        }
        let bad = |what: &str| EncodeError::Internal(format!("node {i} has no unique {what}"));
        let label = chosen(self.model, self.catalog.node_choices(i)).ok_or_else(|| bad("label"))?;
        let h = match label {
            Choice::Prop(p) => self.builder.prop(self.sample.props().name(p)),
            Choice::Unary(op) => {
                let c = chosen(self.model, self.catalog.left_choices(i)).ok_or_else(|| bad("left child"))?;
                let c = self.node(c)?;
                self.builder.unary(op, c)
            }
            Choice::Binary(op) => {
                let l = chosen(self.model, self.catalog.left_choices(i)).ok_or_else(|| bad("left child"))?;
                let r = chosen(self.model, self.catalog.right_choices(i)).ok_or_else(|| bad("right child"))?;
                let (l, r) = (self.node(l)?, self.node(r)?);
                self.builder.binary(op, l, r)
            }
        };
        self.memo.insert(i, h);
        Ok(h)
    }
}

/// Reads the completion out of a model of `Φ_n` and checks it against the
/// sample before returning it.
pub fn decode_sized_model(
    model: &Model,
    catalog: &VarCatalog,
    sketch: &Sketch,
    sample: &Sample,
) -> Result<SyntaxDag, EncodeError> {
    let mut subst = Substitution::new();
    let mut reader = Reader { model, catalog, sample, builder: DagBuilder::new(), memo: HashMap::new() };
    for p in sketch.placeholders() {
        let image = match p.kind {
            HoleKind::Formula => continue,
            _ => match chosen(model, catalog.placeholder_choices(p.id)) {
                Some(Choice::Unary(op)) => Image::Unary(op),
                Some(Choice::Binary(op)) => Image::Binary(op),
                _ => return Err(EncodeError::Internal(format!("placeholder {} has no unique operator", p.id))),
            },
        };
        subst.insert(p.id, image);
    }
    for i in sketch.nodes_of(HoleKind::Formula) {
        let Label::Hole(_, id) = *sketch.dag().label(i) else { unreachable!() };
        let h = reader.node(i)?;
        subst.insert(id, Image::Formula(reader.builder.build(h)));
    }
    let formula = apply_substitution(sketch, &subst).map_err(|e| EncodeError::Internal(e.to_string()))?;
    let verdict = check_consistency(&formula, sample).map_err(|e| EncodeError::Internal(e.to_string()))?;
    if !verdict.consistent() {
        return Err(EncodeError::Internal("decoded formula is not consistent with the sample".into()));
    }
    Ok(formula)
}
