use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use super::dag::{BinaryOp, DagBuilder, HoleKind, Label, PlaceholderId, SyntaxDag, UnaryOp};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SketchError {
    #[error("placeholder {0} is used both as {1} and as {2}")]
    MixedKinds(PlaceholderId, &'static str, &'static str),
    #[error("substitution has no image for placeholder {0}")]
    Incomplete(PlaceholderId),
    #[error("placeholder {id} is a {expected} placeholder but its image is a {found}")]
    ArityMismatch { id: PlaceholderId, expected: &'static str, found: &'static str },
    #[error("image for placeholder {0} still contains placeholders")]
    NestedPlaceholder(PlaceholderId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlaceholderInfo {
    pub id: PlaceholderId,
    pub kind: HoleKind,
}

/// An LTL formula whose DAG may contain Type-0/1/2 placeholders.
///
/// Placeholder ids are normalized to the order of first appearance in the
/// textual (in-order) rendering, so two sketches that print the same have
/// identical DAGs. Names are optional metadata: placeholders written with the
/// same name share an id.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sketch {
    dag: SyntaxDag,
    placeholders: Vec<PlaceholderInfo>,
    names: BTreeMap<PlaceholderId, String>,
}

impl Sketch {
    pub fn new(dag: SyntaxDag, names: BTreeMap<PlaceholderId, String>) -> Result<Self, SketchError> {
        let mut kinds: HashMap<PlaceholderId, HoleKind> = HashMap::new();
        for n in dag.nodes() {
            if let Some((kind, id)) = n.label.placeholder() {
                if let Some(prev) = kinds.insert(id, kind) {
                    if prev != kind {
                        return Err(SketchError::MixedKinds(id, prev.tag(), kind.tag()));
                    }
                }
            }
        }
        let order = textual_placeholder_order(&dag);
        let renumber: HashMap<PlaceholderId, PlaceholderId> =
            order.iter().enumerate().map(|(i, &id)| (id, PlaceholderId(i as u32))).collect();
        let dag = if renumber.iter().all(|(a, b)| a == b) {
            dag
        } else {
            dag.relabel(|label| match *label {
                Label::Hole(kind, id) => Label::Hole(kind, renumber[&id]),
                ref other => other.clone(),
            })
        };
        let placeholders = order.iter().map(|id| PlaceholderInfo { id: renumber[id], kind: kinds[id] }).collect();
        let names = names.into_iter().filter_map(|(id, name)| renumber.get(&id).map(|&new| (new, name))).collect();
        Ok(Sketch { dag, placeholders, names })
    }

    /// A sketch without placeholders.
    pub fn from_formula(dag: SyntaxDag) -> Self {
        Sketch::new(dag, BTreeMap::new()).expect("a formula has no placeholder conflicts")
    }

    pub fn dag(&self) -> &SyntaxDag {
        &self.dag
    }

    pub fn into_dag(self) -> SyntaxDag {
        self.dag
    }

    /// Node count of the sketch DAG, `|φ?|`.
    pub fn size(&self) -> usize {
        self.dag.size()
    }

    pub fn is_formula(&self) -> bool {
        self.placeholders.is_empty()
    }

    pub fn placeholders(&self) -> &[PlaceholderInfo] {
        &self.placeholders
    }

    /// Placeholder ids of the given type (`Π0`, `Π1` or `Π2`).
    pub fn placeholders_of(&self, kind: HoleKind) -> Vec<PlaceholderId> {
        self.placeholders.iter().filter(|p| p.kind == kind).map(|p| p.id).collect()
    }

    pub fn kind_of(&self, id: PlaceholderId) -> Option<HoleKind> {
        self.placeholders.iter().find(|p| p.id == id).map(|p| p.kind)
    }

    pub fn name(&self, id: PlaceholderId) -> Option<&str> {
        self.names.get(&id).map(String::as_str)
    }

    pub fn names(&self) -> &BTreeMap<PlaceholderId, String> {
        &self.names
    }

    /// Nodes labeled with a placeholder of the given type, in index order.
    pub fn nodes_of(&self, kind: HoleKind) -> Vec<usize> {
        self.dag
            .nodes()
            .iter()
            .enumerate()
            .filter(|(_, n)| matches!(n.label, Label::Hole(k, _) if k == kind))
            .map(|(i, _)| i)
            .collect()
    }
}

fn textual_placeholder_order(dag: &SyntaxDag) -> Vec<PlaceholderId> {
    fn visit(dag: &SyntaxDag, i: usize, seen: &mut [bool], out: &mut Vec<PlaceholderId>) {
        if std::mem::replace(&mut seen[i], true) {
            return;
        }
        let n = dag.node(i);
        match (n.left, n.right) {
            (Some(l), Some(r)) => {
                visit(dag, l, seen, out);
                note(&n.label, out);
                visit(dag, r, seen, out);
            }
            (Some(c), None) => {
                note(&n.label, out);
                visit(dag, c, seen, out);
            }
            _ => note(&n.label, out),
        }
    }
    fn note(label: &Label, out: &mut Vec<PlaceholderId>) {
        if let Some((_, id)) = label.placeholder() {
            if !out.contains(&id) {
                out.push(id);
            }
        }
    }
    let mut seen = vec![false; dag.size()];
    let mut out = Vec::new();
    visit(dag, 0, &mut seen, &mut out);
    out
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Image {
    Formula(SyntaxDag),
    Unary(UnaryOp),
    Binary(BinaryOp),
}

impl Image {
    fn kind_name(&self) -> &'static str {
        match self {
            Image::Formula(_) => "formula",
            Image::Unary(_) => "unary operator",
            Image::Binary(_) => "binary operator",
        }
    }
}

fn kind_name(kind: HoleKind) -> &'static str {
    match kind {
        HoleKind::Formula => "formula",
        HoleKind::Unary => "unary operator",
        HoleKind::Binary => "binary operator",
    }
}

/// Images for placeholders: formulas for Type-0, operators for Type-1/2.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Substitution {
    images: BTreeMap<PlaceholderId, Image>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: PlaceholderId, image: Image) -> Option<Image> {
        self.images.insert(id, image)
    }

    pub fn get(&self, id: PlaceholderId) -> Option<&Image> {
        self.images.get(&id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (PlaceholderId, &Image)> {
        self.images.iter().map(|(&id, img)| (id, img))
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn is_complete_for(&self, sketch: &Sketch) -> bool {
        sketch.placeholders().iter().all(|p| self.images.contains_key(&p.id))
    }

    /// Every Type-0 image is a single proposition.
    pub fn is_restricted(&self) -> bool {
        self.images.values().all(|img| match img {
            Image::Formula(f) => f.size() == 1 && matches!(f.root_label(), Label::Prop(_)),
            _ => true,
        })
    }
}

/// `f_s(φ?)`: replaces every placeholder by its image and re-merges.
pub fn apply_substitution(sketch: &Sketch, subst: &Substitution) -> Result<SyntaxDag, SketchError> {
    for p in sketch.placeholders() {
        let image = subst.get(p.id).ok_or(SketchError::Incomplete(p.id))?;
        let ok = matches!(
            (p.kind, image),
            (HoleKind::Formula, Image::Formula(_))
                | (HoleKind::Unary, Image::Unary(_))
                | (HoleKind::Binary, Image::Binary(_))
        );
        if !ok {
            return Err(SketchError::ArityMismatch { id: p.id, expected: kind_name(p.kind), found: image.kind_name() });
        }
        if let Image::Formula(f) = image {
            if f.has_placeholders() {
                return Err(SketchError::NestedPlaceholder(p.id));
            }
        }
    }
    let dag = sketch.dag();
    let mut builder = DagBuilder::new();
    let mut handles = vec![0; dag.size()];
    for i in (0..dag.size()).rev() {
        let n = dag.node(i);
        let left = n.left.map(|c| handles[c]);
        let right = n.right.map(|c| handles[c]);
        handles[i] = match (&n.label, n.label.placeholder().map(|(_, id)| subst.get(id))) {
            (_, Some(Some(Image::Formula(f)))) => builder.import(f, SyntaxDag::ROOT),
            (_, Some(Some(Image::Unary(op)))) => builder.add(Label::Unary(*op), left, None),
            (_, Some(Some(Image::Binary(op)))) => builder.add(Label::Binary(*op), left, right),
            (label, _) => builder.add(label.clone(), left, right),
        };
    }
    Ok(builder.build(handles[0]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hole(kind: HoleKind, id: u32) -> Label {
        Label::Hole(kind, PlaceholderId(id))
    }

    #[test]
    fn placeholder_ids_follow_text_order() {
        // (?0#7 U G q) ?2#3 (?1#5 G q)
        let mut b = DagBuilder::new();
        let h0 = b.leaf(hole(HoleKind::Formula, 7));
        let q = b.prop("q");
        let gq = b.unary(UnaryOp::Globally, q);
        let until = b.binary(BinaryOp::Until, h0, gq);
        let h1 = b.add(hole(HoleKind::Unary, 5), Some(gq), None);
        let root = b.add(hole(HoleKind::Binary, 3), Some(until), Some(h1));
        let sk = Sketch::new(b.build(root), BTreeMap::new()).unwrap();
        assert_eq!(sk.placeholders_of(HoleKind::Formula), vec![PlaceholderId(0)]);
        assert_eq!(sk.placeholders_of(HoleKind::Binary), vec![PlaceholderId(1)]);
        assert_eq!(sk.placeholders_of(HoleKind::Unary), vec![PlaceholderId(2)]);
        assert_eq!(sk.size(), 6);
    }

    #[test]
    fn mixed_kinds_rejected() {
        let mut b = DagBuilder::new();
        let a = b.leaf(hole(HoleKind::Formula, 0));
        let root = b.add(hole(HoleKind::Unary, 0), Some(a), None);
        assert!(matches!(Sketch::new(b.build(root), BTreeMap::new()), Err(SketchError::MixedKinds(..))));
    }

    #[test]
    fn substitution_checks() {
        let sk = Sketch::new(SyntaxDag::leaf(hole(HoleKind::Formula, 0)), BTreeMap::new()).unwrap();
        let empty = Substitution::new();
        assert_eq!(apply_substitution(&sk, &empty), Err(SketchError::Incomplete(PlaceholderId(0))));
        let mut wrong = Substitution::new();
        wrong.insert(PlaceholderId(0), Image::Unary(UnaryOp::Next));
        assert!(matches!(apply_substitution(&sk, &wrong), Err(SketchError::ArityMismatch { .. })));
        let mut ok = Substitution::new();
        ok.insert(PlaceholderId(0), Image::Formula(SyntaxDag::prop("p")));
        assert_eq!(apply_substitution(&sk, &ok).unwrap(), SyntaxDag::prop("p"));
        assert!(ok.is_restricted());
    }
}
