use std::collections::BTreeMap;

use crate::ltl::{BinaryOp, PlaceholderId, UnaryOp};
use crate::sat::{Cnf, PropVar, VarAllocator};

/// A label an `x` variable can select.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Choice {
    Prop(usize),
    Unary(UnaryOp),
    Binary(BinaryOp),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Existence { restricted: bool },
    Sized { n: usize },
}

/// Per-word left and right child-value rows of a synthesized node.
type ChildRows = (Vec<Vec<PropVar>>, Vec<Vec<PropVar>>);

/// Variables of an encoding and what they stand for.
#[derive(Clone, Debug)]
pub struct VarCatalog {
    mode: Mode,
    sketch_size: usize,
    nodes: usize,
    y: Vec<Vec<Vec<PropVar>>>,
    placeholder_x: BTreeMap<PlaceholderId, Vec<(Choice, PropVar)>>,
    node_x: BTreeMap<usize, Vec<(Choice, PropVar)>>,
    left: BTreeMap<usize, Vec<(usize, PropVar)>>,
    right: BTreeMap<usize, Vec<(usize, PropVar)>>,
    /// Per word, the values of the chosen left and right child.
    child_rows: BTreeMap<usize, ChildRows>,
    word_lens: Vec<usize>,
    alloc: VarAllocator,
}

impl VarCatalog {
    /// Allocates `y` for `nodes` nodes on words of the given lengths.
    pub(super) fn new(mode: Mode, sketch_size: usize, nodes: usize, word_lens: &[usize]) -> Self {
        let mut alloc = VarAllocator::new();
        let y = word_lens
            .iter()
            .map(|&len| (0..nodes).map(|_| (0..len).map(|_| alloc.fresh()).collect()).collect())
            .collect();
        VarCatalog {
            mode,
            sketch_size,
            nodes,
            y,
            placeholder_x: BTreeMap::new(),
            node_x: BTreeMap::new(),
            left: BTreeMap::new(),
            right: BTreeMap::new(),
            child_rows: BTreeMap::new(),
            word_lens: word_lens.to_vec(),
            alloc,
        }
    }

    pub(super) fn add_placeholder_x(&mut self, id: PlaceholderId, choices: impl IntoIterator<Item = Choice>) {
        let vars = choices.into_iter().map(|c| (c, self.alloc.fresh())).collect();
        self.placeholder_x.insert(id, vars);
    }

    pub(super) fn add_node_x(&mut self, node: usize, choices: impl IntoIterator<Item = Choice>) {
        let vars = choices.into_iter().map(|c| (c, self.alloc.fresh())).collect();
        self.node_x.insert(node, vars);
    }

    pub(super) fn add_children(&mut self, node: usize, pool: std::ops::Range<usize>) {
        let l = pool.clone().map(|j| (j, self.alloc.fresh())).collect();
        let r = pool.map(|j| (j, self.alloc.fresh())).collect();
        self.left.insert(node, l);
        self.right.insert(node, r);
    }

    /// Allocates `L` and `R` rows for `node`; call after all `add_children`.
    pub(super) fn add_child_rows(&mut self, node: usize) {
        let rows = |alloc: &mut VarAllocator| -> Vec<Vec<PropVar>> {
            self.word_lens.iter().map(|&len| (0..len).map(|_| alloc.fresh()).collect()).collect()
        };
        let l = rows(&mut self.alloc);
        let r = rows(&mut self.alloc);
        self.child_rows.insert(node, (l, r));
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// `|φ?|`, the node count of the sketch.
    pub fn sketch_size(&self) -> usize {
        self.sketch_size
    }

    /// Nodes with `y` variables: the sketch, plus the pool in sized mode.
    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn num_vars(&self) -> u32 {
        self.alloc.count()
    }

    pub fn y(&self, word: usize, node: usize, t: usize) -> PropVar {
        self.y[word][node][t]
    }

    pub fn y_row(&self, word: usize, node: usize) -> &[PropVar] {
        &self.y[word][node]
    }

    pub fn placeholder_choices(&self, id: PlaceholderId) -> &[(Choice, PropVar)] {
        self.placeholder_x.get(&id).map_or(&[], Vec::as_slice)
    }

    pub fn node_choices(&self, node: usize) -> &[(Choice, PropVar)] {
        self.node_x.get(&node).map_or(&[], Vec::as_slice)
    }

    pub fn left_choices(&self, node: usize) -> &[(usize, PropVar)] {
        self.left.get(&node).map_or(&[], Vec::as_slice)
    }

    pub fn right_choices(&self, node: usize) -> &[(usize, PropVar)] {
        self.right.get(&node).map_or(&[], Vec::as_slice)
    }

    /// Value row of the left child of `node` on `word`.
    pub fn left_row(&self, word: usize, node: usize) -> &[PropVar] {
        &self.child_rows[&node].0[word]
    }

    pub fn right_row(&self, word: usize, node: usize) -> &[PropVar] {
        &self.child_rows[&node].1[word]
    }

    pub fn y_count(&self) -> usize {
        self.y.iter().flatten().map(Vec::len).sum()
    }

    pub fn x_count(&self) -> usize {
        self.placeholder_x.values().chain(self.node_x.values()).map(Vec::len).sum()
    }

    pub fn l_count(&self) -> usize {
        self.left.values().map(Vec::len).sum()
    }

    pub fn r_count(&self) -> usize {
        self.right.values().map(Vec::len).sum()
    }

    /// Child-value variables, `2 · Σ|uv|` per synthesized node.
    pub fn c_count(&self) -> usize {
        self.child_rows.values().map(|(l, r)| l.iter().chain(r).map(Vec::len).sum::<usize>()).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct EncodingStats {
    pub y_vars: usize,
    pub x_vars: usize,
    pub l_vars: usize,
    pub r_vars: usize,
    pub c_vars: usize,
    /// All catalog variables, `y + x + l + r + c`.
    pub variables: usize,
    /// Variables of the clausal form, including Tseitin auxiliaries.
    pub cnf_variables: usize,
    pub clauses: usize,
    pub n: Option<usize>,
}

impl EncodingStats {
    pub fn new(catalog: &VarCatalog, cnf: &Cnf) -> Self {
        EncodingStats {
            y_vars: catalog.y_count(),
            x_vars: catalog.x_count(),
            l_vars: catalog.l_count(),
            r_vars: catalog.r_count(),
            c_vars: catalog.c_count(),
            variables: catalog.num_vars() as usize,
            cnf_variables: cnf.num_vars as usize,
            clauses: cnf.clauses.len(),
            n: match catalog.mode() {
                Mode::Sized { n } => Some(n),
                Mode::Existence { .. } => None,
            },
        }
    }
}
