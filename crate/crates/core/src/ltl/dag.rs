use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

/// Unary LTL operators, `Λ_U`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum UnaryOp {
    Not,
    Next,
    Finally,
    Globally,
}

/// Binary LTL operators, `Λ_B`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum BinaryOp {
    Or,
    And,
    Until,
}

impl UnaryOp {
    pub const ALL: [UnaryOp; 4] = [UnaryOp::Not, UnaryOp::Next, UnaryOp::Finally, UnaryOp::Globally];

    pub fn symbol(self) -> &'static str {
        match self {
            UnaryOp::Not => "!",
            UnaryOp::Next => "X",
            UnaryOp::Finally => "F",
            UnaryOp::Globally => "G",
        }
    }
}

impl BinaryOp {
    pub const ALL: [BinaryOp; 3] = [BinaryOp::Or, BinaryOp::And, BinaryOp::Until];

    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Or => "|",
            BinaryOp::And => "&",
            BinaryOp::Until => "U",
        }
    }
}

impl fmt::Display for UnaryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl fmt::Display for BinaryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct PlaceholderId(pub u32);

impl fmt::Display for PlaceholderId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Placeholder types: Type-0 stands for a formula, Type-1 for a unary and
/// Type-2 for a binary operator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum HoleKind {
    Formula,
    Unary,
    Binary,
}

impl HoleKind {
    pub fn arity(self) -> usize {
        match self {
            HoleKind::Formula => 0,
            HoleKind::Unary => 1,
            HoleKind::Binary => 2,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            HoleKind::Formula => "?0",
            HoleKind::Unary => "?1",
            HoleKind::Binary => "?2",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Label {
    Prop(String),
    True,
    False,
    Unary(UnaryOp),
    Binary(BinaryOp),
    Hole(HoleKind, PlaceholderId),
}

impl Label {
    pub fn prop(name: impl Into<String>) -> Self {
        Label::Prop(name.into())
    }

    pub fn arity(&self) -> usize {
        match self {
            Label::Prop(_) | Label::True | Label::False => 0,
            Label::Unary(_) => 1,
            Label::Binary(_) => 2,
            Label::Hole(kind, _) => kind.arity(),
        }
    }

    pub fn placeholder(&self) -> Option<(HoleKind, PlaceholderId)> {
        match *self {
            Label::Hole(kind, id) => Some((kind, id)),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Node {
    pub label: Label,
    pub left: Option<usize>,
    pub right: Option<usize>,
}

impl Node {
    pub fn children(&self) -> impl Iterator<Item = usize> {
        self.left.into_iter().chain(self.right)
    }
}

/// Canonical syntax DAG. Node 0 is the root and every child index is strictly
/// larger than the index of its parent (the usual 1-based numbering is
/// `index + 1`). Structurally identical subformulas are merged.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SyntaxDag {
    nodes: Vec<Node>,
}

impl SyntaxDag {
    pub const ROOT: usize = 0;

    pub fn leaf(label: Label) -> Self {
        assert_eq!(label.arity(), 0, "leaf label must be nullary");
        SyntaxDag { nodes: vec![Node { label, left: None, right: None }] }
    }

    pub fn prop(name: impl Into<String>) -> Self {
        Self::leaf(Label::prop(name))
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, index: usize) -> &Node {
        &self.nodes[index]
    }

    pub fn label(&self, index: usize) -> &Label {
        &self.nodes[index].label
    }

    pub fn root_label(&self) -> &Label {
        &self.nodes[0].label
    }

    /// Number of distinct subformulas.
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    /// The subformula rooted at `index`, as its own canonical DAG.
    pub fn subformula(&self, index: usize) -> SyntaxDag {
        let mut builder = DagBuilder::new();
        let root = builder.import(self, index);
        builder.build(root)
    }

    /// DAG size of every subformula.
    pub fn subformula_sizes(&self) -> Vec<usize> {
        let n = self.nodes.len();
        let mut reach: Vec<Vec<u64>> = vec![vec![0; n.div_ceil(64)]; n];
        for i in (0..n).rev() {
            reach[i][i / 64] |= 1 << (i % 64);
            for c in self.nodes[i].children() {
                let (lo, hi) = reach.split_at_mut(c);
                for (a, b) in lo[i].iter_mut().zip(&hi[0]) {
                    *a |= *b;
                }
            }
        }
        reach.iter().map(|r| r.iter().map(|w| w.count_ones() as usize).sum()).collect()
    }

    pub fn propositions(&self) -> BTreeSet<&str> {
        self.nodes
            .iter()
            .filter_map(|n| match &n.label {
                Label::Prop(p) => Some(p.as_str()),
                _ => None,
            })
            .collect()
    }

    /// Propositions in order of first appearance (root first).
    pub fn propositions_in_order(&self) -> Vec<String> {
        let mut seen = Vec::<String>::new();
        for n in &self.nodes {
            if let Label::Prop(p) = &n.label {
                if !seen.contains(p) {
                    seen.push(p.clone());
                }
            }
        }
        seen
    }

    pub fn has_placeholders(&self) -> bool {
        self.nodes.iter().any(|n| n.label.placeholder().is_some())
    }

    /// Number of root-to-node paths for each node, i.e. how many times the
    /// node occurs in the syntax tree.
    pub fn occurrence_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.nodes.len()];
        counts[0] = 1;
        for i in 0..self.nodes.len() {
            let c = counts[i];
            for child in self.nodes[i].children() {
                counts[child] = counts[child].saturating_add(c);
            }
        }
        counts
    }

    /// Checks the structural invariants of a node array.
    pub fn from_nodes(nodes: Vec<Node>) -> Result<Self, String> {
        if nodes.is_empty() {
            return Err("a syntax DAG needs at least one node".into());
        }
        for (i, n) in nodes.iter().enumerate() {
            let arity = n.children().count();
            if arity != n.label.arity() || (n.left.is_none() && n.right.is_some()) {
                return Err(format!("node {i}: child count does not match label arity"));
            }
            if let Some(c) = n.children().find(|&c| c <= i || c >= nodes.len()) {
                return Err(format!("node {i}: child {c} violates parent < child ordering"));
            }
        }
        let dag = SyntaxDag { nodes };
        let mut builder = DagBuilder::new();
        let root = builder.import(&dag, 0);
        let canonical = builder.build(root);
        if canonical != dag {
            return Err("node array is not in canonical merged form".into());
        }
        Ok(dag)
    }

    /// Applies `f` to every label, keeping the shape.
    pub(crate) fn relabel(&self, mut f: impl FnMut(&Label) -> Label) -> SyntaxDag {
        let mut builder = DagBuilder::new();
        let mut handles = vec![0; self.nodes.len()];
        for i in (0..self.nodes.len()).rev() {
            let n = &self.nodes[i];
            handles[i] = builder.add(f(&n.label), n.left.map(|c| handles[c]), n.right.map(|c| handles[c]));
        }
        builder.build(handles[0])
    }
}

impl fmt::Debug for SyntaxDag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SyntaxDag(")?;
        for (i, n) in self.nodes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}:{:?}", n.label)?;
            match (n.left, n.right) {
                (Some(l), Some(r)) => write!(f, "[{l},{r}]")?,
                (Some(l), None) => write!(f, "[{l}]")?,
                _ => {}
            }
        }
        write!(f, ")")
    }
}

/// Hash-consing arena. Handles are only meaningful for the builder that
/// produced them; [`DagBuilder::build`] renumbers the reachable part.
#[derive(Default)]
pub struct DagBuilder {
    nodes: Vec<Node>,
    index: HashMap<Node, usize>,
}

impl DagBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, label: Label, left: Option<usize>, right: Option<usize>) -> usize {
        let node = Node { label, left, right };
        assert_eq!(node.label.arity(), node.children().count(), "arity mismatch for {:?}", node.label);
        if let Some(&h) = self.index.get(&node) {
            return h;
        }
        let h = self.nodes.len();
        self.nodes.push(node.clone());
        self.index.insert(node, h);
        h
    }

    pub fn leaf(&mut self, label: Label) -> usize {
        self.add(label, None, None)
    }

    pub fn prop(&mut self, name: &str) -> usize {
        self.leaf(Label::prop(name))
    }

    pub fn unary(&mut self, op: UnaryOp, child: usize) -> usize {
        self.add(Label::Unary(op), Some(child), None)
    }

    pub fn binary(&mut self, op: BinaryOp, left: usize, right: usize) -> usize {
        self.add(Label::Binary(op), Some(left), Some(right))
    }

    /// Copies the subformula of `dag` rooted at `index` into this arena.
    pub fn import(&mut self, dag: &SyntaxDag, index: usize) -> usize {
        let mut handles: HashMap<usize, usize> = HashMap::new();
        self.import_memo(dag, index, &mut handles)
    }

    fn import_memo(&mut self, dag: &SyntaxDag, index: usize, memo: &mut HashMap<usize, usize>) -> usize {
        if let Some(&h) = memo.get(&index) {
            return h;
        }
        let n = dag.node(index);
        let left = n.left.map(|c| self.import_memo(dag, c, memo));
        let right = n.right.map(|c| self.import_memo(dag, c, memo));
        let h = self.add(n.label.clone(), left, right);
        memo.insert(index, h);
        h
    }

    /// Canonical DAG for the term `root`. Nodes are numbered breadth-first
    /// in topological order (a node is numbered once all its parents are), so
    /// the numbering depends only on the structure.
    pub fn build(&self, root: usize) -> SyntaxDag {
        let mut reachable = vec![false; self.nodes.len()];
        let mut stack = vec![root];
        while let Some(h) = stack.pop() {
            if !std::mem::replace(&mut reachable[h], true) {
                stack.extend(self.nodes[h].children());
            }
        }
        let mut indegree = vec![0usize; self.nodes.len()];
        for (h, n) in self.nodes.iter().enumerate() {
            if reachable[h] {
                for c in n.children() {
                    indegree[c] += 1;
                }
            }
        }
        let mut order = Vec::new();
        let mut new_index = vec![usize::MAX; self.nodes.len()];
        let mut queue = VecDeque::from([root]);
        while let Some(h) = queue.pop_front() {
            new_index[h] = order.len();
            order.push(h);
            for c in self.nodes[h].children() {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    queue.push_back(c);
                }
            }
        }
        let nodes = order
            .iter()
            .map(|&h| {
                let n = &self.nodes[h];
                Node {
                    label: n.label.clone(),
                    left: n.left.map(|c| new_index[c]),
                    right: n.right.map(|c| new_index[c]),
                }
            })
            .collect();
        SyntaxDag { nodes }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// (p U G q) | F G q
    fn figure_formula(b: &mut DagBuilder) -> usize {
        let p = b.prop("p");
        let q = b.prop("q");
        let gq = b.unary(UnaryOp::Globally, q);
        let until = b.binary(BinaryOp::Until, p, gq);
        let fgq = b.unary(UnaryOp::Finally, gq);
        b.binary(BinaryOp::Or, until, fgq)
    }

    #[test]
    fn shared_subformulas_are_merged() {
        let mut b = DagBuilder::new();
        let root = figure_formula(&mut b);
        let dag = b.build(root);
        assert_eq!(dag.size(), 6);
        let labels: Vec<_> = dag.nodes().iter().map(|n| n.label.clone()).collect();
        assert_eq!(
            labels,
            vec![
                Label::Binary(BinaryOp::Or),
                Label::Binary(BinaryOp::Until),
                Label::Unary(UnaryOp::Finally),
                Label::prop("p"),
                Label::Unary(UnaryOp::Globally),
                Label::prop("q"),
            ]
        );
    }

    #[test]
    fn numbering_keeps_parents_before_children() {
        // root(X a, X X a) where `a = X b`: plain BFS discovery would number
        // the shared node before one of its parents.
        let mut b = DagBuilder::new();
        let leaf = b.prop("b");
        let a = b.unary(UnaryOp::Next, leaf);
        let xa = b.unary(UnaryOp::Next, a);
        let xxa = b.unary(UnaryOp::Next, xa);
        let root = b.binary(BinaryOp::Or, a, xxa);
        let dag = b.build(root);
        for (i, n) in dag.nodes().iter().enumerate() {
            assert!(n.children().all(|c| c > i));
        }
        assert!(SyntaxDag::from_nodes(dag.nodes().to_vec()).is_ok());
    }

    #[test]
    fn same_leaf_counts_once() {
        let mut b = DagBuilder::new();
        let p = b.prop("p");
        let root = b.binary(BinaryOp::Or, p, p);
        let dag = b.build(root);
        assert_eq!(dag.size(), 2);
        assert_eq!(dag.occurrence_counts(), vec![1, 2]);
    }

    #[test]
    fn subformula_sizes_match_extraction() {
        let mut b = DagBuilder::new();
        let root = figure_formula(&mut b);
        let dag = b.build(root);
        let sizes = dag.subformula_sizes();
        for (i, &s) in sizes.iter().enumerate() {
            assert_eq!(dag.subformula(i).size(), s);
        }
        assert_eq!(sizes, vec![6, 4, 3, 1, 2, 1]);
    }

    #[test]
    fn builder_order_does_not_matter() {
        let mut a = DagBuilder::new();
        let ra = figure_formula(&mut a);
        let mut b = DagBuilder::new();
        b.prop("zzz");
        let rb = figure_formula(&mut b);
        assert_eq!(a.build(ra), b.build(rb));
    }

    #[test]
    fn rejects_malformed_node_arrays() {
        let bad = vec![Node { label: Label::Unary(UnaryOp::Next), left: Some(0), right: None }];
        assert!(SyntaxDag::from_nodes(bad).is_err());
        let unmerged = vec![
            Node { label: Label::Binary(BinaryOp::Or), left: Some(1), right: Some(2) },
            Node { label: Label::prop("p"), left: None, right: None },
            Node { label: Label::prop("p"), left: None, right: None },
        ];
        assert!(SyntaxDag::from_nodes(unmerged).is_err());
    }
}
