//! Concrete syntax for formulas and sketches.
//!
//! ```text
//! atom   := ident | true | false | ?0 | ?0{name} | ( expr )
//! unary  := (! | X | F | G | ?1 | ?1{name})* atom
//! binary := unary U unary ...        (tightest)
//!         | ... & ... | ... `|` ... | ... ?2 ... | ... -> ...   (loosest)
//! ```
//!
//! Every binary operator is right-associative. `a -> b` is read as `!a | b`.

use std::collections::{BTreeMap, HashMap};

use super::span::{SourceSpan, SyntaxError};
use crate::ltl::{BinaryOp, DagBuilder, HoleKind, Label, PlaceholderId, Sketch, SyntaxDag, UnaryOp};

const MAX_NESTING: usize = 128;
const MAX_DEPTH: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Unary(UnaryOp),
    Binary(BinaryOp),
    Implies,
    Hole(HoleKind, Option<String>),
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Unary(op) => format!("`{}`", op.symbol()),
            Tok::Binary(op) => format!("`{}`", op.symbol()),
            Tok::Implies => "`->`".into(),
            Tok::Hole(kind, _) => format!("placeholder `{}`", kind.tag()),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(text: &str) -> Result<Vec<(Tok, SourceSpan)>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    let span = |start: usize, end: usize| SourceSpan::from_offsets(text, start, end);
    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        chars.next();
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '!' => Tok::Unary(UnaryOp::Not),
            '&' => Tok::Binary(BinaryOp::And),
            '|' => Tok::Binary(BinaryOp::Or),
            '-' => match chars.next() {
                Some((_, '>')) => Tok::Implies,
                _ => return Err(SyntaxError::new("expected `->`", span(start, start + 1))),
            },
            '?' => {
                let kind = match chars.next() {
                    Some((_, '0')) => HoleKind::Formula,
                    Some((_, '1')) => HoleKind::Unary,
                    Some((_, '2')) => HoleKind::Binary,
                    _ => {
                        return Err(SyntaxError::new("placeholder must be `?0`, `?1` or `?2`", span(start, start + 1)))
                    }
                };
                let name = if chars.peek().map(|&(_, c)| c) == Some('{') {
                    chars.next();
                    let mut name = String::new();
                    loop {
                        match chars.next() {
                            Some((_, '}')) => break,
                            Some((_, c)) if is_ident_char(c) => name.push(c),
                            Some((i, _)) => {
                                return Err(SyntaxError::new(
                                    "placeholder names may only contain letters, digits and `_`",
                                    span(i, i + 1),
                                ))
                            }
                            None => {
                                return Err(SyntaxError::new("unterminated placeholder name", span(start, text.len())))
                            }
                        }
                    }
                    if name.is_empty() {
                        return Err(SyntaxError::new("empty placeholder name", span(start, start + 4)));
                    }
                    Some(name)
                } else {
                    None
                };
                Tok::Hole(kind, name)
            }
            c if is_ident_start(c) => {
                let mut word = String::from(c);
                while let Some(&(_, c)) = chars.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    word.push(c);
                    chars.next();
                }
                match word.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "X" => Tok::Unary(UnaryOp::Next),
                    "F" => Tok::Unary(UnaryOp::Finally),
                    "G" => Tok::Unary(UnaryOp::Globally),
                    "U" => Tok::Binary(BinaryOp::Until),
                    _ => Tok::Ident(word),
                }
            }
            c => {
                return Err(SyntaxError::new(format!("unexpected character `{c}`"), span(start, start + c.len_utf8())))
            }
        };
        let end = chars.peek().map_or(text.len(), |&(i, _)| i);
        out.push((tok, span(start, end)));
    }
    out.push((Tok::Eof, span(text.len(), text.len())));
    Ok(out)
}

#[derive(Clone, Copy)]
enum Level {
    Implies,
    HoleBinary,
    Or,
    And,
    Until,
}

const LEVELS: [Level; 5] = [Level::Implies, Level::HoleBinary, Level::Or, Level::And, Level::Until];

enum BinTok {
    Implies,
    Op(BinaryOp),
    Hole(PlaceholderId),
}

enum PrefixTok {
    Op(UnaryOp),
    Hole(PlaceholderId),
}

struct Parser {
    tokens: Vec<(Tok, SourceSpan)>,
    pos: usize,
    builder: DagBuilder,
    named: HashMap<String, (HoleKind, PlaceholderId)>,
    names: BTreeMap<PlaceholderId, String>,
    next_id: u32,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let tok = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn unexpected(&self, expected: &str) -> SyntaxError {
        SyntaxError::new(format!("expected {expected}, found {}", self.peek().describe()), self.span())
    }

    fn placeholder(
        &mut self,
        kind: HoleKind,
        name: Option<String>,
        span: SourceSpan,
    ) -> Result<PlaceholderId, SyntaxError> {
        let Some(name) = name else {
            self.next_id += 1;
            return Ok(PlaceholderId(self.next_id - 1));
        };
        if let Some(&(prev, id)) = self.named.get(&name) {
            if prev != kind {
                return Err(SyntaxError::new(
                    format!("placeholder `{name}` is used as both {} and {}", prev.tag(), kind.tag()),
                    span,
                ));
            }
            return Ok(id);
        }
        let id = PlaceholderId(self.next_id);
        self.next_id += 1;
        self.named.insert(name.clone(), (kind, id));
        self.names.insert(id, name);
        Ok(id)
    }

    fn binary_op(&mut self, level: Level) -> Result<Option<BinTok>, SyntaxError> {
        let span = self.span();
        let op = match (level, self.peek().clone()) {
            (Level::Implies, Tok::Implies) => BinTok::Implies,
            (Level::HoleBinary, Tok::Hole(HoleKind::Binary, name)) => {
                BinTok::Hole(self.placeholder(HoleKind::Binary, name, span)?)
            }
            (Level::Or, Tok::Binary(BinaryOp::Or)) => BinTok::Op(BinaryOp::Or),
            (Level::And, Tok::Binary(BinaryOp::And)) => BinTok::Op(BinaryOp::And),
            (Level::Until, Tok::Binary(BinaryOp::Until)) => BinTok::Op(BinaryOp::Until),
            _ => return Ok(None),
        };
        self.bump();
        Ok(Some(op))
    }

    fn expr(&mut self, level: usize) -> Result<usize, SyntaxError> {
        if level == LEVELS.len() {
            return self.unary();
        }
        let mut operands = vec![self.expr(level + 1)?];
        let mut ops = Vec::new();
        while let Some(op) = self.binary_op(LEVELS[level])? {
            ops.push(op);
            operands.push(self.expr(level + 1)?);
        }
        let mut acc = operands.pop().unwrap();
        while let Some(op) = ops.pop() {
            let left = operands.pop().unwrap();
            acc = match op {
                BinTok::Implies => {
                    let not = self.builder.unary(UnaryOp::Not, left);
                    self.builder.binary(BinaryOp::Or, not, acc)
                }
                BinTok::Op(op) => self.builder.binary(op, left, acc),
                BinTok::Hole(id) => self.builder.add(Label::Hole(HoleKind::Binary, id), Some(left), Some(acc)),
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<usize, SyntaxError> {
        let mut prefix = Vec::new();
        loop {
            let span = self.span();
            match self.peek().clone() {
                Tok::Unary(op) => prefix.push(PrefixTok::Op(op)),
                Tok::Hole(HoleKind::Unary, name) => {
                    prefix.push(PrefixTok::Hole(self.placeholder(HoleKind::Unary, name, span)?))
                }
                _ => break,
            }
            self.bump();
        }
        let mut acc = self.atom()?;
        while let Some(p) = prefix.pop() {
            acc = match p {
                PrefixTok::Op(op) => self.builder.unary(op, acc),
                PrefixTok::Hole(id) => self.builder.add(Label::Hole(HoleKind::Unary, id), Some(acc), None),
            };
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<usize, SyntaxError> {
        let span = self.span();
        let handle = match self.peek().clone() {
            Tok::Ident(name) => self.builder.prop(&name),
            Tok::True => self.builder.leaf(Label::True),
            Tok::False => self.builder.leaf(Label::False),
            Tok::Hole(HoleKind::Formula, name) => {
                let id = self.placeholder(HoleKind::Formula, name, span)?;
                self.builder.leaf(Label::Hole(HoleKind::Formula, id))
            }
            Tok::Hole(HoleKind::Binary, _) => {
                return Err(SyntaxError::new("binary placeholder `?2` is missing its left operand", span))
            }
            Tok::LParen => {
                self.depth += 1;
                if self.depth > MAX_NESTING {
                    return Err(SyntaxError::new("parentheses nested too deeply", span));
                }
                self.bump();
                let inner = self.expr(0)?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.depth -= 1;
                inner
            }
            _ => return Err(self.unexpected("a formula")),
        };
        self.bump();
        Ok(handle)
    }
}

/// Parses a formula or sketch. Named placeholders with equal names denote
/// one placeholder; every anonymous occurrence is a distinct placeholder.
pub fn parse_formula(text: &str) -> Result<Sketch, SyntaxError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        builder: DagBuilder::new(),
        named: HashMap::new(),
        names: BTreeMap::new(),
        next_id: 0,
        depth: 0,
    };
    let root = parser.expr(0)?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.unexpected("an operator or end of input"));
    }
    let dag = parser.builder.build(root);
    let mut depth = vec![1usize; dag.size()];
    for i in (0..dag.size()).rev() {
        depth[i] += dag.node(i).children().map(|c| depth[c]).max().unwrap_or(0);
    }
    if depth[SyntaxDag::ROOT] > MAX_DEPTH {
        return Err(SyntaxError::new(
            format!("formula is nested deeper than {MAX_DEPTH} levels"),
            SourceSpan::new(1, 1, text.chars().count()),
        ));
    }
    Sketch::new(dag, parser.names).map_err(|e| SyntaxError::new(e.to_string(), SourceSpan::new(1, 1, text.len())))
}

/// Parses text that must not contain placeholders.
pub fn parse_ltl(text: &str) -> Result<SyntaxDag, SyntaxError> {
    let sketch = parse_formula(text)?;
    if !sketch.is_formula() {
        return Err(SyntaxError::new("placeholders are not allowed here", SourceSpan::new(1, 1, text.chars().count())));
    }
    Ok(sketch.into_dag())
}

pub fn format_formula(sketch: &Sketch) -> String {
    Printer::new(sketch.dag(), sketch.names()).print()
}

/// Formats a DAG; placeholders without names print anonymously unless
/// they occur more than once.
pub fn format_dag(dag: &SyntaxDag) -> String {
    Printer::new(dag, &BTreeMap::new()).print()
}

struct Printer<'a> {
    dag: &'a SyntaxDag,
    names: BTreeMap<PlaceholderId, String>,
    out: String,
}

impl<'a> Printer<'a> {
    fn new(dag: &'a SyntaxDag, names: &BTreeMap<PlaceholderId, String>) -> Self {
        let mut names = names.clone();
        // A placeholder printed anonymously at two places would read back as two.
        let counts = dag.occurrence_counts();
        let mut uses: BTreeMap<PlaceholderId, u64> = BTreeMap::new();
        for (i, n) in dag.nodes().iter().enumerate() {
            if let Some((_, id)) = n.label.placeholder() {
                *uses.entry(id).or_default() += counts[i];
            }
        }
        for (id, count) in uses {
            if count > 1 && !names.contains_key(&id) {
                let mut name = format!("h{}", id.0);
                while names.values().any(|n| *n == name) {
                    name.push('_');
                }
                names.insert(id, name);
            }
        }
        Printer { dag, names, out: String::new() }
    }

    fn print(mut self) -> String {
        self.node(SyntaxDag::ROOT);
        self.out
    }

    fn hole(&mut self, kind: HoleKind, id: PlaceholderId) {
        self.out.push_str(kind.tag());
        if let Some(name) = self.names.get(&id) {
            self.out.push('{');
            self.out.push_str(name);
            self.out.push('}');
        }
    }

    fn is_binary(&self, i: usize) -> bool {
        self.dag.label(i).arity() == 2
    }

    fn child(&mut self, i: usize, parens: bool) {
        if parens {
            self.out.push('(');
            self.node(i);
            self.out.push(')');
        } else {
            self.node(i);
        }
    }

    fn node(&mut self, i: usize) {
        let n = self.dag.node(i);
        match &n.label {
            Label::Prop(p) => self.out.push_str(p),
            Label::True => self.out.push_str("true"),
            Label::False => self.out.push_str("false"),
            Label::Hole(HoleKind::Formula, id) => self.hole(HoleKind::Formula, *id),
            Label::Unary(_) | Label::Hole(HoleKind::Unary, _) => {
                match &n.label {
                    Label::Unary(UnaryOp::Not) => self.out.push('!'),
                    Label::Unary(op) => {
                        self.out.push_str(op.symbol());
                        self.out.push(' ');
                    }
                    Label::Hole(kind, id) => {
                        self.hole(*kind, *id);
                        self.out.push(' ');
                    }
                    _ => unreachable!(),
                }
                let c = n.left.unwrap();
                self.child(c, self.is_binary(c));
            }
            Label::Binary(_) | Label::Hole(HoleKind::Binary, _) => {
                let (l, r) = (n.left.unwrap(), n.right.unwrap());
                self.child(l, self.is_binary(l));
                self.out.push(' ');
                match &n.label {
                    Label::Binary(op) => self.out.push_str(op.symbol()),
                    Label::Hole(kind, id) => self.hole(*kind, *id),
                    _ => unreachable!(),
                }
                self.out.push(' ');
                let parens = self.is_binary(r) && self.dag.label(r) != &n.label;
                self.child(r, parens);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(text: &str) -> String {
        format_formula(&parse_formula(text).unwrap())
    }

    #[test]
    fn figure_formula_prints_with_grouping() {
        assert_eq!(roundtrip("(p U G q) | F G q"), "(p U G q) | F G q");
        assert_eq!(parse_ltl("(p U G q) | F G q").unwrap().size(), 6);
    }

    #[test]
    fn right_associative_until() {
        let a = parse_ltl("p U q U r").unwrap();
        let b = parse_ltl("p U (q U r)").unwrap();
        assert_eq!(a, b);
        assert_eq!(format_dag(&a), "p U q U r");
        assert_eq!(roundtrip("(p U q) U r"), "(p U q) U r");
    }

    #[test]
    fn precedence_levels() {
        assert_eq!(parse_ltl("p | q & r").unwrap(), parse_ltl("p | (q & r)").unwrap());
        assert_eq!(parse_ltl("!p U q").unwrap(), parse_ltl("(!p) U q").unwrap());
        assert_eq!(parse_ltl("p -> q").unwrap(), parse_ltl("!p | q").unwrap());
        assert_eq!(parse_ltl("a -> b -> c").unwrap(), parse_ltl("!a | (!b | c)").unwrap());
    }

    #[test]
    fn placeholders() {
        let sk = parse_formula("G(p -> ?0)").unwrap();
        assert_eq!(sk.placeholders_of(HoleKind::Formula).len(), 1);
        let sk = parse_formula("(?0 U G q) ?2 (?1 (G q))").unwrap();
        assert_eq!(sk.size(), 6);
        for kind in [HoleKind::Formula, HoleKind::Unary, HoleKind::Binary] {
            assert_eq!(sk.placeholders_of(kind).len(), 1);
        }
        assert_eq!(format_formula(&sk), "(?0 U G q) ?2 ?1 G q");
    }

    #[test]
    fn named_placeholders_are_shared() {
        let sk = parse_formula("?0{a} & X ?0{a}").unwrap();
        assert_eq!(sk.placeholders().len(), 1);
        assert_eq!(sk.size(), 3);
        let sk = parse_formula("?0 & X ?0").unwrap();
        assert_eq!(sk.placeholders().len(), 2);
        assert_eq!(sk.size(), 4);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_formula("p &\n  & q").unwrap_err();
        assert_eq!(err.span, SourceSpan::new(2, 3, 1));
        let err = parse_formula("?0{a} | ?1{a} p").unwrap_err();
        assert!(err.message.contains("both"));
        assert!(parse_formula("?2 p").is_err());
        assert!(parse_formula("?0 p").is_err());
        assert!(parse_formula("(p").is_err());
        assert!(parse_formula("").is_err());
        assert!(parse_formula("p - q").is_err());
    }

    #[test]
    fn deep_nesting_is_rejected_not_overflowing() {
        let text = format!("{}p{}", "(".repeat(10_000), ")".repeat(10_000));
        assert!(parse_formula(&text).is_err());
        assert!(parse_formula(&format!("{}p", "X ".repeat(10_000))).is_err());
        assert!(parse_formula(&format!("{}p", "p U ".repeat(10_000))).is_err());
        assert_eq!(parse_ltl(&format!("{}p", "X ".repeat(400))).unwrap().size(), 401);
    }

    #[test]
    fn shared_anonymous_hole_gets_a_name() {
        let mut b = DagBuilder::new();
        let h = b.leaf(Label::Hole(HoleKind::Formula, PlaceholderId(0)));
        let x = b.unary(UnaryOp::Next, h);
        let root = b.binary(BinaryOp::And, h, x);
        let sk = Sketch::new(b.build(root), BTreeMap::new()).unwrap();
        let text = format_formula(&sk);
        assert_eq!(text, "?0{h0} & X ?0{h0}");
        assert_eq!(parse_formula(&text).unwrap().dag(), sk.dag());
    }

    #[test]
    fn unary_spacing() {
        assert_eq!(roundtrip("!p & X q"), "!p & X q");
        assert_eq!(roundtrip("X(p | q)"), "X (p | q)");
        assert_eq!(roundtrip("!!p"), "!!p");
        assert_eq!(roundtrip("G(p -> X F q)"), "G (!p | X F q)");
    }
}
