//! Abstract syntax, concrete grammar, canonical printer, and the desugarer
//! for standpoint-annotated defaults.
//!
//! Expressions are either sharpening statements `s <= u` or modal formulas
//! built from atoms, `!`, `&`, `|`, `->`, `[s]` and `<s>`. Sharpening
//! statements may only occur at the top level of a theory. Statements end
//! with `.`; `#` starts a line comment.

use std::collections::BTreeSet;
use std::fmt;

use crate::embeddings;
use crate::hierarchy::SharpeningClosure;

/// Name of the fresh atom used by the credulous/sceptical reductions.
/// Identifiers starting with `__` are rejected by the parser, so the
/// reduction atom can never collide with user vocabulary.
pub const RESERVED_FRESH_ATOM: &str = "__z";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {msg}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl SyntaxError {
    fn at(pos: Pos, msg: impl Into<String>) -> Self {
        SyntaxError { line: pos.line, col: pos.col, msg: msg.into() }
    }
}

/// A propositional atom. Valid names match `[a-z][A-Za-z0-9_]*`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(String);

impl Atom {
    pub fn new(name: &str) -> Result<Atom, SyntaxError> {
        let mut chars = name.chars();
        let ok = matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if ok {
            Ok(Atom(name.to_owned()))
        } else {
            Err(SyntaxError { line: 0, col: 0, msg: format!("invalid atom name `{name}`") })
        }
    }

    /// Constructor for reserved atoms (`__`-prefixed); these are rejected by
    /// the parser and used internally by the query reductions.
    pub(crate) fn reserved(name: &str) -> Atom {
        debug_assert!(name.starts_with("__"));
        Atom(name.to_owned())
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_reserved(&self) -> bool {
        self.0.starts_with("__")
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A standpoint name: either the universal standpoint `*` or an identifier
/// matching `[A-Za-z][A-Za-z0-9_]*`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StandpointName(String);

impl StandpointName {
    pub fn universal() -> StandpointName {
        StandpointName("*".to_owned())
    }

    pub fn new(name: &str) -> Result<StandpointName, SyntaxError> {
        if name == "*" {
            return Ok(Self::universal());
        }
        let mut chars = name.chars();
        let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if ok {
            Ok(StandpointName(name.to_owned()))
        } else {
            Err(SyntaxError { line: 0, col: 0, msg: format!("invalid standpoint name `{name}`") })
        }
    }

    pub fn is_universal(&self) -> bool {
        self.0 == "*"
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StandpointName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Modal formulas. `Or`, `Implies` and `Diamond` are definable sugar kept as
/// explicit variants; `subformulas` and sizes count the tree as written,
/// while the semantic modules normalise `Diamond` away internally.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    Bottom,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Box(StandpointName, Box<Formula>),
    Diamond(StandpointName, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Atom::new(name).expect("valid atom name"))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn boxed(s: StandpointName, f: Formula) -> Formula {
        Formula::Box(s, Box::new(f))
    }

    pub fn diamond(s: StandpointName, f: Formula) -> Formula {
        Formula::Diamond(s, Box::new(f))
    }

    /// Left-fold conjunction of a nonempty list; `None` for an empty one.
    pub fn conjoin(fs: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        let mut it = fs.into_iter();
        let first = it.next()?;
        Some(it.fold(first, Formula::and))
    }

    /// Distinct subformulas of the tree as written, including the formula
    /// itself. The size of a formula is the length of this set.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut acc = BTreeSet::new();
        self.collect_subformulas(&mut acc);
        acc
    }

    fn collect_subformulas(&self, acc: &mut BTreeSet<Formula>) {
        if !acc.insert(self.clone()) {
            return;
        }
        match self {
            Formula::Atom(_) | Formula::Bottom => {}
            Formula::Not(g) | Formula::Box(_, g) | Formula::Diamond(_, g) => {
                g.collect_subformulas(acc)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_subformulas(acc);
                b.collect_subformulas(acc);
            }
        }
    }

    pub fn size(&self) -> usize {
        self.subformulas().len()
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut acc = BTreeSet::new();
        self.collect_atoms(&mut acc);
        acc
    }

    fn collect_atoms(&self, acc: &mut BTreeSet<Atom>) {
        match self {
            Formula::Atom(a) => {
                acc.insert(a.clone());
            }
            Formula::Bottom => {}
            Formula::Not(g) | Formula::Box(_, g) | Formula::Diamond(_, g) => g.collect_atoms(acc),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_atoms(acc);
                b.collect_atoms(acc);
            }
        }
    }

    pub fn standpoints(&self) -> BTreeSet<StandpointName> {
        let mut acc = BTreeSet::new();
        self.collect_standpoints(&mut acc);
        acc
    }

    fn collect_standpoints(&self, acc: &mut BTreeSet<StandpointName>) {
        match self {
            Formula::Atom(_) | Formula::Bottom => {}
            Formula::Not(g) => g.collect_standpoints(acc),
            Formula::Box(s, g) | Formula::Diamond(s, g) => {
                acc.insert(s.clone());
                g.collect_standpoints(acc);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_standpoints(acc);
                b.collect_standpoints(acc);
            }
        }
    }

    /// Rewrites `<s> f` into `! [s] (! f)`. The semantic modules work on
    /// this form so that every modality is a box.
    pub(crate) fn normalize_diamonds(&self) -> Formula {
        match self {
            Formula::Atom(_) | Formula::Bottom => self.clone(),
            Formula::Not(g) => Formula::not(g.normalize_diamonds()),
            Formula::And(a, b) => Formula::and(a.normalize_diamonds(), b.normalize_diamonds()),
            Formula::Or(a, b) => Formula::or(a.normalize_diamonds(), b.normalize_diamonds()),
            Formula::Implies(a, b) => {
                Formula::implies(a.normalize_diamonds(), b.normalize_diamonds())
            }
            Formula::Box(s, g) => Formula::boxed(s.clone(), g.normalize_diamonds()),
            Formula::Diamond(s, g) => {
                Formula::not(Formula::boxed(s.clone(), Formula::not(g.normalize_diamonds())))
            }
        }
    }

    /// Canonical comparison: by size first, then by printed form.
    pub fn canonical_cmp(&self, other: &Formula) -> std::cmp::Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.to_string().cmp(&other.to_string()))
    }
}

/// Either a formula or a top-level sharpening statement `s <= u`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expression {
    Formula(Formula),
    Sharpening(StandpointName, StandpointName),
}

impl Expression {
    pub fn as_formula(&self) -> Option<&Formula> {
        match self {
            Expression::Formula(f) => Some(f),
            Expression::Sharpening(..) => None,
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        match self {
            Expression::Formula(f) => f.atoms(),
            Expression::Sharpening(..) => BTreeSet::new(),
        }
    }

    pub fn standpoints(&self) -> BTreeSet<StandpointName> {
        match self {
            Expression::Formula(f) => f.standpoints(),
            Expression::Sharpening(s, u) => [s.clone(), u.clone()].into_iter().collect(),
        }
    }

    /// Sharpening statements count as size 2.
    pub fn size(&self) -> usize {
        match self {
            Expression::Formula(f) => f.size(),
            Expression::Sharpening(..) => 2,
        }
    }
}

/// A default `[s] (pre : just_1, ..., just_n / cons)` prior to desugaring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedDefault {
    pub standpoint: StandpointName,
    pub prerequisite: Formula,
    pub justifications: Vec<Formula>,
    pub consequent: Formula,
}

/// Expands an annotated default into its defining formula
/// `([s]pre & [s]![s]!j1 & ... & [s]![s]!jn) -> [s]cons`.
pub fn desugar_default(d: &AnnotatedDefault) -> Formula {
    let s = &d.standpoint;
    let mut conjuncts = vec![Formula::boxed(s.clone(), d.prerequisite.clone())];
    for j in &d.justifications {
        conjuncts.push(Formula::boxed(
            s.clone(),
            Formula::not(Formula::boxed(s.clone(), Formula::not(j.clone()))),
        ));
    }
    let antecedent = Formula::conjoin(conjuncts).expect("at least the prerequisite conjunct");
    Formula::implies(antecedent, Formula::boxed(s.clone(), d.consequent.clone()))
}

/// A finite theory: the (deduplicated) list of expressions together with its
/// derived indices (vocabulary, sharpening closure).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theory {
    expressions: Vec<Expression>,
    atoms: BTreeSet<Atom>,
    standpoints: BTreeSet<StandpointName>,
    closure: SharpeningClosure,
}

impl Theory {
    pub fn new(expressions: Vec<Expression>) -> Theory {
        Self::with_extra_atoms(expressions, BTreeSet::new())
    }

    /// Builds a theory whose vocabulary is extended beyond the occurring
    /// atoms. Extra atoms matter for non-monotonic query evaluation, where
    /// the query vocabulary must be part of the model space.
    pub fn with_extra_atoms(expressions: Vec<Expression>, extra: BTreeSet<Atom>) -> Theory {
        let mut seen = BTreeSet::new();
        let mut dedup = Vec::new();
        for e in expressions {
            if seen.insert(e.clone()) {
                dedup.push(e);
            }
        }
        let mut atoms = extra;
        let mut standpoints = BTreeSet::new();
        standpoints.insert(StandpointName::universal());
        for e in &dedup {
            atoms.extend(e.atoms());
            standpoints.extend(e.standpoints());
        }
        let closure = SharpeningClosure::build(&dedup, &standpoints);
        Theory { expressions: dedup, atoms, standpoints, closure }
    }

    pub fn empty() -> Theory {
        Theory::new(Vec::new())
    }

    pub fn expressions(&self) -> &[Expression] {
        &self.expressions
    }

    pub fn atoms(&self) -> &BTreeSet<Atom> {
        &self.atoms
    }

    pub fn standpoints(&self) -> &BTreeSet<StandpointName> {
        &self.standpoints
    }

    pub fn closure(&self) -> &SharpeningClosure {
        &self.closure
    }

    /// `size(T) = sum of expression sizes`, sharpening statements counting 2.
    pub fn size(&self) -> usize {
        self.expressions.iter().map(Expression::size).sum()
    }

    /// Returns a theory extended by further expressions, keeping the
    /// current vocabulary (plus whatever the new expressions mention).
    pub fn extended(&self, extra: Vec<Expression>) -> Theory {
        let mut exprs = self.expressions.clone();
        exprs.extend(extra);
        Theory::with_extra_atoms(exprs, self.atoms.clone())
    }

    /// All distinct subformulas of the theory's formulas (trees as written),
    /// closed under subterms and ordered by (size, printed form).
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut acc = BTreeSet::new();
        for e in &self.expressions {
            if let Expression::Formula(f) = e {
                f.collect_subformulas(&mut acc);
            }
        }
        let mut out: Vec<Formula> = acc.into_iter().collect();
        out.sort_by(|a, b| a.canonical_cmp(b));
        out
    }

    /// The box-rooted subformulas of the diamond-normalised theory, in
    /// canonical order. This is the carrier set partitioned by the
    /// non-monotonic machinery.
    pub fn modal_subformulas(&self) -> Vec<Formula> {
        let mut acc = BTreeSet::new();
        for e in &self.expressions {
            if let Expression::Formula(f) = e {
                for sub in f.normalize_diamonds().subformulas() {
                    if matches!(sub, Formula::Box(..)) {
                        acc.insert(sub);
                    }
                }
            }
        }
        let mut out: Vec<Formula> = acc.into_iter().collect();
        out.sort_by(|a, b| a.canonical_cmp(b));
        out
    }

    /// Formula members of the theory, diamond-normalised.
    pub(crate) fn normalized_formulas(&self) -> Vec<Formula> {
        self.expressions
            .iter()
            .filter_map(Expression::as_formula)
            .map(Formula::normalize_diamonds)
            .collect()
    }

    pub(crate) fn sharpening_statements(&self) -> Vec<(StandpointName, StandpointName)> {
        self.expressions
            .iter()
            .filter_map(|e| match e {
                Expression::Sharpening(s, u) => Some((s.clone(), u.clone())),
                Expression::Formula(_) => None,
            })
            .collect()
    }
}

/// `vocabulary(T)`: the occurring atoms and the occurring standpoints
/// (always including `*`).
pub fn vocabulary(t: &Theory) -> (BTreeSet<Atom>, BTreeSet<StandpointName>) {
    (t.atoms().clone(), t.standpoints().clone())
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

fn is_atomic(f: &Formula) -> bool {
    matches!(f, Formula::Atom(_) | Formula::Bottom)
}

fn fmt_wrapped(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if is_atomic(f) {
        write!(out, "{f}")
    } else {
        write!(out, "({f})")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(out, "{a}"),
            Formula::Bottom => write!(out, "_|_"),
            Formula::Not(g) => {
                write!(out, "! ")?;
                fmt_wrapped(g, out)
            }
            Formula::And(a, b) => {
                fmt_wrapped(a, out)?;
                write!(out, " & ")?;
                fmt_wrapped(b, out)
            }
            Formula::Or(a, b) => {
                fmt_wrapped(a, out)?;
                write!(out, " | ")?;
                fmt_wrapped(b, out)
            }
            Formula::Implies(a, b) => {
                fmt_wrapped(a, out)?;
                write!(out, " -> ")?;
                fmt_wrapped(b, out)
            }
            Formula::Box(s, g) => {
                write!(out, "[{s}] ")?;
                fmt_wrapped(g, out)
            }
            Formula::Diamond(s, g) => {
                write!(out, "<{s}> ")?;
                fmt_wrapped(g, out)
            }
        }
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Formula(f) => write!(out, "{f}"),
            Expression::Sharpening(s, u) => write!(out, "{s} <= {u}"),
        }
    }
}

/// Canonical text of an expression; the output re-parses to a structurally
/// identical expression.
pub fn print_expression(e: &Expression) -> String {
    e.to_string()
}

/// Renders a theory as statements accepted by the `.spt` grammar.
pub fn print_theory(t: &Theory) -> String {
    let mut out = String::new();
    for e in t.expressions() {
        out.push_str(&print_expression(e));
        out.push_str(".\n");
    }
    out
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Token {
    Ident(String),
    Star,
    Bottom,
    LBracket,
    RBracket,
    LAngle,
    RAngle,
    LParen,
    RParen,
    Bang,
    Amp,
    Pipe,
    Arrow,
    LessEq,
    ColonDash,
    Comma,
    Semi,
    Dot,
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Token::Ident(n) => return write!(f, "`{n}`"),
            Token::Star => "`*`",
            Token::Bottom => "`_|_`",
            Token::LBracket => "`[`",
            Token::RBracket => "`]`",
            Token::LAngle => "`<`",
            Token::RAngle => "`>`",
            Token::LParen => "`(`",
            Token::RParen => "`)`",
            Token::Bang => "`!`",
            Token::Amp => "`&`",
            Token::Pipe => "`|`",
            Token::Arrow => "`->`",
            Token::LessEq => "`<=`",
            Token::ColonDash => "`:-`",
            Token::Comma => "`,`",
            Token::Semi => "`;`",
            Token::Dot => "`.`",
            Token::Eof => "end of input",
        };
        f.write_str(s)
    }
}

pub(crate) fn lex(text: &str) -> Result<Vec<(Token, Pos)>, SyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;
    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        match c {
            ' ' | '\t' | '\r' | '\n' => bump!(),
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    bump!();
                }
            }
            '[' => {
                out.push((Token::LBracket, pos));
                bump!();
            }
            ']' => {
                out.push((Token::RBracket, pos));
                bump!();
            }
            '(' => {
                out.push((Token::LParen, pos));
                bump!();
            }
            ')' => {
                out.push((Token::RParen, pos));
                bump!();
            }
            '!' => {
                out.push((Token::Bang, pos));
                bump!();
            }
            '&' => {
                out.push((Token::Amp, pos));
                bump!();
            }
            '|' => {
                out.push((Token::Pipe, pos));
                bump!();
            }
            ',' => {
                out.push((Token::Comma, pos));
                bump!();
            }
            ';' => {
                out.push((Token::Semi, pos));
                bump!();
            }
            '.' => {
                out.push((Token::Dot, pos));
                bump!();
            }
            '*' => {
                out.push((Token::Star, pos));
                bump!();
            }
            '>' => {
                out.push((Token::RAngle, pos));
                bump!();
            }
            '<' => {
                bump!();
                if i < chars.len() && chars[i] == '=' {
                    out.push((Token::LessEq, pos));
                    bump!();
                } else {
                    out.push((Token::LAngle, pos));
                }
            }
            '-' => {
                bump!();
                if i < chars.len() && chars[i] == '>' {
                    out.push((Token::Arrow, pos));
                    bump!();
                } else {
                    return Err(SyntaxError::at(pos, "expected `->`"));
                }
            }
            ':' => {
                bump!();
                if i < chars.len() && chars[i] == '-' {
                    out.push((Token::ColonDash, pos));
                    bump!();
                } else {
                    return Err(SyntaxError::at(pos, "expected `:-`"));
                }
            }
            '_' => {
                if i + 2 < chars.len() && chars[i + 1] == '|' && chars[i + 2] == '_' {
                    out.push((Token::Bottom, pos));
                    bump!();
                    bump!();
                    bump!();
                } else {
                    let mut name = String::new();
                    while i < chars.len()
                        && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                    {
                        name.push(chars[i]);
                        bump!();
                    }
                    return Err(SyntaxError::at(
                        pos,
                        format!("reserved identifier `{name}` (names starting with `_` are reserved)"),
                    ));
                }
            }
            c if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    name.push(chars[i]);
                    bump!();
                }
                out.push((Token::Ident(name), pos));
            }
            other => return Err(SyntaxError::at(pos, format!("unexpected character `{other}`"))),
        }
    }
    out.push((Token::Eof, Pos { line, col }));
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

/// Input dialects accepted by [`parse_theory`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Plain theories (`.spt`).
    Spt,
    /// Standpoint default theories (`.dl`).
    Dl,
    /// Normal logic programs (`.lp`).
    Lp,
    /// Argumentation frameworks (`.af`).
    Af,
}

impl Mode {
    pub fn from_extension(path: &str) -> Option<Mode> {
        let ext = path.rsplit('.').next()?;
        match ext {
            "spt" => Some(Mode::Spt),
            "dl" => Some(Mode::Dl),
            "lp" => Some(Mode::Lp),
            "af" => Some(Mode::Af),
            _ => None,
        }
    }
}

pub(crate) struct Parser {
    tokens: Vec<(Token, Pos)>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(text: &str) -> Result<Parser, SyntaxError> {
        Ok(Parser { tokens: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn peek2(&self) -> &Token {
        &self.tokens[(self.pos + 1).min(self.tokens.len() - 1)].0
    }

    fn here(&self) -> Pos {
        self.tokens[self.pos].1
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: &Token) -> Result<(), SyntaxError> {
        if self.peek() == t {
            self.advance();
            Ok(())
        } else {
            Err(SyntaxError::at(self.here(), format!("expected {t}, found {}", self.peek())))
        }
    }

    pub(crate) fn at_eof(&self) -> bool {
        matches!(self.peek(), Token::Eof)
    }

    fn err_nested_sharpening(&self) -> SyntaxError {
        SyntaxError::at(self.here(), "sharpening statements cannot occur inside formulas")
    }

    fn parse_standpoint(&mut self) -> Result<StandpointName, SyntaxError> {
        let pos = self.here();
        match self.advance() {
            Token::Star => Ok(StandpointName::universal()),
            Token::Ident(n) => {
                StandpointName::new(&n).map_err(|e| SyntaxError::at(pos, e.msg))
            }
            other => Err(SyntaxError::at(pos, format!("expected standpoint name, found {other}"))),
        }
    }

    fn parse_atom(&mut self) -> Result<Atom, SyntaxError> {
        let pos = self.here();
        match self.advance() {
            Token::Ident(n) => Atom::new(&n).map_err(|e| SyntaxError::at(pos, e.msg)),
            other => Err(SyntaxError::at(pos, format!("expected atom, found {other}"))),
        }
    }

    pub(crate) fn parse_formula(&mut self) -> Result<Formula, SyntaxError> {
        let f = self.parse_implies()?;
        if matches!(self.peek(), Token::LessEq) {
            return Err(self.err_nested_sharpening());
        }
        Ok(f)
    }

    fn parse_implies(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.parse_or()?;
        if matches!(self.peek(), Token::Arrow) {
            self.advance();
            let rhs = self.parse_implies()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn parse_or(&mut self) -> Result<Formula, SyntaxError> {
        let mut f = self.parse_and()?;
        while matches!(self.peek(), Token::Pipe) {
            self.advance();
            f = Formula::or(f, self.parse_and()?);
        }
        Ok(f)
    }

    fn parse_and(&mut self) -> Result<Formula, SyntaxError> {
        let mut f = self.parse_unary()?;
        while matches!(self.peek(), Token::Amp) {
            self.advance();
            f = Formula::and(f, self.parse_unary()?);
        }
        Ok(f)
    }

    fn parse_unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Token::Bang => {
                self.advance();
                Ok(Formula::not(self.parse_unary()?))
            }
            Token::LBracket => {
                self.advance();
                let s = self.parse_standpoint()?;
                self.expect(&Token::RBracket)?;
                Ok(Formula::boxed(s, self.parse_unary()?))
            }
            Token::LAngle => {
                self.advance();
                let s = self.parse_standpoint()?;
                self.expect(&Token::RAngle)?;
                Ok(Formula::diamond(s, self.parse_unary()?))
            }
            _ => self.parse_primary(),
        }
    }

    fn parse_primary(&mut self) -> Result<Formula, SyntaxError> {
        let pos = self.here();
        match self.peek().clone() {
            Token::Ident(_) => Ok(Formula::Atom(self.parse_atom()?)),
            Token::Bottom => {
                self.advance();
                Ok(Formula::Bottom)
            }
            Token::LParen => {
                self.advance();
                let f = self.parse_implies()?;
                if matches!(self.peek(), Token::LessEq) {
                    return Err(self.err_nested_sharpening());
                }
                self.expect(&Token::RParen)?;
                Ok(f)
            }
            other => Err(SyntaxError::at(pos, format!("expected formula, found {other}"))),
        }
    }

    /// A statement of the `.spt` grammar (without the trailing dot).
    pub(crate) fn parse_expression(&mut self) -> Result<Expression, SyntaxError> {
        let sharpening_ahead = matches!(self.peek(), Token::Ident(_) | Token::Star)
            && matches!(self.peek2(), Token::LessEq);
        if sharpening_ahead {
            let s = self.parse_standpoint()?;
            self.expect(&Token::LessEq)?;
            let u = self.parse_standpoint()?;
            Ok(Expression::Sharpening(s, u))
        } else {
            Ok(Expression::Formula(self.parse_formula()?))
        }
    }

    fn parse_spt_statements(&mut self) -> Result<Vec<Expression>, SyntaxError> {
        let mut exprs = Vec::new();
        while !self.at_eof() {
            let e = self.parse_expression()?;
            self.expect(&Token::Dot)?;
            exprs.push(e);
        }
        Ok(exprs)
    }

    // `.dl` statements: annotated or plain defaults, otherwise `.spt` statements.
    fn parse_dl_statements(&mut self) -> Result<Vec<Expression>, SyntaxError> {
        let mut exprs = Vec::new();
        while !self.at_eof() {
            if let Some(d) = self.try_parse_default()? {
                exprs.push(Expression::Formula(desugar_default(&d)));
            } else {
                exprs.push(self.parse_expression()?);
            }
            self.expect(&Token::Dot)?;
        }
        Ok(exprs)
    }

    fn try_parse_default(&mut self) -> Result<Option<AnnotatedDefault>, SyntaxError> {
        let start = self.pos;
        let standpoint = if matches!(self.peek(), Token::LBracket) {
            self.advance();
            let s = match self.parse_standpoint() {
                Ok(s) => s,
                Err(_) => {
                    self.pos = start;
                    return Ok(None);
                }
            };
            if self.expect(&Token::RBracket).is_err() {
                self.pos = start;
                return Ok(None);
            }
            s
        } else {
            StandpointName::universal()
        };
        let is_default = matches!(self.peek(), Token::Ident(n) if n == "default")
            && matches!(self.peek2(), Token::LParen);
        if !is_default {
            self.pos = start;
            return Ok(None);
        }
        self.advance(); // `default`
        self.expect(&Token::LParen)?;
        let prerequisite = self.parse_formula()?;
        self.expect(&Token::Semi)?;
        let mut justifications = Vec::new();
        if !matches!(self.peek(), Token::Semi) {
            justifications.push(self.parse_formula()?);
            while matches!(self.peek(), Token::Comma) {
                self.advance();
                justifications.push(self.parse_formula()?);
            }
        }
        self.expect(&Token::Semi)?;
        let consequent = self.parse_formula()?;
        self.expect(&Token::RParen)?;
        Ok(Some(AnnotatedDefault { standpoint, prerequisite, justifications, consequent }))
    }

    fn parse_lp_rules(&mut self) -> Result<Vec<embeddings::LogicProgramRule>, SyntaxError> {
        let mut rules = Vec::new();
        while !self.at_eof() {
            let head = self.parse_atom()?;
            let mut pos_body = Vec::new();
            let mut neg_body = Vec::new();
            if matches!(self.peek(), Token::ColonDash) {
                self.advance();
                loop {
                    if matches!(self.peek(), Token::Ident(n) if n == "not") {
                        self.advance();
                        neg_body.push(self.parse_atom()?);
                    } else {
                        pos_body.push(self.parse_atom()?);
                    }
                    if matches!(self.peek(), Token::Comma) {
                        self.advance();
                    } else {
                        break;
                    }
                }
            }
            self.expect(&Token::Dot)?;
            rules.push(embeddings::LogicProgramRule { head, pos: pos_body, neg: neg_body });
        }
        Ok(rules)
    }

    fn parse_af(&mut self) -> Result<embeddings::ArgFramework, SyntaxError> {
        let mut args = BTreeSet::new();
        let mut attacks = BTreeSet::new();
        while !self.at_eof() {
            let pos = self.here();
            let name = match self.advance() {
                Token::Ident(n) => n,
                other => {
                    return Err(SyntaxError::at(
                        pos,
                        format!("expected `arg` or `att` fact, found {other}"),
                    ))
                }
            };
            self.expect(&Token::LParen)?;
            match name.as_str() {
                "arg" => {
                    args.insert(self.parse_atom()?);
                    self.expect(&Token::RParen)?;
                }
                "att" => {
                    let a = self.parse_atom()?;
                    self.expect(&Token::Comma)?;
                    let b = self.parse_atom()?;
                    self.expect(&Token::RParen)?;
                    attacks.insert((a, b));
                }
                other => {
                    return Err(SyntaxError::at(
                        pos,
                        format!("expected `arg` or `att`, found `{other}`"),
                    ))
                }
            }
            self.expect(&Token::Dot)?;
        }
        embeddings::ArgFramework::new(args, attacks)
            .map_err(|msg| SyntaxError { line: 0, col: 0, msg })
    }
}

/// Parses an input of the given dialect into a theory. The `dl`, `lp` and
/// `af` dialects are translated through the embeddings module.
pub fn parse_theory(text: &str, mode: Mode) -> Result<Theory, SyntaxError> {
    let mut p = Parser::new(text)?;
    match mode {
        Mode::Spt => Ok(Theory::new(p.parse_spt_statements()?)),
        Mode::Dl => Ok(Theory::new(p.parse_dl_statements()?)),
        Mode::Lp => {
            let rules = p.parse_lp_rules()?;
            Ok(embeddings::embed_lp(&rules, &StandpointName::universal()))
        }
        Mode::Af => {
            let af = p.parse_af()?;
            Ok(embeddings::embed_af(&af, &StandpointName::universal()))
        }
    }
}

/// Parses an argumentation framework without embedding it.
pub fn parse_af(text: &str) -> Result<embeddings::ArgFramework, SyntaxError> {
    Parser::new(text)?.parse_af()
}

/// Parses a single expression (a formula or a sharpening statement), as
/// used for query arguments. A trailing `.` is permitted.
pub fn parse_expression(text: &str) -> Result<Expression, SyntaxError> {
    let mut p = Parser::new(text)?;
    let e = p.parse_expression()?;
    if matches!(p.peek(), Token::Dot) {
        p.advance();
    }
    if !p.at_eof() {
        return Err(SyntaxError::at(p.here(), format!("trailing input: {}", p.peek())));
    }
    Ok(e)
}

/// Parses a single formula, rejecting sharpening statements.
pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    match parse_expression(text)? {
        Expression::Formula(f) => Ok(f),
        Expression::Sharpening(..) => Err(SyntaxError {
            line: 1,
            col: 1,
            msg: "expected a formula, found a sharpening statement".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(n: &str) -> StandpointName {
        StandpointName::new(n).unwrap()
    }

    #[test]
    fn box_binds_like_negation() {
        // `[M] pcos -> horm` attaches the box to `pcos` only.
        let t = parse_theory("[M] pcos -> horm.", Mode::Spt).unwrap();
        let expected = Formula::implies(
            Formula::boxed(sp("M"), Formula::atom("pcos")),
            Formula::atom("horm"),
        );
        assert_eq!(t.expressions(), &[Expression::Formula(expected)]);

        let t = parse_theory("[M] (pcos -> horm).", Mode::Spt).unwrap();
        let expected = Formula::boxed(
            sp("M"),
            Formula::implies(Formula::atom("pcos"), Formula::atom("horm")),
        );
        assert_eq!(t.expressions(), &[Expression::Formula(expected)]);
    }

    #[test]
    fn sharpening_statement_parses() {
        let t = parse_theory("D1 <= M.", Mode::Spt).unwrap();
        assert_eq!(t.expressions(), &[Expression::Sharpening(sp("D1"), sp("M"))]);
    }

    #[test]
    fn contradictions_parse_fine() {
        let t = parse_theory("[*] (p & !p).", Mode::Spt).unwrap();
        assert_eq!(t.expressions().len(), 1);
    }

    #[test]
    fn nested_sharpening_rejected() {
        let err = parse_theory("[M] (a <= b).", Mode::Spt).unwrap_err();
        assert!(err.msg.contains("sharpening"), "{err}");
        let err = parse_theory("[s] a <= b.", Mode::Spt).unwrap_err();
        assert!(err.msg.contains("sharpening"), "{err}");
    }

    #[test]
    fn reserved_identifiers_rejected() {
        let err = parse_theory("[*] __z.", Mode::Spt).unwrap_err();
        assert!(err.msg.contains("reserved"), "{err}");
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse_theory("[*] p.\n[*] (q & .", Mode::Spt).unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.col > 0);
    }

    #[test]
    fn print_examples() {
        let e = Expression::Formula(Formula::boxed(StandpointName::universal(), Formula::atom("p")));
        assert_eq!(print_expression(&e), "[*] p");
        let e = Expression::Formula(Formula::diamond(sp("M"), Formula::not(Formula::atom("horm"))));
        assert_eq!(print_expression(&e), "<M> (! horm)");
        let e = Expression::Sharpening(sp("D1"), sp("M"));
        assert_eq!(print_expression(&e), "D1 <= M");
    }

    #[test]
    fn printer_output_reparses() {
        let texts = [
            "[*] p.",
            "<M> (! horm).",
            "D1 <= M.",
            "([D2] ovudis & [D2] (! [D2] (! (! preg)))) -> [D2] fha.",
            "p | q -> ! r & _|_.",
        ];
        for text in texts {
            let t = parse_theory(text, Mode::Spt).unwrap();
            let reprinted = print_theory(&t);
            let t2 = parse_theory(&reprinted, Mode::Spt).unwrap();
            assert_eq!(t.expressions(), t2.expressions(), "round trip failed for {text}");
        }
    }

    #[test]
    fn desugar_single_justification() {
        let d = AnnotatedDefault {
            standpoint: sp("M"),
            prerequisite: Formula::atom("ovudis"),
            justifications: vec![Formula::atom("pcos")],
            consequent: Formula::atom("pcos"),
        };
        let got = desugar_default(&d);
        let expected = parse_formula(
            "([M] ovudis & [M] ! [M] ! pcos) -> [M] pcos",
        )
        .unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn desugar_two_justifications() {
        let d = AnnotatedDefault {
            standpoint: sp("D2"),
            prerequisite: Formula::atom("ovudis"),
            justifications: vec![Formula::not(Formula::atom("preg")), Formula::atom("fha")],
            consequent: Formula::atom("fha"),
        };
        let got = desugar_default(&d);
        let expected = parse_formula(
            "([D2] ovudis & [D2] ! [D2] ! (! preg) & [D2] ! [D2] ! fha) -> [D2] fha",
        )
        .unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn desugar_no_justifications() {
        let d = AnnotatedDefault {
            standpoint: sp("s"),
            prerequisite: Formula::atom("a"),
            justifications: vec![],
            consequent: Formula::atom("b"),
        };
        assert_eq!(desugar_default(&d), parse_formula("[s] a -> [s] b").unwrap());
    }

    #[test]
    fn subformulas_counting() {
        let t = parse_theory("p & q.", Mode::Spt).unwrap();
        let subs = t.subformulas();
        assert_eq!(subs.len(), 3);
        assert_eq!(t.size(), 3);

        let t = parse_theory("[s] p.", Mode::Spt).unwrap();
        assert_eq!(t.subformulas().len(), 2);
    }

    #[test]
    fn subformulas_ordered_and_deduplicated() {
        let t = parse_theory("p & q. q & p. p.", Mode::Spt).unwrap();
        let subs = t.subformulas();
        let printed: Vec<String> = subs.iter().map(|f| f.to_string()).collect();
        assert_eq!(printed, vec!["p", "q", "p & q", "q & p"]);
        let mut sorted = printed.clone();
        sorted.sort();
        // order is (size, print); sizes 1,1,3,3 with prints sorted within
        assert_eq!(subs[0].size(), 1);
        assert_eq!(subs[2].size(), 3);
    }

    #[test]
    fn vocabulary_examples() {
        let t = Theory::empty();
        assert!(t.atoms().is_empty());
        assert_eq!(t.standpoints().len(), 1);
        assert!(t.standpoints().contains(&StandpointName::universal()));

        let t = parse_theory("[s] p. s <= u.", Mode::Spt).unwrap();
        let (atoms, sps) = vocabulary(&t);
        assert_eq!(atoms.len(), 1);
        assert_eq!(sps.len(), 3); // *, s, u
    }

    #[test]
    fn duplicate_expressions_deduplicated() {
        let t = parse_theory("[*] p. [*] p. q.", Mode::Spt).unwrap();
        assert_eq!(t.expressions().len(), 2);
    }

    #[test]
    fn size_is_monotone_under_growth() {
        let t1 = parse_theory("[s] p.", Mode::Spt).unwrap();
        let t2 = parse_theory("[s] p. q & r.", Mode::Spt).unwrap();
        assert!(t2.size() >= t1.size());
    }

    #[test]
    fn modalsub_outermost_boxes_only() {
        let t = parse_theory("[s] ! [s] ! p.", Mode::Spt).unwrap();
        let ms = t.modal_subformulas();
        let printed: Vec<String> = ms.iter().map(|f| f.to_string()).collect();
        assert_eq!(printed, vec!["[s] (! p)", "[s] (! [s] (! p))"]);
        // modal subformulas of diamond-free theories are subformulas
        let subs = t.subformulas();
        for m in &ms {
            assert!(subs.contains(m));
        }
    }

    #[test]
    fn diamond_normalization_in_modalsub() {
        let t = parse_theory("<s> p.", Mode::Spt).unwrap();
        let ms = t.modal_subformulas();
        let printed: Vec<String> = ms.iter().map(|f| f.to_string()).collect();
        assert_eq!(printed, vec!["[s] (! p)"]);
    }
}
