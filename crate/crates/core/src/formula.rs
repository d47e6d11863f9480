//! Formulas of the quantum-logic dialects: AST, parser, printer and the
//! expansion of defined connectives.
//!
//! Concrete syntax, from loosest to tightest binding:
//!
//! | level | tokens |
//! |-------|--------|
//! | conditionals (non-associative) | `->1` … `->5`, `-o` (strict), `=>>` (entailment) |
//! | disjunctions (left-associative) | `\|` (∨), `+` (⊻), `.\|.` (vel) |
//! | conjunctions (left-associative) | `&`, `^` (classical ∧), `.&.` (et) |
//! | prefix | `-` (¬), `~` (∼), `!` (classical ¬), `[]`, `<>`, `L`, `M` |
//!
//! In the partial-sum dialects `&` denotes the defined conjunction
//! α ⊼ β = ¬(¬α ⊻ ¬β). Literals are identifiers starting with a lowercase
//! letter. The token `-o` is read as strict implication only when it is not
//! followed by an identifier character, so ¬o is written `- o`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// The formula languages of the workbench.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dialect {
    Ol,
    Oql,
    Pql,
    Rpql,
    Bzl,
    Bzl3,
    UPaql,
    WPaql,
    SPaql,
    Lql,
    ModalB,
}

impl Dialect {
    pub const ALL: [Dialect; 11] = [
        Dialect::Ol,
        Dialect::Oql,
        Dialect::Pql,
        Dialect::Rpql,
        Dialect::Bzl,
        Dialect::Bzl3,
        Dialect::UPaql,
        Dialect::WPaql,
        Dialect::SPaql,
        Dialect::Lql,
        Dialect::ModalB,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Dialect::Ol => "OL",
            Dialect::Oql => "OQL",
            Dialect::Pql => "PQL",
            Dialect::Rpql => "RPQL",
            Dialect::Bzl => "BZL",
            Dialect::Bzl3 => "BZL3",
            Dialect::UPaql => "UPaQL",
            Dialect::WPaql => "WPaQL",
            Dialect::SPaql => "SPaQL",
            Dialect::Lql => "LQL",
            Dialect::ModalB => "modal-B",
        }
    }

    pub fn parse(s: &str) -> Option<Dialect> {
        Dialect::ALL
            .into_iter()
            .find(|d| d.as_str().eq_ignore_ascii_case(s))
    }

    /// True for the dialects whose binary connective is the partial sum ⊻.
    pub fn is_partial(self) -> bool {
        matches!(self, Dialect::UPaql | Dialect::WPaql | Dialect::SPaql | Dialect::Lql)
    }

    /// Whether a node kind may appear in formulas of this dialect.
    pub fn admits(self, k: NodeKind) -> bool {
        use NodeKind::*;
        match self {
            Dialect::Ol | Dialect::Oql => {
                matches!(k, Lit | Not | And | Or | Arrow | Strict | Entail)
            }
            Dialect::Pql | Dialect::Rpql => matches!(k, Lit | Not | And | Or),
            Dialect::Bzl | Dialect::Bzl3 => matches!(k, Lit | Not | INot | And | Or | L | M),
            Dialect::UPaql | Dialect::WPaql | Dialect::SPaql => matches!(k, Lit | Not | Aut | AutAnd),
            Dialect::Lql => matches!(k, Lit | Not | Aut | AutAnd | Et | Vel),
            Dialect::ModalB => matches!(k, Lit | CNot | CAnd | Nec | Pos),
        }
    }
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Formula AST. The first group of variants is primitive; the second group
/// is removed by [`Formula::expand`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Lit(String),
    /// Fuzzy or ortho negation ¬.
    Not(Box<Formula>),
    /// Intuitionistic complement ∼.
    INot(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    /// Partial sum ⊻.
    Aut(Box<Formula>, Box<Formula>),
    /// Strict implication ⊸.
    Strict(Box<Formula>, Box<Formula>),
    /// Entailment ↠.
    Entail(Box<Formula>, Box<Formula>),
    /// Modal necessity □.
    Nec(Box<Formula>),
    /// Modal possibility ◇.
    Pos(Box<Formula>),
    /// Classical negation of the modal language.
    CNot(Box<Formula>),
    /// Classical conjunction of the modal language.
    CAnd(Box<Formula>, Box<Formula>),
    /// α ∨ β := ¬(¬α ∧ ¬β).
    Or(Box<Formula>, Box<Formula>),
    /// Polynomial conditional →ᵢ, i ∈ 1..=5.
    Arrow(u8, Box<Formula>, Box<Formula>),
    /// Lα := ∼¬α.
    L(Box<Formula>),
    /// Mα := ¬L¬α.
    M(Box<Formula>),
    /// α ⊼ β := ¬(¬α ⊻ ¬β).
    AutAnd(Box<Formula>, Box<Formula>),
    /// α ⩓ β := (α ⊻ ¬β) ⊼ β.
    Et(Box<Formula>, Box<Formula>),
    /// α ⩒ β := ¬(¬α ⩓ ¬β).
    Vel(Box<Formula>, Box<Formula>),
}

/// Node kinds used for dialect admissibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Lit,
    Not,
    INot,
    And,
    Aut,
    Strict,
    Entail,
    Nec,
    Pos,
    CNot,
    CAnd,
    Or,
    Arrow,
    L,
    M,
    AutAnd,
    Et,
    Vel,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        use NodeKind::*;
        match self {
            Lit => "literal",
            Not => "-",
            INot => "~",
            And => "&",
            Aut => "+",
            Strict => "-o",
            Entail => "=>>",
            Nec => "[]",
            Pos => "<>",
            CNot => "!",
            CAnd => "^",
            Or => "|",
            Arrow => "->i",
            L => "L",
            M => "M",
            AutAnd => "& (defined)",
            Et => ".&.",
            Vel => ".|.",
        }
    }
}

/// Parse and dialect errors.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("syntax error at column {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("connective `{node}` is not part of the {dialect} language")]
    Dialect { dialect: Dialect, node: &'static str },
}

fn b(f: Formula) -> Box<Formula> {
    Box::new(f)
}

/// Shorthand constructors.
impl Formula {
    pub fn lit(name: &str) -> Formula {
        Formula::Lit(name.to_string())
    }
    pub fn not(a: Formula) -> Formula {
        Formula::Not(b(a))
    }
    pub fn inot(a: Formula) -> Formula {
        Formula::INot(b(a))
    }
    pub fn and(x: Formula, y: Formula) -> Formula {
        Formula::And(b(x), b(y))
    }
    pub fn or(x: Formula, y: Formula) -> Formula {
        Formula::Or(b(x), b(y))
    }
    pub fn aut(x: Formula, y: Formula) -> Formula {
        Formula::Aut(b(x), b(y))
    }
    pub fn arrow(i: u8, x: Formula, y: Formula) -> Formula {
        Formula::Arrow(i, b(x), b(y))
    }
    pub fn nec(a: Formula) -> Formula {
        Formula::Nec(b(a))
    }
    pub fn pos(a: Formula) -> Formula {
        Formula::Pos(b(a))
    }
    pub fn cnot(a: Formula) -> Formula {
        Formula::CNot(b(a))
    }
    pub fn cand(x: Formula, y: Formula) -> Formula {
        Formula::CAnd(b(x), b(y))
    }
    pub fn l(a: Formula) -> Formula {
        Formula::L(b(a))
    }
    pub fn m(a: Formula) -> Formula {
        Formula::M(b(a))
    }
    pub fn aut_and(x: Formula, y: Formula) -> Formula {
        Formula::AutAnd(b(x), b(y))
    }
    pub fn strict(x: Formula, y: Formula) -> Formula {
        Formula::Strict(b(x), b(y))
    }
    pub fn entail(x: Formula, y: Formula) -> Formula {
        Formula::Entail(b(x), b(y))
    }
}

impl Formula {
    pub fn kind(&self) -> NodeKind {
        use Formula::*;
        match self {
            Lit(_) => NodeKind::Lit,
            Not(_) => NodeKind::Not,
            INot(_) => NodeKind::INot,
            And(..) => NodeKind::And,
            Aut(..) => NodeKind::Aut,
            Strict(..) => NodeKind::Strict,
            Entail(..) => NodeKind::Entail,
            Nec(_) => NodeKind::Nec,
            Pos(_) => NodeKind::Pos,
            CNot(_) => NodeKind::CNot,
            CAnd(..) => NodeKind::CAnd,
            Or(..) => NodeKind::Or,
            Arrow(..) => NodeKind::Arrow,
            L(_) => NodeKind::L,
            M(_) => NodeKind::M,
            AutAnd(..) => NodeKind::AutAnd,
            Et(..) => NodeKind::Et,
            Vel(..) => NodeKind::Vel,
        }
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            Lit(_) => vec![],
            Not(a) | INot(a) | Nec(a) | Pos(a) | CNot(a) | L(a) | M(a) => vec![a],
            And(x, y) | Aut(x, y) | Strict(x, y) | Entail(x, y) | CAnd(x, y) | Or(x, y)
            | Arrow(_, x, y) | AutAnd(x, y) | Et(x, y) | Vel(x, y) => vec![x, y],
        }
    }

    /// Literal names in order of first occurrence.
    pub fn literals(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_literals(&mut out);
        out
    }

    fn collect_literals(&self, out: &mut Vec<String>) {
        if let Formula::Lit(n) = self {
            if !out.contains(n) {
                out.push(n.clone());
            }
        }
        for c in self.children() {
            c.collect_literals(out);
        }
    }

    /// All distinct subformulas, including the formula itself.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_sub(&mut out);
        out
    }

    fn collect_sub(&self, out: &mut BTreeSet<Formula>) {
        if out.insert(self.clone()) {
            for c in self.children() {
                c.collect_sub(out);
            }
        }
    }

    /// Nesting depth of connectives; literals have depth 0.
    pub fn depth(&self) -> usize {
        self.children().iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Checks that every node is admissible in `dialect`.
    pub fn check_dialect(&self, dialect: Dialect) -> Result<(), FormulaError> {
        let k = self.kind();
        if !dialect.admits(k) {
            return Err(FormulaError::Dialect {
                dialect,
                node: k.as_str(),
            });
        }
        self.children()
            .into_iter()
            .try_for_each(|c| c.check_dialect(dialect))
    }

    /// True when no defined connective occurs.
    pub fn is_primitive(&self) -> bool {
        !matches!(
            self.kind(),
            NodeKind::Or | NodeKind::Arrow | NodeKind::L | NodeKind::M | NodeKind::AutAnd | NodeKind::Et | NodeKind::Vel
        ) && self.children().iter().all(|c| c.is_primitive())
    }

    /// Rewrites every defined connective into primitives.
    pub fn expand(&self) -> Formula {
        use Formula::*;
        let not = Formula::not;
        let and = Formula::and;
        let or = |x: Formula, y: Formula| not(and(not(x), not(y)));
        match self {
            Lit(_) => self.clone(),
            Not(a) => not(a.expand()),
            INot(a) => Formula::inot(a.expand()),
            Nec(a) => Formula::nec(a.expand()),
            Pos(a) => Formula::pos(a.expand()),
            CNot(a) => Formula::cnot(a.expand()),
            And(x, y) => and(x.expand(), y.expand()),
            Aut(x, y) => Formula::aut(x.expand(), y.expand()),
            Strict(x, y) => Formula::strict(x.expand(), y.expand()),
            Entail(x, y) => Formula::entail(x.expand(), y.expand()),
            CAnd(x, y) => Formula::cand(x.expand(), y.expand()),
            Or(x, y) => or(x.expand(), y.expand()),
            Arrow(i, x, y) => {
                let (a, c) = (x.expand(), y.expand());
                let na = || not(a.clone());
                let nc = || not(c.clone());
                match i {
                    1 => or(na(), and(a.clone(), c.clone())),
                    2 => or(c.clone(), and(na(), nc())),
                    3 => or(
                        or(and(na(), c.clone()), and(a.clone(), c.clone())),
                        and(na(), nc()),
                    ),
                    4 => or(
                        or(and(na(), c.clone()), and(a.clone(), c.clone())),
                        and(or(na(), c.clone()), nc()),
                    ),
                    _ => or(
                        or(and(na(), c.clone()), and(na(), nc())),
                        and(a.clone(), or(na(), c.clone())),
                    ),
                }
            }
            L(a) => Formula::inot(not(a.expand())),
            M(a) => not(Formula::inot(not(not(a.expand())))),
            AutAnd(x, y) => aut_and(x.expand(), y.expand()),
            Et(x, y) => et(x.expand(), y.expand()),
            Vel(x, y) => not(et(not(x.expand()), not(y.expand()))),
        }
    }

    /// Replaces literals simultaneously according to `map`.
    pub fn substitute(&self, map: &dyn Fn(&str) -> Option<Formula>) -> Formula {
        use Formula::*;
        let s = |f: &Formula| Box::new(f.substitute(map));
        match self {
            Lit(n) => map(n).unwrap_or_else(|| self.clone()),
            Not(a) => Not(s(a)),
            INot(a) => INot(s(a)),
            Nec(a) => Nec(s(a)),
            Pos(a) => Pos(s(a)),
            CNot(a) => CNot(s(a)),
            L(a) => L(s(a)),
            M(a) => M(s(a)),
            And(x, y) => And(s(x), s(y)),
            Aut(x, y) => Aut(s(x), s(y)),
            Strict(x, y) => Strict(s(x), s(y)),
            Entail(x, y) => Entail(s(x), s(y)),
            CAnd(x, y) => CAnd(s(x), s(y)),
            Or(x, y) => Or(s(x), s(y)),
            Arrow(i, x, y) => Arrow(*i, s(x), s(y)),
            AutAnd(x, y) => AutAnd(s(x), s(y)),
            Et(x, y) => Et(s(x), s(y)),
            Vel(x, y) => Vel(s(x), s(y)),
        }
    }
}

fn aut_and(x: Formula, y: Formula) -> Formula {
    Formula::not(Formula::aut(Formula::not(x), Formula::not(y)))
}

fn et(x: Formula, y: Formula) -> Formula {
    aut_and(Formula::aut(x, Formula::not(y.clone())), y)
}

/// Binding strength used by the printer and parser.
fn prec(f: &Formula) -> u8 {
    use Formula::*;
    match f {
        Strict(..) | Entail(..) | Arrow(..) => 0,
        Or(..) | Aut(..) | Vel(..) => 1,
        And(..) | CAnd(..) | AutAnd(..) | Et(..) => 2,
        _ => 3,
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        let wrap = |g: &Formula, need: bool| {
            if need {
                format!("({g})")
            } else {
                g.to_string()
            }
        };
        let unary = |op: &str, a: &Formula| {
            let inner = wrap(a, prec(a) < 3);
            let starts_ident = inner.starts_with(|c: char| c.is_ascii_alphanumeric());
            let needs_space = (op == "-" && inner == "o")
                || (op == "-" && inner.starts_with('o') && !inner[1..].starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_'))
                || ((op == "L" || op == "M") && starts_ident);
            if needs_space {
                format!("{op} {inner}")
            } else {
                format!("{op}{inner}")
            }
        };
        let binary = |op: &str, x: &Formula, y: &Formula, level: u8| {
            let assoc = level > 0;
            let l = wrap(x, prec(x) < level || (!assoc && prec(x) <= level));
            let r = wrap(y, prec(y) <= level);
            format!("{l} {op} {r}")
        };
        let s = match self {
            Lit(n) => n.clone(),
            Not(a) => unary("-", a),
            INot(a) => unary("~", a),
            Nec(a) => unary("[]", a),
            Pos(a) => unary("<>", a),
            CNot(a) => unary("!", a),
            L(a) => unary("L", a),
            M(a) => unary("M", a),
            And(x, y) | AutAnd(x, y) => binary("&", x, y, 2),
            CAnd(x, y) => binary("^", x, y, 2),
            Et(x, y) => binary(".&.", x, y, 2),
            Or(x, y) => binary("|", x, y, 1),
            Aut(x, y) => binary("+", x, y, 1),
            Vel(x, y) => binary(".|.", x, y, 1),
            Arrow(i, x, y) => binary(&format!("->{i}"), x, y, 0),
            Strict(x, y) => binary("-o", x, y, 0),
            Entail(x, y) => binary("=>>", x, y, 0),
        };
        f.write_str(&s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    INot,
    CNot,
    Nec,
    Pos,
    L,
    M,
    And,
    CAnd,
    Et,
    Or,
    Aut,
    Vel,
    Arrow(u8),
    Strict,
    Entail,
    LParen,
    RParen,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, FormulaError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, message: String| FormulaError::Syntax { pos: pos + 1, message };
    while i < chars.len() {
        let c = chars[i];
        let at = |k: usize| chars.get(i + k).copied();
        let start = i;
        let tok = match c {
            ' ' | '\t' | '\r' | '\n' => {
                i += 1;
                continue;
            }
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '&' => {
                i += 1;
                Tok::And
            }
            '^' => {
                i += 1;
                Tok::CAnd
            }
            '|' => {
                i += 1;
                Tok::Or
            }
            '+' => {
                i += 1;
                Tok::Aut
            }
            '~' => {
                i += 1;
                Tok::INot
            }
            '!' => {
                i += 1;
                Tok::CNot
            }
            '[' if at(1) == Some(']') => {
                i += 2;
                Tok::Nec
            }
            '<' if at(1) == Some('>') => {
                i += 2;
                Tok::Pos
            }
            '.' if at(1) == Some('&') && at(2) == Some('.') => {
                i += 3;
                Tok::Et
            }
            '.' if at(1) == Some('|') && at(2) == Some('.') => {
                i += 3;
                Tok::Vel
            }
            '=' if at(1) == Some('>') && at(2) == Some('>') => {
                i += 3;
                Tok::Entail
            }
            '-' if at(1) == Some('>') => match at(2) {
                Some(d @ '1'..='5') => {
                    i += 3;
                    Tok::Arrow(d as u8 - b'0')
                }
                _ => return Err(err(i, "`->` must be followed by a digit 1-5".into())),
            },
            '-' if at(1) == Some('o') && !at(2).is_some_and(is_ident_char) => {
                i += 2;
                Tok::Strict
            }
            '-' => {
                i += 1;
                Tok::Not
            }
            'L' if !at(1).is_some_and(|c| c.is_ascii_uppercase()) => {
                i += 1;
                Tok::L
            }
            'M' if !at(1).is_some_and(|c| c.is_ascii_uppercase()) => {
                i += 1;
                Tok::M
            }
            c if c.is_ascii_lowercase() => {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                let name: String = chars[i..j].iter().collect();
                i = j;
                Tok::Ident(name)
            }
            other => return Err(err(i, format!("unexpected character `{other}`"))),
        };
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    dialect: Dialect,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| p + 1).unwrap_or(self.end + 1)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, FormulaError> {
        Err(FormulaError::Syntax {
            pos: self.column(),
            message: message.into(),
        })
    }

    fn conditional(&mut self) -> Result<Formula, FormulaError> {
        let left = self.disjunction()?;
        let make = match self.peek() {
            Some(Tok::Arrow(i)) => {
                let i = *i;
                Box::new(move |x, y| Formula::arrow(i, x, y)) as Box<dyn Fn(Formula, Formula) -> Formula>
            }
            Some(Tok::Strict) => Box::new(Formula::strict),
            Some(Tok::Entail) => Box::new(Formula::entail),
            _ => return Ok(left),
        };
        self.pos += 1;
        let right = self.disjunction()?;
        if matches!(self.peek(), Some(Tok::Arrow(_) | Tok::Strict | Tok::Entail)) {
            return self.error("conditionals do not associate; add parentheses");
        }
        Ok(make(left, right))
    }

    fn disjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut left = self.conjunction()?;
        loop {
            let make: fn(Formula, Formula) -> Formula = match self.peek() {
                Some(Tok::Or) => Formula::or,
                Some(Tok::Aut) => Formula::aut,
                Some(Tok::Vel) => |x, y| Formula::Vel(b(x), b(y)),
                _ => return Ok(left),
            };
            self.pos += 1;
            let right = self.conjunction()?;
            left = make(left, right);
        }
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut left = self.unary()?;
        loop {
            let make: fn(Formula, Formula) -> Formula = match self.peek() {
                Some(Tok::And) if self.dialect.is_partial() => Formula::aut_and,
                Some(Tok::And) => Formula::and,
                Some(Tok::CAnd) => Formula::cand,
                Some(Tok::Et) => |x, y| Formula::Et(b(x), b(y)),
                _ => return Ok(left),
            };
            self.pos += 1;
            let right = self.unary()?;
            left = make(left, right);
        }
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        let make: fn(Formula) -> Formula = match self.peek() {
            Some(Tok::Not) => Formula::not,
            Some(Tok::INot) => Formula::inot,
            Some(Tok::CNot) => Formula::cnot,
            Some(Tok::Nec) => Formula::nec,
            Some(Tok::Pos) => Formula::pos,
            Some(Tok::L) => Formula::l,
            Some(Tok::M) => Formula::m,
            _ => return self.atom(),
        };
        self.pos += 1;
        Ok(make(self.unary()?))
    }

    fn atom(&mut self) -> Result<Formula, FormulaError> {
        match self.peek().cloned() {
            Some(Tok::Ident(n)) => {
                self.pos += 1;
                Ok(Formula::Lit(n))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.conditional()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                Ok(f)
            }
            Some(t) => self.error(format!("unexpected token {t:?}")),
            None => self.error("unexpected end of formula"),
        }
    }
}

/// Parses `text` as a formula of `dialect`.
pub fn parse(dialect: Dialect, text: &str) -> Result<Formula, FormulaError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.chars().count(),
        dialect,
    };
    let f = p.conditional()?;
    if p.pos != p.toks.len() {
        return p.error("unexpected trailing input");
    }
    f.check_dialect(dialect)?;
    Ok(f)
}

/// Every formula over `literals` built from the given unary and binary
/// constructors with nesting depth at most `depth`, deduplicated.
pub fn enumerate(
    literals: &[&str],
    unary: &[fn(Formula) -> Formula],
    binary: &[fn(Formula, Formula) -> Formula],
    depth: usize,
) -> Vec<Formula> {
    let mut layers: Vec<Vec<Formula>> = vec![literals.iter().map(|l| Formula::lit(l)).collect()];
    let mut seen: BTreeSet<Formula> = layers[0].iter().cloned().collect();
    for d in 1..=depth {
        let below: Vec<Formula> = layers.iter().flatten().cloned().collect();
        let prev = &layers[d - 1];
        let mut next = Vec::new();
        let mut push = |f: Formula, next: &mut Vec<Formula>| {
            if seen.insert(f.clone()) {
                next.push(f);
            }
        };
        for f in prev {
            for u in unary {
                push(u(f.clone()), &mut next);
            }
        }
        for x in &below {
            for y in &below {
                if x.depth() + 1 == d || y.depth() + 1 == d {
                    for g in binary {
                        push(g(x.clone(), y.clone()), &mut next);
                    }
                }
            }
        }
        layers.push(next);
    }
    layers.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(d: Dialect, s: &str) -> Formula {
        parse(d, s).unwrap()
    }

    #[test]
    fn parses_spec_samples() {
        assert_eq!(p(Dialect::Oql, "p ->1 q"), Formula::arrow(1, Formula::lit("p"), Formula::lit("q")));
        assert_eq!(p(Dialect::Bzl, "~ - p"), Formula::inot(Formula::not(Formula::lit("p"))));
        assert_eq!(p(Dialect::UPaql, "p + -p"), Formula::aut(Formula::lit("p"), Formula::not(Formula::lit("p"))));
    }

    #[test]
    fn expansions() {
        assert_eq!(p(Dialect::Bzl, "L p").expand(), p(Dialect::Bzl, "~-p"));
        assert_eq!(p(Dialect::Ol, "p | q").expand(), p(Dialect::Ol, "-(-p & -q)"));
        assert_eq!(
            p(Dialect::Oql, "p ->1 q").expand(),
            p(Dialect::Ol, "-p | p & q").expand()
        );
        assert_eq!(p(Dialect::UPaql, "p & q").expand(), p(Dialect::UPaql, "-(-p + -q)"));
        assert_eq!(p(Dialect::Lql, "p .&. q").expand(), p(Dialect::Lql, "(p + -q) & q").expand());
    }

    #[test]
    fn dialect_errors() {
        assert!(matches!(parse(Dialect::Ol, "~p"), Err(FormulaError::Dialect { .. })));
        assert!(matches!(parse(Dialect::UPaql, "p | q"), Err(FormulaError::Dialect { .. })));
        assert!(matches!(parse(Dialect::Ol, "p ->1 q ->1 r"), Err(FormulaError::Syntax { .. })));
        assert!(matches!(parse(Dialect::Ol, "p & (q"), Err(FormulaError::Syntax { .. })));
        assert!(matches!(parse(Dialect::Ol, "p ->7 q"), Err(FormulaError::Syntax { pos: 3, .. })));
    }

    #[test]
    fn strict_token_and_literal_o() {
        assert_eq!(p(Dialect::Ol, "p -o q"), Formula::strict(Formula::lit("p"), Formula::lit("q")));
        assert_eq!(p(Dialect::Ol, "- o"), Formula::not(Formula::lit("o")));
        assert_eq!(p(Dialect::Ol, "-ox"), Formula::not(Formula::lit("ox")));
        assert_eq!(Formula::not(Formula::lit("o")).to_string(), "- o");
    }

    #[test]
    fn printer_uses_minimal_parentheses() {
        let f = p(Dialect::Ol, "((p & q) | r) ->1 (-(p))");
        assert_eq!(f.to_string(), "p & q | r ->1 -p");
        let g = p(Dialect::Ol, "p & (q & r)");
        assert_eq!(g.to_string(), "p & (q & r)");
        let h = p(Dialect::Ol, "(p ->1 q) ->1 (-q ->1 -p)");
        assert_eq!(h.to_string(), "(p ->1 q) ->1 (-q ->1 -p)");
    }

    #[test]
    fn enumeration_counts() {
        let fs = enumerate(&["p", "q"], &[Formula::not], &[Formula::and], 1);
        // p, q, -p, -q, p&p, p&q, q&p, q&q
        assert_eq!(fs.len(), 8);
    }
}
