//! Algebraic semantics: valuations into finite structures, truth and
//! consequence over explicit structure lists, quasi-models, properties of the
//! polynomial conditionals, and a finite-domain first-order evaluator.
//!
//! Every "logical" notion here is relative to the structure list passed in.
//! Searches visit structures in the given order and assignments
//! lexicographically over the alphabetically sorted literals, so the first
//! witness found is deterministic.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::formula::Formula;
use crate::lattice::{bit, bits, Elem, FiniteStructure, Lattice};

/// Literal assignment of a valuation.
pub type Assignment = BTreeMap<String, Elem>;

/// Failures during evaluation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("literal `{0}` is not assigned")]
    Unassigned(String),
    #[error("meet needed by `{0}` does not exist in the structure")]
    UndefinedMeet(String),
    #[error("join needed by `{0}` does not exist in the structure")]
    UndefinedJoin(String),
    #[error("`{0}` needs an intuitionistic complement, but the structure has none")]
    NoBz(String),
    #[error("connective of `{0}` has no algebraic meaning here")]
    Unsupported(String),
}

/// Value of x →ᵢ y in a lattice.
pub fn arrow_value(l: &Lattice, i: u8, x: Elem, y: Elem) -> Elem {
    let (m, j, c) = (|a, b| l.meet(a, b), |a, b| l.join(a, b), |a| l.compl(a));
    match i {
        1 => j(c(x), m(x, y)),
        2 => j(y, m(c(x), c(y))),
        3 => j(j(m(c(x), y), m(x, y)), m(c(x), c(y))),
        4 => j(j(m(c(x), y), m(x, y)), m(j(c(x), y), c(y))),
        _ => j(j(m(c(x), y), m(c(x), c(y))), m(x, j(c(x), y))),
    }
}

/// Evaluates `f` under `v`; defined connectives are expanded first.
pub fn evaluate(s: &FiniteStructure, v: &Assignment, f: &Formula) -> Result<Elem, EvalError> {
    eval_primitive(s, v, &f.expand())
}

fn eval_primitive(s: &FiniteStructure, v: &Assignment, f: &Formula) -> Result<Elem, EvalError> {
    let ev = |g: &Formula| eval_primitive(s, v, g);
    match f {
        Formula::Lit(n) => v.get(n).copied().ok_or_else(|| EvalError::Unassigned(n.clone())),
        Formula::Not(a) => Ok(s.inv(ev(a)?)),
        Formula::INot(a) => {
            let x = ev(a)?;
            s.bz(x).ok_or_else(|| EvalError::NoBz(f.to_string()))
        }
        Formula::And(x, y) => {
            let (a, b) = (ev(x)?, ev(y)?);
            s.meet(a, b).ok_or_else(|| EvalError::UndefinedMeet(f.to_string()))
        }
        Formula::Entail(x, y) => Ok(if s.leq(ev(x)?, ev(y)?) { s.one() } else { s.zero() }),
        Formula::Strict(x, y) => {
            let (a, b) = (ev(x)?, ev(y)?);
            // Worlds of the canonical frame are the nonzero elements; i is in
            // X ▢⊸ Y iff every j accessible from i that lies below a lies below b.
            let nonzero: Vec<Elem> = s.elements().filter(|&e| e != s.zero()).collect();
            let mut m = 0;
            for &i in &nonzero {
                if nonzero
                    .iter()
                    .all(|&j| s.leq(i, s.inv(j)) || !s.leq(j, a) || s.leq(j, b))
                {
                    m |= bit(i);
                }
            }
            s.join_all(m | bit(s.zero()))
                .ok_or_else(|| EvalError::UndefinedJoin(f.to_string()))
        }
        _ => Err(EvalError::Unsupported(f.to_string())),
    }
}

/// Every assignment of `literals` into `s`, lexicographic with the first
/// literal varying slowest.
pub fn assignments<'a>(s: &FiniteStructure, literals: &'a [String]) -> impl Iterator<Item = Assignment> + 'a {
    let n = s.len();
    let k = literals.len();
    let total = n.checked_pow(k as u32).expect("assignment space too large");
    (0..total).map(move |mut code| {
        let mut vals = vec![0; k];
        for slot in vals.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        literals.iter().cloned().zip(vals).collect()
    })
}

/// Sorted distinct literals of a set of formulas.
pub fn literals_of(formulas: &[&Formula]) -> Vec<String> {
    let mut lits: Vec<String> = formulas.iter().flat_map(|f| f.literals()).collect();
    lits.sort();
    lits.dedup();
    lits
}

/// A structure and valuation witnessing a search result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub structure: String,
    pub assignment: Vec<(String, String)>,
    /// Values of the formulas involved, in the order they were given.
    pub values: Vec<(String, String)>,
}

impl Witness {
    fn new(name: &str, s: &FiniteStructure, v: &Assignment, formulas: &[&Formula]) -> Result<Self, EvalError> {
        Ok(Witness {
            structure: name.to_string(),
            assignment: v.iter().map(|(l, &e)| (l.clone(), s.name(e).to_string())).collect(),
            values: formulas
                .iter()
                .map(|f| Ok((f.to_string(), s.name(evaluate(s, v, f)?).to_string())))
                .collect::<Result<Vec<_>, EvalError>>()?,
        })
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "structure {}", self.structure)?;
        for (l, e) in &self.assignment {
            writeln!(f, "  {l} = {e}")?;
        }
        for (g, e) in &self.values {
            writeln!(f, "  v({g}) = {e}")?;
        }
        Ok(())
    }
}

/// Finds the first structure and assignment for which `test` holds.
fn search(
    structures: &[(String, FiniteStructure)],
    formulas: &[&Formula],
    test: &mut dyn FnMut(&FiniteStructure, &[Elem]) -> bool,
) -> Result<Option<Witness>, EvalError> {
    let lits = literals_of(formulas);
    for (name, s) in structures {
        for v in assignments(s, &lits) {
            let vals = formulas
                .iter()
                .map(|f| evaluate(s, &v, f))
                .collect::<Result<Vec<_>, _>>()?;
            if test(s, &vals) {
                return Ok(Some(Witness::new(name, s, &v, formulas)?));
            }
        }
    }
    Ok(None)
}

/// ⊨ α over the list: `None` when v(α) = 1 everywhere, else the first
/// countermodel.
pub fn logical_truth(structures: &[(String, FiniteStructure)], f: &Formula) -> Result<Option<Witness>, EvalError> {
    search(structures, &[f], &mut |s, v| v[0] != s.one())
}

fn below_all(s: &FiniteStructure, vals: &[Elem]) -> u64 {
    vals.iter().fold(s.full(), |m, &x| m & s.down(x))
}

/// T ⊨ α over the list: every common lower bound of the premise values lies
/// below the conclusion value.
pub fn consequence(
    structures: &[(String, FiniteStructure)],
    premises: &[Formula],
    conclusion: &Formula,
) -> Result<Option<Witness>, EvalError> {
    let mut fs: Vec<&Formula> = premises.iter().collect();
    fs.push(conclusion);
    let k = premises.len();
    search(structures, &fs, &mut |s, v| {
        let lower = below_all(s, &v[..k]);
        lower & !s.down(v[k]) != 0
    })
}

/// Some nonzero element lies below every v(β), β ∈ T.
pub fn is_quasi_model(s: &FiniteStructure, v: &Assignment, theory: &[Formula]) -> Result<bool, EvalError> {
    let vals = theory.iter().map(|f| evaluate(s, v, f)).collect::<Result<Vec<_>, _>>()?;
    Ok(below_all(s, &vals) & !bit(s.zero()) != 0)
}

/// v(β) = 1 for every β ∈ T.
pub fn is_model(s: &FiniteStructure, v: &Assignment, theory: &[Formula]) -> Result<bool, EvalError> {
    for f in theory {
        if evaluate(s, v, f)? != s.one() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn quasi(s: &FiniteStructure, vals: &[Elem]) -> bool {
    below_all(s, vals) & !bit(s.zero()) != 0
}

fn model(s: &FiniteStructure, vals: &[Elem]) -> bool {
    vals.iter().all(|&x| x == s.one())
}

/// A quasi-model of T in the list, if any.
pub fn realizable(structures: &[(String, FiniteStructure)], theory: &[Formula]) -> Result<Option<Witness>, EvalError> {
    let fs: Vec<&Formula> = theory.iter().collect();
    search(structures, &fs, &mut |s, v| quasi(s, v))
}

/// A model of T in the list, if any.
pub fn verifiable(structures: &[(String, FiniteStructure)], theory: &[Formula]) -> Result<Option<Witness>, EvalError> {
    let fs: Vec<&Formula> = theory.iter().collect();
    search(structures, &fs, &mut |s, v| model(s, v))
}

/// T |≡ α: `None` when every model of T is a model of α, else a model of T
/// that is not a model of α.
pub fn weak_consequence(
    structures: &[(String, FiniteStructure)],
    theory: &[Formula],
    conclusion: &Formula,
) -> Result<Option<Witness>, EvalError> {
    let mut fs: Vec<&Formula> = theory.iter().collect();
    fs.push(conclusion);
    let k = theory.len();
    search(structures, &fs, &mut |s, v| model(s, &v[..k]) && v[k] != s.one())
}

/// T |≈ α: `None` when every quasi-model of T is a quasi-model of α.
pub fn quasi_consequence(
    structures: &[(String, FiniteStructure)],
    theory: &[Formula],
    conclusion: &Formula,
) -> Result<Option<Witness>, EvalError> {
    let mut fs: Vec<&Formula> = theory.iter().collect();
    fs.push(conclusion);
    let k = theory.len();
    search(structures, &fs, &mut |s, v| quasi(s, &v[..k]) && !quasi(s, &v[k..]))
}

/// First pair with a ⊑ b not equivalent to a →ᵢ b = 1.
pub fn good_conditional_failure(l: &Lattice, i: u8) -> Option<(Elem, Elem)> {
    let s = l.structure();
    s.elements()
        .flat_map(|a| s.elements().map(move |b| (a, b)))
        .find(|&(a, b)| l.leq(a, b) != (arrow_value(l, i, a, b) == l.one()))
}

/// First triple (a, b, c) with c compatible with a where c ⊓ a ⊑ b and
/// c ⊑ a →ᵢ b disagree.
pub fn import_export_failure(l: &Lattice, i: u8) -> Option<(Elem, Elem, Elem)> {
    let s = l.structure();
    for a in s.elements() {
        for c in s.elements() {
            if !l.compatible(c, a) {
                continue;
            }
            for b in s.elements() {
                if l.leq(l.meet(c, a), b) != l.leq(c, arrow_value(l, i, a, b)) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// Terms of the first-order language: variables and individual constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FoTerm {
    Name(String),
}

/// First-order formulas with ¬, ∧, ∨, ∀, ∃, predicates and identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FoFormula {
    Pred(String, Vec<FoTerm>),
    Eq(FoTerm, FoTerm),
    Not(Box<FoFormula>),
    And(Box<FoFormula>, Box<FoFormula>),
    Or(Box<FoFormula>, Box<FoFormula>),
    Forall(String, Box<FoFormula>),
    Exists(String, Box<FoFormula>),
}

impl fmt::Display for FoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |t: &FoTerm| match t {
            FoTerm::Name(n) => n.clone(),
        };
        match self {
            FoFormula::Pred(p, args) => {
                write!(f, "{p}({})", args.iter().map(term).collect::<Vec<_>>().join(", "))
            }
            FoFormula::Eq(x, y) => write!(f, "{} = {}", term(x), term(y)),
            FoFormula::Not(a) => write!(f, "-({a})"),
            FoFormula::And(x, y) => write!(f, "({x} & {y})"),
            FoFormula::Or(x, y) => write!(f, "({x} | {y})"),
            FoFormula::Forall(x, a) => write!(f, "forall {x} ({a})"),
            FoFormula::Exists(x, a) => write!(f, "exists {x} ({a})"),
        }
    }
}

/// Errors of the first-order evaluator and its parsers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FoError {
    #[error("syntax error at column {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("line {line}: {message}")]
    Model { line: usize, message: String },
    #[error("name `{0}` is neither a bound variable nor a constant")]
    UnboundName(String),
    #[error("predicate `{0}` has no value for ({1})")]
    MissingValue(String, String),
    #[error("meet or join undefined while evaluating `{0}`")]
    Undefined(String),
}

/// A finite first-order model over a finite lattice: the family of subsets
/// admitted for infima is the full powerset, so every quantifier is defined.
#[derive(Debug, Clone)]
pub struct FirstOrderModel {
    pub structure: FiniteStructure,
    pub domain: Vec<String>,
    pub constants: HashMap<String, usize>,
    pub predicates: HashMap<String, HashMap<Vec<usize>, Elem>>,
}

impl FirstOrderModel {
    pub fn new(structure: FiniteStructure, domain: Vec<String>) -> Self {
        FirstOrderModel {
            structure,
            domain,
            constants: HashMap::new(),
            predicates: HashMap::new(),
        }
    }

    fn individual(&self, name: &str) -> Option<usize> {
        self.domain.iter().position(|d| d == name)
    }

    /// Sets P(d₁, …, dₙ) = value, by names.
    pub fn set(&mut self, pred: &str, args: &[&str], value: &str) -> Result<(), FoError> {
        let ids = args
            .iter()
            .map(|a| self.individual(a).ok_or_else(|| FoError::UnboundName(a.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let v = self
            .structure
            .id(value)
            .ok_or_else(|| FoError::UnboundName(value.to_string()))?;
        self.predicates.entry(pred.to_string()).or_default().insert(ids, v);
        Ok(())
    }

    /// Parses a model description; `structure:` names the lattice, which
    /// `load` resolves.
    ///
    /// ```text
    /// structure: MO2
    /// domain: d1 d2
    /// const: c = d1
    /// pred: P d1 = a
    /// ```
    pub fn parse(text: &str, load: &dyn Fn(&str) -> Result<FiniteStructure, String>) -> Result<Self, FoError> {
        let mut model: Option<FirstOrderModel> = None;
        let mut structure: Option<FiniteStructure> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| FoError::Model { line, message };
            let (key, rest) = content
                .split_once(':')
                .ok_or_else(|| err(format!("expected `key: value`, found `{content}`")))?;
            let rest = rest.trim();
            match key.trim() {
                "structure" => structure = Some(load(rest).map_err(err)?),
                "domain" => {
                    let s = structure.take().ok_or_else(|| err("`structure` must precede `domain`".into()))?;
                    model = Some(FirstOrderModel::new(s, rest.split_whitespace().map(str::to_string).collect()));
                }
                "const" | "pred" => {
                    let m = model.as_mut().ok_or_else(|| err("`domain` must come first".into()))?;
                    let (lhs, rhs) = rest.split_once('=').ok_or_else(|| err("expected `=`".into()))?;
                    let toks: Vec<&str> = lhs.split_whitespace().collect();
                    let rhs = rhs.trim();
                    if key.trim() == "const" {
                        let [c] = toks[..] else {
                            return Err(err("`const` expects one name".into()));
                        };
                        let d = m.individual(rhs).ok_or_else(|| err(format!("unknown individual `{rhs}`")))?;
                        m.constants.insert(c.to_string(), d);
                    } else {
                        let (p, args) = toks.split_first().ok_or_else(|| err("missing predicate name".into()))?;
                        m.set(p, args, rhs).map_err(|e| err(e.to_string()))?;
                    }
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        model.ok_or(FoError::Model {
            line: 0,
            message: "missing `domain`".into(),
        })
    }

    /// v^σ(f) with σ given as variable → individual index.
    pub fn evaluate(&self, sigma: &HashMap<String, usize>, f: &FoFormula) -> Result<Elem, FoError> {
        let s = &self.structure;
        let term = |t: &FoTerm| match t {
            FoTerm::Name(n) => sigma
                .get(n)
                .or_else(|| self.constants.get(n))
                .copied()
                .ok_or_else(|| FoError::UnboundName(n.clone())),
        };
        let undefined = || FoError::Undefined(f.to_string());
        match f {
            FoFormula::Pred(p, args) => {
                let ids = args.iter().map(term).collect::<Result<Vec<_>, _>>()?;
                self.predicates
                    .get(p)
                    .and_then(|t| t.get(&ids))
                    .copied()
                    .ok_or_else(|| {
                        FoError::MissingValue(
                            p.clone(),
                            ids.iter().map(|&d| self.domain[d].clone()).collect::<Vec<_>>().join(", "),
                        )
                    })
            }
            FoFormula::Eq(x, y) => Ok(if term(x)? == term(y)? { s.one() } else { s.zero() }),
            FoFormula::Not(a) => Ok(s.inv(self.evaluate(sigma, a)?)),
            FoFormula::And(x, y) => s
                .meet(self.evaluate(sigma, x)?, self.evaluate(sigma, y)?)
                .ok_or_else(undefined),
            FoFormula::Or(x, y) => s
                .join(self.evaluate(sigma, x)?, self.evaluate(sigma, y)?)
                .ok_or_else(undefined),
            FoFormula::Forall(x, body) => {
                let mut m = 0;
                let mut sig = sigma.clone();
                for d in 0..self.domain.len() {
                    sig.insert(x.clone(), d);
                    m |= bit(self.evaluate(&sig, body)?);
                }
                s.meet_all(m).ok_or_else(undefined)
            }
            FoFormula::Exists(x, body) => {
                let inner = FoFormula::Forall(x.clone(), Box::new(FoFormula::Not(body.clone())));
                Ok(s.inv(self.evaluate(sigma, &inner)?))
            }
        }
    }

    /// Values of a formula under every interpretation of its free variables
    /// `vars`.
    pub fn values_over(&self, vars: &[&str], f: &FoFormula) -> Result<Vec<Elem>, FoError> {
        let n = self.domain.len();
        let mut out = Vec::new();
        let total = n.pow(vars.len() as u32);
        for mut code in 0..total {
            let mut sigma = HashMap::new();
            for v in vars {
                sigma.insert(v.to_string(), code % n);
                code /= n;
            }
            out.push(self.evaluate(&sigma, f)?);
        }
        Ok(out)
    }
}

/// Parses first-order formulas: `forall x A`, `exists x A`, `-A`, `A & B`,
/// `A | B`, `P(t, …)`, `t = u`, parentheses. Predicates start with an
/// uppercase letter; terms are lowercase identifiers.
pub fn parse_fo(text: &str) -> Result<FoFormula, FoError> {
    let chars: Vec<char> = text.chars().collect();
    let mut p = FoParser { chars, pos: 0 };
    let f = p.disj()?;
    p.ws();
    if p.pos != p.chars.len() {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}

struct FoParser {
    chars: Vec<char>,
    pos: usize,
}

impl FoParser {
    fn ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn err<T>(&self, m: &str) -> Result<T, FoError> {
        Err(FoError::Syntax {
            pos: self.pos + 1,
            message: m.to_string(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        self.ws();
        if self.chars.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
        {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn disj(&mut self) -> Result<FoFormula, FoError> {
        let mut l = self.conj()?;
        while self.eat('|') {
            let r = self.conj()?;
            l = FoFormula::Or(Box::new(l), Box::new(r));
        }
        Ok(l)
    }

    fn conj(&mut self) -> Result<FoFormula, FoError> {
        let mut l = self.unary()?;
        while self.eat('&') {
            let r = self.unary()?;
            l = FoFormula::And(Box::new(l), Box::new(r));
        }
        Ok(l)
    }

    fn unary(&mut self) -> Result<FoFormula, FoError> {
        if self.eat('-') {
            return Ok(FoFormula::Not(Box::new(self.unary()?)));
        }
        if self.eat('(') {
            let f = self.disj()?;
            if !self.eat(')') {
                return self.err("expected `)`");
            }
            return Ok(f);
        }
        let save = self.pos;
        let Some(id) = self.ident() else {
            return self.err("expected a formula");
        };
        match id.as_str() {
            "forall" | "exists" => {
                let Some(x) = self.ident() else {
                    return self.err("expected a variable");
                };
                let body = Box::new(self.unary()?);
                Ok(if id == "forall" {
                    FoFormula::Forall(x, body)
                } else {
                    FoFormula::Exists(x, body)
                })
            }
            _ if id.starts_with(|c: char| c.is_ascii_uppercase()) => {
                if !self.eat('(') {
                    return self.err("expected `(` after predicate");
                }
                let mut args = Vec::new();
                if !self.eat(')') {
                    loop {
                        let Some(t) = self.ident() else {
                            return self.err("expected a term");
                        };
                        args.push(FoTerm::Name(t));
                        if self.eat(')') {
                            break;
                        }
                        if !self.eat(',') {
                            return self.err("expected `,` or `)`");
                        }
                    }
                }
                Ok(FoFormula::Pred(id, args))
            }
            _ => {
                if !self.eat('=') {
                    self.pos = save;
                    return self.err("expected `=` after term");
                }
                let Some(u) = self.ident() else {
                    return self.err("expected a term");
                };
                Ok(FoFormula::Eq(FoTerm::Name(id), FoTerm::Name(u)))
            }
        }
    }
}

/// Lower bound set of a family, for callers that work with masks.
pub fn common_lower_bounds(s: &FiniteStructure, vals: &[Elem]) -> Vec<Elem> {
    bits(below_all(s, vals)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::formula::{parse, Dialect};

    fn named(names: &[&str]) -> Vec<(String, FiniteStructure)> {
        names
            .iter()
            .map(|n| (n.to_string(), catalog::structure(n).unwrap()))
            .collect()
    }

    fn asg(s: &FiniteStructure, pairs: &[(&str, &str)]) -> Assignment {
        pairs.iter().map(|(l, e)| (l.to_string(), s.id(e).unwrap())).collect()
    }

    #[test]
    fn mo2_samples() {
        let s = catalog::structure("MO2").unwrap();
        let v = asg(&s, &[("p", "a"), ("q", "b")]);
        let f = parse(Dialect::Ol, "-(p & -p)").unwrap();
        assert_eq!(evaluate(&s, &v, &f).unwrap(), s.one());
        let g = parse(Dialect::Oql, "-(p ->1 (q ->1 p))").unwrap();
        assert_eq!(s.name(evaluate(&s, &v, &g).unwrap()), "a");
    }

    #[test]
    fn k5_excluded_middles() {
        let s = catalog::structure("K5").unwrap();
        let v = asg(&s, &[("p", "1/4")]);
        let weak = parse(Dialect::Bzl, "p | ~p").unwrap();
        let strong = parse(Dialect::Bzl, "p | -p").unwrap();
        assert_eq!(s.name(evaluate(&s, &v, &weak).unwrap()), "1/4");
        assert_eq!(s.name(evaluate(&s, &v, &strong).unwrap()), "3/4");
    }

    #[test]
    fn poset_meet_is_an_error() {
        let s = catalog::structure("P9").unwrap();
        let v = asg(&s, &[("p", "E"), ("q", "F")]);
        let f = parse(Dialect::Ol, "p & q").unwrap();
        assert!(matches!(evaluate(&s, &v, &f), Err(EvalError::UndefinedMeet(_))));
    }

    #[test]
    fn unassigned_literal() {
        let s = catalog::structure("MO2").unwrap();
        let f = parse(Dialect::Ol, "p").unwrap();
        assert_eq!(evaluate(&s, &Assignment::new(), &f), Err(EvalError::Unassigned("p".into())));
    }

    #[test]
    fn truth_and_consequence() {
        let omls = named(&["BOOL(2)", "MO2", "BOOL(3)", "G12"]);
        let id = parse(Dialect::Oql, "p ->1 p").unwrap();
        assert_eq!(logical_truth(&omls, &id).unwrap(), None);
        let contra = parse(Dialect::Oql, "(p ->1 q) ->1 (-q ->1 -p)").unwrap();
        assert!(logical_truth(&omls, &contra).unwrap().is_some());
        let p = parse(Dialect::Ol, "p").unwrap();
        assert_eq!(consequence(&omls, std::slice::from_ref(&p), &p).unwrap(), None);
        let dist_l = parse(Dialect::Ol, "p & (q | r)").unwrap();
        let dist_r = parse(Dialect::Ol, "p & q | p & r").unwrap();
        let w = consequence(&named(&["MO2"]), std::slice::from_ref(&dist_l), &dist_r).unwrap().unwrap();
        assert_eq!(w.structure, "MO2");
        assert_eq!(weak_consequence(&omls, &[dist_l], &dist_r).unwrap(), None);
    }

    #[test]
    fn quasi_notions() {
        let mo2 = named(&["MO2"]);
        let gamma = parse(Dialect::Oql, "-(p ->1 (q ->1 p))").unwrap();
        assert!(realizable(&mo2, std::slice::from_ref(&gamma)).unwrap().is_some());
        let ols = catalog::structures_of_class(crate::lattice::StructureClass::Ortholattice);
        assert!(verifiable(&ols, &[gamma]).unwrap().is_none());
        let contradiction = parse(Dialect::Ol, "q & -q").unwrap();
        assert!(realizable(&ols, &[contradiction]).unwrap().is_none());
    }

    #[test]
    fn conditionals_on_orthomodular_lattices() {
        for (name, s) in named(&["BOOL(2)", "MO2", "G12"]) {
            let l = s.as_lattice().unwrap();
            for i in 1..=5 {
                assert_eq!(good_conditional_failure(&l, i), None, "{name} ->{i}");
            }
            assert_eq!(import_export_failure(&l, 1), None, "{name}");
        }
        let o6 = catalog::structure("O6").unwrap();
        let l = o6.as_lattice().unwrap();
        for i in 1..=5 {
            assert!(good_conditional_failure(&l, i).is_some(), "O6 ->{i}");
        }
    }

    #[test]
    fn description_counterexample_in_mo2() {
        let mut m = FirstOrderModel::new(catalog::structure("MO2").unwrap(), vec!["d1".into(), "d2".into()]);
        m.set("P", &["d1"], "a").unwrap();
        m.set("P", &["d2"], "a'").unwrap();
        let f = parse_fo("exists x (P(x) & forall y ((P(y) & x = y) | (-P(y) & -(x = y))))").unwrap();
        assert_eq!(m.evaluate(&HashMap::new(), &f).unwrap(), m.structure.one());
        let px = parse_fo("P(x)").unwrap();
        for v in m.values_over(&["x"], &px).unwrap() {
            assert_ne!(v, m.structure.one());
        }
    }

    #[test]
    fn first_order_basics() {
        let s = catalog::structure("MO2").unwrap();
        let mut m = FirstOrderModel::new(s.clone(), vec!["d".into()]);
        m.set("P", &["d"], "1").unwrap();
        let all = parse_fo("forall x P(x)").unwrap();
        assert_eq!(m.evaluate(&HashMap::new(), &all).unwrap(), s.one());
        let mut m = FirstOrderModel::new(s.clone(), vec!["d1".into(), "d2".into(), "d3".into()]);
        for d in ["d1", "d2", "d3"] {
            m.set("P", &[d], "b").unwrap();
        }
        assert_eq!(s.name(m.evaluate(&HashMap::new(), &all).unwrap()), "b");
        assert!(matches!(parse_fo("forall x"), Err(FoError::Syntax { .. })));
        assert!(matches!(
            m.evaluate(&HashMap::new(), &parse_fo("Q(c)").unwrap()),
            Err(FoError::UnboundName(_))
        ));
    }

    #[test]
    fn model_file() {
        let text = "structure: MO2\ndomain: d1 d2\nconst: c = d2\npred: P d1 = a\npred: P d2 = a'\n";
        let m = FirstOrderModel::parse(text, &|n| catalog::structure(n).map_err(|e| e.to_string())).unwrap();
        let f = parse_fo("P(c)").unwrap();
        assert_eq!(m.structure.name(m.evaluate(&HashMap::new(), &f).unwrap()), "a'");
        let bad = FirstOrderModel::parse("domain: d\n", &|_| Err("x".into()));
        assert!(matches!(bad, Err(FoError::Model { line: 1, .. })));
    }
}
