//! Natural-deduction calculi of the workbench dialects.
//!
//! Derivation files are checked rule by rule. Derived rules expand to
//! primitive steps, a bounded backward search proposes derivations, and a
//! harness evaluates every accepted step in the matching finite structures.
//!
//! Configurations are checked after expanding defined connectives, with
//! premise sets compared as sets.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::algebraic;
use crate::catalog;
use crate::effect::{paql_consequence, PartialClass, PartialTable, ValuationMode};
use crate::formula::{parse, Dialect, Formula, FormulaError};
use crate::lattice::{FiniteStructure, StructureClass};
use crate::orthopair::{orthoframe_from_code, PairSpace};

/// The nine calculi.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Calculus {
    Ol,
    Oql,
    Pql,
    Rpql,
    Bzl,
    Bzl3,
    UPaql,
    WPaql,
    SPaql,
}

const OL_RULES: [&str; 11] = [
    "OL1", "OL2", "OL3", "OL4", "OL5", "OL6", "OL7", "OL8", "OL9", "OL10", "OL11",
];
const BZ_RULES: [&str; 6] = ["BZ1", "BZ2", "BZ3", "BZ4", "BZ5", "BZ6"];
const UPA_RULES: [&str; 13] = [
    "UPa1", "UPa2", "UPa3", "UPa4", "UPa5", "UPa6", "UPa7", "UPa8", "UPa9", "UPa10", "UPa11", "UPa12", "UPa13",
];

/// Derived rules with a primitive expansion, per calculus family.
const PAQL_MACROS: [&str; 2] = ["D1", "D2"];
const BZL3_MACROS: [&str; 2] = ["DR1", "DR2"];
/// Derived rules that are named but have no primitive expansion.
const UNAVAILABLE_MACROS: [&str; 4] = ["D3", "D4", "D5", "DR3"];

impl Calculus {
    pub const ALL: [Calculus; 9] = [
        Calculus::Ol,
        Calculus::Oql,
        Calculus::Pql,
        Calculus::Rpql,
        Calculus::Bzl,
        Calculus::Bzl3,
        Calculus::UPaql,
        Calculus::WPaql,
        Calculus::SPaql,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Calculus::Ol => "OL",
            Calculus::Oql => "OQL",
            Calculus::Pql => "PQL",
            Calculus::Rpql => "RPQL",
            Calculus::Bzl => "BZL",
            Calculus::Bzl3 => "BZL3",
            Calculus::UPaql => "UPaQL",
            Calculus::WPaql => "WPaQL",
            Calculus::SPaql => "SPaQL",
        }
    }

    pub fn parse(s: &str) -> Option<Calculus> {
        Calculus::ALL.into_iter().find(|c| c.as_str().eq_ignore_ascii_case(s))
    }

    pub fn dialect(self) -> Dialect {
        match self {
            Calculus::Ol => Dialect::Ol,
            Calculus::Oql => Dialect::Oql,
            Calculus::Pql => Dialect::Pql,
            Calculus::Rpql => Dialect::Rpql,
            Calculus::Bzl => Dialect::Bzl,
            Calculus::Bzl3 => Dialect::Bzl3,
            Calculus::UPaql => Dialect::UPaql,
            Calculus::WPaql => Dialect::WPaql,
            Calculus::SPaql => Dialect::SPaql,
        }
    }

    /// Configurations have exactly one premise.
    pub fn single_formula(self) -> bool {
        matches!(self, Calculus::UPaql | Calculus::WPaql | Calculus::SPaql)
    }

    /// Primitive rules, in lexicographic order.
    pub fn rules(self) -> Vec<&'static str> {
        let mut out: Vec<&'static str> = Vec::new();
        let ol_no_absurd = || OL_RULES.iter().copied().filter(|r| *r != "OL7" && *r != "OL10");
        match self {
            Calculus::Ol => out.extend(OL_RULES),
            Calculus::Oql => {
                out.extend(OL_RULES);
                out.push("OQL");
            }
            Calculus::Pql => out.extend(ol_no_absurd()),
            Calculus::Rpql => {
                out.extend(ol_no_absurd());
                out.push("KLEENE");
            }
            Calculus::Bzl | Calculus::Bzl3 => {
                out.extend(ol_no_absurd());
                out.push("KLEENE");
                out.extend(BZ_RULES);
                if self == Calculus::Bzl3 {
                    out.extend(["BZ3-1", "BZ3-2"]);
                }
            }
            Calculus::UPaql | Calculus::WPaql | Calculus::SPaql => {
                out.extend(UPA_RULES);
                if self != Calculus::UPaql {
                    out.push("WPa");
                }
                if self == Calculus::SPaql {
                    out.push("SPa");
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Derived rules with an expansion in this calculus.
    pub fn macros(self) -> &'static [&'static str] {
        match self {
            Calculus::UPaql | Calculus::WPaql | Calculus::SPaql => &PAQL_MACROS,
            Calculus::Bzl3 => &BZL3_MACROS,
            _ => &[],
        }
    }
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A configuration T ⊢ α.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Config {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

/// A configuration with expanded formulas and a premise set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Canon {
    premises: BTreeSet<Formula>,
    conclusion: Formula,
}

impl Canon {
    fn single(&self) -> Option<&Formula> {
        if self.premises.len() == 1 {
            self.premises.iter().next()
        } else {
            None
        }
    }

    fn to_config(&self) -> Config {
        Config {
            premises: self.premises.iter().cloned().collect(),
            conclusion: self.conclusion.clone(),
        }
    }
}

impl Config {
    pub fn new(premises: Vec<Formula>, conclusion: Formula) -> Self {
        Config { premises, conclusion }
    }

    fn canon(&self) -> Canon {
        Canon {
            premises: self.premises.iter().map(Formula::expand).collect(),
            conclusion: self.conclusion.expand(),
        }
    }

    /// Same configuration up to expansion and premise order.
    pub fn equivalent(&self, other: &Config) -> bool {
        self.canon() == other.canon()
    }

    /// Parses `[f1; f2] |- g`.
    pub fn parse(dialect: Dialect, text: &str) -> Result<Config, String> {
        let text = text.trim();
        let rest = text.strip_prefix('[').ok_or("configuration must start with `[`")?;
        let close = rest.find(']').ok_or("missing `]`")?;
        let (inside, after) = (&rest[..close], rest[close + 1..].trim_start());
        let goal = after.strip_prefix("|-").ok_or("missing `|-`")?;
        let premises = inside
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| parse(dialect, s).map_err(|e| format_formula_error(s, &e)))
            .collect::<Result<Vec<_>, _>>()?;
        let conclusion = parse(dialect, goal.trim()).map_err(|e| format_formula_error(goal.trim(), &e))?;
        Ok(Config { premises, conclusion })
    }
}

fn format_formula_error(text: &str, e: &FormulaError) -> String {
    format!("`{text}`: {e}")
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.premises.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}] |- {}", ps.join("; "), self.conclusion)
    }
}

/// One line of a derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub config: Config,
    pub rule: String,
    /// 1-based numbers of earlier steps.
    pub premises: Vec<usize>,
}

/// A derivation in one calculus, with an optional goal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub calculus: Calculus,
    pub goal: Option<Config>,
    pub steps: Vec<Step>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProofError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("derivation names no calculus")]
    NoCalculus,
}

/// Why a derivation is not accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    /// 1-based step number, or `None` for whole-derivation problems.
    pub step: Option<usize>,
    pub reason: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(n) => write!(f, "step {n}: {}", self.reason),
            None => f.write_str(&self.reason),
        }
    }
}

fn reject(step: usize, reason: impl Into<String>) -> Rejection {
    Rejection {
        step: Some(step),
        reason: reason.into(),
    }
}

impl Derivation {
    /// Parses a derivation file:
    ///
    /// ```text
    /// calculus: OL
    /// goal: [a & b] |- b & a
    /// 1: [a & b] |- b BY OL4
    /// 2: [a & b] |- a BY OL3
    /// 3: [a & b] |- b & a BY OL5(prem=1,2)
    /// ```
    pub fn parse(text: &str, default: Option<Calculus>) -> Result<Derivation, ProofError> {
        let mut calculus = default;
        let mut goal_text: Option<(usize, String)> = None;
        let mut raw_steps: Vec<(usize, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| ProofError::Parse { line, message };
            if let Some(rest) = content.strip_prefix("calculus:") {
                calculus = Some(Calculus::parse(rest.trim()).ok_or_else(|| err(format!("unknown calculus `{}`", rest.trim())))?);
            } else if let Some(rest) = content.strip_prefix("goal:") {
                goal_text = Some((line, rest.trim().to_string()));
            } else {
                raw_steps.push((line, content.to_string()));
            }
        }
        let calculus = calculus.ok_or(ProofError::NoCalculus)?;
        let dialect = calculus.dialect();
        let goal = match goal_text {
            Some((line, t)) => Some(Config::parse(dialect, &t).map_err(|message| ProofError::Parse { line, message })?),
            None => None,
        };
        let mut steps = Vec::new();
        for (line, content) in raw_steps {
            let err = |message: String| ProofError::Parse { line, message };
            let (num, rest) = content.split_once(':').ok_or_else(|| err("expected `n: [..] |- .. BY RULE`".into()))?;
            let n: usize = num.trim().parse().map_err(|_| err(format!("bad step number `{}`", num.trim())))?;
            if n != steps.len() + 1 {
                return Err(err(format!("step {n} is out of sequence")));
            }
            let (conf, by) = rest.rsplit_once(" BY ").ok_or_else(|| err("missing ` BY `".into()))?;
            let config = Config::parse(dialect, conf).map_err(err)?;
            let by = by.trim();
            let (rule, premises) = match by.split_once('(') {
                None => (by.to_string(), Vec::new()),
                Some((r, args)) => {
                    let args = args.strip_suffix(')').ok_or_else(|| err("missing `)`".into()))?;
                    let list = args.trim().strip_prefix("prem=").ok_or_else(|| err("expected `prem=`".into()))?;
                    let ps = list
                        .split(',')
                        .map(|s| s.trim().parse::<usize>().map_err(|_| err(format!("bad premise index `{}`", s.trim()))))
                        .collect::<Result<Vec<_>, _>>()?;
                    (r.trim().to_string(), ps)
                }
            };
            steps.push(Step { config, rule, premises });
        }
        Ok(Derivation { calculus, goal, steps })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("calculus: {}\n", self.calculus);
        if let Some(g) = &self.goal {
            out.push_str(&format!("goal: {g}\n"));
        }
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!("{}: {} BY {}", i + 1, s.config, s.rule));
            if !s.premises.is_empty() {
                let ps: Vec<String> = s.premises.iter().map(|p| p.to_string()).collect();
                out.push_str(&format!("(prem={})", ps.join(",")));
            }
            out.push('\n');
        }
        out
    }

    /// The configuration established by the last step.
    pub fn conclusion(&self) -> Option<&Config> {
        self.steps.last().map(|s| &s.config)
    }
}

// Expanded-form constructors and destructors.

fn not(x: Formula) -> Formula {
    Formula::not(x)
}

fn and(x: Formula, y: Formula) -> Formula {
    Formula::and(x, y)
}

fn or(x: Formula, y: Formula) -> Formula {
    not(and(not(x), not(y)))
}

fn aut(x: Formula, y: Formula) -> Formula {
    Formula::aut(x, y)
}

fn nec(x: Formula) -> Formula {
    Formula::inot(not(x))
}

fn poss(x: Formula) -> Formula {
    not(nec(not(x)))
}

fn un_not(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Not(a) => Some(a),
        _ => None,
    }
}

fn un_and(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::And(x, y) => Some((x, y)),
        _ => None,
    }
}

fn un_aut(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Aut(x, y) => Some((x, y)),
        _ => None,
    }
}

fn un_nec(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::INot(a) => un_not(a),
        _ => None,
    }
}

fn un_or(f: &Formula) -> Option<(&Formula, &Formula)> {
    let (x, y) = un_and(un_not(f)?)?;
    Some((un_not(x)?, un_not(y)?))
}

fn set(fs: impl IntoIterator<Item = Formula>) -> BTreeSet<Formula> {
    fs.into_iter().collect()
}

fn expect(ok: bool, why: &str) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why.to_string())
    }
}

fn arity(rule: &str) -> usize {
    match rule {
        "OL2" | "OL5" | "OL7" | "BZ3-2" | "UPa2" | "UPa7" | "UPa10" | "UPa11" | "UPa12" | "UPa13" => 2,
        "OL6" | "OL11" | "BZ4" | "UPa5" | "UPa9" | "WPa" => 1,
        "SPa" => 3,
        "UPa8" => 5,
        "D2" => 1,
        "DR1" => 2,
        _ => 0,
    }
}

/// Checks one primitive rule instance.
fn primitive_matches(rule: &str, c: &Canon, p: &[&Canon]) -> Result<(), String> {
    let t = &c.premises;
    let g = &c.conclusion;
    let single = |k: &Canon| k.single().cloned().ok_or_else(|| "expected a single premise".to_string());
    match rule {
        "OL1" => expect(t.contains(g), "conclusion is not a premise"),
        "OL2" => {
            let (p1, p2) = (p[0], p[1]);
            let alpha = &p1.conclusion;
            expect(p2.conclusion == *g, "conclusion differs from the second premise's")?;
            expect(p2.premises.contains(alpha), "cut formula missing from the second premise set")?;
            let mut rest = p2.premises.clone();
            rest.remove(alpha);
            let a: BTreeSet<Formula> = p1.premises.union(&rest).cloned().collect();
            let b: BTreeSet<Formula> = p1.premises.union(&p2.premises).cloned().collect();
            expect(*t == a || *t == b, "premise set is not T ∪ T*")
        }
        "OL3" => expect(t.iter().any(|f| un_and(f).is_some_and(|(x, _)| x == g)), "no premise α ∧ β with α the conclusion"),
        "OL4" => expect(t.iter().any(|f| un_and(f).is_some_and(|(_, y)| y == g)), "no premise α ∧ β with β the conclusion"),
        "OL5" => {
            expect(p[0].premises == *t && p[1].premises == *t, "premise sets differ")?;
            expect(*g == and(p[0].conclusion.clone(), p[1].conclusion.clone()), "conclusion is not the conjunction")
        }
        "OL6" => {
            expect(p[0].conclusion == *g, "conclusion differs")?;
            let ok = t.iter().any(|f| {
                un_and(f).is_some_and(|(x, y)| {
                    let mut base = t.clone();
                    let with: BTreeSet<Formula> = base.iter().cloned().chain([x.clone(), y.clone()]).collect();
                    base.remove(f);
                    base.insert(x.clone());
                    base.insert(y.clone());
                    p[0].premises == base || p[0].premises == with
                })
            });
            expect(ok, "premise set is not T ∪ {α, β} for a conjunction in the conclusion")
        }
        "OL7" => {
            let a = single(p[0])?;
            expect(p[1].premises == p[0].premises, "premise sets differ")?;
            expect(p[1].conclusion == not(p[0].conclusion.clone()), "second premise does not conclude ¬β")?;
            expect(t.is_empty(), "conclusion has premises")?;
            expect(*g == not(a), "conclusion is not ¬α")
        }
        "OL8" => expect(un_not(g).and_then(un_not).is_some_and(|x| t.contains(x)), "conclusion is not ¬¬α for a premise α"),
        "OL9" => expect(t.contains(&not(not(g.clone()))), "¬¬α is not a premise"),
        "OL10" => expect(
            t.iter().any(|f| un_and(f).is_some_and(|(x, y)| un_not(y) == Some(x))),
            "no premise α ∧ ¬α",
        ),
        "OL11" => {
            let a = single(p[0])?;
            expect(*t == set([not(p[0].conclusion.clone())]), "premise is not ¬β")?;
            expect(*g == not(a), "conclusion is not ¬α")
        }
        "OQL" => {
            let f = single(c)?;
            let ok = (|| {
                let (a, r) = un_and(&f)?;
                let (a2, r) = un_and(un_not(r)?)?;
                let (a3, b) = un_and(un_not(r)?)?;
                Some(a == a2 && a2 == a3 && b == g)
            })();
            expect(ok == Some(true), "not an instance of α ∧ ¬(α ∧ ¬(α ∧ β)) ⊢ β")
        }
        "KLEENE" => {
            let f = single(c)?;
            let left = un_and(&f).is_some_and(|(x, y)| un_not(y) == Some(x));
            let right = un_or(g).is_some_and(|(x, y)| un_not(y) == Some(x));
            expect(left && right, "not an instance of α ∧ ¬α ⊢ β ∨ ¬β")
        }
        "BZ1" => expect(single(c)? == nec(g.clone()), "not an instance of Lα ⊢ α"),
        "BZ2" => {
            let a = un_nec(g).and_then(un_nec).ok_or("conclusion is not LLα")?;
            expect(single(c)? == nec(a.clone()), "not an instance of Lα ⊢ LLα")
        }
        "BZ3" => {
            let a = un_nec(g).ok_or("conclusion is not Lα")?;
            expect(single(c)? == poss(nec(a.clone())), "not an instance of MLα ⊢ Lα")
        }
        "BZ4" => {
            let a = single(p[0])?;
            expect(*t == set([nec(a)]), "premise is not Lα")?;
            expect(*g == nec(p[0].conclusion.clone()), "conclusion is not Lβ")
        }
        "BZ5" => {
            let (a, b) = un_nec(g).and_then(un_and).ok_or("conclusion is not L(α ∧ β)")?;
            expect(single(c)? == and(nec(a.clone()), nec(b.clone())), "not an instance of Lα ∧ Lβ ⊢ L(α ∧ β)")
        }
        "BZ6" => {
            expect(t.is_empty(), "conclusion has premises")?;
            let ok = un_not(g)
                .and_then(un_and)
                .is_some_and(|(x, y)| un_nec(x).is_some() && un_not(y) == Some(x));
            expect(ok, "not an instance of ⊢ ¬(Lα ∧ ¬Lα)")
        }
        "BZ3-1" => {
            let (la, lb) = un_or(g).ok_or("conclusion is not Lα ∨ Lβ")?;
            let (a, b) = (un_nec(la).ok_or("not Lα")?, un_nec(lb).ok_or("not Lβ")?);
            expect(single(c)? == nec(or(a.clone(), b.clone())), "not an instance of L(α ∨ β) ⊢ Lα ∨ Lβ")
        }
        "BZ3-2" => {
            let a = single(c)?;
            expect(p[0].premises == set([nec(a.clone())]) && p[0].conclusion == *g, "first premise is not Lα ⊢ β")?;
            expect(p[1].premises == set([a]) && p[1].conclusion == poss(g.clone()), "second premise is not α ⊢ Mβ")
        }
        _ => upa_matches(rule, c, p),
    }
}

fn upa_matches(rule: &str, c: &Canon, p: &[&Canon]) -> Result<(), String> {
    let pair = |k: &Canon| -> Result<(Formula, Formula), String> {
        Ok((k.single().cloned().ok_or("expected a single premise")?, k.conclusion.clone()))
    };
    let (a, g) = pair(c)?;
    let shape = |ok: bool| expect(ok, &format!("not an instance of {rule}"));
    match rule {
        "UPa1" => shape(a == g),
        "UPa2" => {
            let ((x, y), (y2, z)) = (pair(p[0])?, pair(p[1])?);
            shape(y == y2 && x == a && z == g)
        }
        "UPa3" => shape(g == not(not(a))),
        "UPa4" => shape(a == not(not(g))),
        "UPa5" => {
            let (x, y) = pair(p[0])?;
            shape(a == not(y) && g == not(x))
        }
        "UPa6" => shape(un_aut(&g).is_some_and(|(x, y)| un_not(y) == Some(x))),
        "UPa7" => {
            let ((x, ny), (em, xy)) = (pair(p[0])?, pair(p[1])?);
            let y = un_not(&ny).ok_or("first premise is not α ⊢ ¬β")?;
            shape(em == aut(x.clone(), not(x.clone())) && xy == aut(x.clone(), y.clone()) && a == not(x) && g == *y)
        }
        "UPa8" => {
            let (x, y) = un_aut(&a).ok_or("premise is not α ⊕ β")?;
            let (x1, y1) = un_aut(&g).ok_or("conclusion is not α₁ ⊕ β₁")?;
            let want = [
                (x.clone(), not(y.clone())),
                (x.clone(), x1.clone()),
                (x1.clone(), x.clone()),
                (y.clone(), y1.clone()),
                (y1.clone(), y.clone()),
            ];
            for (k, w) in want.iter().enumerate() {
                if pair(p[k])? != *w {
                    return Err(format!("premise {} does not match", k + 1));
                }
            }
            Ok(())
        }
        "UPa9" => {
            let (x, ny) = pair(p[0])?;
            let y = un_not(&ny).ok_or("premise is not α ⊢ ¬β")?;
            shape(a == aut(x.clone(), y.clone()) && g == aut(y.clone(), x))
        }
        "UPa10" | "UPa11" | "UPa12" | "UPa13" => {
            let ((b, ng), (x, nbg)) = (pair(p[0])?, pair(p[1])?);
            let gm = un_not(&ng).ok_or("first premise is not β ⊢ ¬γ")?.clone();
            shape(nbg == not(aut(b.clone(), gm.clone())))?;
            let (want_a, want_g) = match rule {
                "UPa10" => (x.clone(), not(b.clone())),
                "UPa11" => (aut(x.clone(), b.clone()), not(gm.clone())),
                "UPa12" => (aut(x.clone(), aut(b.clone(), gm.clone())), aut(aut(x.clone(), b.clone()), gm.clone())),
                _ => (aut(aut(x.clone(), b.clone()), gm.clone()), aut(x.clone(), aut(b.clone(), gm.clone()))),
            };
            shape(a == want_a && g == want_g)
        }
        "WPa" => {
            let (x, nx) = pair(p[0])?;
            shape(nx == not(x.clone()) && a == x)
        }
        "SPa" => {
            let ((x, ny), (x2, z), (y2, z2)) = (pair(p[0])?, pair(p[1])?, pair(p[2])?);
            let y = un_not(&ny).ok_or("first premise is not α ⊢ ¬β")?;
            shape(x == x2 && *y == y2 && z == z2 && z == g && a == aut(x, y.clone()))
        }
        _ => Err(format!("unknown rule {rule}")),
    }
}

/// A step of a macro body. Premise references are `Err(k)` for the k-th
/// premise of the macro step and `Ok(m)` for the m-th body step.
type MacroStep = (Canon, &'static str, Vec<Result<usize, usize>>);

fn cf(premises: impl IntoIterator<Item = Formula>, conclusion: Formula) -> Canon {
    Canon {
        premises: set(premises),
        conclusion,
    }
}

/// Instantiates a derived rule for the step `c` with premises `p`.
fn macro_body(rule: &str, c: &Canon, p: &[&Canon]) -> Result<Vec<MacroStep>, String> {
    let g = c.conclusion.clone();
    match rule {
        "D1" => {
            // ¬(p ⊕ ¬p) ⊢ β.
            let f = c.single().ok_or("expected a single premise")?;
            let (x, nx) = un_not(f).and_then(un_aut).ok_or("premise is not ¬(p ⊕ ¬p)")?;
            expect(matches!(x, Formula::Lit(_)) && un_not(nx) == Some(x), "premise is not ¬(p ⊕ ¬p) for a literal p")?;
            let t = aut(x.clone(), nx.clone());
            let nb = not(g.clone());
            Ok(vec![
                (cf([nb.clone()], t.clone()), "UPa6", vec![]),
                (cf([not(t)], not(nb.clone())), "UPa5", vec![Ok(0)]),
                (cf([not(nb)], g.clone()), "UPa4", vec![]),
                (cf([f.clone()], g), "UPa2", vec![Ok(1), Ok(2)]),
            ])
        }
        "D2" => {
            // α ⊢ ¬β / α ⊢ α ⊕ β.
            let a = c.single().ok_or("expected a single premise")?.clone();
            let (x, b) = un_aut(&g).ok_or("conclusion is not α ⊕ β")?;
            expect(*x == a, "conclusion is not α ⊕ β for the premise α")?;
            expect(*p[0] == cf([a.clone()], not(b.clone())), "premise is not α ⊢ ¬β")?;
            let n = not(g.clone());
            Ok(vec![
                (cf([n.clone()], n.clone()), "UPa1", vec![]),
                (cf([n.clone()], not(a.clone())), "UPa10", vec![Err(0), Ok(0)]),
                (cf([not(not(a.clone()))], not(n.clone())), "UPa5", vec![Ok(1)]),
                (cf([a.clone()], not(not(a.clone()))), "UPa3", vec![]),
                (cf([a.clone()], not(n.clone())), "UPa2", vec![Ok(3), Ok(2)]),
                (cf([not(n)], g.clone()), "UPa4", vec![]),
                (cf([a], g), "UPa2", vec![Ok(4), Ok(5)]),
            ])
        }
        "DR1" => {
            // Lα ⊢ β, Mα ⊢ Mβ / α ⊢ β.
            let a = c.single().ok_or("expected a single premise")?.clone();
            expect(*p[0] == cf([nec(a.clone())], g.clone()), "first premise is not Lα ⊢ β")?;
            expect(*p[1] == cf([poss(a.clone())], poss(g.clone())), "second premise is not Mα ⊢ Mβ")?;
            let na = not(a.clone());
            Ok(vec![
                (cf([nec(na.clone())], na.clone()), "BZ1", vec![]),
                (cf([not(na.clone())], poss(a.clone())), "OL11", vec![Ok(0)]),
                (cf([a.clone()], not(na)), "OL8", vec![]),
                (cf([a.clone()], poss(a.clone())), "OL2", vec![Ok(2), Ok(1)]),
                (cf([a.clone()], poss(g.clone())), "OL2", vec![Ok(3), Err(1)]),
                (cf([a], g), "BZ3-2", vec![Err(0), Ok(4)]),
            ])
        }
        "DR2" => {
            // Mα ∧ Mβ ⊢ M(α ∧ β).
            let (a, b) = un_not(&g)
                .and_then(un_nec)
                .and_then(un_not)
                .and_then(un_and)
                .ok_or("conclusion is not M(α ∧ β)")?;
            let (a, b) = (a.clone(), b.clone());
            let prem = and(poss(a.clone()), poss(b.clone()));
            expect(c.premises == set([prem.clone()]), "premise is not Mα ∧ Mβ")?;
            let x = and(not(not(a.clone())), not(not(b.clone())));
            let big_a = nec(not(a.clone()));
            let big_b = nec(not(b.clone()));
            let big_c = nec(not(and(a.clone(), b.clone())));
            let d = not(x.clone());
            let disj = not(and(not(big_a.clone()), not(big_b.clone())));
            Ok(vec![
                (cf([x.clone()], not(not(a.clone()))), "OL3", vec![]),
                (cf([x.clone(), not(not(a.clone()))], a.clone()), "OL9", vec![]),
                (cf([x.clone()], a.clone()), "OL2", vec![Ok(0), Ok(1)]),
                (cf([x.clone()], not(not(b.clone()))), "OL4", vec![]),
                (cf([x.clone(), not(not(b.clone()))], b.clone()), "OL9", vec![]),
                (cf([x.clone()], b.clone()), "OL2", vec![Ok(3), Ok(4)]),
                (cf([x], and(a.clone(), b.clone())), "OL5", vec![Ok(2), Ok(5)]),
                (cf([not(and(a, b))], d.clone()), "OL11", vec![Ok(6)]),
                (cf([big_c.clone()], nec(d.clone())), "BZ4", vec![Ok(7)]),
                (cf([nec(d)], disj.clone()), "BZ3-1", vec![]),
                (cf([big_c.clone()], disj.clone()), "OL2", vec![Ok(8), Ok(9)]),
                (cf([not(disj.clone())], not(big_c.clone())), "OL11", vec![Ok(10)]),
                (cf([prem.clone()], not(disj)), "OL8", vec![]),
                (cf([prem], not(big_c)), "OL2", vec![Ok(12), Ok(11)]),
            ])
        }
        _ => Err(format!("no expansion for {rule}")),
    }
}

fn check_rule(calc: Calculus, rule: &str, c: &Canon, p: &[&Canon]) -> Result<(), String> {
    if UNAVAILABLE_MACROS.contains(&rule) {
        return Err(format!("derived rule {rule} has no primitive expansion"));
    }
    let primitive = calc.rules().contains(&rule);
    let derived = calc.macros().contains(&rule);
    if !primitive && !derived {
        return Err(format!("rule {rule} is not a rule of {calc}"));
    }
    if p.len() != arity(rule) {
        return Err(format!("{rule} takes {} premises, {} given", arity(rule), p.len()));
    }
    if primitive {
        return primitive_matches(rule, c, p);
    }
    let body = macro_body(rule, c, p)?;
    let mut done: Vec<&Canon> = Vec::new();
    for (k, (conf, r, refs)) in body.iter().enumerate() {
        let prem: Vec<&Canon> = refs
            .iter()
            .map(|x| match *x {
                Ok(m) => done[m],
                Err(e) => p[e],
            })
            .collect();
        primitive_matches(r, conf, &prem).map_err(|e| format!("{rule} expansion step {}: {e}", k + 1))?;
        done.push(conf);
    }
    expect(done.last().is_some_and(|l| *l == c), "expansion does not end in the step")
}

/// Checks a derivation step by step.
pub fn check(d: &Derivation) -> Result<(), Rejection> {
    let calc = d.calculus;
    let dialect = calc.dialect();
    let mut canon: Vec<Canon> = Vec::with_capacity(d.steps.len());
    let check_config = |n: usize, conf: &Config| -> Result<(), Rejection> {
        for f in conf.premises.iter().chain(std::iter::once(&conf.conclusion)) {
            f.check_dialect(dialect).map_err(|e| reject(n, e.to_string()))?;
        }
        if calc.single_formula() && conf.premises.len() != 1 {
            return Err(reject(n, format!("{calc} configurations have exactly one premise")));
        }
        Ok(())
    };
    for (i, step) in d.steps.iter().enumerate() {
        let n = i + 1;
        check_config(n, &step.config)?;
        let c = step.config.canon();
        if calc.single_formula() && c.premises.len() != 1 {
            return Err(reject(n, format!("{calc} configurations have exactly one premise")));
        }
        let mut prem = Vec::new();
        for &k in &step.premises {
            if k == 0 || k >= n {
                return Err(reject(n, format!("premise index {k} does not name an earlier step")));
            }
            prem.push(&canon[k - 1]);
        }
        check_rule(calc, &step.rule, &c, &prem).map_err(|e| reject(n, format!("{}: {e}", step.rule)))?;
        canon.push(c);
    }
    if let Some(goal) = &d.goal {
        check_config(0, goal).map_err(|e| Rejection { step: None, ..e })?;
        let last = canon.last().ok_or(Rejection {
            step: None,
            reason: "derivation has no steps".into(),
        })?;
        if *last != goal.canon() {
            return Err(Rejection {
                step: None,
                reason: "last step does not establish the goal".into(),
            });
        }
    }
    Ok(())
}

/// Replaces every derived-rule step by its primitive expansion.
pub fn macro_expand(d: &Derivation) -> Result<Derivation, Rejection> {
    check(d)?;
    let mut steps: Vec<Step> = Vec::new();
    // New number of each old step.
    let mut renumber: Vec<usize> = Vec::new();
    for (i, step) in d.steps.iter().enumerate() {
        if !d.calculus.macros().contains(&step.rule.as_str()) {
            let premises = step.premises.iter().map(|&k| renumber[k - 1]).collect();
            steps.push(Step {
                config: step.config.clone(),
                rule: step.rule.clone(),
                premises,
            });
            renumber.push(steps.len());
            continue;
        }
        let c = step.config.canon();
        let prem: Vec<Canon> = step.premises.iter().map(|&k| d.steps[k - 1].config.canon()).collect();
        let refs: Vec<&Canon> = prem.iter().collect();
        let body = macro_body(&step.rule, &c, &refs).map_err(|e| reject(i + 1, e))?;
        let base = steps.len();
        for (conf, r, rs) in body {
            let premises = rs
                .iter()
                .map(|x| match *x {
                    Ok(m) => base + m + 1,
                    Err(e) => renumber[step.premises[e] - 1],
                })
                .collect();
            steps.push(Step {
                config: conf.to_config(),
                rule: r.to_string(),
                premises,
            });
        }
        renumber.push(steps.len());
    }
    let out = Derivation {
        calculus: d.calculus,
        goal: d.goal.clone(),
        steps,
    };
    check(&out)?;
    Ok(out)
}

/// Largest premise set explored by the search.
pub const SEARCH_MAX_PREMISES: usize = 3;

#[derive(Debug)]
struct Tree {
    conf: Canon,
    rule: &'static str,
    children: Vec<Rc<Tree>>,
}

struct Searcher {
    calc: Calculus,
    rules: Vec<&'static str>,
    universe: BTreeSet<Formula>,
    failed: HashMap<Canon, usize>,
    proved: HashMap<Canon, Rc<Tree>>,
}

impl Searcher {
    fn admissible(&self, c: &Canon) -> bool {
        c.premises.len() <= SEARCH_MAX_PREMISES
            && self.universe.contains(&c.conclusion)
            && c.premises.iter().all(|f| self.universe.contains(f))
            && (!self.calc.single_formula() || c.premises.len() == 1)
    }

    /// Candidate (rule, premise configurations) pairs, in rule order.
    fn expansions(&self, c: &Canon) -> Vec<(&'static str, Vec<Canon>)> {
        let mut out: Vec<(&'static str, Vec<Canon>)> = Vec::new();
        let t = &c.premises;
        let g = &c.conclusion;
        let u: Vec<Formula> = self.universe.iter().cloned().collect();
        for &rule in &self.rules {
            match rule {
                "OL2" => {
                    for a in &u {
                        let with: BTreeSet<Formula> = t.iter().cloned().chain([a.clone()]).collect();
                        if !t.is_empty() && *t != set([a.clone()]) {
                            out.push((rule, vec![cf(t.clone(), a.clone()), cf([a.clone()], g.clone())]));
                        }
                        if !t.contains(a) {
                            out.push((rule, vec![cf(t.clone(), a.clone()), cf(with.clone(), g.clone())]));
                            if !t.is_empty() {
                                out.push((rule, vec![cf([], a.clone()), cf(with, g.clone())]));
                            }
                        }
                    }
                }
                "OL5" => {
                    if let Some((x, y)) = un_and(g) {
                        out.push((rule, vec![cf(t.clone(), x.clone()), cf(t.clone(), y.clone())]));
                    }
                }
                "OL6" => {
                    for f in t {
                        if let Some((x, y)) = un_and(f) {
                            let mut base = t.clone();
                            base.remove(f);
                            base.insert(x.clone());
                            base.insert(y.clone());
                            out.push((rule, vec![cf(base, g.clone())]));
                        }
                    }
                }
                "OL7" => {
                    if let (true, Some(a)) = (t.is_empty(), un_not(g)) {
                        for b in &u {
                            if self.universe.contains(&not(b.clone())) {
                                out.push((rule, vec![cf([a.clone()], b.clone()), cf([a.clone()], not(b.clone()))]));
                            }
                        }
                    }
                }
                "OL11" => {
                    if let (Some(nb), Some(a)) = (c.single(), un_not(g)) {
                        if let Some(b) = un_not(nb) {
                            out.push((rule, vec![cf([a.clone()], b.clone())]));
                        }
                    }
                }
                "BZ4" => {
                    if let (Some(la), Some(b)) = (c.single(), un_nec(g)) {
                        if let Some(a) = un_nec(la) {
                            out.push((rule, vec![cf([a.clone()], b.clone())]));
                        }
                    }
                }
                "BZ3-2" => {
                    if let Some(a) = c.single() {
                        out.push((rule, vec![cf([nec(a.clone())], g.clone()), cf([a.clone()], poss(g.clone()))]));
                    }
                }
                "UPa2" => {
                    if let Some(a) = c.single() {
                        for m in &u {
                            if m != a && m != g {
                                out.push((rule, vec![cf([a.clone()], m.clone()), cf([m.clone()], g.clone())]));
                            }
                        }
                    }
                }
                "UPa5" => {
                    if let (Some(nb), Some(a)) = (c.single().and_then(un_not), un_not(g)) {
                        out.push((rule, vec![cf([a.clone()], nb.clone())]));
                    }
                }
                "UPa9" => {
                    if let Some((x, y)) = c.single().and_then(un_aut) {
                        out.push((rule, vec![cf([x.clone()], not(y.clone()))]));
                    }
                }
                "WPa" => {
                    if let Some(a) = c.single() {
                        out.push((rule, vec![cf([a.clone()], not(a.clone()))]));
                    }
                }
                "SPa" => {
                    if let Some((x, y)) = c.single().and_then(un_aut) {
                        out.push((
                            rule,
                            vec![cf([x.clone()], not(y.clone())), cf([x.clone()], g.clone()), cf([y.clone()], g.clone())],
                        ));
                    }
                }
                _ => {}
            }
        }
        out
    }

    fn prove(&mut self, c: &Canon, depth: usize) -> Option<Rc<Tree>> {
        if let Some(t) = self.proved.get(c) {
            return Some(t.clone());
        }
        if depth == 0 || !self.admissible(c) || self.failed.get(c).is_some_and(|&d| d >= depth) {
            return None;
        }
        for &rule in &self.rules {
            if arity(rule) == 0 && primitive_matches(rule, c, &[]).is_ok() {
                let t = Rc::new(Tree {
                    conf: c.clone(),
                    rule,
                    children: vec![],
                });
                self.proved.insert(c.clone(), t.clone());
                return Some(t);
            }
        }
        for (rule, subgoals) in self.expansions(c) {
            if subgoals.iter().any(|s| s == c || !self.admissible(s)) {
                continue;
            }
            let mut children = Vec::new();
            for s in &subgoals {
                match self.prove(s, depth - 1) {
                    Some(t) => children.push(t),
                    None => break,
                }
            }
            if children.len() == subgoals.len() {
                let refs: Vec<&Canon> = subgoals.iter().collect();
                if primitive_matches(rule, c, &refs).is_ok() {
                    let t = Rc::new(Tree {
                        conf: c.clone(),
                        rule,
                        children,
                    });
                    self.proved.insert(c.clone(), t.clone());
                    return Some(t);
                }
            }
        }
        let e = self.failed.entry(c.clone()).or_insert(0);
        *e = (*e).max(depth);
        None
    }
}

fn linearize(t: &Tree, steps: &mut Vec<Step>, seen: &mut HashMap<Canon, usize>) -> usize {
    if let Some(&n) = seen.get(&t.conf) {
        return n;
    }
    let premises = t.children.iter().map(|c| linearize(c, steps, seen)).collect();
    steps.push(Step {
        config: t.conf.to_config(),
        rule: t.rule.to_string(),
        premises,
    });
    seen.insert(t.conf.clone(), steps.len());
    steps.len()
}

/// Bounded backward search by iterative deepening over the rule schemas.
/// Formulas are drawn from the subformulas of the goal and their
/// negations; premise sets hold at most [`SEARCH_MAX_PREMISES`] formulas.
/// `None` means no derivation within the bound.
pub fn search(calc: Calculus, goal: &Config, depth: usize) -> Option<Derivation> {
    let c = goal.canon();
    let mut universe = BTreeSet::new();
    for f in c.premises.iter().chain(std::iter::once(&c.conclusion)) {
        for s in f.subformulas() {
            universe.insert(s.clone());
            universe.insert(not(s.clone()));
        }
    }
    let mut s = Searcher {
        calc,
        rules: calc.rules(),
        universe,
        failed: HashMap::new(),
        proved: HashMap::new(),
    };
    let mut found = None;
    for d in 1..=depth {
        if let Some(t) = s.prove(&c, d) {
            found = Some(t);
            break;
        }
    }
    let t = found?;
    let mut steps = Vec::new();
    linearize(&t, &mut steps, &mut HashMap::new());
    let d = Derivation {
        calculus: calc,
        goal: Some(goal.clone()),
        steps,
    };
    debug_assert!(check(&d).is_ok());
    Some(d)
}

/// Structures matching a calculus, for the soundness harness.
pub enum Semantics {
    Algebraic(Vec<(String, FiniteStructure)>),
    Partial(Vec<(String, PartialTable)>),
}

/// Catalog structures of the class characterizing `calc`. The BZ calculi
/// also get the orthopair lattices of small frames.
pub fn harness_semantics(calc: Calculus) -> Semantics {
    let class = match calc {
        Calculus::Ol => StructureClass::Ortholattice,
        Calculus::Oql => StructureClass::OrthomodularLattice,
        Calculus::Pql => StructureClass::InvolutiveLattice,
        Calculus::Rpql => StructureClass::RegularInvolutiveLattice,
        Calculus::Bzl => StructureClass::BzLattice,
        Calculus::Bzl3 => StructureClass::Bz3Lattice,
        Calculus::UPaql | Calculus::WPaql | Calculus::SPaql => {
            let want = match calc {
                Calculus::UPaql => PartialClass::EffectAlgebra,
                Calculus::WPaql => PartialClass::Orthoalgebra,
                _ => PartialClass::OrthomodularPoset,
            };
            let tables = catalog::STANDARD_PARTIAL_TABLES
                .iter()
                .map(|n| (n.to_string(), catalog::partial_table(n).expect("catalog table")))
                .filter(|(_, t)| t.validate().class.is_some_and(|c| c >= want))
                .collect();
            return Semantics::Partial(tables);
        }
    };
    let mut list = catalog::structures_of_class(class);
    if matches!(calc, Calculus::Bzl | Calculus::Bzl3) {
        for (n, code) in [(1, 0), (2, 0), (3, 0), (3, 1)] {
            let space = PairSpace::new(orthoframe_from_code(n, code)).expect("orthoframe");
            let (s, _) = space.to_structure().expect("small pair lattice");
            list.push((format!("PAIRS({n},{code})"), s));
        }
    }
    Semantics::Algebraic(list)
}

/// A countermodel to one step of an accepted derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepCountermodel {
    pub step: usize,
    pub witness: String,
}

/// Runs the semantic consequence check for every step.
pub fn soundness_harness(d: &Derivation, semantics: &Semantics) -> Result<Vec<StepCountermodel>, Rejection> {
    check(d)?;
    let mut out = Vec::new();
    for (i, s) in d.steps.iter().enumerate() {
        let witness = match semantics {
            Semantics::Algebraic(list) => match algebraic::consequence(list, &s.config.premises, &s.config.conclusion) {
                Ok(None) => None,
                Ok(Some(w)) => Some(w.to_string()),
                Err(e) => Some(format!("evaluation error: {e}")),
            },
            Semantics::Partial(list) => {
                let tables: Vec<PartialTable> = list.iter().map(|(_, t)| t.clone()).collect();
                match paql_consequence(&tables, ValuationMode::PerFormula, &s.config.premises, &s.config.conclusion) {
                    Ok(()) => None,
                    Err(c) => Some(format!("{} with {:?}", list[c.structure].0, c.literals)),
                }
            }
        };
        if let Some(witness) = witness {
            out.push(StepCountermodel { step: i + 1, witness });
        }
    }
    Ok(out)
}

/// The shipped sample derivations, by file name.
pub const SAMPLES: &[(&str, &str)] = &[
    ("ol-and-comm.drv", include_str!("../derivations/ol-and-comm.drv")),
    ("ol-absurdity.drv", include_str!("../derivations/ol-absurdity.drv")),
    ("ol-contraposition.drv", include_str!("../derivations/ol-contraposition.drv")),
    ("ol-double-negation-cut.drv", include_str!("../derivations/ol-double-negation-cut.drv")),
    ("ol-duns-scotus.drv", include_str!("../derivations/ol-duns-scotus.drv")),
    ("oql-orthomodularity.drv", include_str!("../derivations/oql-orthomodularity.drv")),
    ("oql-arrow-identity.drv", include_str!("../derivations/oql-arrow-identity.drv")),
    ("oql-split-premises.drv", include_str!("../derivations/oql-split-premises.drv")),
    ("pql-double-negation.drv", include_str!("../derivations/pql-double-negation.drv")),
    ("pql-conjunction.drv", include_str!("../derivations/pql-conjunction.drv")),
    ("rpql-kleene.drv", include_str!("../derivations/rpql-kleene.drv")),
    ("rpql-kleene-chain.drv", include_str!("../derivations/rpql-kleene-chain.drv")),
    ("bzl-bz2.drv", include_str!("../derivations/bzl-bz2.drv")),
    ("bzl-necessity-chain.drv", include_str!("../derivations/bzl-necessity-chain.drv")),
    ("bzl-monotone.drv", include_str!("../derivations/bzl-monotone.drv")),
    ("bzl-bz6.drv", include_str!("../derivations/bzl-bz6.drv")),
    ("bzl-bz5.drv", include_str!("../derivations/bzl-bz5.drv")),
    ("bzl3-dr1.drv", include_str!("../derivations/bzl3-dr1.drv")),
    ("bzl3-dr2.drv", include_str!("../derivations/bzl3-dr2.drv")),
    ("bzl3-split-necessity.drv", include_str!("../derivations/bzl3-split-necessity.drv")),
    ("upaql-double-negation.drv", include_str!("../derivations/upaql-double-negation.drv")),
    ("upaql-excluded-middle.drv", include_str!("../derivations/upaql-excluded-middle.drv")),
    ("upaql-d2.drv", include_str!("../derivations/upaql-d2.drv")),
    ("upaql-d1.drv", include_str!("../derivations/upaql-d1.drv")),
    ("upaql-commutativity.drv", include_str!("../derivations/upaql-commutativity.drv")),
    ("wpaql-duns-scotus.drv", include_str!("../derivations/wpaql-duns-scotus.drv")),
    ("spaql-sup.drv", include_str!("../derivations/spaql-sup.drv")),
];

/// Parses a shipped sample by file name.
pub fn sample(name: &str) -> Option<Derivation> {
    SAMPLES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| Derivation::parse(t, None).expect("sample parses"))
}

/// Single-token mutations of a derivation: every other rule name of the
/// calculus at each step, every other premise index at each premise slot,
/// and every replacement or deletion of one connective in one formula.
pub fn mutations(d: &Derivation) -> Vec<(String, Derivation)> {
    let mut out = Vec::new();
    let mut names: Vec<&str> = d.calculus.rules();
    names.extend(d.calculus.macros());
    for (i, s) in d.steps.iter().enumerate() {
        for &r in &names {
            if r != s.rule {
                let mut m = d.clone();
                m.steps[i].rule = r.to_string();
                out.push((format!("step {}: rule {} -> {r}", i + 1, s.rule), m));
            }
        }
        for (k, &p) in s.premises.iter().enumerate() {
            for q in 1..=d.steps.len() {
                if q != p {
                    let mut m = d.clone();
                    m.steps[i].premises[k] = q;
                    out.push((format!("step {}: premise {p} -> {q}", i + 1), m));
                }
            }
        }
        let formulas = s.config.premises.len() + 1;
        for fi in 0..formulas {
            let f = if fi < s.config.premises.len() {
                &s.config.premises[fi]
            } else {
                &s.config.conclusion
            };
            for (desc, g) in connective_mutations(f, d.calculus.dialect()) {
                let mut m = d.clone();
                if fi < s.config.premises.len() {
                    m.steps[i].config.premises[fi] = g;
                } else {
                    m.steps[i].config.conclusion = g;
                }
                out.push((format!("step {}: {desc}", i + 1), m));
            }
        }
    }
    out
}

fn unary_ops() -> [fn(Formula) -> Formula; 4] {
    [Formula::not, Formula::inot, Formula::l, Formula::m]
}

fn binary_ops() -> [fn(Formula, Formula) -> Formula; 4] {
    [Formula::and, Formula::or, Formula::aut, Formula::aut_and]
}

/// Every formula obtained by changing or deleting one connective node.
pub fn connective_mutations(f: &Formula, dialect: Dialect) -> Vec<(String, Formula)> {
    let mut out = Vec::new();
    let rebuild_unary = |a: &Formula| -> Vec<Formula> {
        let mut v: Vec<Formula> = unary_ops().iter().map(|op| op(a.clone())).collect();
        v.push(a.clone());
        v
    };
    let here: Vec<Formula> = match f {
        Formula::Lit(_) => vec![],
        Formula::Not(a) | Formula::INot(a) | Formula::L(a) | Formula::M(a) => rebuild_unary(a),
        Formula::And(x, y) | Formula::Or(x, y) | Formula::Aut(x, y) | Formula::AutAnd(x, y) => {
            let mut v: Vec<Formula> = binary_ops().iter().map(|op| op((**x).clone(), (**y).clone())).collect();
            v.extend((1..=5).map(|i| Formula::arrow(i, (**x).clone(), (**y).clone())));
            v
        }
        _ => vec![],
    };
    for g in here {
        if g != *f && g.check_dialect(dialect).is_ok() {
            out.push((format!("{f} -> {g}"), g));
        }
    }
    let children = f.children();
    for (k, ch) in children.iter().enumerate() {
        for (desc, g) in connective_mutations(ch, dialect) {
            let rebuilt = replace_child(f, k, g);
            out.push((desc, rebuilt));
        }
    }
    out
}

fn replace_child(f: &Formula, k: usize, g: Formula) -> Formula {
    use Formula::*;
    let b = Box::new;
    let pick = |x: &Formula, y: &Formula| if k == 0 { (g.clone(), y.clone()) } else { (x.clone(), g.clone()) };
    match f {
        Not(_) => Not(b(g)),
        INot(_) => INot(b(g)),
        L(_) => L(b(g)),
        M(_) => M(b(g)),
        Nec(_) => Nec(b(g)),
        Pos(_) => Pos(b(g)),
        CNot(_) => CNot(b(g)),
        And(x, y) => {
            let (x, y) = pick(x, y);
            And(b(x), b(y))
        }
        Or(x, y) => {
            let (x, y) = pick(x, y);
            Or(b(x), b(y))
        }
        Aut(x, y) => {
            let (x, y) = pick(x, y);
            Aut(b(x), b(y))
        }
        AutAnd(x, y) => {
            let (x, y) = pick(x, y);
            AutAnd(b(x), b(y))
        }
        Arrow(i, x, y) => {
            let (x, y) = pick(x, y);
            Arrow(*i, b(x), b(y))
        }
        Strict(x, y) => {
            let (x, y) = pick(x, y);
            Strict(b(x), b(y))
        }
        Entail(x, y) => {
            let (x, y) = pick(x, y);
            Entail(b(x), b(y))
        }
        CAnd(x, y) => {
            let (x, y) = pick(x, y);
            CAnd(b(x), b(y))
        }
        Et(x, y) => {
            let (x, y) = pick(x, y);
            Et(b(x), b(y))
        }
        Vel(x, y) => {
            let (x, y) = pick(x, y);
            Vel(b(x), b(y))
        }
        Lit(_) => f.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_samples() -> Vec<(&'static str, Derivation)> {
        SAMPLES.iter().map(|(n, _)| (*n, sample(n).unwrap())).collect()
    }

    #[test]
    fn samples_are_accepted() {
        let samples = all_samples();
        assert!(samples.len() >= 20);
        for calc in Calculus::ALL {
            assert!(samples.iter().any(|(_, d)| d.calculus == calc), "{calc}");
        }
        for (name, d) in &samples {
            assert!(d.goal.is_some(), "{name}");
            assert_eq!(check(d), Ok(()), "{name}");
            let again = Derivation::parse(&d.to_text(), None).unwrap();
            assert_eq!(check(&again), Ok(()), "{name}");
        }
    }

    #[test]
    fn samples_have_no_dead_steps() {
        for (name, d) in all_samples() {
            let mut used = vec![false; d.steps.len()];
            *used.last_mut().unwrap() = true;
            for i in (0..d.steps.len()).rev() {
                if used[i] {
                    for &p in &d.steps[i].premises {
                        used[p - 1] = true;
                    }
                }
            }
            assert!(used.iter().all(|&u| u), "{name}");
        }
    }

    #[test]
    fn every_single_mutation_is_rejected() {
        for (name, d) in all_samples() {
            let accepted: Vec<String> = mutations(&d)
                .into_iter()
                .filter(|(_, m)| check(m).is_ok())
                .map(|(desc, _)| desc)
                .collect();
            assert!(accepted.is_empty(), "{name}: {accepted:?}");
        }
    }

    #[test]
    fn orthomodular_rule_needs_its_calculus() {
        let mut d = sample("oql-orthomodularity.drv").unwrap();
        d.calculus = Calculus::Ol;
        let r = check(&d).unwrap_err();
        assert_eq!(r.step, Some(1));
        assert!(r.reason.contains("not a rule of OL"), "{r}");
    }

    #[test]
    fn absurdity_rules_are_absent_from_pql() {
        let mut d = sample("ol-absurdity.drv").unwrap();
        d.calculus = Calculus::Pql;
        assert_eq!(check(&d).unwrap_err().step, Some(5));
    }

    #[test]
    fn partial_calculi_need_single_premises() {
        let d = Derivation::parse("calculus: UPaQL\n1: [a; b] |- a BY UPa1\n", None).unwrap();
        assert!(check(&d).unwrap_err().reason.contains("exactly one premise"));
    }

    #[test]
    fn parse_errors() {
        assert_eq!(Derivation::parse("1: [a] |- a BY OL1\n", None), Err(ProofError::NoCalculus));
        assert!(matches!(
            Derivation::parse("calculus: OL\n2: [a] |- a BY OL1\n", None),
            Err(ProofError::Parse { line: 2, .. })
        ));
        assert!(Derivation::parse("calculus: OL\n1: [a] |- a + b BY OL1\n", None).is_err());
        let d = Derivation::parse("calculus: OL\n1: [a] |- a BY OL1(prem=1)\n", None).unwrap();
        assert!(check(&d).is_err());
        let d = Derivation::parse("calculus: OL\n1: [a] |- a BY XYZ\n", None).unwrap();
        assert!(check(&d).unwrap_err().reason.contains("not a rule"));
    }

    #[test]
    fn unavailable_macros_are_reported() {
        for rule in ["D3", "D4", "DR3"] {
            let calc = if rule == "DR3" { "BZL3" } else { "UPaQL" };
            let d = Derivation::parse(&format!("calculus: {calc}\n1: [a] |- a BY {rule}\n"), None).unwrap();
            assert!(check(&d).unwrap_err().reason.contains("no primitive expansion"), "{rule}");
        }
    }

    #[test]
    fn macros_expand_to_primitive_derivations() {
        for name in ["upaql-d1.drv", "upaql-d2.drv", "bzl3-dr1.drv", "bzl3-dr2.drv", "wpaql-duns-scotus.drv"] {
            let d = sample(name).unwrap();
            let e = macro_expand(&d).unwrap();
            assert!(e.steps.len() > d.steps.len(), "{name}");
            assert!(e.steps.iter().all(|s| d.calculus.rules().contains(&s.rule.as_str())), "{name}");
            assert_eq!(check(&e), Ok(()), "{name}");
        }
        assert_eq!(macro_expand(&sample("bzl3-dr2.drv").unwrap()).unwrap().steps.len(), 14);
    }

    #[test]
    fn samples_are_sound() {
        for (name, d) in all_samples() {
            let sem = harness_semantics(d.calculus);
            let bad = soundness_harness(&d, &sem).unwrap();
            assert!(bad.is_empty(), "{name}: {bad:?}");
        }
    }

    #[test]
    fn kleene_fails_on_a_non_regular_lattice() {
        let d = sample("rpql-kleene-chain.drv").unwrap();
        let sem = Semantics::Algebraic(vec![("NONREG4".into(), catalog::structure("NONREG4").unwrap())]);
        let bad = soundness_harness(&d, &sem).unwrap();
        assert_eq!(bad.iter().map(|c| c.step).collect::<Vec<_>>(), vec![2, 3]);
    }

    #[test]
    fn search_reconstructs_short_samples() {
        for (name, d) in all_samples() {
            if d.steps.len() > 3 || d.steps.iter().any(|s| d.calculus.macros().contains(&s.rule.as_str())) {
                continue;
            }
            let goal = d.goal.clone().unwrap();
            let found = search(d.calculus, &goal, 4).unwrap_or_else(|| panic!("{name}"));
            assert_eq!(check(&found), Ok(()), "{name}");
        }
    }

    #[test]
    fn search_finds_the_arrow_identity() {
        let goal = sample("oql-arrow-identity.drv").unwrap().goal.unwrap();
        let d = search(Calculus::Oql, &goal, 6).expect("derivation");
        assert_eq!(check(&d), Ok(()));
    }

    #[test]
    fn orthomodularity_is_not_found_in_ol() {
        let goal = sample("oql-orthomodularity.drv").unwrap().goal.unwrap();
        assert!(search(Calculus::Ol, &goal, 6).is_none());
        assert!(search(Calculus::Oql, &goal, 1).is_some());
    }

    #[test]
    fn configurations_compare_as_sets() {
        let x = Config::parse(Dialect::Ol, "[a; b; a] |- a | b").unwrap();
        let y = Config::parse(Dialect::Ol, "[b; a] |- -(-a & -b)").unwrap();
        assert!(x.equivalent(&y));
    }

    #[test]
    fn deduction_theorem_on_oql_samples() {
        for (name, d) in all_samples() {
            let goal = d.goal.clone().unwrap();
            if d.calculus != Calculus::Oql || goal.premises.len() != 1 {
                continue;
            }
            let (a, b) = (goal.premises[0].clone(), goal.conclusion.clone());
            let hook = Config::new(vec![], Formula::arrow(1, a.clone(), b.clone()));
            let forward = search(Calculus::Oql, &hook, 10).unwrap_or_else(|| panic!("{name}: no proof of the hook"));
            assert_eq!(check(&forward), Ok(()));
            let back = Config::new(vec![a], b);
            assert!(search(Calculus::Oql, &back, 10).is_some(), "{name}");
        }
    }

    #[test]
    fn weak_lindenbaum_on_small_theories() {
        let parse_f = |t: &str| parse(Dialect::Ol, t).unwrap();
        for (theory, alpha) in [(vec!["a"], "b"), (vec!["a & b"], "c"), (vec!["-a"], "b | c")] {
            let t: Vec<Formula> = theory.iter().map(|x| parse_f(x)).collect();
            let alpha = parse_f(alpha);
            let refutes = Config::new(t.clone(), Formula::not(alpha.clone()));
            assert!(search(Calculus::Ol, &refutes, 4).is_none());
            let mut extended = t.clone();
            extended.push(alpha);
            let absurd = Config::new(extended, parse_f("z & -z"));
            assert!(search(Calculus::Ol, &absurd, 4).is_none());
        }
    }
}
