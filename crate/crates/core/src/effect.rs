//! Finite effect algebras, orthoalgebras, orthomodular posets and QMV
//! algebras, the transforms between partial and total tables, partial-sum and
//! Łukasiewicz quantum-logic semantics, and the search for polynomial
//! conditionals.
//!
//! Partial-sum tables list only their defined entries: a ⊞ b is defined
//! exactly when the table has an entry for the pair.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::formula::Formula;
use crate::lattice::{Elem, FiniteStructure, StructureError};

/// Problems reading or building a table.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("table has no elements")]
    Empty,
    #[error("duplicate element id `{0}`")]
    DuplicateId(String),
    #[error("unknown element id `{0}`")]
    UnknownId(String),
    #[error("missing `{0}` declaration")]
    Missing(&'static str),
    #[error("{table} table has no entry for {id}")]
    NotTotal { table: &'static str, id: String },
    #[error("{table} table has conflicting entries for {id}")]
    Conflict { table: &'static str, id: String },
    #[error("`{0}` has no unique complement")]
    NoComplement(String),
    #[error("orthogonal elements `{0}` and `{1}` have no join")]
    NoJoin(String, String),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// Raw content of a table file before it is checked.
struct RawTable {
    names: Vec<String>,
    index: HashMap<String, Elem>,
    zero: Elem,
    one: Elem,
    triples: Vec<(usize, Elem, Elem, Elem)>,
    pairs: Vec<(usize, Elem, Elem)>,
}

fn parse_raw(text: &str, triple_key: &str, pair_key: Option<&str>) -> Result<RawTable, TableError> {
    let mut names: Option<Vec<String>> = None;
    let mut zero = None;
    let mut one = None;
    let mut triples_raw = Vec::new();
    let mut pairs_raw = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, rest) = content.split_once(':').ok_or_else(|| TableError::Parse {
            line,
            message: format!("expected `key: value`, found `{content}`"),
        })?;
        let key = key.trim();
        let toks: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
        let arity = |k: usize| -> Result<(), TableError> {
            if toks.len() == k {
                Ok(())
            } else {
                Err(TableError::Parse {
                    line,
                    message: format!("`{key}` expects {k} ids, found {}", toks.len()),
                })
            }
        };
        match key {
            "elements" => {
                if names.is_some() {
                    return Err(TableError::Parse {
                        line,
                        message: "`elements` given twice".into(),
                    });
                }
                names = Some(toks);
            }
            "zero" => {
                arity(1)?;
                zero = Some(toks[0].clone());
            }
            "one" => {
                arity(1)?;
                one = Some(toks[0].clone());
            }
            k if k == triple_key => {
                arity(3)?;
                triples_raw.push((line, toks));
            }
            k if Some(k) == pair_key => {
                arity(2)?;
                pairs_raw.push((line, toks));
            }
            other => {
                return Err(TableError::Parse {
                    line,
                    message: format!("unknown key `{other}`"),
                })
            }
        }
    }
    let names = names.ok_or(TableError::Missing("elements"))?;
    if names.is_empty() {
        return Err(TableError::Empty);
    }
    let mut index = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if index.insert(n.clone(), i).is_some() {
            return Err(TableError::DuplicateId(n.clone()));
        }
    }
    let look = |s: &str| index.get(s).copied().ok_or_else(|| TableError::UnknownId(s.to_string()));
    let zero = look(&zero.ok_or(TableError::Missing("zero"))?)?;
    let one = look(&one.ok_or(TableError::Missing("one"))?)?;
    let triples = triples_raw
        .iter()
        .map(|(l, t)| Ok((*l, look(&t[0])?, look(&t[1])?, look(&t[2])?)))
        .collect::<Result<Vec<_>, TableError>>()?;
    let pairs = pairs_raw
        .iter()
        .map(|(l, t)| Ok((*l, look(&t[0])?, look(&t[1])?)))
        .collect::<Result<Vec<_>, TableError>>()?;
    Ok(RawTable {
        names,
        index,
        zero,
        one,
        triples,
        pairs,
    })
}

fn header(names: &[String], zero: Elem, one: Elem) -> String {
    format!(
        "elements: {}\nzero: {}\none: {}\n",
        names.join(" "),
        names[zero],
        names[one]
    )
}

/// A finite partial-sum structure ⟨A, ⊞, 1, 0⟩.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialTable {
    names: Vec<String>,
    index: HashMap<String, Elem>,
    zero: Elem,
    one: Elem,
    sum: Vec<Vec<Option<Elem>>>,
}

/// Axioms checked on partial tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PartialAxiom {
    WeakCommutativity,
    WeakAssociativity,
    StrongExcludedMiddle,
    WeakConsistency,
    StrongConsistency,
    InducedPartialOrder,
    Orthocomplementation,
    OrthogonalSups,
    Orthomodularity,
}

impl PartialAxiom {
    pub fn as_str(self) -> &'static str {
        match self {
            PartialAxiom::WeakCommutativity => "weak commutativity",
            PartialAxiom::WeakAssociativity => "weak associativity",
            PartialAxiom::StrongExcludedMiddle => "strong excluded middle",
            PartialAxiom::WeakConsistency => "weak consistency",
            PartialAxiom::StrongConsistency => "strong consistency",
            PartialAxiom::InducedPartialOrder => "induced order is a partial order",
            PartialAxiom::Orthocomplementation => "orthocomplementation",
            PartialAxiom::OrthogonalSups => "orthogonal sups",
            PartialAxiom::Orthomodularity => "orthomodularity",
        }
    }
}

/// Classes of partial-sum structures, from weakest to strongest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PartialClass {
    EffectAlgebra,
    Orthoalgebra,
    OrthomodularPoset,
}

impl PartialClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PartialClass::EffectAlgebra => "effect-algebra",
            PartialClass::Orthoalgebra => "orthoalgebra",
            PartialClass::OrthomodularPoset => "orthomodular-poset",
        }
    }
}

/// A failed axiom with the element names that witness it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableFailure<A> {
    pub axiom: A,
    pub witness: Vec<String>,
}

/// Outcome of [`PartialTable::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialReport {
    /// Strongest class the table belongs to, if any.
    pub class: Option<PartialClass>,
    pub failures: Vec<TableFailure<PartialAxiom>>,
}

impl PartialReport {
    pub fn is(&self, class: PartialClass) -> bool {
        self.class.is_some_and(|c| c >= class)
    }

    pub fn failure(&self, axiom: PartialAxiom) -> Option<&TableFailure<PartialAxiom>> {
        self.failures.iter().find(|f| f.axiom == axiom)
    }
}

impl PartialTable {
    /// Builds a table from names and the defined entries `(a, b, a ⊞ b)`.
    pub fn new(
        names: Vec<String>,
        zero: Elem,
        one: Elem,
        entries: &[(Elem, Elem, Elem)],
    ) -> Result<Self, TableError> {
        if names.is_empty() {
            return Err(TableError::Empty);
        }
        let n = names.len();
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(TableError::DuplicateId(name.clone()));
            }
        }
        let mut sum = vec![vec![None; n]; n];
        for &(a, b, c) in entries {
            match sum[a][b] {
                Some(d) if d != c => {
                    return Err(TableError::Conflict {
                        table: "psum",
                        id: format!("`{}` `{}`", names[a], names[b]),
                    })
                }
                _ => sum[a][b] = Some(c),
            }
        }
        Ok(PartialTable {
            names,
            index,
            zero,
            one,
            sum,
        })
    }

    /// Parses the `psum: x y z` table format.
    pub fn parse(text: &str) -> Result<Self, TableError> {
        let raw = parse_raw(text, "psum", None)?;
        let entries: Vec<_> = raw.triples.iter().map(|&(_, a, b, c)| (a, b, c)).collect();
        PartialTable::new(raw.names, raw.zero, raw.one, &entries)
    }

    /// The partial sum of an orthomodular structure: a ⊞ b = a ⊔ b whenever
    /// a ⊑ b′.
    pub fn from_orthomodular(s: &FiniteStructure) -> Result<Self, TableError> {
        let mut entries = Vec::new();
        for a in s.elements() {
            for b in s.elements() {
                if s.leq(a, s.inv(b)) {
                    let j = s
                        .join(a, b)
                        .ok_or_else(|| TableError::NoJoin(s.name(a).into(), s.name(b).into()))?;
                    entries.push((a, b, j));
                }
            }
        }
        PartialTable::new(s.names().to_vec(), s.zero(), s.one(), &entries)
    }

    pub fn to_text(&self) -> String {
        let mut out = header(&self.names, self.zero, self.one);
        for a in self.elements() {
            for b in self.elements() {
                if let Some(c) = self.sum(a, b) {
                    out.push_str(&format!("psum: {} {} {}\n", self.names[a], self.names[b], self.names[c]));
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.names[a]
    }

    pub fn id(&self, name: &str) -> Option<Elem> {
        self.index.get(name).copied()
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    /// a ⊞ b when defined.
    pub fn sum(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.sum[a][b]
    }

    /// a ⊥ b iff a ⊞ b is defined.
    pub fn orthogonal(&self, a: Elem, b: Elem) -> bool {
        self.sum[a][b].is_some()
    }

    /// The unique x with a ⊞ x = 1, if there is exactly one.
    pub fn complement(&self, a: Elem) -> Option<Elem> {
        let mut it = self.elements().filter(|&x| self.sum(a, x) == Some(self.one));
        match (it.next(), it.next()) {
            (Some(x), None) => Some(x),
            _ => None,
        }
    }

    /// a ⊑ b iff b = a ⊞ c for some c.
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.elements().any(|c| self.sum(a, c) == Some(b))
    }

    fn wit(&self, xs: &[Elem]) -> Vec<String> {
        xs.iter().map(|&x| self.names[x].clone()).collect()
    }

    /// Checks the partial-sum axioms and reports the strongest class.
    pub fn validate(&self) -> PartialReport {
        let mut failures = Vec::new();
        let fail = |axiom, w: Vec<String>, failures: &mut Vec<TableFailure<PartialAxiom>>| {
            if !failures.iter().any(|f: &TableFailure<PartialAxiom>| f.axiom == axiom) {
                failures.push(TableFailure { axiom, witness: w });
            }
        };
        let els: Vec<Elem> = self.elements().collect();
        for &a in &els {
            for &b in &els {
                if let Some(c) = self.sum(a, b) {
                    if self.sum(b, a) != Some(c) {
                        fail(PartialAxiom::WeakCommutativity, self.wit(&[a, b]), &mut failures);
                    }
                }
            }
        }
        for &a in &els {
            for &b in &els {
                for &c in &els {
                    let Some(bc) = self.sum(b, c) else { continue };
                    let Some(lhs) = self.sum(a, bc) else { continue };
                    let rhs = self.sum(a, b).and_then(|ab| self.sum(ab, c));
                    if rhs != Some(lhs) {
                        fail(PartialAxiom::WeakAssociativity, self.wit(&[a, b, c]), &mut failures);
                    }
                }
            }
        }
        for &a in &els {
            if self.complement(a).is_none() {
                fail(PartialAxiom::StrongExcludedMiddle, self.wit(&[a]), &mut failures);
            }
            if self.orthogonal(a, self.one) && a != self.zero {
                fail(PartialAxiom::WeakConsistency, self.wit(&[a]), &mut failures);
            }
        }
        let effect = failures.is_empty();
        for &a in &els {
            if self.orthogonal(a, a) && a != self.zero {
                fail(PartialAxiom::StrongConsistency, self.wit(&[a]), &mut failures);
            }
        }
        let ortho = effect && failures.is_empty();
        let omp = ortho && self.check_omp(&mut |ax, w| fail(ax, w, &mut failures));
        let class = if omp {
            Some(PartialClass::OrthomodularPoset)
        } else if ortho {
            Some(PartialClass::Orthoalgebra)
        } else if effect {
            Some(PartialClass::EffectAlgebra)
        } else {
            None
        };
        PartialReport { class, failures }
    }

    /// Orthomodular-poset conditions on the induced order; assumes the table
    /// is an orthoalgebra.
    fn check_omp(&self, fail: &mut dyn FnMut(PartialAxiom, Vec<String>)) -> bool {
        let s = match self.to_structure() {
            Ok(s) => s,
            Err(_) => {
                fail(PartialAxiom::InducedPartialOrder, vec![]);
                return false;
            }
        };
        let mut ok = true;
        for a in s.elements() {
            for b in s.elements() {
                if s.leq(a, b) && !s.leq(s.inv(b), s.inv(a)) {
                    fail(PartialAxiom::Orthocomplementation, self.wit(&[a, b]));
                    ok = false;
                }
                if s.meet(a, s.inv(a)) != Some(s.zero()) {
                    fail(PartialAxiom::Orthocomplementation, self.wit(&[a]));
                    ok = false;
                }
                if let Some(c) = self.sum(a, b) {
                    if s.join(a, b) != Some(c) {
                        fail(PartialAxiom::OrthogonalSups, self.wit(&[a, b]));
                        ok = false;
                    }
                }
                if s.leq(a, b) {
                    let rhs = s
                        .join(a, s.inv(b))
                        .and_then(|j| s.join(a, s.inv(j)));
                    if rhs != Some(b) {
                        fail(PartialAxiom::Orthomodularity, self.wit(&[a, b]));
                        ok = false;
                    }
                }
            }
        }
        ok
    }

    /// The induced bounded poset with the generalized complement, as a
    /// finite structure.
    pub fn to_structure(&self) -> Result<FiniteStructure, TableError> {
        let inv = self
            .elements()
            .map(|a| self.complement(a).ok_or_else(|| TableError::NoComplement(self.names[a].clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let mut le = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                if self.leq(a, b) {
                    le.push((a, b));
                }
            }
        }
        Ok(FiniteStructure::new(self.names.clone(), &le, inv, None)?)
    }

    /// The total extension B^qmv: a ⊕ b = a ⊞ b when defined and 1 otherwise.
    pub fn to_qmv(&self) -> Result<QmvTable, TableError> {
        let star = self
            .elements()
            .map(|a| self.complement(a).ok_or_else(|| TableError::NoComplement(self.names[a].clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let oplus = self
            .elements()
            .map(|a| self.elements().map(|b| self.sum(a, b).unwrap_or(self.one)).collect())
            .collect();
        Ok(QmvTable {
            names: self.names.clone(),
            index: self.index.clone(),
            zero: self.zero,
            one: self.one,
            oplus,
            star,
        })
    }

    /// Whether a ⪯ b in B^qmv implies a ⊑ b in B.
    pub fn order_compatible(&self) -> Result<bool, TableError> {
        let q = self.to_qmv()?;
        Ok(self
            .elements()
            .all(|a| self.elements().all(|b| !q.preceq(a, b) || self.leq(a, b))))
    }
}

/// A finite total structure ⟨M, ⊕, *, 1, 0⟩.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QmvTable {
    names: Vec<String>,
    index: HashMap<String, Elem>,
    zero: Elem,
    one: Elem,
    oplus: Vec<Vec<Elem>>,
    star: Vec<Elem>,
}

/// Axioms checked on total tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QmvAxiom {
    Qmv1,
    Qmv2,
    Qmv3,
    Qmv4,
    Qmv5,
    Qmv6,
    Qmv7,
    Mv1,
    Mv3,
    Mv8,
}

impl QmvAxiom {
    pub fn as_str(self) -> &'static str {
        match self {
            QmvAxiom::Qmv1 => "QMV1",
            QmvAxiom::Qmv2 => "QMV2",
            QmvAxiom::Qmv3 => "QMV3",
            QmvAxiom::Qmv4 => "QMV4",
            QmvAxiom::Qmv5 => "QMV5",
            QmvAxiom::Qmv6 => "QMV6",
            QmvAxiom::Qmv7 => "QMV7",
            QmvAxiom::Mv1 => "MV1",
            QmvAxiom::Mv3 => "MV3",
            QmvAxiom::Mv8 => "MV8",
        }
    }
}

/// Outcome of [`QmvTable::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QmvReport {
    pub qmv: bool,
    pub mv: bool,
    pub failures: Vec<TableFailure<QmvAxiom>>,
}

impl QmvReport {
    pub fn failure(&self, axiom: QmvAxiom) -> Option<&TableFailure<QmvAxiom>> {
        self.failures.iter().find(|f| f.axiom == axiom)
    }
}

impl QmvTable {
    /// Builds a table from names, a total ⊕ table and a total * table.
    pub fn new(
        names: Vec<String>,
        zero: Elem,
        one: Elem,
        oplus: Vec<Vec<Elem>>,
        star: Vec<Elem>,
    ) -> Result<Self, TableError> {
        if names.is_empty() {
            return Err(TableError::Empty);
        }
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(TableError::DuplicateId(name.clone()));
            }
        }
        Ok(QmvTable {
            names,
            index,
            zero,
            one,
            oplus,
            star,
        })
    }

    /// Parses the `oplus: x y z` / `star: x y` table format.
    pub fn parse(text: &str) -> Result<Self, TableError> {
        let raw = parse_raw(text, "oplus", Some("star"))?;
        let n = raw.names.len();
        let mut oplus = vec![vec![None; n]; n];
        for &(_, a, b, c) in &raw.triples {
            if oplus[a][b].is_some_and(|d| d != c) {
                return Err(TableError::Conflict {
                    table: "oplus",
                    id: format!("`{}` `{}`", raw.names[a], raw.names[b]),
                });
            }
            oplus[a][b] = Some(c);
        }
        let mut star = vec![None; n];
        for &(_, a, b) in &raw.pairs {
            if star[a].is_some_and(|d| d != b) {
                return Err(TableError::Conflict {
                    table: "star",
                    id: format!("`{}`", raw.names[a]),
                });
            }
            star[a] = Some(b);
        }
        let oplus = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        oplus[a][b].ok_or_else(|| TableError::NotTotal {
                            table: "oplus",
                            id: format!("`{}` `{}`", raw.names[a], raw.names[b]),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let star = (0..n)
            .map(|a| {
                star[a].ok_or_else(|| TableError::NotTotal {
                    table: "star",
                    id: format!("`{}`", raw.names[a]),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let _ = raw.index;
        QmvTable::new(raw.names, raw.zero, raw.one, oplus, star)
    }

    pub fn to_text(&self) -> String {
        let mut out = header(&self.names, self.zero, self.one);
        for a in self.elements() {
            for b in self.elements() {
                out.push_str(&format!(
                    "oplus: {} {} {}\n",
                    self.names[a],
                    self.names[b],
                    self.names[self.oplus(a, b)]
                ));
            }
        }
        for a in self.elements() {
            out.push_str(&format!("star: {} {}\n", self.names[a], self.names[self.star(a)]));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.names[a]
    }

    pub fn id(&self, name: &str) -> Option<Elem> {
        self.index.get(name).copied()
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn oplus(&self, a: Elem, b: Elem) -> Elem {
        self.oplus[a][b]
    }

    pub fn star(&self, a: Elem) -> Elem {
        self.star[a]
    }

    /// a ⊙ b = (a* ⊕ b*)*.
    pub fn odot(&self, a: Elem, b: Elem) -> Elem {
        self.star(self.oplus(self.star(a), self.star(b)))
    }

    /// a ⩓ b = (a ⊕ b*) ⊙ b.
    pub fn et(&self, a: Elem, b: Elem) -> Elem {
        self.odot(self.oplus(a, self.star(b)), b)
    }

    /// a ⩒ b = (a ⊙ b*) ⊕ b.
    pub fn vel(&self, a: Elem, b: Elem) -> Elem {
        self.oplus(self.odot(a, self.star(b)), b)
    }

    /// a ⪯ b iff a ⩓ b = a.
    pub fn preceq(&self, a: Elem, b: Elem) -> bool {
        self.et(a, b) == a
    }

    fn wit(&self, xs: &[Elem]) -> Vec<String> {
        xs.iter().map(|&x| self.names[x].clone()).collect()
    }

    /// Exhaustive check of QMV1–QMV7 and of the extra MV axioms.
    pub fn validate(&self) -> QmvReport {
        let mut failures: Vec<TableFailure<QmvAxiom>> = Vec::new();
        let mut fail = |axiom: QmvAxiom, w: Vec<String>| {
            if !failures.iter().any(|f| f.axiom == axiom) {
                failures.push(TableFailure { axiom, witness: w });
            }
        };
        let (z, o) = (self.zero, self.one);
        if self.star(z) != o {
            fail(QmvAxiom::Qmv6, vec![]);
        }
        for a in self.elements() {
            if self.oplus(a, self.star(a)) != o {
                fail(QmvAxiom::Qmv2, self.wit(&[a]));
            }
            if self.oplus(a, z) != a {
                fail(QmvAxiom::Qmv3, self.wit(&[a]));
            }
            if self.oplus(a, o) != o {
                fail(QmvAxiom::Qmv4, self.wit(&[a]));
            }
            if self.star(self.star(a)) != a {
                fail(QmvAxiom::Qmv5, self.wit(&[a]));
            }
            for b in self.elements() {
                if self.oplus(a, b) != self.oplus(b, a) {
                    fail(QmvAxiom::Mv3, self.wit(&[a, b]));
                }
                let l = self.oplus(self.star(self.oplus(self.star(a), b)), b);
                let r = self.oplus(self.star(self.oplus(a, self.star(b))), a);
                if l != r {
                    fail(QmvAxiom::Mv8, self.wit(&[a, b]));
                }
                for c in self.elements() {
                    if self.oplus(a, self.oplus(b, c)) != self.oplus(self.oplus(b, a), c) {
                        fail(QmvAxiom::Qmv1, self.wit(&[a, b, c]));
                    }
                    if self.oplus(self.oplus(a, b), c) != self.oplus(a, self.oplus(b, c)) {
                        fail(QmvAxiom::Mv1, self.wit(&[a, b, c]));
                    }
                    let sa = self.star(a);
                    let l = self.oplus(a, self.et(self.et(sa, b), self.et(c, sa)));
                    let r = self.et(self.oplus(a, b), self.oplus(a, c));
                    if l != r {
                        fail(QmvAxiom::Qmv7, self.wit(&[a, b, c]));
                    }
                }
            }
        }
        let is_qmv_axiom = |a: QmvAxiom| !matches!(a, QmvAxiom::Mv1 | QmvAxiom::Mv3 | QmvAxiom::Mv8);
        let qmv = !failures.iter().any(|f| is_qmv_axiom(f.axiom));
        let mv = failures.is_empty();
        QmvReport { qmv, mv, failures }
    }

    /// For all a, b: a ⩓ b = b or b ⩓ a = a.
    pub fn weakly_linear(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.et(a, b) == b || self.et(b, a) == a))
    }

    /// For all a, b: a ⩓ b ∈ {a, b}.
    pub fn quasi_linear(&self) -> bool {
        self.elements().all(|a| {
            self.elements().all(|b| {
                let e = self.et(a, b);
                e == a || e == b
            })
        })
    }

    /// Whether ⩓ is commutative.
    pub fn et_commutative(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.et(a, b) == self.et(b, a)))
    }

    /// Whether ⪯ is a total order.
    pub fn totally_ordered(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.preceq(a, b) || self.preceq(b, a)))
    }

    /// First triple violating a = (a ⊕ (c ⊙ b*)) ⩓ (a ⊕ (c* ⊙ b)), if any.
    pub fn weak_linearity_equation_failure(&self) -> Option<(Elem, Elem, Elem)> {
        for a in self.elements() {
            for b in self.elements() {
                for c in self.elements() {
                    let l = self.oplus(a, self.odot(c, self.star(b)));
                    let r = self.oplus(a, self.odot(self.star(c), b));
                    if self.et(l, r) != a {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// The partial structure M^ea: a ⊕̄ b = a ⊕ b, defined iff a ⪯ b*.
    pub fn to_ea(&self) -> PartialTable {
        let mut entries = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                if self.preceq(a, self.star(b)) {
                    entries.push((a, b, self.oplus(a, b)));
                }
            }
        }
        PartialTable::new(self.names.clone(), self.zero, self.one, &entries)
            .expect("entries of a total table cannot conflict")
    }
}

/// A map between two QMV tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    pub map: Vec<Elem>,
}

impl Homomorphism {
    /// Builds a map from `(source name, target name)` pairs.
    pub fn from_names(src: &QmvTable, tgt: &QmvTable, pairs: &[(&str, &str)]) -> Result<Self, TableError> {
        let mut map = vec![None; src.len()];
        for &(x, y) in pairs {
            let a = src.id(x).ok_or_else(|| TableError::UnknownId(x.into()))?;
            let b = tgt.id(y).ok_or_else(|| TableError::UnknownId(y.into()))?;
            map[a] = Some(b);
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(a, m)| {
                m.ok_or_else(|| TableError::NotTotal {
                    table: "map",
                    id: format!("`{}`", src.name(a)),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Homomorphism { map })
    }

    pub fn apply(&self, a: Elem) -> Elem {
        self.map[a]
    }

    /// Whether the map preserves ⊕, *, 0 and 1.
    pub fn is_homomorphism(&self, src: &QmvTable, tgt: &QmvTable) -> bool {
        let h = |a| self.map[a];
        h(src.zero()) == tgt.zero()
            && h(src.one()) == tgt.one()
            && src.elements().all(|a| h(src.star(a)) == tgt.star(h(a)))
            && src
                .elements()
                .all(|a| src.elements().all(|b| h(src.oplus(a, b)) == tgt.oplus(h(a), h(b))))
    }

    /// h(t(x, y)) = t(h x, h y) for all x, y.
    pub fn transports(&self, src: &QmvTable, tgt: &QmvTable, t: &Term) -> bool {
        src.elements().all(|x| {
            src.elements()
                .all(|y| self.apply(t.eval(src, x, y)) == t.eval(tgt, self.apply(x), self.apply(y)))
        })
    }
}

/// The M4 → M3 map sending 0, a, b, 1 to 0, ½, ½, 1.
pub fn m4_to_m3(m4: &QmvTable, m3: &QmvTable) -> Result<Homomorphism, TableError> {
    Homomorphism::from_names(m4, m3, &[("0", "0"), ("a", "1/2"), ("b", "1/2"), ("1", "1")])
}

/// Binary terms over variables a, b built from 0, 1, ⊕ and *.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    A,
    B,
    Zero,
    One,
    Oplus(Box<Term>, Box<Term>),
    Star(Box<Term>),
}

impl Term {
    pub fn eval(&self, m: &QmvTable, x: Elem, y: Elem) -> Elem {
        match self {
            Term::A => x,
            Term::B => y,
            Term::Zero => m.zero(),
            Term::One => m.one(),
            Term::Oplus(s, t) => m.oplus(s.eval(m, x, y), t.eval(m, x, y)),
            Term::Star(s) => m.star(s.eval(m, x, y)),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Oplus(s, t) => 1 + s.depth().max(t.depth()),
            Term::Star(s) => 1 + s.depth(),
            _ => 0,
        }
    }

    /// The table of the term function, indexed by x·n + y.
    pub fn table(&self, m: &QmvTable) -> Vec<Elem> {
        m.elements()
            .flat_map(|x| m.elements().map(move |y| (x, y)))
            .map(|(x, y)| self.eval(m, x, y))
            .collect()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::A => f.write_str("a"),
            Term::B => f.write_str("b"),
            Term::Zero => f.write_str("0"),
            Term::One => f.write_str("1"),
            Term::Star(s) => match **s {
                Term::Oplus(..) => write!(f, "({s})*"),
                _ => write!(f, "{s}*"),
            },
            Term::Oplus(s, t) => match **t {
                Term::Oplus(..) => write!(f, "{s} + ({t})"),
                _ => write!(f, "{s} + {t}"),
            },
        }
    }
}

/// Term functions of a QMV table up to a depth bound, one representative per
/// distinct table, in order of increasing depth.
pub struct TermClosure {
    pub terms: Vec<(Term, Vec<Elem>)>,
    /// True when the last layer added no new function, so deeper terms add
    /// nothing either.
    pub saturated: bool,
}

#[derive(Clone, Copy)]
enum TermNode {
    Leaf(u8),
    Star(usize),
    Oplus(usize, usize),
}

fn build_term(nodes: &[TermNode], i: usize) -> Term {
    match nodes[i] {
        TermNode::Leaf(0) => Term::A,
        TermNode::Leaf(1) => Term::B,
        TermNode::Leaf(2) => Term::Zero,
        TermNode::Leaf(_) => Term::One,
        TermNode::Star(j) => Term::Star(Box::new(build_term(nodes, j))),
        TermNode::Oplus(j, k) => Term::Oplus(Box::new(build_term(nodes, j)), Box::new(build_term(nodes, k))),
    }
}

/// Enumerates term functions modulo table equivalence.
pub fn term_closure(m: &QmvTable, max_depth: usize) -> TermClosure {
    let mut seen: HashMap<Vec<Elem>, usize> = HashMap::new();
    let mut nodes: Vec<TermNode> = Vec::new();
    let mut tables: Vec<Vec<Elem>> = Vec::new();
    let mut push = |node: TermNode, tab: Vec<Elem>, nodes: &mut Vec<TermNode>, tables: &mut Vec<Vec<Elem>>| {
        if seen.contains_key(&tab) {
            return false;
        }
        seen.insert(tab.clone(), nodes.len());
        nodes.push(node);
        tables.push(tab);
        true
    };
    for (k, t) in [Term::A, Term::B, Term::Zero, Term::One].iter().enumerate() {
        push(TermNode::Leaf(k as u8), t.table(m), &mut nodes, &mut tables);
    }
    let mut saturated = false;
    for _ in 1..=max_depth {
        let current = nodes.len();
        let mut added = false;
        for i in 0..current {
            let tab = tables[i].iter().map(|&x| m.star(x)).collect();
            added |= push(TermNode::Star(i), tab, &mut nodes, &mut tables);
        }
        for k in 0..current {
            for j in 0..current {
                let tab = tables[j].iter().zip(&tables[k]).map(|(&x, &y)| m.oplus(x, y)).collect();
                added |= push(TermNode::Oplus(j, k), tab, &mut nodes, &mut tables);
            }
        }
        if !added {
            saturated = true;
            break;
        }
    }
    let terms = (0..nodes.len())
        .map(|i| (build_term(&nodes, i), std::mem::take(&mut tables[i])))
        .collect();
    TermClosure { terms, saturated }
}

/// Result of [`conditional_search`].
pub struct ConditionalSearch {
    pub found: Option<Term>,
    /// Number of distinct term functions examined.
    pub functions: usize,
    /// True when every term function of the table was examined.
    pub exhaustive: bool,
}

/// Searches for a term t with t(x, y) = 1 iff x ⪯ y.
pub fn conditional_search(m: &QmvTable, max_depth: usize) -> ConditionalSearch {
    let closure = term_closure(m, max_depth);
    let good = |tab: &[Elem]| {
        m.elements().all(|x| {
            m.elements()
                .all(|y| (tab[x * m.len() + y] == m.one()) == m.preceq(x, y))
        })
    };
    let found = closure
        .terms
        .iter()
        .filter(|(_, tab)| good(tab))
        .min_by_key(|(t, _)| t.depth())
        .map(|(t, _)| t.clone());
    ConditionalSearch {
        found,
        functions: closure.terms.len(),
        exhaustive: closure.saturated,
    }
}

/// How undefined partial sums are valued.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValuationMode {
    /// One value per formula: equal formulas get equal values.
    #[default]
    PerFormula,
    /// Each occurrence of an undefined sum is valued independently.
    PerOccurrence,
}

#[derive(Debug, Clone)]
enum Node {
    Lit(usize),
    Not(usize),
    Aut(usize, usize),
}

/// Flattened formulas for valuation enumeration.
struct Arena {
    nodes: Vec<Node>,
    literals: Vec<String>,
    roots: Vec<usize>,
}

impl Arena {
    fn build(formulas: &[Formula], mode: ValuationMode) -> Arena {
        let mut arena = Arena {
            nodes: Vec::new(),
            literals: Vec::new(),
            roots: Vec::new(),
        };
        let mut memo: HashMap<Formula, usize> = HashMap::new();
        for f in formulas {
            let r = arena.add(&f.expand(), mode, &mut memo);
            arena.roots.push(r);
        }
        arena
    }

    fn add(&mut self, f: &Formula, mode: ValuationMode, memo: &mut HashMap<Formula, usize>) -> usize {
        let share = mode == ValuationMode::PerFormula || matches!(f, Formula::Lit(_));
        if share {
            if let Some(&i) = memo.get(f) {
                return i;
            }
        }
        let node = match f {
            Formula::Lit(n) => {
                let k = self.literals.len();
                self.literals.push(n.clone());
                Node::Lit(k)
            }
            Formula::Not(a) => Node::Not(self.add(a, mode, memo)),
            Formula::Aut(x, y) => {
                let i = self.add(x, mode, memo);
                let j = self.add(y, mode, memo);
                Node::Aut(i, j)
            }
            other => panic!("`{other}` is not a partial-sum formula"),
        };
        self.nodes.push(node);
        let i = self.nodes.len() - 1;
        if share {
            memo.insert(f.clone(), i);
        }
        i
    }
}

/// One valuation found during enumeration: values of the input formulas and
/// of the literals.
pub struct Valuation<'a> {
    pub roots: Vec<Elem>,
    pub literals: Vec<(&'a str, Elem)>,
}

/// Calls `visit` for every realization valuation of `formulas` over `b`;
/// stops early when `visit` returns true and reports whether it did.
pub fn search_partial_valuations(
    b: &PartialTable,
    formulas: &[Formula],
    mode: ValuationMode,
    visit: &mut dyn FnMut(&Valuation) -> bool,
) -> bool {
    let arena = Arena::build(formulas, mode);
    let comp: Vec<Option<Elem>> = b.elements().map(|a| b.complement(a)).collect();
    let mut vals = vec![0; arena.nodes.len()];
    fn go(
        k: usize,
        arena: &Arena,
        b: &PartialTable,
        comp: &[Option<Elem>],
        vals: &mut Vec<Elem>,
        visit: &mut dyn FnMut(&Valuation) -> bool,
    ) -> bool {
        if k == arena.nodes.len() {
            let lits = arena
                .nodes
                .iter()
                .enumerate()
                .filter_map(|(i, n)| match n {
                    Node::Lit(l) => Some((arena.literals[*l].as_str(), vals[i])),
                    _ => None,
                })
                .collect();
            let v = Valuation {
                roots: arena.roots.iter().map(|&r| vals[r]).collect(),
                literals: lits,
            };
            return visit(&v);
        }
        let choices: Vec<Elem> = match arena.nodes[k] {
            Node::Lit(_) => b.elements().collect(),
            Node::Not(a) => match comp[vals[a]] {
                Some(c) => vec![c],
                None => return false,
            },
            Node::Aut(x, y) => match b.sum(vals[x], vals[y]) {
                Some(c) => vec![c],
                None => b.elements().collect(),
            },
        };
        for c in choices {
            vals[k] = c;
            if go(k + 1, arena, b, comp, vals, visit) {
                return true;
            }
        }
        false
    }
    go(0, &arena, b, &comp, &mut vals, visit)
}

/// A valuation refuting a consequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Countermodel {
    /// Index of the structure in the list that was searched.
    pub structure: usize,
    /// Literal values by element name.
    pub literals: Vec<(String, String)>,
    /// Values of the premises followed by the value of the conclusion.
    pub values: Vec<String>,
}

fn lower_bounds_below(
    elements: std::ops::Range<Elem>,
    leq: &dyn Fn(Elem, Elem) -> bool,
    premises: &[Elem],
    conclusion: Elem,
) -> bool {
    elements
        .filter(|&c| premises.iter().all(|&p| leq(c, p)))
        .all(|c| leq(c, conclusion))
}

/// Partial-sum consequence T ⊨ α over the given structures: at every
/// valuation, every common lower bound of the premises lies below the
/// conclusion.
pub fn paql_consequence(
    structures: &[PartialTable],
    mode: ValuationMode,
    premises: &[Formula],
    conclusion: &Formula,
) -> Result<(), Countermodel> {
    let mut all = premises.to_vec();
    all.push(conclusion.clone());
    for (i, b) in structures.iter().enumerate() {
        let order: Vec<Vec<bool>> = b
            .elements()
            .map(|x| b.elements().map(|y| b.leq(x, y)).collect())
            .collect();
        let leq = |x: Elem, y: Elem| order[x][y];
        let mut found = None;
        search_partial_valuations(b, &all, mode, &mut |v| {
            let (prem, concl) = v.roots.split_at(premises.len());
            if lower_bounds_below(b.elements(), &leq, prem, concl[0]) {
                false
            } else {
                found = Some(Countermodel {
                    structure: i,
                    literals: v.literals.iter().map(|(l, e)| (l.to_string(), b.name(*e).to_string())).collect(),
                    values: v.roots.iter().map(|&e| b.name(e).to_string()).collect(),
                });
                true
            }
        });
        if let Some(c) = found {
            return Err(c);
        }
    }
    Ok(())
}

/// Realization-level soundness of a single-premise rule schema instance:
/// searches a valuation where every premise sequent α ⊢ β has v(α) ⊑ v(β)
/// but the conclusion sequent does not.
pub fn paql_rule_countermodel(
    b: &PartialTable,
    mode: ValuationMode,
    premises: &[(Formula, Formula)],
    conclusion: &(Formula, Formula),
) -> Option<Countermodel> {
    let mut all = Vec::new();
    for (x, y) in premises.iter().chain(std::iter::once(conclusion)) {
        all.push(x.clone());
        all.push(y.clone());
    }
    let mut found = None;
    search_partial_valuations(b, &all, mode, &mut |v| {
        let holds = |k: usize| b.leq(v.roots[2 * k], v.roots[2 * k + 1]);
        if (0..premises.len()).all(holds) && !holds(premises.len()) {
            found = Some(Countermodel {
                structure: 0,
                literals: v.literals.iter().map(|(l, e)| (l.to_string(), b.name(*e).to_string())).collect(),
                values: v.roots.iter().map(|&e| b.name(e).to_string()).collect(),
            });
            true
        } else {
            false
        }
    });
    found
}

/// Evaluates a Łukasiewicz quantum-logic formula: ¬ is *, ⊻ is ⊕.
pub fn lql_evaluate(m: &QmvTable, v: &dyn Fn(&str) -> Elem, f: &Formula) -> Elem {
    fn ev(m: &QmvTable, v: &dyn Fn(&str) -> Elem, f: &Formula) -> Elem {
        match f {
            Formula::Lit(n) => v(n),
            Formula::Not(a) => m.star(ev(m, v, a)),
            Formula::Aut(x, y) => m.oplus(ev(m, v, x), ev(m, v, y)),
            other => panic!("`{other}` is not a primitive ŁQL formula"),
        }
    }
    ev(m, v, &f.expand())
}

/// ŁQL consequence over the given tables: at every valuation, every common
/// ⪯-lower bound of the premises is ⪯ the conclusion.
pub fn lql_consequence(tables: &[QmvTable], premises: &[Formula], conclusion: &Formula) -> Result<(), Countermodel> {
    let mut lits: Vec<String> = Vec::new();
    for f in premises.iter().chain(std::iter::once(conclusion)) {
        for l in f.literals() {
            if !lits.contains(&l) {
                lits.push(l);
            }
        }
    }
    for (i, m) in tables.iter().enumerate() {
        let n = m.len();
        let mut assign = vec![0usize; lits.len()];
        loop {
            let v = |name: &str| assign[lits.iter().position(|l| l == name).expect("literal collected")];
            let prem: Vec<Elem> = premises.iter().map(|p| lql_evaluate(m, &v, p)).collect();
            let concl = lql_evaluate(m, &v, conclusion);
            if !lower_bounds_below(m.elements(), &|x, y| m.preceq(x, y), &prem, concl) {
                let mut values: Vec<String> = prem.iter().map(|&e| m.name(e).to_string()).collect();
                values.push(m.name(concl).to_string());
                return Err(Countermodel {
                    structure: i,
                    literals: lits
                        .iter()
                        .zip(&assign)
                        .map(|(l, &e)| (l.clone(), m.name(e).to_string()))
                        .collect(),
                    values,
                });
            }
            let mut k = 0;
            while k < assign.len() {
                assign[k] += 1;
                if assign[k] < n {
                    break;
                }
                assign[k] = 0;
                k += 1;
            }
            if k == assign.len() {
                break;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::formula::{parse, Dialect};

    fn k5() -> PartialTable {
        catalog::partial_table("K5-PSUM").unwrap()
    }

    fn m3() -> QmvTable {
        catalog::qmv_table("M3").unwrap()
    }

    fn m4() -> QmvTable {
        catalog::qmv_table("M4").unwrap()
    }

    #[test]
    fn k5_is_effect_algebra_only() {
        let r = k5().validate();
        assert_eq!(r.class, Some(PartialClass::EffectAlgebra));
        assert_eq!(r.failure(PartialAxiom::StrongConsistency).unwrap().witness, vec!["1/4"]);
    }

    #[test]
    fn boolean_partial_sum_is_orthomodular_poset() {
        let b = catalog::partial_table("BOOL(2)-PSUM").unwrap();
        assert_eq!(b.validate().class, Some(PartialClass::OrthomodularPoset));
    }

    #[test]
    fn qmv_classification() {
        let r4 = m4().validate();
        assert!(r4.qmv && !r4.mv);
        assert!(r4.failure(QmvAxiom::Mv8).is_some());
        assert!(m4().quasi_linear());
        let r3 = m3().validate();
        assert!(r3.qmv && r3.mv);
        assert!(m3().totally_ordered());
    }

    #[test]
    fn transforms_round_trip() {
        let b = k5();
        let q = b.to_qmv().unwrap();
        assert!(q.validate().qmv && q.quasi_linear());
        assert_eq!(q.to_ea(), b);
        assert!(b.order_compatible().unwrap());
        let m = m4();
        let ea = m.to_ea();
        assert_eq!(ea.validate().class.map(|c| c >= PartialClass::EffectAlgebra), Some(true));
        assert_eq!(ea.to_qmv().unwrap(), m);
    }

    #[test]
    fn boolean_qmv_order_is_boolean_order() {
        let b = catalog::partial_table("BOOL(2)-PSUM").unwrap();
        let q = b.to_qmv().unwrap();
        let s = b.to_structure().unwrap();
        for x in b.elements() {
            for y in b.elements() {
                assert_eq!(q.preceq(x, y), s.leq(x, y));
            }
        }
    }

    #[test]
    fn table_errors() {
        assert!(matches!(QmvTable::parse("elements: 0 1\nzero: 0\none: 1\n"), Err(TableError::NotTotal { .. })));
        assert!(matches!(PartialTable::parse("elements: 0 1\nzero: 0\none: x\n"), Err(TableError::UnknownId(_))));
        assert!(matches!(PartialTable::parse("elements: 0 1\nzero: 0\n"), Err(TableError::Missing("one"))));
        assert!(matches!(PartialTable::parse("elements: 0 1\nzero 0\n"), Err(TableError::Parse { line: 2, .. })));
    }

    #[test]
    fn text_round_trips() {
        assert_eq!(PartialTable::parse(&k5().to_text()).unwrap(), k5());
        assert_eq!(QmvTable::parse(&m4().to_text()).unwrap(), m4());
    }

    #[test]
    fn conditionals() {
        let s3 = conditional_search(&m3(), 3);
        let t = s3.found.expect("M3 has a good conditional");
        assert_eq!(t.to_string(), "a* + b");
        let s4 = conditional_search(&m4(), 4);
        assert!(s4.found.is_none());
        assert!(!s4.exhaustive);
    }

    #[test]
    fn m4_term_closure_is_exhausted() {
        let s = conditional_search(&m4(), 12);
        assert!(s.found.is_none());
        assert!(s.exhaustive);
        assert_eq!(s.functions, 5184);
    }

    #[test]
    fn homomorphism_transport() {
        let (m4, m3) = (m4(), m3());
        let h = m4_to_m3(&m4, &m3).unwrap();
        assert!(h.is_homomorphism(&m4, &m3));
        for (t, _) in term_closure(&m4, 3).terms {
            assert!(h.transports(&m4, &m3, &t), "{t}");
        }
    }

    #[test]
    fn lql_samples() {
        let m = m3();
        let half = m.id("1/2").unwrap();
        let f = parse(Dialect::Lql, "p + p").unwrap();
        assert_eq!(lql_evaluate(&m, &|_| half, &f), m.one());
        let g = parse(Dialect::Lql, "p + q").unwrap();
        for q in m.elements() {
            let v = |n: &str| if n == "p" { m.zero() } else { q };
            assert_eq!(lql_evaluate(&m, &v, &g), q);
        }
    }

    #[test]
    fn paql_samples() {
        let p = |s: &str| parse(Dialect::UPaql, s).unwrap();
        assert!(paql_consequence(&[k5()], ValuationMode::PerFormula, &[p("p")], &p("--p")).is_ok());
        let cm = paql_consequence(&[k5()], ValuationMode::PerFormula, &[p("p + q")], &p("p"));
        assert!(cm.is_err());
    }
}
