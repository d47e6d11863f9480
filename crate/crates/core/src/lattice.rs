//! Finite bounded involutive posets and lattices.
//!
//! A [`FiniteStructure`] stores its order as per-element down-set and up-set
//! bitmasks, so every structure has at most [`MAX_ELEMENTS`] elements. Meets
//! and joins are computed on demand and memoized. [`FiniteStructure::validate`]
//! classifies a structure into the strongest [`StructureClass`] whose axioms
//! hold and lists every failed axiom with a witness tuple.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

/// Index of an element inside its structure.
pub type Elem = usize;

/// Bitset of elements.
pub type Mask = u64;

/// Largest supported structure size.
pub const MAX_ELEMENTS: usize = 64;

/// Iterates the set bits of a mask in ascending order.
pub fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Mask with only bit `i` set.
#[inline]
pub fn bit(i: usize) -> Mask {
    1u64 << i
}

/// Structural problems that prevent a structure from being built at all.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate element id `{0}`")]
    DuplicateId(String),
    #[error("unknown element id `{0}`")]
    UnknownId(String),
    #[error("structure has no elements")]
    Empty,
    #[error("structure has {0} elements; at most 64 are supported")]
    TooLarge(usize),
    #[error("order is not antisymmetric: `{0}` and `{1}` are below each other")]
    NotAntisymmetric(String, String),
    #[error("order has no least element")]
    NoZero,
    #[error("order has no greatest element")]
    NoOne,
    #[error("declared {which} `{declared}` is not the {which} of the order")]
    WrongBound { which: &'static str, declared: String },
    #[error("reserved id `{0}` does not name the matching bound")]
    ReservedId(String),
    #[error("{table} table has no entry for `{id}`")]
    NotTotal { table: &'static str, id: String },
    #[error("{table} table has conflicting entries for `{id}`")]
    Conflict { table: &'static str, id: String },
}

/// The classes of finite structures the workbench distinguishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureClass {
    InvolutivePoset,
    InvolutiveLattice,
    RegularInvolutiveLattice,
    Ortholattice,
    OrthomodularLattice,
    BzPoset,
    BzLattice,
    Bz3Lattice,
}

impl StructureClass {
    pub const ALL: [StructureClass; 8] = [
        StructureClass::InvolutivePoset,
        StructureClass::InvolutiveLattice,
        StructureClass::RegularInvolutiveLattice,
        StructureClass::Ortholattice,
        StructureClass::OrthomodularLattice,
        StructureClass::BzPoset,
        StructureClass::BzLattice,
        StructureClass::Bz3Lattice,
    ];

    /// Immediate superclasses in the inclusion order.
    fn parents(self) -> &'static [StructureClass] {
        use StructureClass::*;
        match self {
            InvolutivePoset => &[],
            InvolutiveLattice => &[InvolutivePoset],
            RegularInvolutiveLattice => &[InvolutiveLattice],
            Ortholattice => &[RegularInvolutiveLattice],
            OrthomodularLattice => &[Ortholattice],
            BzPoset => &[InvolutivePoset],
            BzLattice => &[BzPoset, RegularInvolutiveLattice],
            Bz3Lattice => &[BzLattice],
        }
    }

    /// True when every structure of class `self` is also of class `other`.
    pub fn is_a(self, other: StructureClass) -> bool {
        self == other || self.parents().iter().any(|p| p.is_a(other))
    }

    pub fn as_str(self) -> &'static str {
        use StructureClass::*;
        match self {
            InvolutivePoset => "involutive-poset",
            InvolutiveLattice => "involutive-lattice",
            RegularInvolutiveLattice => "regular-involutive-lattice",
            Ortholattice => "ortholattice",
            OrthomodularLattice => "orthomodular-lattice",
            BzPoset => "bz-poset",
            BzLattice => "bz-lattice",
            Bz3Lattice => "bz3-lattice",
        }
    }

    pub fn parse(s: &str) -> Option<StructureClass> {
        StructureClass::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

impl fmt::Display for StructureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Individual axioms checked by [`FiniteStructure::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// a′′ = a.
    Involution,
    /// a ⊑ b implies b′ ⊑ a′.
    OrderReversing,
    /// Every pair has a meet and a join.
    Lattice,
    /// a ⊑ a′ and b ⊑ b′ imply a ⊑ b′.
    Regularity,
    /// The only common lower bound of a and a′ is 0.
    NonContradiction,
    /// a ⊓ (a′ ⊔ (a ⊓ b)) ⊑ b.
    Orthomodularity,
    /// The only common lower bound of a and a∼ is 0.
    BzNonContradiction,
    /// a ⊑ a∼∼.
    BzWeakDoubleNegation,
    /// a ⊑ b implies b∼ ⊑ a∼.
    BzOrderReversing,
    /// a∼′ = a∼∼.
    BzInterconnection,
    /// (a ⊓ b)∼ = a∼ ⊔ b∼.
    Bz3StrongDeMorgan,
    /// a ⊓ b∼∼ ⊑ a′∼ ⊔ b.
    Bz3Interconnection,
}

impl Axiom {
    pub fn as_str(self) -> &'static str {
        use Axiom::*;
        match self {
            Involution => "involution",
            OrderReversing => "order-reversing",
            Lattice => "lattice",
            Regularity => "regularity",
            NonContradiction => "non-contradiction",
            Orthomodularity => "orthomodularity",
            BzNonContradiction => "bz-non-contradiction",
            BzWeakDoubleNegation => "bz-weak-double-negation",
            BzOrderReversing => "bz-order-reversing",
            BzInterconnection => "bz-interconnection",
            Bz3StrongDeMorgan => "bz3-strong-de-morgan",
            Bz3Interconnection => "bz3-interconnection",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A failed axiom together with the elements that violate it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    pub witness: Vec<Elem>,
}

/// Result of [`FiniteStructure::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    /// Strongest class whose axioms all hold, `None` if not even an involutive poset.
    pub kind: Option<StructureClass>,
    /// Classification of the reduct that forgets the ∼ complement.
    pub inv_kind: Option<StructureClass>,
    pub failures: Vec<AxiomFailure>,
}

impl ValidationReport {
    pub fn is(&self, class: StructureClass) -> bool {
        self.kind.is_some_and(|k| k.is_a(class)) || self.inv_kind.is_some_and(|k| k.is_a(class))
    }

    pub fn failure(&self, axiom: Axiom) -> Option<&AxiomFailure> {
        self.failures.iter().find(|f| f.axiom == axiom)
    }
}

/// Outcome of checking one orthomodularity form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormResult {
    Holds,
    Fails(Vec<Elem>),
    /// A meet or join needed by the form is undefined for the given pair.
    Inapplicable(Vec<Elem>),
}

impl FormResult {
    pub fn holds(&self) -> bool {
        matches!(self, FormResult::Holds)
    }
    pub fn fails(&self) -> bool {
        matches!(self, FormResult::Fails(_))
    }
}

/// The four orthomodularity forms, each checked exhaustively.
///
/// * `om_i`: a ⊑ b ⇒ b = a ⊔ (a′ ⊓ b)
/// * `om_ii`: a ⊑ b ⇔ a ⊓ (a ⊓ b)′ = 0
/// * `om_iii`: a ⊑ b and a′ ⊓ b = 0 ⇒ a = b
/// * `om_iv`: a ⊓ (a′ ⊔ (a ⊓ b)) ⊑ b
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthomodularForms {
    pub om_i: FormResult,
    pub om_ii: FormResult,
    pub om_iii: FormResult,
    pub om_iv: FormResult,
}

/// A finite bounded poset with an involution table and an optional ∼ table.
#[derive(Debug, Clone)]
pub struct FiniteStructure {
    names: Vec<String>,
    index: HashMap<String, Elem>,
    down: Vec<Mask>,
    up: Vec<Mask>,
    inv: Vec<Elem>,
    bz: Option<Vec<Elem>>,
    zero: Elem,
    one: Elem,
    meets: OnceLock<Vec<Option<Elem>>>,
    joins: OnceLock<Vec<Option<Elem>>>,
    compat: OnceLock<Vec<Mask>>,
}

impl PartialEq for FiniteStructure {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.down == other.down
            && self.inv == other.inv
            && self.bz == other.bz
    }
}

impl Eq for FiniteStructure {}

impl FiniteStructure {
    /// Builds a structure from element names, order pairs `(x, y)` meaning
    /// x ⊑ y, a total involution table and an optional total ∼ table.
    ///
    /// The order pairs are closed reflexively and transitively.
    pub fn new(
        names: Vec<String>,
        le: &[(Elem, Elem)],
        inv: Vec<Elem>,
        bz: Option<Vec<Elem>>,
    ) -> Result<Self, StructureError> {
        let n = names.len();
        if n == 0 {
            return Err(StructureError::Empty);
        }
        if n > MAX_ELEMENTS {
            return Err(StructureError::TooLarge(n));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(StructureError::DuplicateId(name.clone()));
            }
        }
        if inv.len() != n || inv.iter().any(|&x| x >= n) {
            return Err(StructureError::NotTotal {
                table: "inv",
                id: names[inv.len().min(n - 1)].clone(),
            });
        }
        if let Some(t) = &bz {
            if t.len() != n || t.iter().any(|&x| x >= n) {
                return Err(StructureError::NotTotal {
                    table: "bzinv",
                    id: names[t.len().min(n - 1)].clone(),
                });
            }
        }
        // up[x] holds every y with x ⊑ y; Warshall closure on bit rows.
        let mut up: Vec<Mask> = (0..n).map(bit).collect();
        for &(x, y) in le {
            up[x] |= bit(y);
        }
        for k in 0..n {
            for x in 0..n {
                if up[x] & bit(k) != 0 {
                    up[x] |= up[k];
                }
            }
        }
        let mut down = vec![0u64; n];
        for x in 0..n {
            for y in bits(up[x]) {
                down[y] |= bit(x);
            }
        }
        for x in 0..n {
            let both = up[x] & down[x] & !bit(x);
            if both != 0 {
                let y = both.trailing_zeros() as usize;
                return Err(StructureError::NotAntisymmetric(
                    names[x].clone(),
                    names[y].clone(),
                ));
            }
        }
        let full = if n == 64 { u64::MAX } else { bit(n) - 1 };
        let zero = (0..n).find(|&x| up[x] == full).ok_or(StructureError::NoZero)?;
        let one = (0..n).find(|&x| down[x] == full).ok_or(StructureError::NoOne)?;
        for (id, bound) in [("0", zero), ("1", one)] {
            if let Some(&i) = index.get(id) {
                if i != bound {
                    return Err(StructureError::ReservedId(id.to_string()));
                }
            }
        }
        Ok(FiniteStructure {
            names,
            index,
            down,
            up,
            inv,
            bz,
            zero,
            one,
            meets: OnceLock::new(),
            joins: OnceLock::new(),
            compat: OnceLock::new(),
        })
    }

    /// Builds a structure from names. Involution pairs `(x, y)` set x′ = y and
    /// also y′ = x unless y has its own entry; ∼ pairs must cover every element.
    pub fn from_named(
        elements: &[&str],
        le: &[(&str, &str)],
        inv: &[(&str, &str)],
        bz: Option<&[(&str, &str)]>,
    ) -> Result<Self, StructureError> {
        let names: Vec<String> = elements.iter().map(|s| s.to_string()).collect();
        let mut idx = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if idx.insert(name.as_str(), i).is_some() {
                return Err(StructureError::DuplicateId(name.clone()));
            }
        }
        let look = |s: &str| {
            idx.get(s)
                .copied()
                .ok_or_else(|| StructureError::UnknownId(s.to_string()))
        };
        let le = le
            .iter()
            .map(|&(x, y)| Ok((look(x)?, look(y)?)))
            .collect::<Result<Vec<_>, StructureError>>()?;
        let inv = inv
            .iter()
            .map(|&(x, y)| Ok((look(x)?, look(y)?)))
            .collect::<Result<Vec<_>, StructureError>>()?;
        let inv = involution_table(&names, &inv)?;
        let bz = match bz {
            None => None,
            Some(pairs) => {
                let pairs = pairs
                    .iter()
                    .map(|&(x, y)| Ok((look(x)?, look(y)?)))
                    .collect::<Result<Vec<_>, StructureError>>()?;
                Some(total_table(&names, &pairs, "bzinv")?)
            }
        };
        FiniteStructure::new(names, &le, inv, bz)
    }

    /// Parses the line-oriented structure format.
    pub fn parse(text: &str) -> Result<Self, StructureError> {
        let mut elements: Option<(usize, Vec<String>)> = None;
        let mut le: Vec<(usize, String, String)> = Vec::new();
        let mut inv: Vec<(usize, String, String)> = Vec::new();
        let mut bz: Vec<(usize, String, String)> = Vec::new();
        let mut zero: Option<(usize, String)> = None;
        let mut one: Option<(usize, String)> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, rest) = content.split_once(':').ok_or_else(|| StructureError::Parse {
                line,
                message: format!("expected `key: value`, found `{content}`"),
            })?;
            let toks: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            let pair = |toks: &[String]| -> Result<(String, String), StructureError> {
                match toks {
                    [x, y] => Ok((x.clone(), y.clone())),
                    _ => Err(StructureError::Parse {
                        line,
                        message: format!("`{}` expects exactly two ids", key.trim()),
                    }),
                }
            };
            let single = |toks: &[String]| -> Result<String, StructureError> {
                match toks {
                    [x] => Ok(x.clone()),
                    _ => Err(StructureError::Parse {
                        line,
                        message: format!("`{}` expects exactly one id", key.trim()),
                    }),
                }
            };
            match key.trim() {
                "elements" => {
                    if elements.is_some() {
                        return Err(StructureError::Parse {
                            line,
                            message: "`elements` given twice".into(),
                        });
                    }
                    elements = Some((line, toks));
                }
                "le" => {
                    let (x, y) = pair(&toks)?;
                    le.push((line, x, y));
                }
                "inv" => {
                    let (x, y) = pair(&toks)?;
                    inv.push((line, x, y));
                }
                "bzinv" => {
                    let (x, y) = pair(&toks)?;
                    bz.push((line, x, y));
                }
                "zero" => zero = Some((line, single(&toks)?)),
                "one" => one = Some((line, single(&toks)?)),
                other => {
                    return Err(StructureError::Parse {
                        line,
                        message: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        let (_, names) = elements.ok_or(StructureError::Parse {
            line: 0,
            message: "missing `elements` line".into(),
        })?;
        let mut idx = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if idx.insert(name.clone(), i).is_some() {
                return Err(StructureError::DuplicateId(name.clone()));
            }
        }
        let look = |s: &str| {
            idx.get(s)
                .copied()
                .ok_or_else(|| StructureError::UnknownId(s.to_string()))
        };
        let le = le
            .iter()
            .map(|(_, x, y)| Ok((look(x)?, look(y)?)))
            .collect::<Result<Vec<_>, StructureError>>()?;
        let invp = inv
            .iter()
            .map(|(_, x, y)| Ok((look(x)?, look(y)?)))
            .collect::<Result<Vec<_>, StructureError>>()?;
        let inv = involution_table(&names, &invp)?;
        let bz = if bz.is_empty() {
            None
        } else {
            let bzp = bz
                .iter()
                .map(|(_, x, y)| Ok((look(x)?, look(y)?)))
                .collect::<Result<Vec<_>, StructureError>>()?;
            Some(total_table(&names, &bzp, "bzinv")?)
        };
        let zero = zero.map(|(_, z)| look(&z)).transpose()?;
        let one = one.map(|(_, o)| look(&o)).transpose()?;
        let s = FiniteStructure::new(names, &le, inv, bz)?;
        if let Some(z) = zero {
            if z != s.zero {
                return Err(StructureError::WrongBound {
                    which: "zero",
                    declared: s.names[z].clone(),
                });
            }
        }
        if let Some(o) = one {
            if o != s.one {
                return Err(StructureError::WrongBound {
                    which: "one",
                    declared: s.names[o].clone(),
                });
            }
        }
        Ok(s)
    }

    /// Serializes to the structure format: elements, bounds, Hasse covers,
    /// involution pairs and the ∼ table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("elements:");
        for n in &self.names {
            out.push(' ');
            out.push_str(n);
        }
        out.push('\n');
        out.push_str(&format!("zero: {}\n", self.names[self.zero]));
        out.push_str(&format!("one: {}\n", self.names[self.one]));
        for (x, y) in self.covers() {
            out.push_str(&format!("le: {} {}\n", self.names[x], self.names[y]));
        }
        for x in self.elements() {
            let y = self.inv[x];
            if x <= y || self.inv[y] != x {
                out.push_str(&format!("inv: {} {}\n", self.names[x], self.names[y]));
            }
        }
        if let Some(t) = &self.bz {
            for x in self.elements() {
                out.push_str(&format!("bzinv: {} {}\n", self.names[x], self.names[t[x]]));
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

    /// Mask of all elements.
    pub fn full(&self) -> Mask {
        if self.len() == 64 {
            u64::MAX
        } else {
            bit(self.len()) - 1
        }
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

    /// Looks up an id, reporting unknown ids as a structural error.
    pub fn elem(&self, name: &str) -> Result<Elem, StructureError> {
        self.id(name)
            .ok_or_else(|| StructureError::UnknownId(name.to_string()))
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.up[a] & bit(b) != 0
    }

    pub fn lt(&self, a: Elem, b: Elem) -> bool {
        a != b && self.leq(a, b)
    }

    /// Elements below `a`, including `a`.
    pub fn down(&self, a: Elem) -> Mask {
        self.down[a]
    }

    /// Elements above `a`, including `a`.
    pub fn up(&self, a: Elem) -> Mask {
        self.up[a]
    }

    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a]
    }

    pub fn inv_table(&self) -> &[Elem] {
        &self.inv
    }

    pub fn has_bz(&self) -> bool {
        self.bz.is_some()
    }

    /// The ∼ complement, if the structure carries one.
    pub fn bz(&self, a: Elem) -> Option<Elem> {
        self.bz.as_ref().map(|t| t[a])
    }

    pub fn bz_table(&self) -> Option<&[Elem]> {
        self.bz.as_deref()
    }

    /// Returns a copy with the ∼ table replaced.
    pub fn with_bz(&self, bz: Option<Vec<Elem>>) -> Result<Self, StructureError> {
        let le: Vec<(Elem, Elem)> = self.covers();
        FiniteStructure::new(self.names.clone(), &le, self.inv.clone(), bz)
    }

    /// Hasse covering pairs (x, y): x < y with nothing strictly between.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for x in self.elements() {
            for y in bits(self.up[x] & !bit(x)) {
                let between = self.up[x] & self.down[y] & !bit(x) & !bit(y);
                if between == 0 {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Greatest element of a mask of lower bounds, if one exists.
    fn greatest_in(&self, m: Mask) -> Option<Elem> {
        bits(m).find(|&x| self.down[x] & m == m)
    }

    fn least_in(&self, m: Mask) -> Option<Elem> {
        bits(m).find(|&x| self.up[x] & m == m)
    }

    fn meet_table(&self) -> &[Option<Elem>] {
        self.meets.get_or_init(|| {
            let n = self.len();
            let mut t = vec![None; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = self.greatest_in(self.down[a] & self.down[b]);
                }
            }
            t
        })
    }

    fn join_table(&self) -> &[Option<Elem>] {
        self.joins.get_or_init(|| {
            let n = self.len();
            let mut t = vec![None; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = self.least_in(self.up[a] & self.up[b]);
                }
            }
            t
        })
    }

    /// Greatest lower bound of `a` and `b`, `None` when it does not exist.
    pub fn meet(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.meet_table()[a * self.len() + b]
    }

    /// Least upper bound of `a` and `b`, `None` when it does not exist.
    pub fn join(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.join_table()[a * self.len() + b]
    }

    /// Greatest lower bound of a set of elements.
    pub fn meet_all(&self, m: Mask) -> Option<Elem> {
        let mut lb = self.full();
        for x in bits(m) {
            lb &= self.down[x];
        }
        self.greatest_in(lb)
    }

    /// Least upper bound of a set of elements.
    pub fn join_all(&self, m: Mask) -> Option<Elem> {
        let mut ub = self.full();
        for x in bits(m) {
            ub &= self.up[x];
        }
        self.least_in(ub)
    }

    /// Common lower bounds of a set.
    pub fn lower_bounds(&self, m: Mask) -> Mask {
        bits(m).fold(self.full(), |acc, x| acc & self.down[x])
    }

    /// Common upper bounds of a set.
    pub fn upper_bounds(&self, m: Mask) -> Mask {
        bits(m).fold(self.full(), |acc, x| acc & self.up[x])
    }

    /// First pair without a meet or join.
    pub fn non_lattice_witness(&self) -> Option<(Elem, Elem)> {
        for a in self.elements() {
            for b in a..self.len() {
                if self.meet(a, b).is_none() || self.join(a, b).is_none() {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_lattice(&self) -> bool {
        self.non_lattice_witness().is_none()
    }

    /// Total view of the structure, available when every meet and join exists.
    pub fn as_lattice(&self) -> Option<Lattice<'_>> {
        self.is_lattice().then_some(Lattice { s: self })
    }

    /// Classifies the structure and lists every failed axiom with a witness.
    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        let mut fail = |axiom: Axiom, w: Option<Vec<Elem>>| match w {
            Some(witness) => {
                failures.push(AxiomFailure { axiom, witness });
                false
            }
            None => true,
        };
        let els = || self.elements();
        let pairs = || els().flat_map(move |a| els().map(move |b| (a, b)));

        let involution = fail(
            Axiom::Involution,
            els().find(|&a| self.inv[self.inv[a]] != a).map(|a| vec![a]),
        );
        let reversing = fail(
            Axiom::OrderReversing,
            pairs()
                .find(|&(a, b)| self.leq(a, b) && !self.leq(self.inv[b], self.inv[a]))
                .map(|(a, b)| vec![a, b]),
        );
        let lattice = fail(
            Axiom::Lattice,
            self.non_lattice_witness().map(|(a, b)| vec![a, b]),
        );
        let regular = fail(
            Axiom::Regularity,
            pairs()
                .find(|&(a, b)| {
                    self.leq(a, self.inv[a])
                        && self.leq(b, self.inv[b])
                        && !self.leq(a, self.inv[b])
                })
                .map(|(a, b)| vec![a, b]),
        );
        let zero_only = bit(self.zero);
        let noncontra = fail(
            Axiom::NonContradiction,
            els()
                .find(|&a| self.down[a] & self.down[self.inv[a]] != zero_only)
                .map(|a| vec![a]),
        );
        let orthomodular = lattice
            && fail(
                Axiom::Orthomodularity,
                pairs()
                    .find(|&(a, b)| {
                        let ab = self.meet(a, b).unwrap();
                        let j = self.join(self.inv[a], ab).unwrap();
                        !self.leq(self.meet(a, j).unwrap(), b)
                    })
                    .map(|(a, b)| vec![a, b]),
            );

        let inv_kind = if !(involution && reversing) {
            None
        } else if !lattice {
            Some(StructureClass::InvolutivePoset)
        } else if !regular {
            Some(StructureClass::InvolutiveLattice)
        } else if !noncontra {
            Some(StructureClass::RegularInvolutiveLattice)
        } else if !orthomodular {
            Some(StructureClass::Ortholattice)
        } else {
            Some(StructureClass::OrthomodularLattice)
        };

        let mut kind = inv_kind;
        if let Some(t) = &self.bz {
            let bz_nc = fail(
                Axiom::BzNonContradiction,
                els()
                    .find(|&a| self.down[a] & self.down[t[a]] != zero_only)
                    .map(|a| vec![a]),
            );
            let bz_dn = fail(
                Axiom::BzWeakDoubleNegation,
                els().find(|&a| !self.leq(a, t[t[a]])).map(|a| vec![a]),
            );
            let bz_rev = fail(
                Axiom::BzOrderReversing,
                pairs()
                    .find(|&(a, b)| self.leq(a, b) && !self.leq(t[b], t[a]))
                    .map(|(a, b)| vec![a, b]),
            );
            let bz_ic = fail(
                Axiom::BzInterconnection,
                els().find(|&a| self.inv[t[a]] != t[t[a]]).map(|a| vec![a]),
            );
            let bz3 = lattice && {
                let dm = fail(
                    Axiom::Bz3StrongDeMorgan,
                    pairs()
                        .find(|&(a, b)| {
                            t[self.meet(a, b).unwrap()] != self.join(t[a], t[b]).unwrap()
                        })
                        .map(|(a, b)| vec![a, b]),
                );
                let ic = fail(
                    Axiom::Bz3Interconnection,
                    pairs()
                        .find(|&(a, b)| {
                            let l = self.meet(a, t[t[b]]).unwrap();
                            let r = self.join(t[self.inv[a]], b).unwrap();
                            !self.leq(l, r)
                        })
                        .map(|(a, b)| vec![a, b]),
                );
                dm && ic
            };
            let bz_poset =
                involution && reversing && regular && bz_nc && bz_dn && bz_rev && bz_ic;
            if bz_poset {
                kind = Some(if !lattice {
                    StructureClass::BzPoset
                } else if !bz3 {
                    StructureClass::BzLattice
                } else {
                    StructureClass::Bz3Lattice
                });
            }
        }
        ValidationReport {
            kind,
            inv_kind,
            failures,
        }
    }

    /// Checks the four orthomodularity forms exhaustively.
    pub fn orthomodular_forms(&self) -> OrthomodularForms {
        let n = self.len();
        let inv = &self.inv;
        let meet = |a, b| self.meet(a, b).ok_or_else(|| vec![a, b]);
        let join = |a, b| self.join(a, b).ok_or_else(|| vec![a, b]);
        let run = |check: &dyn Fn(Elem, Elem) -> Result<bool, Vec<Elem>>| {
            let mut inapplicable = None;
            for a in 0..n {
                for b in 0..n {
                    match check(a, b) {
                        Ok(true) => {}
                        Ok(false) => return FormResult::Fails(vec![a, b]),
                        Err(w) => {
                            inapplicable.get_or_insert(w);
                        }
                    }
                }
            }
            match inapplicable {
                Some(w) => FormResult::Inapplicable(w),
                None => FormResult::Holds,
            }
        };
        let om_i = run(&|a, b| {
            if !self.leq(a, b) {
                return Ok(true);
            }
            Ok(join(a, meet(inv[a], b)?)? == b)
        });
        let om_ii = run(&|a, b| {
            let v = meet(a, inv[meet(a, b)?])? == self.zero;
            Ok(self.leq(a, b) == v)
        });
        let om_iii = run(&|a, b| {
            if !self.leq(a, b) {
                return Ok(true);
            }
            Ok(meet(inv[a], b)? != self.zero || a == b)
        });
        let om_iv = run(&|a, b| {
            let j = join(inv[a], meet(a, b)?)?;
            Ok(self.leq(meet(a, j)?, b))
        });
        OrthomodularForms {
            om_i,
            om_ii,
            om_iii,
            om_iv,
        }
    }

    /// Finds an isomorphism onto `other` preserving order, ′ and (when both
    /// carry it) ∼. Returns the image of each element.
    pub fn isomorphism(&self, other: &FiniteStructure) -> Option<Vec<Elem>> {
        let n = self.len();
        if n != other.len() || self.has_bz() != other.has_bz() {
            return None;
        }
        let sig = |s: &FiniteStructure, x: Elem| {
            (s.down[x].count_ones(), s.up[x].count_ones())
        };
        let mut sigs_a: Vec<_> = (0..n).map(|x| sig(self, x)).collect();
        let mut sigs_b: Vec<_> = (0..n).map(|x| sig(other, x)).collect();
        sigs_a.sort_unstable();
        sigs_b.sort_unstable();
        if sigs_a != sigs_b {
            return None;
        }
        let mut order: Vec<Elem> = (0..n).collect();
        order.sort_by_key(|&x| (self.down[x].count_ones(), x));
        let mut map = vec![usize::MAX; n];
        let mut used: Mask = 0;
        if self.iso_search(other, &order, 0, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    fn iso_search(
        &self,
        other: &FiniteStructure,
        order: &[Elem],
        k: usize,
        map: &mut Vec<Elem>,
        used: &mut Mask,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let x = order[k];
        if map[x] != usize::MAX {
            return self.iso_search(other, order, k + 1, map, used);
        }
        let sig = |s: &FiniteStructure, e: Elem| (s.down[e].count_ones(), s.up[e].count_ones());
        let xi = self.inv[x];
        for y in 0..other.len() {
            if *used & bit(y) != 0 || sig(other, y) != sig(self, x) {
                continue;
            }
            let yi = other.inv[y];
            if (xi == x) != (yi == y) || (map[xi] != usize::MAX && map[xi] != yi) {
                continue;
            }
            if !self.consistent(other, map, x, y) {
                continue;
            }
            map[x] = y;
            *used |= bit(y);
            let mut paired = false;
            if map[xi] == usize::MAX {
                if *used & bit(yi) != 0
                    || sig(other, yi) != sig(self, xi)
                    || !self.consistent(other, map, xi, yi)
                {
                    map[x] = usize::MAX;
                    *used &= !bit(y);
                    continue;
                }
                map[xi] = yi;
                *used |= bit(yi);
                paired = true;
            }
            if self.bz_consistent(other, map) && self.iso_search(other, order, k + 1, map, used) {
                return true;
            }
            if paired {
                map[xi] = usize::MAX;
                *used &= !bit(yi);
            }
            map[x] = usize::MAX;
            *used &= !bit(y);
        }
        false
    }

    fn consistent(&self, other: &FiniteStructure, map: &[Elem], a: Elem, b: Elem) -> bool {
        (0..self.len()).all(|z| {
            let w = map[z];
            w == usize::MAX
                || (self.leq(a, z) == other.leq(b, w) && self.leq(z, a) == other.leq(w, b))
        })
    }

    fn bz_consistent(&self, other: &FiniteStructure, map: &[Elem]) -> bool {
        match (&self.bz, &other.bz) {
            (Some(s), Some(o)) => (0..self.len()).all(|x| {
                let (fx, fsx) = (map[x], map[s[x]]);
                fx == usize::MAX || fsx == usize::MAX || o[fx] == fsx
            }),
            _ => true,
        }
    }

    /// Compatibility rows: bit b of row a is set when a = (a ⊓ b′) ⊔ (a ⊓ b).
    ///
    /// When the structure is an orthomodular lattice each row is asserted to
    /// agree with Booleanity of the subalgebra generated by the pair.
    fn compat_rows(&self) -> &[Mask] {
        self.compat.get_or_init(|| {
            let l = Lattice { s: self };
            let oml = self.validate().inv_kind == Some(StructureClass::OrthomodularLattice);
            let mut rows = vec![0u64; self.len()];
            for a in self.elements() {
                for b in self.elements() {
                    let c = l.join(l.meet(a, l.compl(b)), l.meet(a, b)) == a;
                    if oml {
                        let boolean = l.is_boolean_subalgebra(l.generated_subalgebra(bit(a) | bit(b)));
                        assert_eq!(
                            c, boolean,
                            "compatibility of ({}, {}) disagrees with Booleanity of the generated subalgebra",
                            self.names[a], self.names[b]
                        );
                    }
                    if c {
                        rows[a] |= bit(b);
                    }
                }
            }
            rows
        })
    }

    /// Renders a mask as `{x,y}` using element names.
    pub fn mask_names(&self, m: Mask) -> String {
        let v: Vec<&str> = bits(m).map(|x| self.names[x].as_str()).collect();
        format!("{{{}}}", v.join(","))
    }
}

impl fmt::Display for FiniteStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn involution_table(names: &[String], pairs: &[(Elem, Elem)]) -> Result<Vec<Elem>, StructureError> {
    let n = names.len();
    let mut explicit: Vec<Option<Elem>> = vec![None; n];
    for &(x, y) in pairs {
        match explicit[x] {
            Some(old) if old != y => {
                return Err(StructureError::Conflict {
                    table: "inv",
                    id: names[x].clone(),
                })
            }
            _ => explicit[x] = Some(y),
        }
    }
    let mut table = explicit.clone();
    for &(x, y) in pairs {
        if explicit[y].is_none() {
            match table[y] {
                Some(old) if old != x => {
                    return Err(StructureError::Conflict {
                        table: "inv",
                        id: names[y].clone(),
                    })
                }
                _ => table[y] = Some(x),
            }
        }
    }
    table
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| StructureError::NotTotal {
                table: "inv",
                id: names[i].clone(),
            })
        })
        .collect()
}

fn total_table(
    names: &[String],
    pairs: &[(Elem, Elem)],
    table: &'static str,
) -> Result<Vec<Elem>, StructureError> {
    let mut t: Vec<Option<Elem>> = vec![None; names.len()];
    for &(x, y) in pairs {
        match t[x] {
            Some(old) if old != y => {
                return Err(StructureError::Conflict {
                    table,
                    id: names[x].clone(),
                })
            }
            _ => t[x] = Some(y),
        }
    }
    t.into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| StructureError::NotTotal {
                table,
                id: names[i].clone(),
            })
        })
        .collect()
}

/// A structure known to have every binary meet and join.
#[derive(Debug, Clone, Copy)]
pub struct Lattice<'a> {
    s: &'a FiniteStructure,
}

/// Witness returned when the orthoarguesian law fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OalFailure {
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
    pub rhs: Elem,
}

impl<'a> Lattice<'a> {
    pub fn structure(&self) -> &'a FiniteStructure {
        self.s
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.s.meet(a, b).expect("lattice meet")
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.s.join(a, b).expect("lattice join")
    }

    pub fn compl(&self, a: Elem) -> Elem {
        self.s.inv(a)
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.s.leq(a, b)
    }

    pub fn zero(&self) -> Elem {
        self.s.zero()
    }

    pub fn one(&self) -> Elem {
        self.s.one()
    }

    /// a = (a ⊓ b′) ⊔ (a ⊓ b).
    pub fn compatible(&self, a: Elem, b: Elem) -> bool {
        self.s.compat_rows()[a] & bit(b) != 0
    }

    /// Smallest subset containing `gens`, 0 and 1 that is closed under ′, ⊓ and ⊔.
    pub fn generated_subalgebra(&self, gens: Mask) -> Mask {
        let mut m = gens | bit(self.zero()) | bit(self.one());
        loop {
            let mut next = m;
            for x in bits(m) {
                next |= bit(self.compl(x));
                for y in bits(m) {
                    next |= bit(self.meet(x, y)) | bit(self.join(x, y));
                }
            }
            if next == m {
                return m;
            }
            m = next;
        }
    }

    /// True when the sub-ortholattice on `m` is distributive, hence Boolean.
    pub fn is_boolean_subalgebra(&self, m: Mask) -> bool {
        bits(m).all(|x| {
            self.meet(x, self.compl(x)) == self.zero()
                && bits(m).all(|y| {
                    bits(m).all(|z| {
                        self.meet(x, self.join(y, z))
                            == self.join(self.meet(x, y), self.meet(x, z))
                    })
                })
        })
    }

    /// Sasaki projection (a ⊔ b′) ⊓ b.
    pub fn sasaki(&self, a: Elem, b: Elem) -> Elem {
        self.meet(self.join(a, self.compl(b)), b)
    }

    /// Right-hand side of the orthoarguesian law for (a, b, c).
    pub fn oal_rhs(&self, a: Elem, b: Elem, c: Elem) -> Elem {
        let ab = self.sasaki(a, self.compl(b));
        let ac = self.sasaki(a, self.compl(c));
        let inner = self.meet(self.join(b, c), self.join(ab, ac));
        self.join(b, self.meet(ab, self.join(ac, inner)))
    }

    /// Exhaustive check of a ⊑ oal_rhs(a, b, c); returns the first failure.
    pub fn check_oal(&self) -> Result<(), OalFailure> {
        let n = self.s.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let rhs = self.oal_rhs(a, b, c);
                    if !self.leq(a, rhs) {
                        return Err(OalFailure { a, b, c, rhs });
                    }
                }
            }
        }
        Ok(())
    }

    /// b covers a: a ⊏ b with nothing strictly between.
    pub fn covers(&self, b: Elem, a: Elem) -> bool {
        self.s.lt(a, b) && self.s.up(a) & self.s.down(b) == bit(a) | bit(b)
    }

    /// Elements covering 0.
    pub fn atoms(&self) -> Mask {
        let z = self.zero();
        self.s
            .elements()
            .filter(|&a| self.covers(a, z))
            .fold(0, |m, a| m | bit(a))
    }

    /// Every nonzero element lies above some atom.
    pub fn is_atomic(&self) -> bool {
        let atoms = self.atoms();
        self.s
            .elements()
            .all(|b| b == self.zero() || self.s.down(b) & atoms != 0)
    }

    /// For every atom a and element b with a ⋢ b, a ⊔ b covers b.
    pub fn covering_property(&self) -> bool {
        bits(self.atoms()).all(|a| {
            self.s
                .elements()
                .all(|b| self.leq(a, b) || self.covers(self.join(a, b), b))
        })
    }

    /// The only elements compatible with every element are 0 and 1.
    pub fn is_irreducible(&self) -> bool {
        self.s.elements().all(|a| {
            a == self.zero()
                || a == self.one()
                || self.s.elements().any(|b| !self.compatible(a, b))
        })
    }
}

/// Elements `x` of `s` satisfying a predicate, as a sorted name set.
pub fn name_set(s: &FiniteStructure, m: Mask) -> BTreeSet<String> {
    bits(m).map(|x| s.name(x).to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain2() -> FiniteStructure {
        FiniteStructure::from_named(&["0", "1"], &[("0", "1")], &[("0", "1")], None).unwrap()
    }

    fn mo2() -> FiniteStructure {
        let els = ["0", "a", "a'", "b", "b'", "1"];
        let le: Vec<(&str, &str)> = ["a", "a'", "b", "b'"]
            .iter()
            .flat_map(|&x| [("0", x), (x, "1")])
            .collect();
        FiniteStructure::from_named(
            &els,
            &le,
            &[("0", "1"), ("a", "a'"), ("b", "b'")],
            None,
        )
        .unwrap()
    }

    #[test]
    fn two_chain_is_boolean() {
        let s = chain2();
        assert_eq!(s.validate().kind, Some(StructureClass::OrthomodularLattice));
        let l = s.as_lattice().unwrap();
        assert_eq!(l.atoms(), bit(s.elem("1").unwrap()));
    }

    #[test]
    fn mo2_meets_and_joins() {
        let s = mo2();
        let (a, b) = (s.elem("a").unwrap(), s.elem("b").unwrap());
        assert_eq!(s.join(a, b), Some(s.one()));
        assert_eq!(s.meet(a, b), Some(s.zero()));
        let l = s.as_lattice().unwrap();
        assert!(!l.compatible(a, b));
        assert!(l.is_irreducible());
    }

    #[test]
    fn structural_errors_are_distinct() {
        assert_eq!(
            FiniteStructure::from_named(&["0", "0"], &[], &[], None).unwrap_err(),
            StructureError::DuplicateId("0".into())
        );
        assert!(matches!(
            FiniteStructure::from_named(&["0", "a", "1"], &[("0", "a"), ("a", "1")], &[("0", "1")], None),
            Err(StructureError::NotTotal { .. })
        ));
        assert!(matches!(
            FiniteStructure::from_named(&["0", "1"], &[("0", "1"), ("1", "0")], &[("0", "1")], None),
            Err(StructureError::NotAntisymmetric(..))
        ));
        assert!(matches!(
            FiniteStructure::parse("elements: 0 1\nle: 0 2\ninv: 0 1\n"),
            Err(StructureError::UnknownId(_))
        ));
        assert!(matches!(
            FiniteStructure::parse("elements: 0 1\nbogus line\n"),
            Err(StructureError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn round_trip_text() {
        let s = mo2();
        let t = s.to_text();
        let back = FiniteStructure::parse(&t).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_text(), t);
    }

    #[test]
    fn nonregular_diamond() {
        let s = FiniteStructure::from_named(
            &["0", "a", "b", "1"],
            &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
            &[("0", "1"), ("a", "a"), ("b", "b")],
            None,
        )
        .unwrap();
        let r = s.validate();
        assert_eq!(r.kind, Some(StructureClass::InvolutiveLattice));
        assert!(r.failure(Axiom::Regularity).is_some());
    }

    #[test]
    fn class_inclusions() {
        use StructureClass::*;
        assert!(OrthomodularLattice.is_a(InvolutivePoset));
        assert!(Bz3Lattice.is_a(RegularInvolutiveLattice));
        assert!(!Ortholattice.is_a(BzPoset));
        assert!(!InvolutiveLattice.is_a(RegularInvolutiveLattice));
    }
}
