//! Kripkean semantics: orthoframes, symmetric (paraconsistent) frames and BZ
//! frames, propositions, realizations, and the canonical transformations
//! between algebraic and Kripkean realizations.
//!
//! World sets are bitmasks over world indices, so frames have at most 64
//! worlds.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::algebraic::Assignment;
use crate::formula::Formula;
use crate::lattice::{bit, bits, Elem, FiniteStructure, Mask, MAX_ELEMENTS};

/// Problems building or using frames and realizations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KripkeError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("frame has no worlds")]
    Empty,
    #[error("frame has {0} worlds; at most 64 are supported")]
    TooLarge(usize),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("unknown world or proposition `{0}`")]
    Unknown(String),
    #[error("accessibility is not reflexive at `{0}`")]
    NotReflexive(String),
    #[error("frame has no intuitionistic accessibility relation")]
    NoBz,
    #[error("set {0} is not a proposition of the frame")]
    NotProposition(String),
    #[error("propositions are not closed under {op}: {set}")]
    NotClosed { op: &'static str, set: String },
    #[error("literal `{0}` has no proposition")]
    Unassigned(String),
    #[error("connective of `{0}` is not interpreted by Kripkean realizations")]
    Unsupported(String),
}

/// Which class of frames a frame belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Reflexive and symmetric accessibility.
    Ortho,
    /// Symmetric, possibly irreflexive accessibility.
    Symmetric,
    /// Fuzzy and intuitionistic accessibility relations.
    Bz,
}

impl Flavor {
    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::Ortho => "ortho",
            Flavor::Symmetric => "symmetric",
            Flavor::Bz => "bz",
        }
    }

    pub fn parse(s: &str) -> Option<Flavor> {
        [Flavor::Ortho, Flavor::Symmetric, Flavor::Bz]
            .into_iter()
            .find(|f| f.as_str() == s)
    }
}

/// A finite frame ⟨I, R⟩, optionally with a second accessibility relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    names: Vec<String>,
    acc: Vec<Mask>,
    bzacc: Option<Vec<Mask>>,
    flavor: Flavor,
}

fn symmetric_rows(n: usize, pairs: &[(usize, usize)]) -> Vec<Mask> {
    let mut rows = vec![0; n];
    for &(i, j) in pairs {
        rows[i] |= bit(j);
        rows[j] |= bit(i);
    }
    rows
}

impl Frame {
    /// Builds a frame from unordered accessible pairs. Ortho frames are
    /// made reflexive.
    pub fn new(names: Vec<String>, acc: &[(usize, usize)], flavor: Flavor) -> Result<Self, KripkeError> {
        let n = names.len();
        if n == 0 {
            return Err(KripkeError::Empty);
        }
        if n > MAX_ELEMENTS {
            return Err(KripkeError::TooLarge(n));
        }
        let mut seen = BTreeSet::new();
        for w in &names {
            if !seen.insert(w) {
                return Err(KripkeError::Duplicate(w.clone()));
            }
        }
        let mut rows = symmetric_rows(n, acc);
        if flavor == Flavor::Ortho {
            for (i, r) in rows.iter_mut().enumerate() {
                *r |= bit(i);
            }
        }
        Ok(Frame {
            names,
            acc: rows,
            bzacc: None,
            flavor,
        })
    }

    /// Frame with worlds `0..n` named by their index.
    pub fn from_rows(rows: Vec<Mask>, flavor: Flavor) -> Self {
        Frame {
            names: (0..rows.len()).map(|i| format!("w{i}")).collect(),
            acc: rows,
            bzacc: None,
            flavor,
        }
    }

    /// Adds the intuitionistic accessibility relation (made reflexive).
    pub fn with_bz(mut self, pairs: &[(usize, usize)]) -> Self {
        let mut rows = symmetric_rows(self.len(), pairs);
        for (i, r) in rows.iter_mut().enumerate() {
            *r |= bit(i);
        }
        self.bzacc = Some(rows);
        self.flavor = Flavor::Bz;
        self
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn world(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|w| w == name)
    }

    pub fn full(&self) -> Mask {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    /// Worlds accessible from `i`.
    pub fn row(&self, i: usize) -> Mask {
        self.acc[i]
    }

    pub fn accessible(&self, i: usize, j: usize) -> bool {
        self.acc[i] & bit(j) != 0
    }

    pub fn bz_row(&self, i: usize) -> Option<Mask> {
        self.bzacc.as_ref().map(|r| r[i])
    }

    /// X′: worlds inaccessible from every world of X.
    pub fn ortho(&self, x: Mask) -> Mask {
        (0..self.len())
            .filter(|&i| self.acc[i] & x == 0)
            .fold(0, |m, i| m | bit(i))
    }

    /// X∼: worlds intuitionistically inaccessible from every world of X.
    pub fn bz_ortho(&self, x: Mask) -> Result<Mask, KripkeError> {
        let rows = self.bzacc.as_ref().ok_or(KripkeError::NoBz)?;
        Ok((0..self.len())
            .filter(|&i| rows[i] & x == 0)
            .fold(0, |m, i| m | bit(i)))
    }

    pub fn is_proposition(&self, x: Mask) -> bool {
        self.ortho(self.ortho(x)) == x
    }

    /// X ▢⊸ Y: worlds all of whose accessible X-worlds are Y-worlds.
    pub fn strict(&self, x: Mask, y: Mask) -> Mask {
        (0..self.len())
            .filter(|&i| self.acc[i] & x & !y == 0)
            .fold(0, |m, i| m | bit(i))
    }

    /// Every proposition, ascending as integers. Propositions are exactly
    /// the intersections of the sets {j}′ (with I as the empty intersection).
    pub fn all_propositions(&self) -> Vec<Mask> {
        let gens: Vec<Mask> = (0..self.len()).map(|j| self.ortho(bit(j))).collect();
        let mut set: BTreeSet<Mask> = BTreeSet::new();
        set.insert(self.full());
        let mut frontier = vec![self.full()];
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = x & g;
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    /// i ⊥ i and j ⊥ j imply i ⊥ j.
    pub fn is_regular(&self) -> bool {
        let irreflexive: Vec<usize> = (0..self.len()).filter(|&i| !self.accessible(i, i)).collect();
        irreflexive
            .iter()
            .all(|&i| irreflexive.iter().all(|&j| !self.accessible(i, j)))
    }

    /// Violated BZ frame conditions, by label.
    pub fn bz_frame_failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let Some(bz) = &self.bzacc else {
            return vec!["no intuitionistic relation"];
        };
        let n = self.len();
        if !self.is_regular() {
            out.push("fuzzy frame is regular");
        }
        if (0..n).any(|i| self.acc[i] == 0) {
            out.push("every world is fuzzy-accessible to some world");
        }
        if (0..n).any(|i| bz[i] & bit(i) == 0) {
            out.push("intuitionistic frame is an orthoframe");
        }
        if (0..n).any(|i| self.acc[i] & !bz[i] != 0) {
            out.push("fuzzy accessibility implies intuitionistic accessibility");
        }
        let twin = |i: usize| (0..n).any(|j| bz[j] == bz[i] && bz[i] & !self.acc[j] == 0);
        if !(0..n).all(twin) {
            out.push("twin worlds");
        }
        out
    }

    /// Parses the frame part of a realization file.
    pub fn mask_names(&self, m: Mask) -> String {
        let ws: Vec<&str> = bits(m).map(|i| self.names[i].as_str()).collect();
        format!("{{{}}}", ws.join(","))
    }
}

/// A Kripkean realization ⟨I, R, Π, ρ⟩.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    pub frame: Frame,
    pi: Vec<Mask>,
    rho: BTreeMap<String, Mask>,
}

impl Realization {
    /// Builds a realization; `pi = None` means all propositions of the frame.
    /// A supplied family is checked for the closure conditions.
    pub fn new(frame: Frame, pi: Option<Vec<Mask>>, rho: BTreeMap<String, Mask>) -> Result<Self, KripkeError> {
        let pi = match pi {
            None => {
                let mut all = frame.all_propositions();
                if frame.flavor == Flavor::Bz {
                    all = closure(&frame, &all)?;
                }
                all
            }
            Some(mut p) => {
                p.sort_unstable();
                p.dedup();
                p
            }
        };
        let r = Realization { frame, pi, rho };
        r.check()?;
        Ok(r)
    }

    /// The smallest closed family containing `generators`.
    pub fn generated(frame: Frame, generators: &[Mask], rho: BTreeMap<String, Mask>) -> Result<Self, KripkeError> {
        let pi = closure(&frame, generators)?;
        Realization::new(frame, Some(pi), rho)
    }

    fn check(&self) -> Result<(), KripkeError> {
        let f = &self.frame;
        let has = |x: Mask| self.pi.binary_search(&x).is_ok();
        let not_closed = |op, x| KripkeError::NotClosed {
            op,
            set: f.mask_names(x),
        };
        for &x in &self.pi {
            if !f.is_proposition(x) {
                return Err(KripkeError::NotProposition(f.mask_names(x)));
            }
            if !has(f.ortho(x)) {
                return Err(not_closed("′", x));
            }
            if f.bzacc.is_some() && !has(f.bz_ortho(x)?) {
                return Err(not_closed("∼", x));
            }
            for &y in &self.pi {
                if !has(x & y) {
                    return Err(not_closed("∩", x & y));
                }
            }
        }
        if !has(0) || !has(f.full()) {
            return Err(not_closed("bounds", 0));
        }
        for (lit, &x) in &self.rho {
            if !has(x) {
                return Err(KripkeError::NotProposition(format!("{} (ρ({lit}))", f.mask_names(x))));
            }
        }
        Ok(())
    }

    pub fn propositions(&self) -> &[Mask] {
        &self.pi
    }

    pub fn rho(&self) -> &BTreeMap<String, Mask> {
        &self.rho
    }

    pub fn contains(&self, x: Mask) -> bool {
        self.pi.binary_search(&x).is_ok()
    }

    /// Replaces ρ.
    pub fn with_rho(&self, rho: BTreeMap<String, Mask>) -> Result<Self, KripkeError> {
        let r = Realization {
            frame: self.frame.clone(),
            pi: self.pi.clone(),
            rho,
        };
        r.check()?;
        Ok(r)
    }

    /// ρ(f) after expanding defined connectives.
    pub fn extension(&self, f: &Formula) -> Result<Mask, KripkeError> {
        self.ext(&f.expand())
    }

    fn ext(&self, f: &Formula) -> Result<Mask, KripkeError> {
        let fr = &self.frame;
        match f {
            Formula::Lit(n) => self.rho.get(n).copied().ok_or_else(|| KripkeError::Unassigned(n.clone())),
            Formula::Not(a) => Ok(fr.ortho(self.ext(a)?)),
            Formula::INot(a) => fr.bz_ortho(self.ext(a)?),
            Formula::And(x, y) => Ok(self.ext(x)? & self.ext(y)?),
            Formula::Strict(x, y) => {
                let z = fr.strict(self.ext(x)?, self.ext(y)?);
                if self.contains(z) {
                    Ok(z)
                } else {
                    Err(KripkeError::NotClosed {
                        op: "▢⊸",
                        set: fr.mask_names(z),
                    })
                }
            }
            Formula::Entail(x, y) => {
                let (a, b) = (self.ext(x)?, self.ext(y)?);
                Ok(if a & !b == 0 { fr.full() } else { 0 })
            }
            _ => Err(KripkeError::Unsupported(f.to_string())),
        }
    }

    /// i ⊨ f.
    pub fn holds(&self, i: usize, f: &Formula) -> Result<bool, KripkeError> {
        Ok(self.extension(f)? & bit(i) != 0)
    }

    /// i ⊨ f through the double-orthocomplement reformulation: every world
    /// accessible from i sees some world verifying f.
    pub fn holds_via_accessibility(&self, i: usize, f: &Formula) -> Result<bool, KripkeError> {
        let x = self.extension(f)?;
        let fr = &self.frame;
        Ok(bits(fr.row(i)).all(|j| fr.row(j) & x != 0))
    }

    /// ⊨_K f: every world verifies f.
    pub fn true_in(&self, f: &Formula) -> Result<bool, KripkeError> {
        Ok(self.extension(f)? == self.frame.full())
    }

    /// T ⊨_K α: every world verifying all of T verifies α.
    pub fn consequence_in(&self, premises: &[Formula], conclusion: &Formula) -> Result<bool, KripkeError> {
        let mut m = self.frame.full();
        for p in premises {
            m &= self.extension(p)?;
        }
        Ok(m & !self.extension(conclusion)? == 0)
    }

    /// A pair (X, Y) of Π with X ⊄ Y and X ∩ (X ∩ Y)′ = ∅, if any.
    pub fn orthomodularity_failure(&self) -> Option<(Mask, Mask)> {
        for &x in &self.pi {
            for &y in &self.pi {
                if x & !y != 0 && x & self.frame.ortho(x & y) == 0 {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_orthomodular(&self) -> bool {
        self.orthomodularity_failure().is_none()
    }

    /// The least member of Π containing world i.
    pub fn least_proposition(&self, i: usize) -> Mask {
        self.pi
            .iter()
            .filter(|&&x| x & bit(i) != 0)
            .fold(self.frame.full(), |m, &x| m & x)
    }

    /// The correspondence φ between worlds and nonempty propositions.
    ///
    /// Requiring i ∈ X iff φ(i) ⊆ X for every X ∈ Π, with φ(i) ∈ Π, forces
    /// φ(i) to be the least proposition containing i, so the candidate is
    /// unique. The check is that φ is a bijection onto the nonempty
    /// propositions with Rij iff φ(i) ⊈ φ(j)′.
    pub fn adequacy(&self) -> Result<Vec<Mask>, String> {
        let fr = &self.frame;
        let phi: Vec<Mask> = (0..fr.len()).map(|i| self.least_proposition(i)).collect();
        for (i, &p) in phi.iter().enumerate() {
            if !self.contains(p) {
                return Err(format!("no proposition of Π contains {}", fr.names[i]));
            }
        }
        let targets: BTreeSet<Mask> = phi.iter().copied().collect();
        let nonempty = self.pi.iter().filter(|&&x| x != 0).count();
        if targets.len() != phi.len() || targets.len() != nonempty {
            return Err("φ is not a bijection onto the nonempty propositions".into());
        }
        for i in 0..fr.len() {
            for j in 0..fr.len() {
                let lhs = fr.accessible(i, j);
                let rhs = phi[i] & !fr.ortho(phi[j]) != 0;
                if lhs != rhs {
                    return Err(format!("accessibility is not matched by φ at {} and {}", fr.names[i], fr.names[j]));
                }
            }
        }
        Ok(phi)
    }

    pub fn is_algebraically_adequate(&self) -> bool {
        self.adequacy().is_ok()
    }

    /// A^K: the propositions ordered by inclusion, with ′ (and ∼), and the
    /// valuation induced by ρ. Element k of the result is `propositions()[k]`.
    pub fn to_algebra(&self) -> Result<(FiniteStructure, Assignment), KripkeError> {
        let fr = &self.frame;
        let n = self.pi.len();
        if n > MAX_ELEMENTS {
            return Err(KripkeError::TooLarge(n));
        }
        let idx = |x: Mask| self.pi.binary_search(&x).expect("closed family");
        let names: Vec<String> = self
            .pi
            .iter()
            .map(|&x| {
                if x == 0 {
                    "0".to_string()
                } else if x == fr.full() {
                    "1".to_string()
                } else {
                    fr.mask_names(x)
                }
            })
            .collect();
        let mut le = Vec::new();
        for (a, &x) in self.pi.iter().enumerate() {
            for (b, &y) in self.pi.iter().enumerate() {
                if x & !y == 0 {
                    le.push((a, b));
                }
            }
        }
        let inv = self.pi.iter().map(|&x| idx(fr.ortho(x))).collect();
        let bz = match fr.bzacc {
            Some(_) => Some(
                self.pi
                    .iter()
                    .map(|&x| Ok(idx(fr.bz_ortho(x)?)))
                    .collect::<Result<Vec<_>, KripkeError>>()?,
            ),
            None => None,
        };
        let s = FiniteStructure::new(names, &le, inv, bz).map_err(|e| KripkeError::Parse {
            line: 0,
            message: e.to_string(),
        })?;
        let v = self.rho.iter().map(|(l, &x)| (l.clone(), idx(x))).collect();
        Ok((s, v))
    }

    /// Writes the realization in the file format read by [`Realization::parse`].
    /// Π is listed as `prop:` lines unless it is every proposition of the frame.
    pub fn to_text(&self) -> String {
        let fr = &self.frame;
        let n = fr.len();
        let mut out = format!("flavor: {}\nworlds: {}\n", fr.flavor.as_str(), fr.names.join(" "));
        for i in 0..n {
            for j in i..n {
                if fr.accessible(i, j) && (i != j || fr.flavor == Flavor::Symmetric) {
                    out.push_str(&format!("acc: {} {}\n", fr.names[i], fr.names[j]));
                }
            }
        }
        if let Some(rows) = &fr.bzacc {
            for (i, &row) in rows.iter().enumerate() {
                for j in i + 1..n {
                    if row & bit(j) != 0 {
                        out.push_str(&format!("bzacc: {} {}\n", fr.names[i], fr.names[j]));
                    }
                }
            }
        }
        let words = |m: Mask| bits(m).map(|w| fr.names[w].as_str()).collect::<Vec<_>>().join(" ");
        if self.pi != fr.all_propositions() {
            for (k, &x) in self.pi.iter().filter(|&&x| x != 0 && x != fr.full()).enumerate() {
                out.push_str(&format!("prop: x{k} = {}\n", words(x)));
            }
        }
        for (lit, &x) in &self.rho {
            out.push_str(&format!("rho: {lit} = {}\n", words(x)));
        }
        out
    }

    /// Parses a realization file:
    ///
    /// ```text
    /// flavor: ortho            # or symmetric / bz
    /// worlds: i j k
    /// acc: i j                 # unordered pairs
    /// bzacc: i k               # bz flavor only
    /// prop: x = i j            # optional; Π is generated from these
    /// rho: p = x               # a named proposition, or a world list
    /// ```
    pub fn parse(text: &str) -> Result<Self, KripkeError> {
        let mut flavor = Flavor::Ortho;
        let mut worlds: Option<Vec<String>> = None;
        let mut acc = Vec::new();
        let mut bzacc = Vec::new();
        let mut props: Vec<(usize, String, Vec<String>)> = Vec::new();
        let mut rhos: Vec<(usize, String, Vec<String>)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| KripkeError::Parse { line, message };
            let (key, rest) = content
                .split_once(':')
                .ok_or_else(|| err(format!("expected `key: value`, found `{content}`")))?;
            let toks: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            match key.trim() {
                "flavor" => {
                    flavor = Flavor::parse(rest.trim()).ok_or_else(|| err(format!("unknown flavor `{}`", rest.trim())))?
                }
                "worlds" => worlds = Some(toks),
                "acc" | "bzacc" => {
                    let [x, y] = &toks[..] else {
                        return Err(err(format!("`{}` expects two worlds", key.trim())));
                    };
                    if key.trim() == "acc" {
                        acc.push((line, x.clone(), y.clone()));
                    } else {
                        bzacc.push((line, x.clone(), y.clone()));
                    }
                }
                "prop" | "rho" => {
                    let (lhs, rhs) = rest.split_once('=').ok_or_else(|| err("expected `=`".into()))?;
                    let name = lhs.trim().to_string();
                    if name.is_empty() {
                        return Err(err("missing name".into()));
                    }
                    let items = rhs.split_whitespace().map(str::to_string).collect();
                    if key.trim() == "prop" {
                        props.push((line, name, items));
                    } else {
                        rhos.push((line, name, items));
                    }
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        let names = worlds.ok_or(KripkeError::Parse {
            line: 0,
            message: "missing `worlds`".into(),
        })?;
        let look = |w: &str| {
            names
                .iter()
                .position(|x| x == w)
                .ok_or_else(|| KripkeError::Unknown(w.to_string()))
        };
        let acc = acc
            .iter()
            .map(|(_, x, y)| Ok((look(x)?, look(y)?)))
            .collect::<Result<Vec<_>, KripkeError>>()?;
        let mut frame = Frame::new(names.clone(), &acc, if flavor == Flavor::Bz { Flavor::Symmetric } else { flavor })?;
        if flavor == Flavor::Bz {
            let bz = bzacc
                .iter()
                .map(|(_, x, y)| Ok((look(x)?, look(y)?)))
                .collect::<Result<Vec<_>, KripkeError>>()?;
            frame = frame.with_bz(&bz);
        }
        let mut named: BTreeMap<String, Mask> = BTreeMap::new();
        for (_, name, items) in &props {
            let m = items.iter().map(|w| look(w).map(bit)).collect::<Result<Vec<_>, _>>()?;
            if named.insert(name.clone(), m.iter().fold(0, |a, b| a | b)).is_some() {
                return Err(KripkeError::Duplicate(name.clone()));
            }
        }
        let mut rho = BTreeMap::new();
        for (_, lit, items) in &rhos {
            let m = match &items[..] {
                [one] if named.contains_key(one) => named[one],
                _ => items.iter().map(|w| look(w).map(bit)).try_fold(0, |a, b| b.map(|b| a | b))?,
            };
            rho.insert(lit.clone(), m);
        }
        if props.is_empty() {
            Realization::new(frame, None, rho)
        } else {
            let mut gens: Vec<Mask> = named.values().copied().collect();
            gens.extend(rho.values().copied());
            Realization::generated(frame, &gens, rho)
        }
    }
}

/// Smallest family containing ∅, I and `gens`, closed under ′, ∩ and (for
/// BZ frames) ∼.
fn closure(frame: &Frame, gens: &[Mask]) -> Result<Vec<Mask>, KripkeError> {
    let mut set: BTreeSet<Mask> = gens.iter().copied().collect();
    set.insert(0);
    set.insert(frame.full());
    loop {
        let cur: Vec<Mask> = set.iter().copied().collect();
        let before = set.len();
        for &x in &cur {
            set.insert(frame.ortho(x));
            if frame.bzacc.is_some() {
                set.insert(frame.bz_ortho(x)?);
            }
            for &y in &cur {
                set.insert(x & y);
            }
        }
        if set.len() == before {
            return Ok(set.into_iter().collect());
        }
    }
}

/// The canonical realization K^A of an algebraic realization, with the
/// bookkeeping linking worlds and elements.
#[derive(Debug, Clone)]
pub struct Canonical {
    pub realization: Realization,
    /// Element of each world.
    pub world_elem: Vec<Elem>,
    /// ψ(a): quasi-ideal of each element, as a world set.
    pub quasi_ideal: Vec<Mask>,
}

impl Canonical {
    /// World of a nonzero element.
    pub fn world_of(&self, a: Elem) -> Option<usize> {
        self.world_elem.iter().position(|&e| e == a)
    }
}

/// K^A: worlds are the nonzero elements, i R j iff i ⋢ j′, Π is the family
/// of quasi-ideals, ρ(p) = quasi-ideal of v(p). The frame is an orthoframe
/// when R is reflexive and a symmetric frame otherwise.
pub fn from_algebra(s: &FiniteStructure, v: &Assignment) -> Result<Canonical, KripkeError> {
    let world_elem: Vec<Elem> = s.elements().filter(|&e| e != s.zero()).collect();
    let w = |e: Elem| world_elem.iter().position(|&x| x == e);
    let mut acc = Vec::new();
    let mut reflexive = true;
    for (i, &a) in world_elem.iter().enumerate() {
        for (j, &b) in world_elem.iter().enumerate() {
            if !s.leq(a, s.inv(b)) {
                acc.push((i, j));
            } else if i == j {
                reflexive = false;
            }
        }
    }
    let names = world_elem.iter().map(|&e| s.name(e).to_string()).collect();
    let flavor = if reflexive { Flavor::Ortho } else { Flavor::Symmetric };
    let frame = Frame::new(names, &acc, flavor)?;
    let quasi_ideal: Vec<Mask> = s
        .elements()
        .map(|a| bits(s.down(a)).filter_map(w).fold(0, |m, i| m | bit(i)))
        .collect();
    let rho = v.iter().map(|(l, &e)| (l.clone(), quasi_ideal[e])).collect();
    let realization = Realization::new(frame, Some(quasi_ideal.clone()), rho)?;
    Ok(Canonical {
        realization,
        world_elem,
        quasi_ideal,
    })
}

/// Checks that ψ is an isomorphism from A onto A^{K^A} carrying v to v*.
pub fn psi_is_isomorphism(s: &FiniteStructure, v: &Assignment, c: &Canonical) -> Result<bool, KripkeError> {
    let (b, vstar) = c.realization.to_algebra()?;
    let pi = c.realization.propositions();
    let map: Vec<Elem> = s
        .elements()
        .map(|a| pi.binary_search(&c.quasi_ideal[a]).expect("quasi-ideal in Π"))
        .collect();
    let bijective = map.iter().collect::<BTreeSet<_>>().len() == s.len() && s.len() == b.len();
    let order = s
        .elements()
        .all(|x| s.elements().all(|y| s.leq(x, y) == b.leq(map[x], map[y])));
    let compl = s.elements().all(|x| map[s.inv(x)] == b.inv(map[x]));
    let val = v.iter().all(|(l, &e)| vstar.get(l) == Some(&map[e]));
    Ok(bijective && order && compl && val)
}

/// For the canonical realization of A^K, the extension of every formula is the set of propositions included in ρ(α).
/// Returns the first formula for which it fails.
pub fn rho_star_failure(k: &Realization, formulas: &[Formula]) -> Result<Option<Formula>, KripkeError> {
    let (a, v) = k.to_algebra()?;
    let c = from_algebra(&a, &v)?;
    let pi = k.propositions();
    for f in formulas {
        let x = k.extension(f)?;
        let star = c.realization.extension(f)?;
        let expected = c
            .world_elem
            .iter()
            .enumerate()
            .filter(|&(_, &e)| pi[e] & !x == 0)
            .fold(0, |m, (i, _)| m | bit(i));
        if star != expected {
            return Ok(Some(f.clone()));
        }
    }
    Ok(None)
}

/// For an adequate realization, ψ = φ maps K onto K^{A^K}
/// preserving accessibility, propositions and ρ.
pub fn adequate_isomorphism(k: &Realization) -> Result<bool, KripkeError> {
    let Ok(phi) = k.adequacy() else {
        return Ok(false);
    };
    let (a, v) = k.to_algebra()?;
    let c = from_algebra(&a, &v)?;
    let pi = k.propositions();
    // ψ(i) is the world of K^{A^K} whose element is the proposition φ(i).
    let psi: Vec<usize> = phi
        .iter()
        .map(|&p| c.world_of(pi.binary_search(&p).expect("φ lands in Π")).expect("nonempty"))
        .collect();
    let image = |x: Mask| bits(x).fold(0, |m, i| m | bit(psi[i]));
    let fr = &k.frame;
    let cf = &c.realization.frame;
    let acc = (0..fr.len()).all(|i| (0..fr.len()).all(|j| fr.accessible(i, j) == cf.accessible(psi[i], psi[j])));
    let props: BTreeSet<Mask> = pi.iter().map(|&x| image(x)).collect();
    let star: BTreeSet<Mask> = c.realization.propositions().iter().copied().collect();
    let rho = k
        .rho()
        .iter()
        .all(|(l, &x)| c.realization.rho().get(l) == Some(&image(x)));
    Ok(acc && props == star && rho)
}

/// At every world of K^A: i ⊨ α →₁ β iff α is impossible for i or the
/// Sasaki projection of i onto v(α) verifies β.
pub fn stalnaker_check(s: &FiniteStructure, c: &Canonical, alpha: &Formula, beta: &Formula) -> Result<bool, KripkeError> {
    let Some(l) = s.as_lattice() else {
        return Ok(false);
    };
    let k = &c.realization;
    let fr = &k.frame;
    let xa = k.extension(alpha)?;
    let xb = k.extension(beta)?;
    let gen_a = l.structure().join_all(bits(xa).map(|i| bit(c.world_elem[i])).fold(bit(s.zero()), |m, b| m | b));
    let gen_a = gen_a.expect("lattice joins exist");
    let arrow = k.extension(&Formula::arrow(1, alpha.clone(), beta.clone()))?;
    for i in 0..fr.len() {
        let impossible = fr.row(i) & xa == 0;
        let f = l.sasaki(c.world_elem[i], gen_a);
        let via = impossible || c.world_of(f).is_some_and(|w| xb & bit(w) != 0);
        if via != (arrow & bit(i) != 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Symmetric frames on `n` worlds from a bit code over the pairs i ≤ j.
pub fn symmetric_frame_from_code(n: usize, code: u64) -> Frame {
    let mut rows = vec![0; n];
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            if code & (1 << k) != 0 {
                rows[i] |= bit(j);
                rows[j] |= bit(i);
            }
            k += 1;
        }
    }
    Frame::from_rows(rows, Flavor::Symmetric)
}

/// Whether the involutive lattice of all propositions of a frame is regular
/// (a ⊓ a′ ⊑ b ⊔ b′, with ⊔ the closure of the union).
pub fn proposition_lattice_is_regular(frame: &Frame) -> bool {
    let props = frame.all_propositions();
    let join = |x: Mask, y: Mask| frame.ortho(frame.ortho(x | y));
    props.iter().all(|&a| {
        props.iter().all(|&b| {
            let lhs = a & frame.ortho(a);
            lhs & !join(b, frame.ortho(b)) == 0
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::{self, assignments};
    use crate::catalog;
    use crate::formula::{enumerate, parse, Dialect};

    fn lit_asg(s: &FiniteStructure, pairs: &[(&str, &str)]) -> Assignment {
        pairs.iter().map(|(l, e)| (l.to_string(), s.id(e).unwrap())).collect()
    }

    #[test]
    fn reflexive_frame_basics() {
        let f = Frame::new(vec!["i".into(), "j".into()], &[], Flavor::Ortho).unwrap();
        assert_eq!(f.ortho(f.full()), 0);
        assert_eq!(f.ortho(0), f.full());
        assert_eq!(f.all_propositions().len(), 4);
    }

    #[test]
    fn canonical_mo2() {
        let s = catalog::structure("MO2").unwrap();
        let v = lit_asg(&s, &[("p", "a")]);
        let c = from_algebra(&s, &v).unwrap();
        assert_eq!(c.realization.frame.len(), 5);
        assert_eq!(c.realization.propositions().len(), 6);
        assert_eq!(c.realization.frame.all_propositions().len(), 6);
        assert!(psi_is_isomorphism(&s, &v, &c).unwrap());
        assert!(c.realization.is_orthomodular());
        assert!(c.realization.is_algebraically_adequate());
        assert!(adequate_isomorphism(&c.realization).unwrap());
    }

    #[test]
    fn o6_is_not_orthomodular_as_frame() {
        let s = catalog::structure("O6").unwrap();
        let c = from_algebra(&s, &Assignment::new()).unwrap();
        assert!(!c.realization.is_orthomodular());
    }

    #[test]
    fn paraconsistent_world() {
        let f = Frame::new(vec!["i".into(), "j".into()], &[(0, 1)], Flavor::Symmetric).unwrap();
        // i is not self-accessible; {i} is a proposition with i ⊥ {i}.
        let x = bit(0);
        assert!(f.is_proposition(x));
        let k = Realization::new(f, None, BTreeMap::from([("p".to_string(), x)])).unwrap();
        let contra = parse(Dialect::Pql, "p & -p").unwrap();
        assert!(k.holds(0, &contra).unwrap());
    }

    #[test]
    fn single_world() {
        let f = Frame::new(vec!["w".into()], &[], Flavor::Ortho).unwrap();
        let k = Realization::new(f, None, BTreeMap::new()).unwrap();
        assert_eq!(k.propositions(), &[0, 1]);
        assert!(k.is_orthomodular());
        assert!(k.is_algebraically_adequate());
    }

    #[test]
    fn g12_algebra_and_kripke_agree() {
        let s = catalog::structure("G12").unwrap();
        let fs = enumerate(&["p", "q"], &[Formula::not], &[Formula::and, Formula::or], 2);
        let lits = vec!["p".to_string(), "q".to_string()];
        for v in assignments(&s, &lits).step_by(7) {
            let c = from_algebra(&s, &v).unwrap();
            for f in &fs {
                let a = algebraic::evaluate(&s, &v, f).unwrap();
                let x = c.realization.extension(f).unwrap();
                assert_eq!(x, c.quasi_ideal[a], "{f}");
                for i in 0..c.realization.frame.len() {
                    assert_eq!(c.realization.holds(i, f).unwrap(), c.realization.holds_via_accessibility(i, f).unwrap());
                }
            }
        }
    }

    #[test]
    fn strict_and_entailment_are_good_conditionals() {
        let s = catalog::structure("G12").unwrap();
        let lits = vec!["p".to_string(), "q".to_string()];
        let strict = parse(Dialect::Ol, "p -o q").unwrap();
        let ent = parse(Dialect::Ol, "p =>> q").unwrap();
        for v in assignments(&s, &lits) {
            let c = from_algebra(&s, &v).unwrap();
            let below = s.leq(v["p"], v["q"]);
            assert_eq!(c.realization.true_in(&strict).unwrap(), below);
            assert_eq!(c.realization.true_in(&ent).unwrap(), below);
            let a = algebraic::evaluate(&s, &v, &strict).unwrap();
            assert_eq!(c.realization.extension(&strict).unwrap(), c.quasi_ideal[a]);
        }
    }

    #[test]
    fn stalnaker_on_mo2_and_g12() {
        for name in ["MO2", "G12"] {
            let s = catalog::structure(name).unwrap();
            let lits = vec!["p".to_string(), "q".to_string()];
            for v in assignments(&s, &lits) {
                let c = from_algebra(&s, &v).unwrap();
                let p = Formula::lit("p");
                let q = Formula::lit("q");
                assert!(stalnaker_check(&s, &c, &p, &q).unwrap(), "{name}");
                assert!(stalnaker_check(&s, &c, &p, &p).unwrap(), "{name}");
            }
        }
    }

    #[test]
    fn rho_star_statement() {
        let s = catalog::structure("MO2").unwrap();
        let v = lit_asg(&s, &[("p", "a"), ("q", "b")]);
        let k = from_algebra(&s, &v).unwrap().realization;
        let fs = enumerate(&["p", "q"], &[Formula::not], &[Formula::and], 2);
        assert_eq!(rho_star_failure(&k, &fs).unwrap(), None);
    }

    #[test]
    fn realization_file() {
        let text = "flavor: ortho\nworlds: i j k\nacc: i j\nacc: j k\nrho: p = i\n";
        let k = Realization::parse(text).unwrap();
        assert_eq!(k.frame.len(), 3);
        let p = Formula::lit("p");
        assert!(k.holds(0, &p).unwrap());
        assert!(matches!(Realization::parse("worlds: i\nacc: i x\n"), Err(KripkeError::Unknown(_))));
        assert!(matches!(Realization::parse("worlds: i j\nrho: p = i j\nprop: x = j\nacc: i j\n"), Err(KripkeError::NotProposition(_))));
    }

    #[test]
    fn realization_text_round_trip() {
        for name in ["MO2", "O6", "G12"] {
            let s = catalog::structure(name).unwrap();
            let v = lit_asg(&s, &[("p", s.name(1))]);
            let k = from_algebra(&s, &v).unwrap().realization;
            let back = Realization::parse(&k.to_text()).unwrap();
            assert_eq!(back.propositions(), k.propositions(), "{name}");
            assert_eq!(back.rho(), k.rho(), "{name}");
            for i in 0..k.frame.len() {
                for j in 0..k.frame.len() {
                    assert_eq!(back.frame.accessible(i, j), k.frame.accessible(i, j), "{name}");
                }
            }
        }
        let sym = symmetric_frame_from_code(3, 0b101101);
        let k = Realization::new(sym, None, BTreeMap::new()).unwrap();
        let back = Realization::parse(&k.to_text()).unwrap();
        assert_eq!(back.propositions(), k.propositions());
    }

    #[test]
    fn frame_regularity_matches_lattice_regularity_small() {
        for n in 1..=3 {
            for code in 0..(1u64 << (n * (n + 1) / 2)) {
                let f = symmetric_frame_from_code(n, code);
                assert_eq!(f.is_regular(), proposition_lattice_is_regular(&f), "n={n} code={code}");
            }
        }
    }
}
