//! Orthopair semantics: pairs ⟨A₁, A₀⟩ of propositions of an orthoframe
//! with A₁ ⊆ A₀′, their BZ³-lattice operations, and BZL³ evaluation.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::Formula;
use crate::kripke::{Flavor, Frame, KripkeError};
use crate::lattice::{bit, FiniteStructure, Mask, StructureError, MAX_ELEMENTS};

/// Largest frame for which all orthopairs are enumerated.
pub const MAX_PAIR_WORLDS: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairError {
    #[error("frame is not an orthoframe")]
    NotOrthoframe,
    #[error("frame has {0} worlds; orthopairs are enumerated for at most {MAX_PAIR_WORLDS}")]
    FrameTooLarge(usize),
    #[error("{0} orthopairs exceed the 64-element structure limit")]
    TooManyPairs(usize),
    #[error("set {0} is not a proposition of the frame")]
    NotProposition(String),
    #[error("⟨{0}, {1}⟩ violates A₁ ⊆ A₀′")]
    NotOrthogonal(String, String),
    #[error("literal `{0}` has no value")]
    Unassigned(String),
    #[error("connective of `{0}` is not interpreted by orthopairs")]
    Unsupported(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Kripke(#[from] KripkeError),
}

/// An orthopair, as indices into the proposition list of its space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrthoPair {
    pub pos: usize,
    pub neg: usize,
}

/// The orthopairs of one orthoframe.
#[derive(Debug, Clone)]
pub struct PairSpace {
    pub frame: Frame,
    props: Vec<Mask>,
}

impl PairSpace {
    pub fn new(frame: Frame) -> Result<Self, PairError> {
        if (0..frame.len()).any(|i| !frame.accessible(i, i)) || frame.flavor() == Flavor::Bz {
            return Err(PairError::NotOrthoframe);
        }
        let props = frame.all_propositions();
        Ok(PairSpace { frame, props })
    }

    pub fn propositions(&self) -> &[Mask] {
        &self.props
    }

    pub fn index(&self, x: Mask) -> Result<usize, PairError> {
        self.props
            .binary_search(&x)
            .map_err(|_| PairError::NotProposition(self.frame.mask_names(x)))
    }

    fn at(&self, x: Mask) -> usize {
        self.props.binary_search(&x).expect("proposition")
    }

    pub fn pos(&self, a: OrthoPair) -> Mask {
        self.props[a.pos]
    }

    pub fn neg(&self, a: OrthoPair) -> Mask {
        self.props[a.neg]
    }

    fn ortho(&self, x: Mask) -> Mask {
        self.frame.ortho(x)
    }

    fn join(&self, x: Mask, y: Mask) -> Mask {
        self.ortho(self.ortho(x | y))
    }

    /// Builds ⟨A₁, A₀⟩ from world sets.
    pub fn pair(&self, pos: Mask, neg: Mask) -> Result<OrthoPair, PairError> {
        let (p, n) = (self.index(pos)?, self.index(neg)?);
        if pos & !self.ortho(neg) != 0 {
            return Err(PairError::NotOrthogonal(self.frame.mask_names(pos), self.frame.mask_names(neg)));
        }
        Ok(OrthoPair { pos: p, neg: n })
    }

    fn mk(&self, pos: Mask, neg: Mask) -> OrthoPair {
        OrthoPair {
            pos: self.at(pos),
            neg: self.at(neg),
        }
    }

    /// ⟨∅, I⟩.
    pub fn zero(&self) -> OrthoPair {
        self.mk(0, self.frame.full())
    }

    /// ⟨I, ∅⟩.
    pub fn one(&self) -> OrthoPair {
        self.mk(self.frame.full(), 0)
    }

    pub fn is_exact(&self, a: OrthoPair) -> bool {
        self.neg(a) == self.ortho(self.pos(a))
    }

    /// The exact pair ⟨X, X′⟩.
    pub fn exact(&self, x: Mask) -> Result<OrthoPair, PairError> {
        self.pair(x, self.ortho(x))
    }

    /// ⟨A₁, A₀⟩^◯′ = ⟨A₀, A₁⟩.
    pub fn fcomp(&self, a: OrthoPair) -> OrthoPair {
        OrthoPair { pos: a.neg, neg: a.pos }
    }

    /// ⟨A₁, A₀⟩^◯∼ = ⟨A₀, A₀′⟩.
    pub fn icomp(&self, a: OrthoPair) -> OrthoPair {
        let n = self.neg(a);
        self.mk(n, self.ortho(n))
    }

    /// ⟨A₁ ⊓ B₁, A₀ ⊔ B₀⟩.
    pub fn inf(&self, a: OrthoPair, b: OrthoPair) -> OrthoPair {
        self.mk(self.pos(a) & self.pos(b), self.join(self.neg(a), self.neg(b)))
    }

    /// ⟨A₁ ⊔ B₁, A₀ ⊓ B₀⟩.
    pub fn sup(&self, a: OrthoPair, b: OrthoPair) -> OrthoPair {
        self.mk(self.join(self.pos(a), self.pos(b)), self.neg(a) & self.neg(b))
    }

    /// □⟨A₁, A₀⟩ = ⟨A₁, A₁′⟩.
    pub fn nec(&self, a: OrthoPair) -> OrthoPair {
        let p = self.pos(a);
        self.mk(p, self.ortho(p))
    }

    /// ◇a = (□(a^◯′))^◯′.
    pub fn pos_op(&self, a: OrthoPair) -> OrthoPair {
        self.fcomp(self.nec(self.fcomp(a)))
    }

    /// A₁ ⊆ B₁ and B₀ ⊆ A₀.
    pub fn leq(&self, a: OrthoPair, b: OrthoPair) -> bool {
        self.pos(a) & !self.pos(b) == 0 && self.neg(b) & !self.neg(a) == 0
    }

    /// Every orthopair, ordered by (A₁, A₀) index.
    pub fn all_pairs(&self) -> Vec<OrthoPair> {
        let mut out = Vec::new();
        for (i, &p) in self.props.iter().enumerate() {
            for (j, &n) in self.props.iter().enumerate() {
                if p & !self.ortho(n) == 0 {
                    out.push(OrthoPair { pos: i, neg: j });
                }
            }
        }
        out
    }

    pub fn pair_name(&self, a: OrthoPair) -> String {
        format!("<{},{}>", self.frame.mask_names(self.pos(a)), self.frame.mask_names(self.neg(a)))
    }

    /// The first failing pair law, with a witness. The laws are □ = ◯′◯∼,
    /// ◯∼ = □◯′, ◇ = ◯∼◯′, strong De Morgan for ◯∼ and
    /// A ⊓ B^{◯∼◯∼} ⊑ A^{◯′◯∼} ⊔ B.
    pub fn pair_law_failure(&self) -> Option<(&'static str, OrthoPair, OrthoPair)> {
        let all = self.all_pairs();
        for &a in &all {
            if self.nec(a) != self.icomp(self.fcomp(a)) {
                return Some(("box", a, a));
            }
            if self.icomp(a) != self.nec(self.fcomp(a)) {
                return Some(("impossibility", a, a));
            }
            if self.pos_op(a) != self.fcomp(self.icomp(a)) {
                return Some(("possibility", a, a));
            }
            for &b in &all {
                if self.icomp(self.inf(a, b)) != self.sup(self.icomp(a), self.icomp(b)) {
                    return Some(("strong-de-morgan", a, b));
                }
                let lhs = self.inf(a, self.icomp(self.icomp(b)));
                let rhs = self.sup(self.icomp(self.fcomp(a)), b);
                if !self.leq(lhs, rhs) {
                    return Some(("interconnection", a, b));
                }
            }
        }
        None
    }

    /// The first failing BZ³-lattice law over all pairs: the BZ-lattice
    /// laws for ◯′ and ◯∼, inf/sup as greatest lower and least upper
    /// bounds, and the two BZ³ conditions.
    pub fn bz3_failure(&self) -> Option<(&'static str, OrthoPair, OrthoPair)> {
        let all = self.all_pairs();
        let zero = self.zero();
        for &a in &all {
            let checks: [(&str, bool); 5] = [
                ("′′", self.fcomp(self.fcomp(a)) == a),
                ("a ⊓ a∼ = 0", self.inf(a, self.icomp(a)) == zero),
                ("a ⊑ a∼∼", self.leq(a, self.icomp(self.icomp(a)))),
                ("a∼′ = a∼∼", self.fcomp(self.icomp(a)) == self.icomp(self.icomp(a))),
                ("leq reflexive", self.leq(a, a)),
            ];
            if let Some((name, _)) = checks.iter().find(|(_, ok)| !ok) {
                return Some((name, a, a));
            }
            for &b in &all {
                let m = self.inf(a, b);
                let j = self.sup(a, b);
                if !self.leq(m, a) || !self.leq(m, b) || !self.leq(a, j) || !self.leq(b, j) {
                    return Some(("bounds", a, b));
                }
                if all.iter().any(|&c| self.leq(c, a) && self.leq(c, b) && !self.leq(c, m)) {
                    return Some(("greatest lower bound", a, b));
                }
                if self.leq(a, b) {
                    if !self.leq(self.fcomp(b), self.fcomp(a)) {
                        return Some(("′ reverses order", a, b));
                    }
                    if !self.leq(self.icomp(b), self.icomp(a)) {
                        return Some(("∼ reverses order", a, b));
                    }
                }
                let kleene = self.leq(self.inf(a, self.fcomp(a)), self.sup(b, self.fcomp(b)));
                if !kleene {
                    return Some(("regularity", a, b));
                }
                if self.icomp(self.inf(a, b)) != self.sup(self.icomp(a), self.icomp(b)) {
                    return Some(("BZ³ (i)", a, b));
                }
                let lhs = self.inf(a, self.icomp(self.icomp(b)));
                let rhs = self.sup(self.icomp(self.fcomp(a)), b);
                if !self.leq(lhs, rhs) {
                    return Some(("BZ³ (ii)", a, b));
                }
            }
        }
        None
    }

    /// All orthopairs as a finite structure with ◯′ and ◯∼.
    pub fn to_structure(&self) -> Result<(FiniteStructure, Vec<OrthoPair>), PairError> {
        if self.frame.len() > MAX_PAIR_WORLDS {
            return Err(PairError::FrameTooLarge(self.frame.len()));
        }
        let all = self.all_pairs();
        if all.len() > MAX_ELEMENTS {
            return Err(PairError::TooManyPairs(all.len()));
        }
        let idx = |p: OrthoPair| all.binary_search(&p).expect("pair");
        let names = all
            .iter()
            .map(|&p| {
                if p == self.zero() {
                    "0".to_string()
                } else if p == self.one() {
                    "1".to_string()
                } else {
                    self.pair_name(p)
                }
            })
            .collect();
        let mut le = Vec::new();
        for (i, &a) in all.iter().enumerate() {
            for (j, &b) in all.iter().enumerate() {
                if self.leq(a, b) {
                    le.push((i, j));
                }
            }
        }
        let inv = all.iter().map(|&a| idx(self.fcomp(a))).collect();
        let bz = all.iter().map(|&a| idx(self.icomp(a))).collect();
        Ok((FiniteStructure::new(names, &le, inv, Some(bz))?, all))
    }

    /// v(f) for a BZL formula; defined connectives are expanded first.
    pub fn evaluate(&self, v: &BTreeMap<String, OrthoPair>, f: &Formula) -> Result<OrthoPair, PairError> {
        self.eval(v, &f.expand())
    }

    fn eval(&self, v: &BTreeMap<String, OrthoPair>, f: &Formula) -> Result<OrthoPair, PairError> {
        match f {
            Formula::Lit(n) => v.get(n).copied().ok_or_else(|| PairError::Unassigned(n.clone())),
            Formula::Not(a) => Ok(self.fcomp(self.eval(v, a)?)),
            Formula::INot(a) => Ok(self.icomp(self.eval(v, a)?)),
            Formula::And(x, y) => Ok(self.inf(self.eval(v, x)?, self.eval(v, y)?)),
            _ => Err(PairError::Unsupported(f.to_string())),
        }
    }

    /// First valuation (over all orthopairs) at which the meet of the
    /// premise values is not below the conclusion value.
    pub fn consequence_failure(
        &self,
        premises: &[Formula],
        conclusion: &Formula,
    ) -> Result<Option<BTreeMap<String, OrthoPair>>, PairError> {
        let mut lits: Vec<String> = Vec::new();
        for f in premises.iter().chain(std::iter::once(conclusion)) {
            for l in f.literals() {
                if !lits.contains(&l) {
                    lits.push(l);
                }
            }
        }
        let all = self.all_pairs();
        let mut counter = vec![0usize; lits.len()];
        loop {
            let v: BTreeMap<String, OrthoPair> = lits.iter().cloned().zip(counter.iter().map(|&k| all[k])).collect();
            let mut m = self.one();
            for p in premises {
                m = self.inf(m, self.evaluate(&v, p)?);
            }
            if !self.leq(m, self.evaluate(&v, conclusion)?) {
                return Ok(Some(v));
            }
            let mut k = lits.len();
            loop {
                if k == 0 {
                    return Ok(None);
                }
                k -= 1;
                counter[k] += 1;
                if counter[k] < all.len() {
                    break;
                }
                counter[k] = 0;
            }
        }
    }
}

/// T ⊨ α in every orthopair realization over the given frames.
pub fn bzl3_consequence(spaces: &[PairSpace], premises: &[Formula], conclusion: &Formula) -> Result<bool, PairError> {
    for s in spaces {
        if s.consequence_failure(premises, conclusion)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reflexive symmetric frames on `n` worlds from a bit code over the
/// pairs i < j.
pub fn orthoframe_from_code(n: usize, code: u64) -> Frame {
    let mut rows: Vec<Mask> = (0..n).map(bit).collect();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if code & (1 << k) != 0 {
                rows[i] |= bit(j);
                rows[j] |= bit(i);
            }
            k += 1;
        }
    }
    Frame::from_rows(rows, Flavor::Ortho)
}

/// The effects of the P9 fixture as real symmetric 2×2 matrices
/// [[p, q], [q, r]], entries scaled by 16.
pub const P9_EFFECTS: [(&str, [i64; 3]); 9] = [
    ("0", [0, 0, 0]),
    ("1", [16, 0, 16]),
    ("E", [8, 0, 8]),
    ("F", [12, 0, 4]),
    ("F'", [4, 0, 12]),
    ("G", [8, 0, 4]),
    ("G'", [8, 0, 12]),
    ("M", [7, 2, 3]),
    ("M'", [9, -2, 13]),
];

/// Four pure states of R²: e₁, e₂, (e₁+e₂)/√2, (e₁−e₂)/√2. Two states are
/// accessible iff they are not orthogonal.
pub fn p9_state_frame() -> Frame {
    let names = ["e1", "e2", "d+", "d-"].map(String::from).to_vec();
    let acc = [(0, 2), (0, 3), (1, 2), (1, 3)];
    Frame::new(names, &acc, Flavor::Ortho).expect("four states")
}

/// Probability of the effect with scaled entries `m` in state `s`, scaled
/// by 16.
fn probability16(m: [i64; 3], s: usize) -> i64 {
    let [p, q, r] = m;
    match s {
        0 => p,
        1 => r,
        2 => (p + 2 * q + r) / 2,
        _ => (p - 2 * q + r) / 2,
    }
}

/// f(E) = ⟨X₁^E, X₀^E⟩: the states assigning probability 1, and 0, to E.
pub fn quantum_pair(space: &PairSpace, m: [i64; 3]) -> Result<OrthoPair, PairError> {
    let n = space.frame.len();
    let one = (0..n).filter(|&s| probability16(m, s) == 16).fold(0, |x, s| x | bit(s));
    let zero = (0..n).filter(|&s| probability16(m, s) == 0).fold(0, |x, s| x | bit(s));
    space.pair(one, zero)
}

/// Checks on the P9 fixture that f preserves the order and sends ′ to ◯′
/// and ∼ to ◯∼. Returns the first failing law.
pub fn p9_quantum_pair_failure(p9: &FiniteStructure) -> Result<Option<String>, PairError> {
    let space = PairSpace::new(p9_state_frame())?;
    let mut f = BTreeMap::new();
    for (name, m) in P9_EFFECTS {
        let e = p9.elem(name)?;
        f.insert(e, quantum_pair(&space, m)?);
    }
    for a in p9.elements() {
        if f[&p9.inv(a)] != space.fcomp(f[&a]) {
            return Ok(Some(format!("f({}′) ≠ f({})^◯′", p9.name(a), p9.name(a))));
        }
        if let Some(t) = p9.bz(a) {
            if f[&t] != space.icomp(f[&a]) {
                return Ok(Some(format!("f({}∼) ≠ f({})^◯∼", p9.name(a), p9.name(a))));
            }
        }
        for b in p9.elements() {
            if p9.leq(a, b) && !space.leq(f[&a], f[&b]) {
                return Ok(Some(format!("f does not preserve {} ⊑ {}", p9.name(a), p9.name(b))));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::{self, Assignment};
    use crate::catalog;
    use crate::formula::{enumerate, parse, Dialect};
    use crate::kripke::{from_algebra, Realization};
    use crate::lattice::{Axiom, StructureClass};

    fn discrete(n: usize) -> PairSpace {
        PairSpace::new(orthoframe_from_code(n, 0)).unwrap()
    }

    #[test]
    fn exact_pairs_are_box_fixed() {
        let s = discrete(3);
        for &x in s.propositions() {
            let a = s.exact(x).unwrap();
            assert_eq!(s.nec(a), a);
            assert!(s.is_exact(a));
        }
    }

    #[test]
    fn pair_invariant_is_enforced() {
        let s = discrete(2);
        assert!(matches!(s.pair(1, 1), Err(PairError::NotOrthogonal(..))));
        assert!(matches!(PairSpace::new(Frame::from_rows(vec![0], Flavor::Symmetric)), Err(PairError::NotOrthoframe)));
    }

    #[test]
    fn pair_laws_on_small_frames() {
        for n in 1..=5usize {
            for code in 0..(1u64 << (n * (n - 1) / 2)) {
                let s = PairSpace::new(orthoframe_from_code(n, code)).unwrap();
                assert_eq!(s.pair_law_failure(), None, "n={n} code={code}");
            }
        }
    }

    #[test]
    fn bz3_laws_on_four_world_frames() {
        for code in 0..(1u64 << 6) {
            let s = PairSpace::new(orthoframe_from_code(4, code)).unwrap();
            assert_eq!(s.bz3_failure(), None, "code={code}");
        }
    }

    #[test]
    fn pair_structures_are_bz3() {
        let two = discrete(2);
        let (st, _) = two.to_structure().unwrap();
        assert_eq!(st.len(), 9);
        assert!(st.validate().is(StructureClass::Bz3Lattice));
        let mo2 = catalog::structure("MO2").unwrap();
        let k = from_algebra(&mo2, &Assignment::new()).unwrap();
        let s = PairSpace::new(k.realization.frame.clone()).unwrap();
        let (st, _) = s.to_structure().unwrap();
        assert_eq!(st.len(), 15);
        assert!(st.validate().is(StructureClass::Bz3Lattice));
        assert!(matches!(discrete(4).to_structure(), Err(PairError::TooManyPairs(81))));
    }

    #[test]
    fn k5_is_not_bz3() {
        let r = catalog::structure("K5").unwrap().validate();
        assert!(r.is(StructureClass::BzLattice));
        assert!(!r.is(StructureClass::Bz3Lattice));
        assert!(r.failure(Axiom::Bz3StrongDeMorgan).is_none());
        assert!(r.failure(Axiom::Bz3Interconnection).is_some());
    }

    #[test]
    fn excluded_middles() {
        let fuzzy = parse(Dialect::Bzl3, "p | -p").unwrap();
        let intu = parse(Dialect::Bzl3, "p | ~p").unwrap();
        let spaces: Vec<PairSpace> = (0..8).map(|c| PairSpace::new(orthoframe_from_code(3, c)).unwrap()).collect();
        assert!(bzl3_consequence(&spaces, std::slice::from_ref(&fuzzy), &intu).unwrap());
        assert!(bzl3_consequence(&spaces, std::slice::from_ref(&intu), &fuzzy).unwrap());
        let k5 = catalog::structure("K5").unwrap();
        let v = BTreeMap::from([("p".to_string(), k5.elem("1/4").unwrap())]);
        let a = algebraic::evaluate(&k5, &v, &intu).unwrap();
        let b = algebraic::evaluate(&k5, &v, &fuzzy).unwrap();
        assert!(k5.lt(a, b));
    }

    #[test]
    fn exact_pairs_follow_ol() {
        let fs = enumerate(&["p", "q"], &[Formula::not], &[Formula::and, Formula::or], 2);
        let mo2 = catalog::structure("MO2").unwrap();
        let frame = from_algebra(&mo2, &Assignment::new()).unwrap().realization.frame;
        let s = PairSpace::new(frame.clone()).unwrap();
        for &x in s.propositions() {
            for &y in s.propositions() {
                let rho = BTreeMap::from([("p".to_string(), x), ("q".to_string(), y)]);
                let k = Realization::new(frame.clone(), None, rho).unwrap();
                let v = BTreeMap::from([("p".to_string(), s.exact(x).unwrap()), ("q".to_string(), s.exact(y).unwrap())]);
                for f in &fs {
                    let got = s.evaluate(&v, f).unwrap();
                    assert_eq!(got, s.exact(k.extension(f).unwrap()).unwrap(), "{f}");
                }
            }
        }
    }

    #[test]
    fn p9_quantum_pairs() {
        let p9 = catalog::structure("P9").unwrap();
        assert_eq!(p9_quantum_pair_failure(&p9).unwrap(), None);
    }
}
