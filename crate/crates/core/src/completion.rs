//! MacNeille completion of finite involutive bounded posets and BZ-posets,
//! and the representation of an ortholattice by the orthoframe ⟨B⁺, ⊥̸⟩.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::algebraic::Assignment;
use crate::kripke::{from_algebra, Canonical, KripkeError, Realization};
use crate::lattice::{bits, Elem, FiniteStructure, Mask, StructureError, MAX_ELEMENTS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompletionError {
    #[error("completion has {0} cuts; at most 64 are supported")]
    TooLarge(usize),
    #[error("structure has no ∼ table")]
    NoBz,
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Kripke(#[from] KripkeError),
}

/// u(X): common upper bounds of X.
pub fn u_set(s: &FiniteStructure, x: Mask) -> Mask {
    s.upper_bounds(x)
}

/// l(X): common lower bounds of X.
pub fn l_set(s: &FiniteStructure, x: Mask) -> Mask {
    s.lower_bounds(x)
}

/// X′ = {a | a ⊑ b′ for every b ∈ X}.
pub fn cut_ortho(s: &FiniteStructure, x: Mask) -> Mask {
    bits(x).fold(s.full(), |m, b| m & s.down(s.inv(b)))
}

/// X∼ = {a | a ⊑ b∼ for every b ∈ X}.
pub fn cut_bz(s: &FiniteStructure, x: Mask) -> Option<Mask> {
    let bz = s.bz_table()?;
    Some(bits(x).fold(s.full(), |m, b| m & s.down(bz[b])))
}

/// The completion together with its cuts and the embedding h(a) = ⟨a].
#[derive(Debug, Clone)]
pub struct Completion {
    pub structure: FiniteStructure,
    /// Cut of each element of `structure`.
    pub cuts: Vec<Mask>,
    /// h: element of the source ↦ element of the completion.
    pub embed: Vec<Elem>,
}

impl Completion {
    /// Lines `embed: a = cut` for the source structure.
    pub fn embed_text(&self, source: &FiniteStructure) -> String {
        source
            .elements()
            .map(|a| format!("embed: {} = {}\n", source.name(a), self.structure.name(self.embed[a])))
            .collect()
    }
}

/// All cuts X = X′′, ascending as integers. Every X′ is an intersection of
/// principal ideals and every such intersection is a cut, so the cuts are
/// the ∩-closure of the principal ideals. Each cut is also checked against
/// the bound-set form X = l(u(X)).
pub fn cuts(s: &FiniteStructure) -> Vec<Mask> {
    let mut set: BTreeSet<Mask> = BTreeSet::new();
    set.insert(s.full());
    let gens: Vec<Mask> = s.elements().map(|a| s.down(a)).collect();
    let mut frontier = vec![s.full()];
    while let Some(x) = frontier.pop() {
        for &g in &gens {
            if set.insert(x & g) {
                frontier.push(x & g);
            }
        }
    }
    for &x in &set {
        assert_eq!(cut_ortho(s, cut_ortho(s, x)), x, "double prime fixes a cut");
        assert_eq!(l_set(s, u_set(s, x)), x, "bound-set closure fixes a cut");
    }
    set.into_iter().collect()
}

fn cut_name(s: &FiniteStructure, x: Mask) -> String {
    if let Some(a) = s.elements().find(|&a| s.down(a) == x) {
        return s.name(a).to_string();
    }
    let maximal: Vec<&str> = bits(x)
        .filter(|&a| bits(x).all(|b| b == a || !s.leq(a, b)))
        .map(|a| s.name(a))
        .collect();
    format!("{{{}}}", maximal.join(","))
}

fn build(s: &FiniteStructure, with_bz: bool) -> Result<Completion, CompletionError> {
    let cs = cuts(s);
    if cs.len() > MAX_ELEMENTS {
        return Err(CompletionError::TooLarge(cs.len()));
    }
    let idx = |x: Mask| cs.binary_search(&x).expect("closed under the operations");
    let names: Vec<String> = cs.iter().map(|&x| cut_name(s, x)).collect();
    let mut le = Vec::new();
    for (i, &x) in cs.iter().enumerate() {
        for (j, &y) in cs.iter().enumerate() {
            if x & !y == 0 {
                le.push((i, j));
            }
        }
    }
    let inv = cs.iter().map(|&x| idx(cut_ortho(s, x))).collect();
    let bz = if with_bz {
        let mut t = Vec::with_capacity(cs.len());
        for &x in &cs {
            t.push(idx(cut_bz(s, x).ok_or(CompletionError::NoBz)?));
        }
        Some(t)
    } else {
        None
    };
    let structure = FiniteStructure::new(names, &le, inv, bz)?;
    let embed = s.elements().map(|a| idx(s.down(a))).collect();
    Ok(Completion {
        structure,
        cuts: cs,
        embed,
    })
}

/// MacNeille completion of an involutive bounded poset: cuts ordered by
/// inclusion, meet ∩, join (∪)′′, complement X′.
pub fn macneille(s: &FiniteStructure) -> Result<Completion, CompletionError> {
    build(s, false)
}

/// MacNeille completion of a BZ-poset, carrying X∼ as well.
pub fn macneille_bz(s: &FiniteStructure) -> Result<Completion, CompletionError> {
    if !s.has_bz() {
        return Err(CompletionError::NoBz);
    }
    build(s, true)
}

/// Checks that h is injective, order preserving and reflecting, preserves
/// ′ (and ∼ when present), and preserves every meet and join that exists
/// in the source.
pub fn embedding_failure(s: &FiniteStructure, c: &Completion) -> Option<String> {
    let t = &c.structure;
    let h = &c.embed;
    if h.iter().collect::<BTreeSet<_>>().len() != s.len() {
        return Some("h is not injective".into());
    }
    for a in s.elements() {
        if h[s.inv(a)] != t.inv(h[a]) {
            return Some(format!("h does not preserve ′ at {}", s.name(a)));
        }
        if let (Some(x), true) = (s.bz(a), t.has_bz()) {
            if Some(h[x]) != t.bz(h[a]) {
                return Some(format!("h does not preserve ∼ at {}", s.name(a)));
            }
        }
        for b in s.elements() {
            if s.leq(a, b) != t.leq(h[a], h[b]) {
                return Some(format!("h does not preserve the order at {}, {}", s.name(a), s.name(b)));
            }
            if let Some(m) = s.meet(a, b) {
                if t.meet(h[a], h[b]) != Some(h[m]) {
                    return Some(format!("h does not preserve {} ⊓ {}", s.name(a), s.name(b)));
                }
            }
            if let Some(j) = s.join(a, b) {
                if t.join(h[a], h[b]) != Some(h[j]) {
                    return Some(format!("h does not preserve {} ⊔ {}", s.name(a), s.name(b)));
                }
            }
        }
    }
    None
}

/// a ⊑ a′ and b ⊑ b′ imply a ⊑ b′.
pub fn is_regular_poset(s: &FiniteStructure) -> bool {
    let sub: Vec<Elem> = s.elements().filter(|&a| s.leq(a, s.inv(a))).collect();
    sub.iter().all(|&a| sub.iter().all(|&b| s.leq(a, s.inv(b))))
}

/// The orthoframe ⟨B⁺, ⊥̸⟩ with Π all of its propositions, together with
/// the canonical realization whose Π is the family of quasi-ideals.
#[derive(Debug, Clone)]
pub struct FrameRepresentation {
    pub canonical: Canonical,
    pub full: Realization,
}

impl FrameRepresentation {
    /// Whether the lattice of all propositions of the frame is isomorphic to
    /// the MacNeille completion (propositions omit the element 0).
    pub fn matches_completion(&self, c: &Completion) -> Result<bool, CompletionError> {
        let (props, _) = self.full.to_algebra()?;
        Ok(props.isomorphism(&c.structure).is_some())
    }

    /// Whether every h(a) = ⟨a] (without 0) is a proposition of the frame.
    pub fn quasi_ideals_are_propositions(&self) -> bool {
        let fr = &self.full.frame;
        self.canonical.quasi_ideal.iter().all(|&x| fr.is_proposition(x))
    }
}

pub fn frame_of(s: &FiniteStructure) -> Result<FrameRepresentation, CompletionError> {
    let canonical = from_algebra(s, &Assignment::new())?;
    let full = Realization::new(canonical.realization.frame.clone(), None, Default::default())?;
    Ok(FrameRepresentation { canonical, full })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::lattice::StructureClass;

    #[test]
    fn bound_sets() {
        let p9 = catalog::structure("P9").unwrap();
        assert_eq!(u_set(&p9, 0), p9.full());
        let one = 1 << p9.one();
        assert_eq!(l_set(&p9, one), p9.full());
        let ef = (1 << p9.id("E").unwrap()) | (1 << p9.id("F").unwrap());
        assert_eq!(u_set(&p9, ef), one);
    }

    #[test]
    fn lattices_are_their_own_completion() {
        for (name, s) in catalog::standard_structures() {
            if !s.is_lattice() {
                continue;
            }
            let c = if s.has_bz() { macneille_bz(&s) } else { macneille(&s) }.unwrap();
            assert_eq!(c.structure.len(), s.len(), "{name}");
            assert!(s.isomorphism(&c.structure).is_some(), "{name}");
            assert_eq!(embedding_failure(&s, &c), None, "{name}");
        }
    }

    #[test]
    fn p9_completion() {
        let p9 = catalog::structure("P9").unwrap();
        assert_eq!(p9.meet(p9.id("E").unwrap(), p9.id("F").unwrap()), None);
        let c = macneille(&p9).unwrap();
        let (e, f) = (c.embed[p9.id("E").unwrap()], c.embed[p9.id("F").unwrap()]);
        let m = c.structure.meet(e, f).expect("completion is a lattice");
        assert!(!c.embed.contains(&m));
        assert_eq!(embedding_failure(&p9, &c), None);
        assert!(is_regular_poset(&p9));
        let r = c.structure.validate();
        assert!(r.is(StructureClass::RegularInvolutiveLattice));
        let cb = macneille_bz(&p9).unwrap();
        assert!(cb.structure.validate().is(StructureClass::BzLattice));
    }

    #[test]
    fn gap_is_filled() {
        let g = catalog::k5_square_gap();
        assert!(!g.is_lattice());
        let c = macneille_bz(&g).unwrap();
        assert_eq!(c.structure.len(), g.len() + 1);
        assert!(c.structure.validate().is(StructureClass::BzLattice));
        let centre = c.structure.elements().find(|x| !c.embed.contains(x)).unwrap();
        assert_eq!(c.structure.inv(centre), centre);
        for &x in &c.cuts {
            let t = cut_bz(&g, x).unwrap();
            assert!(c.cuts.binary_search(&t).is_ok());
        }
        assert_eq!(embedding_failure(&g, &c), None);
    }

    #[test]
    fn frame_representation() {
        for name in ["MO2", "BOOL(2)", "O6", "G12"] {
            let s = catalog::structure(name).unwrap();
            let r = frame_of(&s).unwrap();
            assert_eq!(r.full.frame.len(), s.len() - 1, "{name}");
            let c = macneille(&s).unwrap();
            assert!(r.matches_completion(&c).unwrap(), "{name}");
            assert!(r.quasi_ideals_are_propositions(), "{name}");
        }
    }
}
