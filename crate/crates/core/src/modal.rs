//! The modal translation τ of orthologic into the Brouwerian modal language,
//! B-realizations, quantum propositions and the modal orthomodular property.

use std::collections::{BTreeMap, BTreeSet};

use crate::formula::Formula;
use crate::kripke::{Frame, KripkeError, Realization};
use crate::lattice::{bit, Mask};

/// τ: p ↦ □◇p, ¬β ↦ □∼τ(β), β ∧ γ ↦ τ(β) ⋏ τ(γ). Defined connectives are
/// expanded first.
pub fn tau(f: &Formula) -> Result<Formula, KripkeError> {
    fn go(f: &Formula) -> Result<Formula, KripkeError> {
        match f {
            Formula::Lit(_) => Ok(Formula::nec(Formula::pos(f.clone()))),
            Formula::Not(a) => Ok(Formula::nec(Formula::cnot(go(a)?))),
            Formula::And(x, y) => Ok(Formula::cand(go(x)?, go(y)?)),
            _ => Err(KripkeError::Unsupported(f.to_string())),
        }
    }
    go(&f.expand())
}

/// A B-realization ⟨I, R, Π, ρ⟩ with Π closed under −, ∩ and ▫.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BRealization {
    pub frame: Frame,
    pi: Vec<Mask>,
    rho: BTreeMap<String, Mask>,
}

impl BRealization {
    /// Checks the closure conditions of a supplied family.
    pub fn new(frame: Frame, pi: Vec<Mask>, rho: BTreeMap<String, Mask>) -> Result<Self, KripkeError> {
        let mut pi = pi;
        pi.sort_unstable();
        pi.dedup();
        let m = BRealization { frame, pi, rho };
        m.check()?;
        Ok(m)
    }

    /// The smallest family containing I, ∅ and `generators`, closed under
    /// −, ∩ and ▫. The −/∩ closure of a family is the set of unions of the
    /// atoms of the partition it induces, so the fixpoint refines that
    /// partition until every union is ▫-closed.
    pub fn generated(frame: Frame, generators: &[Mask], rho: BTreeMap<String, Mask>) -> Result<Self, KripkeError> {
        let full = frame.full();
        let mut atoms: Vec<Mask> = if full == 0 { vec![] } else { vec![full] };
        let refine = |atoms: &mut Vec<Mask>, g: Mask| {
            *atoms = atoms
                .iter()
                .flat_map(|&a| [a & g, a & !g])
                .filter(|&x| x != 0)
                .collect();
        };
        for &g in generators.iter().chain(rho.values()) {
            refine(&mut atoms, g);
        }
        loop {
            if atoms.len() > MAX_B_ATOMS {
                return Err(KripkeError::TooLarge(1 << atoms.len().min(63)));
            }
            let unions = unions_of(&atoms);
            let fresh: Vec<Mask> = unions
                .iter()
                .map(|&x| boxdot(&frame, x))
                .filter(|&b| atoms.iter().any(|&a| a & b != 0 && a & !b != 0))
                .collect();
            if fresh.is_empty() {
                let mut pi = unions;
                pi.sort_unstable();
                for (lit, &x) in &rho {
                    if pi.binary_search(&x).is_err() {
                        return Err(KripkeError::NotProposition(format!("{} (ρ({lit}))", frame.mask_names(x))));
                    }
                }
                return Ok(BRealization { frame, pi, rho });
            }
            for b in fresh {
                refine(&mut atoms, b);
            }
        }
    }

    fn check(&self) -> Result<(), KripkeError> {
        let f = &self.frame;
        let full = f.full();
        let not_closed = |op, x| KripkeError::NotClosed {
            op,
            set: f.mask_names(x),
        };
        if !self.contains(0) || !self.contains(full) {
            return Err(not_closed("bounds", 0));
        }
        for &x in &self.pi {
            if !self.contains(full & !x) {
                return Err(not_closed("−", x));
            }
            if !self.contains(boxdot(f, x)) {
                return Err(not_closed("▫", x));
            }
            for &y in &self.pi {
                if !self.contains(x & y) {
                    return Err(not_closed("∩", x & y));
                }
            }
        }
        for (lit, &x) in &self.rho {
            if !self.contains(x) {
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

    /// ρ(f) for a modal formula over !, ^, [] and <>.
    pub fn extension(&self, f: &Formula) -> Result<Mask, KripkeError> {
        let fr = &self.frame;
        let full = fr.full();
        match f {
            Formula::Lit(n) => self.rho.get(n).copied().ok_or_else(|| KripkeError::Unassigned(n.clone())),
            Formula::CNot(a) => Ok(full & !self.extension(a)?),
            Formula::CAnd(x, y) => Ok(self.extension(x)? & self.extension(y)?),
            Formula::Nec(a) => Ok(boxdot(fr, self.extension(a)?)),
            Formula::Pos(a) => Ok(full & !boxdot(fr, full & !self.extension(a)?)),
            _ => Err(KripkeError::Unsupported(f.to_string())),
        }
    }

    /// i ⊨ f.
    pub fn holds(&self, i: usize, f: &Formula) -> Result<bool, KripkeError> {
        Ok(self.extension(f)? & bit(i) != 0)
    }

    /// Π_Q: the smallest family containing every ρ(□◇p), closed under ′
    /// and ∩ (together with I and ∅).
    pub fn quantum_propositions(&self) -> Vec<Mask> {
        let fr = &self.frame;
        let mut set: BTreeSet<Mask> = self.rho.values().map(|&x| box_diamond(fr, x)).collect();
        set.insert(0);
        set.insert(fr.full());
        loop {
            let cur: Vec<Mask> = set.iter().copied().collect();
            let before = set.len();
            for &x in &cur {
                set.insert(fr.ortho(x));
                for &y in &cur {
                    set.insert(x & y);
                }
            }
            if set.len() == before {
                return set.into_iter().collect();
            }
        }
    }

    /// Witness (X, Y) in Π_Q of a failure of the orthomodular property.
    pub fn b_zero_failure(&self) -> Option<(Mask, Mask)> {
        let q = self.quantum_propositions();
        let fr = &self.frame;
        for &x in &q {
            for &y in &q {
                if x & !y != 0 && x & fr.ortho(x & y) == 0 {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// Whether this is a B°-realization.
    pub fn is_b_zero(&self) -> bool {
        self.b_zero_failure().is_none()
    }
}

/// Largest partition whose Boolean closure is enumerated.
const MAX_B_ATOMS: usize = 20;

fn unions_of(atoms: &[Mask]) -> Vec<Mask> {
    let mut out = vec![0];
    for &a in atoms {
        let n = out.len();
        for i in 0..n {
            out.push(out[i] | a);
        }
    }
    out
}

/// ▫X: worlds all of whose accessible worlds lie in X.
pub fn boxdot(frame: &Frame, x: Mask) -> Mask {
    (0..frame.len())
        .filter(|&i| frame.row(i) & !x == 0)
        .fold(0, |m, i| m | bit(i))
}

fn box_diamond(frame: &Frame, x: Mask) -> Mask {
    let full = frame.full();
    boxdot(frame, full & !boxdot(frame, full & !x))
}

/// M^K: same frame and ρ on literals, Π the closure of the literal values.
pub fn ol_to_b(k: &Realization) -> Result<BRealization, KripkeError> {
    let rho = k.rho().clone();
    BRealization::generated(k.frame.clone(), &[], rho)
}

/// K^M: same frame, ρ*(p) = ρ(□◇p), Π* the ′/∩ closure of these values.
pub fn b_to_ol(m: &BRealization) -> Result<Realization, KripkeError> {
    let rho: BTreeMap<String, Mask> = m
        .rho
        .iter()
        .map(|(l, &x)| (l.clone(), box_diamond(&m.frame, x)))
        .collect();
    let gens: Vec<Mask> = rho.values().copied().collect();
    Realization::generated(m.frame.clone(), &gens, rho)
}

/// Π_Q ⊆ Π, and Π_Q equals the propositions of K^M.
pub fn quantum_propositions_match(m: &BRealization) -> Result<bool, KripkeError> {
    let q = m.quantum_propositions();
    let inside = q.iter().all(|&x| m.contains(x));
    let k = b_to_ol(m)?;
    Ok(inside && k.propositions() == q.as_slice())
}

/// The modal orthomodularity schema α ⋏ ∼β ⊃ ◇[α ⋏ □∼(α ⋏ β)], written
/// with ! and ^ only.
pub fn b_zero_schema(alpha: &Formula, beta: &Formula) -> Formula {
    let ab = Formula::cand(alpha.clone(), beta.clone());
    let consequent = Formula::pos(Formula::cand(alpha.clone(), Formula::nec(Formula::cnot(ab))));
    let antecedent = Formula::cand(alpha.clone(), Formula::cnot(beta.clone()));
    Formula::cnot(Formula::cand(antecedent, Formula::cnot(consequent)))
}

/// First pair of formulas (from `formulas`, translated by τ) at which the
/// schema fails at some world of `m`.
pub fn b_zero_schema_failure(m: &BRealization, formulas: &[Formula]) -> Result<Option<(Formula, Formula)>, KripkeError> {
    let images = formulas.iter().map(tau).collect::<Result<Vec<_>, _>>()?;
    for (a, ta) in formulas.iter().zip(&images) {
        for (b, tb) in formulas.iter().zip(&images) {
            if m.extension(&b_zero_schema(ta, tb))? != m.frame.full() {
                return Ok(Some((a.clone(), b.clone())));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::{assignments, Assignment};
    use crate::catalog;
    use crate::formula::{enumerate, parse, Dialect};
    use crate::kripke::{from_algebra, Flavor};
    use crate::lattice::StructureClass;

    fn ol_formulas(depth: usize) -> Vec<Formula> {
        enumerate(&["p", "q"], &[Formula::not], &[Formula::and], depth)
    }

    #[test]
    fn tau_clauses() {
        let p = parse(Dialect::Ol, "p").unwrap();
        assert_eq!(tau(&p).unwrap().to_string(), "[]<>p");
        let np = parse(Dialect::Ol, "-p").unwrap();
        assert_eq!(tau(&np).unwrap().to_string(), "[]![]<>p");
        let pq = parse(Dialect::Ol, "p & q").unwrap();
        assert_eq!(tau(&pq).unwrap().to_string(), "[]<>p ^ []<>q");
    }

    #[test]
    fn singleton_box_is_identity() {
        let f = Frame::new(vec!["w".into()], &[], Flavor::Ortho).unwrap();
        let m = BRealization::generated(f, &[], BTreeMap::from([("p".to_string(), 1)])).unwrap();
        let p = Formula::lit("p");
        let bp = Formula::nec(p.clone());
        assert_eq!(m.extension(&p).unwrap(), m.extension(&bp).unwrap());
    }

    #[test]
    fn tau_preserves_satisfaction_mo2_and_g12() {
        let fs = ol_formulas(3);
        let lits = vec!["p".to_string(), "q".to_string()];
        for name in ["MO2", "G12"] {
            let s = catalog::structure(name).unwrap();
            for v in assignments(&s, &lits).step_by(5) {
                let k = from_algebra(&s, &v).unwrap().realization;
                let m = ol_to_b(&k).unwrap();
                let back = b_to_ol(&m).unwrap();
                for f in &fs {
                    let x = k.extension(f).unwrap();
                    assert_eq!(m.extension(&tau(f).unwrap()).unwrap(), x, "{name} {f}");
                    assert_eq!(back.extension(f).unwrap(), x, "{name} {f}");
                }
                assert!(quantum_propositions_match(&m).unwrap());
            }
        }
    }

    #[test]
    fn box_diamond_is_idempotent_on_catalog() {
        for (_, s) in catalog::standard_structures() {
            if !s.validate().is(StructureClass::Ortholattice) {
                continue;
            }
            for a in s.elements() {
                let v: Assignment = BTreeMap::from([("p".to_string(), a)]);
                let k = from_algebra(&s, &v).unwrap().realization;
                let m = ol_to_b(&k).unwrap();
                let bd = Formula::nec(Formula::pos(Formula::lit("p")));
                let bdbd = Formula::nec(Formula::pos(bd.clone()));
                assert_eq!(m.extension(&bd).unwrap(), m.extension(&bdbd).unwrap());
            }
        }
    }

    #[test]
    fn b_zero_on_orthomodular_and_o6() {
        let fs = ol_formulas(2);
        let lits = vec!["p".to_string(), "q".to_string()];
        for name in ["MO2", "BOOL(2)"] {
            let s = catalog::structure(name).unwrap();
            for v in assignments(&s, &lits) {
                let m = ol_to_b(&from_algebra(&s, &v).unwrap().realization).unwrap();
                assert!(m.is_b_zero());
                assert_eq!(b_zero_schema_failure(&m, &fs).unwrap(), None);
            }
        }
        let o6 = catalog::structure("O6").unwrap();
        let any_fail = assignments(&o6, &lits).any(|v| {
            let m = ol_to_b(&from_algebra(&o6, &v).unwrap().realization).unwrap();
            !m.is_b_zero()
        });
        assert!(any_fail);
    }

    #[test]
    fn closure_errors() {
        let f = Frame::new(vec!["i".into(), "j".into()], &[(0, 1)], Flavor::Ortho).unwrap();
        let err = BRealization::new(f, vec![0, 1, 3], BTreeMap::new()).unwrap_err();
        assert!(matches!(err, KripkeError::NotClosed { .. }));
    }
}
