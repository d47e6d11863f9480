//! Replayable acceptance criteria. Each criterion recomputes its claims
//! from the catalog and reports PASS or FAIL with witness lines.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebraic::{
    self, assignments, consequence, evaluate, good_conditional_failure, import_export_failure, logical_truth,
    realizable, verifiable, weak_consequence, Assignment,
};
use crate::catalog;
use crate::completion::{embedding_failure, macneille, macneille_bz};
use crate::effect::{conditional_search, m4_to_m3, paql_rule_countermodel, term_closure, PartialClass, ValuationMode};
use crate::formula::{enumerate, parse, Dialect, Formula};
use crate::kripke::{adequate_isomorphism, from_algebra, psi_is_isomorphism};
use crate::lattice::{FiniteStructure, StructureClass};
use crate::modal::{b_zero_schema_failure, ol_to_b, tau};
use crate::orthopair::{bzl3_consequence, orthoframe_from_code, PairSpace};
use crate::proof::{self, Calculus, Config};

/// An acceptance criterion with its replay id.
#[derive(Debug, Clone, Copy)]
pub struct Criterion {
    pub number: usize,
    pub id: &'static str,
    pub title: &'static str,
    run: fn(&mut Vec<String>) -> Result<(), String>,
}

pub const CRITERIA: [Criterion; 12] = [
    Criterion {
        number: 1,
        id: "G12-PASTE",
        title: "G12 pastes from its diagram and is orthomodular in all four forms",
        run: g12_paste,
    },
    Criterion {
        number: 2,
        id: "B30-OAL",
        title: "B30 fails the orthoarguesian law along the recorded chain",
        run: b30_oal,
    },
    Criterion {
        number: 3,
        id: "OM-FORMS",
        title: "O6 and G14 separate the orthomodularity forms",
        run: om_forms,
    },
    Criterion {
        number: 4,
        id: "CONDITIONALS",
        title: "polynomial conditionals and weak import-export",
        run: conditionals,
    },
    Criterion {
        number: 5,
        id: "ANOMALIES",
        title: "realizability, verifiability and weak consequence",
        run: anomalies,
    },
    Criterion {
        number: 6,
        id: "CANONICAL",
        title: "canonical transformations between algebras and frames",
        run: canonical,
    },
    Criterion {
        number: 7,
        id: "MODAL-BRIDGE",
        title: "the modal translation preserves satisfaction",
        run: modal_bridge,
    },
    Criterion {
        number: 8,
        id: "MACNEILLE",
        title: "MacNeille completions of P9, the lattice fixtures and K5",
        run: macneille_suite,
    },
    Criterion {
        number: 9,
        id: "QMV",
        title: "M4, M3, the homomorphism and conditional search",
        run: qmv_suite,
    },
    Criterion {
        number: 10,
        id: "BZL3-SEPARATION",
        title: "excluded middles in K5 and in orthopair realizations",
        run: bzl3_separation,
    },
    Criterion {
        number: 11,
        id: "PROOF-KERNEL",
        title: "shipped derivations, mutations, soundness and search",
        run: proof_kernel,
    },
    Criterion {
        number: 12,
        id: "PAQL",
        title: "partial-sum rule soundness and separations",
        run: paql_suite,
    },
];

/// Result of replaying one criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub number: usize,
    pub id: &'static str,
    pub pass: bool,
    pub witness: Vec<String>,
    /// The first claim that failed.
    pub failure: Option<String>,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} {}", self.number, self.id)?;
        if let Some(why) = &self.failure {
            write!(f, ": {why}")?;
        }
        Ok(())
    }
}

/// Finds a criterion by number or id, case-insensitively.
pub fn find(key: &str) -> Option<&'static Criterion> {
    CRITERIA
        .iter()
        .find(|c| c.id.eq_ignore_ascii_case(key) || key.parse::<usize>().ok() == Some(c.number))
}

pub fn run(c: &Criterion) -> Outcome {
    let mut witness = Vec::new();
    let result = (c.run)(&mut witness);
    Outcome {
        number: c.number,
        id: c.id,
        pass: result.is_ok(),
        witness,
        failure: result.err(),
    }
}

pub fn run_all() -> Vec<Outcome> {
    CRITERIA.iter().map(run).collect()
}

fn ensure(ok: bool, claim: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(claim())
    }
}

fn structure(name: &str) -> Result<FiniteStructure, String> {
    catalog::structure(name).map_err(|e| e.to_string())
}

fn formula(dialect: Dialect, text: &str) -> Result<Formula, String> {
    parse(dialect, text).map_err(|e| format!("{text}: {e}"))
}

fn g12_paste(w: &mut Vec<String>) -> Result<(), String> {
    let d = catalog::diagram("G12-DIAGRAM").map_err(|e| e.to_string())?;
    let pasted = catalog::paste(&d).map_err(|e| e.to_string())?;
    let fixture = structure("G12")?;
    w.push(format!("pasted {} elements from the G12 diagram", pasted.len()));
    ensure(pasted.len() == 12, || format!("pasted G12 has {} elements", pasted.len()))?;
    let kind = pasted.validate().kind;
    w.push(format!("class: {}", kind.map_or("none", |k| k.as_str())));
    ensure(kind == Some(StructureClass::OrthomodularLattice), || "pasted G12 is not orthomodular".into())?;
    let forms = pasted.orthomodular_forms();
    ensure(
        forms.om_i.holds() && forms.om_ii.holds() && forms.om_iii.holds() && forms.om_iv.holds(),
        || format!("orthomodularity forms disagree: {forms:?}"),
    )?;
    w.push("omI omII omIII omIV: all hold".into());
    ensure(catalog::same_by_names(&pasted, &fixture), || "pasted G12 differs from the fixture".into())?;
    w.push("pasted structure equals the committed fixture".into());
    Ok(())
}

fn b30_oal(w: &mut Vec<String>) -> Result<(), String> {
    let s = structure("B30")?;
    let l = s.as_lattice().ok_or("B30 is not a lattice")?;
    let id = |n: &str| s.elem(n).map_err(|e| e.to_string());
    let (a, b, c) = (id("a")?, id("b")?, id("c")?);
    let name = |x| s.name(x).to_string();
    let steps = [
        ("sasaki(a,b')", l.sasaki(a, s.inv(b)), "e"),
        ("sasaki(a,c')", l.sasaki(a, s.inv(c)), "i"),
        ("join(b,c)", l.join(b, c), "l'"),
    ];
    for (label, got, want) in steps {
        w.push(format!("{label} = {}", name(got)));
        ensure(name(got) == want, || format!("{label} = {}, expected {want}", name(got)))?;
    }
    let (e, i, lp) = (id("e")?, id("i")?, id("l'")?);
    let inner = l.meet(lp, l.join(e, i));
    w.push(format!("meet(l', join(e,i)) = {}", name(inner)));
    ensure(inner == s.zero(), || format!("meet(l', join(e,i)) = {}", name(inner)))?;
    let rhs = l.oal_rhs(a, b, c);
    w.push(format!("rhs = {}", name(rhs)));
    ensure(rhs == b, || format!("rhs = {}, expected b", name(rhs)))?;
    ensure(!s.leq(a, b), || "a ⊑ b".into())?;
    w.push("a ⋢ b".into());
    ensure(l.check_oal().is_err(), || "exhaustive check found no failure".into())?;
    w.push("chain: e, i, l', 0, b".into());
    Ok(())
}

fn om_forms(w: &mut Vec<String>) -> Result<(), String> {
    let o6 = structure("O6")?;
    let kind = o6.validate().kind;
    ensure(kind == Some(StructureClass::Ortholattice), || format!("O6 classified {kind:?}"))?;
    let f = o6.orthomodular_forms();
    ensure(f.om_i.fails() && f.om_ii.fails() && f.om_iii.fails() && f.om_iv.fails(), || {
        format!("O6 forms: {f:?}")
    })?;
    w.push("O6: ortholattice, omI omII omIII omIV all fail".into());
    let g14 = structure("G14")?;
    let f = g14.orthomodular_forms();
    ensure(f.om_iii.holds(), || "G14 fails a ⊑ b and a′ ⊓ b = 0 ⇒ a = b".into())?;
    ensure(f.om_i.fails() && f.om_iv.fails(), || format!("G14 forms: {f:?}"))?;
    let f_elem = g14.elem("f").map_err(|e| e.to_string())?;
    ensure(g14.leq(f_elem, g14.inv(f_elem)), || "G14 has f ⋢ f′".into())?;
    w.push("G14: omIII holds, omI and omIV fail, f ⊑ f′".into());
    let mut lattices = catalog::structures_of_class(StructureClass::InvolutiveLattice);
    if !lattices.iter().any(|(n, _)| n == "G14") {
        lattices.push(("G14".into(), g14));
    }
    for (name, s) in &lattices {
        let f = s.orthomodular_forms();
        if f.om_i.holds() {
            ensure(f.om_iii.holds() && f.om_iv.holds(), || format!("{name}: omI without omIII and omIV"))?;
        }
        if f.om_iv.holds() {
            let ok = s.elements().all(|a| s.meet(a, s.inv(a)) == Some(s.zero()));
            ensure(ok, || format!("{name}: omIV without a ⊓ a′ = 0"))?;
        }
    }
    w.push(format!("implications checked on {} involutive lattices", lattices.len()));
    Ok(())
}

fn catalog_omls() -> Vec<(String, FiniteStructure)> {
    catalog::structures_of_class(StructureClass::OrthomodularLattice)
}

/// Catalog structure and triple (a, b, c) at which →ᵢ violates weak
/// import-export, for i = 2..5.
pub const IMPORT_EXPORT_VIOLATIONS: [(u8, &str, [&str; 3]); 4] = [
    (2, "MO(3)", ["a", "b", "a'"]),
    (3, "MO2", ["a", "b", "a'"]),
    (4, "MO2", ["a", "b", "a'"]),
    (5, "MO2", ["a", "b", "a"]),
];

fn conditionals(w: &mut Vec<String>) -> Result<(), String> {
    let omls = catalog_omls();
    let lits = ["p".to_string(), "q".to_string()];
    let p = Formula::lit("p");
    let q = Formula::lit("q");
    let pairs = [
        (p.clone(), q.clone()),
        (Formula::not(p.clone()), q.clone()),
        (Formula::and(p.clone(), q.clone()), p.clone()),
        (p.clone(), Formula::or(p.clone(), Formula::not(q.clone()))),
    ];
    for (name, s) in &omls {
        let l = s.as_lattice().ok_or_else(|| format!("{name} is not a lattice"))?;
        for i in 1..=5u8 {
            ensure(good_conditional_failure(&l, i).is_none(), || format!("{name}: →{i} is not an implication"))?;
        }
        if s.len() <= 16 {
            for v in assignments(s, &lits) {
                for (x, y) in &pairs {
                    for i in 1..=5u8 {
                        let vx = eval(s, &v, x)?;
                        let vy = eval(s, &v, y)?;
                        let arrow = eval(s, &v, &Formula::arrow(i, x.clone(), y.clone()))?;
                        ensure(s.leq(vx, vy) == (arrow == s.one()), || format!("{name}: →{i} at {x}, {y}"))?;
                    }
                }
            }
        }
        ensure(import_export_failure(&l, 1).is_none(), || format!("{name}: →1 violates weak import-export"))?;
    }
    w.push(format!("→1..→5 are implications on {} orthomodular lattices", omls.len()));
    w.push("→1 satisfies weak import-export on all of them".into());
    for (i, name, [a, b, c]) in IMPORT_EXPORT_VIOLATIONS {
        let s = structure(name)?;
        let l = s.as_lattice().ok_or("not a lattice")?;
        let id = |n: &str| s.elem(n).map_err(|e| e.to_string());
        let (a, b, c) = (id(a)?, id(b)?, id(c)?);
        ensure(l.compatible(c, a), || format!("{name}: recorded c is not compatible with a"))?;
        let lhs = l.leq(l.meet(c, a), b);
        let rhs = l.leq(c, algebraic::arrow_value(&l, i, a, b));
        ensure(lhs != rhs, || format!("{name}: recorded violation of →{i} does not replay"))?;
        w.push(format!(
            "→{i} violates weak import-export in {name} at a={}, b={}, c={}",
            s.name(a),
            s.name(b),
            s.name(c)
        ));
    }
    Ok(())
}

fn eval(s: &FiniteStructure, v: &Assignment, f: &Formula) -> Result<usize, String> {
    evaluate(s, v, f).map_err(|e| e.to_string())
}

fn anomalies(w: &mut Vec<String>) -> Result<(), String> {
    let mo2 = structure("MO2")?;
    let mo2_list = vec![("MO2".to_string(), mo2.clone())];
    let gamma = formula(Dialect::Oql, "-(p ->1 (q ->1 p))")?;
    let wit = realizable(&mo2_list, std::slice::from_ref(&gamma))
        .map_err(|e| e.to_string())?
        .ok_or("γ is not realizable in MO2")?;
    w.push(format!("γ realizable: {wit}"));
    let v: Assignment = BTreeMap::from([("p".to_string(), mo2.elem("a").unwrap()), ("q".to_string(), mo2.elem("b").unwrap())]);
    let vg = eval(&mo2, &v, &gamma)?;
    ensure(vg == eval(&mo2, &v, &Formula::lit("p"))?, || "v(γ) ≠ v(α) at p=a, q=b".into())?;
    w.push(format!("at p=a, q=b: v(γ) = v(p) = {}", mo2.name(vg)));
    let ols = catalog::structures_of_class(StructureClass::Ortholattice);
    ensure(
        verifiable(&ols, std::slice::from_ref(&gamma)).map_err(|e| e.to_string())?.is_none(),
        || "γ is verifiable".into(),
    )?;
    w.push(format!("γ not verifiable over {} catalog ortholattices", ols.len()));
    let dl = formula(Dialect::Ol, "p & (q | r)")?;
    let dr = formula(Dialect::Ol, "p & q | p & r")?;
    let cm = consequence(&mo2_list, std::slice::from_ref(&dl), &dr)
        .map_err(|e| e.to_string())?
        .ok_or("distributivity holds in MO2")?;
    w.push(format!("distributivity countermodel: {cm}"));
    let omls = catalog_omls();
    ensure(
        weak_consequence(&omls, std::slice::from_ref(&dl), &dr).map_err(|e| e.to_string())?.is_none(),
        || "weak consequence fails for distributivity".into(),
    )?;
    w.push(format!("distributivity is a weak consequence over {} orthomodular lattices", omls.len()));
    let hook = formula(Dialect::Oql, "p ->1 q")?;
    let contra = formula(Dialect::Oql, "-q ->1 -p")?;
    let cm = consequence(&omls, std::slice::from_ref(&hook), &contra)
        .map_err(|e| e.to_string())?
        .ok_or("contraposition of →1 holds")?;
    w.push(format!("contraposition countermodel: {cm}"));
    let law = formula(Dialect::Oql, "(p ->1 q) ->1 (-q ->1 -p)")?;
    ensure(logical_truth(&omls, &law).map_err(|e| e.to_string())?.is_some(), || "contraposition law is valid".into())?;
    Ok(())
}

fn kerr(e: impl fmt::Display) -> String {
    e.to_string()
}

fn canonical(w: &mut Vec<String>) -> Result<(), String> {
    let ols = catalog::structures_of_class(StructureClass::Ortholattice);
    let lits = ["p".to_string(), "q".to_string()];
    for (name, s) in &ols {
        let v = Assignment::new();
        let c = from_algebra(s, &v).map_err(kerr)?;
        ensure(psi_is_isomorphism(s, &v, &c).map_err(kerr)?, || format!("{name}: A ≇ A^(K^A)"))?;
        let oml = s.validate().is(StructureClass::OrthomodularLattice);
        ensure(c.realization.is_orthomodular() == oml, || format!("{name}: orthomodularity not transported"))?;
        if s.len() <= 16 {
            let mut all_b_zero = true;
            for v in assignments(s, &lits) {
                let k = from_algebra(s, &v).map_err(kerr)?.realization;
                all_b_zero &= ol_to_b(&k).map_err(kerr)?.is_b_zero();
            }
            ensure(all_b_zero == oml, || format!("{name}: modal orthomodularity not transported"))?;
        }
        ensure(c.realization.is_algebraically_adequate(), || format!("{name}: K^A is not adequate"))?;
        ensure(adequate_isomorphism(&c.realization).map_err(kerr)?, || format!("{name}: ψ is not an isomorphism"))?;
        w.push(format!(
            "{name}: A ≅ A^(K^A), {}, adequate",
            if oml { "orthomodular both ways" } else { "non-orthomodular both ways" }
        ));
    }
    Ok(())
}

fn modal_bridge(w: &mut Vec<String>) -> Result<(), String> {
    let formulas = enumerate(&["p", "q"], &[Formula::not], &[Formula::and], 3);
    let translated: Vec<Formula> = formulas.iter().map(tau).collect::<Result<_, _>>().map_err(kerr)?;
    let lits = ["p".to_string(), "q".to_string()];
    let bd = Formula::nec(Formula::pos(Formula::lit("p")));
    let bdbd = Formula::nec(Formula::pos(bd.clone()));
    let mut realizations = 0usize;
    for (name, s) in catalog::structures_of_class(StructureClass::Ortholattice) {
        if s.len() - 1 > 12 {
            continue;
        }
        let oml = s.validate().is(StructureClass::OrthomodularLattice);
        for v in assignments(&s, &lits) {
            let k = from_algebra(&s, &v).map_err(kerr)?.realization;
            let m = ol_to_b(&k).map_err(kerr)?;
            for (f, t) in formulas.iter().zip(&translated) {
                let x = k.extension(f).map_err(kerr)?;
                let y = m.extension(t).map_err(kerr)?;
                ensure(x == y, || format!("{name}: {f} and {t} differ"))?;
            }
            ensure(m.extension(&bd).map_err(kerr)? == m.extension(&bdbd).map_err(kerr)?, || {
                format!("{name}: □◇p ≠ □◇□◇p")
            })?;
            if oml {
                ensure(b_zero_schema_failure(&m, &formulas[..formulas.len().min(40)]).map_err(kerr)?.is_none(), || {
                    format!("{name}: modal orthomodularity schema fails")
                })?;
            }
            realizations += 1;
        }
    }
    w.push(format!("{} formulas of depth ≤ 3 over p, q", formulas.len()));
    w.push(format!("{realizations} realizations with ≤ 12 worlds agree world by world"));
    Ok(())
}

fn macneille_suite(w: &mut Vec<String>) -> Result<(), String> {
    let p9 = structure("P9")?;
    let (e, f) = (p9.elem("E").map_err(kerr)?, p9.elem("F").map_err(kerr)?);
    ensure(p9.meet(e, f).is_none(), || "P9 has a meet of E and F".into())?;
    let c = macneille(&p9).map_err(kerr)?;
    ensure(c.structure.is_lattice(), || "completion of P9 is not a lattice".into())?;
    let m = c.structure.meet(c.embed[e], c.embed[f]).ok_or("h(E) ⊓ h(F) missing")?;
    ensure(!c.embed.contains(&m), || "h(E) ⊓ h(F) is in the image of h".into())?;
    w.push(format!("P9: no E ⊓ F; in the completion h(E) ⊓ h(F) = {}", c.structure.name(m)));
    ensure(embedding_failure(&p9, &c).is_none(), || format!("{:?}", embedding_failure(&p9, &c)))?;
    w.push("h preserves order, ′ and existing meets and joins".into());
    let mut count = 0;
    for (name, s) in catalog::standard_structures() {
        if !s.is_lattice() {
            continue;
        }
        let c = if s.has_bz() { macneille_bz(&s) } else { macneille(&s) }.map_err(kerr)?;
        ensure(s.isomorphism(&c.structure).is_some(), || format!("{name} is not its own completion"))?;
        count += 1;
    }
    w.push(format!("{count} lattice fixtures are isomorphic to their completions"));
    let k5 = structure("K5")?;
    let c = macneille_bz(&k5).map_err(kerr)?;
    ensure(c.structure.validate().is(StructureClass::BzLattice), || "BZ completion of K5 is not a BZ-lattice".into())?;
    w.push("K5: BZ completion validates as a BZ-lattice".into());
    Ok(())
}

fn qmv_suite(w: &mut Vec<String>) -> Result<(), String> {
    let m4 = catalog::qmv_table("M4").map_err(kerr)?;
    let m3 = catalog::qmv_table("M3").map_err(kerr)?;
    let r4 = m4.validate();
    ensure(r4.qmv && !r4.mv, || "M4 is not a proper QMV-algebra".into())?;
    let r3 = m3.validate();
    ensure(r3.qmv && r3.mv, || "M3 is not an MV-algebra".into())?;
    w.push("M4: QMV, not MV; M3: MV".into());
    let h = m4_to_m3(&m4, &m3).map_err(kerr)?;
    ensure(h.is_homomorphism(&m4, &m3), || "h is not a homomorphism".into())?;
    w.push("h: M4 → M3 is a homomorphism".into());
    let s3 = conditional_search(&m3, 3);
    let t = s3.found.ok_or("no conditional in M3")?;
    let expected: Vec<usize> = m3
        .elements()
        .flat_map(|a| m3.elements().map(move |b| (a, b)))
        .map(|(a, b)| m3.oplus(m3.star(a), b))
        .collect();
    ensure(t.table(&m3) == expected, || format!("{t} is not a* ⊕ b"))?;
    w.push(format!("M3 conditional: {t}"));
    ensure(conditional_search(&m4, 4).found.is_none(), || "M4 has a conditional".into())?;
    w.push("M4: no conditional up to depth 4".into());
    let terms = term_closure(&m4, 3).terms;
    for (t, _) in &terms {
        ensure(h.transports(&m4, &m3, t), || format!("h does not transport {t}"))?;
    }
    w.push(format!("h transports {} terms of depth ≤ 3", terms.len()));
    let k5 = catalog::partial_table("K5-PSUM").map_err(kerr)?;
    let q = k5.to_qmv().map_err(kerr)?;
    ensure(q.validate().qmv && q.to_ea() == k5, || "K5 round trip fails".into())?;
    let ea = m4.to_ea();
    ensure(ea.validate().is(PartialClass::EffectAlgebra), || "M4 partial sum is not an effect algebra".into())?;
    ensure(ea.to_qmv().map_err(kerr)? == m4, || "M4 round trip fails".into())?;
    w.push("round trips: K5 and M4".into());
    Ok(())
}

fn bzl3_separation(w: &mut Vec<String>) -> Result<(), String> {
    let fuzzy = formula(Dialect::Bzl3, "p | -p")?;
    let intu = formula(Dialect::Bzl3, "p | ~p")?;
    let k5 = structure("K5")?;
    let v: Assignment = BTreeMap::from([("p".to_string(), k5.elem("1/4").map_err(kerr)?)]);
    let a = eval(&k5, &v, &intu)?;
    let b = eval(&k5, &v, &fuzzy)?;
    ensure(k5.name(a) == "1/4" && k5.name(b) == "3/4", || {
        format!("K5: v(p ∨ ∼p) = {}, v(p ∨ ¬p) = {}", k5.name(a), k5.name(b))
    })?;
    w.push("K5 at p = 1/4: v(p ∨ ∼p) = 1/4 < 3/4 = v(p ∨ ¬p)".into());
    let mut spaces = Vec::new();
    for n in 1..=4usize {
        for code in 0..(1u64 << (n * (n - 1) / 2)) {
            spaces.push(PairSpace::new(orthoframe_from_code(n, code)).map_err(kerr)?);
        }
    }
    let there = bzl3_consequence(&spaces, std::slice::from_ref(&fuzzy), &intu).map_err(kerr)?;
    let back = bzl3_consequence(&spaces, std::slice::from_ref(&intu), &fuzzy).map_err(kerr)?;
    ensure(there && back, || "excluded middles separate in an orthopair realization".into())?;
    w.push(format!("inter-derivable in every orthopair realization on {} frames", spaces.len()));
    let mut frames = 0;
    for n in 1..=5usize {
        for code in 0..(1u64 << (n * (n - 1) / 2)) {
            let s = PairSpace::new(orthoframe_from_code(n, code)).map_err(kerr)?;
            if let Some((law, x, y)) = s.pair_law_failure() {
                return Err(format!("{law} fails at {}, {}", s.pair_name(x), s.pair_name(y)));
            }
            frames += 1;
        }
    }
    w.push(format!("pair laws hold on all {frames} labelled orthoframes with ≤ 5 worlds"));
    Ok(())
}

fn proof_kernel(w: &mut Vec<String>) -> Result<(), String> {
    let mut calculi = std::collections::BTreeSet::new();
    let mut mutants = 0;
    for (name, _) in proof::SAMPLES {
        let d = proof::sample(name).ok_or("sample missing")?;
        calculi.insert(d.calculus);
        proof::check(&d).map_err(|r| format!("{name}: {r}"))?;
        for (desc, m) in proof::mutations(&d) {
            ensure(proof::check(&m).is_err(), || format!("{name}: mutation {desc} accepted"))?;
            mutants += 1;
        }
        let bad = proof::soundness_harness(&d, &proof::harness_semantics(d.calculus)).map_err(|r| r.to_string())?;
        ensure(bad.is_empty(), || format!("{name}: countermodel {:?}", bad[0]))?;
    }
    ensure(proof::SAMPLES.len() >= 20 && calculi.len() == 9, || "too few samples or calculi".into())?;
    w.push(format!("{} derivations across {} calculi check", proof::SAMPLES.len(), calculi.len()));
    w.push(format!("{mutants} single-token mutations rejected"));
    w.push("soundness harness: no countermodels".into());
    for (calc, text) in [(Calculus::Ol, "[a & b] |- b & a"), (Calculus::Bzl, "[L a] |- L L a")] {
        let goal = Config::parse(calc.dialect(), text)?;
        let d = proof::search(calc, &goal, 6).ok_or_else(|| format!("search misses {text}"))?;
        proof::check(&d).map_err(|r| r.to_string())?;
        w.push(format!("search: {text} in {} steps", d.steps.len()));
    }
    Ok(())
}

fn paql_suite(w: &mut Vec<String>) -> Result<(), String> {
    let f = |t: &str| formula(Dialect::SPaql, t);
    let mode = ValuationMode::PerFormula;
    let table = |n: &str| catalog::partial_table(n).map_err(kerr);
    let k5 = table("K5-PSUM")?;
    let dn = [
        (vec![], (f("p")?, f("--p")?)),
        (vec![], (f("--p")?, f("p")?)),
        (vec![], (f("q")?, f("p + -p")?)),
    ];
    for (prem, concl) in &dn {
        let cm = paql_rule_countermodel(&k5, mode, prem, concl);
        ensure(cm.is_none(), || format!("K5 refutes {} ⊢ {}", concl.0, concl.1))?;
    }
    w.push("double negation and excluded middle are sound over K5".into());
    let wpa = (vec![(f("p")?, f("-p")?)], (f("p")?, f("q")?));
    for n in ["BOOL(1)-PSUM", "BOOL(2)-PSUM", "MO2-PSUM"] {
        let t = table(n)?;
        ensure(t.validate().is(PartialClass::Orthoalgebra), || format!("{n} is not an orthoalgebra"))?;
        ensure(paql_rule_countermodel(&t, mode, &wpa.0, &wpa.1).is_none(), || format!("{n} refutes Duns Scotus"))?;
    }
    let cm = paql_rule_countermodel(&k5, mode, &wpa.0, &wpa.1).ok_or("K5 satisfies Duns Scotus")?;
    w.push(format!("Duns Scotus holds on orthoalgebras, fails on K5 at {:?}", cm.literals));
    let spa = (
        vec![(f("p")?, f("-q")?), (f("p")?, f("r")?), (f("q")?, f("r")?)],
        (f("p + q")?, f("r")?),
    );
    let b2 = table("BOOL(2)-PSUM")?;
    ensure(paql_rule_countermodel(&b2, mode, &spa.0, &spa.1).is_none(), || "BOOL(2) refutes the sup rule".into())?;
    let cm = paql_rule_countermodel(&k5, mode, &spa.0, &spa.1).ok_or("K5 satisfies the sup rule")?;
    w.push(format!("sup rule holds on BOOL(2), fails on K5 at {:?}", cm.literals));
    Ok(())
}
