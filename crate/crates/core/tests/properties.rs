//! Randomized invariants across the modules.

use std::collections::BTreeMap;

use proptest::prelude::*;
use qlw_core::algebraic::{self, Assignment};
use qlw_core::catalog;
use qlw_core::completion::{embedding_failure, macneille};
use qlw_core::effect::{m4_to_m3, Term};
use qlw_core::formula::{parse, Dialect, Formula};
use qlw_core::kripke::{from_algebra, proposition_lattice_is_regular, symmetric_frame_from_code};
use qlw_core::lattice::{bits, FiniteStructure, StructureClass};
use qlw_core::orthopair::{orthoframe_from_code, PairSpace};
use qlw_core::proof::{self, Calculus, Config, Semantics};

fn literal() -> impl Strategy<Value = Formula> {
    prop_oneof![Just("p"), Just("q"), Just("r")].prop_map(Formula::lit)
}

/// Orthologic formulas over p, q, r. `conditionals` adds →ᵢ, ⊸ and ↠.
fn ol_formula(depth: u32, conditionals: bool) -> impl Strategy<Value = Formula> {
    literal().prop_recursive(depth, 24, 2, move |inner| {
        let base = prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Formula::and(x, y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Formula::or(x, y)),
        ];
        if conditionals {
            prop_oneof![
                3 => base,
                1 => (1u8..=5, inner.clone(), inner.clone()).prop_map(|(i, x, y)| Formula::arrow(i, x, y)),
                1 => (inner.clone(), inner.clone()).prop_map(|(x, y)| Formula::strict(x, y)),
                1 => (inner.clone(), inner).prop_map(|(x, y)| Formula::entail(x, y)),
            ]
            .boxed()
        } else {
            base.boxed()
        }
    })
}

fn bzl_formula() -> impl Strategy<Value = Formula> {
    literal().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::inot),
            inner.clone().prop_map(Formula::l),
            inner.clone().prop_map(Formula::m),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Formula::and(x, y)),
            (inner.clone(), inner).prop_map(|(x, y)| Formula::or(x, y)),
        ]
    })
}

fn partial_formula() -> impl Strategy<Value = Formula> {
    literal().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Formula::aut(x, y)),
            (inner.clone(), inner).prop_map(|(x, y)| Formula::aut_and(x, y)),
        ]
    })
}

fn modal_formula() -> impl Strategy<Value = Formula> {
    literal().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::cnot),
            inner.clone().prop_map(Formula::nec),
            inner.clone().prop_map(Formula::pos),
            (inner.clone(), inner).prop_map(|(x, y)| Formula::cand(x, y)),
        ]
    })
}

fn term() -> impl Strategy<Value = Term> {
    prop_oneof![Just(Term::A), Just(Term::B), Just(Term::Zero), Just(Term::One)].prop_recursive(5, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::Star(Box::new(t))),
            (inner.clone(), inner).prop_map(|(x, y)| Term::Oplus(Box::new(x), Box::new(y))),
        ]
    })
}

fn assignment(s: &FiniteStructure, picks: &[usize]) -> Assignment {
    ["p", "q", "r"]
        .iter()
        .zip(picks)
        .map(|(l, &k)| (l.to_string(), k % s.len()))
        .collect()
}

/// The substructure on an involution-closed set of elements containing the
/// bounds, with the inherited order.
fn substructure(s: &FiniteStructure, keep: u64) -> FiniteStructure {
    let mut m = keep | (1 << s.zero()) | (1 << s.one());
    for a in bits(m) {
        m |= 1 << s.inv(a);
    }
    let elems: Vec<usize> = bits(m).collect();
    let pos = |a: usize| elems.iter().position(|&x| x == a).unwrap();
    let names = elems.iter().map(|&a| s.name(a).to_string()).collect();
    let mut le = Vec::new();
    for (i, &a) in elems.iter().enumerate() {
        for (j, &b) in elems.iter().enumerate() {
            if s.leq(a, b) {
                le.push((i, j));
            }
        }
    }
    let inv = elems.iter().map(|&a| pos(s.inv(a))).collect();
    FiniteStructure::new(names, &le, inv, None).expect("sub-poset")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn formulas_print_and_parse_back(
        ol in ol_formula(4, true),
        bz in bzl_formula(),
        pa in partial_formula(),
        md in modal_formula(),
    ) {
        prop_assert_eq!(parse(Dialect::Ol, &ol.to_string()).unwrap(), ol);
        prop_assert_eq!(parse(Dialect::Bzl, &bz.to_string()).unwrap(), bz);
        prop_assert_eq!(parse(Dialect::UPaql, &pa.to_string()).unwrap(), pa);
        prop_assert_eq!(parse(Dialect::ModalB, &md.to_string()).unwrap(), md);
    }

    #[test]
    fn evaluation_ignores_unused_literals(f in ol_formula(4, true), picks in prop::array::uniform4(0usize..64)) {
        let s = catalog::structure("G12").unwrap();
        let mut v = assignment(&s, &picks[..3]);
        let lits = f.literals();
        v.retain(|l, _| lits.contains(l));
        let base = algebraic::evaluate(&s, &v, &f).unwrap();
        v.insert("unused".into(), picks[3] % s.len());
        prop_assert_eq!(algebraic::evaluate(&s, &v, &f).unwrap(), base);
    }

    #[test]
    fn ortholattice_laws(f in ol_formula(3, true), g in ol_formula(3, true), picks in prop::array::uniform3(0usize..64)) {
        for name in ["MO2", "O6", "G12"] {
            let s = catalog::structure(name).unwrap();
            let v = assignment(&s, &picks);
            let x = algebraic::evaluate(&s, &v, &f).unwrap();
            let y = algebraic::evaluate(&s, &v, &g).unwrap();
            let nn = algebraic::evaluate(&s, &v, &Formula::not(Formula::not(f.clone()))).unwrap();
            prop_assert_eq!(nn, x);
            let contra = Formula::and(f.clone(), Formula::not(f.clone()));
            prop_assert_eq!(algebraic::evaluate(&s, &v, &contra).unwrap(), s.zero());
            let meet = algebraic::evaluate(&s, &v, &Formula::and(f.clone(), g.clone())).unwrap();
            prop_assert!(s.leq(meet, x) && s.leq(meet, y));
        }
    }

    #[test]
    fn algebra_and_canonical_frame_agree(f in ol_formula(4, true), picks in prop::array::uniform3(0usize..64)) {
        for name in ["MO2", "O6", "G12"] {
            let s = catalog::structure(name).unwrap();
            let v = assignment(&s, &picks);
            let c = from_algebra(&s, &v).unwrap();
            let a = algebraic::evaluate(&s, &v, &f).unwrap();
            prop_assert_eq!(c.realization.extension(&f).unwrap(), c.quasi_ideal[a]);
        }
    }

    #[test]
    fn frame_regularity_matches_lattice_regularity(n in 5usize..=8, code in any::<u64>()) {
        let code = code & ((1u64 << (n * (n + 1) / 2)) - 1);
        let f = symmetric_frame_from_code(n, code);
        prop_assert_eq!(f.is_regular(), proposition_lattice_is_regular(&f));
    }

    #[test]
    fn orthopairs_satisfy_the_pair_laws(n in 1usize..=5, code in any::<u64>()) {
        let code = code & ((1u64 << (n * (n - 1) / 2)) - 1);
        let space = PairSpace::new(orthoframe_from_code(n, code)).unwrap();
        prop_assert_eq!(space.pair_law_failure(), None);
        if space.all_pairs().len() <= 64 {
            let (s, _) = space.to_structure().unwrap();
            prop_assert!(s.validate().is(StructureClass::BzLattice));
        }
    }

    #[test]
    fn completion_embeds_sub_posets(keep in any::<u64>()) {
        let g12 = catalog::structure("G12").unwrap();
        let s = substructure(&g12, keep & g12.full());
        let c = macneille(&s).unwrap();
        prop_assert!(c.structure.is_lattice());
        prop_assert_eq!(embedding_failure(&s, &c), None);
        let back = FiniteStructure::parse(&s.to_text()).unwrap();
        prop_assert!(back.isomorphism(&s).is_some());
    }

    #[test]
    fn qmv_homomorphism_transports_terms(t in term()) {
        let m4 = catalog::qmv_table("M4").unwrap();
        let m3 = catalog::qmv_table("M3").unwrap();
        let h = m4_to_m3(&m4, &m3).unwrap();
        prop_assert!(h.transports(&m4, &m3, &t));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn found_derivations_check_and_are_sound(f in ol_formula(1, false), g in ol_formula(1, false)) {
        let goal = Config::new(vec![f], g);
        if let Some(d) = proof::search(Calculus::Ol, &goal, 4) {
            prop_assert_eq!(proof::check(&d), Ok(()));
            prop_assert!(d.conclusion().unwrap().equivalent(&goal));
            let sem = proof::harness_semantics(Calculus::Ol);
            prop_assert!(matches!(sem, Semantics::Algebraic(_)));
            prop_assert_eq!(proof::soundness_harness(&d, &sem).unwrap(), vec![]);
        }
    }
}

#[test]
fn frame_regularity_on_all_four_world_frames() {
    for code in 0..(1u64 << 10) {
        let f = symmetric_frame_from_code(4, code);
        assert_eq!(f.is_regular(), proposition_lattice_is_regular(&f), "code={code}");
    }
}

#[test]
fn rho_of_canonical_frames_is_the_quasi_ideal() {
    let s = catalog::structure("G12").unwrap();
    for a in s.elements() {
        let v: Assignment = BTreeMap::from([("p".to_string(), a)]);
        let c = from_algebra(&s, &v).unwrap();
        assert_eq!(c.realization.rho()["p"], c.quasi_ideal[a]);
    }
}
