//! One handler per verb. Each returns a report; errors become exit code 2.

use std::collections::{BTreeMap, HashMap};

use anyhow::{anyhow, bail, Context, Result};
use qlw_core::algebraic::{self, FirstOrderModel, Witness};
use qlw_core::catalog::{self, CatalogEntry};
use qlw_core::completion::{embedding_failure, is_regular_poset, macneille, macneille_bz};
use qlw_core::effect::{conditional_search, paql_consequence, PartialTable, QmvTable, ValuationMode};
use qlw_core::formula::{Dialect, Formula};
use qlw_core::kripke::{from_algebra, Frame};
use qlw_core::lattice::{FiniteStructure, FormResult, StructureClass};
use qlw_core::modal::{ol_to_b, tau};
use qlw_core::orthopair::PairSpace;
use qlw_core::proof::{self, harness_semantics, Calculus, Config, Semantics};
use qlw_core::reproduce;

use crate::input;
use crate::report::Report;
use crate::{Bz3Cmd, CatalogCmd, Command, KripkeCmd, PaqlCmd, ProofCmd, QmvCmd, SemanticsArgs};

pub fn run(cmd: Command) -> Result<Report> {
    match cmd {
        Command::Catalog(c) => catalog_cmd(c),
        Command::Validate { source, class } => validate(&source, class.as_deref()),
        Command::Props { source } => props(&source),
        Command::Eval {
            source,
            formula,
            dialect,
            assign,
        } => eval(&source, &formula, &dialect, &assign),
        Command::Valid { formula, sem } => valid(&formula, &sem),
        Command::Conseq {
            conclusion,
            sem,
            weak,
            quasi,
        } => conseq(&conclusion, &sem, weak, quasi),
        Command::Countermodel { conclusion, sem, model } => countermodel(conclusion.as_deref(), &sem, &model),
        Command::FoEval { model, formula, vars } => fo_eval(&model, &formula, &vars),
        Command::Kripke(c) => kripke_cmd(c),
        Command::Translate { formula, modal, dialect } => translate(&formula, modal, &dialect),
        Command::Complete { source, bz } => complete(&source, bz),
        Command::Qmv(c) => qmv_cmd(c),
        Command::Paql(c) => paql_cmd(c),
        Command::Bz3(c) => bz3_cmd(c),
        Command::Proof(c) => proof_cmd(c),
        Command::Reproduce { criterion } => reproduce_cmd(&criterion),
    }
}

fn entry_text(entry: &CatalogEntry) -> Result<String> {
    Ok(match entry {
        CatalogEntry::Structure(s) => s.to_text(),
        CatalogEntry::Diagram(d) => catalog::paste(d)?.to_text(),
        CatalogEntry::Partial(t) => t.to_text(),
        CatalogEntry::Qmv(m) => m.to_text(),
    })
}

fn entry_kind(entry: &CatalogEntry) -> &'static str {
    match entry {
        CatalogEntry::Structure(_) => "structure",
        CatalogEntry::Diagram(_) => "greechie-diagram",
        CatalogEntry::Partial(_) => "partial-table",
        CatalogEntry::Qmv(_) => "qmv-table",
    }
}

fn catalog_cmd(c: CatalogCmd) -> Result<Report> {
    let mut r = Report::new();
    match c {
        CatalogCmd::List => {
            for name in catalog::CATALOG_NAMES {
                let kind = if name.contains("(n)") {
                    let example = name.replace("(n)", "(2)");
                    format!("{} family", entry_kind(&catalog::catalog(&example)?))
                } else {
                    entry_kind(&catalog::catalog(name)?).to_string()
                };
                r.field(name, kind);
            }
        }
        CatalogCmd::Show { name } => {
            let name = name.strip_prefix("catalog:").unwrap_or(&name);
            r.text(entry_text(&catalog::catalog(name)?)?);
        }
    }
    Ok(r)
}

fn names(s: &FiniteStructure, elems: &[usize]) -> String {
    elems.iter().map(|&e| s.name(e)).collect::<Vec<_>>().join(", ")
}

fn validate_structure(r: &mut Report, s: &FiniteStructure, want: Option<StructureClass>) {
    let v = s.validate();
    r.field("elements", s.len());
    r.field("class", v.kind.map_or("none", |k| k.as_str()));
    if s.has_bz() {
        r.field("reduct-class", v.inv_kind.map_or("none", |k| k.as_str()));
    }
    for f in &v.failures {
        r.field("violates", format!("{} at {}", f.axiom, names(s, &f.witness)));
    }
    match want {
        Some(c) => r.require(v.is(c)),
        None => r.require(v.kind.is_some()),
    };
}

fn validate_partial(r: &mut Report, t: &PartialTable) {
    let v = t.validate();
    r.field("elements", t.len());
    r.field("class", v.class.map_or("none", |c| c.as_str()));
    for f in &v.failures {
        r.field("violates", format!("{} at {}", f.axiom.as_str(), f.witness.join(", ")));
    }
    r.require(v.class.is_some());
}

fn validate_qmv(r: &mut Report, m: &QmvTable) {
    let v = m.validate();
    r.field("elements", m.len());
    r.field("qmv", v.qmv);
    r.field("mv", v.mv);
    for f in &v.failures {
        r.field("violates", format!("{} at {}", f.axiom.as_str(), f.witness.join(", ")));
    }
    r.require(v.qmv);
}

fn validate(source: &str, class: Option<&str>) -> Result<Report> {
    let want = class
        .map(|c| StructureClass::parse(c).ok_or_else(|| anyhow!("unknown class `{c}`")))
        .transpose()?;
    let mut r = Report::new();
    match input::load(source)? {
        CatalogEntry::Structure(s) => validate_structure(&mut r, &s, want),
        CatalogEntry::Diagram(d) => validate_structure(&mut r, &catalog::paste(&d)?, want),
        CatalogEntry::Partial(t) => validate_partial(&mut r, &t),
        CatalogEntry::Qmv(m) => validate_qmv(&mut r, &m),
    }
    Ok(r)
}

fn form(s: &FiniteStructure, f: &FormResult) -> String {
    match f {
        FormResult::Holds => "holds".into(),
        FormResult::Fails(w) => format!("fails at {}", names(s, w)),
        FormResult::Inapplicable(w) => format!("undefined at {}", names(s, w)),
    }
}

fn structure_props(r: &mut Report, s: &FiniteStructure) {
    let v = s.validate();
    r.field("elements", s.len());
    r.field("class", v.kind.map_or("none", |k| k.as_str()));
    match s.non_lattice_witness() {
        None => r.field("lattice", true),
        Some((a, b)) => r.field("lattice", format!("false, {} and {} lack a meet or join", s.name(a), s.name(b))),
    };
    r.field("regular", is_regular_poset(s));
    r.field("bz", s.has_bz());
    let om = s.orthomodular_forms();
    r.field("om-i", form(s, &om.om_i));
    r.field("om-ii", form(s, &om.om_ii));
    r.field("om-iii", form(s, &om.om_iii));
    r.field("om-iv", form(s, &om.om_iv));
    let Some(l) = s.as_lattice() else {
        return;
    };
    match l.check_oal() {
        Ok(()) => r.field("orthoarguesian", "holds"),
        Err(f) => r.field(
            "orthoarguesian",
            format!("fails at {}", names(s, &[f.a, f.b, f.c])),
        ),
    };
    r.field("atomic", l.is_atomic());
    r.field("covering", l.covering_property());
    r.field("irreducible", l.is_irreducible());
    for i in 1..=5u8 {
        match algebraic::good_conditional_failure(&l, i) {
            None => r.field(&format!("conditional-{i}"), "a <= b iff a ->{i} b = 1"),
            Some((a, b)) => r.field(&format!("conditional-{i}"), format!("fails at {}", names(s, &[a, b]))),
        };
        match algebraic::import_export_failure(&l, i) {
            None => r.field(&format!("import-export-{i}"), "holds"),
            Some((a, b, c)) => r.field(&format!("import-export-{i}"), format!("fails at {}", names(s, &[a, b, c]))),
        };
    }
}

fn props(source: &str) -> Result<Report> {
    let mut r = Report::new();
    match input::load(source)? {
        CatalogEntry::Structure(s) => structure_props(&mut r, &s),
        CatalogEntry::Diagram(d) => structure_props(&mut r, &catalog::paste(&d)?),
        CatalogEntry::Partial(t) => {
            validate_partial(&mut r, &t);
            r.field("order-compatible", t.order_compatible()?);
        }
        CatalogEntry::Qmv(m) => {
            validate_qmv(&mut r, &m);
            r.field("weakly-linear", m.weakly_linear());
            r.field("quasi-linear", m.quasi_linear());
            r.field("et-commutative", m.et_commutative());
            r.field("totally-ordered", m.totally_ordered());
        }
    }
    Ok(r)
}

fn eval(source: &str, formula: &str, dialect: &str, assign: &[String]) -> Result<Report> {
    let d = input::dialect(dialect)?;
    let f = input::formula(d, formula)?;
    let mut r = Report::new();
    if d == Dialect::Lql {
        let m = input::qmv(source)?;
        let mut v = BTreeMap::new();
        for item in assign {
            let (lit, name) = input::binding(item)?;
            let e = m.id(name).ok_or_else(|| anyhow!("no element `{name}`"))?;
            v.insert(lit.to_string(), e);
        }
        for lit in f.literals() {
            if !v.contains_key(&lit) {
                bail!("literal `{lit}` is not assigned");
            }
        }
        let value = qlw_core::effect::lql_evaluate(&m, &|l| v[l], &f);
        r.field("value", m.name(value));
        return Ok(r);
    }
    let s = input::structure(source)?;
    let v = input::assignment(&s, assign)?;
    let value = algebraic::evaluate(&s, &v, &f)?;
    r.field("value", s.name(value));
    Ok(r)
}

fn calculus_of(d: Dialect) -> Result<Calculus> {
    Calculus::ALL
        .into_iter()
        .find(|c| c.dialect() == d)
        .ok_or_else(|| anyhow!("dialect {d} has no default structure list"))
}

fn structure_list(sem: &SemanticsArgs) -> Result<(Dialect, Vec<(String, FiniteStructure)>)> {
    let d = input::dialect(&sem.dialect)?;
    if d.is_partial() {
        bail!("dialect {d} uses partial sums; use `paql conseq`");
    }
    if !sem.structures.is_empty() {
        return Ok((d, input::structures(&sem.structures)?));
    }
    match harness_semantics(calculus_of(d)?) {
        Semantics::Algebraic(list) => Ok((d, list)),
        Semantics::Partial(_) => bail!("dialect {d} uses partial sums; use `paql conseq`"),
    }
}

fn witness(r: &mut Report, w: &Witness) {
    r.field("structure", &w.structure);
    for (l, e) in &w.assignment {
        r.field(&format!("v({l})"), e);
    }
    for (g, e) in &w.values {
        r.field(&format!("v({g})"), e);
    }
}

fn valid(formula: &str, sem: &SemanticsArgs) -> Result<Report> {
    let (d, list) = structure_list(sem)?;
    if !sem.premises.is_empty() {
        bail!("`valid` takes no premises; use `conseq`");
    }
    let f = input::formula(d, formula)?;
    let mut r = Report::new();
    r.field("structures", list.len());
    match algebraic::logical_truth(&list, &f)? {
        None => r.field("valid", true),
        Some(w) => {
            r.field("valid", false).fail();
            witness(&mut r, &w);
            &mut r
        }
    };
    Ok(r)
}

fn conseq(conclusion: &str, sem: &SemanticsArgs, weak: bool, quasi: bool) -> Result<Report> {
    let (d, list) = structure_list(sem)?;
    let premises = input::formulas(d, &sem.premises)?;
    let c = input::formula(d, conclusion)?;
    let (kind, found) = if weak {
        ("weak", algebraic::weak_consequence(&list, &premises, &c)?)
    } else if quasi {
        ("quasi", algebraic::quasi_consequence(&list, &premises, &c)?)
    } else {
        ("consequence", algebraic::consequence(&list, &premises, &c)?)
    };
    let mut r = Report::new();
    r.field("structures", list.len());
    match found {
        None => r.field(kind, true),
        Some(w) => {
            r.field(kind, false).fail();
            witness(&mut r, &w);
            &mut r
        }
    };
    Ok(r)
}

fn countermodel(conclusion: Option<&str>, sem: &SemanticsArgs, model: &str) -> Result<Report> {
    let (d, list) = structure_list(sem)?;
    let premises = input::formulas(d, &sem.premises)?;
    let found = match conclusion {
        Some(c) => algebraic::consequence(&list, &premises, &input::formula(d, c)?)?,
        None if model == "full" => algebraic::verifiable(&list, &premises)?,
        None => algebraic::realizable(&list, &premises)?,
    };
    let mut r = Report::new();
    r.field("structures", list.len());
    match found {
        Some(w) => {
            r.field("found", true);
            witness(&mut r, &w);
        }
        None => {
            r.field("found", false).fail();
        }
    }
    Ok(r)
}

fn fo_eval(model: &str, formula: &str, vars: &[String]) -> Result<Report> {
    let text = input::read(model)?;
    let load = |name: &str| -> std::result::Result<FiniteStructure, String> {
        let src = if std::path::Path::new(name).exists() {
            name.to_string()
        } else {
            format!("catalog:{}", name.strip_prefix("catalog:").unwrap_or(name))
        };
        input::structure(&src).map_err(|e| format!("{e:#}"))
    };
    let m = FirstOrderModel::parse(&text, &load).with_context(|| format!("in `{model}`"))?;
    let f = algebraic::parse_fo(formula)?;
    let mut sigma = HashMap::new();
    for item in vars {
        let (x, d) = input::binding(item)?;
        let i = m
            .domain
            .iter()
            .position(|n| n == d)
            .ok_or_else(|| anyhow!("no individual `{d}`"))?;
        sigma.insert(x.to_string(), i);
    }
    let value = m.evaluate(&sigma, &f)?;
    let mut r = Report::new();
    r.field("value", m.structure.name(value));
    Ok(r)
}

fn kripke_cmd(c: KripkeCmd) -> Result<Report> {
    let mut r = Report::new();
    match c {
        KripkeCmd::Eval { frame, formula, dialect } => {
            let k = input::realization(&frame)?;
            let d = input::dialect(&dialect)?;
            let f = input::formula(d, &formula)?;
            let x = if d == Dialect::ModalB {
                ol_to_b(&k)?.extension(&f)?
            } else {
                k.extension(&f)?
            };
            r.field("worlds", k.frame.mask_names(x));
            r.field("true", x == k.frame.full());
        }
        KripkeCmd::Check { frame } => {
            let k = input::realization(&frame)?;
            let fr = &k.frame;
            r.field("flavor", fr.flavor().as_str());
            r.field("worlds", fr.len());
            r.field("propositions", k.propositions().len());
            r.field("all-propositions", k.propositions() == fr.all_propositions().as_slice());
            r.field("regular-frame", fr.is_regular());
            match k.orthomodularity_failure() {
                None => r.field("orthomodular", true),
                Some((x, y)) => r.field(
                    "orthomodular",
                    format!("false at {} and {}", fr.mask_names(x), fr.mask_names(y)),
                ),
            };
            r.field("algebraically-adequate", k.is_algebraically_adequate());
            if fr.bz_row(0).is_some() {
                let fails = fr.bz_frame_failures();
                r.field("bz-frame", if fails.is_empty() { "holds".into() } else { fails.join(", ") });
                r.require(fails.is_empty());
            }
        }
        KripkeCmd::Canonical { source, assign } => {
            let s = input::structure(&source)?;
            let v = input::assignment(&s, &assign)?;
            let c = from_algebra(&s, &v)?;
            r.text(c.realization.to_text());
        }
    }
    Ok(r)
}

fn translate(formula: &str, modal: bool, dialect: &str) -> Result<Report> {
    if !modal {
        bail!("only `--modal` translation is available");
    }
    let f = input::formula(input::dialect(dialect)?, formula)?;
    let mut r = Report::new();
    r.field("modal", tau(&f)?);
    Ok(r)
}

fn complete(source: &str, bz: bool) -> Result<Report> {
    let s = input::structure(source)?;
    let c = if bz { macneille_bz(&s)? } else { macneille(&s)? };
    let mut r = Report::new();
    r.text(c.structure.to_text());
    r.text(c.embed_text(&s));
    if let Some(why) = embedding_failure(&s, &c) {
        r.field("embedding", why).fail();
    }
    Ok(r)
}

fn qmv_cmd(c: QmvCmd) -> Result<Report> {
    let mut r = Report::new();
    match c {
        QmvCmd::Validate { source } => validate_qmv(&mut r, &input::qmv(&source)?),
        QmvCmd::SearchConditional { source, max_depth } => {
            let m = input::qmv(&source)?;
            let found = conditional_search(&m, max_depth);
            r.field("term-functions", found.functions);
            r.field("exhaustive", found.exhaustive);
            match found.found {
                Some(t) => r.field("conditional", t),
                None => r.field("conditional", "none").fail(),
            };
        }
        QmvCmd::Transform { source } => {
            let text = match input::load(&source)? {
                CatalogEntry::Qmv(m) => m.to_ea().to_text(),
                CatalogEntry::Partial(t) => t.to_qmv()?.to_text(),
                _ => bail!("`{source}` is not a QMV or partial-sum table"),
            };
            r.text(text);
        }
    }
    Ok(r)
}

fn paql_cmd(c: PaqlCmd) -> Result<Report> {
    let mut r = Report::new();
    match c {
        PaqlCmd::Validate { source } => validate_partial(&mut r, &input::partial(&source)?),
        PaqlCmd::Conseq {
            conclusion,
            premises,
            dialect,
            tables,
            mode,
        } => {
            let d = input::dialect(&dialect)?;
            let list = if tables.is_empty() {
                match harness_semantics(calculus_of(d)?) {
                    Semantics::Partial(list) => list,
                    Semantics::Algebraic(_) => bail!("dialect {d} is not a partial-sum dialect"),
                }
            } else {
                input::tables(&tables)?
            };
            let mode = if mode == "per-occurrence" {
                ValuationMode::PerOccurrence
            } else {
                ValuationMode::PerFormula
            };
            let premises = input::formulas(d, &premises)?;
            let c = input::formula(d, &conclusion)?;
            let only: Vec<PartialTable> = list.iter().map(|(_, t)| t.clone()).collect();
            r.field("tables", list.len());
            match paql_consequence(&only, mode, &premises, &c) {
                Ok(()) => {
                    r.field("consequence", true);
                }
                Err(cm) => {
                    r.field("consequence", false).fail();
                    r.field("table", &list[cm.structure].0);
                    for (l, e) in &cm.literals {
                        r.field(&format!("v({l})"), e);
                    }
                    let shown = premises.iter().chain(std::iter::once(&c));
                    for (g, e) in shown.zip(&cm.values) {
                        r.field(&format!("v({g})"), e);
                    }
                }
            }
        }
    }
    Ok(r)
}

fn worlds(frame: &Frame, list: &str) -> Result<u64> {
    let mut m = 0;
    for w in list.split(',').map(str::trim).filter(|w| !w.is_empty()) {
        let i = frame.world(w).ok_or_else(|| anyhow!("no world `{w}`"))?;
        m |= 1u64 << i;
    }
    Ok(m)
}

fn bz3_cmd(c: Bz3Cmd) -> Result<Report> {
    let mut r = Report::new();
    match c {
        Bz3Cmd::Eval { frame, formula, assign } => {
            let k = input::realization(&frame)?;
            let space = PairSpace::new(k.frame.clone())?;
            let mut v = BTreeMap::new();
            for (lit, &x) in k.rho() {
                v.insert(lit.clone(), space.exact(x)?);
            }
            for item in &assign {
                let (lit, pair) = input::binding(item)?;
                let (pos, neg) = pair
                    .split_once('/')
                    .ok_or_else(|| anyhow!("expected `POS/NEG` for `{lit}`"))?;
                v.insert(lit.to_string(), space.pair(worlds(&k.frame, pos)?, worlds(&k.frame, neg)?)?);
            }
            let f: Formula = input::formula(Dialect::Bzl3, &formula)?;
            r.field("value", space.pair_name(space.evaluate(&v, &f)?));
        }
        Bz3Cmd::CheckPairLaws { frame } => {
            let k = input::realization(&frame)?;
            let space = PairSpace::new(k.frame.clone())?;
            r.field("orthopairs", space.all_pairs().len());
            match space.pair_law_failure() {
                None => r.field("pair-laws", "hold"),
                Some((law, a, b)) => r
                    .field("pair-laws", format!("{law} fails at {} {}", space.pair_name(a), space.pair_name(b)))
                    .fail(),
            };
            match space.bz3_failure() {
                None => r.field("bz3", "holds"),
                Some((law, a, b)) => r
                    .field("bz3", format!("{law} fails at {} {}", space.pair_name(a), space.pair_name(b)))
                    .fail(),
            };
        }
    }
    Ok(r)
}

fn optional_calculus(name: Option<&str>) -> Result<Option<Calculus>> {
    name.map(input::calculus).transpose()
}

fn proof_cmd(c: ProofCmd) -> Result<Report> {
    let mut r = Report::new();
    match c {
        ProofCmd::Check { derivation, calculus } => {
            let d = input::derivation(&derivation, optional_calculus(calculus.as_deref())?)?;
            r.field("calculus", d.calculus);
            r.field("steps", d.steps.len());
            match proof::check(&d) {
                Ok(()) => {
                    r.field("accepted", true);
                    if let Some(c) = d.conclusion() {
                        r.field("conclusion", c);
                    }
                }
                Err(rej) => {
                    r.field("accepted", false).field("rejection", rej).fail();
                }
            }
        }
        ProofCmd::Search { goal, calculus, depth } => {
            let calc = input::calculus(&calculus)?;
            let goal = Config::parse(calc.dialect(), &goal).map_err(|e| anyhow!("cannot parse goal: {e}"))?;
            match proof::search(calc, &goal, depth) {
                Some(d) => {
                    r.field("steps", d.steps.len());
                    r.text(d.to_text());
                }
                None => {
                    r.field("found", format!("no derivation within depth {depth}")).fail();
                }
            }
        }
        ProofCmd::Harness { derivation, calculus } => {
            let d = input::derivation(&derivation, optional_calculus(calculus.as_deref())?)?;
            let sem = harness_semantics(d.calculus);
            let size = match &sem {
                Semantics::Algebraic(l) => l.len(),
                Semantics::Partial(l) => l.len(),
            };
            r.field("calculus", d.calculus);
            r.field("structures", size);
            match proof::soundness_harness(&d, &sem) {
                Err(rej) => {
                    r.field("accepted", false).field("rejection", rej).fail();
                }
                Ok(bad) if bad.is_empty() => {
                    r.field("sound-steps", d.steps.len());
                }
                Ok(bad) => {
                    for b in bad {
                        r.field(&format!("step-{}", b.step), b.witness.trim_end().replace('\n', "; "));
                    }
                    r.fail();
                }
            }
        }
        ProofCmd::Expand { derivation, calculus } => {
            let d = input::derivation(&derivation, optional_calculus(calculus.as_deref())?)?;
            match proof::macro_expand(&d) {
                Ok(e) => {
                    r.text(e.to_text());
                }
                Err(rej) => {
                    r.field("rejection", rej).fail();
                }
            }
        }
    }
    Ok(r)
}

fn reproduce_cmd(key: &str) -> Result<Report> {
    let outcomes = if key.eq_ignore_ascii_case("all") {
        reproduce::run_all()
    } else {
        let c = reproduce::find(key).ok_or_else(|| anyhow!("no criterion `{key}`"))?;
        vec![reproduce::run(c)]
    };
    let mut r = Report::new();
    for o in &outcomes {
        let mut block = format!("{o}\n");
        for w in &o.witness {
            block.push_str(&format!("    {w}\n"));
        }
        r.text(block);
        r.require(o.pass);
    }
    Ok(r)
}
