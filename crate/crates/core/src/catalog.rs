//! Greechie diagrams, block pasting and the named structure catalog.
//!
//! A Greechie diagram lists maximal Boolean blocks by their atoms. [`paste`]
//! glues the Boolean algebras of the blocks along shared atoms and their
//! complements, closes the order transitively and accepts the result only if
//! it validates as an orthomodular lattice.
//!
//! # Reconstructed entries
//!
//! * `G14` keeps the five atoms and five coatoms of `G12` as its middle
//!   layers and inserts a chain `0 < f` below them and `f' < 1` above them,
//!   with `f'` the complement of `f`. Every middle element x has
//!   x ⊓ x′ = f, so the structure is an involutive bounded lattice that is not
//!   an ortholattice.
//! * `B30` is the loop of eight three-atom blocks
//!   `aon nci ihg gfe ebs sra bml lkc`. It is the only reading of the
//!   diagram under which every relation of the orthoarguesian counterexample
//!   holds, but it has fifteen atoms and pastes to 32 elements rather than
//!   30. Merging any of the free atoms creates a loop of order at most four,
//!   whose pasting is no longer a lattice.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::effect::{PartialTable, QmvTable, TableError};
use crate::lattice::{bit, bits, Elem, FiniteStructure, StructureClass, StructureError, ValidationReport};

const G12_TEXT: &str = include_str!("../fixtures/G12.struct");
const G14_TEXT: &str = include_str!("../fixtures/G14.struct");
const B30_TEXT: &str = include_str!("../fixtures/B30.struct");
const P9_TEXT: &str = include_str!("../fixtures/P9.struct");
const G12_DIAGRAM: &str = include_str!("../fixtures/G12.greechie");
const B30_DIAGRAM: &str = include_str!("../fixtures/B30.greechie");
const M3_TEXT: &str = include_str!("../fixtures/M3.qmv");
const M4_TEXT: &str = include_str!("../fixtures/M4.qmv");
const K5_PSUM_TEXT: &str = include_str!("../fixtures/K5.psum");

/// Catalog and diagram errors.
#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("line {line}: empty block")]
    EmptyBlock { line: usize },
    #[error("line {line}: block needs at least two atoms")]
    SmallBlock { line: usize },
    #[error("line {line}: atom `{atom}` repeated within one block")]
    DuplicateAtom { line: usize, atom: String },
    #[error("blocks {0} and {1} share more than one atom")]
    SharedAtoms(usize, usize),
    #[error("pasted structure is not an orthomodular lattice")]
    NotOrthomodular(Box<ValidationReport>),
    #[error("unknown catalog entry `{0}`")]
    Unknown(String),
    #[error("catalog entry `{0}` has a different kind")]
    WrongKind(String),
    #[error("generator argument out of range in `{0}`")]
    BadArgument(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Table(#[from] TableError),
}

/// Atoms and maximal Boolean blocks of an orthomodular lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreechieDiagram {
    pub atoms: Vec<String>,
    /// Each block as indices into `atoms`, in file order.
    pub blocks: Vec<Vec<usize>>,
}

/// Parses one block per line, atoms separated by whitespace, `#` comments.
pub fn parse_greechie(text: &str) -> Result<GreechieDiagram, CatalogError> {
    let mut atoms: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            if raw.trim_start().starts_with('#') || raw.trim().is_empty() {
                continue;
            }
            return Err(CatalogError::EmptyBlock { line });
        }
        let mut block = Vec::new();
        for tok in content.split_whitespace() {
            let id = *index.entry(tok.to_string()).or_insert_with(|| {
                atoms.push(tok.to_string());
                atoms.len() - 1
            });
            if block.contains(&id) {
                return Err(CatalogError::DuplicateAtom {
                    line,
                    atom: tok.to_string(),
                });
            }
            block.push(id);
        }
        if block.len() < 2 {
            return Err(CatalogError::SmallBlock { line });
        }
        blocks.push(block);
    }
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            let shared = blocks[i].iter().filter(|x| blocks[j].contains(x)).count();
            if shared > 1 {
                return Err(CatalogError::SharedAtoms(i, j));
            }
        }
    }
    if blocks.is_empty() {
        return Err(CatalogError::EmptyBlock { line: 1 });
    }
    Ok(GreechieDiagram { atoms, blocks })
}

/// Identification keys of the subset `sub` (bitmask over block positions).
fn subset_keys(d: &GreechieDiagram, block: &[usize], sub: u32) -> Vec<String> {
    let k = block.len();
    let inside: Vec<usize> = (0..k).filter(|&i| sub & (1 << i) != 0).map(|i| block[i]).collect();
    let outside: Vec<usize> = (0..k).filter(|&i| sub & (1 << i) == 0).map(|i| block[i]).collect();
    let mut keys = Vec::new();
    if inside.is_empty() {
        keys.push("0".to_string());
    }
    if outside.is_empty() {
        keys.push("1".to_string());
    }
    if inside.len() == 1 {
        keys.push(d.atoms[inside[0]].clone());
    }
    if outside.len() == 1 {
        keys.push(format!("{}'", d.atoms[outside[0]]));
    }
    if keys.is_empty() {
        let mut names: Vec<&str> = inside.iter().map(|&a| d.atoms[a].as_str()).collect();
        names.sort_unstable();
        keys.push(names.join("+"));
    }
    keys
}

/// Glues the Boolean algebras of the blocks and validates the result.
///
/// Elements are 0, 1, the atoms, one complement `x'` per atom, and for blocks
/// with more than three atoms the remaining block-local subsets named by
/// their atoms joined with `+`.
pub fn paste(d: &GreechieDiagram) -> Result<FiniteStructure, CatalogError> {
    // Union-find over identification keys.
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut parent: Vec<usize> = Vec::new();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut key_id = |k: &str, parent: &mut Vec<usize>| -> usize {
        *ids.entry(k.to_string()).or_insert_with(|| {
            parent.push(parent.len());
            parent.len() - 1
        })
    };
    let mut block_keys: Vec<Vec<(Vec<String>, usize)>> = Vec::new();
    for block in &d.blocks {
        let mut per = Vec::new();
        for sub in 0..(1u32 << block.len()) {
            let keys = subset_keys(d, block, sub);
            let first = key_id(&keys[0], &mut parent);
            for k in &keys[1..] {
                let other = key_id(k, &mut parent);
                let (ra, rb) = (find(&mut parent, first), find(&mut parent, other));
                if ra != rb {
                    parent[rb] = ra;
                }
            }
            per.push((keys, first));
        }
        block_keys.push(per);
    }
    // Pick a display name per class and a deterministic element order.
    let mut class_keys: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for per in &block_keys {
        for (keys, first) in per {
            let root = find(&mut parent, *first);
            class_keys.entry(root).or_default().extend(keys.iter().cloned());
        }
    }
    let atom_pos = |n: &str| d.atoms.iter().position(|a| a == n);
    let rank = |n: &str| -> (u8, usize, String) {
        if n == "0" {
            (0, 0, String::new())
        } else if let Some(p) = atom_pos(n) {
            (1, p, String::new())
        } else if let Some(p) = n.strip_suffix('\'').and_then(atom_pos) {
            (2, p, String::new())
        } else if n == "1" {
            (4, 0, String::new())
        } else {
            (3, 0, n.to_string())
        }
    };
    let mut classes: Vec<(usize, String)> = class_keys
        .into_iter()
        .map(|(root, keys)| {
            let best = keys.iter().min_by_key(|k| rank(k)).unwrap().clone();
            (root, best)
        })
        .collect();
    classes.sort_by_key(|(_, name)| rank(name));
    let elem_of: HashMap<usize, Elem> = classes.iter().enumerate().map(|(i, (r, _))| (*r, i)).collect();
    let names: Vec<String> = classes.iter().map(|(_, n)| n.clone()).collect();
    if names.len() > crate::lattice::MAX_ELEMENTS {
        return Err(StructureError::TooLarge(names.len()).into());
    }
    let mut le = Vec::new();
    let mut inv: Vec<Option<Elem>> = vec![None; names.len()];
    for (block, per) in d.blocks.iter().zip(&block_keys) {
        let full = (1u32 << block.len()) - 1;
        let el: Vec<Elem> = per
            .iter()
            .map(|(_, first)| elem_of[&find(&mut parent, *first)])
            .collect();
        for s in 0..=full {
            let c = el[(full & !s) as usize];
            match inv[el[s as usize]] {
                Some(old) if old != c => {
                    return Err(StructureError::Conflict {
                        table: "inv",
                        id: names[el[s as usize]].clone(),
                    }
                    .into())
                }
                _ => inv[el[s as usize]] = Some(c),
            }
            for t in 0..=full {
                if s & t == s {
                    le.push((el[s as usize], el[t as usize]));
                }
            }
        }
    }
    let inv: Vec<Elem> = inv.into_iter().map(|x| x.expect("every class has a complement")).collect();
    let s = FiniteStructure::new(names, &le, inv, None)?;
    let report = s.validate();
    if report.kind != Some(StructureClass::OrthomodularLattice) {
        return Err(CatalogError::NotOrthomodular(Box::new(report)));
    }
    Ok(s)
}

/// Any catalog item.
#[derive(Debug, Clone)]
pub enum CatalogEntry {
    Structure(FiniteStructure),
    Diagram(GreechieDiagram),
    Partial(PartialTable),
    Qmv(QmvTable),
}

/// Entry names as listed by `catalog list`; `(n)` marks generators.
pub const CATALOG_NAMES: &[&str] = &[
    "BOOL(n)",
    "MO(n)",
    "MO2",
    "O6",
    "G12",
    "G12-DIAGRAM",
    "G14",
    "B30",
    "B30-DIAGRAM",
    "K5",
    "P9",
    "SHARP+SCALAR(n)",
    "NONREG4",
    "K5xK5-GAP",
    "K5-PSUM",
    "BOOL(n)-PSUM",
    "MO2-PSUM",
    "G12-PSUM",
    "M3",
    "M4",
];

fn generator_arg(name: &str, prefix: &str, suffix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.strip_suffix(suffix)?.parse().ok()
}

/// Looks up a catalog entry by name.
pub fn catalog(name: &str) -> Result<CatalogEntry, CatalogError> {
    if let Some(n) = generator_arg(name, "BOOL(", ")-PSUM") {
        let s = boolean(n).ok_or_else(|| CatalogError::BadArgument(name.into()))?;
        return Ok(CatalogEntry::Partial(PartialTable::from_orthomodular(&s)?));
    }
    if let Some(n) = generator_arg(name, "BOOL(", ")") {
        return boolean(n)
            .map(CatalogEntry::Structure)
            .ok_or_else(|| CatalogError::BadArgument(name.into()));
    }
    if let Some(n) = generator_arg(name, "MO(", ")") {
        return mo(n)
            .map(CatalogEntry::Structure)
            .ok_or_else(|| CatalogError::BadArgument(name.into()));
    }
    if let Some(n) = generator_arg(name, "SHARP+SCALAR(", ")") {
        return sharp_scalar(n)
            .map(CatalogEntry::Structure)
            .ok_or_else(|| CatalogError::BadArgument(name.into()));
    }
    let s = |t: &str| FiniteStructure::parse(t).map(CatalogEntry::Structure).map_err(CatalogError::from);
    match name {
        "MO2" => Ok(CatalogEntry::Structure(mo(2).unwrap())),
        "O6" => Ok(CatalogEntry::Structure(o6())),
        "G12" => s(G12_TEXT),
        "G14" => s(G14_TEXT),
        "B30" => s(B30_TEXT),
        "P9" => s(P9_TEXT),
        "K5" => Ok(CatalogEntry::Structure(k5())),
        "NONREG4" => Ok(CatalogEntry::Structure(nonreg4())),
        "K5xK5-GAP" => Ok(CatalogEntry::Structure(k5_square_gap())),
        "G12-DIAGRAM" => Ok(CatalogEntry::Diagram(parse_greechie(G12_DIAGRAM)?)),
        "B30-DIAGRAM" => Ok(CatalogEntry::Diagram(parse_greechie(B30_DIAGRAM)?)),
        "K5-PSUM" => Ok(CatalogEntry::Partial(PartialTable::parse(K5_PSUM_TEXT)?)),
        "MO2-PSUM" => Ok(CatalogEntry::Partial(PartialTable::from_orthomodular(&mo(2).unwrap())?)),
        "G12-PSUM" => Ok(CatalogEntry::Partial(PartialTable::from_orthomodular(
            &FiniteStructure::parse(G12_TEXT)?,
        )?)),
        "M3" => Ok(CatalogEntry::Qmv(QmvTable::parse(M3_TEXT)?)),
        "M4" => Ok(CatalogEntry::Qmv(QmvTable::parse(M4_TEXT)?)),
        _ => Err(CatalogError::Unknown(name.to_string())),
    }
}

/// Looks up a structure entry.
pub fn structure(name: &str) -> Result<FiniteStructure, CatalogError> {
    match catalog(name)? {
        CatalogEntry::Structure(s) => Ok(s),
        _ => Err(CatalogError::WrongKind(name.to_string())),
    }
}

/// Looks up a Greechie diagram entry.
pub fn diagram(name: &str) -> Result<GreechieDiagram, CatalogError> {
    match catalog(name)? {
        CatalogEntry::Diagram(d) => Ok(d),
        _ => Err(CatalogError::WrongKind(name.to_string())),
    }
}

/// Looks up a partial-sum table entry.
pub fn partial_table(name: &str) -> Result<PartialTable, CatalogError> {
    match catalog(name)? {
        CatalogEntry::Partial(t) => Ok(t),
        _ => Err(CatalogError::WrongKind(name.to_string())),
    }
}

/// Looks up a QMV table entry.
pub fn qmv_table(name: &str) -> Result<QmvTable, CatalogError> {
    match catalog(name)? {
        CatalogEntry::Qmv(t) => Ok(t),
        _ => Err(CatalogError::WrongKind(name.to_string())),
    }
}

/// Names of the concrete structures used for catalog-wide sweeps.
pub const STANDARD_STRUCTURES: &[&str] = &[
    "BOOL(1)",
    "BOOL(2)",
    "NONREG4",
    "K5",
    "MO2",
    "O6",
    "BOOL(3)",
    "MO(3)",
    "SHARP+SCALAR(2)",
    "P9",
    "G12",
    "G14",
    "BOOL(4)",
    "K5xK5-GAP",
    "B30",
];

/// The concrete structures, ascending by size then by name.
pub fn standard_structures() -> Vec<(String, FiniteStructure)> {
    let mut v: Vec<(String, FiniteStructure)> = STANDARD_STRUCTURES
        .iter()
        .map(|n| (n.to_string(), structure(n).expect("catalog entry")))
        .collect();
    v.sort_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| a.0.cmp(&b.0)));
    v
}

/// Standard structures belonging to `class` (by the ′-reduct or the full signature).
pub fn structures_of_class(class: StructureClass) -> Vec<(String, FiniteStructure)> {
    standard_structures()
        .into_iter()
        .filter(|(_, s)| s.validate().is(class))
        .collect()
}

/// Partial-sum tables used for effect-algebra sweeps.
pub const STANDARD_PARTIAL_TABLES: &[&str] = &["BOOL(1)-PSUM", "BOOL(2)-PSUM", "K5-PSUM", "MO2-PSUM", "BOOL(3)-PSUM"];

/// Boolean algebra with `n` atoms named `a`, `b`, …; other elements are
/// named by their atoms' letters, with bounds `0` and `1`.
pub fn boolean(n: usize) -> Option<FiniteStructure> {
    if n > 6 {
        return None;
    }
    let size = 1usize << n;
    let letters: Vec<char> = ('a'..='z').take(n).collect();
    let name = |m: usize| -> String {
        if m == 0 {
            "0".into()
        } else if m == size - 1 {
            "1".into()
        } else {
            (0..n).filter(|i| m & (1 << i) != 0).map(|i| letters[i]).collect()
        }
    };
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by_key(|&m| (m.count_ones(), name(m)));
    let pos: Vec<usize> = {
        let mut p = vec![0; size];
        for (i, &m) in order.iter().enumerate() {
            p[m] = i;
        }
        p
    };
    let names: Vec<String> = order.iter().map(|&m| name(m)).collect();
    let mut le = Vec::new();
    for &m in &order {
        for i in 0..n {
            if m & (1 << i) == 0 {
                le.push((pos[m], pos[m | (1 << i)]));
            }
        }
    }
    let inv: Vec<Elem> = order.iter().map(|&m| pos[(size - 1) & !m]).collect();
    FiniteStructure::new(names, &le, inv, None).ok()
}

/// The horizontal sum of `n` four-element Boolean algebras, elements
/// `0, 1, a, a', b, b', …`.
pub fn mo(n: usize) -> Option<FiniteStructure> {
    if n == 0 || 2 * n + 2 > crate::lattice::MAX_ELEMENTS {
        return None;
    }
    let mut names = vec!["0".to_string()];
    for i in 0..n {
        let base = letter_name(i);
        names.push(base.clone());
        names.push(format!("{base}'"));
    }
    names.push("1".to_string());
    let one = names.len() - 1;
    let mut le = Vec::new();
    let mut inv = vec![0; names.len()];
    inv[0] = one;
    inv[one] = 0;
    for i in 0..n {
        let (x, y) = (1 + 2 * i, 2 + 2 * i);
        le.extend([(0, x), (0, y), (x, one), (y, one)]);
        inv[x] = y;
        inv[y] = x;
    }
    FiniteStructure::new(names, &le, inv, None).ok()
}

fn letter_name(i: usize) -> String {
    let letters: Vec<char> = ('a'..='z').collect();
    if i < 26 {
        letters[i].to_string()
    } else {
        format!("{}{}", letters[i % 26], i / 26)
    }
}

/// The benzene ring: 0 < a < b < 1 and 0 < b' < a' < 1.
pub fn o6() -> FiniteStructure {
    FiniteStructure::from_named(
        &["0", "a", "b", "b'", "a'", "1"],
        &[("0", "a"), ("a", "b"), ("b", "1"), ("0", "b'"), ("b'", "a'"), ("a'", "1")],
        &[("0", "1"), ("a", "a'"), ("b", "b'")],
        None,
    )
    .expect("O6 is well formed")
}

const K5_NAMES: [&str; 5] = ["0", "1/4", "1/2", "3/4", "1"];

/// The five-element chain with x′ = 1 − x and the ∼ complement sending 0
/// to 1 and every other element to 0.
pub fn k5() -> FiniteStructure {
    FiniteStructure::from_named(
        &K5_NAMES,
        &[("0", "1/4"), ("1/4", "1/2"), ("1/2", "3/4"), ("3/4", "1")],
        &[("0", "1"), ("1/4", "3/4"), ("1/2", "1/2")],
        Some(&[("0", "1"), ("1/4", "0"), ("1/2", "0"), ("3/4", "0"), ("1", "0")]),
    )
    .expect("K5 is well formed")
}

/// Diamond 0 < a, b < 1 with a′ = a and b′ = b: an involutive lattice that
/// is not regular.
pub fn nonreg4() -> FiniteStructure {
    FiniteStructure::from_named(
        &["0", "a", "b", "1"],
        &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
        &[("0", "1"), ("a", "a"), ("b", "b")],
        None,
    )
    .expect("NONREG4 is well formed")
}

/// Horizontal sum of BOOL(n) with the scalar chain 1/4 < 1/2 < 3/4.
pub fn sharp_scalar(n: usize) -> Option<FiniteStructure> {
    if !(1..=5).contains(&n) {
        return None;
    }
    let b = boolean(n)?;
    let mut names: Vec<String> = b.names().to_vec();
    let top = names.pop().expect("boolean has a top");
    let base = names.len();
    names.extend(["1/4", "1/2", "3/4"].map(String::from));
    names.push(top);
    let one = names.len() - 1;
    let remap = |x: Elem| if x == b.one() { one } else { x };
    let mut le: Vec<(Elem, Elem)> = b.covers().into_iter().map(|(x, y)| (remap(x), remap(y))).collect();
    le.extend([(b.zero(), base), (base, base + 1), (base + 1, base + 2), (base + 2, one)]);
    let mut inv: Vec<Elem> = (0..b.len() - 1).map(|x| remap(b.inv(x))).collect();
    inv.extend([base + 2, base + 1, base, b.zero()]);
    FiniteStructure::new(names, &le, inv, None).ok()
}

/// The square of K5 with its centre (1/2, 1/2) removed: a BZ-poset whose
/// MacNeille completion puts the centre back.
pub fn k5_square_gap() -> FiniteStructure {
    let vals = [0usize, 1, 2, 3, 4];
    let name = |x: usize, y: usize| -> String {
        match (x, y) {
            (0, 0) => "0".into(),
            (4, 4) => "1".into(),
            _ => format!("{},{}", K5_NAMES[x], K5_NAMES[y]),
        }
    };
    let pts: Vec<(usize, usize)> = vals
        .iter()
        .flat_map(|&x| vals.iter().map(move |&y| (x, y)))
        .filter(|&p| p != (2, 2))
        .collect();
    let idx = |p: (usize, usize)| pts.iter().position(|&q| q == p).unwrap();
    let names: Vec<String> = pts.iter().map(|&(x, y)| name(x, y)).collect();
    let mut le = Vec::new();
    for &p in &pts {
        for &q in &pts {
            if p.0 <= q.0 && p.1 <= q.1 {
                le.push((idx(p), idx(q)));
            }
        }
    }
    let tilde = |x: usize| if x == 0 { 4 } else { 0 };
    let inv: Vec<Elem> = pts.iter().map(|&(x, y)| idx((4 - x, 4 - y))).collect();
    let bz: Vec<Elem> = pts.iter().map(|&(x, y)| idx((tilde(x), tilde(y)))).collect();
    FiniteStructure::new(names, &le, inv, Some(bz)).expect("K5xK5-GAP is well formed")
}

/// True when two structures have the same element names and, under that
/// name matching, the same order, ′ and ∼ tables.
pub fn same_by_names(x: &FiniteStructure, y: &FiniteStructure) -> bool {
    if x.len() != y.len() || x.has_bz() != y.has_bz() {
        return false;
    }
    let map: Option<Vec<Elem>> = x.elements().map(|e| y.id(x.name(e))).collect();
    let Some(map) = map else { return false };
    x.elements().all(|a| {
        map[x.inv(a)] == y.inv(map[a])
            && x.bz(a).map(|t| map[t]) == y.bz(map[a])
            && bits(x.up(a)).map(|b| bit(map[b])).fold(0, |m, b| m | b) == y.up(map[a])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Axiom;

    #[test]
    fn diagram_errors() {
        assert!(matches!(parse_greechie("a a b"), Err(CatalogError::DuplicateAtom { .. })));
        assert!(matches!(parse_greechie("a b c\na b d"), Err(CatalogError::SharedAtoms(0, 1))));
        assert!(matches!(parse_greechie("a"), Err(CatalogError::SmallBlock { line: 1 })));
        assert!(matches!(parse_greechie("# nothing\n"), Err(CatalogError::EmptyBlock { .. })));
    }

    #[test]
    fn single_blocks_paste_to_boolean_algebras() {
        let two = paste(&parse_greechie("a b").unwrap()).unwrap();
        assert_eq!(two.len(), 4);
        assert_eq!(two.inv(two.elem("a").unwrap()), two.elem("b").unwrap());
        let three = paste(&parse_greechie("a b c").unwrap()).unwrap();
        assert!(three.isomorphism(&boolean(3).unwrap()).is_some());
        let four = paste(&parse_greechie("a b c d").unwrap()).unwrap();
        assert!(four.isomorphism(&boolean(4).unwrap()).is_some());
    }

    #[test]
    fn square_loop_is_rejected() {
        let d = parse_greechie("a b c\nc d e\ne f g\ng h a").unwrap();
        assert!(matches!(paste(&d), Err(CatalogError::NotOrthomodular(_))));
    }

    #[test]
    fn classes_of_entries() {
        use StructureClass::*;
        let expect = [
            ("BOOL(1)", OrthomodularLattice),
            ("MO2", OrthomodularLattice),
            ("O6", Ortholattice),
            ("G12", OrthomodularLattice),
            ("B30", OrthomodularLattice),
            ("G14", RegularInvolutiveLattice),
            ("K5", BzLattice),
            ("P9", BzPoset),
            ("SHARP+SCALAR(2)", RegularInvolutiveLattice),
            ("NONREG4", InvolutiveLattice),
            ("K5xK5-GAP", BzPoset),
        ];
        for (name, class) in expect {
            let s = structure(name).unwrap();
            assert_eq!(s.validate().kind, Some(class), "{name}");
        }
        let p9 = structure("P9").unwrap();
        assert_eq!(p9.validate().inv_kind, Some(InvolutivePoset));
        assert!(p9.validate().failure(Axiom::Regularity).is_none());
    }

    #[test]
    fn g14_is_regular() {
        let g14 = structure("G14").unwrap();
        assert!(g14.validate().failure(Axiom::Regularity).is_none());
    }

    #[test]
    fn unknown_names() {
        assert!(matches!(catalog("X9"), Err(CatalogError::Unknown(_))));
        assert!(matches!(catalog("BOOL(9)"), Err(CatalogError::BadArgument(_))));
        assert!(matches!(structure("M4"), Err(CatalogError::WrongKind(_))));
    }
}
