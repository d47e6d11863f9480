//! Resolution of command-line arguments into workbench values.

use std::fs;

use anyhow::{anyhow, bail, Context, Result};
use qlw_core::algebraic::Assignment;
use qlw_core::catalog::{self, CatalogEntry};
use qlw_core::effect::{PartialTable, QmvTable};
use qlw_core::formula::{self, Dialect, Formula};
use qlw_core::kripke::Realization;
use qlw_core::lattice::{FiniteStructure, StructureClass};
use qlw_core::proof::{self, Calculus, Derivation};

pub fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read `{path}`"))
}

/// A source is `catalog:NAME` or a file in one of the workbench formats.
/// The file kind is recognised from its keys: `oplus` for QMV tables,
/// `psum` for partial tables, key-less lines for Greechie diagrams.
pub fn load(src: &str) -> Result<CatalogEntry> {
    if let Some(name) = src.strip_prefix("catalog:") {
        return Ok(catalog::catalog(name)?);
    }
    let text = read(src)?;
    parse_entry(&text).with_context(|| format!("in `{src}`"))
}

fn parse_entry(text: &str) -> Result<CatalogEntry> {
    let lines: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect();
    if lines.iter().any(|l| !l.contains(':')) {
        return Ok(CatalogEntry::Diagram(catalog::parse_greechie(text)?));
    }
    let has = |key: &str| lines.iter().any(|l| l.split(':').next().map(str::trim) == Some(key));
    Ok(if has("oplus") || has("star") {
        CatalogEntry::Qmv(QmvTable::parse(text)?)
    } else if has("psum") {
        CatalogEntry::Partial(PartialTable::parse(text)?)
    } else {
        CatalogEntry::Structure(FiniteStructure::parse(text)?)
    })
}

fn display_name(src: &str) -> String {
    src.strip_prefix("catalog:").unwrap_or(src).to_string()
}

pub fn structure(src: &str) -> Result<FiniteStructure> {
    match load(src)? {
        CatalogEntry::Structure(s) => Ok(s),
        CatalogEntry::Diagram(d) => Ok(catalog::paste(&d)?),
        CatalogEntry::Partial(t) => Ok(t.to_structure()?),
        CatalogEntry::Qmv(_) => bail!("`{src}` is a QMV table, not a structure"),
    }
}

pub fn partial(src: &str) -> Result<PartialTable> {
    match load(src)? {
        CatalogEntry::Partial(t) => Ok(t),
        CatalogEntry::Qmv(m) => Ok(m.to_ea()),
        CatalogEntry::Structure(s) => Ok(PartialTable::from_orthomodular(&s)?),
        CatalogEntry::Diagram(d) => Ok(PartialTable::from_orthomodular(&catalog::paste(&d)?)?),
    }
}

pub fn qmv(src: &str) -> Result<QmvTable> {
    match load(src)? {
        CatalogEntry::Qmv(m) => Ok(m),
        CatalogEntry::Partial(t) => Ok(t.to_qmv()?),
        _ => bail!("`{src}` is not a QMV or partial-sum table"),
    }
}

/// Expands a `--structures` list. Items are sources, `class:NAME` for the
/// catalog structures of a class, or `standard` for the whole standard list.
pub fn structures(items: &[String]) -> Result<Vec<(String, FiniteStructure)>> {
    let mut out = Vec::new();
    for item in items {
        if item == "standard" {
            out.extend(catalog::standard_structures());
        } else if let Some(c) = item.strip_prefix("class:") {
            let class = StructureClass::parse(c).ok_or_else(|| anyhow!("unknown class `{c}`"))?;
            out.extend(catalog::structures_of_class(class));
        } else {
            out.push((display_name(item), structure(item)?));
        }
    }
    Ok(out)
}

pub fn tables(items: &[String]) -> Result<Vec<(String, PartialTable)>> {
    items.iter().map(|i| Ok((display_name(i), partial(i)?))).collect()
}

pub fn realization(path: &str) -> Result<Realization> {
    Realization::parse(&read(path)?).with_context(|| format!("in `{path}`"))
}

/// A derivation file, or `sample:NAME` for a shipped sample.
pub fn derivation(src: &str, calculus: Option<Calculus>) -> Result<Derivation> {
    let text = match src.strip_prefix("sample:") {
        Some(name) => proof::SAMPLES
            .iter()
            .find(|(n, _)| *n == name || n.strip_suffix(".drv") == Some(name))
            .map(|(_, t)| t.to_string())
            .ok_or_else(|| anyhow!("no sample derivation `{name}`"))?,
        None => read(src)?,
    };
    Derivation::parse(&text, calculus).with_context(|| format!("in `{src}`"))
}

pub fn dialect(name: &str) -> Result<Dialect> {
    Dialect::parse(name).ok_or_else(|| anyhow!("unknown dialect `{name}`"))
}

pub fn calculus(name: &str) -> Result<Calculus> {
    Calculus::parse(name).ok_or_else(|| anyhow!("unknown calculus `{name}`"))
}

pub fn formula(d: Dialect, text: &str) -> Result<Formula> {
    formula::parse(d, text).with_context(|| format!("cannot parse `{text}` as {d}"))
}

pub fn formulas(d: Dialect, texts: &[String]) -> Result<Vec<Formula>> {
    texts.iter().map(|t| formula(d, t)).collect()
}

/// Splits `key=value`.
pub fn binding(item: &str) -> Result<(&str, &str)> {
    item.split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .ok_or_else(|| anyhow!("expected `literal=value`, found `{item}`"))
}

/// `p=a` pairs resolved against a structure's element names.
pub fn assignment(s: &FiniteStructure, items: &[String]) -> Result<Assignment> {
    let mut v = Assignment::new();
    for item in items {
        let (lit, name) = binding(item)?;
        v.insert(lit.to_string(), s.elem(name)?);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recognises_file_kinds() {
        let s = catalog::structure("MO2").unwrap();
        assert!(matches!(parse_entry(&s.to_text()).unwrap(), CatalogEntry::Structure(_)));
        let q = catalog::qmv_table("M3").unwrap();
        assert!(matches!(parse_entry(&q.to_text()).unwrap(), CatalogEntry::Qmv(_)));
        let t = catalog::partial_table("K5-PSUM").unwrap();
        assert!(matches!(parse_entry(&t.to_text()).unwrap(), CatalogEntry::Partial(_)));
        assert!(matches!(parse_entry("a b\nb c\n").unwrap(), CatalogEntry::Diagram(_)));
    }

    #[test]
    fn bindings() {
        assert_eq!(binding("p = a'").unwrap(), ("p", "a'"));
        assert!(binding("p").is_err());
    }
}
