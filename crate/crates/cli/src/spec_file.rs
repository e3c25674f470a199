//! Puzzle lookup by catalog name or spec file.
//!
//! Spec files are JSON objects or `key = value` lines:
//!
//! ```text
//! name = Dc28 Arrow
//! inner4 = 7
//! ```
//!
//! Keys other than `name`, `cells`, `note` and `symmetry` are rib types.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use quintessence::puzzle::{catalog, find_puzzle, PuzzleSpec};
use quintessence::strata::RibType;
use serde::Deserialize;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    name: String,
    ribs: BTreeMap<String, usize>,
    cells: Option<usize>,
    #[serde(default)]
    note: String,
    symmetry: Option<usize>,
}

fn build(doc: SpecDoc) -> Result<PuzzleSpec> {
    let mut ribs = Vec::new();
    for (k, n) in &doc.ribs {
        let t: RibType = k.parse()?;
        ribs.push((t, *n));
    }
    if ribs.iter().all(|r| r.1 == 0) {
        bail!("spec {:?} lists no ribs", doc.name);
    }
    let mut spec = PuzzleSpec::new(doc.name, &ribs);
    if let Some(c) = doc.cells {
        spec.cells = c;
    }
    spec.note = doc.note;
    spec.symmetry = doc.symmetry;
    Ok(spec)
}

pub fn parse_spec(text: &str) -> Result<PuzzleSpec> {
    if text.trim_start().starts_with('{') {
        let doc: SpecDoc = serde_json::from_str(text).context("parsing JSON spec")?;
        return build(doc);
    }
    let mut doc = SpecDoc {
        name: String::new(),
        ribs: BTreeMap::new(),
        cells: None,
        note: String::new(),
        symmetry: None,
    };
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("line {}: expected key = value", n + 1);
        };
        let (k, v) = (k.trim(), v.trim());
        let count = || v.parse::<usize>().with_context(|| format!("line {}: bad count {v:?}", n + 1));
        match k {
            "name" => doc.name = v.to_string(),
            "note" => doc.note = v.to_string(),
            "cells" => doc.cells = Some(count()?),
            "symmetry" => doc.symmetry = Some(count()?),
            _ => {
                k.parse::<RibType>().with_context(|| format!("line {}", n + 1))?;
                *doc.ribs.entry(k.to_string()).or_insert(0) += count()?;
            }
        }
    }
    if doc.name.is_empty() {
        bail!("spec has no name");
    }
    build(doc)
}

/// Exact catalog name, then an existing file, then a loose catalog match.
pub fn resolve(arg: &str) -> Result<PuzzleSpec> {
    let cat = catalog();
    let exact = cat
        .iter()
        .cloned()
        .chain(cat.iter().flat_map(|s| s.variant_specs()))
        .find(|s| s.name == arg);
    if let Some(s) = exact {
        return Ok(s);
    }
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return parse_spec(&text).with_context(|| format!("in spec file {}", path.display()));
    }
    Ok(find_puzzle(arg)?)
}
