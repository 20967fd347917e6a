//! `characters` and `invariant`.

use std::path::Path;

use anyhow::Result;
use covhalg_core::report::{CharacterDescriptor, SubgroupDescriptor};
use covhalg_core::{enumerate_characters, invariant_characters, invariant_characters_semidirect, Character};
use serde::Serialize;

use crate::groupspec::GroupSpec;
use crate::output::{csv_bytes, emit, json_bytes, Format};

#[derive(Serialize)]
struct Row {
    index: usize,
    phases: String,
}

fn describe(index: usize, xi: &Character) -> CharacterDescriptor {
    CharacterDescriptor {
        index: Some(index),
        phases: xi.phases().iter().map(|p| p.to_string()).collect(),
    }
}

fn rows(chars: &[CharacterDescriptor]) -> Vec<Row> {
    chars
        .iter()
        .map(|c| Row {
            index: c.index.unwrap_or(0),
            phases: c.phases.join(" "),
        })
        .collect()
}

pub fn characters(spec: &Path, format: Format, out: Option<&Path>) -> Result<()> {
    let built = GroupSpec::load(spec)?.build()?;
    let dual = enumerate_characters(&built.n)?;
    let chars: Vec<CharacterDescriptor> = dual.characters().iter().enumerate().map(|(i, c)| describe(i, c)).collect();
    let bytes = match format {
        Format::Json => json_bytes(&chars)?,
        Format::Csv => csv_bytes(
            &[format!("G = {}, N = {} (order {}): {} characters", built.label(), built.n_label, built.n.len(), chars.len())],
            &rows(&chars),
            &["index", "phases"],
        )?,
    };
    emit(out, &bytes)
}

#[derive(Serialize)]
struct InvariantListing {
    group: String,
    #[serde(rename = "N")]
    n: SubgroupDescriptor,
    total: usize,
    invariant: usize,
    criterion: String,
    agree: bool,
    characters: Vec<CharacterDescriptor>,
}

/// Returns whether the brute-force and criterion paths agree.
pub fn invariant(spec: &Path, format: Format, out: Option<&Path>) -> Result<bool> {
    let built = GroupSpec::load(spec)?.build()?;
    let dual = enumerate_characters(&built.n)?;
    let gamma = invariant_characters(&built.n)?;
    let (criterion, agree) = if built.n.is_central() {
        ("central N: every character is invariant".to_string(), gamma.same_set(&dual))
    } else if let Some(nk) = &built.n_in_k {
        let crit = invariant_characters_semidirect(&built.sd, nk)?;
        ("brute force vs semi-direct criterion".to_string(), gamma.same_set(&crit))
    } else {
        ("brute force only (N is not inside K)".to_string(), true)
    };
    let chars: Vec<CharacterDescriptor> = dual
        .characters()
        .iter()
        .enumerate()
        .filter(|(_, c)| gamma.contains(c))
        .map(|(i, c)| describe(i, c))
        .collect();
    let listing = InvariantListing {
        group: built.label(),
        n: SubgroupDescriptor {
            label: built.n_label.clone(),
            order: built.n.len(),
        },
        total: dual.len(),
        invariant: gamma.len(),
        criterion,
        agree,
        characters: chars,
    };
    let summary = if listing.invariant == listing.total {
        format!("all invariant ({} of {})", listing.invariant, listing.total)
    } else {
        format!("{} invariant of {} total", listing.invariant, listing.total)
    };
    let bytes = match format {
        Format::Json => json_bytes(&listing)?,
        Format::Csv => csv_bytes(
            &[
                format!("G = {}, N = {} (order {})", listing.group, listing.n.label, listing.n.order),
                summary.clone(),
                format!("criterion: {}; agree = {}", listing.criterion, listing.agree),
            ],
            &rows(&listing.characters),
            &["index", "phases"],
        )?,
    };
    emit(out, &bytes)?;
    if !agree {
        eprintln!("error: brute-force and criterion sets differ");
    }
    Ok(agree)
}
