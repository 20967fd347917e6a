//! `continuum verify`: refinement tables for the continuous groups.

use std::path::Path;

use anyhow::Result;
use clap::ValueEnum;
use covhalg_core::continuum::affine::affine_study;
use covhalg_core::continuum::heisenberg::h1_study;

use crate::output::{csv_bytes, emit, json_bytes, Format};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ContinuumGroup {
    /// Heisenberg group with a central character e^{iνt}.
    H1,
    /// The ax+b group with the trivial character of the translations.
    Affine,
}

impl ContinuumGroup {
    pub fn default_resolution(self) -> usize {
        match self {
            ContinuumGroup::H1 => 64,
            ContinuumGroup::Affine => 256,
        }
    }
}

pub fn verify(group: ContinuumGroup, resolution: Option<usize>, seed: u64, format: Format, out: Option<&Path>) -> Result<bool> {
    let resolution = resolution.unwrap_or(group.default_resolution());
    let report = match group {
        ContinuumGroup::H1 => h1_study(resolution, seed)?,
        ContinuumGroup::Affine => affine_study(resolution, seed)?,
    };
    let bytes = match format {
        Format::Json => json_bytes(&report)?,
        Format::Csv => csv_bytes(&[], &report.rows, &["property", "resolution", "residual"])?,
    };
    emit(out, &bytes)?;
    for p in &report.properties {
        let tag = if p.pass { "ok  " } else { "FAIL" };
        eprintln!("{tag} {} {}: residual {:e}, tolerance {:e}", report.group, p.id, p.max_residual, p.tolerance);
    }
    Ok(report.all_pass())
}
