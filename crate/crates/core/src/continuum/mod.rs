//! Quadrature realizations of the covariant algebra for two continuous groups.
//!
//! [`heisenberg`] covers the three-dimensional Heisenberg group with a
//! character `t ↦ e^{iνt}` of its centre. [`affine`] covers the `ax+b` group
//! `(0,∞) ⋉ ℝ` with the trivial character of the translations, where the
//! transport factor `δ` and the modular function of `G` are not identically 1.
//!
//! Each study evaluates a fixed set of identities at three resolutions
//! (reference/4, reference/2, reference) and compares against independent
//! quadratures at the nodes of the coarsest grid.

pub mod affine;
pub mod grid;
pub mod heisenberg;
pub mod testfn;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::report::{PropertyRecord, REPORT_VERSION};

pub use grid::{Grid1D, GridKind};
pub use testfn::{Family, TestFunction};

/// Residuals below this count as converged in refinement studies.
pub const REFINEMENT_FLOOR: f64 = 1e-10;
/// Tolerance for quadrature identities at the reference resolution.
pub const REFERENCE_TOL: f64 = 1e-6;

/// One line of a refinement table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub property: String,
    pub resolution: usize,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuumReport {
    pub version: String,
    pub group: String,
    pub seed: u64,
    pub resolutions: Vec<usize>,
    pub rows: Vec<StudyRow>,
    /// Identities checked at the reference resolution.
    pub properties: Vec<PropertyRecord>,
}

impl ContinuumReport {
    pub(crate) fn new(group: &str, seed: u64, resolutions: &[usize]) -> Self {
        ContinuumReport {
            version: REPORT_VERSION.into(),
            group: group.into(),
            seed,
            resolutions: resolutions.to_vec(),
            rows: Vec::new(),
            properties: Vec::new(),
        }
    }

    pub fn reference(&self) -> usize {
        *self.resolutions.last().expect("study without resolutions")
    }

    pub fn all_pass(&self) -> bool {
        self.properties.iter().all(|p| p.pass)
    }

    pub fn property(&self, id: &str) -> Option<&PropertyRecord> {
        self.properties.iter().find(|p| p.id == id)
    }

    /// Residual of `property` at `resolution`.
    pub fn residual(&self, property: &str, resolution: usize) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.property == property && r.resolution == resolution)
            .map(|r| r.residual)
    }

    pub(crate) fn push_row(&mut self, property: &str, resolution: usize, residual: f64) {
        self.rows.push(StudyRow {
            property: property.into(),
            resolution,
            residual,
        });
    }

    /// Adds a property checked on the reference row of `property`.
    pub(crate) fn check_reference(&mut self, property: &str, anchor: &str, trials: usize, tol: f64) {
        let r = self.residual(property, self.reference()).unwrap_or(f64::NAN);
        self.properties.push(PropertyRecord::new(property, anchor, trials, r, tol));
    }

    /// Adds the refinement check over the listed properties.
    pub(crate) fn check_refinement(&mut self, tracked: &[&str]) {
        let rows: Vec<StudyRow> = self.rows.iter().filter(|r| tracked.contains(&r.property.as_str())).cloned().collect();
        let bad = refinement_violations(&rows);
        self.properties.push(PropertyRecord::new(
            "refinement_monotone",
            "residual halves under node doubling or is below the floor",
            rows.len(),
            bad.len() as f64,
            0.0,
        ));
    }
}

/// Steps where a residual fails to halve under node doubling while still
/// above [`REFINEMENT_FLOOR`], as `property@coarse->fine` labels.
pub fn refinement_violations(rows: &[StudyRow]) -> Vec<String> {
    let mut names: Vec<&str> = rows.iter().map(|r| r.property.as_str()).collect();
    names.sort_unstable();
    names.dedup();
    let mut out = Vec::new();
    for name in names {
        let mut series: Vec<&StudyRow> = rows.iter().filter(|r| r.property == name).collect();
        series.sort_by_key(|r| r.resolution);
        for w in series.windows(2) {
            let (a, b) = (w[0], w[1]);
            let ok = b.residual <= REFINEMENT_FLOOR || b.residual <= 0.5 * a.residual;
            if !ok {
                out.push(format!("{name}@{}->{}", a.resolution, b.resolution));
            }
        }
    }
    out
}

/// `[r/4, r/2, r]` for a reference resolution divisible by 8.
pub fn study_resolutions(reference: usize) -> Result<Vec<usize>> {
    if reference < 8 || reference % 8 != 0 {
        return Err(invalid(format!("reference resolution must be a positive multiple of 8, got {reference}")));
    }
    Ok(vec![reference / 4, reference / 2, reference])
}

pub(crate) fn max_abs(a: &[crate::C64], b: &[crate::C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(p: &str, r: usize, v: f64) -> StudyRow {
        StudyRow {
            property: p.into(),
            resolution: r,
            residual: v,
        }
    }

    #[test]
    fn refinement_rule() {
        let rows = vec![
            row("a", 16, 1e-2),
            row("a", 32, 4e-3),
            row("a", 64, 3e-3),
            row("b", 16, 1e-9),
            row("b", 32, 5e-11),
            row("b", 64, 8e-11),
        ];
        assert_eq!(refinement_violations(&rows), vec!["a@32->64".to_string()]);
    }

    #[test]
    fn resolutions() {
        assert_eq!(study_resolutions(64).unwrap(), vec![16, 32, 64]);
        assert!(study_resolutions(60).is_err());
        assert!(study_resolutions(0).is_err());
    }
}
