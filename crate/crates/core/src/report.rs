//! Machine-readable verification results.

use serde::{Deserialize, Serialize};

pub const REPORT_VERSION: &str = "1";

/// Outcome of one identity checked over many random trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyRecord {
    pub id: String,
    pub anchor: String,
    pub trials: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl PropertyRecord {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>, trials: usize, max_residual: f64, tolerance: f64) -> Self {
        PropertyRecord {
            id: id.into(),
            anchor: anchor.into(),
            trials,
            max_residual,
            tolerance,
            // NaN never passes.
            pass: max_residual <= tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubgroupDescriptor {
    pub label: String,
    pub order: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterDescriptor {
    pub index: Option<usize>,
    /// Reduced phases `a/b` meaning `exp(2πi·a/b)`, one per element of `N`.
    pub phases: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub version: String,
    pub group: String,
    #[serde(rename = "N")]
    pub n: SubgroupDescriptor,
    pub xi: CharacterDescriptor,
    pub seed: u64,
    pub properties: Vec<PropertyRecord>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.properties.iter().all(|p| p.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyRecord> {
        self.properties.iter().filter(|p| !p.pass)
    }

    pub fn property(&self, id: &str) -> Option<&PropertyRecord> {
        self.properties.iter().find(|p| p.id == id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flag_tracks_tolerance() {
        assert!(PropertyRecord::new("a", "", 1, 1e-10, 1e-9).pass);
        assert!(!PropertyRecord::new("a", "", 1, 1e-8, 1e-9).pass);
        assert!(!PropertyRecord::new("a", "", 1, f64::NAN, 1e-9).pass);
    }

    #[test]
    fn json_field_names() {
        let r = VerificationReport {
            version: REPORT_VERSION.into(),
            group: "Z1".into(),
            n: SubgroupDescriptor { label: "trivial".into(), order: 1 },
            xi: CharacterDescriptor { index: Some(0), phases: vec!["0".into()] },
            seed: 3,
            properties: vec![PropertyRecord::new("identity", "e # psi = psi", 2, 0.0, 1e-12)],
        };
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in ["version", "group", "N", "xi", "seed", "properties"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let p = &v["properties"][0];
        for key in ["id", "anchor", "trials", "max_residual", "tolerance", "pass"] {
            assert!(p.get(key).is_some(), "{key}");
        }
        let back: VerificationReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
