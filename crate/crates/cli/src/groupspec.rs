//! Group description files.
//!
//! A file names `H` and `K` as products of cyclic groups, the action of each
//! generator of `H` on `K`, and a selector for `N`. TOML and JSON share the
//! same fields; a file whose first non-blank character is `{` is read as JSON.
//!
//! ```toml
//! label = "H(Z4), N = K"
//! H = [4]
//! K = [4, 4]
//!
//! [action]
//! # one integer matrix per generator of H, acting on K's coordinates
//! matrix = [[[1, 0], [1, 1]]]
//!
//! [N]
//! select = "all_of_K"   # or "center", "coordinates", "elements", "trivial"
//! ```
//!
//! `action.permutations` replaces `action.matrix` with one permutation of
//! K's mixed-radix indices per generator. `N.coordinates = [i, ...]` selects
//! the subgroup of `K` spanned by those coordinate axes; `N.elements` lists
//! every element of `N` as a coordinate vector of `K`.

use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, ensure, Context, Result};
use covhalg_core::semidirect::{semidirect, Action, SemidirectGroup};
use covhalg_core::{FiniteGroup, Subgroup};
use serde::Deserialize;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default)]
    pub label: Option<String>,
    #[serde(rename = "H")]
    pub h: Vec<usize>,
    #[serde(rename = "K")]
    pub k: Vec<usize>,
    #[serde(default)]
    pub action: ActionSpec,
    #[serde(rename = "N")]
    pub n: NSelector,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    #[serde(default)]
    pub matrix: Option<Vec<Vec<Vec<i64>>>>,
    #[serde(default)]
    pub permutations: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Select {
    #[serde(rename = "all_of_K")]
    AllOfK,
    Center,
    Coordinates,
    Elements,
    Trivial,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NSelector {
    pub select: Select,
    #[serde(default)]
    pub coordinates: Option<Vec<usize>>,
    #[serde(default)]
    pub elements: Option<Vec<Vec<i64>>>,
}

/// A parsed file together with the groups it describes.
pub struct Built {
    pub spec: GroupSpec,
    pub sd: SemidirectGroup,
    /// `N` as a subgroup of `G`.
    pub n: Subgroup,
    /// `N` as a subgroup of `K`, when it lies in `K`.
    pub n_in_k: Option<Subgroup>,
    pub n_label: String,
}

impl Built {
    /// The file's label, or the generated group label.
    pub fn label(&self) -> String {
        self.spec.label.clone().unwrap_or_else(|| self.sd.group().label().to_string())
    }
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            serde_json::from_str(text).context("invalid JSON group file")
        } else {
            toml::from_str(text).context("invalid TOML group file")
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn build(self) -> Result<Built> {
        for (field, orders) in [("H", &self.h), ("K", &self.k)] {
            ensure!(orders.iter().all(|&n| n >= 1), "{field}: cyclic orders must be at least 1");
        }
        let h = Arc::new(FiniteGroup::abelian(&self.h).context("H")?);
        let k = Arc::new(FiniteGroup::abelian(&self.k).context("K")?);
        ensure!(h.order() * k.order() <= 4096, "|G| = {} exceeds the 4096-element budget", h.order() * k.order());
        let gens = self.generator_images(&k)?;
        let action = match gens {
            None => Action::trivial(Arc::clone(&h), Arc::clone(&k)),
            Some(perms) => {
                let pairs: Vec<(usize, Vec<usize>)> = generators(&self.h).into_iter().zip(perms).collect();
                Action::from_generators(Arc::clone(&h), Arc::clone(&k), &pairs).context("action")?
            }
        };
        let sd = semidirect(action).context("action")?;
        let g = Arc::clone(sd.group());
        let (n, n_in_k, n_label) = match self.n.select {
            Select::AllOfK => (sd.k_subgroup(), Some(Subgroup::whole(Arc::clone(&k))), "K".to_string()),
            Select::Center => {
                let c = Subgroup::center(Arc::clone(&g));
                let in_k = c.members().iter().all(|&x| x < k.order());
                let nk = in_k.then(|| Subgroup::new(Arc::clone(&k), c.members().iter().copied())).transpose()?;
                (c, nk, "center".to_string())
            }
            Select::Trivial => (Subgroup::trivial(Arc::clone(&g)), Some(Subgroup::trivial(Arc::clone(&k))), "trivial".into()),
            Select::Coordinates => {
                let coords = self.n.coordinates.as_ref().context("N.coordinates is required for select = \"coordinates\"")?;
                let gens = coords
                    .iter()
                    .map(|&i| {
                        ensure!(i < self.k.len(), "N.coordinates: K has no coordinate {i}");
                        let mut v = vec![0i64; self.k.len()];
                        v[i] = 1;
                        Ok(encode(&self.k, &v))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let nk = Subgroup::generated(Arc::clone(&k), &gens).context("N.coordinates")?;
                (sd.embed(&nk)?, Some(nk), format!("coordinates {coords:?}"))
            }
            Select::Elements => {
                let els = self.n.elements.as_ref().context("N.elements is required for select = \"elements\"")?;
                let idx = els
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        ensure!(v.len() == self.k.len(), "N.elements[{i}] needs {} coordinates", self.k.len());
                        Ok(encode(&self.k, v))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let nk = Subgroup::new(Arc::clone(&k), idx).context("N.elements must list a subgroup of K")?;
                (sd.embed(&nk)?, Some(nk), format!("{} listed elements", els.len()))
            }
        };
        ensure!(n.is_normal(), "N ({n_label}) is not normal in G");
        Ok(Built { spec: self, sd, n, n_in_k, n_label })
    }

    /// Permutations of `K` for each generator of `H`, or `None` for the trivial action.
    fn generator_images(&self, k: &FiniteGroup) -> Result<Option<Vec<Vec<usize>>>> {
        let ngen = self.h.len();
        match (&self.action.matrix, &self.action.permutations) {
            (Some(_), Some(_)) => bail!("action: give either matrix or permutations, not both"),
            (None, None) => Ok(None),
            (None, Some(perms)) => {
                ensure!(perms.len() == ngen, "action.permutations: expected {ngen} entries (one per generator of H), got {}", perms.len());
                for (i, p) in perms.iter().enumerate() {
                    ensure!(p.len() == k.order(), "action.permutations[{i}]: expected {} entries", k.order());
                }
                Ok(Some(perms.clone()))
            }
            (Some(mats), None) => {
                ensure!(mats.len() == ngen, "action.matrix: expected {ngen} matrices (one per generator of H), got {}", mats.len());
                let d = self.k.len();
                mats.iter()
                    .enumerate()
                    .map(|(g, m)| {
                        ensure!(m.len() == d && m.iter().all(|r| r.len() == d), "action.matrix[{g}]: expected a {d}x{d} matrix");
                        Ok((0..k.order())
                            .map(|x| {
                                let v = decode(&self.k, x);
                                let img: Vec<i64> = m.iter().map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
                                encode(&self.k, &img)
                            })
                            .collect())
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(Some)
            }
        }
    }
}

/// Mixed-radix index of a coordinate vector, last coordinate fastest,
/// with entries reduced modulo the orders.
pub fn encode(orders: &[usize], v: &[i64]) -> usize {
    orders
        .iter()
        .zip(v)
        .fold(0usize, |acc, (&n, &c)| acc * n + c.rem_euclid(n as i64) as usize)
}

pub fn decode(orders: &[usize], mut x: usize) -> Vec<i64> {
    let mut out = vec![0i64; orders.len()];
    for i in (0..orders.len()).rev() {
        out[i] = (x % orders[i]) as i64;
        x /= orders[i];
    }
    out
}

/// Indices of the unit vectors of `ℤ_{n₀} × ℤ_{n₁} × …`.
fn generators(orders: &[usize]) -> Vec<usize> {
    (0..orders.len())
        .map(|i| {
            let mut v = vec![0i64; orders.len()];
            v[i] = 1;
            encode(orders, &v)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEIS: &str = r#"
H = [4]
K = [4, 4]
[action]
matrix = [[[1, 0], [1, 1]]]
[N]
select = "center"
"#;

    #[test]
    fn heisenberg_from_matrix_matches_builtin() {
        let b = GroupSpec::parse(HEIS).unwrap().build().unwrap();
        let reference = covhalg_core::make_finite_heisenberg(4).unwrap();
        let (g, r) = (b.sd.group(), reference.group());
        assert_eq!(g.order(), 64);
        for x in 0..64 {
            for y in 0..64 {
                assert_eq!(g.op(x, y), r.op(x, y));
            }
        }
        assert_eq!(b.n.members(), &[0, 1, 2, 3]);
        assert!(b.n_in_k.is_some());
    }

    #[test]
    fn json_and_permutations() {
        let text = r#"{"H": [2], "K": [3], "action": {"permutations": [[0, 2, 1]]}, "N": {"select": "all_of_K"}}"#;
        let b = GroupSpec::parse(text).unwrap().build().unwrap();
        assert!(!b.sd.group().is_abelian());
        assert_eq!(b.n.len(), 3);
    }

    #[test]
    fn selectors() {
        let coords = HEIS.replace("select = \"center\"", "select = \"coordinates\"\ncoordinates = [1]");
        let b = GroupSpec::parse(&coords).unwrap().build().unwrap();
        assert_eq!(b.n.len(), 4);
        let els = HEIS.replace("select = \"center\"", "select = \"elements\"\nelements = [[0, 0], [0, 2]]");
        assert_eq!(GroupSpec::parse(&els).unwrap().build().unwrap().n.len(), 2);
        let not_closed = HEIS.replace("select = \"center\"", "select = \"elements\"\nelements = [[0, 0], [0, 1]]");
        assert!(GroupSpec::parse(&not_closed).unwrap().build().is_err());
        // ⟨(1,0)⟩ is not normal: conjugating by H moves it to (1, x).
        let not_normal = HEIS.replace("select = \"center\"", "select = \"coordinates\"\ncoordinates = [0]");
        let err = GroupSpec::parse(&not_normal).unwrap().build().err().unwrap();
        assert!(format!("{err:#}").contains("not normal"), "{err:#}");
    }

    #[test]
    fn diagnostics_name_the_field() {
        let err = GroupSpec::parse("H = [4]\nK = [4, 4]\n[N]\nselect = \"everything\"\n").err().unwrap();
        let msg = format!("{err:#}");
        assert!(msg.contains("line 4") || msg.contains("select"), "{msg}");
        let bad = HEIS.replace("[[1, 0], [1, 1]]", "[[1, 0], [1, 1], [0, 0]]");
        let err = GroupSpec::parse(&bad).unwrap().build().err().unwrap();
        assert!(format!("{err:#}").contains("action.matrix[0]"));
        let singular = HEIS.replace("[[1, 0], [1, 1]]", "[[1, 0], [0, 0]]");
        assert!(GroupSpec::parse(&singular).unwrap().build().is_err());
    }

    #[test]
    fn radix_roundtrip() {
        let orders = [3, 4, 2];
        for x in 0..24 {
            assert_eq!(encode(&orders, &decode(&orders, x)), x);
        }
        assert_eq!(encode(&[4, 4], &[-1, 5]), 13);
    }
}
