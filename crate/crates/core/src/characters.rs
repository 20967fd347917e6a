//! Characters of finite abelian normal subgroups, stored as exact phases.
//!
//! A character `ξ` on `N` is kept as integers `numer[s]` with
//! `ξ(s) = exp(2πi·numer[s]/|N|)`. Every character of a finite abelian group
//! takes values in the `|N|`-th roots of unity, so the common denominator
//! `|N|` is exact and conjugation never leaves the integers.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::semidirect::{is_theta_invariant, SemidirectGroup};
use crate::C64;

/// A homomorphism `N → 𝕋` on an abelian subgroup.
#[derive(Clone)]
pub struct Character {
    domain: Subgroup,
    numer: Arc<[u64]>,
    values: Arc<[C64]>,
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let phases: Vec<String> = self.phases().iter().map(|p| p.to_string()).collect();
        f.debug_struct("Character").field("phases", &phases).finish()
    }
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.numer == other.numer
    }
}

impl Eq for Character {}

/// `exp(2πi·a/b)`, with the quarter turns reproduced exactly.
pub fn root_of_unity(a: u64, b: u64) -> C64 {
    let a = a % b;
    if (4 * a) % b == 0 {
        return match 4 * a / b {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    C64::from_polar(1.0, TAU * a as f64 / b as f64)
}

impl Character {
    /// Builds a character from numerators over `|N|`, indexed like
    /// `domain.members()`, checking the homomorphism law.
    pub fn from_numerators(domain: Subgroup, numer: Vec<u64>) -> Result<Self> {
        let d = domain.len() as u64;
        if numer.len() != domain.len() {
            return Err(crate::error::invalid("one phase per subgroup element is required"));
        }
        let numer: Vec<u64> = numer.into_iter().map(|v| v % d).collect();
        let g = domain.parent();
        for (i, &s) in domain.members().iter().enumerate() {
            for (j, &t) in domain.members().iter().enumerate() {
                let st = domain.position(g.op(s, t)).expect("subgroup is closed");
                if numer[st] != (numer[i] + numer[j]) % d {
                    return Err(crate::error::invalid("phases are not additive"));
                }
            }
        }
        Ok(Self::from_parts(domain, numer))
    }

    fn from_parts(domain: Subgroup, numer: Vec<u64>) -> Self {
        let d = domain.len() as u64;
        let values = numer.iter().map(|&a| root_of_unity(a, d)).collect();
        Character {
            domain,
            numer: numer.into(),
            values,
        }
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    /// Common denominator `|N|` of all phases.
    pub fn denominator(&self) -> u64 {
        self.domain.len() as u64
    }

    /// Numerators over [`Self::denominator`], indexed like the domain members.
    pub fn numerators(&self) -> &[u64] {
        &self.numer
    }

    /// Reduced phase `q ∈ [0,1)` of `s ∈ N`.
    pub fn phase(&self, s: usize) -> Ratio<u64> {
        let p = self.domain.position(s).expect("element lies in the character's domain");
        Ratio::new(self.numer[p], self.denominator())
    }

    pub fn phases(&self) -> Vec<Ratio<u64>> {
        self.numer.iter().map(|&a| Ratio::new(a, self.denominator())).collect()
    }

    /// `ξ(s)` for `s ∈ N`.
    #[inline]
    pub fn value(&self, s: usize) -> C64 {
        self.values[self.domain.position(s).expect("element lies in the character's domain")]
    }

    /// Values indexed like the domain members.
    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.numer.iter().all(|&a| a == 0)
    }
}

/// All characters of an abelian subgroup, in a fixed enumeration order.
#[derive(Clone, Debug)]
pub struct CharacterSet {
    domain: Subgroup,
    chars: Vec<Character>,
}

impl CharacterSet {
    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn characters(&self) -> &[Character] {
        &self.chars
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn contains(&self, xi: &Character) -> bool {
        self.chars.contains(xi)
    }

    /// Equality as sets, ignoring enumeration order.
    pub fn same_set(&self, other: &CharacterSet) -> bool {
        if self.domain != other.domain || self.len() != other.len() {
            return false;
        }
        fn key(s: &CharacterSet) -> Vec<&[u64]> {
            let mut v: Vec<&[u64]> = s.chars.iter().map(|c| &c.numer[..]).collect();
            v.sort_unstable();
            v
        }
        key(self) == key(other)
    }

    fn filtered(&self, keep: impl Fn(&Character) -> bool) -> CharacterSet {
        CharacterSet {
            domain: self.domain.clone(),
            chars: self.chars.iter().filter(|c| keep(c)).cloned().collect(),
        }
    }
}

fn element_order(g: &FiniteGroup, x: usize) -> usize {
    let mut y = x;
    let mut k = 1;
    while y != g.identity() {
        y = g.op(y, x);
        k += 1;
    }
    k
}

/// Enumerates the dual of an abelian subgroup.
///
/// Characters are built by extension along a chain `{e} = S₀ < S₁ < … = N`:
/// each step adjoins the element of largest order outside `S`, finds the
/// least `m` with `g^m ∈ S`, and extends every character of `S` in the `m`
/// ways that take an `m`-th root of its value at `g^m`.
pub fn enumerate_characters(n: &Subgroup) -> Result<CharacterSet> {
    let g = n.parent();
    if !n.is_abelian() {
        return Err(Error::NonAbelianDomain(g.label().to_string()));
    }
    let size = n.len();
    let d = size as u64;
    let mut in_span = vec![false; size];
    in_span[n.position(g.identity()).expect("identity is a member")] = true;
    let mut span = vec![g.identity()];
    // Each partial character stores numerators at every domain position;
    // entries outside the current span are ignored.
    let mut partial: Vec<Vec<u64>> = vec![vec![0; size]];

    while span.len() < size {
        let gen = n
            .members()
            .iter()
            .copied()
            .filter(|&x| !in_span[n.position(x).unwrap()])
            .max_by_key(|&x| (element_order(g, x), std::cmp::Reverse(x)))
            .expect("span is a proper subgroup");
        let mut m = 1u64;
        let mut power = gen;
        while !in_span[n.position(power).unwrap()] {
            power = g.op(power, gen);
            m += 1;
        }
        let power_pos = n.position(power).unwrap();

        let mut layers = Vec::with_capacity(m as usize);
        let mut gj = g.identity();
        for _ in 0..m {
            layers.push(gj);
            gj = g.op(gj, gen);
        }
        let mut next_span = Vec::with_capacity(span.len() * m as usize);
        for &gj in &layers {
            for &s in &span {
                next_span.push(g.op(gj, s));
            }
        }

        let mut next = Vec::with_capacity(partial.len() * m as usize);
        for chi in &partial {
            for t in 0..m {
                let root = chi[power_pos] + t * d;
                assert_eq!(root % m, 0, "character extension must stay integral");
                let at_gen = root / m;
                let mut ext = chi.clone();
                for (j, &gj) in layers.iter().enumerate() {
                    for &s in &span {
                        let pos = n.position(g.op(gj, s)).unwrap();
                        ext[pos] = (j as u64 * at_gen + chi[n.position(s).unwrap()]) % d;
                    }
                }
                next.push(ext);
            }
        }
        partial = next;
        for &x in &next_span {
            in_span[n.position(x).unwrap()] = true;
        }
        span = next_span;
    }

    let chars = partial
        .into_iter()
        .map(|numer| Character::from_parts(n.clone(), numer))
        .collect();
    Ok(CharacterSet {
        domain: n.clone(),
        chars,
    })
}

fn conjugate_unchecked(xi: &Character, x: usize) -> Character {
    let n = xi.domain();
    let g = n.parent();
    let x_inv = g.inv(x);
    let numer = n
        .members()
        .iter()
        .map(|&s| xi.numer[n.position(g.conjugate(x_inv, s)).expect("domain is normal")])
        .collect();
    Character::from_parts(n.clone(), numer)
}

fn fixed_by(xi: &Character, x: usize) -> bool {
    let n = xi.domain();
    let g = n.parent();
    let x_inv = g.inv(x);
    n.members()
        .iter()
        .enumerate()
        .all(|(i, &s)| xi.numer[n.position(g.conjugate(x_inv, s)).unwrap()] == xi.numer[i])
}

/// `ξ_x(s) = ξ(x⁻¹sx)`.
pub fn conjugate_character(xi: &Character, x: usize) -> Result<Character> {
    let n = xi.domain();
    if x >= n.parent().order() {
        return Err(crate::error::invalid(format!("element {x} out of range")));
    }
    if !n.is_normal() {
        return Err(Error::NotNormal(n.parent().label().to_string()));
    }
    Ok(conjugate_unchecked(xi, x))
}

fn checked_dual(n: &Subgroup) -> Result<CharacterSet> {
    if !n.is_normal() {
        return Err(Error::NotNormal(n.parent().label().to_string()));
    }
    enumerate_characters(n)
}

/// `ξ_x = ξ` for every `x ∈ G`; the domain must be normal.
pub fn is_invariant(xi: &Character) -> bool {
    (0..xi.domain().parent().order()).all(|x| fixed_by(xi, x))
}

/// `Γ(G,N)`: characters fixed by conjugation with every element of `G`.
pub fn invariant_characters(n: &Subgroup) -> Result<CharacterSet> {
    let dual = checked_dual(n)?;
    let order = n.parent().order();
    Ok(dual.filtered(|xi| (0..order).all(|x| fixed_by(xi, x))))
}

/// `Γ(G,N)` tested only on a generating set of `G`; cross-checked against the
/// exhaustive version in the test suite.
pub fn invariant_characters_by_generators(n: &Subgroup) -> Result<CharacterSet> {
    let dual = checked_dual(n)?;
    let gens = n.parent().generators();
    Ok(dual.filter_generators(&gens))
}

impl CharacterSet {
    fn filter_generators(&self, gens: &[usize]) -> CharacterSet {
        self.filtered(|xi| gens.iter().all(|&x| fixed_by(xi, x)))
    }
}

/// `Γ(H ⋉_θ K, N)` for `N ≤ K` through `ξ(s) = ξ(θ_h(k⁻¹sk))` for all
/// `h ∈ H`, `k ∈ K`, `s ∈ N`. The result lives on the embedded copy of `N`
/// in the ambient group, so it compares directly with
/// [`invariant_characters`].
pub fn invariant_characters_semidirect(sd: &SemidirectGroup, n: &Subgroup) -> Result<CharacterSet> {
    let k = sd.k();
    let action = sd.action();
    if !Arc::ptr_eq(n.parent(), k) {
        return Err(Error::InvalidSubgroup("subgroup does not live in K".into()));
    }
    if !n.is_normal() {
        return Err(Error::NotNormal(k.label().to_string()));
    }
    if !is_theta_invariant(n, action) {
        return Err(crate::error::invalid("subgroup is not theta-invariant"));
    }
    let embedded = sd.embed(n)?;
    let dual = enumerate_characters(&embedded)?;
    let nh = sd.h().order();
    let nk = k.order();
    Ok(dual.filtered(|xi| {
        (0..nh).all(|h| {
            (0..nk).all(|kk| {
                n.members().iter().enumerate().all(|(i, &s)| {
                    let moved = action.apply(h, k.conjugate(k.inv(kk), s));
                    xi.numer[embedded.position(sd.encode(0, moved)).unwrap()] == xi.numer[i]
                })
            })
        })
    }))
}

/// The `N = K` special case `ξ ∘ θ_h = ξ`.
pub fn invariant_characters_semidirect_k(sd: &SemidirectGroup) -> Result<CharacterSet> {
    let embedded = sd.k_subgroup();
    let dual = enumerate_characters(&embedded)?;
    let action = sd.action();
    let nk = sd.k().order();
    Ok(dual.filtered(|xi| {
        (0..sd.h().order()).all(|h| (0..nk).all(|s| xi.numer[action.apply(h, s)] == xi.numer[s]))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semidirect::{heisenberg_element, make_finite_heisenberg};

    fn orthogonality_residual(set: &CharacterSet) -> f64 {
        let n = set.domain().len() as f64;
        let mut worst: f64 = 0.0;
        for (i, a) in set.characters().iter().enumerate() {
            for (j, b) in set.characters().iter().enumerate() {
                let s: C64 = a.values().iter().zip(b.values()).map(|(x, y)| x * y.conj()).sum();
                let want = if i == j { n } else { 0.0 };
                worst = worst.max((s - want).norm());
            }
        }
        worst
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(root_of_unity(1, 4), C64::new(0.0, 1.0));
        assert_eq!(root_of_unity(6, 4), C64::new(-1.0, 0.0));
        assert!((root_of_unity(1, 3) - C64::from_polar(1.0, TAU / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn cyclic_dual() {
        let z4 = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let set = enumerate_characters(&Subgroup::whole(Arc::clone(&z4))).unwrap();
        assert_eq!(set.len(), 4);
        for (n, chi) in set.characters().iter().enumerate() {
            for m in 0..4 {
                assert_eq!(chi.phase(m), Ratio::new((n * m % 4) as u64, 4));
            }
        }
        let trivial = enumerate_characters(&Subgroup::trivial(z4)).unwrap();
        assert_eq!(trivial.len(), 1);
        assert!(trivial.characters()[0].is_trivial());
    }

    #[test]
    fn klein_and_mixed_duals_are_orthogonal() {
        for orders in [vec![2, 2], vec![2, 4], vec![3, 3], vec![2, 2, 2], vec![4, 6]] {
            let g = Arc::new(FiniteGroup::abelian(&orders).unwrap());
            let set = enumerate_characters(&Subgroup::whole(g)).unwrap();
            assert_eq!(set.len(), orders.iter().product::<usize>());
            assert!(orthogonality_residual(&set) < 1e-12, "{orders:?}");
        }
    }

    #[test]
    fn non_abelian_domain_is_rejected() {
        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        assert!(matches!(
            enumerate_characters(&Subgroup::whole(s3)),
            Err(Error::NonAbelianDomain(_))
        ));
    }

    #[test]
    fn from_numerators_checks_additivity() {
        let z4 = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let whole = Subgroup::whole(z4);
        assert!(Character::from_numerators(whole.clone(), vec![0, 1, 2, 3]).is_ok());
        assert!(Character::from_numerators(whole, vec![0, 1, 1, 3]).is_err());
    }

    #[test]
    fn conjugation_on_heisenberg_k() {
        let m = 4;
        let sd = make_finite_heisenberg(m).unwrap();
        let n = sd.k_subgroup();
        let dual = enumerate_characters(&n).unwrap();
        let chi = |y: usize, nn: usize| {
            dual.characters()
                .iter()
                .find(|c| {
                    c.phase(heisenberg_element(m, 0, 1, 0)) == Ratio::new(y as u64, m as u64)
                        && c.phase(heisenberg_element(m, 0, 0, 1)) == Ratio::new(nn as u64, m as u64)
                })
                .unwrap()
                .clone()
        };
        for y in 0..m {
            for nn in 0..m {
                let xi = chi(y, nn);
                for s in n.members() {
                    assert_eq!(conjugate_character(&xi, *s).unwrap(), xi);
                }
                for h in 0..m {
                    let x = heisenberg_element(m, h, 0, 0);
                    let got = conjugate_character(&xi, x).unwrap();
                    // Conjugating by x⁻¹ applies θ_{-h}, shifting y by -n·h.
                    let want = chi((y + m * m - nn * h % m) % m, nn);
                    assert_eq!(got, want, "y={y} n={nn} h={h}");
                }
            }
        }
    }

    #[test]
    fn heisenberg_gamma_sets() {
        let m = 4;
        let sd = make_finite_heisenberg(m).unwrap();
        let center = Subgroup::center(Arc::clone(sd.group()));
        assert_eq!(invariant_characters(&center).unwrap().len(), m);
        let full = invariant_characters(&sd.k_subgroup()).unwrap();
        assert_eq!(full.len(), m);
        for xi in full.characters() {
            assert_eq!(xi.phase(heisenberg_element(m, 0, 0, 1)), Ratio::new(0, 1));
        }
        let via_criterion = invariant_characters_semidirect(&sd, &Subgroup::whole(Arc::clone(sd.k()))).unwrap();
        assert!(full.same_set(&via_criterion));
        assert!(full.same_set(&invariant_characters_semidirect_k(&sd).unwrap()));
        assert!(full.same_set(&invariant_characters_by_generators(&sd.k_subgroup()).unwrap()));
    }

    #[test]
    fn non_normal_domain_is_rejected() {
        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let t = Subgroup::new(Arc::clone(&s3), [0, 1]).unwrap();
        assert!(matches!(invariant_characters(&t), Err(Error::NotNormal(_))));
        let xi = enumerate_characters(&t).unwrap().characters()[1].clone();
        assert!(matches!(conjugate_character(&xi, 2), Err(Error::NotNormal(_))));
    }
}
