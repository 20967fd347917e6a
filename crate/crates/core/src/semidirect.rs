//! Semi-direct products `H ⋉_θ K` of finite groups.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::group::{FiniteGroup, Subgroup};

/// A homomorphism `θ: H → Aut(K)` stored as one permutation of `K` per `h`.
#[derive(Clone, Debug)]
pub struct Action {
    h: Arc<FiniteGroup>,
    k: Arc<FiniteGroup>,
    table: Vec<u32>,
}

impl Action {
    /// Validates that `perms[h]` defines a homomorphism into `Aut(K)`.
    pub fn new(h: Arc<FiniteGroup>, k: Arc<FiniteGroup>, perms: Vec<Vec<usize>>) -> Result<Self> {
        let (nh, nk) = (h.order(), k.order());
        if perms.len() != nh {
            return Err(Error::InvalidAction(format!(
                "{} permutations given for a group of order {nh}",
                perms.len()
            )));
        }
        let mut table = Vec::with_capacity(nh * nk);
        for (hi, p) in perms.iter().enumerate() {
            if p.len() != nk {
                return Err(Error::InvalidAction(format!("theta_{hi} has wrong length")));
            }
            let mut seen = vec![false; nk];
            for &v in p {
                if v >= nk || std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidAction(format!("theta_{hi} is not a permutation")));
                }
                table.push(v as u32);
            }
        }
        let action = Action { h, k, table };
        action.validate()?;
        Ok(action)
    }

    fn validate(&self) -> Result<()> {
        let (h, k) = (&self.h, &self.k);
        if (0..k.order()).any(|x| self.apply(h.identity(), x) != x) {
            return Err(Error::InvalidAction("theta of the identity is not the identity".into()));
        }
        for a in 0..h.order() {
            for x in 0..k.order() {
                let ax = self.apply(a, x);
                if let Some(y) = (0..k.order()).find(|&y| self.apply(a, k.op(x, y)) != k.op(ax, self.apply(a, y))) {
                    return Err(Error::InvalidAction(format!(
                        "theta_{a} is not multiplicative at ({x}, {y})"
                    )));
                }
            }
            for b in 0..h.order() {
                let ab = h.op(a, b);
                if (0..k.order()).any(|x| self.apply(ab, x) != self.apply(a, self.apply(b, x))) {
                    return Err(Error::InvalidAction(format!(
                        "theta is not a homomorphism at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Extends automorphisms given on generators of `H` to all of `H`.
    pub fn from_generators(h: Arc<FiniteGroup>, k: Arc<FiniteGroup>, gens: &[(usize, Vec<usize>)]) -> Result<Self> {
        let nk = k.order();
        for (g, p) in gens {
            if *g >= h.order() || p.len() != nk || p.iter().any(|&v| v >= nk) {
                return Err(Error::InvalidAction(format!("generator image for h={g} is malformed")));
            }
        }
        let mut perms: Vec<Option<Vec<usize>>> = vec![None; h.order()];
        perms[h.identity()] = Some((0..nk).collect());
        let mut queue = VecDeque::from([h.identity()]);
        while let Some(a) = queue.pop_front() {
            let pa = perms[a].clone().expect("queued elements are known");
            for (g, pg) in gens {
                let b = h.op(a, *g);
                let pb: Vec<usize> = (0..nk).map(|x| pa[pg[x]]).collect();
                match &perms[b] {
                    Some(existing) if *existing != pb => {
                        return Err(Error::InvalidAction(format!(
                            "generator images are inconsistent at h={b}"
                        )));
                    }
                    Some(_) => {}
                    None => {
                        perms[b] = Some(pb);
                        queue.push_back(b);
                    }
                }
            }
        }
        let perms = perms
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidAction("listed elements do not generate H".into()))?;
        Self::new(h, k, perms)
    }

    pub fn trivial(h: Arc<FiniteGroup>, k: Arc<FiniteGroup>) -> Self {
        let table = (0..h.order()).flat_map(|_| 0..k.order() as u32).collect();
        Action { h, k, table }
    }

    #[inline]
    pub fn apply(&self, h: usize, k: usize) -> usize {
        self.table[h * self.k.order() + k] as usize
    }

    pub fn h(&self) -> &Arc<FiniteGroup> {
        &self.h
    }

    pub fn k(&self) -> &Arc<FiniteGroup> {
        &self.k
    }
}

/// `H ⋉_θ K` with `(h, k)` encoded as `h·|K| + k`.
#[derive(Clone, Debug)]
pub struct SemidirectGroup {
    group: Arc<FiniteGroup>,
    action: Action,
}

/// Builds `H ⋉_θ K` with law `(h,k)(h',k') = (hh', k·θ_h(k'))`.
pub fn semidirect(action: Action) -> Result<SemidirectGroup> {
    let (h, k) = (action.h(), action.k());
    let (nh, nk) = (h.order(), k.order());
    let n = nh * nk;
    if h.identity() != 0 || k.identity() != 0 {
        return Err(invalid("factor groups must keep their identity at index 0"));
    }
    let mut table = Vec::with_capacity(n * n);
    for x in 0..n {
        let (xh, xk) = (x / nk, x % nk);
        for y in 0..n {
            let (yh, yk) = (y / nk, y % nk);
            table.push(h.op(xh, yh) * nk + k.op(xk, action.apply(xh, yk)));
        }
    }
    let label = format!("({})x|({})", h.label(), k.label());
    let group = FiniteGroup::from_table(label, n, table)?;
    Ok(SemidirectGroup {
        group: Arc::new(group),
        action,
    })
}

impl SemidirectGroup {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    pub fn h(&self) -> &Arc<FiniteGroup> {
        self.action.h()
    }

    pub fn k(&self) -> &Arc<FiniteGroup> {
        self.action.k()
    }

    #[inline]
    pub fn encode(&self, h: usize, k: usize) -> usize {
        h * self.k().order() + k
    }

    #[inline]
    pub fn decode(&self, x: usize) -> (usize, usize) {
        let nk = self.k().order();
        (x / nk, x % nk)
    }

    /// The normal subgroup `{e_H} × K`.
    pub fn k_subgroup(&self) -> Subgroup {
        let nk = self.k().order();
        Subgroup::new(Arc::clone(&self.group), (0..nk).map(|k| self.encode(0, k)))
            .expect("K embeds as a subgroup")
    }

    /// Image of a subgroup of `K` under `k ↦ (e_H, k)`.
    pub fn embed(&self, n: &Subgroup) -> Result<Subgroup> {
        if !Arc::ptr_eq(n.parent(), self.k()) {
            return Err(Error::InvalidSubgroup("subgroup does not live in K".into()));
        }
        Subgroup::new(Arc::clone(&self.group), n.members().iter().map(|&k| self.encode(0, k)))
    }
}

/// `θ_h(N) = N` for every `h`.
pub fn is_theta_invariant(n: &Subgroup, action: &Action) -> bool {
    (0..action.h().order()).all(|h| n.members().iter().all(|&s| n.contains(action.apply(h, s))))
}

/// Ratio of counting measures `|θ_h(N)| / |N|`; equal to 1 for every finite
/// θ-invariant `N`, which is asserted.
pub fn delta_hn(action: &Action, n: &Subgroup, h: usize) -> Result<f64> {
    if h >= action.h().order() {
        return Err(invalid(format!("element {h} out of range")));
    }
    if !is_theta_invariant(n, action) {
        return Err(invalid("subgroup is not theta-invariant"));
    }
    let mut image: Vec<usize> = n.members().iter().map(|&s| action.apply(h, s)).collect();
    image.sort_unstable();
    image.dedup();
    let ratio = image.len() as f64 / n.len() as f64;
    assert_eq!(ratio, 1.0, "theta_h restricted to N must be a bijection");
    Ok(ratio)
}

/// Counting-measure distortion of `s ↦ x⁻¹sx` on `N`; asserted equal to 1.
pub fn sigma_n(n: &Subgroup, x: usize) -> Result<f64> {
    let g = n.parent();
    if x >= g.order() {
        return Err(invalid(format!("element {x} out of range")));
    }
    if !n.is_normal() {
        return Err(Error::NotNormal(g.label().to_string()));
    }
    let x_inv = g.inv(x);
    let mut image: Vec<usize> = n.members().iter().map(|&s| g.conjugate(x_inv, s)).collect();
    image.sort_unstable();
    image.dedup();
    let ratio = image.len() as f64 / n.len() as f64;
    assert_eq!(ratio, 1.0, "conjugation must permute N");
    Ok(ratio)
}

/// Finite Heisenberg group `ℤ_M ⋉ (ℤ_M × ℤ_M)` with `θ_x(ω, z) = (ω, z + xω)`.
///
/// Elements are `h·M² + ω·M + z`.
pub fn make_finite_heisenberg(m: usize) -> Result<SemidirectGroup> {
    if m < 2 {
        return Err(invalid("finite Heisenberg group needs M >= 2"));
    }
    let h = Arc::new(FiniteGroup::cyclic(m)?);
    let k = Arc::new(FiniteGroup::abelian(&[m, m])?);
    let perms = (0..m)
        .map(|x| {
            (0..m * m)
                .map(|wz| {
                    let (w, z) = (wz / m, wz % m);
                    w * m + (z + x * w) % m
                })
                .collect()
        })
        .collect();
    let action = Action::new(h, k, perms)?;
    let mut sd = semidirect(action)?;
    let g = (*sd.group).clone().with_label(format!("H(Z{m})"));
    sd.group = Arc::new(g);
    Ok(sd)
}

/// Index of `(h, (ω, z))` in [`make_finite_heisenberg`]`(m)`.
pub fn heisenberg_element(m: usize, h: usize, omega: usize, z: usize) -> usize {
    (h % m) * m * m + (omega % m) * m + z % m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_action_gives_direct_product() {
        let h = Arc::new(FiniteGroup::cyclic(3).unwrap());
        let k = Arc::new(FiniteGroup::abelian(&[2, 2]).unwrap());
        let sd = semidirect(Action::trivial(Arc::clone(&h), Arc::clone(&k))).unwrap();
        let dp = FiniteGroup::direct_product(&h, &k);
        let n = dp.order();
        assert!((0..n).all(|a| (0..n).all(|b| sd.group().op(a, b) == dp.op(a, b))));
    }

    #[test]
    fn heisenberg_structure() {
        assert!(make_finite_heisenberg(1).is_err());
        let h2 = make_finite_heisenberg(2).unwrap();
        assert_eq!(h2.group().order(), 8);
        assert!(!h2.group().is_abelian());

        let m = 4;
        let h4 = make_finite_heisenberg(m).unwrap();
        let g = h4.group();
        assert_eq!(g.order(), 64);
        let center = g.center();
        let expected: Vec<usize> = (0..m).map(|z| heisenberg_element(m, 0, 0, z)).collect();
        assert_eq!(center, expected);

        let a = heisenberg_element(m, 1, 0, 0);
        let b = heisenberg_element(m, 0, 1, 0);
        let comm = g.op(g.op(a, b), g.op(g.inv(a), g.inv(b)));
        let (hh, k) = h4.decode(comm);
        assert_eq!(hh, 0);
        assert_eq!(k / m, 0);
        assert_ne!(k % m, 0);
    }

    #[test]
    fn group_law_and_inverse_match_pairs() {
        let m = 4;
        let sd = make_finite_heisenberg(m).unwrap();
        let (g, act, k) = (sd.group(), sd.action(), sd.k());
        for x in 0..g.order() {
            let (xh, xk) = sd.decode(x);
            let inv = sd.encode((m - xh) % m, act.apply((m - xh) % m, k.inv(xk)));
            assert_eq!(g.inv(x), inv);
            for y in 0..g.order() {
                let (yh, yk) = sd.decode(y);
                assert_eq!(g.op(x, y), sd.encode((xh + yh) % m, k.op(xk, act.apply(xh, yk))));
            }
        }
    }

    #[test]
    fn invalid_actions_are_rejected() {
        let h = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let k = Arc::new(FiniteGroup::cyclic(3).unwrap());
        // Swapping 0 and 1 in Z3 is not an automorphism.
        let bad = vec![vec![0, 1, 2], vec![1, 0, 2]];
        assert!(matches!(
            Action::new(Arc::clone(&h), Arc::clone(&k), bad),
            Err(Error::InvalidAction(_))
        ));
        // Inversion on Z3 is an automorphism of order 2.
        let ok = Action::from_generators(Arc::clone(&h), Arc::clone(&k), &[(1, vec![0, 2, 1])]).unwrap();
        let s3 = semidirect(ok).unwrap();
        assert!(!s3.group().is_abelian());
        // Multiplication by 2 on Z5 has order 4, not compatible with Z2.
        let k5 = Arc::new(FiniteGroup::cyclic(5).unwrap());
        assert!(Action::from_generators(h, k5, &[(1, vec![0, 2, 4, 1, 3])]).is_err());
    }

    #[test]
    fn invariance_and_measure_ratios() {
        let m = 4;
        let sd = make_finite_heisenberg(m).unwrap();
        let k = Arc::clone(sd.k());
        let act = sd.action();
        let whole = Subgroup::whole(Arc::clone(&k));
        let trivial = Subgroup::trivial(Arc::clone(&k));
        let z_axis = Subgroup::new(Arc::clone(&k), 0..m).unwrap();
        let w_axis = Subgroup::new(Arc::clone(&k), (0..m).map(|w| w * m)).unwrap();
        assert!(is_theta_invariant(&whole, act));
        assert!(is_theta_invariant(&trivial, act));
        assert!(is_theta_invariant(&z_axis, act));
        assert!(!is_theta_invariant(&w_axis, act));
        assert!(delta_hn(act, &w_axis, 1).is_err());
        for h in 0..m {
            assert_eq!(delta_hn(act, &whole, h).unwrap(), 1.0);
            assert_eq!(delta_hn(act, &z_axis, h).unwrap(), 1.0);
        }
        let n = sd.k_subgroup();
        assert!(n.is_normal());
        let center = Subgroup::center(Arc::clone(sd.group()));
        for x in 0..sd.group().order() {
            assert_eq!(sigma_n(&n, x).unwrap(), 1.0);
            assert_eq!(sigma_n(&center, x).unwrap(), 1.0);
        }
        assert_eq!(sd.embed(&z_axis).unwrap(), center);
    }
}
