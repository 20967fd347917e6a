//! Finite groups given by explicit composition tables.
//!
//! Elements are dense indices `0..order`. Every group constructed here keeps
//! its identity at index 0, which makes the minimal-index coset transversal
//! start with the identity. Haar measure is the counting measure on the group,
//! on every subgroup and on every quotient; with that normalization Weil's
//! integration formula holds exactly.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::C64;

/// Groups up to this order get an exhaustive associativity check.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 512;
/// Number of random triples checked above [`EXHAUSTIVE_ASSOCIATIVITY_LIMIT`].
pub const SAMPLED_ASSOCIATIVITY_TRIPLES: usize = 100_000;

const NOT_MEMBER: u32 = u32::MAX;

/// A finite group stored as a total composition table.
#[derive(Clone)]
pub struct FiniteGroup {
    label: String,
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    identity: usize,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("label", &self.label)
            .field("order", &self.order)
            .finish()
    }
}

impl FiniteGroup {
    /// Builds a group from a row-major table `table[a * order + b] = a·b`,
    /// validating every group axiom.
    pub fn from_table(label: impl Into<String>, order: usize, table: Vec<usize>) -> Result<Self> {
        if order == 0 {
            return Err(invalid("group order must be positive"));
        }
        if order > u32::MAX as usize / 2 {
            return Err(invalid("group order too large for table encoding"));
        }
        if table.len() != order * order {
            return Err(invalid(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= order) {
            return Err(invalid(format!("table entry {bad} out of range")));
        }
        let table: Vec<u32> = table.into_iter().map(|v| v as u32).collect();

        // Latin square: every row and column is a permutation.
        let mut seen = vec![false; order];
        for a in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..order {
                let v = table[a * order + b] as usize;
                if seen[v] {
                    return Err(invalid(format!("row {a} is not a permutation")));
                }
                seen[v] = true;
            }
        }
        for b in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for a in 0..order {
                let v = table[a * order + b] as usize;
                if seen[v] {
                    return Err(invalid(format!("column {b} is not a permutation")));
                }
                seen[v] = true;
            }
        }

        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e * order + x] as usize == x && table[x * order + e] as usize == x))
            .ok_or_else(|| invalid("table has no two-sided identity"))?;

        let mut inverse = vec![0u32; order];
        for x in 0..order {
            let y = (0..order)
                .find(|&y| table[x * order + y] as usize == identity)
                .expect("latin rows contain the identity");
            if table[y * order + x] as usize != identity {
                return Err(invalid(format!("element {x} has no two-sided inverse")));
            }
            inverse[x] = y as u32;
        }

        let group = FiniteGroup {
            label: label.into(),
            order,
            table,
            inverse,
            identity,
        };
        group.check_associativity()?;
        Ok(group)
    }

    fn check_associativity(&self) -> Result<()> {
        let n = self.order;
        let bad = |(a, b, c): (usize, usize, usize)| self.op(self.op(a, b), c) != self.op(a, self.op(b, c));
        if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
            let failure = (0..n).into_par_iter().find_any(|&a| {
                (0..n).any(|b| {
                    let ab = self.op(a, b);
                    (0..n).any(|c| self.op(ab, c) != self.op(a, self.op(b, c)))
                })
            });
            if let Some(a) = failure {
                return Err(invalid(format!("table is not associative (left factor {a})")));
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a550c);
            for _ in 0..SAMPLED_ASSOCIATIVITY_TRIPLES {
                let t = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if bad(t) {
                    return Err(invalid(format!("table is not associative at {t:?}")));
                }
            }
        }
        Ok(())
    }

    /// The cyclic group ℤ_M under addition mod M.
    pub fn cyclic(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(invalid("cyclic order must be at least 1"));
        }
        let table = (0..m * m).map(|i| (i / m + i % m) % m).collect();
        Self::from_table(format!("Z{m}"), m, table)
    }

    /// Direct product `A × B`; the pair `(a, b)` is encoded as `a·|B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut table = vec![0u32; n * n];
        for x in 0..n {
            let (xa, xb) = (x / nb, x % nb);
            for y in 0..n {
                let (ya, yb) = (y / nb, y % nb);
                table[x * n + y] = (a.op(xa, ya) * nb + b.op(xb, yb)) as u32;
            }
        }
        let inverse = (0..n)
            .map(|x| (a.inv(x / nb) * nb + b.inv(x % nb)) as u32)
            .collect();
        FiniteGroup {
            label: format!("{}x{}", a.label, b.label),
            order: n,
            table,
            inverse,
            identity: a.identity * nb + b.identity,
        }
    }

    /// `ℤ_{n₀} × ℤ_{n₁} × …` in mixed-radix encoding (last coordinate
    /// fastest). The empty list gives the trivial group.
    pub fn abelian(orders: &[usize]) -> Result<Self> {
        let mut g = Self::cyclic(1)?;
        for (i, &n) in orders.iter().enumerate() {
            let c = Self::cyclic(n)?;
            g = if i == 0 { c } else { Self::direct_product(&g, &c) };
        }
        Ok(g)
    }

    /// Symmetric group on `n ≤ 5` letters; permutations in lexicographic
    /// order, composed as `(σ·τ)(i) = σ(τ(i))`.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > 5 {
            return Err(invalid("symmetric group fixture supports 1..=5 letters"));
        }
        let perms = permutations(n);
        let index = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).expect("closed");
        let order = perms.len();
        let mut table = Vec::with_capacity(order * order);
        for s in &perms {
            for t in &perms {
                let st: Vec<usize> = (0..n).map(|i| s[t[i]]).collect();
                table.push(index(&st));
            }
        }
        Self::from_table(format!("S{n}"), order, table)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// Modular function; identically 1 on a finite group.
    pub fn modular(&self, _x: usize) -> f64 {
        1.0
    }

    /// `x·s·x⁻¹`.
    #[inline]
    pub fn conjugate(&self, x: usize, s: usize) -> usize {
        self.op(self.op(x, s), self.inv(x))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.op(a, b) == self.op(b, a)))
    }

    /// Sorted list of central elements.
    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|x| self.op(x, z) == self.op(z, x)))
            .collect()
    }

    /// A generating set found greedily: add the smallest element outside the
    /// subgroup generated so far.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.order];
        span[self.identity] = true;
        let mut size = 1;
        while size < self.order {
            let g = (0..self.order).find(|&x| !span[x]).expect("span is proper");
            gens.push(g);
            let members = closure(self, &gens);
            span.iter_mut().for_each(|s| *s = false);
            for &m in &members {
                span[m] = true;
            }
            size = members.len();
        }
        gens
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Sorted closure of `gens` under the group law.
fn closure(group: &FiniteGroup, gens: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; group.order()];
    let mut queue = VecDeque::from([group.identity()]);
    inside[group.identity()] = true;
    while let Some(x) = queue.pop_front() {
        for &g in gens {
            let y = group.op(x, g);
            if !inside[y] {
                inside[y] = true;
                queue.push_back(y);
            }
        }
    }
    (0..group.order()).filter(|&x| inside[x]).collect()
}

/// A subgroup of a finite group, kept as a sorted member list.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Arc<[usize]>,
    position: Arc<[u32]>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup")
            .field("parent", &self.parent.label())
            .field("members", &self.members)
            .finish()
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) && self.members == other.members
    }
}

impl Subgroup {
    /// Validates that `members` is a subgroup of `parent`.
    pub fn new(parent: Arc<FiniteGroup>, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&x) = members.iter().find(|&&x| x >= parent.order()) {
            return Err(Error::InvalidSubgroup(format!("element {x} out of range")));
        }
        let sub = Self::from_sorted(parent, members);
        if !sub.contains(sub.parent.identity()) {
            return Err(Error::InvalidSubgroup("identity missing".into()));
        }
        for &a in sub.members.iter() {
            if !sub.contains(sub.parent.inv(a)) {
                return Err(Error::InvalidSubgroup(format!("not closed under inverse at {a}")));
            }
            if let Some(&b) = sub.members.iter().find(|&&b| !sub.contains(sub.parent.op(a, b))) {
                return Err(Error::InvalidSubgroup(format!("not closed under product at ({a}, {b})")));
            }
        }
        Ok(sub)
    }

    fn from_sorted(parent: Arc<FiniteGroup>, members: Vec<usize>) -> Self {
        let mut position = vec![NOT_MEMBER; parent.order()];
        for (i, &m) in members.iter().enumerate() {
            position[m] = i as u32;
        }
        Subgroup {
            parent,
            members: members.into(),
            position: position.into(),
        }
    }

    /// Subgroup generated by `gens`.
    pub fn generated(parent: Arc<FiniteGroup>, gens: &[usize]) -> Result<Self> {
        if let Some(&g) = gens.iter().find(|&&g| g >= parent.order()) {
            return Err(Error::InvalidSubgroup(format!("generator {g} out of range")));
        }
        let members = closure(&parent, gens);
        Ok(Self::from_sorted(parent, members))
    }

    pub fn trivial(parent: Arc<FiniteGroup>) -> Self {
        let e = parent.identity();
        Self::from_sorted(parent, vec![e])
    }

    pub fn whole(parent: Arc<FiniteGroup>) -> Self {
        let all = (0..parent.order()).collect();
        Self::from_sorted(parent, all)
    }

    pub fn center(parent: Arc<FiniteGroup>) -> Self {
        let z = parent.center();
        Self::from_sorted(parent, z)
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.position.get(x).is_some_and(|&p| p != NOT_MEMBER)
    }

    /// Index of `x` inside the sorted member list.
    #[inline]
    pub fn position(&self, x: usize) -> Option<usize> {
        match self.position.get(x) {
            Some(&p) if p != NOT_MEMBER => Some(p as usize),
            _ => None,
        }
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.parent;
        self.members
            .iter()
            .all(|&a| self.members.iter().all(|&b| g.op(a, b) == g.op(b, a)))
    }

    /// `x·s·x⁻¹ ∈ S` for all `x ∈ G`, `s ∈ S`.
    pub fn is_normal(&self) -> bool {
        let g = &self.parent;
        (0..g.order()).all(|x| self.members.iter().all(|&s| self.contains(g.conjugate(x, s))))
    }

    pub fn is_central(&self) -> bool {
        let g = &self.parent;
        (0..g.order()).all(|x| self.members.iter().all(|&s| g.op(x, s) == g.op(s, x)))
    }
}

/// Normality test on a raw member list; fails if the list is not a subgroup.
pub fn is_normal(group: &Arc<FiniteGroup>, members: &[usize]) -> Result<bool> {
    Ok(Subgroup::new(Arc::clone(group), members.iter().copied())?.is_normal())
}

/// The quotient `G/N` with a deterministic transversal.
///
/// Coset 0 is `N` itself with representative the identity; every other
/// representative is the minimal element index in its coset.
#[derive(Clone, Debug)]
pub struct Quotient {
    normal: Subgroup,
    transversal: Vec<usize>,
    coset_of: Vec<u32>,
}

impl Quotient {
    pub fn new(normal: &Subgroup) -> Result<Self> {
        let g = normal.parent();
        if !normal.is_normal() {
            return Err(Error::NotNormal(g.label().to_string()));
        }
        let n = g.order();
        let mut coset_of = vec![NOT_MEMBER; n];
        let mut transversal = Vec::with_capacity(n / normal.len());
        let starts = std::iter::once(g.identity()).chain(0..n);
        for x in starts {
            if coset_of[x] != NOT_MEMBER {
                continue;
            }
            let c = transversal.len() as u32;
            transversal.push(x);
            for &s in normal.members() {
                coset_of[g.op(x, s)] = c;
            }
        }
        Ok(Quotient {
            normal: normal.clone(),
            transversal,
            coset_of,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.normal.parent()
    }

    pub fn normal(&self) -> &Subgroup {
        &self.normal
    }

    pub fn coset_count(&self) -> usize {
        self.transversal.len()
    }

    pub fn transversal(&self) -> &[usize] {
        &self.transversal
    }

    #[inline]
    pub fn representative(&self, coset: usize) -> usize {
        self.transversal[coset]
    }

    #[inline]
    pub fn coset_of(&self, x: usize) -> usize {
        self.coset_of[x] as usize
    }

    /// Splits `x = r·s` with `r` the transversal representative and `s ∈ N`;
    /// returns `(coset, s)`.
    #[inline]
    pub fn decompose(&self, x: usize) -> (usize, usize) {
        let g = self.group();
        let c = self.coset_of(x);
        (c, g.op(g.inv(self.transversal[c]), x))
    }

    /// Quotient group law on coset indices.
    pub fn coset_op(&self, a: usize, b: usize) -> usize {
        let g = self.group();
        self.coset_of(g.op(self.transversal[a], self.transversal[b]))
    }

    pub fn coset_inv(&self, a: usize) -> usize {
        self.coset_of(self.group().inv(self.transversal[a]))
    }
}

fn check_len(group: &FiniteGroup, f: &[C64], what: &str) -> Result<()> {
    if f.len() != group.order() {
        return Err(invalid(format!(
            "{what} has length {}, group order is {}",
            f.len(),
            group.order()
        )));
    }
    Ok(())
}

/// `(f∗g)(x) = Σ_y f(y)·g(y⁻¹x)` with counting Haar weight.
pub fn group_convolve(group: &FiniteGroup, f: &[C64], g: &[C64]) -> Result<Vec<C64>> {
    check_len(group, f, "left factor")?;
    check_len(group, g, "right factor")?;
    let support: Vec<(usize, C64)> = f
        .iter()
        .enumerate()
        .filter(|(_, v)| **v != C64::new(0.0, 0.0))
        .map(|(y, &v)| (group.inv(y), v))
        .collect();
    Ok((0..group.order())
        .into_par_iter()
        .map(|x| support.iter().map(|&(y_inv, fy)| fy * g[group.op(y_inv, x)]).sum())
        .collect())
}

/// `f*(x) = Δ(x⁻¹)·conj(f(x⁻¹))`, with `Δ ≡ 1`.
pub fn group_involve(group: &FiniteGroup, f: &[C64]) -> Result<Vec<C64>> {
    check_len(group, f, "function")?;
    Ok((0..group.order())
        .map(|x| group.modular(group.inv(x)) * f[group.inv(x)].conj())
        .collect())
}

/// Left translation `(L_k f)(x) = f(k⁻¹x)`.
pub fn left_translate(group: &FiniteGroup, k: usize, f: &[C64]) -> Result<Vec<C64>> {
    check_len(group, f, "function")?;
    if k >= group.order() {
        return Err(invalid(format!("element {k} out of range")));
    }
    let k_inv = group.inv(k);
    Ok((0..group.order()).map(|x| f[group.op(k_inv, x)]).collect())
}

/// The coset sum `T_N(f)(xN) = Σ_{s∈N} f(x·s)`, indexed by coset.
pub fn periodize(quotient: &Quotient, f: &[C64]) -> Result<Vec<C64>> {
    let g = quotient.group();
    check_len(g, f, "function")?;
    let by_rep: Vec<C64> = quotient
        .transversal()
        .iter()
        .map(|&r| quotient.normal().members().iter().map(|&s| f[g.op(r, s)]).sum())
        .collect();
    if cfg!(debug_assertions) {
        // Summing over coset membership must agree with the representative form.
        let mut by_coset = vec![C64::new(0.0, 0.0); quotient.coset_count()];
        for (x, v) in f.iter().enumerate() {
            by_coset[quotient.coset_of(x)] += v;
        }
        let scale = 1.0 + l1_norm(f);
        for (a, b) in by_rep.iter().zip(&by_coset) {
            debug_assert!((a - b).norm() <= 1e-12 * scale, "coset sum depends on representative");
        }
    }
    Ok(by_rep)
}

/// `|Σ_c T_N(f)(c) − Σ_x f(x)|` under counting measures on `G`, `N`, `G/N`.
pub fn weil_residual(quotient: &Quotient, f: &[C64]) -> Result<f64> {
    let lhs: C64 = periodize(quotient, f)?.iter().sum();
    let rhs: C64 = f.iter().sum();
    Ok((lhs - rhs).norm())
}

pub fn l1_norm(f: &[C64]) -> f64 {
    f.iter().map(|v| v.norm()).sum()
}

pub fn lp_norm(f: &[C64], p: f64) -> f64 {
    f.iter().map(|v| v.norm().powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Sup-norm distance between two equally long arrays.
pub fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
