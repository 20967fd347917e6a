//! Closed forms for the Weyl–Heisenberg group `𝕎(ℤ_M) = ℤ_M ⋉ (ℤ̂_M × 𝕋)`.
//!
//! Elements are `(x, ω_ℓ, z)` with `ω_ℓ(m) = exp(2πi·mℓ/M)`, and the law is
//! `(x,ω,z)(x',ω',z') = (x+x', ωω', ω'(x)·z·z')`. Haar measure is counting
//! measure on `ℤ_M × ℤ̂_M` times the normalized arc measure on `𝕋`.
//!
//! For `N = 𝕋` the invariant characters are `z ↦ zⁿ` for every integer `n`,
//! and a covariant function is `z^n·values[x][ℓ]`. For `N = ℤ̂_M × 𝕋` they are
//! `(ω, z) ↦ ω(y)·z^k` with `k ∈ Mℤ`, and a covariant function is
//! `ω(y)·z^k·values[x]`. The circle never needs discretizing in these forms;
//! quadrature only appears in [`circle_oracle_check`].

use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::characters::root_of_unity;
use crate::error::{invalid, Error, Result};
use crate::report::{CharacterDescriptor, PropertyRecord, SubgroupDescriptor, VerificationReport, REPORT_VERSION};
use crate::rng::{random_complex, substream};
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// `exp(2πi·a/m)` for any integer `a`.
fn phase(a: i64, m: usize) -> C64 {
    root_of_unity(a.rem_euclid(m as i64) as u64, m as u64)
}

/// `z^n` for `z` on the unit circle.
fn circle_pow(z: C64, n: i64) -> C64 {
    if n >= 0 {
        z.powu(n as u32)
    } else {
        z.conj().powu(n.unsigned_abs() as u32)
    }
}

/// Covariant function for `N = 𝕋` and degree `n`, stored as `values[x·M + ℓ]`.
#[derive(Clone, Debug, PartialEq)]
pub struct WhCenterCovariant {
    m: usize,
    degree: i64,
    values: Vec<C64>,
}

impl WhCenterCovariant {
    pub fn new(m: usize, degree: i64, values: Vec<C64>) -> Result<Self> {
        if m == 0 {
            return Err(invalid("M must be positive"));
        }
        if values.len() != m * m {
            return Err(invalid(format!("expected {} values, got {}", m * m, values.len())));
        }
        Ok(WhCenterCovariant { m, degree, values })
    }

    pub fn delta(m: usize, degree: i64, x: usize, l: usize) -> Result<Self> {
        let mut values = vec![ZERO; m * m];
        if x >= m || l >= m {
            return Err(invalid("delta position out of range"));
        }
        values[x * m + l] = C64::new(1.0, 0.0);
        Self::new(m, degree, values)
    }

    pub fn random<R: Rng + ?Sized>(m: usize, degree: i64, rng: &mut R) -> Self {
        WhCenterCovariant {
            m,
            degree,
            values: random_complex(rng, m * m),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    #[inline]
    pub fn at(&self, x: usize, l: usize) -> C64 {
        self.values[(x % self.m) * self.m + l % self.m]
    }

    /// `φ(x, ω_ℓ, z) = zⁿ·φ(x, ω_ℓ, 1)`.
    pub fn eval(&self, x: usize, l: usize, z: C64) -> C64 {
        circle_pow(z, self.degree) * self.at(x, l)
    }

    pub fn norm(&self, p: f64) -> Result<f64> {
        lp(&self.values, p)
    }
}

/// Covariant function for `N = ℤ̂_M × 𝕋` and the character `(y, k)`,
/// `k ∈ Mℤ`, stored as `values[x] = φ(x, 1, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WhFullCovariant {
    m: usize,
    y: usize,
    degree: i64,
    values: Vec<C64>,
}

impl WhFullCovariant {
    pub fn new(m: usize, y: usize, degree: i64, values: Vec<C64>) -> Result<Self> {
        if m == 0 {
            return Err(invalid("M must be positive"));
        }
        if y >= m {
            return Err(invalid(format!("y = {y} must lie in 0..{m}")));
        }
        if degree.rem_euclid(m as i64) != 0 {
            return Err(Error::NotInvariant(format!("degree {degree} is not a multiple of M = {m}")));
        }
        if values.len() != m {
            return Err(invalid(format!("expected {m} values, got {}", values.len())));
        }
        Ok(WhFullCovariant { m, y, degree, values })
    }

    pub fn random<R: Rng + ?Sized>(m: usize, y: usize, degree: i64, rng: &mut R) -> Result<Self> {
        Self::new(m, y, degree, random_complex(rng, m))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn y(&self) -> usize {
        self.y
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// `φ(x, ω_ℓ, z) = ω_ℓ(y)·z^k·φ(x, 1, 1)`.
    pub fn eval(&self, x: usize, l: usize, z: C64) -> C64 {
        phase((l * self.y) as i64, self.m) * circle_pow(z, self.degree) * self.values[x % self.m]
    }

    pub fn norm(&self, p: f64) -> Result<f64> {
        lp(&self.values, p)
    }
}

fn lp(values: &[C64], p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(invalid(format!("norm exponent {p} is below 1")));
    }
    Ok(values.iter().map(|v| v.norm().powf(p)).sum::<f64>().powf(1.0 / p))
}

/// `(ψ♮φ)[m][ℓ] = Σ_{m',ℓ'} exp(2πi·n(ℓ'−ℓ)m'/M)·ψ[m'][ℓ']·φ[m−m'][ℓ−ℓ']`.
pub fn wh_center_convolve(psi: &WhCenterCovariant, phi: &WhCenterCovariant) -> Result<WhCenterCovariant> {
    if psi.m != phi.m || psi.degree != phi.degree {
        return Err(Error::IncompatibleContext(format!(
            "(M, n) = ({}, {}) vs ({}, {})",
            psi.m, psi.degree, phi.m, phi.degree
        )));
    }
    let m = psi.m;
    let n = psi.degree.rem_euclid(m as i64) as usize;
    let roots: Vec<C64> = (0..m).map(|a| phase(a as i64, m)).collect();
    let values = (0..m * m)
        .into_par_iter()
        .map(|idx| {
            let (x, l) = (idx / m, idx % m);
            let mut acc = ZERO;
            for x1 in 0..m {
                for l1 in 0..m {
                    let a = psi.values[x1 * m + l1];
                    if a == ZERO {
                        continue;
                    }
                    let tw = roots[(n * ((l1 + m - l) % m) * x1) % m];
                    acc += tw * a * phi.values[((x + m - x1) % m) * m + (l + m - l1) % m];
                }
            }
            acc
        })
        .collect();
    Ok(WhCenterCovariant { m, degree: psi.degree, values })
}

/// `ψ^♮[m][ℓ] = exp(−2πi·n·m·ℓ/M)·conj(ψ[−m][−ℓ])`.
pub fn wh_center_involve(psi: &WhCenterCovariant) -> WhCenterCovariant {
    let m = psi.m;
    let values = (0..m * m)
        .map(|idx| {
            let (x, l) = (idx / m, idx % m);
            let tw = phase(-psi.degree * (x * l) as i64, m);
            tw * psi.at(m - x, m - l).conj()
        })
        .collect();
    WhCenterCovariant { m, degree: psi.degree, values }
}

fn full_compatible(psi: &WhFullCovariant, phi: &WhFullCovariant) -> Result<()> {
    if psi.m != phi.m || psi.y != phi.y || psi.degree != phi.degree {
        return Err(Error::IncompatibleContext(format!(
            "(M, y, k) = ({}, {}, {}) vs ({}, {}, {})",
            psi.m, psi.y, psi.degree, phi.m, phi.y, phi.degree
        )));
    }
    Ok(())
}

/// Transversal values of `ψ♮φ`: the cyclic convolution `Σ_{m'} ψ[m']·φ[m−m']`.
/// The phase `exp(−2πi·kℓm'/M)` equals 1 at `ℓ = 0`; see
/// [`wh_full_convolve_eval`] for the formula at every `ℓ`.
pub fn wh_full_convolve(psi: &WhFullCovariant, phi: &WhFullCovariant) -> Result<WhFullCovariant> {
    full_compatible(psi, phi)?;
    let m = psi.m;
    let values = (0..m)
        .map(|x| (0..m).map(|x1| psi.values[x1] * phi.values[(x + m - x1) % m]).sum())
        .collect();
    Ok(WhFullCovariant {
        m,
        y: psi.y,
        degree: psi.degree,
        values,
    })
}

/// `(ψ♮φ)(m, ω_ℓ, z) = z^k·exp(2πi·ℓy/M)·Σ_{m'} exp(−2πi·kℓm'/M)·ψ(m')·φ(m−m')`
/// with every phase evaluated in floating point as written.
pub fn wh_full_convolve_eval(psi: &WhFullCovariant, phi: &WhFullCovariant, x: usize, l: usize, z: C64) -> Result<C64> {
    full_compatible(psi, phi)?;
    let m = psi.m;
    let k = psi.degree as f64;
    let sum: C64 = (0..m)
        .map(|x1| {
            let tw = C64::from_polar(1.0, -TAU * k * (l * x1) as f64 / m as f64);
            tw * psi.values[x1] * phi.values[(x % m + m - x1) % m]
        })
        .sum();
    let prefactor = circle_pow(z, psi.degree) * C64::from_polar(1.0, TAU * (l * psi.y) as f64 / m as f64);
    Ok(prefactor * sum)
}

/// `ψ^♮[m] = conj(ψ[−m])`; the `ω(y)·z^k` prefactor is restored at evaluation.
pub fn wh_full_involve(psi: &WhFullCovariant) -> WhFullCovariant {
    let m = psi.m;
    WhFullCovariant {
        m,
        y: psi.y,
        degree: psi.degree,
        values: (0..m).map(|x| psi.values[(m - x) % m].conj()).collect(),
    }
}

/// `(y, n)` with `|n| ≤ n_max` such that `ξ(ω, z) = ω(y)·zⁿ` satisfies
/// `ξ ∘ θ_x = ξ` for every `x ∈ ℤ_M`, where `θ_x(ω, z) = (ω, ω(x)·z)`.
///
/// `ξ∘θ_x(ω_ℓ, z) = ω_ℓ(y)·ω_ℓ(x)ⁿ·zⁿ`, so invariance means
/// `ℓ·x·n ≡ 0 (mod M)` for all `ℓ, x`; this is tested pointwise.
pub fn wh_invariant_characters(m: usize, n_max: i64) -> Result<Vec<(usize, i64)>> {
    if m == 0 {
        return Err(invalid("M must be positive"));
    }
    if n_max < m as i64 {
        return Err(invalid(format!("n_max = {n_max} must be at least M = {m}")));
    }
    let mm = m as i64;
    let mut out = Vec::new();
    for y in 0..m {
        for n in -n_max..=n_max {
            let fixed = (0..mm).all(|l| (0..mm).all(|x| (l * x * n).rem_euclid(mm) == 0));
            if fixed {
                out.push((y, n));
            }
        }
    }
    Ok(out)
}

/// Random element of the trigonometric polynomials of degree ≤ `d` in `z`,
/// one per `(x, ℓ)` cell: `coeffs[(x·M + ℓ)·(2d+1) + (j + d)]`.
struct TrigField {
    m: usize,
    d: usize,
    coeffs: Vec<C64>,
}

impl TrigField {
    fn random(m: usize, d: usize, rng: &mut ChaCha8Rng) -> Self {
        TrigField {
            m,
            d,
            coeffs: random_complex(rng, m * m * (2 * d + 1)),
        }
    }

    fn eval(&self, cell: usize, z: C64) -> C64 {
        let w = 2 * self.d + 1;
        let c = &self.coeffs[cell * w..(cell + 1) * w];
        let zi = z.conj();
        // Horner in z for non-negative powers and in z⁻¹ for negative ones.
        let mut pos = ZERO;
        for j in (0..=self.d).rev() {
            pos = pos * z + c[self.d + j];
        }
        let mut neg = ZERO;
        for j in (1..=self.d).rev() {
            neg = (neg + c[self.d - j]) * zi;
        }
        pos + neg
    }

    fn sample(&self, nodes: &[C64]) -> Vec<Vec<C64>> {
        (0..self.m * self.m)
            .map(|cell| nodes.iter().map(|&z| self.eval(cell, z)).collect())
            .collect()
    }
}

/// Quadrature form of `T_ξ(f)` for `N = 𝕋`: `(1/Q)·Σ_p f(x, ℓ, z_p)·z_p^{−n}`.
fn quadrature_project(samples: &[Vec<C64>], nodes: &[C64], m: usize, n: i64) -> Result<WhCenterCovariant> {
    let q = nodes.len() as f64;
    let weights: Vec<C64> = nodes.iter().map(|&z| circle_pow(z, -n) / q).collect();
    let values = samples
        .iter()
        .map(|s| s.iter().zip(&weights).map(|(a, w)| a * w).sum())
        .collect();
    WhCenterCovariant::new(m, n, values)
}

/// `T_ξ(f ∗_G g)` with `f ∗_G g` summed over `ℤ_M × ℤ̂_M` and integrated over
/// the circle by the Q-point rule, from the group law directly:
/// `Y⁻¹X = (x−x', ℓ−ℓ', exp(2πi(ℓ'−ℓ)x'/M)·z·conj(z'))`.
fn quadrature_convolve_project(f: &TrigField, g: &TrigField, nodes: &[C64], m: usize, n: i64) -> Vec<C64> {
    let qn = nodes.len();
    let fs = f.sample(nodes);
    let on_grid = qn % m == 0;
    let gs = if on_grid { g.sample(nodes) } else { Vec::new() };
    let weights: Vec<C64> = nodes.iter().map(|&z| circle_pow(z, -n)).collect();
    let norm = 1.0 / (qn as f64 * qn as f64);
    let step = qn / m.max(1);
    (0..m * m)
        .into_par_iter()
        .map(|cell| {
            let (x, l) = (cell / m, cell % m);
            let mut total = ZERO;
            for x1 in 0..m {
                for l1 in 0..m {
                    let fcell = &fs[x1 * m + l1];
                    let gcell = ((x + m - x1) % m) * m + (l + m - l1) % m;
                    let twist = ((l1 + m - l) % m) * x1 % m;
                    // g(x−x', ℓ−ℓ', ·) reversed and doubled so that the
                    // circular correlation below is a contiguous dot product.
                    let grev: Vec<C64> = if on_grid {
                        let grow = &gs[gcell];
                        (0..2 * qn).map(|i| grow[(2 * qn - i) % qn]).collect()
                    } else {
                        Vec::new()
                    };
                    for (qi, w) in weights.iter().enumerate() {
                        let mut inner = ZERO;
                        if on_grid {
                            // g(z_q·ω·conj(z_p)) = g[start − p] = grev[p + Q − start].
                            let start = (qi + step * twist) % qn;
                            let off = qn - start;
                            for (fv, gv) in fcell.iter().zip(&grev[off..off + qn]) {
                                inner += fv * gv;
                            }
                        } else {
                            let rot = nodes[qi] * phase(twist as i64, m);
                            for (p, fv) in fcell.iter().enumerate() {
                                inner += fv * g.eval(gcell, rot * nodes[p].conj());
                            }
                        }
                        total += w * inner;
                    }
                }
            }
            total * norm
        })
        .collect()
}

/// Compares [`wh_center_convolve`] of quadrature projections with a Q-point
/// quadrature of `T_ξ(f ∗_G g)` for random trigonometric polynomials `f, g`
/// of degree ≤ `d` in `z`. The rule integrates every term exactly when
/// `Q > 2d + |n|`.
pub fn circle_oracle_check(m: usize, n: i64, d: usize, q: usize, trials: usize, seed: u64) -> Result<VerificationReport> {
    if m == 0 || trials == 0 {
        return Err(invalid("M and trials must be positive"));
    }
    if (q as i64) <= 2 * d as i64 + n.abs() {
        return Err(Error::AliasingRisk(format!(
            "Q = {q} must exceed 2D + |n| = {}",
            2 * d as i64 + n.abs()
        )));
    }
    let nodes: Vec<C64> = (0..q).map(|p| phase(p as i64, q)).collect();
    let id = "circle_oracle";
    let worst = (0..trials as u64)
        .map(|t| {
            let mut rng = substream(seed, id, t);
            let f = TrigField::random(m, d, &mut rng);
            let g = TrigField::random(m, d, &mut rng);
            let tf = quadrature_project(&f.sample(&nodes), &nodes, m, n)?;
            let tg = quadrature_project(&g.sample(&nodes), &nodes, m, n)?;
            let closed = wh_center_convolve(&tf, &tg)?;
            let oracle = quadrature_convolve_project(&f, &g, &nodes, m, n);
            Ok(closed
                .values
                .iter()
                .zip(&oracle)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(VerificationReport {
        version: REPORT_VERSION.into(),
        group: format!("W(Z{m})"),
        n: SubgroupDescriptor {
            label: "T".into(),
            order: 0,
        },
        xi: CharacterDescriptor {
            index: None,
            phases: vec![format!("z^{n}")],
        },
        seed,
        properties: vec![PropertyRecord::new(
            id,
            format!("T(f * g) = T(f) # T(g) on W(Z{m}), D={d}, Q={q}"),
            trials,
            worst,
            1e-10,
        )],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn diff(a: &[C64], b: &[C64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn degree_zero_is_plain_cyclic_convolution() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = 5;
        let a = WhCenterCovariant::random(m, 0, &mut rng);
        let b = WhCenterCovariant::random(m, 0, &mut rng);
        let c = wh_center_convolve(&a, &b).unwrap();
        for x in 0..m {
            for l in 0..m {
                let mut want = ZERO;
                for x1 in 0..m {
                    for l1 in 0..m {
                        want += a.at(x1, l1) * b.at(x + m - x1, l + m - l1);
                    }
                }
                assert!((c.at(x, l) - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn single_term_example() {
        let d = WhCenterCovariant::delta(4, 1, 1, 1).unwrap();
        let c = wh_center_convolve(&d, &d).unwrap();
        for x in 0..4 {
            for l in 0..4 {
                let want = if (x, l) == (2, 2) { C64::new(0.0, -1.0) } else { ZERO };
                assert!((c.at(x, l) - want).norm() < 1e-15, "({x},{l})");
            }
        }
    }

    #[test]
    fn center_identity_and_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (m, n) in [(4, 1), (5, -2), (3, 7)] {
            let e = WhCenterCovariant::delta(m, n, 0, 0).unwrap();
            let a = WhCenterCovariant::random(m, n, &mut rng);
            let b = WhCenterCovariant::random(m, n, &mut rng);
            assert!(diff(wh_center_convolve(&e, &a).unwrap().values(), a.values()) < 1e-14);
            assert!(diff(wh_center_convolve(&a, &e).unwrap().values(), a.values()) < 1e-14);
            assert!(diff(wh_center_involve(&wh_center_involve(&a)).values(), a.values()) < 1e-14);
            let lhs = wh_center_involve(&wh_center_convolve(&a, &b).unwrap());
            let rhs = wh_center_convolve(&wh_center_involve(&b), &wh_center_involve(&a)).unwrap();
            assert!(diff(lhs.values(), rhs.values()) < 1e-12);
        }
        let z = WhCenterCovariant::random(3, 0, &mut rng);
        let zi = wh_center_involve(&z);
        for x in 0..3 {
            for l in 0..3 {
                assert_eq!(zi.at(x, l), z.at(3 - x, 3 - l).conj());
            }
        }
    }

    #[test]
    fn center_context_mismatch() {
        let a = WhCenterCovariant::delta(4, 1, 0, 0).unwrap();
        let b = WhCenterCovariant::delta(4, 2, 0, 0).unwrap();
        assert!(matches!(wh_center_convolve(&a, &b), Err(Error::IncompatibleContext(_))));
    }

    #[test]
    fn full_case_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = 4;
        assert!(WhFullCovariant::new(m, 1, 3, vec![ZERO; 4]).is_err());
        for k in [0, 4, -8] {
            let a = WhFullCovariant::random(m, 2, k, &mut rng).unwrap();
            let b = WhFullCovariant::random(m, 2, k, &mut rng).unwrap();
            let mut unit = vec![ZERO; m];
            unit[0] = C64::new(1.0, 0.0);
            let e = WhFullCovariant::new(m, 2, k, unit).unwrap();
            assert_eq!(wh_full_convolve(&e, &a).unwrap(), a);
            assert_eq!(wh_full_involve(&wh_full_involve(&a)), a);
            let lhs = wh_full_involve(&wh_full_convolve(&a, &b).unwrap());
            let rhs = wh_full_convolve(&wh_full_involve(&b), &wh_full_involve(&a)).unwrap();
            assert!(diff(lhs.values(), rhs.values()) < 1e-14);

            let c = wh_full_convolve(&a, &b).unwrap();
            for x in 0..m {
                for l in 0..m {
                    let z = C64::from_polar(1.0, 0.7);
                    let literal = wh_full_convolve_eval(&a, &b, x, l, z).unwrap();
                    assert!((literal - c.eval(x, l, z)).norm() < 1e-12);
                }
            }
        }
        let sym = WhFullCovariant::new(4, 0, 0, [1.0, 2.0, 3.0, 2.0].map(|v| C64::new(v, 0.0)).to_vec()).unwrap();
        assert_eq!(wh_full_involve(&sym), sym);
        // Phase collapse at M=4, k=4, ℓ=1, m'=1.
        let tw = C64::from_polar(1.0, -TAU * 4.0 * 1.0 * 1.0 / 4.0);
        assert!((tw - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn gamma_pattern() {
        let got = wh_invariant_characters(4, 8).unwrap();
        let want: Vec<(usize, i64)> = (0..4).flat_map(|y| [-8, -4, 0, 4, 8].map(|n| (y, n))).collect();
        assert_eq!(got, want);
        assert!(!got.contains(&(2, 3)));
        assert_eq!(wh_invariant_characters(1, 3).unwrap().len(), 7);
        assert!(wh_invariant_characters(4, 3).is_err());
    }

    #[test]
    fn oracle_small_cases() {
        let r = circle_oracle_check(3, 2, 0, 5, 5, 1).unwrap();
        assert!(r.properties[0].max_residual < 1e-12, "{:?}", r.properties[0]);
        // Q not divisible by M exercises the direct evaluation path.
        let r = circle_oracle_check(3, 1, 2, 7, 3, 2).unwrap();
        assert!(r.all_pass(), "{:?}", r.properties[0]);
        assert!(matches!(circle_oracle_check(4, 1, 3, 7, 1, 0), Err(Error::AliasingRisk(_))));
    }

    #[test]
    fn projection_outside_support_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let nodes: Vec<C64> = (0..16).map(|p| phase(p, 16)).collect();
        let f = TrigField::random(2, 2, &mut rng);
        let t = quadrature_project(&f.sample(&nodes), &nodes, 2, 5).unwrap();
        assert!(t.values().iter().all(|v| v.norm() < 1e-14));
    }
}
