//! The affine group `G = (0,∞) ⋉ ℝ` with `(a,b)(a',b') = (aa', b + ab')`,
//! `N = K = ℝ` and the trivial character of `K`.
//!
//! `H = (0,∞)` carries `da/a` and is sampled on logarithmic grids. The
//! transport factor is measured rather than assumed: `δ(a)` is the number
//! with `∫ v(θ_a⁻¹(u)) du = δ(a)⁻¹·∫ v(s) ds`, which comes out as `1/a`.
//! With this convention `dλ_G = δ(h)·dh/h·dk` and `Δ_G(a,b) = δ(a)`.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;

use super::grid::{converged_line_integral, trapezoid, Grid1D, GridKind};
use super::testfn::TestFunction;
use super::{max_abs, study_resolutions, ContinuumReport, REFERENCE_TOL};
use crate::covariant::EXACT_TOL;
use crate::error::{invalid, Error, Result};
use crate::rng::substream;
use crate::C64;

/// Log-grids cover `a ∈ [e^{−3.5}, e^{3.5}]`.
pub const AFFINE_LOG_HALF_WIDTH: f64 = 3.5;
/// Intervals of the log grid used by the independent quadratures.
const ORACLE_INTERVALS: usize = 512;

pub fn affine_mul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0, a.1 + a.0 * b.1)
}

pub fn affine_inv(a: (f64, f64)) -> (f64, f64) {
    (1.0 / a.0, -a.1 / a.0)
}

/// `δ_{H,K}(a)` measured by transporting a Gaussian through `θ_a(s) = as`.
pub fn delta_hk(a: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(invalid(format!("affine parameter must be positive, got {a}")));
    }
    let v = |s: f64| (-0.5 * s * s).exp();
    let plain = converged_line_integral(v, 0.0, 1.0, 1e-15);
    let moved = converged_line_integral(|u| v(u / a), 0.0, a, 1e-15);
    Ok(plain / moved)
}

/// `f(a, s) = f_H(ln a)·f_K(s)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineFunction {
    /// Profile in `u = ln a`.
    pub h: TestFunction,
    pub k: TestFunction,
}

impl AffineFunction {
    pub fn eval(&self, a: f64, s: f64) -> C64 {
        self.h.eval(a.ln()) * self.k.eval(s)
    }
}

/// Samples of `ψ(a, 0)` for a covariant function of the trivial character,
/// so that `ψ(a, b) = ψ(a, 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineCovariant {
    grid: Grid1D,
    values: Vec<C64>,
}

impl AffineCovariant {
    pub fn new(grid: Grid1D, values: Vec<C64>) -> Result<Self> {
        if grid.kind() != GridKind::Multiplicative {
            return Err(Error::InvalidGrid("affine samples need a multiplicative grid".into()));
        }
        if values.len() != grid.len() {
            return Err(invalid(format!("expected {} samples, got {}", grid.len(), values.len())));
        }
        Ok(AffineCovariant { grid, values })
    }

    /// Samples `ψ(a) = p(ln a)`.
    pub fn from_log_profile<F: Fn(f64) -> C64>(grid: &Grid1D, p: F) -> Result<Self> {
        let values = grid.coords().iter().map(|&u| p(u)).collect();
        Self::new(grid.clone(), values)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// `ψ(a, b)`, linear in `ln a` between nodes and zero outside.
    pub fn eval(&self, a: f64, _b: f64) -> C64 {
        let u = a.ln();
        let c = self.grid.coords();
        let n = c.len();
        if !(u >= c[0] && u <= c[n - 1]) {
            return C64::new(0.0, 0.0);
        }
        let i = c.partition_point(|&v| v <= u).clamp(1, n - 1) - 1;
        let t = (u - c[i]) / (c[i + 1] - c[i]);
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }

    /// `∫ |ψ(a)| da/a`.
    pub fn norm1(&self) -> f64 {
        self.values.iter().zip(self.grid.weights()).map(|(v, w)| v.norm() * w).sum()
    }

    /// `∫ ψ(a) da/a`.
    pub fn integral(&self) -> C64 {
        self.grid.integrate(&self.values)
    }
}

/// `ψ(a) = δ(a)·∫ f(a,s) ds` for `f` supported in `s ∈ s_window`.
pub fn affine_project_fn<F>(f: &F, s_window: (f64, f64), s_step: f64, grid: &Grid1D) -> Result<AffineCovariant>
where
    F: Fn(f64, f64) -> C64 + Sync,
{
    if !(s_step > 0.0) {
        return Err(invalid("s step must be positive"));
    }
    let values = grid
        .nodes()
        .par_iter()
        .map(|&a| Ok(trapezoid(s_window.0, s_window.1, s_step, |s| f(a, s)) * delta_hk(a)?))
        .collect::<Result<Vec<_>>>()?;
    AffineCovariant::new(grid.clone(), values)
}

pub fn affine_project_with_step(f: &AffineFunction, s_step: f64, grid: &Grid1D) -> Result<AffineCovariant> {
    if s_step > 0.25 * f.k.width {
        return Err(Error::Resolution(format!("s step {s_step} exceeds a quarter of the width {}", f.k.width)));
    }
    let c = grid.coords();
    let (lo, hi) = f.h.window();
    if lo < c[0] || hi > c[c.len() - 1] {
        return Err(invalid(format!("profile in ln a is not supported inside [{}, {}]", c[0], c[c.len() - 1])));
    }
    affine_project_fn(&|a, s| f.eval(a, s), f.k.window(), s_step, grid)
}

pub fn affine_project(f: &AffineFunction, grid: &Grid1D) -> Result<AffineCovariant> {
    affine_project_with_step(f, f.k.width / 16.0, grid)
}

fn require_log_lattice(grid: &Grid1D) -> Result<()> {
    if grid.kind() != GridKind::Multiplicative || !grid.is_lattice() {
        return Err(Error::InvalidGrid("need a log-uniform grid symmetric under a -> 1/a with an even number of intervals".into()));
    }
    Ok(())
}

/// `(ψ♮φ)(a) = ∫ ψ(h)·φ(h⁻¹a) dh/h`, on nodes, with `φ` zero off the grid.
pub fn affine_convolve(psi: &AffineCovariant, phi: &AffineCovariant) -> Result<AffineCovariant> {
    if psi.grid != phi.grid {
        return Err(Error::IncompatibleContext("samples on different grids".into()));
    }
    let grid = &psi.grid;
    require_log_lattice(grid)?;
    let n = grid.len();
    let half = (n / 2) as i64;
    let w = grid.weights();
    let values = (0..n)
        .into_par_iter()
        .map(|i| {
            let ki = i as i64 - half;
            (0..n)
                .filter_map(|j| {
                    let d = grid.lattice_index(ki - (j as i64 - half))?;
                    Some(psi.values[j] * phi.values[d] * w[j])
                })
                .sum()
        })
        .collect();
    AffineCovariant::new(grid.clone(), values)
}

/// `ψ^♮(a) = Δ_H(a⁻¹)·conj ψ(a⁻¹) = conj ψ(1/a)`.
pub fn affine_involve(psi: &AffineCovariant) -> Result<AffineCovariant> {
    if psi.grid.kind() != GridKind::Multiplicative || !psi.grid.is_symmetric() {
        return Err(Error::InvalidGrid("grid is not closed under a -> 1/a".into()));
    }
    let values = psi.values.iter().rev().map(|v| v.conj()).collect();
    AffineCovariant::new(psi.grid.clone(), values)
}

/// `D(h) = ∫dk f_K(k) ∫db g_K((b−k)/h)`, with `b` on a global lattice.
fn translation_integral(fk: &TestFunction, gk: &TestFunction, h: f64) -> C64 {
    let kstep = 0.25 * fk.width;
    let bstep = 0.25 * h * gk.width;
    let (glo, ghi) = gk.window();
    let (klo, khi) = fk.window();
    trapezoid(klo, khi, kstep, |k| {
        let m0 = ((k + h * glo) / bstep).ceil() as i64;
        let m1 = ((k + h * ghi) / bstep).floor() as i64;
        let inner: C64 = (m0..=m1).map(|m| gk.eval((m as f64 * bstep - k) / h)).sum();
        fk.eval(k) * inner * bstep
    })
}

/// `T(f ∗_G g)(a) = δ(a)·∫db ∫ f(h,k)·g(a/h, (b−k)/h)·δ(h) dh/h dk` at each `a`.
pub fn affine_convolution_oracle(f: &AffineFunction, g: &AffineFunction, points: &[f64]) -> Result<Vec<C64>> {
    let oracle = Grid1D::logarithmic(AFFINE_LOG_HALF_WIDTH, ORACLE_INTERVALS)?;
    let cutoff = 1e-17 * f.h.amplitude.norm();
    let terms = oracle
        .coords()
        .par_iter()
        .zip(oracle.weights())
        .filter(|(&u, _)| f.h.eval(u).norm() > cutoff)
        .map(|(&u, &w)| {
            let h = u.exp();
            Ok((u, f.h.eval(u) * translation_integral(&f.k, &g.k, h) * (w * delta_hk(h)?)))
        })
        .collect::<Result<Vec<_>>>()?;
    points
        .iter()
        .map(|&a| {
            let la = a.ln();
            let s: C64 = terms.iter().map(|(u, t)| t * g.h.eval(la - u)).sum();
            Ok(s * delta_hk(a)?)
        })
        .collect()
}

/// `T(f^*)(a) = δ(a)·∫ Δ_G((a,s)⁻¹)·conj f((a,s)⁻¹) ds` with `Δ_G(a,b) = δ(a)`.
pub fn affine_involution_oracle(f: &AffineFunction, points: &[f64]) -> Result<Vec<C64>> {
    let (lo, hi) = f.k.window();
    points
        .iter()
        .map(|&a| {
            // (a,s)⁻¹ = (1/a, −s/a) lands in the support of f_K for s ∈ −a·[lo, hi].
            let ds = trapezoid(-a * hi, -a * lo, a * f.k.width / 32.0, |s| {
                let (ia, is) = affine_inv((a, s));
                f.eval(ia, is).conj()
            });
            Ok(ds * (delta_hk(a)? * delta_hk(1.0 / a)?))
        })
        .collect()
}

/// Relative gap between `∫_G f dλ_G` and `∫_{G/K} ∫_K f(h, h·s) ds dh/h`,
/// with `dλ_G = delta(h)·dh/h·dk`. Uses the sheared, non-separable
/// `f(a,s) = f_H(ln a)·f_K(s − shear·ln a)`.
pub fn weil_residual_with<D: Fn(f64) -> f64 + Sync>(f: &AffineFunction, shear: f64, delta: D) -> Result<f64> {
    let oracle = Grid1D::logarithmic(AFFINE_LOG_HALF_WIDTH, ORACLE_INTERVALS)?;
    let fun = |a: f64, s: f64| f.h.eval(a.ln()) * f.k.eval(s - shear * a.ln());
    let (klo, khi) = f.k.window();
    let step = f.k.width / 32.0;
    let parts: Vec<(C64, C64, f64)> = oracle
        .coords()
        .par_iter()
        .zip(oracle.weights())
        .map(|(&u, &w)| {
            let h = u.exp();
            let (lo, hi) = (klo + shear * u, khi + shear * u);
            let inner_g = trapezoid(lo, hi, step, |k| fun(h, k));
            let inner_abs = trapezoid(lo, hi, step, |k| C64::new(fun(h, k).norm(), 0.0)).re;
            let inner_q = trapezoid(lo / h, hi / h, step / h, |s| fun(h, h * s));
            (inner_g * (w * delta(h)), inner_q * w, inner_abs * w * delta(h))
        })
        .collect();
    let lhs: C64 = parts.iter().map(|p| p.0).sum();
    let rhs: C64 = parts.iter().map(|p| p.1).sum();
    let scale: f64 = parts.iter().map(|p| p.2).sum();
    Ok((lhs - rhs).norm() / scale)
}

/// Weil residual for the measured `δ`.
pub fn weil_residual(f: &AffineFunction, shear: f64) -> Result<f64> {
    weil_residual_with(f, shear, |h| delta_hk(h).expect("positive grid node"))
}

/// `|δ(aa') − δ(a)δ(a')|` maximized over seeded pairs with `|ln a|, |ln a'| ≤ 1.75`.
pub fn delta_homomorphism_residual(trials: usize, seed: u64) -> Result<f64> {
    let mut rng = substream(seed, "affine-delta", 0);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let a = rng.gen_range(-1.75..1.75f64).exp();
        let b = rng.gen_range(-1.75..1.75f64).exp();
        worst = worst.max((delta_hk(a * b)? - delta_hk(a)? * delta_hk(b)?).abs());
    }
    Ok(worst)
}

/// `∫ A₁e^{−(v−c₁)²/2w₁²}·A₂e^{−(u−v−c₂)²/2w₂²} dv`.
pub fn log_gaussian_convolution(p: &TestFunction, q: &TestFunction, u: f64) -> C64 {
    let s2 = p.width * p.width + q.width * q.width;
    let d = u - p.center - q.center;
    p.amplitude * q.amplitude * ((2.0 * PI).sqrt() * p.width * q.width / s2.sqrt() * (-d * d / (2.0 * s2)).exp())
}

fn fixtures<R: Rng + ?Sized>(rng: &mut R) -> [(AffineFunction, AffineFunction); 2] {
    let mut amp = || C64::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(-PI..PI));
    let g = TestFunction::gaussian;
    [
        (
            AffineFunction { h: g(0.2, 0.3, amp()), k: g(0.3, 0.7, amp()) },
            AffineFunction { h: g(-0.1, 0.35, amp()), k: g(-0.2, 0.5, amp()) },
        ),
        (
            AffineFunction { h: g(0.1, 0.08, amp()), k: g(0.0, 0.6, amp()) },
            AffineFunction { h: g(-0.05, 0.08, amp()), k: g(0.4, 0.45, amp()) },
        ),
    ]
}

/// Refinement study of the affine identities at `[r/4, r/2, r]` intervals
/// over `ln a ∈ [−3.5, 3.5]`.
pub fn affine_study(reference: usize, seed: u64) -> Result<ContinuumReport> {
    let resolutions = study_resolutions(reference)?;
    let coarse = Grid1D::logarithmic(AFFINE_LOG_HALF_WIDTH, resolutions[0])?;
    let points = coarse.nodes().to_vec();
    let pairs = fixtures(&mut substream(seed, "affine-fixture", 0));
    let oracles = pairs
        .iter()
        .map(|(f, g)| Ok((affine_convolution_oracle(f, g, &points)?, affine_involution_oracle(f, &points)?)))
        .collect::<Result<Vec<_>>>()?;

    let mut report = ContinuumReport::new("Aff", seed, &resolutions);
    for &res in &resolutions {
        let grid = Grid1D::logarithmic(AFFINE_LOG_HALF_WIDTH, res)?;
        let stride = res / resolutions[0];
        let on_check = |v: &AffineCovariant| -> Vec<C64> { (0..coarse.len()).map(|i| v.values()[i * stride]).collect() };
        let (mut hom, mut inv, mut anti, mut invol, mut norm, mut closed) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for ((f, g), (conv_o, inv_o)) in pairs.iter().zip(&oracles) {
            let psi = affine_project(f, &grid)?;
            let phi = affine_project(g, &grid)?;
            let conv = affine_convolve(&psi, &phi)?;
            hom = hom.max(max_abs(&on_check(&conv), conv_o));
            let psi_inv = affine_involve(&psi)?;
            inv = inv.max(max_abs(&on_check(&psi_inv), inv_o));
            let lhs = affine_involve(&conv)?;
            let rhs = affine_convolve(&affine_involve(&phi)?, &psi_inv)?;
            anti = anti.max(max_abs(lhs.values(), rhs.values()));
            invol = invol.max(max_abs(affine_involve(&psi_inv)?.values(), psi.values()));
            norm = norm.max(conv.norm1() - psi.norm1() * phi.norm1());
            let p = AffineCovariant::from_log_profile(&grid, |u| f.h.eval(u))?;
            let q = AffineCovariant::from_log_profile(&grid, |u| g.h.eval(u))?;
            let pq = affine_convolve(&p, &q)?;
            let want: Vec<C64> = grid.coords().iter().map(|&u| log_gaussian_convolution(&f.h, &g.h, u)).collect();
            closed = closed.max(max_abs(pq.values(), &want));
        }
        report.push_row("homomorphism", res, hom);
        report.push_row("involution", res, inv);
        report.push_row("anti_homomorphism", res, anti);
        report.push_row("involutive", res, invol);
        report.push_row("norm_bound", res, norm.max(0.0));
        report.push_row("log_gaussian_closed_form", res, closed);
    }
    let trials = pairs.len();
    report.check_reference("homomorphism", "T(f*g) = T(f) # T(g)", trials, REFERENCE_TOL);
    report.check_reference("involution", "T(f^*) = T(f)^# with Delta_G(a,b) = delta(a)", trials, REFERENCE_TOL);
    report.check_reference("anti_homomorphism", "(psi # phi)^# = phi^# # psi^#", trials, REFERENCE_TOL);
    report.check_reference("involutive", "psi^#^# = psi", trials, 0.0);
    report.check_reference("norm_bound", "||psi # phi||_1 <= ||psi||_1 ||phi||_1", trials, EXACT_TOL);
    report.check_reference("log_gaussian_closed_form", "log-Gaussians convolve to a log-Gaussian", trials, REFERENCE_TOL);

    let reference = report.reference();
    let dh = delta_homomorphism_residual(100, seed)?;
    report.push_row("delta_homomorphism", reference, dh);
    report.check_reference("delta_homomorphism", "delta(aa') = delta(a) delta(a')", 100, 1e-10);
    let conv = points.iter().map(|&a| Ok((delta_hk(a)? * a - 1.0).abs())).collect::<Result<Vec<f64>>>()?;
    report.push_row("delta_convention", reference, conv.into_iter().fold(0.0, f64::max));
    report.check_reference("delta_convention", "measured delta(a) = 1/a", points.len(), 1e-10);
    let weil = pairs.iter().map(|(f, _)| weil_residual(f, 0.4)).collect::<Result<Vec<f64>>>()?;
    report.push_row("weil", reference, weil.into_iter().fold(0.0, f64::max));
    report.check_reference("weil", "int_G f = int_{G/K} int_K f", trials, 1e-8);

    report.check_refinement(&["homomorphism", "involution", "anti_homomorphism", "log_gaussian_closed_form"]);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> (AffineFunction, AffineFunction) {
        fixtures(&mut substream(7, "affine-test", 0))[0]
    }

    #[test]
    fn group_law() {
        let (a, b, c) = ((2.0, 0.5), (0.3, -1.0), (1.7, 2.2));
        let l = affine_mul(affine_mul(a, b), c);
        let r = affine_mul(a, affine_mul(b, c));
        assert!((l.0 - r.0).abs() + (l.1 - r.1).abs() < 1e-14);
        let e = affine_mul(a, affine_inv(a));
        assert!((e.0 - 1.0).abs() + e.1.abs() < 1e-15);
    }

    #[test]
    fn measured_delta_is_reciprocal_and_multiplicative() {
        for a in [0.05, 0.5, 1.0, 3.0, 30.0] {
            assert!((delta_hk(a).unwrap() * a - 1.0).abs() < 1e-12, "a={a}");
        }
        assert!(delta_homomorphism_residual(50, 1).unwrap() < 1e-10);
        assert!(delta_hk(0.0).is_err());
        assert!(delta_hk(-1.0).is_err());
    }

    #[test]
    fn weil_selects_the_convention() {
        let (f, _) = sample();
        assert!(weil_residual(&f, 0.4).unwrap() < 1e-8);
        let reciprocal = weil_residual_with(&f, 0.4, |h| 1.0 / delta_hk(h).unwrap()).unwrap();
        assert!(reciprocal > 1e-3, "{reciprocal}");
    }

    #[test]
    fn separable_projection() {
        let (f, _) = sample();
        let grid = Grid1D::logarithmic(3.5, 64).unwrap();
        let psi = affine_project(&f, &grid).unwrap();
        for (i, &a) in grid.nodes().iter().enumerate() {
            let want = f.h.eval(a.ln()) * f.k.integral() / a;
            assert!((psi.values()[i] - want).norm() < 1e-12);
        }
        // Constant in a: ratios recover delta.
        let v = TestFunction::gaussian(0.1, 0.5, C64::new(1.0, 0.0));
        let c = affine_project_fn(&|_, s| v.eval(s), v.window(), 0.02, &grid).unwrap();
        let one = c.values()[32];
        for (i, &a) in grid.nodes().iter().enumerate() {
            assert!((c.values()[i] / one - delta_hk(a).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn log_gaussians_and_identity_approximation() {
        let grid = Grid1D::logarithmic(3.5, 256).unwrap();
        let p = TestFunction::gaussian(0.3, 0.4, C64::new(1.0, 0.5));
        let q = TestFunction::gaussian(-0.2, 0.3, C64::new(0.7, 0.0));
        let pc = AffineCovariant::from_log_profile(&grid, |u| p.eval(u)).unwrap();
        let qc = AffineCovariant::from_log_profile(&grid, |u| q.eval(u)).unwrap();
        let out = affine_convolve(&pc, &qc).unwrap();
        for (i, &u) in grid.coords().iter().enumerate() {
            assert!((out.values()[i] - log_gaussian_convolution(&p, &q, u)).norm() < 1e-12);
        }
        // Narrow bumps of unit mass act as an approximate identity, with
        // error of order w².
        let mut last = f64::INFINITY;
        for w in [0.2, 0.1, 0.05] {
            let bump = TestFunction::gaussian(0.0, w, C64::new(1.0 / (w * (2.0 * PI).sqrt()), 0.0));
            let bc = AffineCovariant::from_log_profile(&grid, |u| bump.eval(u)).unwrap();
            let err = max_abs(affine_convolve(&pc, &bc).unwrap().values(), pc.values());
            assert!(err < last / 3.5, "{err} vs {last}");
            last = err;
        }
        assert!(last < 2e-2);
    }

    #[test]
    fn involution_rules() {
        let grid = Grid1D::logarithmic(3.5, 64).unwrap();
        let even = TestFunction::gaussian(0.0, 0.5, C64::new(2.0, 0.0));
        let e = AffineCovariant::from_log_profile(&grid, |u| even.eval(u)).unwrap();
        assert_eq!(affine_involve(&e).unwrap().values(), e.values());
        let (f, _) = sample();
        let psi = affine_project(&f, &grid).unwrap();
        assert_eq!(affine_involve(&affine_involve(&psi).unwrap()).unwrap().values(), psi.values());
        let skew = Grid1D::from_coords(GridKind::Multiplicative, vec![-1.0, 0.0, 0.5]).unwrap();
        let bad = AffineCovariant::new(skew, vec![C64::new(1.0, 0.0); 3]).unwrap();
        assert!(matches!(affine_involve(&bad), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn incompatible_grids() {
        let (f, _) = sample();
        let a = affine_project(&f, &Grid1D::logarithmic(3.5, 64).unwrap()).unwrap();
        let b = affine_project(&f, &Grid1D::logarithmic(3.5, 128).unwrap()).unwrap();
        assert!(matches!(affine_convolve(&a, &b), Err(Error::IncompatibleContext(_))));
        assert!(matches!(affine_project_with_step(&f, 1.0, a.grid()), Err(Error::Resolution(_))));
        assert!(AffineCovariant::new(Grid1D::uniform(1.0, 4).unwrap(), vec![C64::new(0.0, 0.0); 5]).is_err());
    }

    #[test]
    fn oracle_matches_reference_grid() {
        let (f, g) = sample();
        let grid = Grid1D::logarithmic(3.5, 256).unwrap();
        let conv = affine_convolve(&affine_project(&f, &grid).unwrap(), &affine_project(&g, &grid).unwrap()).unwrap();
        let pts = [grid.nodes()[128], grid.nodes()[140]];
        let o = affine_convolution_oracle(&f, &g, &pts).unwrap();
        assert!((conv.values()[128] - o[0]).norm() < 1e-8);
        assert!((conv.values()[140] - o[1]).norm() < 1e-8);
        let inv = affine_involve(&affine_project(&f, &grid).unwrap()).unwrap();
        let io = affine_involution_oracle(&f, &pts).unwrap();
        assert!((inv.values()[128] - io[0]).norm() < 1e-10);
    }
}
