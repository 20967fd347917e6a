//! The Heisenberg group `ℍ¹ = ℝ³` with `(x,y,s)(x',y',s') = (x+x', y+y', s+s'+xy')`
//! and the character `χ_ν(t) = e^{iνt}` of its centre.
//!
//! A `χ_ν`-covariant function is fixed by its slice at `t = 0`:
//! `ψ(x,y,t) = e^{iνt}ψ(x,y,0)`. Slices are sampled on a square lattice
//! `[−T,T]²` and interpolated bilinearly off the nodes.

use std::collections::{HashMap, HashSet};
use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;

use super::grid::{trapezoid, Grid1D, GridKind};
use super::testfn::TestFunction;
use super::{max_abs, study_resolutions, ContinuumReport, REFERENCE_TOL};
use crate::covariant::EXACT_TOL;
use crate::error::{invalid, Error, Result};
use crate::rng::substream;
use crate::C64;

/// Half-width `T` of the `(x,y)` truncation square.
pub const H1_HALF_WIDTH: f64 = 8.0;
/// Step of the `s` quadrature in [`h1_project`].
pub const H1_S_STEP: f64 = 0.0625;
/// Values of `ν` exercised by [`h1_study`].
pub const H1_NUS: [f64; 3] = [0.0, 1.0, 2.5];
/// Lattice step of the independent convolution quadrature.
const ORACLE_STEP: f64 = 0.125;

/// `f(x,y,s) = f_x(x)·f_y(y)·f_s(s)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductFunction3 {
    pub x: TestFunction,
    pub y: TestFunction,
    pub s: TestFunction,
}

impl ProductFunction3 {
    pub fn eval(&self, x: f64, y: f64, s: f64) -> C64 {
        self.x.eval(x) * self.y.eval(y) * self.s.eval(s)
    }

    fn xy(&self, x: f64, y: f64) -> C64 {
        self.x.eval(x) * self.y.eval(y)
    }
}

/// Group law of `ℍ¹`.
pub fn h1_mul(a: (f64, f64, f64), b: (f64, f64, f64)) -> (f64, f64, f64) {
    (a.0 + b.0, a.1 + b.1, a.2 + b.2 + a.0 * b.1)
}

pub fn h1_inv(a: (f64, f64, f64)) -> (f64, f64, f64) {
    (-a.0, -a.1, -a.2 + a.0 * a.1)
}

/// Sampled `t = 0` slice of a `χ_ν`-covariant function.
#[derive(Clone, Debug, PartialEq)]
pub struct HeisenbergCovariant1 {
    nu: f64,
    axis: Grid1D,
    /// `values[i·n + j] = ψ(x_i, y_j, 0)`.
    values: Vec<C64>,
}

impl HeisenbergCovariant1 {
    pub fn new(nu: f64, axis: Grid1D, values: Vec<C64>) -> Result<Self> {
        if axis.kind() != GridKind::Additive {
            return Err(Error::InvalidGrid("Heisenberg slices need an additive axis".into()));
        }
        if values.len() != axis.len() * axis.len() {
            return Err(invalid(format!("expected {} samples, got {}", axis.len() * axis.len(), values.len())));
        }
        if !nu.is_finite() {
            return Err(invalid("nu must be finite"));
        }
        Ok(HeisenbergCovariant1 { nu, axis, values })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn axis(&self) -> &Grid1D {
        &self.axis
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.values[i * self.axis.len() + j]
    }

    /// Bilinear interpolation of the slice; zero outside the square.
    pub fn slice(&self, x: f64, y: f64) -> C64 {
        let nodes = self.axis.nodes();
        let n = nodes.len();
        let locate = |t: f64| -> Option<(usize, f64)> {
            if t < nodes[0] || t > nodes[n - 1] {
                return None;
            }
            let i = nodes.partition_point(|&v| v <= t).clamp(1, n - 1) - 1;
            Some((i, (t - nodes[i]) / (nodes[i + 1] - nodes[i])))
        };
        let (Some((i, a)), Some((j, b))) = (locate(x), locate(y)) else {
            return C64::new(0.0, 0.0);
        };
        self.at(i, j) * ((1.0 - a) * (1.0 - b))
            + self.at(i + 1, j) * (a * (1.0 - b))
            + self.at(i, j + 1) * ((1.0 - a) * b)
            + self.at(i + 1, j + 1) * (a * b)
    }

    /// `ψ(x, y, t) = e^{iνt}·ψ(x, y, 0)`.
    pub fn eval(&self, x: f64, y: f64, t: f64) -> C64 {
        C64::from_polar(1.0, self.nu * t) * self.slice(x, y)
    }

    /// `‖ψ‖_(1) = ∫∫ |ψ(x,y,0)| dx dy`.
    pub fn norm1(&self) -> f64 {
        let w = self.axis.weights();
        let n = w.len();
        (0..n)
            .map(|i| (0..n).map(|j| w[i] * w[j] * self.at(i, j).norm()).sum::<f64>())
            .sum()
    }
}

/// Fails unless `s_step` puts at least ten nodes in each period of `e^{−iνs}`.
pub fn check_oscillation(nu: f64, s_step: f64) -> Result<()> {
    if !(s_step > 0.0) {
        return Err(invalid("s step must be positive"));
    }
    if nu != 0.0 && s_step > 2.0 * PI / (10.0 * nu.abs()) {
        return Err(Error::Resolution(format!(
            "s step {s_step} leaves fewer than 10 nodes per period at nu = {nu}"
        )));
    }
    Ok(())
}

/// `T_ν f(x,y,0) = ∫ f(x,y,s)·e^{−iνs} ds` at a single point.
pub fn h1_project_point<F: Fn(f64, f64, f64) -> C64>(f: &F, s_window: (f64, f64), nu: f64, x: f64, y: f64, s_step: f64) -> C64 {
    trapezoid(s_window.0, s_window.1, s_step, |s| f(x, y, s) * C64::from_polar(1.0, -nu * s))
}

/// Projection of an arbitrary function supported in `s ∈ s_window`.
pub fn h1_project_fn<F>(f: &F, s_window: (f64, f64), nu: f64, axis: &Grid1D, s_step: f64) -> Result<HeisenbergCovariant1>
where
    F: Fn(f64, f64, f64) -> C64 + Sync,
{
    check_oscillation(nu, s_step)?;
    let nodes = axis.nodes();
    let values: Vec<C64> = nodes
        .par_iter()
        .flat_map_iter(|&x| nodes.iter().map(move |&y| h1_project_point(f, s_window, nu, x, y, s_step)))
        .collect();
    HeisenbergCovariant1::new(nu, axis.clone(), values)
}

/// Projection of a product test function, with the `s` integral done by quadrature.
pub fn h1_project_with_step(f: &ProductFunction3, nu: f64, axis: &Grid1D, s_step: f64) -> Result<HeisenbergCovariant1> {
    let (lo, hi) = (axis.nodes()[0], axis.nodes()[axis.len() - 1]);
    for (name, part) in [("x", f.x), ("y", f.y)] {
        let (a, b) = part.window();
        if a < lo || b > hi {
            return Err(invalid(format!("{name} factor is not supported inside [{lo}, {hi}]")));
        }
    }
    h1_project_fn(&|x, y, s| f.eval(x, y, s), f.s.window(), nu, axis, s_step)
}

pub fn h1_project(f: &ProductFunction3, nu: f64, axis: &Grid1D) -> Result<HeisenbergCovariant1> {
    h1_project_with_step(f, nu, axis, H1_S_STEP)
}

fn require_lattice(axis: &Grid1D) -> Result<f64> {
    match axis.step() {
        Some(h) if axis.is_lattice() => Ok(h),
        _ => Err(Error::InvalidGrid("need a uniform symmetric axis with an even number of intervals".into())),
    }
}

/// `(ψ♮φ)(x,y) = ∫∫ ψ(x',y')·φ(x−x', y−y')·e^{−iνx'(y−y')} dx'dy'`,
/// evaluated at every node. Differences of nodes are nodes, and `φ` is
/// taken to vanish outside the square.
pub fn h1_convolve(psi: &HeisenbergCovariant1, phi: &HeisenbergCovariant1) -> Result<HeisenbergCovariant1> {
    if psi.nu != phi.nu {
        return Err(Error::IncompatibleContext(format!("nu {} vs {}", psi.nu, phi.nu)));
    }
    if psi.axis != phi.axis {
        return Err(Error::IncompatibleContext("slices sampled on different grids".into()));
    }
    let axis = &psi.axis;
    let h = require_lattice(axis)?;
    let n = axis.len();
    let half = (n / 2) as i64;
    let w = axis.weights();
    // e^{−iν h² p} for p = k'·(k − k'') over the reachable products.
    let pmax = 2 * half * half;
    let phase: Vec<C64> = (-pmax..=pmax).map(|p| C64::from_polar(1.0, -psi.nu * h * h * p as f64)).collect();
    let values: Vec<C64> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let (ki, kj) = (i as i64 - half, j as i64 - half);
            let mut acc = C64::new(0.0, 0.0);
            for ip in 0..n {
                let kip = ip as i64 - half;
                let Some(di) = axis.lattice_index(ki - kip) else { continue };
                for jp in 0..n {
                    let kjp = jp as i64 - half;
                    let Some(dj) = axis.lattice_index(kj - kjp) else { continue };
                    let p = kip * (kj - kjp);
                    acc += psi.at(ip, jp) * phi.at(di, dj) * phase[(p + pmax) as usize] * (w[ip] * w[jp]);
                }
            }
            acc
        })
        .collect();
    HeisenbergCovariant1::new(psi.nu, axis.clone(), values)
}

/// `ψ^♮(x,y) = e^{−iνxy}·conj ψ(−x,−y)`.
pub fn h1_involve(psi: &HeisenbergCovariant1) -> Result<HeisenbergCovariant1> {
    if !psi.axis.is_symmetric() {
        return Err(Error::InvalidGrid("involution needs an axis symmetric about 0".into()));
    }
    let nodes = psi.axis.nodes();
    let n = nodes.len();
    let values = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            C64::from_polar(1.0, -psi.nu * nodes[i] * nodes[j]) * psi.at(n - 1 - i, n - 1 - j).conj()
        })
        .collect();
    HeisenbergCovariant1::new(psi.nu, psi.axis.clone(), values)
}

/// Check points given as integer multiples of [`ORACLE_STEP`].
fn lattice_points(coarse: &Grid1D) -> Result<Vec<i64>> {
    coarse
        .nodes()
        .iter()
        .map(|&x| {
            let k = (x / ORACLE_STEP).round();
            if (k * ORACLE_STEP - x).abs() > 1e-12 {
                Err(Error::InvalidGrid(format!("check node {x} is off the oracle lattice")))
            } else {
                Ok(k as i64)
            }
        })
        .collect()
}

/// `I(c) = ∫∫ e^{−iνt}·f_s(s')·g_s(t − s' − c) ds' dt` on a global lattice.
fn fiber_integral(fs: &TestFunction, gs: &TestFunction, nu: f64, c: f64) -> C64 {
    let step = 0.25 * fs.width.min(gs.width);
    let (flo, fhi) = fs.window();
    let (glo, ghi) = gs.window();
    let mut acc = C64::new(0.0, 0.0);
    let m0 = (flo / step).ceil() as i64;
    let m1 = (fhi / step).floor() as i64;
    for m in m0..=m1 {
        let sp = m as f64 * step;
        let fv = fs.eval(sp);
        let t0 = ((sp + c + glo) / step).ceil() as i64;
        let t1 = ((sp + c + ghi) / step).floor() as i64;
        let mut inner = C64::new(0.0, 0.0);
        for q in t0..=t1 {
            let t = q as f64 * step;
            inner += C64::from_polar(1.0, -nu * t) * gs.eval(t - sp - c);
        }
        acc += fv * inner;
    }
    acc * (step * step)
}

/// `T_ν(f ∗ g)(x,y,0)` at lattice points `(X·h_o, Y·h_o)` by direct
/// quadrature of `∫_G f(z) g(z⁻¹w) dz`, with
/// `z⁻¹(x,y,s) = (x−x', y−y', s−s'−x'(y−y'))`.
pub fn h1_convolution_oracle(f: &ProductFunction3, g: &ProductFunction3, nu: f64, points: &[(i64, i64)]) -> Vec<C64> {
    let ho = ORACLE_STEP;
    let l = (H1_HALF_WIDTH / ho).round() as i64;
    let fxy: Vec<Vec<C64>> = (-l..=l)
        .map(|i| (-l..=l).map(|j| f.xy(i as f64 * ho, j as f64 * ho)).collect())
        .collect();
    let fmax = fxy.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    let gmax = g.x.amplitude.norm() * g.y.amplitude.norm();
    let cutoff = 1e-17 * fmax * gmax;
    let weight = |i: i64| if i.abs() == l { 0.5 * ho } else { ho };

    // Terms (x', y') with their coefficient and the key x'(y−y')/h_o².
    let terms: Vec<Vec<(C64, i64)>> = points
        .par_iter()
        .map(|&(px, py)| {
            let mut out = Vec::new();
            for i in -l..=l {
                for j in -l..=l {
                    let fv = fxy[(i + l) as usize][(j + l) as usize];
                    if fv.norm() * gmax <= cutoff {
                        continue;
                    }
                    let gv = g.xy((px - i) as f64 * ho, (py - j) as f64 * ho);
                    let coef = fv * gv * (weight(i) * weight(j));
                    if coef.norm() <= cutoff * ho * ho {
                        continue;
                    }
                    out.push((coef, i * (py - j)));
                }
            }
            out
        })
        .collect();
    let keys: HashSet<i64> = terms.iter().flatten().map(|t| t.1).collect();
    let keys: Vec<i64> = keys.into_iter().collect();
    let fiber: HashMap<i64, C64> = keys
        .par_iter()
        .map(|&k| (k, fiber_integral(&f.s, &g.s, nu, k as f64 * ho * ho)))
        .collect();
    terms
        .iter()
        .map(|ts| ts.iter().map(|(coef, k)| coef * fiber[k]).sum())
        .collect()
}

/// `T_ν(f^*)(x,y,0) = ∫ conj f(−x,−y,−s+xy)·e^{−iνs} ds` for `ℍ¹`, which is unimodular.
pub fn h1_involution_oracle(f: &ProductFunction3, nu: f64, points: &[(f64, f64)]) -> Vec<C64> {
    let step = f.s.width / 40.0;
    let (lo, hi) = f.s.window();
    points
        .iter()
        .map(|&(x, y)| {
            let (a, b) = (x * y - hi, x * y - lo);
            trapezoid(a, b, step, |s| {
                let z = h1_inv((x, y, s));
                f.eval(z.0, z.1, z.2).conj() * C64::from_polar(1.0, -nu * s)
            })
        })
        .collect()
}

/// Random Gaussian product fixture with centres in `±0.5`.
pub fn h1_fixture<R: Rng + ?Sized>(rng: &mut R) -> ProductFunction3 {
    let mut part = |lo: f64, hi: f64| {
        let amp = C64::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(-PI..PI));
        TestFunction::gaussian(rng.gen_range(-0.5..0.5), rng.gen_range(lo..hi), amp)
    };
    ProductFunction3 {
        x: part(0.5, 0.8),
        y: part(0.5, 0.8),
        s: part(0.4, 0.6),
    }
}

const FIXTURE_PAIRS: u64 = 2;

/// Refinement study of the `ℍ¹` identities at `[r/4, r/2, r]` intervals
/// per axis on `[−8, 8]`, for `ν ∈ {0, 1, 2.5}` and seeded Gaussian fixtures.
pub fn h1_study(reference: usize, seed: u64) -> Result<ContinuumReport> {
    let resolutions = study_resolutions(reference)?;
    let coarse = Grid1D::uniform(H1_HALF_WIDTH, resolutions[0])?;
    let lattice = lattice_points(&coarse)?;
    let check: Vec<(i64, i64)> = lattice.iter().flat_map(|&x| lattice.iter().map(move |&y| (x, y))).collect();
    let check_xy: Vec<(f64, f64)> = check
        .iter()
        .map(|&(x, y)| (x as f64 * ORACLE_STEP, y as f64 * ORACLE_STEP))
        .collect();

    struct Case {
        f: ProductFunction3,
        g: ProductFunction3,
        nu: f64,
        conv: Vec<C64>,
        inv_f: Vec<C64>,
    }
    let mut cases = Vec::new();
    for k in 0..FIXTURE_PAIRS {
        let mut rng = substream(seed, "h1-fixture", k);
        let f = h1_fixture(&mut rng);
        let g = h1_fixture(&mut rng);
        for nu in H1_NUS {
            cases.push(Case {
                f,
                g,
                nu,
                conv: h1_convolution_oracle(&f, &g, nu, &check),
                inv_f: h1_involution_oracle(&f, nu, &check_xy),
            });
        }
    }

    let mut report = ContinuumReport::new("H1", seed, &resolutions);
    let mut refine = 0.0f64;
    for &res in &resolutions {
        let axis = Grid1D::uniform(H1_HALF_WIDTH, res)?;
        let stride = res / resolutions[0];
        let n = axis.len();
        let on_check = |v: &HeisenbergCovariant1| -> Vec<C64> {
            (0..coarse.len())
                .flat_map(|a| (0..coarse.len()).map(move |b| (a * stride, b * stride)))
                .map(|(i, j)| v.at(i, j))
                .collect()
        };
        let (mut hom, mut inv, mut anti, mut invol, mut norm, mut interp) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for c in &cases {
            let psi = h1_project(&c.f, c.nu, &axis)?;
            let phi = h1_project(&c.g, c.nu, &axis)?;
            let conv = h1_convolve(&psi, &phi)?;
            hom = hom.max(max_abs(&on_check(&conv), &c.conv));
            let psi_inv = h1_involve(&psi)?;
            inv = inv.max(max_abs(&on_check(&psi_inv), &c.inv_f));
            let lhs = h1_involve(&conv)?;
            let rhs = h1_convolve(&h1_involve(&phi)?, &psi_inv)?;
            anti = anti.max(max_abs(&on_check(&lhs), &on_check(&rhs)));
            invol = invol.max(max_abs(h1_involve(&psi_inv)?.values(), psi.values()));
            norm = norm.max(conv.norm1() - psi.norm1() * phi.norm1());
            // Bilinear interpolation error at cell centres.
            let fun = |x: f64, y: f64, s: f64| c.f.eval(x, y, s);
            let h = axis.step().unwrap_or(0.0);
            for i in 0..n - 1 {
                for j in 0..n - 1 {
                    let (x, y) = (axis.nodes()[i] + 0.5 * h, axis.nodes()[j] + 0.5 * h);
                    let exact = h1_project_point(&fun, c.f.s.window(), c.nu, x, y, H1_S_STEP);
                    interp = interp.max((psi.slice(x, y) - exact).norm());
                }
            }
            if res == reference {
                let fine = h1_project_with_step(&c.f, c.nu, &axis, 0.5 * H1_S_STEP)?;
                refine = refine.max(max_abs(fine.values(), psi.values()));
            }
        }
        report.push_row("homomorphism", res, hom);
        report.push_row("involution", res, inv);
        report.push_row("anti_homomorphism", res, anti);
        report.push_row("involutive", res, invol);
        report.push_row("norm_bound", res, norm.max(0.0));
        report.push_row("interpolation", res, interp);
    }
    let trials = cases.len();
    report.check_reference("homomorphism", "T(f*g) = T(f) # T(g)", trials, REFERENCE_TOL);
    report.check_reference("involution", "T(f^*) = T(f)^#", trials, REFERENCE_TOL);
    report.check_reference("anti_homomorphism", "(psi # phi)^# = phi^# # psi^#", trials, REFERENCE_TOL);
    report.check_reference("involutive", "psi^#^# = psi", trials, 1e-8);
    report.check_reference("norm_bound", "||psi # phi||_1 <= ||psi||_1 ||phi||_1", trials, EXACT_TOL);
    report.push_row("projection_refinement", reference, refine);
    report.check_reference("projection_refinement", "halving the s step moves T(f) by at most 1e-8", trials, 1e-8);
    // Bilinear interpolation is not a quadrature; its rows are reported but not tracked.
    report.check_refinement(&["homomorphism", "involution", "anti_homomorphism"]);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(c: f64, w: f64) -> TestFunction {
        TestFunction::gaussian(c, w, C64::new(1.0, 0.0))
    }

    fn sample() -> ProductFunction3 {
        ProductFunction3 {
            x: TestFunction::gaussian(0.2, 0.6, C64::new(0.8, 0.3)),
            y: TestFunction::gaussian(-0.1, 0.7, C64::new(1.1, -0.2)),
            s: TestFunction::gaussian(0.3, 0.5, C64::new(0.9, 0.1)),
        }
    }

    #[test]
    fn group_law() {
        let a = (0.3, -1.2, 0.7);
        let b = (2.0, 0.5, -0.4);
        let c = (-0.6, 0.9, 1.3);
        let l = h1_mul(h1_mul(a, b), c);
        let r = h1_mul(a, h1_mul(b, c));
        assert!((l.0 - r.0).abs() + (l.1 - r.1).abs() + (l.2 - r.2).abs() < 1e-14);
        let e = h1_mul(a, h1_inv(a));
        assert!(e.0.abs() + e.1.abs() + e.2.abs() < 1e-15);
    }

    #[test]
    fn gaussian_fiber_closed_form() {
        // e^{−a s²} integrates against e^{−iνs} to √(π/a)·e^{−ν²/4a}.
        let a: f64 = 2.0;
        let f = ProductFunction3 {
            x: gauss(0.0, 0.6),
            y: gauss(0.3, 0.7),
            s: gauss(0.0, (1.0 / (2.0 * a)).sqrt()),
        };
        let axis = Grid1D::uniform(8.0, 16).unwrap();
        for nu in [0.0, 1.0, 2.5] {
            let psi = h1_project(&f, nu, &axis).unwrap();
            let fac = (PI / a).sqrt() * (-nu * nu / (4.0 * a)).exp();
            for (i, &x) in axis.nodes().iter().enumerate() {
                for (j, &y) in axis.nodes().iter().enumerate() {
                    let want = f.xy(x, y) * fac;
                    assert!((psi.at(i, j) - want).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn projection_is_linear_and_covariant() {
        let f = sample();
        let mut g = sample();
        g.s.center = -0.4;
        let axis = Grid1D::uniform(8.0, 16).unwrap();
        let sum = |x, y, s| f.eval(x, y, s) + g.eval(x, y, s) * 2.0;
        let lhs = h1_project_fn(&sum, (-6.0, 6.0), 1.0, &axis, H1_S_STEP).unwrap();
        let a = h1_project(&f, 1.0, &axis).unwrap();
        let b = h1_project(&g, 1.0, &axis).unwrap();
        let rhs: Vec<C64> = a.values().iter().zip(b.values()).map(|(u, v)| u + v * 2.0).collect();
        assert!(max_abs(lhs.values(), &rhs) < 1e-12);
        let v = a.eval(0.5, -1.0, 0.0);
        assert!((a.eval(0.5, -1.0, 0.8) - C64::from_polar(1.0, 0.8) * v).norm() < 1e-15);
    }

    #[test]
    fn nu_zero_is_plain_convolution() {
        let axis = Grid1D::uniform(8.0, 16).unwrap();
        let f = sample();
        let psi = h1_project(&f, 0.0, &axis).unwrap();
        let conv = h1_convolve(&psi, &psi).unwrap();
        let n = axis.len();
        let w = axis.weights();
        let (i, j) = (9usize, 6usize);
        let mut want = C64::new(0.0, 0.0);
        for a in 0..n {
            for b in 0..n {
                // Node coordinates are k·h with k = index − n/2, so index differences shift by n/2.
                let di = (i + n / 2).checked_sub(a).filter(|&v| v < n);
                let dj = (j + n / 2).checked_sub(b).filter(|&v| v < n);
                if let (Some(di), Some(dj)) = (di, dj) {
                    want += psi.at(a, b) * psi.at(di, dj) * w[a] * w[b];
                }
            }
        }
        assert!((conv.at(i, j) - want).norm() < 1e-12);
    }

    #[test]
    fn involution_laws_on_nodes() {
        let axis = Grid1D::uniform(8.0, 16).unwrap();
        let psi = h1_project(&sample(), 2.5, &axis).unwrap();
        let back = h1_involve(&h1_involve(&psi).unwrap()).unwrap();
        assert!(max_abs(back.values(), psi.values()) < 1e-15);
        let real_even = ProductFunction3 {
            x: gauss(0.0, 0.6),
            y: gauss(0.0, 0.6),
            s: gauss(0.0, 0.5),
        };
        let r = h1_project(&real_even, 0.0, &axis).unwrap();
        assert!(max_abs(h1_involve(&r).unwrap().values(), r.values()) < 1e-15);
        let skew = Grid1D::from_coords(GridKind::Additive, vec![-1.0, 0.0, 2.0]).unwrap();
        let bad = HeisenbergCovariant1::new(0.0, skew, vec![C64::new(1.0, 0.0); 9]).unwrap();
        assert!(matches!(h1_involve(&bad), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn mismatches_and_resolution() {
        let axis = Grid1D::uniform(8.0, 16).unwrap();
        let f = sample();
        let a = h1_project(&f, 1.0, &axis).unwrap();
        let b = h1_project(&f, 2.5, &axis).unwrap();
        assert!(matches!(h1_convolve(&a, &b), Err(Error::IncompatibleContext(_))));
        let c = h1_project(&f, 1.0, &Grid1D::uniform(8.0, 32).unwrap()).unwrap();
        assert!(matches!(h1_convolve(&a, &c), Err(Error::IncompatibleContext(_))));
        assert!(matches!(h1_project(&f, 20.0, &axis), Err(Error::Resolution(_))));
        let wide = ProductFunction3 { x: gauss(0.0, 1.0), ..f };
        assert!(h1_project(&wide, 0.0, &axis).is_err());
    }

    #[test]
    fn bilinear_reproduces_nodes() {
        let axis = Grid1D::uniform(8.0, 16).unwrap();
        let psi = h1_project(&sample(), 1.0, &axis).unwrap();
        assert_eq!(psi.slice(axis.nodes()[3], axis.nodes()[11]), psi.at(3, 11));
        assert_eq!(psi.slice(9.0, 0.0), C64::new(0.0, 0.0));
    }

    #[test]
    fn oracle_agrees_with_fine_grid_at_origin() {
        let f = sample();
        let mut g = sample();
        g.x.center = -0.3;
        let nu = 1.0;
        let oracle = h1_convolution_oracle(&f, &g, nu, &[(0, 0), (8, -8)]);
        let axis = Grid1D::uniform(8.0, 64).unwrap();
        let conv = h1_convolve(&h1_project(&f, nu, &axis).unwrap(), &h1_project(&g, nu, &axis).unwrap()).unwrap();
        assert!((conv.at(32, 32) - oracle[0]).norm() < 1e-6, "{} vs {}", conv.at(32, 32), oracle[0]);
        assert!((conv.at(36, 28) - oracle[1]).norm() < 1e-6);
    }
}
