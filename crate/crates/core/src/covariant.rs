//! Covariant functions of an invariant character and their algebra.
//!
//! A ξ-covariant function satisfies `ψ(xs) = ξ(s)ψ(x)` for `s ∈ N`, so it is
//! determined by its values on a coset transversal. All operations below work
//! on those transversal values; full evaluation is
//! `ψ(x) = ξ(r⁻¹x)·values[xN]` with `r` the representative of `xN`.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::characters::{invariant_characters, is_invariant, Character};
use crate::error::{invalid, Error, Result};
use crate::group::{group_convolve, group_involve, l1_norm, left_translate, max_abs_diff, periodize, weil_residual, FiniteGroup, Quotient, Subgroup};
use crate::report::{CharacterDescriptor, PropertyRecord, SubgroupDescriptor, VerificationReport, REPORT_VERSION};
use crate::rng::{random_complex, substream};
use crate::C64;

/// Tolerance for identities that hold exactly up to rounding.
pub const EXACT_TOL: f64 = 1e-12;
/// Default tolerance for identities involving longer sums.
pub const DEFAULT_TOL: f64 = 1e-9;

const ZERO: C64 = C64::new(0.0, 0.0);

/// `G`, a normal subgroup `N`, the quotient and an invariant character `ξ`.
#[derive(Debug)]
pub struct CovariantContext {
    quotient: Quotient,
    xi: Character,
    /// `ξ(r⁻¹x)` for every `x ∈ G`.
    fiber: Vec<C64>,
}

impl CovariantContext {
    /// Fails unless `ξ` is a character of the quotient's normal subgroup and
    /// is fixed by conjugation with every element of `G`.
    pub fn new(quotient: Quotient, xi: Character) -> Result<Arc<Self>> {
        if xi.domain() != quotient.normal() {
            return Err(Error::IncompatibleContext("character lives on a different subgroup".into()));
        }
        if !is_invariant(&xi) {
            return Err(Error::NotInvariant(quotient.group().label().to_string()));
        }
        Ok(Self::build(quotient, xi))
    }

    /// Skips the invariance check. Only meant for negative controls, where
    /// the covariant convolution is expected to stop being well defined.
    #[doc(hidden)]
    pub fn new_unchecked(quotient: Quotient, xi: Character) -> Arc<Self> {
        assert!(xi.domain() == quotient.normal(), "character lives on a different subgroup");
        Self::build(quotient, xi)
    }

    fn build(quotient: Quotient, xi: Character) -> Arc<Self> {
        let fiber = (0..quotient.group().order())
            .map(|x| xi.value(quotient.decompose(x).1))
            .collect();
        Arc::new(CovariantContext { quotient, xi, fiber })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.quotient.group()
    }

    pub fn normal(&self) -> &Subgroup {
        self.quotient.normal()
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    pub fn xi(&self) -> &Character {
        &self.xi
    }

    pub fn coset_count(&self) -> usize {
        self.quotient.coset_count()
    }

    /// The unit `e_ξ = T_ξ(δ_e)`: one on the coset `N`, zero elsewhere.
    pub fn unit(self: &Arc<Self>) -> CovariantFunction {
        let mut values = vec![ZERO; self.coset_count()];
        values[0] = C64::new(1.0, 0.0);
        CovariantFunction { ctx: Arc::clone(self), values }
    }

    pub fn zero(self: &Arc<Self>) -> CovariantFunction {
        CovariantFunction {
            ctx: Arc::clone(self),
            values: vec![ZERO; self.coset_count()],
        }
    }

    pub fn from_values(self: &Arc<Self>, values: Vec<C64>) -> Result<CovariantFunction> {
        if values.len() != self.coset_count() {
            return Err(invalid(format!(
                "{} values given for {} cosets",
                values.len(),
                self.coset_count()
            )));
        }
        Ok(CovariantFunction { ctx: Arc::clone(self), values })
    }

    pub fn random<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> CovariantFunction {
        CovariantFunction {
            ctx: Arc::clone(self),
            values: random_complex(rng, self.coset_count()),
        }
    }
}

/// One context per character of `Γ(G,N)`, in enumeration order.
pub fn contexts_for(normal: &Subgroup) -> Result<Vec<Arc<CovariantContext>>> {
    let quotient = Quotient::new(normal)?;
    invariant_characters(normal)?
        .characters()
        .iter()
        .map(|xi| CovariantContext::new(quotient.clone(), xi.clone()))
        .collect()
}

/// A ξ-covariant function stored on the transversal.
#[derive(Clone, Debug)]
pub struct CovariantFunction {
    ctx: Arc<CovariantContext>,
    values: Vec<C64>,
}

impl CovariantFunction {
    pub fn ctx(&self) -> &Arc<CovariantContext> {
        &self.ctx
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    #[inline]
    pub fn eval(&self, x: usize) -> C64 {
        self.ctx.fiber[x] * self.values[self.ctx.quotient.coset_of(x)]
    }

    /// Values at every element of `G`.
    pub fn eval_all(&self) -> Vec<C64> {
        (0..self.ctx.group().order()).map(|x| self.eval(x)).collect()
    }
}

fn same_ctx(a: &CovariantFunction, b: &CovariantFunction) -> Result<()> {
    if Arc::ptr_eq(&a.ctx, &b.ctx) {
        Ok(())
    } else {
        Err(Error::IncompatibleContext("covariant functions have different contexts".into()))
    }
}

/// `T_ξ(f)(x) = Σ_{s∈N} f(xs)·conj(ξ(s))`.
pub fn project(ctx: &Arc<CovariantContext>, f: &[C64]) -> Result<CovariantFunction> {
    let g = ctx.group();
    if f.len() != g.order() {
        return Err(invalid(format!("function has length {}, group order is {}", f.len(), g.order())));
    }
    let n = ctx.normal();
    let xi = ctx.xi().values();
    let values = ctx
        .quotient
        .transversal()
        .iter()
        .map(|&r| {
            n.members()
                .iter()
                .zip(xi)
                .map(|(&s, v)| f[g.op(r, s)] * v.conj())
                .sum()
        })
        .collect();
    Ok(CovariantFunction { ctx: Arc::clone(ctx), values })
}

/// `(ψ♮φ)(x) = Σ_{c ∈ G/N} ψ(r_c)·φ(r_c⁻¹x)`.
pub fn cov_convolve(psi: &CovariantFunction, phi: &CovariantFunction) -> Result<CovariantFunction> {
    same_ctx(psi, phi)?;
    let ctx = &psi.ctx;
    let g = ctx.group();
    let reps = ctx.quotient.transversal();
    let support: Vec<(usize, C64)> = psi
        .values
        .iter()
        .zip(reps)
        .filter(|(v, _)| **v != ZERO)
        .map(|(&v, &r)| (g.inv(r), v))
        .collect();
    let values = reps
        .par_iter()
        .map(|&x| support.iter().map(|&(r_inv, v)| v * phi.eval(g.op(r_inv, x))).sum())
        .collect();
    Ok(CovariantFunction { ctx: Arc::clone(ctx), values })
}

/// Full evaluation of `ψ♮φ` summed over an arbitrary choice of coset
/// representatives `reps[c] ∈ r_c·N`.
pub fn cov_convolve_with_reps(psi: &CovariantFunction, phi: &CovariantFunction, reps: &[usize]) -> Result<Vec<C64>> {
    same_ctx(psi, phi)?;
    let ctx = &psi.ctx;
    let q = &ctx.quotient;
    if reps.len() != q.coset_count() || reps.iter().enumerate().any(|(c, &r)| r >= q.group().order() || q.coset_of(r) != c) {
        return Err(invalid("representatives must list one element of each coset in order"));
    }
    let g = ctx.group();
    let terms: Vec<(usize, C64)> = reps.iter().map(|&r| (g.inv(r), psi.eval(r))).collect();
    Ok((0..g.order())
        .into_par_iter()
        .map(|x| terms.iter().map(|&(r_inv, v)| v * phi.eval(g.op(r_inv, x))).sum())
        .collect())
}

/// `ψ^♮(x) = conj(ψ(x⁻¹))`; the quotient modular factor is 1.
pub fn cov_involve(psi: &CovariantFunction) -> CovariantFunction {
    let ctx = &psi.ctx;
    let g = ctx.group();
    let values = ctx
        .quotient
        .transversal()
        .iter()
        .map(|&r| psi.eval(g.inv(r)).conj())
        .collect();
    CovariantFunction { ctx: Arc::clone(ctx), values }
}

/// `‖ψ‖_(p) = (Σ_c |ψ(r_c)|^p)^{1/p}`.
pub fn cov_norm(psi: &CovariantFunction, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(invalid(format!("norm exponent {p} is below 1")));
    }
    if p.is_infinite() {
        return Ok(psi.values.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    Ok(psi.values.iter().map(|v| v.norm().powf(p)).sum::<f64>().powf(1.0 / p))
}

/// `max_x |(ψ ∗_G φ)(x) − |N|·(ψ♮φ)(x)|`.
pub fn compact_consistency(psi: &CovariantFunction, phi: &CovariantFunction) -> Result<f64> {
    let g = psi.ctx.group();
    let lhs = group_convolve(g, &psi.eval_all(), &phi.eval_all())?;
    let n = psi.ctx.normal().len() as f64;
    let rhs: Vec<C64> = cov_convolve(psi, phi)?.eval_all().into_iter().map(|v| v * n).collect();
    Ok(max_abs_diff(&lhs, &rhs))
}

/// Residual of `T_ξ(L_k f) = conj(ξ(k))·T_ξ(f)` for `k ∈ N`.
pub fn verify_modulation(ctx: &Arc<CovariantContext>, f: &[C64], k: usize) -> Result<f64> {
    if !ctx.normal().contains(k) {
        return Err(invalid(format!("element {k} is not in N")));
    }
    let lhs = project(ctx, &left_translate(ctx.group(), k, f)?)?;
    let rhs = project(ctx, f)?;
    let phase = ctx.xi().value(k).conj();
    Ok(lhs
        .values
        .iter()
        .zip(&rhs.values)
        .map(|(a, b)| (a - phase * b).norm())
        .fold(0.0, f64::max))
}

/// How far `x' ↦ ψ(x')·φ(x'⁻¹x)` is from being constant on each coset
/// `x'N`, maximized over `x ∈ G`. Zero exactly when `♮` is well defined.
pub fn well_definedness_residual(psi: &CovariantFunction, phi: &CovariantFunction) -> Result<f64> {
    same_ctx(psi, phi)?;
    let ctx = &psi.ctx;
    let g = ctx.group();
    let n = ctx.normal();
    let worst = ctx
        .quotient
        .transversal()
        .par_iter()
        .map(|&r| {
            let base: Vec<C64> = (0..g.order()).map(|x| psi.eval(r) * phi.eval(g.op(g.inv(r), x))).collect();
            n.members()
                .iter()
                .map(|&s| {
                    let rs = g.op(r, s);
                    let rs_inv = g.inv(rs);
                    let a = psi.eval(rs);
                    (0..g.order())
                        .map(|x| (a * phi.eval(g.op(rs_inv, x)) - base[x]).norm())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

/// `max_{x,s} |ψ(xs) − ξ(s)ψ(x)|` and the same for `ψ(sx)`, for arbitrary
/// values on `G`.
pub fn covariance_residual(ctx: &CovariantContext, values: &[C64]) -> f64 {
    let g = ctx.group();
    let n = ctx.normal();
    let xi = ctx.xi().values();
    (0..g.order())
        .map(|x| {
            n.members()
                .iter()
                .zip(xi)
                .map(|(&s, &v)| {
                    let right = (values[g.op(x, s)] - v * values[x]).norm();
                    let left = (values[g.op(s, x)] - v * values[x]).norm();
                    right.max(left)
                })
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

fn transversal_diff(a: &CovariantFunction, b: &CovariantFunction) -> f64 {
    max_abs_diff(&a.values, &b.values)
}

/// Maximum that lets NaN through instead of silently dropping it.
fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// Knobs for [`run_verification`].
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    /// Tolerance for identities involving sums over the group.
    pub tolerance: f64,
    pub p_values: Vec<f64>,
    /// Label for `N` in the report.
    pub n_label: String,
    /// Position of `ξ` in the enumeration of `Γ(G,N)`, if known.
    pub xi_index: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            trials: 100,
            seed: 0,
            tolerance: DEFAULT_TOL,
            p_values: vec![1.0, 2.0, 3.0],
            n_label: "N".into(),
            xi_index: None,
        }
    }
}

struct Runner<'a> {
    seed: u64,
    out: &'a mut Vec<PropertyRecord>,
}

impl Runner<'_> {
    fn check<F>(&mut self, id: &str, anchor: &str, trials: usize, tol: f64, trial: F)
    where
        F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
    {
        let seed = self.seed;
        let worst = (0..trials as u64)
            .into_par_iter()
            .map(|t| trial(&mut substream(seed, id, t)))
            .reduce(|| 0.0, nan_max);
        self.out.push(PropertyRecord::new(id, anchor, trials, worst, tol));
    }
}

/// Runs the identity suite on one context. Results depend only on the
/// context and the options.
pub fn run_verification(ctx: &Arc<CovariantContext>, opts: &VerifyOptions) -> Result<VerificationReport> {
    if opts.trials == 0 {
        return Err(invalid("at least one trial is required"));
    }
    if !(opts.tolerance > 0.0) {
        return Err(invalid("tolerance must be positive"));
    }
    if let Some(p) = opts.p_values.iter().find(|&&p| !(p >= 1.0)) {
        return Err(invalid(format!("norm exponent {p} is below 1")));
    }
    let g = Arc::clone(ctx.group());
    let order = g.order();
    let n_size = ctx.normal().len();
    let tol = opts.tolerance;
    let trials = opts.trials;
    let rand_f = |rng: &mut ChaCha8Rng| random_complex(rng, order);
    let ok = |r: Result<f64>| r.unwrap_or(f64::NAN);

    let mut records = Vec::new();
    let mut run = Runner {
        seed: opts.seed,
        out: &mut records,
    };

    run.check("covariance", "T(f)(xs) = xi(s) T(f)(x) = T(f)(sx)", trials, tol, |rng| {
        let psi = project(ctx, &rand_f(rng)).unwrap();
        covariance_residual(ctx, &psi.eval_all())
    });
    run.check(
        "well_definedness",
        "x' -> psi(x') phi(x'^-1 x) is constant on each coset x'N",
        trials,
        tol,
        |rng| ok(well_definedness_residual(&ctx.random(rng), &ctx.random(rng))),
    );
    run.check(
        "representative_independence",
        "psi # phi is unchanged when summed over other coset representatives",
        trials,
        EXACT_TOL,
        |rng| {
            let (psi, phi) = (ctx.random(rng), ctx.random(rng));
            let members = ctx.normal().members();
            let reps: Vec<usize> = ctx
                .quotient()
                .transversal()
                .iter()
                .map(|&r| g.op(r, *members.choose(rng).unwrap()))
                .collect();
            ok(cov_convolve_with_reps(&psi, &phi, &reps).map(|v| {
                let fixed = cov_convolve(&psi, &phi).unwrap().eval_all();
                max_abs_diff(&v, &fixed)
            }))
        },
    );
    run.check("homomorphism", "T(f * g) = T(f) # T(g)", trials, tol, |rng| {
        let (f, h) = (rand_f(rng), rand_f(rng));
        let lhs = project(ctx, &group_convolve(&g, &f, &h).unwrap()).unwrap();
        let rhs = cov_convolve(&project(ctx, &f).unwrap(), &project(ctx, &h).unwrap()).unwrap();
        transversal_diff(&lhs, &rhs)
    });
    run.check("involution", "T(f^*) = T(f)^#", trials, tol, |rng| {
        let f = rand_f(rng);
        let lhs = project(ctx, &group_involve(&g, &f).unwrap()).unwrap();
        let rhs = cov_involve(&project(ctx, &f).unwrap());
        transversal_diff(&lhs, &rhs)
    });
    run.check("involutive", "(psi^#)^# = psi", trials, tol, |rng| {
        let psi = ctx.random(rng);
        transversal_diff(&cov_involve(&cov_involve(&psi)), &psi)
    });
    run.check("involution_isometry", "||psi^#||_(1) = ||psi||_(1)", trials, tol, |rng| {
        let psi = ctx.random(rng);
        (cov_norm(&cov_involve(&psi), 1.0).unwrap() - cov_norm(&psi, 1.0).unwrap()).abs()
    });
    run.check("anti_homomorphism", "(psi # phi)^# = phi^# # psi^#", trials, tol, |rng| {
        let (psi, phi) = (ctx.random(rng), ctx.random(rng));
        let lhs = cov_involve(&cov_convolve(&psi, &phi).unwrap());
        let rhs = cov_convolve(&cov_involve(&phi), &cov_involve(&psi)).unwrap();
        transversal_diff(&lhs, &rhs)
    });
    for &p in &opts.p_values {
        run.check(
            &format!("norm_inequality_p{p}"),
            "||psi # phi||_(p) <= ||psi||_(1) ||phi||_(p)",
            3 * trials,
            EXACT_TOL,
            |rng| {
                let (psi, phi) = (ctx.random(rng), ctx.random(rng));
                let lhs = cov_norm(&cov_convolve(&psi, &phi).unwrap(), p).unwrap();
                let rhs = cov_norm(&psi, 1.0).unwrap() * cov_norm(&phi, p).unwrap();
                (lhs - rhs).max(0.0)
            },
        );
    }
    run.check("compact_identity", "psi *_G phi = |N| (psi # phi)", trials, tol, |rng| {
        ok(compact_consistency(&ctx.random(rng), &ctx.random(rng)))
    });
    run.check("compact_closure", "psi *_G phi is again covariant", trials, tol, |rng| {
        let (psi, phi) = (ctx.random(rng), ctx.random(rng));
        let conv = group_convolve(&g, &psi.eval_all(), &phi.eval_all()).unwrap();
        covariance_residual(ctx, &conv)
    });
    run.check("associativity", "(psi # phi) # chi = psi # (phi # chi)", trials, EXACT_TOL, |rng| {
        let (a, b, c) = (ctx.random(rng), ctx.random(rng), ctx.random(rng));
        let lhs = cov_convolve(&cov_convolve(&a, &b).unwrap(), &c).unwrap();
        let rhs = cov_convolve(&a, &cov_convolve(&b, &c).unwrap()).unwrap();
        transversal_diff(&lhs, &rhs)
    });
    run.check("identity", "e # psi = psi = psi # e with e = T(delta_e)", trials, EXACT_TOL, |rng| {
        let psi = ctx.random(rng);
        let e = project(ctx, &delta(order, g.identity())).unwrap();
        let unit_gap = transversal_diff(&e, &ctx.unit());
        let left = transversal_diff(&cov_convolve(&e, &psi).unwrap(), &psi);
        let right = transversal_diff(&cov_convolve(&psi, &e).unwrap(), &psi);
        unit_gap.max(left).max(right)
    });
    run.check("modulation", "T(L_k f) = conj(xi(k)) T(f) for k in N", trials, EXACT_TOL, |rng| {
        let f = rand_f(rng);
        ctx.normal()
            .members()
            .iter()
            .map(|&k| ok(verify_modulation(ctx, &f, k)))
            .fold(0.0, nan_max)
    });
    run.check("contraction", "||T(f)||_(1) <= ||f||_1", trials, EXACT_TOL, |rng| {
        let f = rand_f(rng);
        (cov_norm(&project(ctx, &f).unwrap(), 1.0).unwrap() - l1_norm(&f)).max(0.0)
    });
    run.check(
        "weil",
        "sum_{G/N} sum_N f(xs) = sum_G f(x), residual relative to ||f||_1",
        trials,
        EXACT_TOL,
        |rng| {
            let f = rand_f(rng);
            ok(weil_residual(ctx.quotient(), &f)) / l1_norm(&f).max(f64::MIN_POSITIVE)
        },
    );
    run.check("surjectivity", "T(psi / |N|) = psi", trials, tol, |rng| {
        let psi = ctx.random(rng);
        let f: Vec<C64> = psi.eval_all().into_iter().map(|v| v / n_size as f64).collect();
        transversal_diff(&project(ctx, &f).unwrap(), &psi)
    });
    for &p in &opts.p_values {
        run.check(
            &format!("lp_norm_relation_p{p}"),
            "sum_G |psi|^p = |N| ||psi||_(p)^p, relative residual",
            trials,
            tol,
            |rng| {
                let psi = ctx.random(rng);
                let full: f64 = psi.eval_all().iter().map(|v| v.norm().powf(p)).sum();
                let reduced = n_size as f64 * cov_norm(&psi, p).unwrap().powf(p);
                (full - reduced).abs() / reduced.max(f64::MIN_POSITIVE)
            },
        );
    }
    if ctx.xi().is_trivial() {
        run.check(
            "trivial_character_quotient",
            "for trivial xi: psi # phi = convolution on G/N and T = T_N",
            trials,
            tol,
            |rng| {
                let (psi, phi) = (ctx.random(rng), ctx.random(rng));
                let q = ctx.quotient();
                let quotient_conv: Vec<C64> = (0..q.coset_count())
                    .map(|c2| {
                        (0..q.coset_count())
                            .map(|c| psi.values[c] * phi.values[q.coset_op(q.coset_inv(c), c2)])
                            .sum()
                    })
                    .collect();
                let conv_gap = max_abs_diff(&cov_convolve(&psi, &phi).unwrap().values, &quotient_conv);
                let f = rand_f(rng);
                let proj_gap = max_abs_diff(&project(ctx, &f).unwrap().values, &periodize(q, &f).unwrap());
                conv_gap.max(proj_gap)
            },
        );
    }

    let xi = ctx.xi();
    Ok(VerificationReport {
        version: REPORT_VERSION.into(),
        group: g.label().to_string(),
        n: SubgroupDescriptor {
            label: opts.n_label.clone(),
            order: n_size,
        },
        xi: CharacterDescriptor {
            index: opts.xi_index,
            phases: xi.phases().iter().map(|p| p.to_string()).collect(),
        },
        seed: opts.seed,
        properties: records,
    })
}

fn delta(n: usize, at: usize) -> Vec<C64> {
    let mut v = vec![ZERO; n];
    v[at] = C64::new(1.0, 0.0);
    v
}
