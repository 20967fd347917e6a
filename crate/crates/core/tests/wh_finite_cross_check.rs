//! The finite Heisenberg group `H(ℤ_M)` is the subgroup of `𝕎(ℤ_M)` with
//! `z` restricted to `M`-th roots of unity. With `N` its centre and
//! `ξ_n(z) = e^{2πinz/M}`, the generic covariant algebra must agree with
//! the closed forms for `N = 𝕋` and degree `n`.

use std::sync::Arc;

use covhalg_core::characters::root_of_unity;
use covhalg_core::covariant::{cov_convolve, cov_involve, CovariantContext};
use covhalg_core::semidirect::heisenberg_element;
use covhalg_core::weyl_heisenberg::{wh_center_convolve, wh_center_involve, WhCenterCovariant};
use covhalg_core::{make_finite_heisenberg, Character, Quotient, Subgroup};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn setup(m: usize, n: usize) -> (Arc<CovariantContext>, Vec<(usize, usize)>) {
    let sd = make_finite_heisenberg(m).unwrap();
    let g = Arc::clone(sd.group());
    let centre = Subgroup::new(Arc::clone(&g), (0..m).map(|z| heisenberg_element(m, 0, 0, z))).unwrap();
    assert!(centre.is_central());
    let numer = centre
        .members()
        .iter()
        .map(|&s| ((s % m) * n % m) as u64)
        .collect();
    let xi = Character::from_numerators(centre.clone(), numer).unwrap();
    let q = Quotient::new(&centre).unwrap();
    // (h, ω) coordinates of each coset representative.
    let coords = q
        .transversal()
        .iter()
        .map(|&r| (r / (m * m), (r / m) % m))
        .collect();
    (CovariantContext::new(q, xi).unwrap(), coords)
}

#[test]
fn generic_algebra_matches_centre_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for m in [2usize, 3, 4, 5] {
        for n in 0..m {
            let (ctx, coords) = setup(m, n);
            let a = WhCenterCovariant::random(m, n as i64, &mut rng);
            let b = WhCenterCovariant::random(m, n as i64, &mut rng);
            let lift = |w: &WhCenterCovariant| ctx.from_values(coords.iter().map(|&(h, o)| w.at(h, o)).collect()).unwrap();
            let (fa, fb) = (lift(&a), lift(&b));

            let closed = wh_center_convolve(&a, &b).unwrap();
            let generic = cov_convolve(&fa, &fb).unwrap();
            for (c, &(h, o)) in coords.iter().enumerate() {
                assert!((generic.values()[c] - closed.at(h, o)).norm() < 1e-12, "M={m} n={n} ({h},{o})");
            }
            let closed = wh_center_involve(&a);
            let generic = cov_involve(&fa);
            for (c, &(h, o)) in coords.iter().enumerate() {
                assert!((generic.values()[c] - closed.at(h, o)).norm() < 1e-12);
            }
            // Off the transversal: ψ(h, ω, z) = zⁿ·ψ(h, ω, 1).
            for z in 0..m {
                let x = heisenberg_element(m, 1, m - 1, z);
                let want = a.eval(1, m - 1, root_of_unity(z as u64, m as u64));
                assert!((fa.eval(x) - want).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn transversal_is_the_zero_fibre() {
    let (ctx, coords) = setup(4, 1);
    assert_eq!(coords.len(), 16);
    for (c, &(h, o)) in coords.iter().enumerate() {
        assert_eq!(ctx.quotient().representative(c), heisenberg_element(4, h, o, 0));
    }
}
