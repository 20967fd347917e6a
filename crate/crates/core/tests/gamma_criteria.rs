//! Brute-force `Γ(G,N)` against the semi-direct criteria.

use std::sync::Arc;

use covhalg_core::characters::invariant_characters_semidirect_k;
use covhalg_core::{
    enumerate_characters, invariant_characters, invariant_characters_semidirect, make_finite_heisenberg, semidirect,
    Action, FiniteGroup, Subgroup,
};

#[test]
fn heisenberg_sets_agree() {
    for m in [2usize, 3, 4, 5, 8] {
        let sd = make_finite_heisenberg(m).unwrap();
        let k = Subgroup::whole(Arc::clone(sd.k()));
        let brute = invariant_characters(&sd.k_subgroup()).unwrap();
        let crit = invariant_characters_semidirect(&sd, &k).unwrap();
        assert!(brute.same_set(&crit), "M={m}");
        assert!(brute.same_set(&invariant_characters_semidirect_k(&sd).unwrap()));
        assert_eq!(brute.len(), m);

        let centre = Subgroup::center(Arc::clone(sd.group()));
        let all = enumerate_characters(&centre).unwrap();
        assert!(invariant_characters(&centre).unwrap().same_set(&all));
        assert_eq!(all.len(), m);
    }
}

#[test]
fn symmetric_three_as_semidirect() {
    // ℤ₂ acting on ℤ₃ by inversion is S₃; only the trivial character of ℤ₃ survives.
    let h = Arc::new(FiniteGroup::cyclic(2).unwrap());
    let k = Arc::new(FiniteGroup::cyclic(3).unwrap());
    let action = Action::new(h, Arc::clone(&k), vec![vec![0, 1, 2], vec![0, 2, 1]]).unwrap();
    let sd = semidirect(action).unwrap();
    assert!(!sd.group().is_abelian());
    let brute = invariant_characters(&sd.k_subgroup()).unwrap();
    let crit = invariant_characters_semidirect(&sd, &Subgroup::whole(k)).unwrap();
    assert!(brute.same_set(&crit));
    assert_eq!(brute.len(), 1);
    assert!(brute.characters()[0].is_trivial());
}

#[test]
fn proper_subgroup_of_k() {
    // ℤ₂ swapping the factors of ℤ₂ × ℤ₂; N = the diagonal is θ-invariant.
    let h = Arc::new(FiniteGroup::cyclic(2).unwrap());
    let k = Arc::new(FiniteGroup::abelian(&[2, 2]).unwrap());
    let action = Action::new(h, Arc::clone(&k), vec![vec![0, 1, 2, 3], vec![0, 2, 1, 3]]).unwrap();
    let sd = semidirect(action).unwrap();
    let diag = Subgroup::new(Arc::clone(&k), [0, 3]).unwrap();
    let crit = invariant_characters_semidirect(&sd, &diag).unwrap();
    let brute = invariant_characters(&sd.embed(&diag).unwrap()).unwrap();
    assert!(brute.same_set(&crit));
    assert_eq!(brute.len(), 2);
    let whole = invariant_characters(&sd.k_subgroup()).unwrap();
    assert!(whole.same_set(&invariant_characters_semidirect(&sd, &Subgroup::whole(k)).unwrap()));
    assert_eq!(whole.len(), 2);
}
