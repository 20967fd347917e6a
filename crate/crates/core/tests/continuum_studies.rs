use covhalg_core::continuum::affine::affine_study;
use covhalg_core::continuum::heisenberg::h1_study;
use covhalg_core::continuum::ContinuumReport;

fn failures(r: &ContinuumReport) -> Vec<String> {
    r.properties
        .iter()
        .filter(|p| !p.pass)
        .map(|p| format!("{} {:e} > {:e}", p.id, p.max_residual, p.tolerance))
        .collect()
}

#[test]
fn heisenberg_study_passes_at_reference() {
    let r = h1_study(64, 0).unwrap();
    assert_eq!(r.resolutions, vec![16, 32, 64]);
    assert!(r.all_pass(), "{:?}", failures(&r));
    // The coarsest grid is visibly under-resolved, so refinement is doing work.
    assert!(r.residual("homomorphism", 16).unwrap() > 1e-3);
}

#[test]
fn affine_study_passes_at_reference() {
    let r = affine_study(256, 0).unwrap();
    assert!(r.all_pass(), "{:?}", failures(&r));
    assert!(r.residual("homomorphism", 64).unwrap() > 1e-5);
    assert!(r.property("weil").unwrap().max_residual < 1e-8);
}

#[test]
fn studies_are_deterministic() {
    assert_eq!(affine_study(64, 5).unwrap(), affine_study(64, 5).unwrap());
}
