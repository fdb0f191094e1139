use bottlab_core::degree::{degree_mc, degree_preimage, DEFAULT_H};
use bottlab_core::maps::{column, eta_cross, SphereMap};
use bottlab_core::sphere::sample_point;
use bottlab_core::Error;

fn agree(f: &SphereMap, seed: u64) -> (i64, i64, usize) {
    let m = f.domain_dim();
    let mc = degree_mc(f, 200_000, seed, DEFAULT_H).unwrap();
    assert!(mc.certified, "{}: {:?}", f.name(), mc);
    let target = sample_point(m, seed ^ 0xdead, 0);
    let pre = degree_preimage(f, &target, 400, seed, 1e-12).unwrap();
    (mc.rounded, pre.degree, pre.roots.len())
}

#[test]
fn oracle_matches_monte_carlo_on_linear_maps() {
    for f in [
        SphereMap::identity(3),
        SphereMap::antipodal(2),
        SphereMap::antipodal(5),
        SphereMap::complex_conjugation(1),
        SphereMap::complex_conjugation(2),
        SphereMap::complex_conjugation(3),
    ] {
        let (mc, pre, roots) = agree(&f, 3);
        assert_eq!(mc, pre, "{}", f.name());
        assert_eq!(roots, 1, "{}", f.name());
    }
}

#[test]
fn eta_columns_have_two_roots_of_equal_sign() {
    let eta = eta_cross();
    for j in 1..=3 {
        let f = column(&eta, j).unwrap();
        let (mc, pre, roots) = agree(&f, 11 + j as u64);
        assert_eq!(mc, pre);
        assert_eq!(pre.abs(), 2);
        assert_eq!(roots, 2);
    }
}

#[test]
fn constant_map_is_never_regular() {
    let f = SphereMap::new("const", 2, 2, |_, out| out.copy_from_slice(&[0.0, 0.0, 1.0]));
    let target = sample_point(2, 1, 0);
    // no preimage at all for a generic target: both targets count zero
    let r = degree_preimage(&f, &target, 20, 1, 1e-12).unwrap();
    assert_eq!(r.degree, 0);
    assert!(r.roots.is_empty());
}

#[test]
fn folded_map_hits_a_critical_value() {
    // (x, y, z) ↦ (x, y, |z|) folds S² onto the upper hemisphere; the equator is critical
    let f = SphereMap::new("fold", 2, 2, |x, out| out.copy_from_slice(&[x[0], x[1], x[2].abs()]));
    let target = bottlab_core::SpherePoint::new(&[1.0, 0.0, 0.0], bottlab_core::sphere::CoordView::Plain).unwrap();
    let err = degree_preimage(&f, &target, 50, 2, 1e-12).unwrap_err();
    assert!(
        matches!(err, Error::NonRegularTarget { .. } | Error::InsufficientStarts { .. }),
        "{err:?}"
    );
}
