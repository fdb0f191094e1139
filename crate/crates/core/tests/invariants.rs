use bottlab_core::degree::{certifies, jacobian_sign_density, DEFAULT_H};
use bottlab_core::linalg::{
    is_special_unitary, is_symplectic, random_special_unitary, random_symplectic, ComplexMatrix,
    SymplecticConvention,
};
use bottlab_core::maps::{bott, eta_cross, eta_n, zeta, SphereMap, UnitarySphereMap};
use bottlab_core::sphere::{sample_point, tangent_frame, SpherePoint, StereoChart};
use proptest::prelude::*;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `x ↦ U x` on S^{2n−1} ⊂ ℂⁿ.
fn unitary_action(u: ComplexMatrix) -> SphereMap {
    let n = u.rows();
    SphereMap::new("unitary", 2 * n - 1, 2 * n - 1, move |x, out| {
        let z = bottlab_core::ComplexVector::from_reals(x);
        out.copy_from_slice(&u.mat_vec(&z).to_reals());
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frames_are_orthonormal_and_oriented(m in 1usize..9, seed in any::<u64>(), idx in 0u64..1000) {
        let x = sample_point(m, seed, idx);
        let f = tangent_frame(&x);
        for i in 0..m {
            prop_assert!(dot(f.vector(i), x.coords()).abs() < 1e-12);
            for j in 0..m {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot(f.vector(i), f.vector(j)) - want).abs() < 1e-12);
            }
        }
        prop_assert!((f.orientation() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn stereographic_round_trip(m in 1usize..8, seed in any::<u64>()) {
        let pole = sample_point(m, seed, 0);
        let x = sample_point(m, seed, 1);
        let chart = StereoChart::new(pole.coords());
        let u = chart.project(x.coords()).unwrap();
        let back = chart.lift(&u);
        prop_assert!(back.iter().zip(x.coords()).all(|(a, b)| (a - b).abs() < 1e-9));
    }

    #[test]
    fn bott_of_unitary_constant_is_special_unitary(n in 1usize..4, r in 1usize..5, seed in any::<u64>()) {
        let theta = UnitarySphereMap::constant("c", r, random_special_unitary(n, seed));
        let b = bott(&theta);
        let x = sample_point(r + 2, seed, 3);
        prop_assert!(is_special_unitary(&b.eval(&x), 1e-12).unwrap().member);
    }

    #[test]
    fn eta_is_equivariant(seed in any::<u64>()) {
        let b = random_special_unitary(3, seed);
        let x = sample_point(5, seed, 0);
        let bx = SpherePoint::from_complex(b.mat_vec(&x.complex()).as_slice()).unwrap();
        let eta = eta_cross();
        let rhs = &(&b * &eta.eval(&x)) * &b.transpose();
        prop_assert!(eta.eval(&bx).distance(&rhs) < 1e-12);
    }

    #[test]
    fn zeta_commutes_with_conjugation(k in 1usize..5, seed in any::<u64>()) {
        let z = zeta(k);
        let x = sample_point(2 * k - 1, seed, 0);
        let xbar: Vec<f64> = x.coords().iter().enumerate().map(|(i, v)| if i % 2 == 1 { -v } else { *v }).collect();
        prop_assert!(z.eval_coords(&xbar).distance(&z.eval_coords(x.coords()).conj()) < 1e-12);
    }

    #[test]
    fn eta_n_values_are_special_unitary(n in 2usize..6, seed in any::<u64>()) {
        let e = eta_n(n).unwrap();
        let x = sample_point(2 * n - 1, seed, 0);
        prop_assert!(is_special_unitary(&e.eval(&x), 1e-10).unwrap().member);
    }

    #[test]
    fn symplectic_conventions_agree(m in 1usize..5, seed in any::<u64>()) {
        let a = random_symplectic(m, SymplecticConvention::Interleaved, seed);
        prop_assert!(is_symplectic(&a, SymplecticConvention::Interleaved, 1e-12).unwrap().member);
        let b = bottlab_core::linalg::convert_convention(&a, SymplecticConvention::Interleaved);
        prop_assert!(is_symplectic(&b, SymplecticConvention::Split, 1e-12).unwrap().member);
    }

    #[test]
    fn unitary_maps_preserve_orientation(n in 1usize..5, seed in any::<u64>()) {
        let f = unitary_action(random_special_unitary(n, seed));
        let x = sample_point(2 * n - 1, seed, 7);
        let d = jacobian_sign_density(&f, &x, DEFAULT_H).unwrap();
        prop_assert!((d - 1.0).abs() < 1e-6);
    }

    #[test]
    fn certification_respects_the_absolute_cap(k in -50i64..50, off in 0.2f64..0.5, se in 0.0f64..10.0) {
        prop_assert!(!certifies(k as f64 + off, se));
        prop_assert!(certifies(k as f64, se));
    }
}

#[test]
fn antipodal_density_sign_alternates_with_dimension() {
    for m in 1..8 {
        let x = sample_point(m, 5, 0);
        let d = jacobian_sign_density(&SphereMap::antipodal(m), &x, DEFAULT_H).unwrap();
        let want = if m % 2 == 1 { 1.0 } else { -1.0 };
        assert!((d - want).abs() < 1e-6, "m = {m}: {d}");
    }
}
