//! Maps restricted to symplectic equivariance: φ′₁₂, φ⁽²⁾ and its reduction
//! to SU(2m−1), the ψ′ family, and symmetric maps pushed into Sp(n) by the
//! periodicity operator.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{
    convert_convention, is_symplectic, j_matrix, ComplexMatrix, ComplexVector,
    SymplecticConvention, C64, ONE,
};
use crate::sphere::{norm, sample_uniform, CoordView};

use super::stable::lundell_reduce;
use super::{bott, CylinderMap, TargetGroup, UnitarySphereMap};

const PROBE_SEED: u64 = 0x5e_1ec7;
const PROBE_POINTS: usize = 64;
/// Probe tolerance for symplectic-valued inputs and outputs.
pub const SYMPLECTIC_PROBE_TOL: f64 = 1e-9;

const POLE_RADIUS: f64 = 1e-150;

/// `z z̄ᵗ − J z̄ zᵗ J` with the interleaved `J`; the projector onto
/// span{z, J z̄} scaled by |z|².
fn quaternionic_projector(z: &[C64]) -> ComplexMatrix {
    let dim = z.len();
    let j = j_matrix(dim / 2, SymplecticConvention::Interleaved);
    let zv = ComplexVector::from_slice(z);
    let u = j.mat_vec(&zv.conj());
    let v = j.transpose().mat_vec(&zv);
    ComplexMatrix::from_fn(dim, dim, |a, b| z[a] * z[b].conj() - u[a] * v[b])
}

fn complex_slice(z: &[f64]) -> Vec<C64> {
    z.chunks_exact(2).map(|p| C64::new(p[0], p[1])).collect()
}

fn identity_plus(k: &ComplexMatrix, s: C64) -> ComplexMatrix {
    let mut m = k.scale(s);
    for i in 0..m.rows() {
        m[(i, i)] += ONE;
    }
    m
}

/// `diag(e^{−2it}, …)` with `e^{i(2m−2)t}` in slots `2k−1, 2k` (1-based `k`).
pub fn symplectic_phase_diagonal(m: usize, k: usize, t: f64) -> ComplexMatrix {
    let big = C64::from_polar(1.0, (2.0 * m as f64 - 2.0) * t);
    let small = C64::from_polar(1.0, -2.0 * t);
    let entries: Vec<C64> = (1..=2 * m)
        .map(|s| {
            if s == 2 * k - 1 || s == 2 * k {
                big
            } else {
                small
            }
        })
        .collect();
    ComplexMatrix::diag(&entries)
}

/// `A · diag(e^{i(2m−2)t}, e^{i(2m−2)t}, e^{−2it}, …) · A⁻¹`.
pub fn phi12_prime_conjugation(m: usize, a: &ComplexMatrix, t: f64) -> ComplexMatrix {
    &(a * &symplectic_phase_diagonal(m, 1, t)) * &a.adjoint()
}

/// Closed form `e^{−2it}(𝟙 + (e^{2mit} − 1)(z z̄ᵗ − J z̄ zᵗ J))` on
/// [0, π/m] × S^{4m−1}, where `z` is the first column of a symplectic matrix.
pub fn phi12_prime(m: usize) -> CylinderMap {
    CylinderMap::new(
        format!("phi12_prime.m={m}"),
        2 * m,
        PI / m as f64,
        2 * m,
        true,
        move |t, z| {
            let z = complex_slice(z);
            let k = quaternionic_projector(&z);
            let s = C64::from_polar(1.0, 2.0 * m as f64 * t) - ONE;
            identity_plus(&k, s).scale(C64::from_polar(1.0, -2.0 * t))
        },
    )
}

/// φ⁽²⁾ : S^{4m} → SU(2m), `(y, z) ↦ e^{−iπ(y+1)/m}(𝟙 − (1 + e^{iπy}) K(ẑ))`.
pub fn phi2_closed(m: usize) -> UnitarySphereMap {
    UnitarySphereMap::new(
        format!("phi2.m={m}"),
        4 * m,
        CoordView::RealComplex(2 * m),
        2 * m,
        TargetGroup::SU,
        format!("phi12_prime.m={m} factored through the suspension chart"),
        move |x| {
            let y = x[0];
            let phase = C64::from_polar(1.0, -PI * (y + 1.0) / m as f64);
            let r = norm(&x[1..]);
            if r < POLE_RADIUS {
                return ComplexMatrix::scalar(2 * m, phase);
            }
            let zhat: Vec<C64> = complex_slice(&x[1..]).into_iter().map(|c| c / r).collect();
            let k = quaternionic_projector(&zhat);
            identity_plus(&k, -(ONE + C64::from_polar(1.0, PI * y))).scale(phase)
        },
    )
}

/// `𝟙 − 2(1 − iy)⁻² (z z̄ᵗ − J z̄ zᵗ J)`, homotopic to φ⁽²⁾ in U(2m).
pub fn phi2_rational(m: usize) -> UnitarySphereMap {
    UnitarySphereMap::new(
        format!("phi2_rational.m={m}"),
        4 * m,
        CoordView::RealComplex(2 * m),
        2 * m,
        TargetGroup::U,
        "rational circle parametrization substituted into phi2",
        move |x| {
            let y = x[0];
            let z = complex_slice(&x[1..]);
            let k = quaternionic_projector(&z);
            let denom = (ONE - C64::new(0.0, y)) * (ONE - C64::new(0.0, y));
            identity_plus(&k, -C64::new(2.0, 0.0) / denom)
        },
    )
}

/// Signed permutation `Q` with `Q e_{2m−1} = e₂`, `Q e_{2m} = e₁` and det 1,
/// so `(Qᵗ M Q)_{2m−1, 2m} = M_{2,1}`.
pub fn corner_permutation(m: usize) -> ComplexMatrix {
    let dim = 2 * m;
    let mut q = ComplexMatrix::zeros(dim, dim);
    for col in 0..dim - 2 {
        q[(col + 2, col)] = ONE;
    }
    q[(1, dim - 2)] = ONE;
    q[(0, dim - 1)] = ONE;
    if q.det().expect("square").re < 0.0 {
        for i in 0..dim {
            q[(i, 0)] = -q[(i, 0)];
        }
    }
    q
}

/// φ⁽²⁾ conjugated so its vanishing (2,1) entry feeds the corner reduction,
/// then reduced: a map S^{4m} → SU(2m−1).
pub fn phi2_reduced(m: usize) -> Result<UnitarySphereMap> {
    let base = phi2_closed(m);
    let q = corner_permutation(m);
    let qt = q.transpose();
    let b = base.clone();
    let conjugated = UnitarySphereMap::new(
        format!("Qt.phi2.m={m}.Q"),
        base.domain_dim(),
        base.view(),
        2 * m,
        TargetGroup::SU,
        "phi2 conjugated by a signed permutation",
        move |x| &(&qt * &b.eval_coords(x)) * &q,
    );
    Ok(lundell_reduce(&conjugated, 1)?.renamed(
        format!("phi2_reduced.m={m}"),
        format!("phi2.m={m} deformed into SU({})", 2 * m - 1),
    ))
}

fn probe_symplectic(
    g: &UnitarySphereMap,
    convention: SymplecticConvention,
    tol: f64,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for x in sample_uniform(g.domain_dim(), PROBE_POINTS, PROBE_SEED) {
        let r = is_symplectic(&g.eval(&x), convention, tol)?;
        worst = worst.max(r.residual);
    }
    if worst > tol {
        return Err(Error::NotSymplectic { residual: worst });
    }
    Ok(worst)
}

/// `ψ′_k(t, z) = g(z) · D′_k(t) · g(z)⁻¹` for `g : S^{4m−1} → Sp(m)`
/// (interleaved convention).
pub fn psi_prime(m: usize, k: usize, g: &UnitarySphereMap) -> Result<CylinderMap> {
    if g.domain_dim() != 4 * m - 1 || g.target_size() != 2 * m {
        return Err(Error::DomainMismatch(format!(
            "expected a map S{}→Sp({m}), got {} {}",
            4 * m - 1,
            g.name(),
            g.signature()
        )));
    }
    if k == 0 || k > m {
        return Err(Error::OutOfRange {
            name: "k",
            value: k as f64,
            lo: 1.0,
            hi: m as f64,
        });
    }
    probe_symplectic(g, SymplecticConvention::Interleaved, SYMPLECTIC_PROBE_TOL)?;
    let gg = g.clone();
    Ok(CylinderMap::new(
        format!("psi_prime.m={m},k={k}[{}]", g.name()),
        2 * m,
        PI / m as f64,
        2 * m,
        true,
        move |t, z| {
            let a = gg.eval_coords(z);
            &(&a * &symplectic_phase_diagonal(m, k, t)) * &a.adjoint()
        },
    ))
}

/// `x ↦ θ(x)·θ(x)ᵗ`, a symmetric map.
pub fn cartan_symmetrize(theta: &UnitarySphereMap) -> UnitarySphereMap {
    let th = theta.clone();
    UnitarySphereMap::new(
        format!("sym({})", theta.name()),
        theta.domain_dim(),
        theta.view(),
        theta.target_size(),
        if theta.special() {
            TargetGroup::SU
        } else {
            TargetGroup::U
        },
        format!("{} times its transpose", theta.name()),
        move |x| {
            let v = th.eval_coords(x);
            &v * &v.transpose()
        },
    )
}

/// `B(θ·θᵗ)` for θ : S^{2k−1} → U(n) with odd `k ≤ n`; values are checked to
/// lie in Sp(n) (split convention) on probe points.
pub fn sp_candidate(k: usize, n: usize, theta: &UnitarySphereMap) -> Result<UnitarySphereMap> {
    if theta.domain_dim() != 2 * k - 1 || theta.target_size() != n {
        return Err(Error::DomainMismatch(format!(
            "expected a map S{}→U({n}), got {} {}",
            2 * k - 1,
            theta.name(),
            theta.signature()
        )));
    }
    if k % 2 == 0 || k > n {
        return Err(Error::OutOfRange {
            name: "k",
            value: k as f64,
            lo: 1.0,
            hi: n as f64,
        });
    }
    let map = bott(&cartan_symmetrize(theta))
        .renamed(
            format!("sp_candidate.k={k},n={n}[{}]", theta.name()),
            format!(
                "periodicity operator on {} times its transpose",
                theta.name()
            ),
        )
        .with_group(TargetGroup::Sp(SymplecticConvention::Split));
    probe_symplectic(&map, SymplecticConvention::Split, SYMPLECTIC_PROBE_TOL)?;
    Ok(map)
}

/// A smooth map S⁷ → Sp(2) (interleaved) for exercising the ψ′ identities.
///
/// Built as `B(θθᵗ)` from the unitary
/// θ(z) = [[a, −b̄], [b, ā]] with `a = cos(π|z₁|²) e^{iπ Re z₂}`,
/// `b = sin(π|z₁|²) e^{iπ Im z₃}`, then shuffled to the interleaved form.
/// It makes no generator claim.
pub fn sample_sp2_map() -> UnitarySphereMap {
    let theta = UnitarySphereMap::new(
        "sp_sample_seed",
        5,
        CoordView::Complex(3),
        2,
        TargetGroup::SU,
        "angle-parametrized SU(2) values",
        |x| {
            let alpha = PI * (x[0] * x[0] + x[1] * x[1]);
            let a = C64::from_polar(alpha.cos(), PI * x[2]);
            let b = C64::from_polar(alpha.sin(), PI * x[5]);
            ComplexMatrix::from_rows(&[&[a, -b.conj()], &[b, a.conj()]])
        },
    );
    let split = bott(&cartan_symmetrize(&theta));
    UnitarySphereMap::new(
        "sp_sample.m=2",
        7,
        CoordView::Complex(4),
        4,
        TargetGroup::Sp(SymplecticConvention::Interleaved),
        "B(θθᵗ) for an angle-parametrized θ, interleaved convention",
        move |x| convert_convention(&split.eval_coords(x), SymplecticConvention::Split),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{is_special_unitary, is_unitary, random_symplectic};
    use crate::maps::unstable::induced_sphere_map;
    use crate::maps::{eta_n, zeta};
    use crate::sphere::{sample_point, SpherePoint};

    fn t_sample(m: usize, i: u64) -> f64 {
        (PI / m as f64) * ((i as f64 * 0.754_877_666) % 1.0)
    }

    #[test]
    fn phi12_closed_form_matches_conjugation() {
        for m in 1..=3 {
            let f = phi12_prime(m);
            for seed in 0..200u64 {
                let a = random_symplectic(m, SymplecticConvention::Interleaved, seed);
                let z = SpherePoint::from_complex(a.column(0).as_slice()).unwrap();
                let t = t_sample(m, seed);
                assert!(f.eval(t, &z).distance(&phi12_prime_conjugation(m, &a, t)) < 1e-11);
            }
        }
    }

    #[test]
    fn m1_maps_are_constant_identity() {
        let f = phi12_prime(1);
        let g = phi2_closed(1);
        for i in 0..50u64 {
            let z = sample_point(3, 2, i);
            assert!(
                f.eval(t_sample(1, i), &z)
                    .distance(&ComplexMatrix::identity(2))
                    < 1e-14
            );
            let x = sample_point(4, 2, i)
                .with_view(CoordView::RealComplex(2))
                .unwrap();
            assert!(g.eval(&x).distance(&ComplexMatrix::identity(2)) < 1e-14);
        }
        let r = phi2_reduced(1).unwrap();
        let x = sample_point(4, 3, 3)
            .with_view(CoordView::RealComplex(2))
            .unwrap();
        assert!(r.eval(&x).distance(&ComplexMatrix::identity(1)) < 1e-14);
    }

    #[test]
    fn phi2_entry_vanishes_and_factorization_holds() {
        for m in 1..=3 {
            let f = phi2_closed(m);
            let induced = induced_sphere_map(&phi12_prime(m)).unwrap();
            for i in 0..200u64 {
                let x = sample_point(4 * m, 7, i)
                    .with_view(CoordView::RealComplex(2 * m))
                    .unwrap();
                let v = f.eval(&x);
                assert!(v[(1, 0)].norm() < 1e-12);
                assert!(is_special_unitary(&v, 1e-10).unwrap().member);
                assert!(induced.eval(&x).distance(&v) < 1e-12);
            }
        }
    }

    #[test]
    fn phi2_reduction_lands_in_su() {
        let r = phi2_reduced(2).unwrap();
        assert_eq!(r.target_size(), 3);
        for i in 0..300u64 {
            let x = sample_point(8, 8, i)
                .with_view(CoordView::RealComplex(4))
                .unwrap();
            assert!(is_special_unitary(&r.eval(&x), 1e-10).unwrap().member);
        }
        let mut south = vec![0.0; 9];
        south[0] = -1.0;
        let s = SpherePoint::new(&south, CoordView::RealComplex(4)).unwrap();
        assert!(r.eval(&s).distance(&ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn rational_form_is_unitary() {
        for m in 1..=3 {
            let f = phi2_rational(m);
            for i in 0..100u64 {
                let x = sample_point(4 * m, 9, i)
                    .with_view(CoordView::RealComplex(2 * m))
                    .unwrap();
                assert!(is_unitary(&f.eval(&x), 1e-10).unwrap().member);
            }
        }
    }

    #[test]
    fn psi_prime_product_and_commutation() {
        let cases: Vec<(usize, UnitarySphereMap)> = vec![(1, zeta(2)), (2, sample_sp2_map())];
        for (m, g) in cases {
            let maps: Vec<CylinderMap> = (1..=m).map(|k| psi_prime(m, k, &g).unwrap()).collect();
            let prod = CylinderMap::product("prod", maps.clone()).unwrap();
            for i in 0..100u64 {
                let z = sample_point(4 * m - 1, 10, i);
                let t = t_sample(m, i);
                assert!(prod.eval(t, &z).distance(&ComplexMatrix::identity(2 * m)) < 1e-10);
                for a in 0..m {
                    assert!(
                        maps[a]
                            .eval(0.0, &z)
                            .distance(&ComplexMatrix::identity(2 * m))
                            < 1e-12
                    );
                    for b in 0..a {
                        let (pa, pb) = (maps[a].eval(t, &z), maps[b].eval(t, &z));
                        assert!((&pa * &pb).distance(&(&pb * &pa)) < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn psi_prime_rejects_non_symplectic() {
        let g = eta_n(4).unwrap();
        assert!(psi_prime(2, 1, &g).is_err());
        let bad = zeta(3);
        assert!(matches!(
            psi_prime(2, 1, &bad),
            Err(Error::DomainMismatch(_))
        ));
    }

    #[test]
    fn symmetrized_zeta2_formula() {
        let s = cartan_symmetrize(&zeta(2));
        for x in crate::sphere::sample_uniform(3, 100, 11) {
            let v = x.complex();
            let (w, z) = (v[0], v[1]);
            let off = w * z - w.conj() * z.conj();
            let expected = ComplexMatrix::from_rows(&[
                &[w * w + z.conj() * z.conj(), off],
                &[off, z * z + w.conj() * w.conj()],
            ]);
            assert!(s.eval(&x).distance(&expected) < 1e-14);
        }
        let c = cartan_symmetrize(&UnitarySphereMap::constant(
            "one",
            3,
            ComplexMatrix::identity(2),
        ));
        assert_eq!(c.eval(&sample_point(3, 1, 1)), ComplexMatrix::identity(2));
    }

    #[test]
    fn sp_candidate_values_and_shape() {
        let eta3 = eta_n(3).unwrap();
        let sp = sp_candidate(3, 3, &eta3).unwrap();
        assert_eq!(sp.signature(), "S7→Sp(3)");
        let mut north = vec![0.0; 8];
        north[0] = 1.0;
        let p = SpherePoint::new(&north, CoordView::Complex(4)).unwrap();
        assert_eq!(sp.eval(&p), ComplexMatrix::identity(6));
        for i in 0..200u64 {
            let x = sample_point(7, 12, i);
            let v = sp.eval(&x);
            assert!(
                is_symplectic(&v, SymplecticConvention::Split, 1e-10)
                    .unwrap()
                    .member
            );
            let a = v.submatrix(0, 0, 3, 3);
            let b = v.submatrix(3, 0, 3, 3);
            assert!(v.submatrix(0, 3, 3, 3).distance(&b.conj().scale_real(-1.0)) < 1e-14);
            assert!(v.submatrix(3, 3, 3, 3).distance(&a.conj()) < 1e-14);
        }
        assert!(sp_candidate(2, 3, &zeta(2)).is_err());
    }

    #[test]
    fn sample_sp2_is_symplectic() {
        let g = sample_sp2_map();
        for i in 0..100u64 {
            let x = sample_point(7, 13, i);
            assert!(
                is_symplectic(&g.eval(&x), SymplecticConvention::Interleaved, 1e-10)
                    .unwrap()
                    .member
            );
        }
    }

    #[test]
    fn corner_permutation_properties() {
        for m in 1..=4 {
            let q = corner_permutation(m);
            assert!((q.det().unwrap() - ONE).norm() < 1e-15);
            let a = crate::linalg::random_special_unitary(2 * m, m as u64);
            let c = &(&q.transpose() * &a) * &q;
            // equal up to the sign fix on the first column
            assert!((c[(2 * m - 2, 2 * m - 1)].norm() - a[(1, 0)].norm()).abs() < 1e-15);
        }
    }
}
