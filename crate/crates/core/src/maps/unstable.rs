//! Generators of the first nonstable groups: the cylinder maps φ̂ and ψ_j,
//! the induced sphere maps, and the rational (Steenrod) form.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64, I, ONE};
use crate::sphere::{norm, sample_uniform, CoordView, Coords};

use super::{CylinderMap, TargetGroup, UnitarySphereMap};

/// Tolerance for the constant-ends check of a cylinder map.
pub const ENDPOINT_TOL: f64 = 1e-9;
const ENDPOINT_PROBES: usize = 64;
const ENDPOINT_SEED: u64 = 0xe0d5;

/// Below this length the ℂⁿ part of a point is treated as a pole.
const POLE_RADIUS: f64 = 1e-150;

fn complex_slice(z: &[f64]) -> Vec<C64> {
    z.chunks_exact(2).map(|p| C64::new(p[0], p[1])).collect()
}

/// `𝟙 + s · z z̄ᵗ`.
fn identity_plus_rank_one(z: &[C64], s: C64) -> ComplexMatrix {
    let n = z.len();
    ComplexMatrix::from_fn(n, n, |i, j| {
        let v = s * z[i] * z[j].conj();
        if i == j {
            v + ONE
        } else {
            v
        }
    })
}

/// `diag(e^{−it}, …, e^{i(n−1)t}, …, e^{−it})` with the odd slot at `j` (1-based).
pub fn phase_diagonal(n: usize, j: usize, t: f64) -> ComplexMatrix {
    let big = C64::from_polar(1.0, (n as f64 - 1.0) * t);
    let small = C64::from_polar(1.0, -t);
    let entries: Vec<C64> = (1..=n).map(|k| if k == j { big } else { small }).collect();
    ComplexMatrix::diag(&entries)
}

/// `A · D_j(t) · A⁻¹` for unitary `A`.
pub fn phi_conjugation(n: usize, j: usize, a: &ComplexMatrix, t: f64) -> ComplexMatrix {
    &(a * &phase_diagonal(n, j, t)) * &a.adjoint()
}

/// `φ̂(t, z) = e^{−it}(𝟙 + z(e^{int} − 1) z̄ᵗ)` on [0, 2π/n] × S^{2n−1}.
pub fn phi_hat(n: usize) -> CylinderMap {
    CylinderMap::new(
        format!("phi_hat.n={n}"),
        n,
        2.0 * PI / n as f64,
        n,
        true,
        move |t, z| {
            let z = complex_slice(z);
            let s = C64::from_polar(1.0, n as f64 * t) - ONE;
            identity_plus_rank_one(&z, s).scale(C64::from_polar(1.0, -t))
        },
    )
}

/// `φ(y, z) = e^{−iπ(y+1)/n}(𝟙 − ẑ(1 + e^{iπy})ẑ*)` on S^{2n} ⊂ ℝ × ℂⁿ.
///
/// At the poles the direction ẑ is undefined but its coefficient vanishes,
/// so the value is the scalar phase alone.
pub fn phi(n: usize) -> UnitarySphereMap {
    UnitarySphereMap::new(
        format!("phi.n={n}"),
        2 * n,
        CoordView::RealComplex(n),
        n,
        TargetGroup::SU,
        format!("phi_hat.n={n} composed with the inverse suspension chart"),
        move |x| {
            let y = x[0];
            let phase = C64::from_polar(1.0, -PI * (y + 1.0) / n as f64);
            let r = norm(&x[1..]);
            if r < POLE_RADIUS {
                return ComplexMatrix::scalar(n, phase);
            }
            let zhat: Vec<C64> = complex_slice(&x[1..]).into_iter().map(|c| c / r).collect();
            let coeff = -(ONE + C64::from_polar(1.0, PI * y));
            identity_plus_rank_one(&zhat, coeff).scale(phase)
        },
    )
}

/// Rational form `𝟙 − 2 z (1 − iy)⁻² z̄ᵗ` with the unnormalized ℂⁿ part `z`.
///
/// Values are unitary but their determinant is not 1.
pub fn phi_steenrod(n: usize) -> UnitarySphereMap {
    UnitarySphereMap::new(
        format!("phi_steenrod.n={n}"),
        2 * n,
        CoordView::RealComplex(n),
        n,
        TargetGroup::U,
        "rational parametrization of the circle substituted into phi",
        move |x| {
            let y = x[0];
            let z = complex_slice(&x[1..]);
            let denom = (ONE - I * y) * (ONE - I * y);
            identity_plus_rank_one(&z, -C64::new(2.0, 0.0) / denom)
        },
    )
}

fn check_generator_shape(n: usize, g: &UnitarySphereMap) -> Result<()> {
    if g.domain_dim() != 2 * n - 1 || g.target_size() != n {
        return Err(Error::DomainMismatch(format!(
            "expected a map S{}→U({n}), got {} {}",
            2 * n - 1,
            g.name(),
            g.signature()
        )));
    }
    Ok(())
}

/// `ψ_j(t, z) = g(z) · D_j(t) · g(z)⁻¹`, with `j` 1-based.
pub fn psi(n: usize, j: usize, g: &UnitarySphereMap) -> Result<CylinderMap> {
    check_generator_shape(n, g)?;
    if j == 0 || j > n {
        return Err(Error::OutOfRange {
            name: "j",
            value: j as f64,
            lo: 1.0,
            hi: n as f64,
        });
    }
    let gg = g.clone();
    Ok(CylinderMap::new(
        format!("psi.n={n},j={j}[{}]", g.name()),
        n,
        2.0 * PI / n as f64,
        n,
        true,
        move |t, z| phi_conjugation(n, j, &gg.eval_coords(z), t),
    ))
}

/// Pointwise product ψ₁ ⋯ ψ_n.
pub fn psi_product(n: usize, g: &UnitarySphereMap) -> Result<CylinderMap> {
    let factors = (1..=n).map(|j| psi(n, j, g)).collect::<Result<Vec<_>>>()?;
    CylinderMap::product(format!("psi_product.n={n}[{}]", g.name()), factors)
}

/// Rotation by `s` in the leading 2×2 block.
fn leading_rotation(n: usize, s: f64) -> ComplexMatrix {
    let mut r = ComplexMatrix::identity(n);
    let (sn, cs) = s.sin_cos();
    r[(0, 0)] = C64::new(cs, 0.0);
    r[(0, 1)] = C64::new(-sn, 0.0);
    r[(1, 0)] = C64::new(sn, 0.0);
    r[(1, 1)] = C64::new(cs, 0.0);
    r
}

/// `g(z) R(s) D₁(t) R(s)ᵗ g(z)⁻¹`, joining ψ₁ (s = 0) to ψ₂ (s = π/2).
pub fn psi_homotopy(n: usize, g: &UnitarySphereMap, s: f64) -> Result<CylinderMap> {
    check_generator_shape(n, g)?;
    if n < 2 {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as f64,
            lo: 2.0,
            hi: f64::INFINITY,
        });
    }
    let gg = g.clone();
    let rot = leading_rotation(n, s);
    let rot_t = rot.transpose();
    Ok(CylinderMap::new(
        format!("psi_homotopy.n={n},s={s}[{}]", g.name()),
        n,
        2.0 * PI / n as f64,
        n,
        true,
        move |t, z| {
            let a = &gg.eval_coords(z) * &rot;
            let inner = &(&a * &phase_diagonal(n, 1, t)) * &rot_t;
            &inner * &gg.eval_coords(z).adjoint()
        },
    ))
}

/// Factors a cylinder map with constant ends through the suspension chart,
/// giving a map on S^{2n} ⊂ ℝ × ℂⁿ.
pub fn induced_sphere_map(c: &CylinderMap) -> Result<UnitarySphereMap> {
    let n = c.n();
    let t_max = c.t_max();
    let mut base = vec![0.0; 2 * n];
    base[0] = 1.0;
    let start = c.eval_coords(0.0, &base);
    let end = c.eval_coords(t_max, &base);
    let mut residual: f64 = 0.0;
    for z in sample_uniform(2 * n - 1, ENDPOINT_PROBES, ENDPOINT_SEED) {
        residual = residual
            .max(c.eval_coords(0.0, z.coords()).distance(&start))
            .max(c.eval_coords(t_max, z.coords()).distance(&end));
    }
    if residual > ENDPOINT_TOL {
        return Err(Error::EndpointNotConstant { residual });
    }
    let cc = c.clone();
    Ok(UnitarySphereMap::new(
        format!("induced({})", c.name()),
        2 * n,
        CoordView::RealComplex(n),
        c.target_size(),
        if c.special() {
            TargetGroup::SU
        } else {
            TargetGroup::U
        },
        format!("{} factored through the suspension chart", c.name()),
        move |x| {
            let y = x[0];
            let r = norm(&x[1..]);
            if r < POLE_RADIUS {
                return if y > 0.0 { end.clone() } else { start.clone() };
            }
            let t = ((y + 1.0) * 0.5 * t_max).clamp(0.0, t_max);
            let zhat: Coords = x[1..].iter().map(|v| v / r).collect();
            cc.eval_coords(t, &zhat)
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{is_special_unitary, is_unitary, random_special_unitary};
    use crate::maps::{eta_cross, eta_n, zeta};
    use crate::sphere::{sample_point, suspension_chart, SpherePoint};

    fn t_sample(n: usize, i: u64) -> f64 {
        (2.0 * PI / n as f64) * ((i as f64 * 0.618_033_988_75) % 1.0)
    }

    #[test]
    fn phi_hat_endpoints() {
        for n in 2..=5 {
            let f = phi_hat(n);
            for z in sample_uniform(2 * n - 1, 20, 1) {
                assert!(f.eval(0.0, &z).distance(&ComplexMatrix::identity(n)) < 1e-14);
                let end = ComplexMatrix::scalar(n, C64::from_polar(1.0, -2.0 * PI / n as f64));
                assert!(f.eval(f.t_max(), &z).distance(&end) < 1e-14);
            }
        }
    }

    #[test]
    fn phi_hat_matches_conjugation_form() {
        for n in 2..=5 {
            let f = phi_hat(n);
            for seed in 0..50u64 {
                let a = random_special_unitary(n, seed);
                let t = t_sample(n, seed);
                let z = SpherePoint::from_complex(a.column(0).as_slice()).unwrap();
                assert!(f.eval(t, &z).distance(&phi_conjugation(n, 1, &a, t)) < 1e-12);
            }
        }
    }

    #[test]
    fn phi_poles_and_factorization() {
        for n in 2..=4 {
            let f = phi(n);
            let mut south = vec![0.0; 2 * n + 1];
            south[0] = -1.0;
            let mut north = south.clone();
            north[0] = 1.0;
            let s = SpherePoint::new(&south, CoordView::RealComplex(n)).unwrap();
            let nn = SpherePoint::new(&north, CoordView::RealComplex(n)).unwrap();
            assert_eq!(f.eval(&s), ComplexMatrix::identity(n));
            let end = ComplexMatrix::scalar(n, C64::from_polar(1.0, -2.0 * PI / n as f64));
            assert!(f.eval(&nn).distance(&end) < 1e-15);
            let hat = phi_hat(n);
            for (i, z) in sample_uniform(2 * n - 1, 100, 2).into_iter().enumerate() {
                let t = t_sample(n, i as u64);
                let x = suspension_chart(n, t, &z).unwrap();
                assert!(f.eval(&x).distance(&hat.eval(t, &z)) < 1e-12);
                assert!(is_special_unitary(&f.eval(&x), 1e-10).unwrap().member);
            }
            let induced = induced_sphere_map(&hat).unwrap();
            for x in sample_uniform(2 * n, 100, 3) {
                let x = x.with_view(CoordView::RealComplex(n)).unwrap();
                assert!(induced.eval(&x).distance(&f.eval(&x)) < 1e-12);
            }
        }
    }

    #[test]
    fn steenrod_form_is_unitary() {
        for n in 2..=4 {
            let f = phi_steenrod(n);
            let mut south = vec![0.0; 2 * n + 1];
            south[0] = -1.0;
            let s = SpherePoint::new(&south, CoordView::RealComplex(n)).unwrap();
            assert_eq!(f.eval(&s), ComplexMatrix::identity(n));
            for x in sample_uniform(2 * n, 200, 4) {
                assert!(is_unitary(&f.eval(&x), 1e-10).unwrap().member);
            }
        }
        let mut eq = vec![0.0; 5];
        eq[1] = 0.6;
        eq[4] = 0.8;
        let x = SpherePoint::new(&eq, CoordView::RealComplex(2)).unwrap();
        let m = phi_steenrod(2).eval(&x);
        assert!(m.distance(&m.adjoint()) < 1e-15);
    }

    #[test]
    fn psi_product_and_commutation() {
        for n in 2..=5 {
            let g = eta_n(n).unwrap();
            let psis: Vec<CylinderMap> = (1..=n).map(|j| psi(n, j, &g).unwrap()).collect();
            let prod = psi_product(n, &g).unwrap();
            for i in 0..100u64 {
                let z = sample_point(2 * n - 1, 5, i);
                let t = t_sample(n, i);
                assert!(prod.eval(t, &z).distance(&ComplexMatrix::identity(n)) < 1e-10);
                for a in 0..n {
                    assert!(psis[a].eval(0.0, &z).distance(&ComplexMatrix::identity(n)) < 1e-12);
                    for b in 0..a {
                        let (pa, pb) = (psis[a].eval(t, &z), psis[b].eval(t, &z));
                        assert!((&pa * &pb).distance(&(&pb * &pa)) < 1e-10);
                    }
                }
            }
            let induced = induced_sphere_map(&prod).unwrap();
            let x = sample_point(2 * n, 1, 1)
                .with_view(CoordView::RealComplex(n))
                .unwrap();
            assert!(induced.eval(&x).distance(&ComplexMatrix::identity(n)) < 1e-10);
        }
    }

    #[test]
    fn psi_homotopy_endpoints() {
        let g = eta_cross();
        let h0 = psi_homotopy(3, &g, 0.0).unwrap();
        let h1 = psi_homotopy(3, &g, PI / 2.0).unwrap();
        let (p1, p2) = (psi(3, 1, &g).unwrap(), psi(3, 2, &g).unwrap());
        for i in 0..100u64 {
            let z = sample_point(5, 6, i);
            let t = t_sample(3, i);
            assert!(h0.eval(t, &z).distance(&p1.eval(t, &z)) < 1e-12);
            assert!(h1.eval(t, &z).distance(&p2.eval(t, &z)) < 1e-12);
            let mid = psi_homotopy(3, &g, 0.7).unwrap().eval(t, &z);
            assert!(is_special_unitary(&mid, 1e-10).unwrap().member);
        }
    }

    #[test]
    fn nonconstant_ends_are_rejected() {
        let g = zeta(2);
        let bad = CylinderMap::new("bad", 2, PI, 2, false, move |_, z| g.eval_coords(z));
        assert!(matches!(
            induced_sphere_map(&bad),
            Err(Error::EndpointNotConstant { .. })
        ));
        assert!(psi(3, 1, &zeta(2)).is_err());
    }
}
