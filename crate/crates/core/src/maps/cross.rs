//! The cross-product generator η : S⁵ → SU(3), the geodesic through its
//! base value, and the Cartan embedding of ℂP².

use crate::linalg::{ComplexMatrix, C64, ONE};
use crate::sphere::CoordView;

use super::{stable::eta3_printed, TargetGroup, UnitarySphereMap};

fn coords3(x: &[f64]) -> [C64; 3] {
    [
        C64::new(x[0], x[1]),
        C64::new(x[2], x[3]),
        C64::new(x[4], x[5]),
    ]
}

fn eta_value(z: [C64; 3]) -> ComplexMatrix {
    let [z1, z2, z3] = z;
    let (b1, b2, b3) = (z1.conj(), z2.conj(), z3.conj());
    let zero = C64::new(0.0, 0.0);
    let mut m = ComplexMatrix::outer(&z, &z);
    let skew = ComplexMatrix::from_rows(&[&[zero, -b3, b2], &[b3, zero, -b1], &[-b2, b1, zero]]);
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] += skew[(i, j)];
        }
    }
    m
}

/// `η(z) = z zᵗ + [z̄]ₓ`: fixes `z̄ ↦ z` and sends `w̄ ↦ z × w` for `w ⊥ z`.
pub fn eta_cross() -> UnitarySphereMap {
    UnitarySphereMap::new(
        "eta_cross",
        5,
        CoordView::Complex(3),
        3,
        TargetGroup::SU,
        "z zᵗ plus the skew matrix of z̄ (complex cross product)",
        |x| eta_value(coords3(x)),
    )
}

/// `L · η₃(z̄₁, z₂, z̄₃) · R`, which reproduces η.
pub fn eta_from_eta3() -> UnitarySphereMap {
    let eta3 = eta3_printed();
    let left =
        ComplexMatrix::from_real_rows(&[&[0.0, 0.0, 1.0], &[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0]]);
    let right =
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, -1.0], &[1.0, 0.0, 0.0]]);
    UnitarySphereMap::new(
        "eta_from_eta3",
        5,
        CoordView::Complex(3),
        3,
        TargetGroup::SU,
        "permutations around eta3 with z1, z3 conjugated",
        move |x| {
            let y = [x[0], -x[1], x[2], x[3], x[4], -x[5]];
            &(&left * &eta3.eval_coords(&y)) * &right
        },
    )
}

/// Rotation by `t` in the trailing 2×2 block of a 3×3 matrix.
pub fn geodesic_c(t: f64) -> ComplexMatrix {
    let (s, c) = t.sin_cos();
    ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, c, -s], &[0.0, s, c]])
}

/// `z ↦ 2 z z̄ᵗ − 𝟙`.
pub fn cartan_cp2() -> UnitarySphereMap {
    UnitarySphereMap::new(
        "cartan_cp2",
        5,
        CoordView::Complex(3),
        3,
        TargetGroup::SU,
        "Cartan embedding of CP2, 2 z z̄ᵗ − 𝟙",
        |x| {
            let z = coords3(x);
            let zbar = [z[0].conj(), z[1].conj(), z[2].conj()];
            let mut m = ComplexMatrix::outer(&z, &zbar).scale_real(2.0);
            for i in 0..3 {
                m[(i, i)] -= ONE;
            }
            m
        },
    )
}
