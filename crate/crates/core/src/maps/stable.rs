//! Periodicity operator, the iterated generators ζ_k, corner reduction and
//! the Lundell-style reduction producing the last-stable generators η_n.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64, ONE};
use crate::sphere::{norm, sample_uniform, CoordView, Coords, SpherePoint};

use super::{TargetGroup, UnitarySphereMap};

/// Corner magnitude accepted as vanishing.
pub const CORNER_TOL: f64 = 1e-9;

/// Number of seeded probe points used to validate a reduction.
pub const PROBE_POINTS: usize = 256;
pub const PROBE_SEED: u64 = 0x1ca7_b077;

/// ζ_k : S^{2k−1} → U(2^{k−1}); ζ₁(z) = z and ζ_{k+1} = B(ζ_k).
pub fn zeta(k: usize) -> UnitarySphereMap {
    assert!(k >= 1, "zeta index starts at 1");
    if k == 1 {
        return UnitarySphereMap::new(
            "zeta1",
            1,
            CoordView::Complex(1),
            1,
            TargetGroup::U,
            "z ↦ z",
            |x| ComplexMatrix::scalar(1, C64::new(x[0], x[1])),
        );
    }
    bott(&zeta(k - 1)).renamed(
        format!("zeta{k}"),
        format!("periodicity operator applied to zeta{}", k - 1),
    )
}

/// The periodicity operator: θ : S^r → U(n) becomes B(θ) : S^{r+2} → SU(2n),
/// `(w, x) ↦ [[w𝟙, −|x|·θ(x̂)*], [|x|·θ(x̂), w̄𝟙]]` on the unit sphere of ℂ × ℝ^{r+1}.
///
/// At `x = 0` the value is the continuous limit `diag(w𝟙, w̄𝟙)`.
pub fn bott(theta: &UnitarySphereMap) -> UnitarySphereMap {
    let n = theta.target_size();
    let r = theta.domain_dim();
    let view = match theta.view() {
        CoordView::Complex(k) => CoordView::Complex(k + 1),
        _ => CoordView::Plain,
    };
    let th = theta.clone();
    UnitarySphereMap::new(
        format!("B({})", theta.name()),
        r + 2,
        view,
        2 * n,
        TargetGroup::SU,
        format!("periodicity operator applied to {}", theta.name()),
        move |x| {
            let w = C64::new(x[0], x[1]);
            let rest = &x[2..];
            let len = norm(rest);
            let mut out = ComplexMatrix::zeros(2 * n, 2 * n);
            for i in 0..n {
                out[(i, i)] = w;
                out[(n + i, n + i)] = w.conj();
            }
            if len > 0.0 {
                let xhat: Coords = rest.iter().map(|c| c / len).collect();
                let t = th.eval_coords(&xhat);
                for i in 0..n {
                    for j in 0..n {
                        out[(n + i, j)] = t[(i, j)] * len;
                        out[(i, n + j)] = -t[(j, i)].conj() * len;
                    }
                }
            }
            out
        },
    )
}

/// Identity outside the trailing 2×2 block, which is the rotation by `t`.
pub fn exchange_rotation(size: usize, t: f64) -> ComplexMatrix {
    assert!(size >= 2);
    let mut e = ComplexMatrix::identity(size);
    let (c, s) = (C64::new(t.cos(), 0.0), C64::new(t.sin(), 0.0));
    let (a, b) = (size - 2, size - 1);
    e[(a, a)] = c;
    e[(a, b)] = -s;
    e[(b, a)] = s;
    e[(b, b)] = c;
    e
}

/// Left multiplication by `exchange_rotation(N, π/2)`: the last row moves up
/// with a sign change, the second-to-last moves down.
fn exchange_rows(m: &mut ComplexMatrix) {
    let n = m.rows();
    for j in 0..m.cols() {
        let upper = m[(n - 2, j)];
        m[(n - 2, j)] = -m[(n - 1, j)];
        m[(n - 1, j)] = upper;
    }
}

fn corner(m: &ComplexMatrix) -> f64 {
    m[(m.rows() - 1, m.cols() - 1)].norm()
}

fn reduce_unchecked(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.rows() - 1;
    ComplexMatrix::from_fn(n, n, |i, j| m[(i, j)] - m[(i, n)] * m[(n, j)])
}

/// `[[A, b], [c̄ᵗ, 0]] ↦ A − b·c̄ᵗ`.
pub fn reduce_corner(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let magnitude = corner(m);
    if magnitude > CORNER_TOL {
        return Err(Error::CornerNotVanishing { magnitude });
    }
    Ok(reduce_unchecked(m))
}

/// The deformation `[[A − b c̄ᵗ sin t, b cos t], [c̄ᵗ cos t, sin t]]` joining a
/// matrix with vanishing corner (t = 0) to its reduction ⊕ 1 (t = π/2).
pub fn deform_step(m: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if !(-1e-12..=FRAC_PI_2 + 1e-12).contains(&t) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            lo: 0.0,
            hi: FRAC_PI_2,
        });
    }
    reduce_corner(m)?;
    let n = m.rows() - 1;
    let (s, c) = t.sin_cos();
    Ok(ComplexMatrix::from_fn(n + 1, n + 1, |i, j| {
        match (i < n, j < n) {
            (true, true) => m[(i, j)] - m[(i, n)] * m[(n, j)] * s,
            (true, false) => m[(i, n)] * c,
            (false, true) => m[(n, j)] * c,
            (false, false) => C64::new(s, 0.0),
        }
    }))
}

/// One homotopy segment of a Lundell step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LundellPhase {
    /// Left multiplication by `exchange_rotation(N, t)`, t ∈ [0, π/2].
    Exchange(f64),
    /// `deform_step` applied after the full exchange, t ∈ [0, π/2].
    Deform(f64),
}

/// Result of iterating exchange-then-reduce, with every stage kept so the
/// deformation paths can be inspected.
#[derive(Debug, Clone)]
pub struct LundellReduction {
    stages: Vec<UnitarySphereMap>,
}

impl LundellReduction {
    /// The final reduced map.
    pub fn map(&self) -> &UnitarySphereMap {
        self.stages.last().expect("at least the input stage")
    }

    pub fn into_map(mut self) -> UnitarySphereMap {
        self.stages.pop().expect("at least the input stage")
    }

    /// `stages()[0]` is the input, `stages()[k]` the map after k steps.
    pub fn stages(&self) -> &[UnitarySphereMap] {
        &self.stages
    }

    /// Value of the homotopy leading from stage `step` to stage `step + 1`.
    pub fn path(&self, step: usize, x: &SpherePoint, phase: LundellPhase) -> Result<ComplexMatrix> {
        let m = self.stages[step].eval(x);
        let n = m.rows();
        match phase {
            LundellPhase::Exchange(t) => Ok(&exchange_rotation(n, t) * &m),
            LundellPhase::Deform(t) => {
                let mut e = m;
                exchange_rows(&mut e);
                deform_step(&e, t)
            }
        }
    }
}

fn reduce_once(theta: &UnitarySphereMap) -> Result<UnitarySphereMap> {
    let n = theta.target_size();
    if n < 2 {
        return Err(Error::OutOfRange {
            name: "target size",
            value: n as f64,
            lo: 2.0,
            hi: f64::INFINITY,
        });
    }
    for x in sample_uniform(theta.domain_dim(), PROBE_POINTS, PROBE_SEED) {
        let mut m = theta.eval(&x);
        exchange_rows(&mut m);
        let magnitude = corner(&m);
        if magnitude > CORNER_TOL {
            return Err(Error::ReductionInapplicable {
                point: x.coords().to_vec(),
                magnitude,
            });
        }
    }
    let th = theta.clone();
    Ok(UnitarySphereMap::new(
        format!("L({})", theta.name()),
        theta.domain_dim(),
        theta.view(),
        n - 1,
        TargetGroup::SU,
        format!("one exchange-and-reduce step applied to {}", theta.name()),
        move |x| {
            let mut m = th.eval_coords(x);
            exchange_rows(&mut m);
            reduce_unchecked(&m)
        },
    ))
}

/// Iterates `x ↦ reduce_corner(exchange_rotation(π/2)·θ(x))` `steps` times,
/// validating corner vanishing on seeded probe points before each step.
pub fn lundell_reduction(theta: &UnitarySphereMap, steps: usize) -> Result<LundellReduction> {
    let mut stages = vec![theta.clone()];
    for _ in 0..steps {
        let next = reduce_once(stages.last().expect("nonempty"))?;
        stages.push(next);
    }
    Ok(LundellReduction { stages })
}

pub fn lundell_reduce(theta: &UnitarySphereMap, steps: usize) -> Result<UnitarySphereMap> {
    Ok(lundell_reduction(theta, steps)?.into_map())
}

/// Generator η_n : S^{2n−1} → SU(n) of the last stable group.
///
/// η₁ = ζ₁, η₂ = ζ₂ and η_n is B(η_{n−1}) reduced from size 2n−2 down to n.
pub fn eta_n(n: usize) -> Result<UnitarySphereMap> {
    match n {
        0 => Err(Error::OutOfRange {
            name: "n",
            value: 0.0,
            lo: 1.0,
            hi: f64::INFINITY,
        }),
        1 => Ok(zeta(1).renamed("eta1", "z ↦ z")),
        2 => Ok(zeta(2).renamed("eta2", "standard parametrization of SU(2)")),
        _ => {
            let prev = eta_n(n - 1)?;
            let lifted = bott(&prev);
            let reduced = lundell_reduce(&lifted, n - 2)?;
            Ok(reduced.renamed(
                format!("eta{n}"),
                format!("periodicity operator on eta{} reduced to SU({n})", n - 1),
            ))
        }
    }
}

/// The closed-form entries of η₃ as printed alongside its construction.
pub fn eta3_printed() -> UnitarySphereMap {
    UnitarySphereMap::new(
        "eta3_printed",
        5,
        CoordView::Complex(3),
        3,
        TargetGroup::SU,
        "entrywise closed form of eta3",
        |x| {
            let z1 = C64::new(x[0], x[1]);
            let z2 = C64::new(x[2], x[3]);
            let z3 = C64::new(x[4], x[5]);
            let (b1, b2, b3) = (z1.conj(), z2.conj(), z3.conj());
            ComplexMatrix::from_rows(&[
                &[z1 + b3 * z2, -b3 * b3, -b2 + b3 * b1],
                &[z2 * z2, z1 - z2 * b3, z3 + z2 * b1],
                &[-z3 + b1 * z2, -b2 - b1 * b3, b1 * b1],
            ])
        },
    )
}

/// Embeds `m` into the upper-left block of a matrix one size larger.
pub fn embed_with_one(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::direct_sum(m, &ComplexMatrix::scalar(1, ONE))
}
