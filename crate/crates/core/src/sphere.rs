//! Points on unit spheres, oriented tangent frames, seeded sampling and the
//! two charts the rest of the crate needs (suspension and stereographic).
//!
//! Complex coordinates are stored as interleaved `(re, im)` pairs, so a point
//! of S^{2n−1} ⊂ ℂⁿ is a real vector of length 2n in the order
//! `re z₁, im z₁, re z₂, …`. Orientation of every sphere is the one induced
//! from that real ordering: a tangent frame `v₁ … v_m` at `x` is positive when
//! `det[v₁ … v_m x] > 0`.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::linalg::{real_det, ComplexVector, C64};

pub type Coords = SmallVec<[f64; 16]>;

/// How the real coordinates of a sphere point are grouped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "n", rename_all = "snake_case")]
pub enum CoordView {
    /// ℂⁿ, ambient dimension 2n.
    Complex(usize),
    /// ℝ × ℂⁿ, ambient dimension 2n + 1, real slot first.
    RealComplex(usize),
    Plain,
}

impl CoordView {
    pub fn consistent_with(self, ambient: usize) -> bool {
        match self {
            CoordView::Complex(n) => ambient == 2 * n,
            CoordView::RealComplex(n) => ambient == 2 * n + 1,
            CoordView::Plain => ambient >= 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    coords: Coords,
    view: CoordView,
}

impl SpherePoint {
    /// Wraps coordinates that are already unit length.
    pub fn new(coords: &[f64], view: CoordView) -> Result<Self> {
        if !view.consistent_with(coords.len()) {
            return Err(Error::InvalidPoint(format!(
                "{} coordinates do not fit view {view:?}",
                coords.len()
            )));
        }
        let norm = norm(coords);
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidPoint(format!("norm {norm} is not 1")));
        }
        Ok(Self {
            coords: Coords::from_slice(coords),
            view,
        })
    }

    /// Normalizes arbitrary nonzero coordinates onto the sphere.
    pub fn normalized(coords: &[f64], view: CoordView) -> Result<Self> {
        let n = norm(coords);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidPoint("cannot normalize a zero vector".into()));
        }
        let scaled: Coords = coords.iter().map(|c| c / n).collect();
        Self::new(&scaled, view)
    }

    pub fn from_complex(z: &[C64]) -> Result<Self> {
        let reals: Coords = z.iter().flat_map(|c| [c.re, c.im]).collect();
        Self::new(&reals, CoordView::Complex(z.len()))
    }

    /// Point `(y, z)` of S^{2n} ⊂ ℝ × ℂⁿ.
    pub fn from_real_complex(y: f64, z: &[C64]) -> Result<Self> {
        let mut reals = Coords::new();
        reals.push(y);
        reals.extend(z.iter().flat_map(|c| [c.re, c.im]));
        Self::new(&reals, CoordView::RealComplex(z.len()))
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn view(&self) -> CoordView {
        self.view
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len()
    }

    /// Dimension m of the sphere S^m containing the point.
    pub fn sphere_dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn with_view(mut self, view: CoordView) -> Result<Self> {
        if !view.consistent_with(self.coords.len()) {
            return Err(Error::InvalidPoint(format!("view {view:?} does not fit")));
        }
        self.view = view;
        Ok(self)
    }

    /// The complex entries for a `Complex` view.
    pub fn complex(&self) -> ComplexVector {
        ComplexVector::from_reals(&self.coords)
    }

    pub fn antipode(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|c| -c).collect(),
            view: self.view,
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        dist(&self.coords, &other.coords)
    }
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|c| c * c).sum::<f64>().sqrt()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// Default coordinate view for an ambient dimension: complex when even.
pub fn default_view(ambient: usize) -> CoordView {
    if ambient % 2 == 0 {
        CoordView::Complex(ambient / 2)
    } else {
        CoordView::Plain
    }
}

/// Writes the `index`-th seeded uniform point of S^m into `out` (length m+1).
///
/// Each index owns its own ChaCha stream, so a sample never depends on which
/// thread computed it or in what order.
pub fn sample_into(seed: u64, index: u64, out: &mut [f64]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    loop {
        for c in out.iter_mut() {
            *c = StandardNormal.sample(&mut rng);
        }
        let n = norm(out);
        if n > 1e-300 {
            out.iter_mut().for_each(|c| *c /= n);
            return;
        }
    }
}

pub fn sample_point(m: usize, seed: u64, index: u64) -> SpherePoint {
    let mut coords: Coords = SmallVec::from_elem(0.0, m + 1);
    sample_into(seed, index, &mut coords);
    SpherePoint {
        coords,
        view: default_view(m + 1),
    }
}

/// `count` seeded uniform points of S^m.
pub fn sample_uniform(m: usize, count: usize, seed: u64) -> Vec<SpherePoint> {
    assert!(m >= 1, "sphere dimension must be positive");
    (0..count as u64)
        .map(|i| sample_point(m, seed, i))
        .collect()
}

/// Orthonormal, positively oriented basis of the tangent space at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentFrame {
    base: SpherePoint,
    /// m vectors of length m+1, stored consecutively.
    vectors: Vec<f64>,
}

impl TangentFrame {
    pub fn base(&self) -> &SpherePoint {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.base.sphere_dim()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        let d = self.base.ambient_dim();
        &self.vectors[i * d..(i + 1) * d]
    }

    /// `det[v₁ … v_m base]`.
    pub fn orientation(&self) -> f64 {
        orientation_det(self.base.coords(), &self.vectors)
    }
}

fn orientation_det(x: &[f64], vectors: &[f64]) -> f64 {
    let d = x.len();
    let mut a = vec![0.0; d * d];
    // rows of aᵗ are the columns [v₁ … v_m x]; det(aᵗ) = det(a)
    a[..d * (d - 1)].copy_from_slice(&vectors[..d * (d - 1)]);
    a[d * (d - 1)..].copy_from_slice(x);
    real_det(d, &mut a)
}

/// Fills `out` (m·(m+1) reals) with the oriented frame at unit `x`.
///
/// Canonical basis vectors are orthonormalized against `x`, skipping the one
/// most parallel to `x`; the last vector is flipped when the orientation
/// would be negative.
pub fn frame_into(x: &[f64], out: &mut [f64]) {
    let d = x.len();
    let m = d - 1;
    debug_assert_eq!(out.len(), m * d);
    let skip = (0..d)
        .max_by(|&a, &b| x[a].abs().total_cmp(&x[b].abs()))
        .unwrap_or(0);
    let mut k = 0;
    for e in (0..d).filter(|&e| e != skip) {
        let (done, rest) = out.split_at_mut(k * d);
        let v = &mut rest[..d];
        for (i, vi) in v.iter_mut().enumerate() {
            *vi = -x[e] * x[i];
        }
        v[e] += 1.0;
        for _pass in 0..2 {
            let px = dot(v, x);
            for (vi, xi) in v.iter_mut().zip(x) {
                *vi -= px * xi;
            }
            for prev in done.chunks_exact(d) {
                let p = dot(v, prev);
                for (vi, qi) in v.iter_mut().zip(prev) {
                    *vi -= p * qi;
                }
            }
        }
        let n = norm(v);
        v.iter_mut().for_each(|c| *c /= n);
        k += 1;
    }
    if m > 0 && orientation_det(x, out) < 0.0 {
        out[(m - 1) * d..].iter_mut().for_each(|c| *c = -*c);
    }
}

pub fn tangent_frame(x: &SpherePoint) -> TangentFrame {
    let d = x.ambient_dim();
    let mut vectors = vec![0.0; (d - 1) * d];
    frame_into(x.coords(), &mut vectors);
    TangentFrame {
        base: x.clone(),
        vectors,
    }
}

/// Point `(tn/π − 1, z·√(1 − (tn/π − 1)²))` of S^{2n} ⊂ ℝ × ℂⁿ.
pub fn suspension_chart(n: usize, t: f64, z: &SpherePoint) -> Result<SpherePoint> {
    let t_max = 2.0 * PI / n as f64;
    if !(-1e-12..=t_max + 1e-12).contains(&t) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            lo: 0.0,
            hi: t_max,
        });
    }
    if z.ambient_dim() != 2 * n {
        return Err(Error::InvalidPoint(format!(
            "expected a point of S^{}, got ambient dimension {}",
            2 * n - 1,
            z.ambient_dim()
        )));
    }
    let y = (t * n as f64 / PI - 1.0).clamp(-1.0, 1.0);
    let r = (1.0 - y * y).max(0.0).sqrt();
    let mut coords = Coords::new();
    coords.push(y);
    coords.extend(z.coords().iter().map(|c| c * r));
    Ok(SpherePoint {
        coords,
        view: CoordView::RealComplex(n),
    })
}

/// Stereographic chart of S^m projecting from `pole`.
///
/// `project` sends the antipode of the pole to the origin of ℝ^m; chart
/// coordinates are taken in the oriented tangent frame at the pole.
#[derive(Debug, Clone)]
pub struct StereoChart {
    pole: Vec<f64>,
    basis: Vec<f64>,
}

impl StereoChart {
    pub fn new(pole: &[f64]) -> Self {
        let d = pole.len();
        let mut basis = vec![0.0; (d - 1) * d];
        frame_into(pole, &mut basis);
        Self {
            pole: pole.to_vec(),
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.pole.len() - 1
    }

    pub fn pole(&self) -> &[f64] {
        &self.pole
    }

    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        let d = self.pole.len();
        let distance = dist(x, &self.pole);
        if distance < 1e-6 {
            return Err(Error::PoleProximity { distance });
        }
        let denom = 1.0 - dot(x, &self.pole);
        Ok(self
            .basis
            .chunks_exact(d)
            .map(|v| dot(v, x) / denom)
            .collect())
    }

    pub fn lift(&self, u: &[f64]) -> Vec<f64> {
        let d = self.pole.len();
        let s: f64 = u.iter().map(|c| c * c).sum();
        let mut x: Vec<f64> = self.pole.iter().map(|p| (s - 1.0) * p).collect();
        for (ui, v) in u.iter().zip(self.basis.chunks_exact(d)) {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += 2.0 * ui * vi;
            }
        }
        x.iter_mut().for_each(|c| *c /= s + 1.0);
        x
    }
}
