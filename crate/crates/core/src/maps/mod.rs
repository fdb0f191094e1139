//! Matrix-valued maps on spheres and cylinders, plus the pointwise
//! combinators used to build new maps from old ones.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, SymplecticConvention};
use crate::sphere::{default_view, CoordView, SpherePoint};

pub mod cross;
pub mod registry;
pub mod stable;
pub mod symplectic;
pub mod unstable;

pub use cross::{cartan_cp2, eta_cross, eta_from_eta3, geodesic_c};
pub use registry::{default_keys, lookup, registry_listing, RegistryEntry};
pub use stable::{
    bott, deform_step, embed_with_one, eta3_printed, eta_n, exchange_rotation, lundell_reduce,
    lundell_reduction, reduce_corner, zeta, LundellPhase, LundellReduction,
};
pub use symplectic::{
    cartan_symmetrize, corner_permutation, phi12_prime, phi12_prime_conjugation, phi2_closed,
    phi2_rational, phi2_reduced, psi_prime, sample_sp2_map, sp_candidate,
    symplectic_phase_diagonal,
};
pub use unstable::{
    induced_sphere_map, phase_diagonal, phi, phi_conjugation, phi_hat, phi_steenrod, psi,
    psi_homotopy, psi_product,
};

type MatrixFn = dyn Fn(&[f64]) -> ComplexMatrix + Send + Sync;
type CylinderFn = dyn Fn(f64, &[f64]) -> ComplexMatrix + Send + Sync;
type PointFn = dyn Fn(&[f64], &mut [f64]) + Send + Sync;

/// Which matrix group the values of a map are claimed to lie in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetGroup {
    U,
    SU,
    Sp(SymplecticConvention),
}

/// A map S^m → U(n) given by a closed-form evaluation.
#[derive(Clone)]
pub struct UnitarySphereMap {
    name: String,
    domain_dim: usize,
    view: CoordView,
    target_size: usize,
    group: TargetGroup,
    provenance: String,
    eval: Arc<MatrixFn>,
}

impl UnitarySphereMap {
    pub fn new(
        name: impl Into<String>,
        domain_dim: usize,
        view: CoordView,
        target_size: usize,
        group: TargetGroup,
        provenance: impl Into<String>,
        eval: impl Fn(&[f64]) -> ComplexMatrix + Send + Sync + 'static,
    ) -> Self {
        debug_assert!(view.consistent_with(domain_dim + 1));
        Self {
            name: name.into(),
            domain_dim,
            view,
            target_size,
            group,
            provenance: provenance.into(),
            eval: Arc::new(eval),
        }
    }

    /// The constant map to `value`.
    pub fn constant(name: impl Into<String>, domain_dim: usize, value: ComplexMatrix) -> Self {
        let n = value.rows();
        Self::new(
            name,
            domain_dim,
            default_view(domain_dim + 1),
            n,
            TargetGroup::U,
            "constant map",
            move |_| value.clone(),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn view(&self) -> CoordView {
        self.view
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn group(&self) -> TargetGroup {
        self.group
    }

    /// True when values are claimed to have determinant one.
    pub fn special(&self) -> bool {
        !matches!(self.group, TargetGroup::U)
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn eval(&self, x: &SpherePoint) -> ComplexMatrix {
        assert_eq!(
            x.sphere_dim(),
            self.domain_dim,
            "{} expects a point of S^{}",
            self.name,
            self.domain_dim
        );
        (self.eval)(x.coords())
    }

    /// Evaluation on raw unit coordinates.
    #[inline]
    pub fn eval_coords(&self, x: &[f64]) -> ComplexMatrix {
        debug_assert_eq!(x.len(), self.domain_dim + 1);
        (self.eval)(x)
    }

    pub fn renamed(mut self, name: impl Into<String>, provenance: impl Into<String>) -> Self {
        self.name = name.into();
        self.provenance = provenance.into();
        self
    }

    pub fn with_group(mut self, group: TargetGroup) -> Self {
        self.group = group;
        self
    }

    /// `S5→SU(3)` style signature.
    pub fn signature(&self) -> String {
        let target = match self.group {
            TargetGroup::U => format!("U({})", self.target_size),
            TargetGroup::SU => format!("SU({})", self.target_size),
            TargetGroup::Sp(_) => format!("Sp({})", self.target_size / 2),
        };
        format!("S{}→{}", self.domain_dim, target)
    }
}

impl fmt::Debug for UnitarySphereMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnitarySphereMap({} {})", self.name, self.signature())
    }
}

/// A map [0, t_max] × S^{2n−1} → U(n), with `z` given as interleaved reals.
#[derive(Clone)]
pub struct CylinderMap {
    name: String,
    n: usize,
    t_max: f64,
    target_size: usize,
    special: bool,
    eval: Arc<CylinderFn>,
}

impl CylinderMap {
    pub fn new(
        name: impl Into<String>,
        n: usize,
        t_max: f64,
        target_size: usize,
        special: bool,
        eval: impl Fn(f64, &[f64]) -> ComplexMatrix + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            n,
            t_max,
            target_size,
            special,
            eval: Arc::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Complex dimension of the sphere factor.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn special(&self) -> bool {
        self.special
    }

    pub fn eval(&self, t: f64, z: &SpherePoint) -> ComplexMatrix {
        assert_eq!(z.ambient_dim(), 2 * self.n);
        (self.eval)(t, z.coords())
    }

    #[inline]
    pub fn eval_coords(&self, t: f64, z: &[f64]) -> ComplexMatrix {
        (self.eval)(t, z)
    }

    /// Pointwise product of cylinder maps over the same domain.
    pub fn product(name: impl Into<String>, factors: Vec<CylinderMap>) -> Result<Self> {
        let first = factors
            .first()
            .ok_or_else(|| Error::DomainMismatch("empty product".into()))?
            .clone();
        for f in &factors {
            if f.n != first.n
                || f.target_size != first.target_size
                || (f.t_max - first.t_max).abs() > 1e-15
            {
                return Err(Error::DomainMismatch(format!(
                    "{} and {} live on different cylinders",
                    first.name, f.name
                )));
            }
        }
        let special = factors.iter().all(|f| f.special);
        Ok(Self::new(
            name,
            first.n,
            first.t_max,
            first.target_size,
            special,
            move |t, z| {
                let mut acc = factors[0].eval_coords(t, z);
                for f in &factors[1..] {
                    acc = &acc * &f.eval_coords(t, z);
                }
                acc
            },
        ))
    }
}

impl fmt::Debug for CylinderMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CylinderMap({} [0,{:.6}]×S{}→U({}))",
            self.name,
            self.t_max,
            2 * self.n - 1,
            self.target_size
        )
    }
}

/// A map S^m → S^k between unit spheres; a self-map when `m == k`.
#[derive(Clone)]
pub struct SphereMap {
    name: String,
    domain_dim: usize,
    target_dim: usize,
    eval: Arc<PointFn>,
}

/// Self-maps are sphere maps whose domain and target dimensions agree.
pub type SelfSphereMap = SphereMap;

impl SphereMap {
    pub fn new(
        name: impl Into<String>,
        domain_dim: usize,
        target_dim: usize,
        eval: impl Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            domain_dim,
            target_dim,
            eval: Arc::new(eval),
        }
    }

    pub fn identity(m: usize) -> Self {
        Self::new(format!("identity.S{m}"), m, m, |x, out| {
            out.copy_from_slice(x)
        })
    }

    pub fn antipodal(m: usize) -> Self {
        Self::new(format!("antipodal.S{m}"), m, m, |x, out| {
            for (o, v) in out.iter_mut().zip(x) {
                *o = -v;
            }
        })
    }

    /// Complex conjugation on S^{2k−1} ⊂ ℂᵏ.
    pub fn complex_conjugation(k: usize) -> Self {
        Self::new(
            format!("conjugation.S{}", 2 * k - 1),
            2 * k - 1,
            2 * k - 1,
            |x, out| {
                for (i, (o, v)) in out.iter_mut().zip(x).enumerate() {
                    *o = if i % 2 == 1 { -v } else { *v };
                }
            },
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn is_self_map(&self) -> bool {
        self.domain_dim == self.target_dim
    }

    pub fn eval_fn(&self) -> &(dyn Fn(&[f64], &mut [f64]) + Send + Sync) {
        &*self.eval
    }

    #[inline]
    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        (self.eval)(x, out)
    }

    pub fn eval(&self, x: &SpherePoint) -> SpherePoint {
        let mut out = vec![0.0; self.target_dim + 1];
        self.eval_into(x.coords(), &mut out);
        SpherePoint::normalized(&out, default_view(self.target_dim + 1))
            .expect("sphere map produced a zero vector")
    }
}

impl fmt::Debug for SphereMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SphereMap({} S{}→S{})",
            self.name, self.domain_dim, self.target_dim
        )
    }
}

fn check_same_shape(f: &UnitarySphereMap, g: &UnitarySphereMap) -> Result<()> {
    if f.domain_dim != g.domain_dim || f.target_size != g.target_size {
        return Err(Error::DomainMismatch(format!(
            "{} is {} but {} is {}",
            f.name,
            f.signature(),
            g.name,
            g.signature()
        )));
    }
    Ok(())
}

/// `x ↦ f(x)·g(x)`.
pub fn pointwise_product(f: &UnitarySphereMap, g: &UnitarySphereMap) -> Result<UnitarySphereMap> {
    check_same_shape(f, g)?;
    let group = if f.special() && g.special() {
        TargetGroup::SU
    } else {
        TargetGroup::U
    };
    let (ff, gg) = (f.clone(), g.clone());
    Ok(UnitarySphereMap::new(
        format!("{}*{}", f.name, g.name),
        f.domain_dim,
        f.view,
        f.target_size,
        group,
        format!("pointwise product of {} and {}", f.name, g.name),
        move |x| &ff.eval_coords(x) * &gg.eval_coords(x),
    ))
}

/// `x ↦ conj f(x)` entrywise.
pub fn conjugate(f: &UnitarySphereMap) -> UnitarySphereMap {
    let ff = f.clone();
    UnitarySphereMap::new(
        format!("conj({})", f.name),
        f.domain_dim,
        f.view,
        f.target_size,
        if f.special() {
            TargetGroup::SU
        } else {
            TargetGroup::U
        },
        format!("entrywise conjugate of {}", f.name),
        move |x| ff.eval_coords(x).conj(),
    )
}

/// `x ↦ f(x)ᵗ`.
pub fn transpose(f: &UnitarySphereMap) -> UnitarySphereMap {
    let ff = f.clone();
    UnitarySphereMap::new(
        format!("transpose({})", f.name),
        f.domain_dim,
        f.view,
        f.target_size,
        if f.special() {
            TargetGroup::SU
        } else {
            TargetGroup::U
        },
        format!("transpose of {}", f.name),
        move |x| ff.eval_coords(x).transpose(),
    )
}

/// `x ↦ f(x)⁻¹ = f(x)*`.
pub fn adjoint_inverse(f: &UnitarySphereMap) -> UnitarySphereMap {
    let ff = f.clone();
    UnitarySphereMap::new(
        format!("inv({})", f.name),
        f.domain_dim,
        f.view,
        f.target_size,
        f.group,
        format!("pointwise inverse of {}", f.name),
        move |x| ff.eval_coords(x).adjoint(),
    )
}

/// Projection of `f` to its `j`-th column (1-based), a map into S^{2n−1}.
pub fn column(f: &UnitarySphereMap, j: usize) -> Result<SphereMap> {
    let n = f.target_size;
    if j == 0 || j > n {
        return Err(Error::OutOfRange {
            name: "column",
            value: j as f64,
            lo: 1.0,
            hi: n as f64,
        });
    }
    let ff = f.clone();
    Ok(SphereMap::new(
        format!("column({}, {j})", f.name),
        f.domain_dim,
        2 * n - 1,
        move |x, out| {
            let m = ff.eval_coords(x);
            for i in 0..n {
                let c = m[(i, j - 1)];
                out[2 * i] = c.re;
                out[2 * i + 1] = c.im;
            }
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;
    use crate::sphere::sample_uniform;

    #[test]
    fn product_with_inverse_is_identity() {
        let f = zeta(3);
        let p = pointwise_product(&f, &adjoint_inverse(&f)).unwrap();
        for x in sample_uniform(5, 100, 1) {
            assert!(p.eval(&x).distance(&ComplexMatrix::identity(4)) < 1e-13);
        }
    }

    #[test]
    fn zeta2_first_column_is_identity() {
        let col = column(&zeta(2), 1).unwrap();
        assert!(col.is_self_map());
        for x in sample_uniform(3, 50, 2) {
            assert!(col.eval(&x).distance(&x) < 1e-15);
        }
    }

    #[test]
    fn conjugate_zeta_is_zeta_of_conjugate() {
        for k in 1..=4 {
            let f = zeta(k);
            let cf = conjugate(&f);
            for x in sample_uniform(2 * k - 1, 100, 3) {
                let xbar = SphereMap::complex_conjugation(k).eval(&x);
                assert!(cf.eval(&x).distance(&f.eval(&xbar)) < 1e-12);
            }
        }
    }

    #[test]
    fn mismatched_shapes_are_rejected() {
        assert!(pointwise_product(&zeta(2), &zeta(3)).is_err());
        assert!(column(&zeta(2), 3).is_err());
        assert!(column(&zeta(2), 0).is_err());
    }

    #[test]
    fn transpose_and_signature() {
        let f = eta_cross();
        assert_eq!(f.signature(), "S5→SU(3)");
        let t = transpose(&f);
        let x = crate::sphere::sample_point(5, 4, 4);
        assert_eq!(t.eval(&x), f.eval(&x).transpose());
    }
}
