//! Small dense complex matrices and the group-membership predicates used
//! throughout the crate.
//!
//! Matrices here never exceed a handful of rows (SU(8) is the largest
//! target in the registry), so storage is inline up to 8x8 and every
//! operation is a plain loop.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

type Storage = SmallVec<[C64; 64]>;

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Storage,
}

/// Dense complex column vector.
#[derive(Clone, PartialEq)]
pub struct ComplexVector {
    data: SmallVec<[C64; 8]>,
}

impl ComplexVector {
    pub fn zeros(dim: usize) -> Self {
        Self {
            data: SmallVec::from_elem(ZERO, dim),
        }
    }

    pub fn from_slice(entries: &[C64]) -> Self {
        Self {
            data: SmallVec::from_slice(entries),
        }
    }

    /// Reads `n` complex entries from interleaved `(re, im)` reals.
    pub fn from_reals(reals: &[f64]) -> Self {
        debug_assert!(reals.len() % 2 == 0);
        Self {
            data: reals
                .chunks_exact(2)
                .map(|p| C64::new(p[0], p[1]))
                .collect(),
        }
    }

    /// Canonical basis vector `e_k` (zero-based `k`).
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[k] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn to_reals(&self) -> Vec<f64> {
        self.data.iter().flat_map(|c| [c.re, c.im]).collect()
    }

    pub fn conj(&self) -> Self {
        Self {
            data: self.data.iter().map(|c| c.conj()).collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Hermitian inner product, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            data: self.data.iter().map(|c| c * s).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl Index<usize> for ComplexVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.data[i]
    }
}

impl IndexMut<usize> for ComplexVector {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.data[i]
    }
}

impl fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.iter()).finish()
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: SmallVec::from_elem(ZERO, rows * cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn scalar(n: usize, s: C64) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = s;
        }
        m
    }

    pub fn diag(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Storage::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| rows[i][j])
    }

    /// Real matrix given row by row.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| C64::new(rows[i][j], 0.0))
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[ComplexVector]) -> Self {
        let rows = columns.first().map_or(0, |c| c.dim());
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    /// Outer product `u * v^t` (no conjugation).
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector {
            data: (0..self.rows).map(|i| self[(i, j)]).collect(),
        }
    }

    pub fn row(&self, i: usize) -> ComplexVector {
        ComplexVector::from_slice(&self.data[i * self.cols..(i + 1) * self.cols])
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|c| c.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|c| c * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance; panics on shape mismatch.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn mat_vec(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.cols, v.dim());
        ComplexVector {
            data: (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
                .collect(),
        }
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let (r, k) = (a.rows, a.cols);
        Self::from_fn(a.rows + c.rows, a.cols + b.cols, |i, j| {
            match (i < r, j < k) {
                (true, true) => a[(i, j)],
                (true, false) => b[(i, j - k)],
                (false, true) => c[(i - r, j)],
                (false, false) => d[(i - r, j - k)],
            }
        })
    }

    /// Block-diagonal sum `a ⊕ b`.
    pub fn direct_sum(a: &Self, b: &Self) -> Self {
        Self::block(
            a,
            &Self::zeros(a.rows, b.cols),
            &Self::zeros(b.rows, a.cols),
            b,
        )
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> Result<C64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = ONE;
        for k in 0..n {
            let mut p = k;
            let mut best = a[k * n + k].norm_sqr();
            for i in k + 1..n {
                let v = a[i * n + k].norm_sqr();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                return Ok(ZERO);
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let pivot = a[k * n + k];
            det *= pivot;
            for i in k + 1..n {
                let factor = a[i * n + k] / pivot;
                if factor == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let t = a[k * n + j];
                    a[i * n + j] -= factor * t;
                }
            }
        }
        Ok(det)
    }

    /// Symmetric part residual `‖a − aᵗ‖_F`.
    pub fn symmetry_residual(&self) -> f64 {
        self.distance(&self.transpose())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let c = self[(i, j)];
                write!(f, "{:>+.6}{:+.6}i  ", c.re, c.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Checked matrix product.
pub fn mat_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch {
            op: "mat_mul",
            left: (a.rows, a.cols),
            right: (b.rows, b.cols),
        });
    }
    let mut out = ComplexMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a[(i, k)];
            if aik == ZERO {
                continue;
            }
            for j in 0..b.cols {
                out.data[i * b.cols + j] += aik * b.data[k * b.cols + j];
            }
        }
    }
    Ok(out)
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        mat_mul(self, rhs).expect("matrix product shape mismatch")
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(-ONE)
    }
}

/// Complex cross product on ℂ³; conjugate-bilinear.
pub fn cross(z: &ComplexVector, w: &ComplexVector) -> ComplexVector {
    assert!(
        z.dim() == 3 && w.dim() == 3,
        "cross product needs dimension 3"
    );
    let (z1, z2, z3) = (z[0].conj(), z[1].conj(), z[2].conj());
    let (w1, w2, w3) = (w[0].conj(), w[1].conj(), w[2].conj());
    ComplexVector::from_slice(&[z2 * w3 - z3 * w2, z3 * w1 - z1 * w3, z1 * w2 - z2 * w1])
}

/// `‖a*a − 𝟙‖_F`.
pub fn unitarity_residual(a: &ComplexMatrix) -> f64 {
    let n = a.rows;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut s = ZERO;
            for k in 0..a.rows {
                s += a[(k, i)].conj() * a[(k, j)];
            }
            if i == j {
                s -= ONE;
            }
            acc += s.norm_sqr();
        }
    }
    acc.sqrt()
}

/// Membership outcome: whether the test passed, and the residual that decided it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub member: bool,
    pub residual: f64,
}

pub fn is_unitary(a: &ComplexMatrix, tol: f64) -> Result<Membership> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    let residual = unitarity_residual(a);
    Ok(Membership {
        member: residual <= tol,
        residual,
    })
}

/// Unitary with determinant one; residual is the larger of the two defects.
pub fn is_special_unitary(a: &ComplexMatrix, tol: f64) -> Result<Membership> {
    let u = is_unitary(a, tol)?;
    let det_defect = (a.det()? - ONE).norm();
    let residual = u.residual.max(det_defect);
    Ok(Membership {
        member: residual <= tol,
        residual,
    })
}

/// Layout of the skew form defining the symplectic group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymplecticConvention {
    /// Block-diagonal copies of `[[0,−1],[1,0]]`.
    Interleaved,
    /// `[[0,−𝟙],[𝟙,0]]`.
    Split,
}

impl fmt::Display for SymplecticConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Interleaved => "interleaved",
            Self::Split => "split",
        })
    }
}

pub fn j_matrix(m: usize, convention: SymplecticConvention) -> ComplexMatrix {
    let mut j = ComplexMatrix::zeros(2 * m, 2 * m);
    for k in 0..m {
        let (a, b) = match convention {
            SymplecticConvention::Interleaved => (2 * k, 2 * k + 1),
            SymplecticConvention::Split => (k, m + k),
        };
        j[(a, b)] = -ONE;
        j[(b, a)] = ONE;
    }
    j
}

/// Perfect shuffle `P` with `P · J_split · Pᵗ = J_interleaved`.
///
/// It sends basis vector `e_k` to `e_{2k}` and `e_{m+k}` to `e_{2k+1}`.
pub fn shuffle_permutation(m: usize) -> ComplexMatrix {
    let mut p = ComplexMatrix::zeros(2 * m, 2 * m);
    for k in 0..m {
        p[(2 * k, k)] = ONE;
        p[(2 * k + 1, m + k)] = ONE;
    }
    p
}

/// Rewrites a matrix given in one symplectic convention into the other.
pub fn convert_convention(a: &ComplexMatrix, from: SymplecticConvention) -> ComplexMatrix {
    let p = shuffle_permutation(a.rows() / 2);
    match from {
        SymplecticConvention::Split => &(&p * a) * &p.transpose(),
        SymplecticConvention::Interleaved => &(&p.transpose() * a) * &p,
    }
}

/// Special unitary and `aᵗJa = J`; residual is the largest defect.
pub fn is_symplectic(
    a: &ComplexMatrix,
    convention: SymplecticConvention,
    tol: f64,
) -> Result<Membership> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    if a.rows % 2 != 0 {
        return Err(Error::OddSize(a.rows));
    }
    let su = is_special_unitary(a, tol)?;
    let j = j_matrix(a.rows / 2, convention);
    let form = &(&a.transpose() * &j) * a;
    let residual = su.residual.max(form.distance(&j));
    Ok(Membership {
        member: residual <= tol,
        residual,
    })
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha20Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    })
}

/// Gram–Schmidt on the columns, in place.
fn orthonormalize_columns(a: &mut ComplexMatrix) {
    let n = a.cols;
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let mut proj = ZERO;
                for i in 0..a.rows {
                    proj += a[(i, k)].conj() * a[(i, j)];
                }
                for i in 0..a.rows {
                    let t = a[(i, k)];
                    a[(i, j)] -= proj * t;
                }
            }
        }
        let norm = (0..a.rows)
            .map(|i| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        for i in 0..a.rows {
            a[(i, j)] /= norm;
        }
    }
}

/// Random element of SU(n), deterministic per seed.
///
/// A complex Gaussian matrix is orthonormalized column by column and the
/// last column is rotated by the conjugate determinant phase.
pub fn random_special_unitary(n: usize, seed: u64) -> ComplexMatrix {
    assert!(n >= 1);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut a = gaussian_matrix(n, n, &mut rng);
    orthonormalize_columns(&mut a);
    let det = a.det().expect("square");
    let phase = (det / det.norm()).conj();
    for i in 0..n {
        a[(i, n - 1)] *= phase;
    }
    a
}

/// Random element of Sp(m) in the given convention, deterministic per seed.
///
/// Columns are built in pairs `v, J·v̄` from orthonormalized Gaussian vectors.
pub fn random_symplectic(m: usize, convention: SymplecticConvention, seed: u64) -> ComplexMatrix {
    assert!(m >= 1);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let g = gaussian_matrix(2 * m, m, &mut rng);
    let j = j_matrix(m, SymplecticConvention::Interleaved);
    let mut cols: Vec<ComplexVector> = Vec::with_capacity(2 * m);
    for k in 0..m {
        let mut v = g.column(k);
        for _pass in 0..2 {
            for c in &cols {
                let proj = c.inner(&v);
                v = v.sub(&c.scale(proj));
            }
        }
        let norm = v.norm();
        v = v.scale(C64::new(1.0 / norm, 0.0));
        let partner = j.mat_vec(&v.conj());
        cols.push(v);
        cols.push(partner);
    }
    let a = ComplexMatrix::from_columns(&cols);
    match convention {
        SymplecticConvention::Interleaved => a,
        SymplecticConvention::Split => convert_convention(&a, SymplecticConvention::Interleaved),
    }
}

/// Real determinant of an `n × n` row-major matrix; the buffer is consumed.
pub fn real_det(n: usize, a: &mut [f64]) -> f64 {
    debug_assert_eq!(a.len(), n * n);
    let mut det = 1.0;
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].abs();
        for i in k + 1..n {
            let v = a[i * n + k].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let pivot = a[k * n + k];
        det *= pivot;
        for i in k + 1..n {
            let factor = a[i * n + k] / pivot;
            for j in k + 1..n {
                a[i * n + j] -= factor * a[k * n + j];
            }
        }
    }
    det
}

/// Solves `a x = b` for real `n × n` `a`; `None` when singular.
pub fn real_solve(n: usize, a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let mut m = a.to_vec();
    let mut x = b.to_vec();
    for k in 0..n {
        let mut p = k;
        for i in k + 1..n {
            if m[i * n + k].abs() > m[p * n + k].abs() {
                p = i;
            }
        }
        if m[p * n + k].abs() < 1e-300 {
            return None;
        }
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            x.swap(k, p);
        }
        for i in k + 1..n {
            let f = m[i * n + k] / m[k * n + k];
            for j in k..n {
                m[i * n + j] -= f * m[k * n + j];
            }
            x[i] -= f * x[k];
        }
    }
    for k in (0..n).rev() {
        let mut s = x[k];
        for j in k + 1..n {
            s -= m[k * n + j] * x[j];
        }
        x[k] = s / m[k * n + k];
    }
    Some(x)
}
