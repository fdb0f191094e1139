//! Brouwer degree of sphere self-maps: a Monte-Carlo average of the oriented
//! Jacobian, a Newton preimage counter to cross-check it, and the column
//! degree certification of generators.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{is_symplectic, real_det, real_solve, SymplecticConvention};
use crate::maps::{SelfSphereMap, UnitarySphereMap};
use crate::sphere::{dist, frame_into, norm, sample_into, sample_point, SpherePoint, StereoChart};
use crate::verify::Status;

pub const DEFAULT_H: f64 = 1e-5;
pub const MIN_SAMPLES: usize = 10_000;
/// Samples per accumulation chunk; fixed so merging never depends on threads.
const CHUNK: usize = 2048;
const RICHARDSON_EVERY: u64 = 100;
const RICHARDSON_TOL: f64 = 1e-3;
/// Fraction of non-finite densities tolerated before giving up.
const NONFINITE_FRACTION: f64 = 1e-4;
/// A wrong certified integer is reported as FAIL only below this stderr′.
const DECISIVE_STDERR: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeMethod {
    MonteCarlo,
    Preimage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeEstimate {
    pub raw: f64,
    pub stderr: f64,
    pub samples: usize,
    pub rounded: i64,
    pub certified: bool,
    pub method: DegreeMethod,
    pub seed: u64,
    /// Samples whose density moved by more than 1e−3 when h was halved.
    pub flagged: usize,
    pub nonfinite: usize,
}

impl DegreeEstimate {
    fn from_stats(s: &Stats, seed: u64, flagged: usize, nonfinite: usize) -> Self {
        let raw = s.mean;
        let stderr = if s.n > 1 {
            (s.m2 / (s.n - 1) as f64).sqrt() / (s.n as f64).sqrt()
        } else {
            f64::INFINITY
        };
        let rounded = raw.round() as i64;
        Self {
            raw,
            stderr,
            samples: s.n as usize,
            rounded,
            certified: certifies(raw, stderr),
            method: DegreeMethod::MonteCarlo,
            seed,
            flagged,
            nonfinite,
        }
    }

    /// `max(stderr, 1e−6)`.
    pub fn stderr_floor(&self) -> f64 {
        self.stderr.max(1e-6)
    }
}

/// `|raw − round(raw)| < min(0.2, 3·max(stderr, 1e−6))`.
pub fn certifies(raw: f64, stderr: f64) -> bool {
    raw.is_finite() && (raw - raw.round()).abs() < (3.0 * stderr.max(1e-6)).min(0.2)
}

/// Budget and numerics of a Monte-Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeConfig {
    pub samples: usize,
    pub seed: u64,
    pub h: f64,
    /// 0 uses the ambient rayon pool.
    pub threads: usize,
}

impl Default for DegreeConfig {
    fn default() -> Self {
        Self {
            samples: 100_000,
            seed: 0,
            h: DEFAULT_H,
            threads: 0,
        }
    }
}

impl DegreeConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            ..Self::default()
        }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn with_h(mut self, h: f64) -> Self {
        self.h = h;
        self
    }
}

fn check_h(h: f64) -> Result<()> {
    if !(1e-7..=1e-3).contains(&h) {
        return Err(Error::OutOfRange {
            name: "h",
            value: h,
            lo: 1e-7,
            hi: 1e-3,
        });
    }
    Ok(())
}

fn normalize(v: &mut [f64]) {
    let n = norm(v);
    v.iter_mut().for_each(|c| *c /= n);
}

/// A point function S^m → (S^m)^k; `k` blocks of `m+1` reals.
struct Field<'a> {
    m: usize,
    k: usize,
    eval: &'a (dyn Fn(&[f64], &mut [f64]) + Sync),
}

/// Reusable buffers for one thread.
struct Scratch {
    frame_x: Vec<f64>,
    frames_y: Vec<f64>,
    center: Vec<f64>,
    point: Vec<f64>,
    plus: Vec<f64>,
    minus: Vec<f64>,
    jac: Vec<f64>,
}

impl Scratch {
    fn new(m: usize, k: usize) -> Self {
        let d = m + 1;
        Self {
            frame_x: vec![0.0; m * d],
            frames_y: vec![0.0; k * m * d],
            center: vec![0.0; k * d],
            point: vec![0.0; d],
            plus: vec![0.0; k * d],
            minus: vec![0.0; k * d],
            jac: vec![0.0; k * m * m],
        }
    }
}

impl Field<'_> {
    /// Oriented Jacobian determinant of every block at `x`, written to `out`.
    fn densities(&self, x: &[f64], h: f64, s: &mut Scratch, out: &mut [f64]) {
        let (m, d, k) = (self.m, self.m + 1, self.k);
        frame_into(x, &mut s.frame_x);
        (self.eval)(x, &mut s.center);
        for b in 0..k {
            let y = &mut s.center[b * d..(b + 1) * d];
            normalize(y);
            frame_into(y, &mut s.frames_y[b * m * d..(b + 1) * m * d]);
        }
        // x ± h v renormalized is x cos a ± v sin a with tan a = h
        let scale = 1.0 / (2.0 * h / (1.0 + h * h).sqrt());
        for i in 0..m {
            let v = &s.frame_x[i * d..(i + 1) * d];
            for (sign, buf) in [(1.0, &mut s.plus), (-1.0, &mut s.minus)] {
                for ((p, xi), vi) in s.point.iter_mut().zip(x).zip(v) {
                    *p = xi + sign * h * vi;
                }
                normalize(&mut s.point);
                (self.eval)(&s.point, buf);
                for blk in buf.chunks_exact_mut(d) {
                    normalize(blk);
                }
            }
            for b in 0..k {
                let (fp, fm) = (&s.plus[b * d..(b + 1) * d], &s.minus[b * d..(b + 1) * d]);
                let frame = &s.frames_y[b * m * d..(b + 1) * m * d];
                for (j, w) in frame.chunks_exact(d).enumerate() {
                    let diff: f64 = w
                        .iter()
                        .zip(fp.iter().zip(fm))
                        .map(|(wi, (a, c))| wi * (a - c))
                        .sum();
                    s.jac[b * m * m + j * m + i] = diff * scale;
                }
            }
        }
        for (b, o) in out.iter_mut().enumerate() {
            *o = real_det(m, &mut s.jac[b * m * m..(b + 1) * m * m]);
        }
    }
}

fn self_map_field(f: &SelfSphereMap) -> Result<Field<'_>> {
    if !f.is_self_map() {
        return Err(Error::DomainMismatch(format!(
            "{} maps S{} to S{}; a self-map is required",
            f.name(),
            f.domain_dim(),
            f.target_dim()
        )));
    }
    Ok(Field {
        m: f.domain_dim(),
        k: 1,
        eval: f.eval_fn(),
    })
}

/// Oriented Jacobian determinant of `f` at `x` by central differences.
pub fn jacobian_sign_density(f: &SelfSphereMap, x: &SpherePoint, h: f64) -> Result<f64> {
    check_h(h)?;
    let field = self_map_field(f)?;
    if x.sphere_dim() != field.m {
        return Err(Error::DomainMismatch(format!(
            "point on S{} for a map on S{}",
            x.sphere_dim(),
            field.m
        )));
    }
    let mut s = Scratch::new(field.m, 1);
    let mut out = [0.0];
    field.densities(x.coords(), h, &mut s, &mut out);
    Ok(out[0])
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Stats {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Stats {
    fn push(&mut self, v: f64) {
        self.n += 1;
        let delta = v - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (v - self.mean);
    }

    fn merge(a: Stats, b: Stats) -> Stats {
        if a.n == 0 {
            return b;
        }
        if b.n == 0 {
            return a;
        }
        let n = a.n + b.n;
        let delta = b.mean - a.mean;
        Stats {
            n,
            mean: a.mean + delta * b.n as f64 / n as f64,
            m2: a.m2 + b.m2 + delta * delta * (a.n as f64 * b.n as f64) / n as f64,
        }
    }
}

#[derive(Debug, Clone, Default)]
struct ChunkResult {
    stats: Vec<Stats>,
    flagged: Vec<usize>,
    nonfinite: Vec<usize>,
}

fn merge_chunks(a: ChunkResult, b: ChunkResult) -> ChunkResult {
    ChunkResult {
        stats: a
            .stats
            .iter()
            .zip(&b.stats)
            .map(|(x, y)| Stats::merge(*x, *y))
            .collect(),
        flagged: a
            .flagged
            .iter()
            .zip(&b.flagged)
            .map(|(x, y)| x + y)
            .collect(),
        nonfinite: a
            .nonfinite
            .iter()
            .zip(&b.nonfinite)
            .map(|(x, y)| x + y)
            .collect(),
    }
}

/// Pairwise merge in a fixed tree shape.
fn tree_merge(mut parts: Vec<ChunkResult>) -> ChunkResult {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => merge_chunks(a, b),
                None => a,
            });
        }
        parts = next;
    }
    parts.pop().unwrap_or_default()
}

fn run_chunk(field: &Field<'_>, cfg: &DegreeConfig, lo: usize, hi: usize) -> ChunkResult {
    let k = field.k;
    let mut s = Scratch::new(field.m, k);
    let mut res = ChunkResult {
        stats: vec![Stats::default(); k],
        flagged: vec![0; k],
        nonfinite: vec![0; k],
    };
    let mut x = vec![0.0; field.m + 1];
    let mut dens = vec![0.0; k];
    let mut check = vec![0.0; k];
    for idx in lo as u64..hi as u64 {
        sample_into(cfg.seed, idx, &mut x);
        field.densities(&x, cfg.h, &mut s, &mut dens);
        if idx % RICHARDSON_EVERY == 0 {
            field.densities(&x, cfg.h / 2.0, &mut s, &mut check);
            for b in 0..k {
                if !((dens[b] - check[b]).abs() <= RICHARDSON_TOL) {
                    res.flagged[b] += 1;
                }
            }
        }
        for b in 0..k {
            if dens[b].is_finite() {
                res.stats[b].push(dens[b]);
            } else {
                res.nonfinite[b] += 1;
            }
        }
    }
    res
}

fn with_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> T {
    if threads == 0 {
        return job();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(job),
        Err(_) => job(),
    }
}

fn estimate_field(field: &Field<'_>, cfg: &DegreeConfig) -> Result<Vec<DegreeEstimate>> {
    check_h(cfg.h)?;
    if cfg.samples < MIN_SAMPLES {
        return Err(Error::InsufficientBudget {
            samples: cfg.samples,
            minimum: MIN_SAMPLES,
        });
    }
    let chunks = cfg.samples.div_ceil(CHUNK);
    let parts: Vec<ChunkResult> = with_pool(cfg.threads, || {
        (0..chunks)
            .into_par_iter()
            .map(|c| run_chunk(field, cfg, c * CHUNK, ((c + 1) * CHUNK).min(cfg.samples)))
            .collect()
    });
    let total = tree_merge(parts);
    let mut out = Vec::with_capacity(field.k);
    for b in 0..field.k {
        let bad = total.nonfinite[b];
        if bad as f64 > NONFINITE_FRACTION * cfg.samples as f64 {
            return Err(Error::NonFiniteDensity {
                bad,
                samples: cfg.samples,
            });
        }
        out.push(DegreeEstimate::from_stats(
            &total.stats[b],
            cfg.seed,
            total.flagged[b],
            bad,
        ));
    }
    Ok(out)
}

/// Monte-Carlo degree of a self-map with the given budget.
pub fn degree_mc_with(f: &SelfSphereMap, cfg: &DegreeConfig) -> Result<DegreeEstimate> {
    let field = self_map_field(f)?;
    Ok(estimate_field(&field, cfg)?.remove(0))
}

pub fn degree_mc(f: &SelfSphereMap, samples: usize, seed: u64, h: f64) -> Result<DegreeEstimate> {
    degree_mc_with(
        f,
        &DegreeConfig {
            samples,
            seed,
            h,
            threads: 0,
        },
    )
}

fn check_column_domain(theta: &UnitarySphereMap) -> Result<usize> {
    let n = theta.target_size();
    if theta.domain_dim() != 2 * n - 1 {
        return Err(Error::DomainMismatch(format!(
            "{} is {}; column degrees need S{}",
            theta.name(),
            theta.signature(),
            2 * n - 1
        )));
    }
    Ok(n)
}

/// Degrees of all columns of `θ : S^{2n−1} → U(n)` from one shared sample set.
///
/// Identical to running [`degree_mc_with`] on each `column(θ, j)` with the
/// same configuration, at the cost of a single matrix evaluation per point.
pub fn column_degrees(theta: &UnitarySphereMap, cfg: &DegreeConfig) -> Result<Vec<DegreeEstimate>> {
    let n = check_column_domain(theta)?;
    let eval = |x: &[f64], out: &mut [f64]| {
        let a = theta.eval_coords(x);
        for j in 0..n {
            for i in 0..n {
                let c = a[(i, j)];
                out[j * 2 * n + 2 * i] = c.re;
                out[j * 2 * n + 2 * i + 1] = c.im;
            }
        }
    };
    let field = Field {
        m: 2 * n - 1,
        k: n,
        eval: &eval,
    };
    estimate_field(&field, cfg)
}

/// One located preimage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub point: Vec<f64>,
    pub jacobian: f64,
    pub sign: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreimageCount {
    pub degree: i64,
    pub method: DegreeMethod,
    pub roots: Vec<Root>,
    pub starts: usize,
    pub converged: usize,
    pub second_target: Vec<f64>,
    pub second_roots: usize,
}

const NEWTON_ITERS: usize = 60;
const DEDUP_RADIUS: f64 = 1e-6;
const REGULAR_MIN: f64 = 1e-6;
/// Largest chart step; keeps iterates away from the chart's pole.
const MAX_STEP: f64 = 0.5;

/// Newton solve of `f(x) = target` from `x0`, in a chart centred at `x0`.
fn newton(f: &SelfSphereMap, target_chart: &StereoChart, x0: &[f64], tol: f64) -> Option<Vec<f64>> {
    let m = f.domain_dim();
    let neg: Vec<f64> = x0.iter().map(|c| -c).collect();
    let chart = StereoChart::new(&neg);
    let mut fx = vec![0.0; m + 1];
    let mut residual = |u: &[f64]| -> Option<Vec<f64>> {
        let x = chart.lift(u);
        f.eval_into(&x, &mut fx);
        normalize(&mut fx);
        target_chart.project(&fx).ok()
    };
    let mut u = vec![0.0; m];
    let mut jac = vec![0.0; m * m];
    for _ in 0..NEWTON_ITERS {
        let r = residual(&u)?;
        if norm(&r) < tol {
            return Some(chart.lift(&u));
        }
        let step = 1e-6 * (1.0 + norm(&u));
        for i in 0..m {
            let mut up = u.clone();
            let mut um = u.clone();
            up[i] += step;
            um[i] -= step;
            let (rp, rm) = (residual(&up)?, residual(&um)?);
            for j in 0..m {
                jac[j * m + i] = (rp[j] - rm[j]) / (2.0 * step);
            }
        }
        let mut delta = real_solve(m, &jac, &r)?;
        let len = norm(&delta);
        if !len.is_finite() {
            return None;
        }
        if len > MAX_STEP * (1.0 + norm(&u)) {
            let s = MAX_STEP * (1.0 + norm(&u)) / len;
            delta.iter_mut().for_each(|c| *c *= s);
        }
        for (ui, di) in u.iter_mut().zip(&delta) {
            *ui -= di;
        }
        if norm(&u) > 1e6 {
            return None;
        }
    }
    let r = residual(&u)?;
    (norm(&r) < tol).then(|| chart.lift(&u))
}

fn count_preimages(
    f: &SelfSphereMap,
    target: &[f64],
    starts: usize,
    seed: u64,
    newton_tol: f64,
) -> Result<(i64, Vec<Root>, usize)> {
    let m = f.domain_dim();
    let neg: Vec<f64> = target.iter().map(|c| -c).collect();
    let target_chart = StereoChart::new(&neg);
    let found: Vec<Option<Vec<f64>>> = (0..starts as u64)
        .into_par_iter()
        .map(|i| {
            let x0 = sample_point(m, seed, i);
            newton(f, &target_chart, x0.coords(), newton_tol)
        })
        .collect();
    let converged = found.iter().filter(|r| r.is_some()).count();
    let mut roots: Vec<Root> = Vec::new();
    for x in found.into_iter().flatten() {
        if roots.iter().any(|r| dist(&r.point, &x) < DEDUP_RADIUS) {
            continue;
        }
        let p = SpherePoint::normalized(&x, crate::sphere::default_view(m + 1))?;
        let jacobian = jacobian_sign_density(f, &p, DEFAULT_H)?;
        if jacobian.abs() < REGULAR_MIN {
            return Err(Error::NonRegularTarget { jacobian });
        }
        roots.push(Root {
            point: p.coords().to_vec(),
            jacobian,
            sign: jacobian.signum() as i64,
        });
    }
    let degree = roots.iter().map(|r| r.sign).sum();
    Ok((degree, roots, converged))
}

/// Signed preimage count of `target`, repeated on a second seeded target.
pub fn degree_preimage(
    f: &SelfSphereMap,
    target: &SpherePoint,
    starts: usize,
    seed: u64,
    newton_tol: f64,
) -> Result<PreimageCount> {
    self_map_field(f)?;
    let m = f.domain_dim();
    if target.sphere_dim() != m {
        return Err(Error::DomainMismatch(format!(
            "target on S{} for a map on S{}",
            target.sphere_dim(),
            m
        )));
    }
    let (degree, roots, converged) = count_preimages(f, target.coords(), starts, seed, newton_tol)?;
    let second = sample_point(m, seed ^ 0x5EC0_4D7A_2647_1E55, 0);
    let (second_degree, second_roots, _) =
        count_preimages(f, second.coords(), starts, seed.wrapping_add(1), newton_tol)?;
    if degree != second_degree {
        return Err(Error::InsufficientStarts {
            first: degree,
            second: second_degree,
        });
    }
    Ok(PreimageCount {
        degree,
        method: DegreeMethod::Preimage,
        roots,
        starts,
        converged,
        second_target: second.coords().to_vec(),
        second_roots: second_roots.len(),
    })
}

/// Outcome of a column-degree generator test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub map: String,
    pub expected_magnitude: i64,
    pub columns: Vec<DegreeEstimate>,
    pub status: Status,
    pub detail: String,
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

fn judge(map: &str, expected: i64, columns: Vec<DegreeEstimate>) -> CertificationReport {
    let degrees: Vec<i64> = columns.iter().map(|c| c.rounded).collect();
    let (status, detail) = if let Some(j) = columns.iter().position(|c| !c.certified) {
        let c = &columns[j];
        (
            Status::Inconclusive,
            format!(
                "column {} uncertified: raw {:.4} ± {:.4} over {} samples",
                j + 1,
                c.raw,
                c.stderr,
                c.samples
            ),
        )
    } else {
        let magnitudes_ok = degrees.iter().all(|d| d.abs() == expected);
        let signs_ok = degrees.iter().all(|d| d.signum() == degrees[0].signum());
        if magnitudes_ok && signs_ok {
            (
                Status::Pass,
                format!("column degrees {degrees:?}, |degree| = {expected}"),
            )
        } else {
            let why = if magnitudes_ok {
                format!("column degrees {degrees:?} disagree in sign")
            } else {
                format!("column degrees {degrees:?}, expected ±{expected}")
            };
            let decisive = columns.iter().all(|c| c.stderr_floor() <= DECISIVE_STDERR);
            if decisive {
                (Status::Fail, why)
            } else {
                (
                    Status::Inconclusive,
                    format!("{why}, but stderr too large to reject"),
                )
            }
        }
    };
    CertificationReport {
        map: map.to_string(),
        expected_magnitude: expected,
        columns,
        status,
        detail,
    }
}

fn budget_report(map: &str, expected: i64, err: Error) -> Result<CertificationReport> {
    match err {
        Error::InsufficientBudget { .. } => Ok(CertificationReport {
            map: map.to_string(),
            expected_magnitude: expected,
            columns: Vec::new(),
            status: Status::Inconclusive,
            detail: err.to_string(),
        }),
        other => Err(other),
    }
}

/// Column-degree test of `θ : S^{2n−1} → U(n)` against `±(n−1)!`.
pub fn certify_generator(
    theta: &UnitarySphereMap,
    cfg: &DegreeConfig,
) -> Result<CertificationReport> {
    let n = check_column_domain(theta)?;
    let expected = factorial(n - 1);
    match column_degrees(theta, cfg) {
        Ok(cols) => Ok(judge(theta.name(), expected, cols)),
        Err(e) => budget_report(theta.name(), expected, e),
    }
}

/// Column-degree test of `g : S^{4m−1} → Sp(m)`: `(2m−1)!` for odd `m`,
/// `2·(2m−1)!` for even `m`, one signed value on every column.
pub fn certify_sp_generator(
    g: &UnitarySphereMap,
    cfg: &DegreeConfig,
) -> Result<CertificationReport> {
    let size = g.target_size();
    if size % 2 == 1 {
        return Err(Error::OddSize(size));
    }
    let m = size / 2;
    if g.domain_dim() != 4 * m - 1 {
        return Err(Error::DomainMismatch(format!(
            "{} is {}; Sp({m}) generators live on S{}",
            g.name(),
            g.signature(),
            4 * m - 1
        )));
    }
    for i in 0..16 {
        let x = sample_point(g.domain_dim(), 0x5A5A, i);
        let membership = is_symplectic(&g.eval(&x), SymplecticConvention::Interleaved, 1e-9)?;
        if !membership.member {
            return Err(Error::NotSymplectic {
                residual: membership.residual,
            });
        }
    }
    let base = factorial(2 * m - 1);
    let expected = if m % 2 == 1 { base } else { 2 * base };
    match column_degrees(g, cfg) {
        Ok(cols) => Ok(judge(g.name(), expected, cols)),
        Err(e) => budget_report(g.name(), expected, e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{column, eta_cross, zeta, SphereMap};
    use crate::sphere::sample_uniform;

    #[test]
    fn densities_of_linear_maps() {
        for x in sample_uniform(3, 50, 1) {
            let id = jacobian_sign_density(&SphereMap::identity(3), &x, DEFAULT_H).unwrap();
            assert!((id - 1.0).abs() < 1e-6);
            let conj =
                jacobian_sign_density(&SphereMap::complex_conjugation(2), &x, DEFAULT_H).unwrap();
            assert!((conj - 1.0).abs() < 1e-6);
        }
        for x in sample_uniform(2, 50, 2) {
            let a = jacobian_sign_density(&SphereMap::antipodal(2), &x, DEFAULT_H).unwrap();
            assert!((a + 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn step_outside_range_is_rejected() {
        let x = sample_point(2, 0, 0);
        for h in [1e-8, 1e-2] {
            assert!(jacobian_sign_density(&SphereMap::identity(2), &x, h).is_err());
        }
    }

    #[test]
    fn small_budgets_are_refused() {
        let err = degree_mc(&SphereMap::identity(2), 1000, 0, DEFAULT_H).unwrap_err();
        assert!(matches!(err, Error::InsufficientBudget { .. }));
        let report = certify_generator(&zeta(2), &DegreeConfig::new(1000, 0)).unwrap();
        assert_eq!(report.status, Status::Inconclusive);
    }

    #[test]
    fn identity_and_antipodal_degrees() {
        let est = degree_mc(&SphereMap::identity(5), 100_000, 3, DEFAULT_H).unwrap();
        assert!(est.certified && est.rounded == 1);
        assert_eq!(est.flagged, 0);
        let est = degree_mc(&SphereMap::antipodal(2), 10_000, 3, DEFAULT_H).unwrap();
        assert!(est.certified && est.rounded == -1);
    }

    #[test]
    fn thread_count_does_not_change_bits() {
        let f = column(&zeta(2), 2).unwrap();
        let cfg = DegreeConfig::new(20_000, 11);
        let a = degree_mc_with(&f, &cfg.with_threads(1)).unwrap();
        let b = degree_mc_with(&f, &cfg.with_threads(3)).unwrap();
        assert_eq!(a.raw.to_bits(), b.raw.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    }

    #[test]
    fn column_pass_matches_single_columns() {
        let theta = eta_cross();
        let cfg = DegreeConfig::new(10_000, 5);
        let all = column_degrees(&theta, &cfg).unwrap();
        for (j, est) in all.iter().enumerate() {
            let single = degree_mc_with(&column(&theta, j + 1).unwrap(), &cfg).unwrap();
            assert_eq!(est.raw.to_bits(), single.raw.to_bits());
        }
    }

    #[test]
    fn zeta2_certifies_as_generator() {
        let report = certify_generator(&zeta(2), &DegreeConfig::new(100_000, 1)).unwrap();
        assert_eq!(report.status, Status::Pass, "{}", report.detail);
        assert!(report.columns.iter().all(|c| c.rounded == 1));
    }

    #[test]
    fn constant_map_fails_sp_test() {
        let one = UnitarySphereMap::constant("one", 7, crate::linalg::ComplexMatrix::identity(4));
        let report = certify_sp_generator(&one, &DegreeConfig::new(10_000, 1)).unwrap();
        assert_eq!(report.status, Status::Fail);
        assert!(report.columns.iter().all(|c| c.rounded == 0 && c.certified));
    }

    #[test]
    fn preimages_of_simple_maps() {
        let t = sample_point(3, 9, 0);
        let r = degree_preimage(&SphereMap::identity(3), &t, 50, 1, 1e-12).unwrap();
        assert_eq!((r.degree, r.roots.len()), (1, 1));
        let e3 = SpherePoint::new(&[0.0, 0.0, 1.0], crate::sphere::CoordView::Plain).unwrap();
        let r = degree_preimage(&SphereMap::antipodal(2), &e3, 50, 1, 1e-12).unwrap();
        assert_eq!((r.degree, r.roots.len()), (-1, 1));
        assert!(dist(&r.roots[0].point, &[0.0, 0.0, -1.0]) < 1e-9);
    }

    #[test]
    fn certification_threshold() {
        assert!(certifies(2.01, 0.01));
        assert!(!certifies(2.05, 0.01));
        assert!(!certifies(2.25, 1.0));
        assert!(certifies(0.0, 0.0));
        assert!(!certifies(f64::NAN, 0.1));
    }
}
