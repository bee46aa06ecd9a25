//! Pointwise curvature of explicit Kähler metrics, the Chen-Ogiue identity
//! and the Hermitian Yang-Mills test for the canonical extension
//! `0 → O → E → T_X → 0`.
//!
//! Conventions, fixed once for the module:
//!
//! * a metric is `ω = √-1 g_{ij̄} dz^i ∧ dz̄^j` with `g_{ij̄} = ∂_i ∂_j̄ Φ`, so
//!   `s·dd^c log(1 + |z|²)` represents `2πs·H` like the radial profiles;
//! * `R_{ij̄kl̄} = -∂_k ∂_l̄ g_{ij̄} + g^{q̄p} ∂_k g_{iq̄} ∂_l̄ g_{pj̄}`, which is
//!   `g_{ij̄}g_{kl̄} + g_{il̄}g_{kj̄}` for the unit Fubini-Study metric;
//! * `Ric_{kl̄} = g^{j̄i} R_{ij̄kl̄}` and `R = g^{l̄k} Ric_{kl̄}`;
//! * norms are sums of squared moduli of components in a unitary frame;
//! * the Hermitian Yang-Mills equation `(√-1/2π) F ∧ ϖ^{n-1} = K ϖ^n` is read
//!   with `ϖ = ω/2π`, whose class is the polarization `W/2π` used by
//!   [`IntersectionData::slope_tau`]. Then `K = (1/n) Σ_c F_{cc̄}` in a
//!   unitary frame of `ω`.
//!
//! Fubini-Study metrics and their products have closed-form curvature.
//! Radial profiles are differentiated numerically: the metric is rebuilt at
//! any point from interpolated momenta and its curvature is taken by
//! fourth-order central differences in the real coordinates.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::gauss_legendre;
use crate::intersect::{IntersectionData, TauClass};
use crate::radial::grid::{logistic, pairwise_sum};
use crate::radial::KahlerProfile;
use crate::tau::{rational_to_f64, TauPoly, TauRatio, TAU};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Default step of the finite-difference curvature.
pub const DEFAULT_FD_STEP: f64 = 1e-2;

/// Gauss-Legendre nodes per radial chart coordinate.
pub const SAMPLE_NODES: usize = 64;

/// A metric model with explicit potential.
#[derive(Clone, Debug)]
pub enum MetricModel {
    /// `scale · dd^c log(1 + |z|²)` on the affine chart of `P^n`.
    FubiniStudy { n: usize, scale: BigRational },
    /// A U(n)-invariant metric given by its profile.
    Radial(Box<KahlerProfile>),
    /// Riemannian product; coordinates are concatenated in factor order.
    Product(Vec<MetricModel>),
}

/// Components `R_{ij̄kl̄}`, stored at `((i n + j) n + k) n + l`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor4 {
    n: usize,
    data: Vec<C64>,
}

impl Tensor4 {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![C64::new(0.0, 0.0); n.pow(4)] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> C64 {
        self.data[self.idx(i, j, k, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: C64) {
        let x = self.idx(i, j, k, l);
        self.data[x] = v;
    }

    pub fn components(&self) -> &[C64] {
        &self.data
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Largest violation of `R_{ij̄kl̄} = R_{kj̄il̄} = R_{il̄kj̄}` and of
    /// `conj R_{ij̄kl̄} = R_{jīlk̄}`.
    pub fn kahler_symmetry_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.get(i, j, k, l);
                        worst = worst
                            .max((r - self.get(k, j, i, l)).norm())
                            .max((r - self.get(i, l, k, j)).norm())
                            .max((r.conj() - self.get(j, i, l, k)).norm());
                    }
                }
            }
        }
        worst
    }

    /// `R'_{abcd} = R_{ij̄kl̄} P_{ia} conj(P_{jb}) P_{kc} conj(P_{ld})`.
    fn transform(&self, p: &CMatrix) -> Self {
        let n = self.n;
        let mut cur = self.clone();
        // one index at a time; `slot` picks which of the four is contracted
        for slot in 0..4 {
            let mut next = Self::zeros(n);
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        for d in 0..n {
                            let mut acc = C64::new(0.0, 0.0);
                            for m in 0..n {
                                let (idx, pm) = match slot {
                                    0 => ([m, b, c, d], p[(m, a)]),
                                    1 => ([a, m, c, d], p[(m, b)].conj()),
                                    2 => ([a, b, m, d], p[(m, c)]),
                                    _ => ([a, b, c, m], p[(m, d)].conj()),
                                };
                                acc += cur.get(idx[0], idx[1], idx[2], idx[3]) * pm;
                            }
                            next.set(a, b, c, d, acc);
                        }
                    }
                }
            }
            cur = next;
        }
        cur
    }
}

/// Everything pointwise about the curvature of a metric.
#[derive(Clone, Debug)]
pub struct CurvatureFrame {
    pub point: Vec<C64>,
    /// `g_{ij̄}` in the chart.
    pub metric: CMatrix,
    /// `R_{ij̄kl̄}` in the chart.
    pub rm: Tensor4,
    /// `Ric_{kl̄}` in the chart.
    pub ricci: CMatrix,
    pub scalar: f64,
    /// `R` in a unitary frame of `g` at the point.
    pub rm_unitary: Tensor4,
    pub ricci_unitary: CMatrix,
    pub rm_norm2: f64,
    pub rm_tilde_norm2: f64,
    pub ric_tilde_norm2: f64,
    pub ric_minus_omega_norm2: f64,
}

impl CurvatureFrame {
    /// Assembles the frame from metric and curvature components.
    pub fn from_tensor(point: Vec<C64>, metric: CMatrix, rm: Tensor4) -> Result<Self> {
        let n = rm.dim();
        let inv = metric.clone().try_inverse().ok_or_else(not_kahler)?;
        let mut ricci = CMatrix::zeros(n, n);
        for k in 0..n {
            for l in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..n {
                    for j in 0..n {
                        acc += inv[(j, i)] * rm.get(i, j, k, l);
                    }
                }
                ricci[(k, l)] = acc;
            }
        }
        let p = unitary_frame(&metric)?;
        let rm_u = rm.transform(&p);
        let ric_u = p.transpose() * &ricci * p.map(|c| c.conj());
        let scalar: f64 = (0..n).map(|c| ric_u[(c, c)].re).sum();
        let nf = n as f64;
        let mut tilde = rm_u.clone();
        let lam = scalar / (nf * (nf + 1.0));
        for a in 0..n {
            for c in 0..n {
                let v = tilde.get(a, a, c, c) - lam;
                tilde.set(a, a, c, c, v);
                let v = tilde.get(a, c, c, a) - lam;
                tilde.set(a, c, c, a, v);
            }
        }
        let id = CMatrix::identity(n, n);
        let ric_tilde = &ric_u - &id * C64::new(scalar / nf, 0.0);
        let ric_minus_omega = &ric_u - &id;
        Ok(Self {
            point,
            metric,
            scalar,
            rm_norm2: rm_u.norm_sqr(),
            rm_tilde_norm2: tilde.norm_sqr(),
            ric_tilde_norm2: ric_tilde.norm_squared(),
            ric_minus_omega_norm2: ric_minus_omega.norm_squared(),
            rm,
            ricci,
            rm_unitary: rm_u,
            ricci_unitary: ric_u,
        })
    }

    pub fn dim(&self) -> usize {
        self.rm.dim()
    }

    /// Largest gap in `Ric = tr Rm` and `R = tr Ric`, recomputed in the
    /// unitary frame.
    pub fn contraction_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        let mut trace = 0.0;
        for k in 0..n {
            for l in 0..n {
                let s: C64 = (0..n).map(|i| self.rm_unitary.get(i, i, k, l)).sum();
                worst = worst.max((s - self.ricci_unitary[(k, l)]).norm());
            }
            trace += self.ricci_unitary[(k, k)].re;
        }
        worst.max((trace - self.scalar).abs())
    }

    pub fn to_json(&self) -> FrameJson {
        let cx = |c: &C64| [format!("{:e}", c.re), format!("{:e}", c.im)];
        let mat = |m: &CMatrix| {
            (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| cx(&m[(i, j)])).collect()).collect()
        };
        FrameJson {
            point: self.point.iter().map(cx).collect(),
            metric: mat(&self.metric),
            rm: self.rm.components().iter().map(cx).collect(),
            ricci: mat(&self.ricci),
            scalar: format!("{:e}", self.scalar),
            rm_norm2: format!("{:e}", self.rm_norm2),
            rm_tilde_norm2: format!("{:e}", self.rm_tilde_norm2),
            ric_tilde_norm2: format!("{:e}", self.ric_tilde_norm2),
            ric_minus_omega_norm2: format!("{:e}", self.ric_minus_omega_norm2),
        }
    }
}

/// Frame dump; complex numbers are `[re, im]` decimal strings and `rm` is
/// flattened in `(i, j, k, l)` row-major order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameJson {
    pub point: Vec<[String; 2]>,
    pub metric: Vec<Vec<[String; 2]>>,
    pub rm: Vec<[String; 2]>,
    pub ricci: Vec<Vec<[String; 2]>>,
    pub scalar: String,
    pub rm_norm2: String,
    pub rm_tilde_norm2: String,
    pub ric_tilde_norm2: String,
    pub ric_minus_omega_norm2: String,
}

fn not_kahler() -> Error {
    Error::NotKahler { node: 0 }
}

/// `P` with `Pᵀ g P̄ = I`, so that the columns of `P` are a unitary frame.
fn unitary_frame(g: &CMatrix) -> Result<CMatrix> {
    let chol = nalgebra::Cholesky::new(g.transpose()).ok_or_else(not_kahler)?;
    chol.l().adjoint().try_inverse().ok_or_else(not_kahler)
}

impl MetricModel {
    pub fn fubini_study(n: usize, scale: BigRational) -> Self {
        Self::FubiniStudy { n, scale }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::FubiniStudy { n, .. } => *n,
            Self::Radial(p) => p.n(),
            Self::Product(fs) => fs.iter().map(Self::dim).sum(),
        }
    }

    /// `∫ ω^n`.
    pub fn volume(&self) -> f64 {
        match self {
            Self::FubiniStudy { n, scale } => (TAU * rational_to_f64(scale)).powi(*n as i32),
            Self::Radial(p) => p.volume(),
            Self::Product(fs) => {
                // (Σω_i)^n expands with the multinomial coefficient
                let mut dims = 0;
                let mut acc = 1.0;
                for f in fs {
                    let d = f.dim();
                    acc *= f.volume() * binomial(dims + d, d);
                    dims += d;
                }
                acc
            }
        }
    }

    /// `g_{ij̄}` at `z`.
    pub fn metric(&self, z: &[C64]) -> Result<CMatrix> {
        self.check_point(z)?;
        match self {
            Self::FubiniStudy { n, scale } => {
                let s = rational_to_f64(scale);
                let q = 1.0 + z.iter().map(|c| c.norm_sqr()).sum::<f64>();
                Ok(CMatrix::from_fn(*n, *n, |i, j| {
                    let d = if i == j { 1.0 / q } else { 0.0 };
                    (C64::new(d, 0.0) - z[i].conj() * z[j] / (q * q)) * s
                }))
            }
            Self::Radial(p) => radial_metric(p, z),
            Self::Product(fs) => {
                let n = self.dim();
                let mut g = CMatrix::zeros(n, n);
                let mut off = 0;
                for f in fs {
                    let d = f.dim();
                    let block = f.metric(&z[off..off + d])?;
                    g.view_mut((off, off), (d, d)).copy_from(&block);
                    off += d;
                }
                Ok(g)
            }
        }
    }

    fn check_point(&self, z: &[C64]) -> Result<()> {
        if z.len() != self.dim() {
            return Err(Error::OutOfChart(format!("point has {} coordinates, model needs {}", z.len(), self.dim())));
        }
        if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::OutOfChart("non-finite coordinate".into()));
        }
        if let Self::Radial(p) = self {
            let r2: f64 = z.iter().map(|c| c.norm_sqr()).sum();
            let edge = p.grid().t_max();
            if r2 == 0.0 || r2.ln().abs() > edge {
                return Err(Error::OutOfChart(format!("log|z|² outside [-{edge}, {edge}]")));
            }
        }
        Ok(())
    }

    /// Curvature components at `z`: closed form for Fubini-Study factors,
    /// central differences with relative step `h` otherwise.
    pub fn curvature(&self, z: &[C64], h: f64) -> Result<Tensor4> {
        self.check_point(z)?;
        match self {
            Self::FubiniStudy { n, scale } => {
                let g = self.metric(z)?;
                let s = rational_to_f64(scale);
                let mut rm = Tensor4::zeros(*n);
                for i in 0..*n {
                    for j in 0..*n {
                        for k in 0..*n {
                            for l in 0..*n {
                                rm.set(i, j, k, l, (g[(i, j)] * g[(k, l)] + g[(i, l)] * g[(k, j)]) / s);
                            }
                        }
                    }
                }
                Ok(rm)
            }
            Self::Radial(p) => {
                let chart = AdaptedChart::new(z);
                let rm = fd_curvature(|w| chart.metric(p, w), &chart.center, chart.step(h))?;
                Ok(chart.to_original(&rm))
            }
            Self::Product(fs) => {
                let n = self.dim();
                let mut rm = Tensor4::zeros(n);
                let mut off = 0;
                for f in fs {
                    let d = f.dim();
                    let block = f.curvature(&z[off..off + d], h)?;
                    for i in 0..d {
                        for j in 0..d {
                            for k in 0..d {
                                for l in 0..d {
                                    rm.set(off + i, off + j, off + k, off + l, block.get(i, j, k, l));
                                }
                            }
                        }
                    }
                    off += d;
                }
                Ok(rm)
            }
        }
    }

    /// Largest `|∂_k g_{il̄} - ∂_i g_{kl̄}|`, which vanishes exactly when the
    /// metric is Kähler; zero by construction for the closed forms.
    pub fn kahler_torsion(&self, z: &[C64], h: f64) -> Result<f64> {
        self.check_point(z)?;
        match self {
            Self::FubiniStudy { .. } => Ok(0.0),
            Self::Radial(p) => {
                let n = self.dim();
                let chart = AdaptedChart::new(z);
                let f = |w: &[C64]| chart.metric(p, w);
                let d = holomorphic_first_derivatives(&f, &chart.center, chart.step(h))?;
                // components in a unitary frame, so the size is chart-free
                let p = unitary_frame(&f(&chart.center)?)?;
                let mut worst = 0.0f64;
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            let mut acc = C64::new(0.0, 0.0);
                            for k in 0..n {
                                for i in 0..n {
                                    for l in 0..n {
                                        let t = d[k][(i, l)] - d[i][(k, l)];
                                        acc += t * p[(k, a)] * p[(i, b)] * p[(l, c)].conj();
                                    }
                                }
                            }
                            worst = worst.max(acc.norm());
                        }
                    }
                }
                Ok(worst)
            }
            Self::Product(fs) => {
                let mut off = 0;
                let mut worst = 0.0f64;
                for f in fs {
                    let d = f.dim();
                    worst = worst.max(f.kahler_torsion(&z[off..off + d], h)?);
                    off += d;
                }
                Ok(worst)
            }
        }
    }

    /// Gauss-Legendre points of the radial charts with weights for `∫ · ω^n`.
    ///
    /// Each U(n)-invariant factor of dimension `d` is sampled at
    /// `z = (e^{t/2}, 0, …, 0)` with `σ(t)` on `nodes` Legendre nodes of
    /// `(0, 1)`; the weight is `(2π)^d d x^{d-1} x' / σ'`.
    pub fn sample_points(&self, nodes: usize) -> Vec<(Vec<C64>, f64)> {
        match self {
            Self::FubiniStudy { n, scale } => {
                let s = rational_to_f64(scale);
                radial_samples(*n, nodes, |sig| (s * sig, s * sig * (1.0 - sig)))
            }
            Self::Radial(p) => {
                let g = p.grid();
                radial_samples(p.n(), nodes, |sig| {
                    let t = (sig / (1.0 - sig)).ln();
                    (g.interpolate(p.x(), t), g.interpolate(p.dx(), t))
                })
            }
            Self::Product(fs) => {
                let mut out: Vec<(Vec<C64>, f64)> = vec![(Vec::new(), 1.0)];
                let mut dims = 0;
                for f in fs {
                    let d = f.dim();
                    let c = binomial(dims + d, d);
                    dims += d;
                    let pts = f.sample_points(nodes);
                    out = out
                        .iter()
                        .flat_map(|(z, w)| {
                            pts.iter().map(move |(zf, wf)| {
                                let mut zz = z.clone();
                                zz.extend_from_slice(zf);
                                (zz, w * wf * c)
                            })
                        })
                        .collect();
                }
                out
            }
        }
    }

    /// Whether every factor has closed-form curvature.
    pub fn is_closed_form(&self) -> bool {
        match self {
            Self::FubiniStudy { .. } => true,
            Self::Radial(_) => false,
            Self::Product(fs) => fs.iter().all(Self::is_closed_form),
        }
    }
}

/// Where a U(n)-invariant metric is differenced.
///
/// The point `z` is first rotated to `(r, 0, …, 0)`. For `r ≤ 1` the affine
/// coordinates are kept; for `r > 1` the chart `w_1 = 1/z_1`,
/// `w_j = z_j/z_1` at infinity is used, in which the metric stays bounded
/// and nondegenerate up to the divisor at infinity. In the affine chart the
/// radial eigenvalue `x'/r²` is `O(r^{-4})` against `O(r^{-2})` for the
/// others, and differencing there loses about `r^4` in accuracy.
struct AdaptedChart {
    /// Unitary `U` with `U z = (r, 0, …, 0)`.
    rotation: CMatrix,
    at_infinity: bool,
    center: Vec<C64>,
}

/// `x, x'` at `t`, or `OutOfChart` outside the mesh.
fn radial_momenta(p: &KahlerProfile, t: f64) -> Result<(f64, f64)> {
    let g = p.grid();
    if !(t.abs() <= g.t_max()) {
        return Err(Error::OutOfChart(format!("log|z|² = {t} outside [-{0}, {0}]", g.t_max())));
    }
    Ok((g.interpolate(p.x(), t), g.interpolate(p.dx(), t)))
}

/// `g = (x/r²)(δ - z̄z/r²) + (x'/r⁴) z̄z` in affine coordinates; the
/// projector form keeps the two momenta apart near the origin.
fn radial_metric(p: &KahlerProfile, z: &[C64]) -> Result<CMatrix> {
    let n = z.len();
    let r2: f64 = z.iter().map(|c| c.norm_sqr()).sum();
    let (x, dx) = radial_momenta(p, r2.ln())?;
    Ok(CMatrix::from_fn(n, n, |i, j| {
        let proj = z[i].conj() * z[j] / r2;
        let d = if i == j { 1.0 } else { 0.0 };
        ((C64::new(d, 0.0) - proj) * x + proj * dx) / r2
    }))
}

impl AdaptedChart {
    fn new(z: &[C64]) -> Self {
        let n = z.len();
        let r = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        // Gram-Schmidt from z/r through the standard basis
        let mut cols: Vec<Vec<C64>> = vec![z.iter().map(|c| c / r).collect()];
        for k in 0..n {
            if cols.len() == n {
                break;
            }
            let mut v = vec![C64::new(0.0, 0.0); n];
            v[k] = C64::new(1.0, 0.0);
            for _ in 0..2 {
                for q in &cols {
                    let dot: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= dot * qi;
                    }
                }
            }
            let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if norm > 0.5 {
                cols.push(v.into_iter().map(|c| c / norm).collect());
            }
        }
        let rotation = CMatrix::from_fn(n, n, |a, i| cols[a][i].conj());
        let at_infinity = r > 1.0;
        let mut center = vec![C64::new(0.0, 0.0); n];
        center[0] = C64::new(if at_infinity { 1.0 / r } else { r }, 0.0);
        Self { rotation, at_infinity, center }
    }

    /// Relative step; the metric varies on the scale `|w|` near the chart
    /// origin, the pole of the profile.
    fn step(&self, h: f64) -> f64 {
        h * self.center[0].re
    }

    /// The model metric in chart coordinates.
    ///
    /// At infinity `log|z|² = log(1 + |w'|²) - log|w_1|²` with the second
    /// term pluriharmonic, so `g = x' ∂t ∂̄t + x ω_FS(w')` with
    /// `∂t = (-1/w_1, w̄'/(1 + |w'|²))`; building it this way avoids the
    /// cancellation of the pulled-back affine metric.
    fn metric(&self, p: &KahlerProfile, w: &[C64]) -> Result<CMatrix> {
        if !self.at_infinity {
            return radial_metric(p, w);
        }
        let n = w.len();
        let q = 1.0 + w[1..].iter().map(|c| c.norm_sqr()).sum::<f64>();
        let t = q.ln() - w[0].norm_sqr().ln();
        let (x, dx) = radial_momenta(p, t)?;
        let mut dt = vec![-C64::new(1.0, 0.0) / w[0]];
        dt.extend(w[1..].iter().map(|c| c.conj() / q));
        Ok(CMatrix::from_fn(n, n, |i, j| {
            let mut v = dt[i] * dt[j].conj() * dx;
            if i > 0 && j > 0 {
                let d = if i == j { 1.0 / q } else { 0.0 };
                v += (C64::new(d, 0.0) - w[i].conj() * w[j] / (q * q)) * x;
            }
            v
        }))
    }

    /// Chart components at the center back to affine components at the
    /// original point.
    fn to_original(&self, rm: &Tensor4) -> Tensor4 {
        let n = rm.dim();
        let at_axis = if self.at_infinity {
            // ∂w/∂z at (r, 0, …, 0) with w_1 = 1/r
            let w1 = self.center[0].re;
            let k = CMatrix::from_fn(n, n, |a, i| match (a, i) {
                (0, 0) => C64::new(-w1 * w1, 0.0),
                (a, i) if a == i => C64::new(w1, 0.0),
                _ => C64::new(0.0, 0.0),
            });
            rm.transform(&k)
        } else {
            rm.clone()
        };
        at_axis.transform(&self.rotation)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn radial_samples(d: usize, nodes: usize, momenta: impl Fn(f64) -> (f64, f64)) -> Vec<(Vec<C64>, f64)> {
    gauss_legendre(nodes)
        .into_iter()
        .map(|(sig, w)| {
            let (x, dx) = momenta(sig);
            let r = (sig / (1.0 - sig)).sqrt();
            let mut z = vec![C64::new(0.0, 0.0); d];
            z[0] = C64::new(r, 0.0);
            let weight = TAU.powi(d as i32) * d as f64 * x.powi(d as i32 - 1) * dx / (sig * (1.0 - sig));
            (z, w * weight)
        })
        .collect()
}

/// Curvature frame of `model` at `point`.
pub fn curvature_tensors(model: &MetricModel, point: &[C64]) -> Result<CurvatureFrame> {
    curvature_tensors_with_step(model, point, DEFAULT_FD_STEP)
}

pub fn curvature_tensors_with_step(model: &MetricModel, point: &[C64], h: f64) -> Result<CurvatureFrame> {
    let g = model.metric(point)?;
    let rm = model.curvature(point, h)?;
    CurvatureFrame::from_tensor(point.to_vec(), g, rm)
}

const D1: [f64; 5] = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
const D2: [f64; 5] = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];

/// Real coordinate `a` of `z`: `Re z_{a/2}` for even `a`, `Im` for odd.
fn shifted(z: &[C64], moves: &[(usize, f64)]) -> Vec<C64> {
    let mut w = z.to_vec();
    for &(a, d) in moves {
        if a % 2 == 0 {
            w[a / 2].re += d;
        } else {
            w[a / 2].im += d;
        }
    }
    w
}

type MetricFn<'a> = dyn Fn(&[C64]) -> Result<CMatrix> + 'a;

fn real_first_derivative(f: &MetricFn, z: &[C64], a: usize, h: f64) -> Result<CMatrix> {
    let n = z.len();
    let mut acc = CMatrix::zeros(n, n);
    for (s, w) in D1.iter().enumerate() {
        if *w != 0.0 {
            acc += f(&shifted(z, &[(a, (s as f64 - 2.0) * h)]))? * C64::new(*w / h, 0.0);
        }
    }
    Ok(acc)
}

fn real_second_derivative(f: &MetricFn, z: &[C64], a: usize, b: usize, h: f64) -> Result<CMatrix> {
    let n = z.len();
    let mut acc = CMatrix::zeros(n, n);
    if a == b {
        for (s, w) in D2.iter().enumerate() {
            acc += f(&shifted(z, &[(a, (s as f64 - 2.0) * h)]))? * C64::new(*w / (h * h), 0.0);
        }
    } else {
        for (s, ws) in D1.iter().enumerate() {
            for (r, wr) in D1.iter().enumerate() {
                if *ws != 0.0 && *wr != 0.0 {
                    let w = shifted(z, &[(a, (s as f64 - 2.0) * h), (b, (r as f64 - 2.0) * h)]);
                    acc += f(&w)? * C64::new(ws * wr / (h * h), 0.0);
                }
            }
        }
    }
    Ok(acc)
}

/// `∂_k g` for every `k`, from the real partials.
fn holomorphic_first_derivatives(f: &MetricFn, z: &[C64], h: f64) -> Result<Vec<CMatrix>> {
    (0..z.len())
        .map(|k| {
            let gx = real_first_derivative(f, z, 2 * k, h)?;
            let gy = real_first_derivative(f, z, 2 * k + 1, h)?;
            Ok((gx - gy * C64::new(0.0, 1.0)) * C64::new(0.5, 0.0))
        })
        .collect()
}

/// Chern curvature of the metric `f` at `z` by fourth-order central
/// differences with step `h`.
pub fn fd_curvature(f: impl Fn(&[C64]) -> Result<CMatrix>, z: &[C64], h: f64) -> Result<Tensor4> {
    let n = z.len();
    let f: &MetricFn = &f;
    let g = f(z)?;
    let inv = g.try_inverse().ok_or_else(not_kahler)?;
    let i_unit = C64::new(0.0, 1.0);
    let d = holomorphic_first_derivatives(f, z, h)?;
    let dbar: Vec<CMatrix> = (0..n)
        .map(|l| {
            let gx = real_first_derivative(f, z, 2 * l, h)?;
            let gy = real_first_derivative(f, z, 2 * l + 1, h)?;
            Ok((gx + gy * i_unit) * C64::new(0.5, 0.0))
        })
        .collect::<Result<_>>()?;
    let mut rm = Tensor4::zeros(n);
    for k in 0..n {
        for l in 0..n {
            let xx = real_second_derivative(f, z, 2 * k, 2 * l, h)?;
            let yy = real_second_derivative(f, z, 2 * k + 1, 2 * l + 1, h)?;
            let xy = real_second_derivative(f, z, 2 * k, 2 * l + 1, h)?;
            let yx = real_second_derivative(f, z, 2 * k + 1, 2 * l, h)?;
            let ddbar = (xx + yy + (xy - yx) * i_unit) * C64::new(0.25, 0.0);
            let quad = &d[k] * &inv * &dbar[l];
            for i in 0..n {
                for j in 0..n {
                    rm.set(i, j, k, l, quad[(i, j)] - ddbar[(i, j)]);
                }
            }
        }
    }
    Ok(rm)
}

/// Sup over the components of the finite-difference curvature of
/// `scale·ω_FS` minus its closed form, at `point` with step `h`.
pub fn fd_error_against_closed_form(n: usize, scale: BigRational, point: &[C64], h: f64) -> Result<f64> {
    let model = MetricModel::fubini_study(n, scale);
    let exact = model.curvature(point, h)?;
    let approx = fd_curvature(|w| model.metric(w), point, h)?;
    Ok(exact.components().iter().zip(approx.components()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
}

#[derive(Clone, Debug)]
pub struct ChenOgiue {
    /// `{2(n+1)c2 - n c1²}·W^{n-2}`, exact in `τ`.
    pub lhs_exact: TauPoly,
    pub lhs: f64,
    /// `(4π² n(n-1))^{-1} ∫ {(n+1)|R̃m|² - (n+2)|R̃ic|²} ω^n`.
    pub rhs: f64,
    pub difference: f64,
    /// The same integral with `|Ric - ω|²` in place of `|R̃ic|²`; a lower
    /// bound for `rhs` because `|R̃ic|² ≤ |Ric - λω|²` for every `λ`.
    pub lower_bound: f64,
}

/// Intersection-side and curvature-side Chen-Ogiue quantities.
///
/// `polarization` is the class `W` of `ω` in the labels of `data`.
pub fn chen_ogiue_check(model: &MetricModel, data: &IntersectionData, polarization: &TauClass) -> Result<ChenOgiue> {
    let n = model.dim();
    if n < 2 {
        return Err(Error::DimensionTooLow(n));
    }
    check_class(model, data, polarization)?;
    let ws: Vec<&TauClass> = std::iter::repeat(polarization).take(n - 2).collect();
    let c2w = data.c2_pairing(&ws)?;
    let c1 = data.anticanonical().to_tau();
    let mut args = vec![&c1, &c1];
    args.extend(ws.iter().copied());
    let c1sq = data.pairing(&args)?;
    let nn = n as i64;
    let lhs_exact =
        c2w.scale(&BigRational::from_integer((2 * (nn + 1)).into())) - c1sq.scale(&BigRational::from_integer(nn.into()));
    let frames = sampled_frames(model)?;
    let nf = n as f64;
    let norm = 1.0 / (TAU * TAU * nf * (nf - 1.0));
    let rhs_terms: Vec<f64> = frames
        .iter()
        .map(|(f, w)| w * ((nf + 1.0) * f.rm_tilde_norm2 - (nf + 2.0) * f.ric_tilde_norm2))
        .collect();
    let lb_terms: Vec<f64> = frames
        .iter()
        .map(|(f, w)| w * ((nf + 1.0) * f.rm_tilde_norm2 - (nf + 2.0) * f.ric_minus_omega_norm2))
        .collect();
    let rhs = norm * pairwise_sum(&rhs_terms);
    let lhs = lhs_exact.to_f64();
    Ok(ChenOgiue { lhs, rhs, difference: lhs - rhs, lower_bound: norm * pairwise_sum(&lb_terms), lhs_exact })
}

/// Frames at the sample points; a single point suffices for closed-form
/// models, whose curvature norms are constant.
fn sampled_frames(model: &MetricModel) -> Result<Vec<(CurvatureFrame, f64)>> {
    let pts = model.sample_points(SAMPLE_NODES);
    if model.is_closed_form() {
        let total: f64 = pairwise_sum(&pts.iter().map(|p| p.1).collect::<Vec<_>>());
        let frame = curvature_tensors(model, &pts[pts.len() / 2].0)?;
        return Ok(vec![(frame, total)]);
    }
    pts.par_iter().map(|(z, w)| Ok((curvature_tensors(model, z)?, *w))).collect()
}

/// `∫ω^n` against `W^n` and `∫Ric∧ω^{n-1}` against `τ c1·W^{n-1}`.
fn check_class(model: &MetricModel, data: &IntersectionData, w: &TauClass) -> Result<()> {
    let n = model.dim();
    if data.n() != n {
        return Err(Error::ClassMismatch(format!("model has dimension {n}, data {}", data.n())));
    }
    let exact = data.self_intersection(w)?.to_f64();
    let numeric = model.volume();
    if (exact - numeric).abs() > 1e-8 * exact.abs().max(1.0) {
        return Err(Error::ClassMismatch(format!("∫ω^n = {numeric} but W^n = {exact}")));
    }
    Ok(())
}

/// Curvature of the canonical extension at a point, in a unitary frame:
/// index `0` is the trivial line `S`, indices `1..=n` the tangent bundle `Q`.
#[derive(Clone, Debug)]
pub struct ExtensionCurvature {
    pub a: f64,
    /// `blocks[c * n + d]` is the `(n+1)×(n+1)` coefficient of `e^c ∧ ē^d`.
    pub blocks: Vec<CMatrix>,
    /// `(1/n) Σ_c blocks[c n + c]`.
    pub mean_curvature: CMatrix,
    /// Largest entry of the off-diagonal blocks.
    pub off_diagonal: f64,
}

/// Block curvature of `E = S ⊕ Q` with second fundamental form `α = a·ω_g`.
///
/// With the Chern connection the blocks are
/// `[[F_S + a² δ_{cd}, a T], [a T*, F_Q - a² E_{cd}]]`, where `E_{cd}` is the
/// matrix unit and `T` the Kähler torsion of `g`. The sub-line gains what the
/// quotient loses, so `Tr` of the two correction terms cancels for every
/// `(c, d)`.
pub fn canonical_extension_curvature(model: &MetricModel, a: f64, point: &[C64]) -> Result<ExtensionCurvature> {
    let frame = curvature_tensors(model, point)?;
    let torsion = model.kahler_torsion(point, DEFAULT_FD_STEP)?;
    Ok(extension_from_frame(&frame, a, torsion))
}

fn extension_from_frame(frame: &CurvatureFrame, a: f64, torsion: f64) -> ExtensionCurvature {
    let n = frame.dim();
    let r = &frame.rm_unitary;
    let a2 = C64::new(a * a, 0.0);
    let mut blocks = Vec::with_capacity(n * n);
    for c in 0..n {
        for d in 0..n {
            let mut b = CMatrix::zeros(n + 1, n + 1);
            if c == d {
                b[(0, 0)] = a2;
            }
            for i in 0..n {
                for j in 0..n {
                    // endomorphism entry (i, j) of the tangent curvature
                    b[(i + 1, j + 1)] = r.get(j, i, c, d);
                }
            }
            b[(c + 1, d + 1)] -= a2;
            blocks.push(b);
        }
    }
    let mut k = CMatrix::zeros(n + 1, n + 1);
    for c in 0..n {
        k += &blocks[c * n + c];
    }
    k /= C64::new(n as f64, 0.0);
    ExtensionCurvature { a, blocks, mean_curvature: k, off_diagonal: a * torsion }
}

#[derive(Clone, Debug)]
pub struct HymReport {
    /// Slope of `E` against `W/2π`, exact.
    pub mu_exact: TauRatio,
    pub mu: f64,
    /// Sup over sample points of the largest entry of `K - μ·id`, together
    /// with the off-diagonal blocks.
    pub residual: f64,
    pub points: usize,
}

/// Mean-curvature defect of the canonical extension on the sample grid.
pub fn hym_residual(model: &MetricModel, a: f64, data: &IntersectionData, polarization: &TauClass) -> Result<HymReport> {
    check_class(model, data, polarization)?;
    let n = model.dim();
    let mu_exact = data.slope_tau(n + 1, &data.anticanonical(), polarization)?;
    let mu = mu_exact.to_f64();
    let frames = sampled_frames(model)?;
    let id = CMatrix::identity(n + 1, n + 1);
    let defects: Vec<f64> = frames
        .par_iter()
        .map(|(f, _)| {
            let torsion = model.kahler_torsion(&f.point, DEFAULT_FD_STEP)?;
            let ext = extension_from_frame(f, a, torsion);
            let dev = &ext.mean_curvature - &id * C64::new(mu, 0.0);
            Ok(dev.iter().map(|c| c.norm()).fold(ext.off_diagonal, f64::max))
        })
        .collect::<Result<_>>()?;
    Ok(HymReport { mu_exact, mu, residual: defects.iter().copied().fold(0.0, f64::max), points: frames.len() })
}

/// The sample radius `r` with `σ(log r²) = s`, exposed for callers that
/// build their own point grids.
pub fn radial_chart_point(d: usize, s: f64) -> Vec<C64> {
    let t = (s / (1.0 - s)).ln();
    debug_assert!((logistic(t) - s).abs() < 1e-12);
    let mut z = vec![C64::new(0.0, 0.0); d];
    z[0] = C64::new((t / 2.0).exp(), 0.0);
    z
}
