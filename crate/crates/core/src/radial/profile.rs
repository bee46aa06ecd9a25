use std::sync::Arc;

use num_rational::BigRational;
use num_traits::FromPrimitive;

use super::grid::{softplus, Grid};
use crate::error::{Error, Result};
use crate::intersect::{kahler_class, projective_space, ClassVector};
use crate::tau::TAU;

/// A potential `a + k·σ + ψ̃` split so that `ψ̃` vanishes at both mesh ends.
///
/// Near the poles a potential is a constant plus an exponentially small
/// part. Stored as plain values, rounding of the constant swamps the small
/// part once it is differentiated. With the split, `ψ̃` keeps full relative
/// precision there and the `σ` term is differentiated exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitPotential {
    pub a: f64,
    pub k: f64,
    pub tilde: Vec<f64>,
}

impl SplitPotential {
    /// Split plain values; no precision is recovered, but later updates keep it.
    pub fn from_values(grid: &Grid, v: &[f64]) -> Self {
        let last = v.len() - 1;
        let s = grid.sigma();
        // a + kσ interpolates both end values, so zeroing ψ̃ there loses nothing
        let k = (v[last] - v[0]) / (s[last] - s[0]);
        let a = v[0] - k * s[0];
        let mut tilde: Vec<f64> = (0..v.len()).map(|i| v[i] - a - k * s[i]).collect();
        tilde[0] = 0.0;
        tilde[last] = 0.0;
        Self { a, k, tilde }
    }

    pub fn zero(len: usize) -> Self {
        Self { a: 0.0, k: 0.0, tilde: vec![0.0; len] }
    }

    pub fn values(&self, grid: &Grid) -> Vec<f64> {
        let s = grid.sigma();
        (0..self.tilde.len()).map(|i| self.a + self.k * s[i] + self.tilde[i]).collect()
    }

    /// `d^j/dt^j` of the potential for `j = 1..=4`.
    pub fn derivative(&self, grid: &Grid, j: usize) -> Vec<f64> {
        let d = grid.d(j, &self.tilde);
        let sj = grid.sigma_derivative(j);
        (0..d.len()).map(|i| self.k * sj[i] + d[i]).collect()
    }

    pub fn axpy(&self, lambda: f64, other: &Self) -> Self {
        Self {
            a: self.a + lambda * other.a,
            k: self.k + lambda * other.k,
            tilde: self.tilde.iter().zip(&other.tilde).map(|(x, y)| x + lambda * y).collect(),
        }
    }

    /// Average with the reflection `t ↦ -t`; the `σ` term reflects to `k - kσ`.
    pub fn symmetrized(&self) -> Self {
        let n = self.tilde.len();
        let tilde = (0..n).map(|i| 0.5 * (self.tilde[i] + self.tilde[n - 1 - i])).collect();
        Self { a: self.a + 0.5 * self.k, k: 0.0, tilde }
    }
}

/// A closed U(n)-invariant (1,1)-form `dd^c(c·log(1+e^t) + ψ(t))` on `P^n`.
///
/// `y = c σ + ψ'` is its momentum and `dy = y'`. The form represents
/// `2πc` times the hyperplane class, because `y` runs from `0` to `c`.
#[derive(Clone, Debug)]
pub struct RadialForm {
    grid: Arc<Grid>,
    c: f64,
    psi: Vec<f64>,
    y: Vec<f64>,
    dy: Vec<f64>,
}

impl RadialForm {
    pub fn new(grid: Arc<Grid>, c: f64, psi: Vec<f64>) -> Result<Self> {
        if psi.len() != grid.len() {
            return Err(Error::InvalidData(format!(
                "potential has {} values on a {}-node grid",
                psi.len(),
                grid.len()
            )));
        }
        if !c.is_finite() || psi.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("potential is not finite".into()));
        }
        let split = SplitPotential::from_values(&grid, &psi);
        Ok(Self::from_split(grid, c, &split))
    }

    pub fn from_split(grid: Arc<Grid>, c: f64, split: &SplitPotential) -> Self {
        let (d1, d2) = (split.derivative(&grid, 1), split.derivative(&grid, 2));
        let (s, s1) = (grid.sigma(), grid.sigma_derivative(1));
        let y = (0..grid.len()).map(|i| c * s[i] + d1[i]).collect();
        let dy = (0..grid.len()).map(|i| c * s1[i] + d2[i]).collect();
        let psi = split.values(&grid);
        Self { grid, c, psi, y, dy }
    }

    /// Form with known momenta; `psi` is kept for pairing with potentials.
    pub fn from_parts(grid: Arc<Grid>, c: f64, psi: Vec<f64>, y: Vec<f64>, dy: Vec<f64>) -> Self {
        assert!(psi.len() == grid.len() && y.len() == grid.len() && dy.len() == grid.len());
        Self { grid, c, psi, y, dy }
    }

    /// `c` times the Fubini-Study form.
    pub fn fubini_study(grid: Arc<Grid>, c: f64) -> Self {
        let n = grid.len();
        Self::from_split(grid, c, &SplitPotential::zero(n))
    }

    pub fn zero(grid: Arc<Grid>) -> Self {
        Self::fubini_study(grid, 0.0)
    }

    /// Form whose potential, momentum and momentum derivative are given in
    /// closed form as `f(t) = [ψ, y, y']`.
    pub fn from_momentum_fn(grid: Arc<Grid>, c: f64, f: impl Fn(f64) -> [f64; 3]) -> Self {
        let mut psi = Vec::with_capacity(grid.len());
        let mut y = Vec::with_capacity(grid.len());
        let mut dy = Vec::with_capacity(grid.len());
        for &t in grid.t() {
            let [p, a, b] = f(t);
            psi.push(p);
            y.push(a);
            dy.push(b);
        }
        Self { grid, c, psi, y, dy }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn dy(&self) -> &[f64] {
        &self.dy
    }

    /// Full potential `c·log(1+e^t) + ψ`.
    pub fn potential(&self) -> Vec<f64> {
        self.grid.t().iter().zip(&self.psi).map(|(&t, p)| self.c * softplus(t) + p).collect()
    }

    pub fn scale(&self, k: f64) -> Self {
        let m = |v: &[f64]| v.iter().map(|a| a * k).collect::<Vec<_>>();
        Self::from_parts(self.grid.clone(), self.c * k, m(&self.psi), m(&self.y), m(&self.dy))
    }

    pub fn add(&self, other: &Self) -> Self {
        let s = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>();
        Self::from_parts(
            self.grid.clone(),
            self.c + other.c,
            s(&self.psi, &other.psi),
            s(&self.y, &other.y),
            s(&self.dy, &other.dy),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }
}

/// `∫ F β_1 ∧ … ∧ β_n` for closed radial forms `β_j` on `P^n`, `n = forms.len()`.
///
/// The integrand reduces to `(2π)^n F d(Π y_j)`. Beyond the mesh `F` is
/// frozen at its end value, which captures the remaining mass of `Π y_j`.
pub fn wedge_integral(grid: &Grid, f: &[f64], forms: &[&RadialForm]) -> f64 {
    let n = forms.len();
    let nodes = grid.len();
    let mut dens = vec![0.0; nodes];
    for (i, d) in dens.iter_mut().enumerate() {
        let mut s = 0.0;
        for j in 0..n {
            let mut p = forms[j].dy[i];
            for (k, b) in forms.iter().enumerate() {
                if k != j {
                    p *= b.y[i];
                }
            }
            s += p;
        }
        *d = f[i] * s;
    }
    let prod = |i: usize| forms.iter().map(|b| b.y[i]).product::<f64>();
    let total: f64 = forms.iter().map(|b| b.c).product();
    let body = grid.simpson(&dens);
    let tails = f[0] * prod(0) + f[nodes - 1] * (total - prod(nodes - 1));
    TAU.powi(n as i32) * (body + tails)
}

/// Exact volume `(2π(n+1) + ε)^n` of the class `2πc1(-K) + εc1(H)` on `P^n`.
pub fn class_volume(n: usize, eps: f64) -> f64 {
    let d = projective_space(n);
    let h: ClassVector = ClassVector::basis("H");
    let e = BigRational::from_f64(eps).expect("finite eps");
    let w = kahler_class(&d.anticanonical(), &h, &e);
    d.self_intersection(&w).expect("valid class").to_f64()
}

/// A U(n)-invariant Kähler metric `ω = dd^c(m·log(1+e^t) + φ)` on `P^n`
/// with `m = (n+1) + ε/2π`, so `[ω] = 2πc1(-K) + εc1(H)`.
#[derive(Clone, Debug)]
pub struct KahlerProfile {
    n: usize,
    split: SplitPotential,
    form: RadialForm,
    x2: Vec<f64>,
    x3: Vec<f64>,
}

impl KahlerProfile {
    pub fn new(n: usize, eps: f64, grid: Arc<Grid>, phi: Vec<f64>) -> Result<Self> {
        if phi.len() != grid.len() || phi.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("potential must be finite, one value per node".into()));
        }
        let split = SplitPotential::from_values(&grid, &phi);
        Self::from_split(n, eps, grid, split)
    }

    /// Profile with potential `φ = a + kσ + ψ̃` over the Fubini-Study background.
    pub fn from_split(n: usize, eps: f64, grid: Arc<Grid>, split: SplitPotential) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionTooLow(0));
        }
        let m = class_coefficient(n, eps);
        let form = RadialForm::from_split(grid.clone(), m, &split);
        if let Some(node) = (0..grid.len()).find(|&i| !(form.y[i] > 0.0 && form.dy[i] > 0.0)) {
            return Err(Error::NotKahler { node });
        }
        let (p3, p4) = (split.derivative(&grid, 3), split.derivative(&grid, 4));
        let (s2, s3) = (grid.sigma_derivative(2), grid.sigma_derivative(3));
        let x2 = (0..grid.len()).map(|i| m * s2[i] + p3[i]).collect();
        let x3 = (0..grid.len()).map(|i| m * s3[i] + p4[i]).collect();
        Ok(Self { n, split, form, x2, x3 })
    }

    /// Fubini-Study metric in the class with parameter `ε`.
    pub fn round(n: usize, eps: f64, grid: Arc<Grid>) -> Self {
        let len = grid.len();
        Self::from_split(n, eps, grid, SplitPotential::zero(len)).expect("round metric is Kähler")
    }

    /// `φ = Σ_j coeffs[j-1]·σ^j`, a smooth U(n)-invariant perturbation.
    pub fn sigma_polynomial(n: usize, eps: f64, grid: Arc<Grid>, coeffs: &[f64]) -> Result<Self> {
        // σ^j - σ = -σ(1-σ)(1 + σ + … + σ^(j-2)) keeps relative precision at both ends
        let k: f64 = coeffs.iter().sum();
        let tilde = grid
            .t()
            .iter()
            .map(|&t| {
                let (s, sb) = (super::grid::logistic(t), super::grid::logistic(-t));
                let mut total = 0.0;
                let mut geometric = 0.0;
                let mut power = 1.0;
                for (j, c) in coeffs.iter().enumerate() {
                    if j >= 1 {
                        geometric += power;
                        power *= s;
                        total -= c * s * sb * geometric;
                    }
                }
                total
            })
            .collect();
        Self::from_split(n, eps, grid, SplitPotential { a: 0.0, k, tilde })
    }

    pub fn split(&self) -> &SplitPotential {
        &self.split
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> f64 {
        self.form.c
    }

    pub fn eps(&self) -> f64 {
        TAU * (self.form.c - (self.n as f64 + 1.0))
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.form.grid
    }

    pub fn form(&self) -> &RadialForm {
        &self.form
    }

    /// Potential relative to the Fubini-Study background.
    pub fn phi(&self) -> &[f64] {
        &self.form.psi
    }

    /// Momentum `x` and its `t`-derivatives `x', x'', x'''`.
    pub fn x(&self) -> &[f64] {
        &self.form.y
    }

    pub fn dx(&self) -> &[f64] {
        &self.form.dy
    }

    pub fn d2x(&self) -> &[f64] {
        &self.x2
    }

    pub fn d3x(&self) -> &[f64] {
        &self.x3
    }

    /// `(2π m)^n` from the class.
    pub fn volume(&self) -> f64 {
        (TAU * self.m()).powi(self.n as i32)
    }

    /// Same metric with `ω` repeated `n` times in the product.
    fn omega_n(&self) -> Vec<&RadialForm> {
        vec![&self.form; self.n]
    }

    /// `∫ F ω^n`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        wedge_integral(self.grid(), f, &self.omega_n())
    }

    /// `ω^n / ω_FS^n` density against Lebesgue-like weight, as the ratio of
    /// `x' x^(n-1)` to its background value.
    pub fn density_ratio(&self, other: &KahlerProfile) -> Vec<f64> {
        let k = self.n as i32 - 1;
        (0..self.grid().len())
            .map(|i| (self.dx()[i] * self.x()[i].powi(k)) / (other.dx()[i] * other.x()[i].powi(k)))
            .collect()
    }

    /// `Tr_ω β = y'/x' + (n-1) y/x`.
    pub fn trace(&self, beta: &RadialForm) -> Vec<f64> {
        let k = self.n as f64 - 1.0;
        (0..self.grid().len()).map(|i| beta.dy[i] / self.dx()[i] + k * beta.y[i] / self.x()[i]).collect()
    }

    /// `ψ` with `Ric(ω) = (n+1) ω_FS + dd^c ψ`. Needs only `x` and `x'`.
    pub fn ricci_potential(&self) -> Vec<f64> {
        let n = self.n as f64;
        let m = self.m();
        let s = self.grid().sigma();
        let s1 = self.grid().sigma_derivative(1);
        (0..self.grid().len())
            .map(|i| {
                let ratio = (self.dx()[i] / (m * s1[i])) * (self.x()[i] / (m * s[i])).powf(n - 1.0);
                -n * m.ln() - ratio.ln()
            })
            .collect()
    }

    /// `Ric(ω) = dd^c(-log(x' x^(n-1)) + n t)` with momenta in closed form.
    ///
    /// The momenta involve `φ'''` and `φ''''`. Near `t = ±T` the potential is
    /// a constant plus an `e^(-|t|)`-small part, so rounding in the stored
    /// values limits these derivatives to roughly `1e-3` relative accuracy at
    /// the last nodes. Integrals against `Ric` should go through
    /// [`KahlerProfile::ricci_potential`] and integration by parts instead.
    pub fn ricci_form(&self) -> RadialForm {
        let n = self.n as f64;
        let g = self.grid();
        let (x, x1, x2, x3) = (self.x(), self.dx(), self.d2x(), self.d3x());
        let psi = self.ricci_potential();
        let mut y = Vec::with_capacity(g.len());
        let mut dy = Vec::with_capacity(g.len());
        for i in 0..g.len() {
            let a = x2[i] / x1[i];
            let b = x1[i] / x[i];
            y.push(n - a - (n - 1.0) * b);
            let da = x3[i] / x1[i] - a * a;
            let db = x2[i] / x[i] - b * b;
            dy.push(-da - (n - 1.0) * db);
        }
        RadialForm::from_parts(g.clone(), n + 1.0, psi, y, dy)
    }

    /// Scalar curvature `R = Tr_ω Ric(ω)` at the nodes.
    pub fn scalar_curvature(&self) -> Vec<f64> {
        self.trace(&self.ricci_form())
    }

    /// Average scalar curvature `n(n+1)/m` of the class.
    pub fn average_scalar_curvature(&self) -> f64 {
        let n = self.n as f64;
        n * (n + 1.0) / self.m()
    }

    /// Relative volume defect of quadrature against the class volume.
    pub fn volume_defect(&self) -> f64 {
        let one = vec![1.0; self.grid().len()];
        let v = class_volume(self.n, self.eps());
        (self.integrate(&one) - v).abs() / v
    }
}

/// `m = (n+1) + ε/2π`.
pub fn class_coefficient(n: usize, eps: f64) -> f64 {
    n as f64 + 1.0 + eps / TAU
}
