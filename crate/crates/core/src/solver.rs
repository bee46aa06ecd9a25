//! Twisted Kähler-Einstein metrics `Ric(ω) = ω + εθ` on U(n)-invariant
//! `P^n`, solved in Monge-Ampère form by damped Newton iteration.
//!
//! Write `Ric(ω₀) = ω₀ + εθ + dd^c ρ` with `∫ e^ρ ω₀^n = V`. A potential `φ`
//! with `ω_φ^n = e^(ρ-φ) ω₀^n` then solves the curvature equation, because
//! `Ric(ω_φ) - ω_φ - εθ = -dd^c F` for the discrete residual
//!
//! ```text
//! F = log(x' x^(n-1)) - log(x₀' x₀^(n-1)) + φ - ρ.
//! ```
//!
//! Its linearization `v''/x' + (n-1) v'/x + v` is banded, so each Newton step
//! costs one banded LU. At the two end nodes the equation is replaced by the
//! pole regularity condition (see `Problem::system`). The reported `residual`
//! is [`momentum_defect`], the sup norm of the momentum of
//! `Ric(ω) - ω - εθ` computed afresh from the returned profile.
//!
//! At `ε = 0` the linearization has a kernel from the dilations of `P^n`.
//! On P¹ with inputs symmetric under `t ↦ -t` (checked, not assumed) the
//! iterates are averaged with their reflection, which removes the odd kernel
//! direction and pins the solution.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::banded::BandMatrix;
use crate::error::{Error, Result};
use crate::radial::{grid, wedge_integral, Grid, KahlerProfile, RadialForm, SplitPotential};

/// Continuation grid used when the caller supplies none.
pub const DEFAULT_EPS_GRID: [f64; 5] = [0.4, 0.2, 0.1, 0.05, 0.025];

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub n: usize,
    pub eps: f64,
    /// The form `θ`; the twist is `εθ`, so `θ` must lie in `-c1(H)`.
    pub theta: RadialForm,
    pub newton_tol: f64,
    pub max_iter: usize,
    pub max_halvings: usize,
}

impl SolveConfig {
    pub fn new(n: usize, eps: f64, theta: RadialForm) -> Self {
        Self { n, eps, theta, newton_tol: 1e-8, max_iter: 50, max_halvings: 30 }
    }

    pub fn twist(&self) -> RadialForm {
        self.theta.scale(self.eps)
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub eps: f64,
    pub profile: KahlerProfile,
    pub residual: f64,
    /// Sup norm of the Monge-Ampère residual `F` itself.
    pub ma_residual: f64,
    pub iterations: usize,
    pub ricci_l1: f64,
    pub scalar_curvature: Vec<f64>,
    /// Largest relative deviation of `∫ω^n` from `V` over all accepted iterates.
    pub max_volume_defect: f64,
    pub converged: bool,
}

/// Normalized `ρ` with `Ric(ω₀) = ω₀ + twist + dd^c ρ` and `∫ e^ρ ω₀^n = V`.
pub fn ricci_potential(omega0: &KahlerProfile, twist: &RadialForm) -> Result<Vec<f64>> {
    let n = omega0.n() as f64;
    let mismatch = (n + 1.0) - omega0.m() - twist.c();
    if mismatch.abs() > 1e-10 {
        return Err(Error::ClassMismatch(format!(
            "[Ric(ω₀)] - [ω₀] - [twist] = {mismatch:.3e} times 2πH"
        )));
    }
    let psi = omega0.ricci_potential();
    let mut rho: Vec<f64> = (0..psi.len()).map(|i| psi[i] - omega0.phi()[i] - twist.psi()[i]).collect();
    if rho.iter().any(|v| !v.is_finite()) {
        return Err(Error::PoissonFailure("Ricci potential is not finite".into()));
    }
    let e: Vec<f64> = rho.iter().map(|v| v.exp()).collect();
    let shift = (omega0.integrate(&e) / omega0.volume()).ln();
    rho.iter_mut().for_each(|v| *v -= shift);
    Ok(rho)
}

struct Problem<'a> {
    omega0: &'a KahlerProfile,
    rho: Vec<f64>,
    symmetric: bool,
}

impl<'a> Problem<'a> {
    fn new(omega0: &'a KahlerProfile, twist: &RadialForm) -> Result<Self> {
        let rho = ricci_potential(omega0, twist)?;
        // t ↦ -t swaps the two poles; it preserves the equation only on P¹
        let symmetric =
            omega0.n() == 1 && is_reflection_symmetric(omega0.phi()) && is_reflection_symmetric(twist.psi());
        Ok(Self { omega0, rho, symmetric })
    }

    fn grid(&self) -> &Arc<Grid> {
        self.omega0.grid()
    }

    fn profile(&self, phi: &SplitPotential) -> Result<KahlerProfile> {
        let total = self.omega0.split().axpy(1.0, phi);
        KahlerProfile::from_split(self.omega0.n(), self.omega0.eps(), self.grid().clone(), total)
    }

    /// `F` with the density ratio formed from momentum differences.
    fn residual(&self, phi: &SplitPotential, p: &KahlerProfile) -> Vec<f64> {
        let g = self.grid();
        let k = p.n() as f64 - 1.0;
        let (d1, d2) = (phi.derivative(g, 1), phi.derivative(g, 2));
        let values = phi.values(g);
        let (x0, dx0) = (self.omega0.x(), self.omega0.dx());
        (0..g.len())
            .map(|i| {
                let radial = (d2[i] / dx0[i]).ln_1p();
                let angular = if k == 0.0 { 0.0 } else { k * (d1[i] / x0[i]).ln_1p() };
                radial + angular + values[i] - self.rho[i]
            })
            .collect()
    }

    /// The discretized system: `F` at interior nodes, and at each pole the
    /// regularity condition `x'/x = x₀'/x₀` (at `t = T`, with `m - x` in
    /// place of `x`) in its linear form `D²φ/x₀' ∓ Dφ/x₀ = 0`.
    ///
    /// On the truncated line the second-order equation needs two boundary
    /// conditions. Collocating `F` at the end nodes instead leaves the slope
    /// mode `φ ≈ A + Bt` near a pole undetermined, and the iteration settles
    /// on metrics whose momentum is off by tens of percent at the caps.
    fn system(&self, phi: &SplitPotential, p: &KahlerProfile) -> Vec<f64> {
        let g = self.grid();
        let mut f = self.residual(phi, p);
        let (d1, d2) = (phi.derivative(g, 1), phi.derivative(g, 2));
        let [left, right] = self.pole_weights();
        let last = g.len() - 1;
        f[0] = d2[0] * left[0] - d1[0] * left[1];
        f[last] = d2[last] * right[0] + d1[last] * right[1];
        f
    }

    /// Coefficients `(1/x₀', 1/x₀)` at `t = -T` and `(1/x₀', 1/(m - x₀))` at
    /// `t = T`; the gap `m - x₀` is formed from `1 - σ` directly.
    fn pole_weights(&self) -> [[f64; 2]; 2] {
        let g = self.grid();
        let w = self.omega0;
        let last = g.len() - 1;
        let gap = w.m() * grid::logistic(-g.t()[last]) - w.split().derivative(g, 1)[last];
        [[1.0 / w.dx()[0], 1.0 / w.x()[0]], [1.0 / w.dx()[last], 1.0 / gap]]
    }

    fn jacobian(&self, p: &KahlerProfile) -> BandMatrix {
        let g = self.grid();
        let nodes = g.len();
        let k = p.n() as f64 - 1.0;
        let (d1, d2) = (g.op(1), g.op(2));
        let bw = 5;
        let mut a = BandMatrix::zeros(nodes, bw, bw);
        for i in 0..nodes {
            let (s, w) = d2.row(i);
            for (j, wj) in w.iter().enumerate() {
                a.add(i, s + j, wj / p.dx()[i]);
            }
            if k != 0.0 {
                let (s, w) = d1.row(i);
                for (j, wj) in w.iter().enumerate() {
                    a.add(i, s + j, k * wj / p.x()[i]);
                }
            }
            a.add(i, i, 1.0);
        }
        let poles = self.pole_weights();
        for (i, [w2, w1]) in [(0, poles[0]), (nodes - 1, [poles[1][0], -poles[1][1]])] {
            for j in i.saturating_sub(bw)..=(i + bw).min(nodes - 1) {
                let v = a.get(i, j);
                if v != 0.0 {
                    a.add(i, j, -v);
                }
            }
            let (s, w) = d2.row(i);
            for (j, wj) in w.iter().enumerate() {
                a.add(i, s + j, wj * w2);
            }
            let (s, w) = d1.row(i);
            for (j, wj) in w.iter().enumerate() {
                a.add(i, s + j, -wj * w1);
            }
        }
        a
    }

    /// Newton update `δ = δa + δk·σ + δψ̃` for [`Problem::system`], with
    /// `δψ̃` zero at both ends.
    ///
    /// The two end columns of the Jacobian are exchanged for unit columns,
    /// so the end rows pick up slack values. Three banded solves, for the
    /// right-hand side and for the exact images `J·1 = 1` and `J·σ`, then
    /// a 2×2 system that zeroes both slacks.
    fn newton_step(&self, p: &KahlerProfile, f: &[f64]) -> Option<SplitPotential> {
        let g = self.grid();
        let nodes = g.len();
        let last = nodes - 1;
        let mut a = self.jacobian(p);
        for col in [0, last] {
            for row in col.saturating_sub(5)..=(col + 5).min(last) {
                let v = a.get(row, col);
                if v != 0.0 {
                    a.add(row, col, -v);
                }
            }
            a.add(col, col, 1.0);
        }
        let lu = a.factor()?;
        let k = p.n() as f64 - 1.0;
        let (s, s1, s2) = (g.sigma(), g.sigma_derivative(1), g.sigma_derivative(2));
        let [left, right] = self.pole_weights();
        let mut j_sigma: Vec<f64> = (0..nodes).map(|i| s2[i] / p.dx()[i] + k * s1[i] / p.x()[i] + s[i]).collect();
        let mut j_one = vec![1.0; nodes];
        j_sigma[0] = s2[0] * left[0] - s1[0] * left[1];
        j_sigma[last] = s2[last] * right[0] + s1[last] * right[1];
        j_one[0] = 0.0;
        j_one[last] = 0.0;
        let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        let w_r = lu.solve(&rhs);
        let w_1 = lu.solve(&j_one);
        let w_s = lu.solve(&j_sigma);
        // w = w_r - da w_1 - dk w_s must vanish at both ends
        let (a11, a12, a21, a22) = (w_1[0], w_s[0], w_1[last], w_s[last]);
        let det = a11 * a22 - a12 * a21;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let da = (w_r[0] * a22 - a12 * w_r[last]) / det;
        let dk = (a11 * w_r[last] - a21 * w_r[0]) / det;
        let mut tilde: Vec<f64> = (0..nodes).map(|i| w_r[i] - da * w_1[i] - dk * w_s[i]).collect();
        tilde[0] = 0.0;
        tilde[last] = 0.0;
        Some(SplitPotential { a: da, k: dk, tilde })
    }
}

fn is_reflection_symmetric(v: &[f64]) -> bool {
    let scale = v.iter().fold(1.0f64, |a, b| a.max(b.abs()));
    (0..v.len()).all(|i| (v[i] - v[v.len() - 1 - i]).abs() <= 1e-13 * scale)
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, b| a.max(b.abs()))
}

/// Sup over the grid of the momentum of `Ric(ω) - ω - twist`.
///
/// A U(n)-invariant closed (1,1)-form is `dd^c` of a radial function and is
/// determined by its momentum, which vanishes at `t = -∞`. The pointwise
/// `ω`-norm divides that momentum by `x` and `x'`, both of order `e^{-T}` at
/// the end nodes, and so only measures rounding there.
pub fn momentum_defect(p: &KahlerProfile, twist: &RadialForm) -> f64 {
    let ric = p.ricci_form();
    (0..p.grid().len()).map(|i| (ric.y()[i] - p.x()[i] - twist.y()[i]).abs()).fold(0.0, f64::max)
}

/// `∫ |Ric(ω) - ω|_ω ω^n`, with eigenvalues read off the radial momenta.
pub fn ricci_l1(p: &KahlerProfile) -> f64 {
    let ric = p.ricci_form();
    let k = p.n() as f64 - 1.0;
    let f: Vec<f64> = (0..p.grid().len())
        .map(|i| {
            let radial = ric.dy()[i] / p.dx()[i] - 1.0;
            let angular = ric.y()[i] / p.x()[i] - 1.0;
            (radial * radial + k * angular * angular).sqrt()
        })
        .collect();
    p.integrate(&f)
}

fn finish(twist: &RadialForm, eps: f64, p: KahlerProfile, f: &[f64], iterations: usize, system: f64, tol: f64) -> SolveResult {
    let residual = momentum_defect(&p, twist);
    SolveResult {
        eps,
        residual,
        ma_residual: sup(f),
        iterations,
        ricci_l1: ricci_l1(&p),
        scalar_curvature: p.scalar_curvature(),
        max_volume_defect: 0.0,
        profile: p,
        converged: residual <= tol && system <= tol,
    }
}

/// Damped Newton from `seed` (a potential relative to `ω₀`, zero if absent).
/// Returns the last accepted iterate whether or not it met the tolerance.
fn newton(config: &SolveConfig, omega0: &KahlerProfile, seed: Option<&SplitPotential>) -> Result<SolveResult> {
    if config.n != omega0.n() {
        return Err(Error::ClassMismatch(format!("config n = {} but ω₀ lives on P^{}", config.n, omega0.n())));
    }
    assert!(config.newton_tol > 0.0 && config.eps >= 0.0);
    let twist = config.twist();
    let prob = Problem::new(omega0, &twist)?;
    let nodes = omega0.grid().len();
    let mut phi = seed.cloned().unwrap_or_else(|| SplitPotential::zero(nodes));
    if prob.symmetric {
        phi = phi.symmetrized();
    }
    let mut p = prob.profile(&phi)?;
    let mut max_volume_defect = p.volume_defect();
    let mut f = prob.system(&phi, &p);
    let merit = |f: &[f64]| sup(f);
    let mut norm = merit(&f);
    let mut iterations = 0;
    // the discrete system is driven well below the tolerance so that the
    // momentum defect, which carries truncation error, is what decides success
    let target = 1e-3 * config.newton_tol;
    while iterations < config.max_iter && norm > target {
        let Some(step) = prob.newton_step(&p, &f) else { break };
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=config.max_halvings {
            let mut trial = phi.axpy(lambda, &step);
            if prob.symmetric {
                trial = trial.symmetrized();
            }
            if let Ok(tp) = prob.profile(&trial) {
                let tf = prob.system(&trial, &tp);
                let tn = merit(&tf);
                if tn < norm {
                    max_volume_defect = max_volume_defect.max(tp.volume_defect());
                    (phi, p, f, norm) = (trial, tp, tf, tn);
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        iterations += 1;
        if !accepted {
            break;
        }
    }
    let f_ma = prob.residual(&phi, &p);
    let mut r = finish(&twist, config.eps, p, &f_ma, iterations, norm, config.newton_tol);
    r.max_volume_defect = max_volume_defect;
    Ok(r)
}

/// Solve `Ric(ω) = ω + εθ` starting from `ω₀`, or from `seed` when given.
pub fn solve_twisted_ke_from(
    config: &SolveConfig,
    omega0: &KahlerProfile,
    seed: Option<&SplitPotential>,
) -> Result<SolveResult> {
    let r = newton(config, omega0, seed)?;
    if r.converged {
        Ok(r)
    } else {
        Err(Error::NoConvergence { residual: r.ma_residual.max(r.residual), iterations: r.iterations })
    }
}

pub fn solve_twisted_ke(config: &SolveConfig, omega0: &KahlerProfile) -> Result<SolveResult> {
    solve_twisted_ke_from(config, omega0, None)
}

/// Like [`solve_twisted_ke`], but an unconverged run returns its best
/// iterate with `converged = false` instead of an error.
pub fn solve_twisted_ke_report(config: &SolveConfig, omega0: &KahlerProfile) -> Result<SolveResult> {
    newton(config, omega0, None)
}

/// Runs over decreasing `ε`. Each `ω₀` comes from `make_omega0(ε)`; when
/// `seeded`, the previous solution's total potential seeds the next solve.
pub fn continuation(
    eps_grid: &[f64],
    mut make_config: impl FnMut(f64) -> SolveConfig,
    mut make_omega0: impl FnMut(f64) -> Result<KahlerProfile>,
    seeded: bool,
) -> Result<Vec<SolveResult>> {
    let mut out: Vec<SolveResult> = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let cfg = make_config(eps);
        let omega0 = make_omega0(eps)?;
        // previous potential over its background, re-expressed relative to the new ω₀
        let seed: Option<SplitPotential> =
            if seeded { out.last().map(|prev| prev.profile.split().axpy(-1.0, omega0.split())) } else { None };
        let r = match seed.as_ref() {
            Some(s) => solve_twisted_ke_from(&cfg, &omega0, Some(s))
                .or_else(|_| solve_twisted_ke(&cfg, &omega0))?,
            None => solve_twisted_ke(&cfg, &omega0)?,
        };
        out.push(r);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRow {
    pub eps: f64,
    pub ricci_l1: f64,
    pub scalar_avg: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticTable {
    pub rows: Vec<DiagnosticRow>,
    /// Least-squares slope of `log ricci_l1` against `log ε`; needs two rows.
    pub fitted_order: Option<f64>,
    pub ricci_l1_decreasing: bool,
    pub scalar_bounded: bool,
}

/// `V^{-1} ∫ R ω^n = n V^{-1} ∫ Ric∧ω^{n-1}`, the second form by quadrature
/// of momenta. Integrating the pointwise scalar curvature instead would pick
/// up its rounding noise near the poles.
pub fn scalar_average(p: &KahlerProfile) -> f64 {
    let ric = p.ricci_form();
    let mut forms = vec![&ric];
    forms.extend(std::iter::repeat(p.form()).take(p.n() - 1));
    let one = vec![1.0; p.grid().len()];
    p.n() as f64 * wedge_integral(p.grid(), &one, &forms) / p.volume()
}

/// `(ε, ∫|Ric - ω|, V^{-1}∫ R ω^n)` per run, with a fitted convergence order.
pub fn approximate_ke_diagnostic(results: &[SolveResult]) -> DiagnosticTable {
    let rows: Vec<DiagnosticRow> = results
        .iter()
        .map(|r| {
            let p = &r.profile;
            DiagnosticRow {
                eps: r.eps,
                ricci_l1: r.ricci_l1,
                scalar_avg: scalar_average(p),
            }
        })
        .collect();
    let fitted_order = if rows.len() >= 2 && rows.iter().all(|r| r.eps > 0.0 && r.ricci_l1 > 0.0) {
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.eps.ln(), r.ricci_l1.ln())).collect();
        let k = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Some(sxy / sxx)
    } else {
        None
    };
    let ricci_l1_decreasing = rows.windows(2).all(|w| w[1].ricci_l1 < w[0].ricci_l1);
    let first_max = results.first().map_or(0.0, |r| sup(&r.scalar_curvature));
    let scalar_bounded = results.iter().all(|r| sup(&r.scalar_curvature) <= 2.0 * first_max);
    DiagnosticTable { rows, fitted_order, ricci_l1_decreasing, scalar_bounded }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaRow {
    pub eps: f64,
    /// `∫ Tr(Θ²) ω^n` from the eigenvalues of `Θ = ω^{-1}θ`.
    pub trace_sq: f64,
    /// `∫ ((Tr Θ)² - Tr Θ²) ω^n`, which equals `n(n-1) ∫ θ∧θ∧ω^(n-2)`.
    pub wedge_from_endomorphism: f64,
    /// `n(n-1) ∫ θ∧θ∧ω^(n-2)` by form quadrature.
    pub wedge: f64,
    /// `wedge - trace_sq`: the defect of the identity as literally stated.
    pub stated_defect: f64,
    /// `wedge - wedge_from_endomorphism`, which should vanish.
    pub corrected_defect: f64,
    pub scaled_trace_sq: f64,
}

/// Both sides of the `Tr Θ²` identity on each run.
pub fn theta_endomorphism_decay(theta: &RadialForm, results: &[SolveResult]) -> Result<Vec<ThetaRow>> {
    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        let p = &r.profile;
        let n = p.n();
        if n < 2 {
            return Err(Error::DimensionTooLow(n));
        }
        let k = n as f64 - 1.0;
        let (tr_sq, tr): (Vec<f64>, Vec<f64>) = (0..p.grid().len())
            .map(|i| {
                let a = theta.dy()[i] / p.dx()[i];
                let b = theta.y()[i] / p.x()[i];
                (a * a + k * b * b, a + k * b)
            })
            .unzip();
        let trace_sq = p.integrate(&tr_sq);
        let sym: Vec<f64> = tr.iter().zip(&tr_sq).map(|(t, s)| t * t - s).collect();
        let wedge_from_endomorphism = p.integrate(&sym);
        let mut forms: Vec<&RadialForm> = vec![theta, theta];
        forms.extend(std::iter::repeat(p.form()).take(n - 2));
        let one = vec![1.0; p.grid().len()];
        let wedge = (n * (n - 1)) as f64 * wedge_integral(p.grid(), &one, &forms);
        rows.push(ThetaRow {
            eps: r.eps,
            trace_sq,
            wedge_from_endomorphism,
            wedge,
            stated_defect: wedge - trace_sq,
            corrected_defect: wedge - wedge_from_endomorphism,
            scaled_trace_sq: r.eps * r.eps * trace_sq,
        });
    }
    Ok(rows)
}

/// Values on the grid with every interval halved, by 8-point Lagrange interpolation.
pub fn interpolate_to_refined(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut out = Vec::with_capacity(2 * n - 1);
    const STENCIL: usize = 8;
    for i in 0..n - 1 {
        out.push(v[i]);
        let start = (i + 1).saturating_sub(STENCIL / 2).min(n - STENCIL);
        let x = i as f64 + 0.5;
        let mut s = 0.0;
        for a in start..start + STENCIL {
            let mut w = 1.0;
            for b in start..start + STENCIL {
                if a != b {
                    w *= (x - b as f64) / (a as f64 - b as f64);
                }
            }
            s += w * v[a];
        }
        out.push(s);
    }
    out.push(v[n - 1]);
    out
}

/// Recomputes the curvature residual of `result` on the refined grid, with
/// `ω₀` and the twist supplied there by the caller.
/// Recomputes the momentum defect after interpolating the solution onto
/// `fine`, which must be the refinement of the solution grid.
pub fn residual_certificate(result: &SolveResult, fine: &Arc<Grid>, twist_fine: &RadialForm) -> Result<f64> {
    if 2 * result.profile.grid().len() - 1 != fine.len() {
        return Err(Error::InvalidData("certificate grid is not the refinement".into()));
    }
    let split = result.profile.split();
    let fine_split = SplitPotential { a: split.a, k: split.k, tilde: interpolate_to_refined(&split.tilde) };
    let p = KahlerProfile::from_split(result.profile.n(), result.profile.eps(), fine.clone(), fine_split)?;
    Ok(momentum_defect(&p, twist_fine))
}
