//! Energy functionals on the space of U(n)-invariant Kähler potentials of
//! `P^n`, evaluated by radial quadrature.
//!
//! Throughout, `φ` is the potential of the profile relative to the reference
//! metric `ω₀`, so `ω_φ = ω₀ + dd^c φ`. The Monge-Ampère energy is
//! normalized by `1/((n+1)V)`. This is the coefficient for which
//! `(dE)_φ u = V^{-1} ∫ u ω_φ^n` holds, and [`differential_check`] tests it.
//!
//! Pairings against a Ricci form never use the pointwise Ricci momenta. They
//! move the `dd^c` onto the test function instead (see [`Twist`]), which
//! keeps every integrand at second order in the potentials.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intersect::{kahler_class, projective_space, ClassVector};
use crate::radial::{wedge_integral, Grid, KahlerProfile, RadialForm, SplitPotential};
use crate::tau::TAU;
use num_rational::BigRational;
use num_traits::FromPrimitive;

/// Densities are clamped here before taking logarithms.
pub const DENSITY_FLOOR: f64 = 1e-300;
/// Largest accepted relative defect between quadrature and class volume.
pub const VOLUME_TOLERANCE: f64 = 1e-8;

/// A closed radial (1,1)-form used as a twist, in one of two encodings.
#[derive(Clone, Debug)]
pub enum Twist {
    /// Momenta known at the nodes.
    Form(RadialForm),
    /// `c·ω_FS + dd^c ψ`; pairings integrate `dd^c` by parts onto the test function.
    Potential { c: f64, psi: Vec<f64> },
}

impl Twist {
    /// Cohomology coefficient: the form is `2πc` times the hyperplane class.
    pub fn c(&self) -> f64 {
        match self {
            Twist::Form(f) => f.c(),
            Twist::Potential { c, .. } => *c,
        }
    }

    /// `Ric(ω)` in potential form.
    pub fn ricci(p: &KahlerProfile) -> Self {
        Twist::Potential { c: p.n() as f64 + 1.0, psi: p.ricci_potential() }
    }

    fn potential_parts(&self) -> (f64, Vec<f64>) {
        match self {
            Twist::Form(f) => (f.c(), f.psi().to_vec()),
            Twist::Potential { c, psi } => (*c, psi.clone()),
        }
    }

    /// `self - other` in potential form.
    pub fn minus(&self, other: &Twist) -> Twist {
        let (a, pa) = self.potential_parts();
        let (b, pb) = other.potential_parts();
        Twist::Potential { c: a - b, psi: pa.iter().zip(&pb).map(|(x, y)| x - y).collect() }
    }

    pub fn scale(&self, k: f64) -> Twist {
        match self {
            Twist::Form(f) => Twist::Form(f.scale(k)),
            Twist::Potential { c, psi } => Twist::Potential { c: c * k, psi: psi.iter().map(|v| v * k).collect() },
        }
    }

    /// `∫ F · self ∧ rest`, with `rest` of degree `n - 1`.
    pub fn pair(&self, grid: &std::sync::Arc<Grid>, f: &[f64], rest: &[&RadialForm]) -> Result<f64> {
        if f.len() != grid.len() || f.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("test function must be finite, one value per node".into()));
        }
        self.pair_split(grid, &SplitPotential::from_values(grid, f), rest)
    }

    /// [`Twist::pair`] for a test function given in split form, which keeps
    /// `dd^c F` accurate where `F` is nearly constant.
    pub fn pair_split(&self, grid: &std::sync::Arc<Grid>, split: &SplitPotential, rest: &[&RadialForm]) -> Result<f64> {
        let f = split.values(grid);
        let f = f.as_slice();
        match self {
            Twist::Form(g) => {
                let mut all: Vec<&RadialForm> = vec![g];
                all.extend_from_slice(rest);
                Ok(wedge_integral(grid, f, &all))
            }
            Twist::Potential { c, psi } => {
                let fs = RadialForm::fubini_study(grid.clone(), 1.0);
                let ddf = RadialForm::from_split(grid.clone(), 0.0, split);
                let mut a: Vec<&RadialForm> = vec![&fs];
                a.extend_from_slice(rest);
                let mut b: Vec<&RadialForm> = vec![&ddf];
                b.extend_from_slice(rest);
                Ok(c * wedge_integral(grid, f, &a) + wedge_integral(grid, psi, &b))
            }
        }
    }
}

/// Every energy at one profile.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyReport {
    pub e: f64,
    pub e_gamma: f64,
    pub e_ric: f64,
    pub i: f64,
    pub j: f64,
    pub j_mod: f64,
    pub ent: f64,
    /// Chen's formula `Ent - n E_Ric + R̂ E`.
    pub m: f64,
    /// Independent evaluation `Ent + n 𝒥_{-Ric}`.
    pub m_alt: f64,
    pub m_theta: f64,
    pub rhat: f64,
    pub c_gamma: f64,
    pub volume: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnergyReportJson {
    #[serde(rename = "E")]
    pub e: String,
    #[serde(rename = "E_gamma")]
    pub e_gamma: String,
    #[serde(rename = "E_Ric")]
    pub e_ric: String,
    #[serde(rename = "I")]
    pub i: String,
    #[serde(rename = "J")]
    pub j: String,
    #[serde(rename = "J_mod")]
    pub j_mod: String,
    #[serde(rename = "Ent")]
    pub ent: String,
    #[serde(rename = "M")]
    pub m: String,
    #[serde(rename = "M_alt")]
    pub m_alt: String,
    #[serde(rename = "M_theta")]
    pub m_theta: String,
    #[serde(rename = "Rhat")]
    pub rhat: String,
    pub c_gamma: String,
    #[serde(rename = "V")]
    pub volume: String,
}

impl EnergyReport {
    pub fn to_json(&self) -> EnergyReportJson {
        let f = |x: f64| format!("{x:e}");
        EnergyReportJson {
            e: f(self.e),
            e_gamma: f(self.e_gamma),
            e_ric: f(self.e_ric),
            i: f(self.i),
            j: f(self.j),
            j_mod: f(self.j_mod),
            ent: f(self.ent),
            m: f(self.m),
            m_alt: f(self.m_alt),
            m_theta: f(self.m_theta),
            rhat: f(self.rhat),
            c_gamma: f(self.c_gamma),
            volume: f(self.volume),
        }
    }
}

/// `R̂ = n(n+1)/m` for the class of `p`, obtained from the intersection engine.
pub fn average_scalar_curvature(p: &KahlerProfile) -> f64 {
    let d = projective_space(p.n());
    let h: ClassVector = ClassVector::basis("H");
    let e = BigRational::from_f64(p.eps()).expect("finite eps");
    let w = kahler_class(&d.anticanonical(), &h, &e);
    let r = d.average_scalar_curvature_tau(&w).expect("ample class");
    TAU * r.to_f64()
}

/// Reference metric, a profile in its class, and the relative potential.
pub struct Pair<'a> {
    pub omega0: &'a KahlerProfile,
    pub profile: &'a KahlerProfile,
    pub phi: Vec<f64>,
    pub phi_split: SplitPotential,
    pub volume: f64,
}

impl<'a> Pair<'a> {
    pub fn new(profile: &'a KahlerProfile, omega0: &'a KahlerProfile) -> Result<Self> {
        if profile.n() != omega0.n() || profile.grid().len() != omega0.grid().len() {
            return Err(Error::ClassMismatch("profiles live on different spaces or grids".into()));
        }
        if (profile.m() - omega0.m()).abs() > 1e-12 * omega0.m() {
            return Err(Error::ClassMismatch(format!(
                "class coefficients {} and {} differ",
                profile.m(),
                omega0.m()
            )));
        }
        for p in [profile, omega0] {
            let d = p.volume_defect();
            if d >= VOLUME_TOLERANCE {
                return Err(Error::ClassMismatch(format!("relative volume defect {d:.3e}")));
            }
        }
        let phi_split = profile.split().axpy(-1.0, omega0.split());
        let phi = phi_split.values(profile.grid());
        Ok(Self { omega0, profile, phi, phi_split, volume: omega0.volume() })
    }

    fn n(&self) -> usize {
        self.profile.n()
    }

    fn grid(&self) -> &std::sync::Arc<Grid> {
        self.profile.grid()
    }

    /// Forms `ω₀^a ∧ ω_φ^b`.
    fn powers(&self, a: usize, b: usize) -> Vec<&RadialForm> {
        let mut v = vec![self.omega0.form(); a];
        v.extend(std::iter::repeat(self.profile.form()).take(b));
        v
    }

    pub fn energy(&self) -> f64 {
        let n = self.n();
        let s: f64 = (0..=n).map(|i| wedge_integral(self.grid(), &self.phi, &self.powers(i, n - i))).sum();
        s / ((n as f64 + 1.0) * self.volume)
    }

    /// `E_γ = (nV)^{-1} Σ_{i=1..n} ∫ φ γ ∧ ω₀^(i-1) ∧ ω_φ^(n-i)`.
    pub fn twisted_energy(&self, gamma: &Twist) -> Result<f64> {
        let n = self.n();
        let mut s = 0.0;
        for i in 1..=n {
            s += gamma.pair_split(self.grid(), &self.phi_split, &self.powers(i - 1, n - i))?;
        }
        Ok(s / (n as f64 * self.volume))
    }

    fn mean_against(&self, which: &KahlerProfile) -> f64 {
        which.integrate(&self.phi) / self.volume
    }

    pub fn i_functional(&self) -> f64 {
        self.mean_against(self.omega0) - self.mean_against(self.profile)
    }

    pub fn j_functional(&self) -> f64 {
        self.mean_against(self.omega0) - self.energy()
    }

    /// Relative entropy of `ω_φ^n` with respect to `ω₀^n`, both as probability measures.
    pub fn entropy(&self) -> f64 {
        let one = vec![1.0; self.grid().len()];
        let v_phi = self.profile.integrate(&one);
        let v_0 = self.omega0.integrate(&one);
        let logf: Vec<f64> = self
            .profile
            .density_ratio(self.omega0)
            .iter()
            .map(|r| (r * v_0 / v_phi).max(DENSITY_FLOOR).ln())
            .collect();
        self.profile.integrate(&logf) / v_phi
    }
}

/// Every functional in [`EnergyReport`] at `profile`.
pub fn energy_report(
    profile: &KahlerProfile,
    gamma: &Twist,
    theta: &Twist,
    omega0: &KahlerProfile,
) -> Result<EnergyReport> {
    let pair = Pair::new(profile, omega0)?;
    let n = profile.n() as f64;
    let m = profile.m();
    let ric0 = Twist::ricci(omega0);
    let e = pair.energy();
    let e_gamma = pair.twisted_energy(gamma)?;
    let e_ric = pair.twisted_energy(&ric0)?;
    let c_gamma = gamma.c() / m;
    let ent = pair.entropy();
    let rhat = average_scalar_curvature(profile);
    let neg_ric = ric0.scale(-1.0);
    let j_neg_ric = pair.twisted_energy(&neg_ric)? - neg_ric.c() / m * e;
    let ric_minus_theta = ric0.minus(theta);
    let rhat_theta = n * ric_minus_theta.c() / m;
    Ok(EnergyReport {
        e,
        e_gamma,
        e_ric,
        i: pair.i_functional(),
        j: pair.j_functional(),
        j_mod: e_gamma - c_gamma * e,
        ent,
        m: ent - n * e_ric + rhat * e,
        m_alt: ent + n * j_neg_ric,
        m_theta: ent - n * pair.twisted_energy(&ric_minus_theta)? + rhat_theta * e,
        rhat,
        c_gamma,
        volume: pair.volume,
    })
}

/// Functionals whose differentials [`differential_check`] can test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Functional {
    E,
    EGamma,
    M,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DifferentialCheck {
    pub analytic: f64,
    /// `(s, (F(φ+su) - F(φ-su)) / 2s)` per step.
    pub finite_differences: Vec<(f64, f64)>,
}

impl DifferentialCheck {
    pub fn errors(&self) -> Vec<f64> {
        self.finite_differences.iter().map(|(_, v)| (v - self.analytic).abs()).collect()
    }

    /// Successive error ratios; about 4 for a second-order difference at halved steps.
    pub fn ratios(&self) -> Vec<f64> {
        self.errors().windows(2).map(|w| w[0] / w[1]).collect()
    }
}

/// `φ + s·u`, added split by split so that the small part of the potential
/// near the caps keeps its relative precision.
fn shifted(profile: &KahlerProfile, u: &[f64], s: f64) -> Result<KahlerProfile> {
    let du = SplitPotential::from_values(profile.grid(), u);
    KahlerProfile::from_split(profile.n(), profile.eps(), profile.grid().clone(), profile.split().axpy(s, &du))
}

fn evaluate(which: Functional, profile: &KahlerProfile, omega0: &KahlerProfile, gamma: &Twist) -> Result<f64> {
    let pair = Pair::new(profile, omega0)?;
    Ok(match which {
        Functional::E => pair.energy(),
        Functional::EGamma => pair.twisted_energy(gamma)?,
        Functional::M => {
            let n = profile.n() as f64;
            pair.entropy() - n * pair.twisted_energy(&Twist::ricci(omega0))? + average_scalar_curvature(profile) * pair.energy()
        }
    })
}

/// `(dM)_φ u = -V^{-1} ∫ u (R - R̂) ω_φ^n`, with the curvature term integrated by parts.
pub fn k_energy_differential(profile: &KahlerProfile, u: &[f64]) -> Result<f64> {
    let n = profile.n();
    let rest = vec![profile.form(); n - 1];
    let ric_term = n as f64 * Twist::ricci(profile).pair(profile.grid(), u, &rest)?;
    let v = profile.volume();
    Ok(-(ric_term - average_scalar_curvature(profile) * profile.integrate(u)) / v)
}

/// Analytic differential of `which` at `profile` in direction `u`, and
/// central differences at each step in `steps`.
pub fn differential_check(
    profile: &KahlerProfile,
    omega0: &KahlerProfile,
    gamma: &Twist,
    u: &[f64],
    which: Functional,
    steps: &[f64],
) -> Result<DifferentialCheck> {
    Pair::new(profile, omega0)?;
    let n = profile.n();
    let v = profile.volume();
    let analytic = match which {
        Functional::E => profile.integrate(u) / v,
        Functional::EGamma => gamma.pair(profile.grid(), u, &vec![profile.form(); n - 1])? / v,
        Functional::M => k_energy_differential(profile, u)?,
    };
    let finite_differences = steps
        .iter()
        .map(|&s| {
            let plus = evaluate(which, &shifted(profile, u, s)?, omega0, gamma)?;
            let minus = evaluate(which, &shifted(profile, u, -s)?, omega0, gamma)?;
            Ok((s, (plus - minus) / (2.0 * s)))
        })
        .collect::<Result<_>>()?;
    Ok(DifferentialCheck { analytic, finite_differences })
}

/// `sup |Tr_ω γ - n c_γ|` over the nodes.
pub fn j_equation_residual(profile: &KahlerProfile, gamma: &RadialForm) -> f64 {
    let target = profile.n() as f64 * gamma.c() / profile.m();
    profile.trace(gamma).iter().map(|v| (v - target).abs()).fold(0.0, f64::max)
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(k: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=k {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = k as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((1.0 - x) / 2.0, w / 2.0));
    }
    out
}

/// `M(φ)` from Chen's formula, and `∫_0^1 (dM)_{sφ} φ ds` along the linear path.
pub fn chen_path_check(profile: &KahlerProfile, omega0: &KahlerProfile, nodes: usize) -> Result<(f64, f64)> {
    let pair = Pair::new(profile, omega0)?;
    let direct = evaluate(Functional::M, profile, omega0, &Twist::ricci(omega0))?;
    let mut path = 0.0;
    for (s, w) in gauss_legendre(nodes) {
        let p = shifted(omega0, &pair.phi, s)?;
        path += w * k_energy_differential(&p, &pair.phi)?;
    }
    Ok((direct, path))
}
