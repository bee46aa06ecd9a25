//! Exact intersection-number engine.
//!
//! An [`IntersectionData`] is a symmetric degree-`n` form on a labelled set
//! of divisor classes together with the pairings of `c2(X)` against
//! degree-`(n-2)` monomials. Classes are [`ClassVector`]s over either exact
//! rationals or polynomials in the formal symbol `τ = 2π` ([`TauClass`]).
//!
//! Nefness and bigness are never verified; operations that need them trust
//! the caller.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tau::{format_rational, parse_rational, Coefficient, TauPoly, TauRatio};

/// Coefficient vector of a cohomology class in a labelled basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassVector<C = BigRational> {
    coeffs: BTreeMap<String, C>,
}

/// A class whose coefficients may carry powers of `2π`.
pub type TauClass = ClassVector<TauPoly>;

impl<C: Coefficient> Default for ClassVector<C> {
    fn default() -> Self {
        Self { coeffs: BTreeMap::new() }
    }
}

impl<C: Coefficient> ClassVector<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, C)>) -> Self {
        let mut v = Self::zero();
        for (label, c) in pairs {
            v.add_term(label.into(), c);
        }
        v
    }

    pub fn basis(label: impl Into<String>) -> Self {
        Self::from_pairs([(label.into(), C::one())])
    }

    fn add_term(&mut self, label: String, c: C) {
        let entry = self.coeffs.entry(label).or_insert_with(C::zero);
        *entry = entry.clone() + c;
        self.coeffs.retain(|_, v| !v.is_zero());
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, label: &str) -> C {
        self.coeffs.get(label).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, &C)> {
        self.coeffs.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_pairs(self.coeffs.iter().map(|(k, v)| (k.clone(), v.clone() * c.clone())))
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scale(&-C::one()))
    }
}

impl ClassVector<BigRational> {
    /// Embed into the `τ`-polynomial coefficient ring.
    pub fn to_tau(&self) -> TauClass {
        TauClass::from_pairs(
            self.coeffs.iter().map(|(k, v)| (k.clone(), TauPoly::constant(v.clone()))),
        )
    }
}

/// `2π·L + ε·A` as an exact class.
pub fn kahler_class(l: &ClassVector, a: &ClassVector, eps: &BigRational) -> TauClass {
    l.to_tau()
        .scale(&TauPoly::tau())
        .plus(&a.to_tau().scale(&TauPoly::constant(eps.clone())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisLabel {
    pub label: String,
    #[serde(default)]
    pub ample: bool,
    #[serde(default)]
    pub canonical: bool,
}

/// Symmetric degree-`n` intersection form plus `c2` pairings.
#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionData {
    n: usize,
    basis: Vec<BasisLabel>,
    index: BTreeMap<String, usize>,
    canonical: usize,
    /// Sorted index multisets of length `n`; absent entries are zero.
    form: BTreeMap<Vec<usize>, BigRational>,
    /// Sorted index multisets of length `n - 2`; absent entries are zero.
    c2: BTreeMap<Vec<usize>, BigRational>,
}

impl IntersectionData {
    /// Build from label lists. Monomials may be given in any factor order;
    /// repeated monomials must agree.
    pub fn new(
        n: usize,
        basis: Vec<BasisLabel>,
        form: Vec<(Vec<String>, BigRational)>,
        c2: Vec<(Vec<String>, BigRational)>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidData("dimension must be positive".into()));
        }
        let mut index = BTreeMap::new();
        for (i, b) in basis.iter().enumerate() {
            if index.insert(b.label.clone(), i).is_some() {
                return Err(Error::InvalidData(format!("duplicate label `{}`", b.label)));
            }
        }
        let canon: Vec<usize> = (0..basis.len()).filter(|&i| basis[i].canonical).collect();
        let canonical = match canon.as_slice() {
            [k] => *k,
            _ => return Err(Error::InvalidData("exactly one label must be canonical".into())),
        };
        if !basis.iter().any(|b| b.ample) {
            return Err(Error::InvalidData("at least one label must be ample".into()));
        }
        let to_key = |mono: &[String], degree: usize| -> Result<Vec<usize>> {
            if mono.len() != degree {
                return Err(Error::WrongArity { expected: degree, got: mono.len() });
            }
            let mut key = mono
                .iter()
                .map(|l| index.get(l).copied().ok_or_else(|| Error::UnknownLabel(l.clone())))
                .collect::<Result<Vec<_>>>()?;
            key.sort_unstable();
            Ok(key)
        };
        let insert = |table: &mut BTreeMap<Vec<usize>, BigRational>,
                      key: Vec<usize>,
                      value: BigRational|
         -> Result<()> {
            match table.get(&key) {
                Some(old) if *old != value => Err(Error::InvalidData(format!(
                    "inconsistent duplicate monomial {key:?}: {} vs {}",
                    format_rational(old),
                    format_rational(&value)
                ))),
                _ => {
                    table.insert(key, value);
                    Ok(())
                }
            }
        };
        let mut form_t = BTreeMap::new();
        for (mono, v) in form {
            insert(&mut form_t, to_key(&mono, n)?, v)?;
        }
        let mut c2_t = BTreeMap::new();
        if n >= 2 {
            for (mono, v) in c2 {
                insert(&mut c2_t, to_key(&mono, n - 2)?, v)?;
            }
            if n == 2 && !c2_t.contains_key(&Vec::new()) {
                return Err(Error::InvalidData("surface data needs the c2 degree".into()));
            }
        } else if !c2.is_empty() {
            return Err(Error::InvalidData("c2 pairing given for n < 2".into()));
        }
        form_t.retain(|_, v| !v.is_zero());
        c2_t.retain(|_, v| !v.is_zero());
        let data = Self { n, basis, index, canonical, form: form_t, c2: c2_t };
        for b in data.basis.iter().filter(|b| b.ample) {
            let a: ClassVector = ClassVector::basis(b.label.clone());
            if !data.self_intersection(&a)?.is_positive() {
                return Err(Error::InvalidData(format!(
                    "ample label `{}` has non-positive top power",
                    b.label
                )));
            }
        }
        Ok(data)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[BasisLabel] {
        &self.basis
    }

    pub fn canonical_label(&self) -> &str {
        &self.basis[self.canonical].label
    }

    pub fn ample_labels(&self) -> impl Iterator<Item = &str> {
        self.basis.iter().filter(|b| b.ample).map(|b| b.label.as_str())
    }

    /// `K_X`.
    pub fn canonical(&self) -> ClassVector {
        ClassVector::basis(self.canonical_label())
    }

    /// `-K_X = c1(X)`.
    pub fn anticanonical(&self) -> ClassVector {
        self.canonical().scale(&-BigRational::one())
    }

    /// Raw form value on a monomial of label indices (any order).
    pub fn form_value(&self, idx: &[usize]) -> BigRational {
        let mut key = idx.to_vec();
        key.sort_unstable();
        self.form.get(&key).cloned().unwrap_or_else(BigRational::zero)
    }

    fn dense<C: Coefficient>(&self, v: &ClassVector<C>) -> Result<Vec<(usize, C)>> {
        v.terms()
            .map(|(l, c)| {
                self.index
                    .get(l)
                    .map(|&i| (i, c.clone()))
                    .ok_or_else(|| Error::UnknownLabel(l.to_string()))
            })
            .collect()
    }

    fn contract<C: Coefficient>(
        &self,
        table: &BTreeMap<Vec<usize>, BigRational>,
        classes: &[&ClassVector<C>],
    ) -> Result<C> {
        let dense = classes.iter().map(|c| self.dense(c)).collect::<Result<Vec<_>>>()?;
        let mut total = C::zero();
        fn walk<C: Coefficient>(
            table: &BTreeMap<Vec<usize>, BigRational>,
            dense: &[Vec<(usize, C)>],
            depth: usize,
            coeff: C,
            chosen: &mut Vec<usize>,
            total: &mut C,
        ) {
            if depth == dense.len() {
                let mut key = chosen.clone();
                key.sort_unstable();
                if let Some(v) = table.get(&key) {
                    *total = total.clone() + coeff * C::from_rational(v);
                }
                return;
            }
            for (i, c) in &dense[depth] {
                chosen.push(*i);
                walk(table, dense, depth + 1, coeff.clone() * c.clone(), chosen, total);
                chosen.pop();
            }
        }
        let mut chosen = Vec::with_capacity(classes.len());
        walk(table, &dense, 0, C::one(), &mut chosen, &mut total);
        Ok(total)
    }

    /// Multilinear extension of the form to `n` classes.
    pub fn pairing<C: Coefficient>(&self, classes: &[&ClassVector<C>]) -> Result<C> {
        if classes.len() != self.n {
            return Err(Error::WrongArity { expected: self.n, got: classes.len() });
        }
        self.contract(&self.form, classes)
    }

    pub fn intersection_number(&self, classes: &[&ClassVector]) -> Result<BigRational> {
        self.pairing(classes)
    }

    /// `c2(X)` paired with `n - 2` classes.
    pub fn c2_pairing<C: Coefficient>(&self, classes: &[&ClassVector<C>]) -> Result<C> {
        if self.n < 2 {
            return Err(Error::DimensionTooLow(self.n));
        }
        if classes.len() != self.n - 2 {
            return Err(Error::WrongArity { expected: self.n - 2, got: classes.len() });
        }
        self.contract(&self.c2, classes)
    }

    /// `L^k · A^(n-k)`.
    pub fn mixed_power<C: Coefficient>(
        &self,
        l: &ClassVector<C>,
        k: usize,
        a: &ClassVector<C>,
    ) -> Result<C> {
        let args: Vec<&ClassVector<C>> =
            std::iter::repeat(l).take(k).chain(std::iter::repeat(a).take(self.n - k)).collect();
        self.pairing(&args)
    }

    pub fn self_intersection<C: Coefficient>(&self, l: &ClassVector<C>) -> Result<C> {
        self.mixed_power(l, self.n, l)
    }

    /// Whether `a` is a nonzero nonnegative combination of ample-flagged labels.
    pub fn is_flagged_ample(&self, a: &ClassVector) -> bool {
        !a.is_zero()
            && a.terms().all(|(l, c)| {
                c.is_positive()
                    && self.index.get(l).is_some_and(|&i| self.basis[i].ample)
            })
    }

    fn require_ample(&self, a: &ClassVector) -> Result<()> {
        if self.is_flagged_ample(a) {
            Ok(())
        } else {
            let name = a.terms().map(|(l, _)| l).collect::<Vec<_>>().join("+");
            Err(Error::NotAmple(name))
        }
    }

    /// Largest `k` with `L^k A^(n-k) ≠ 0`; `L` is trusted to be nef.
    pub fn numerical_dimension(&self, l: &ClassVector, a: &ClassVector) -> Result<usize> {
        self.require_ample(a)?;
        for k in (1..=self.n).rev() {
            if !self.mixed_power(l, k, a)?.is_zero() {
                return Ok(k);
            }
        }
        Ok(0)
    }

    /// `R̂ = -n (K · L^(n-1)) / L^n`.
    pub fn average_scalar_curvature(&self, l: &ClassVector) -> Result<BigRational> {
        let top = self.self_intersection(l)?;
        if top.is_zero() {
            return Err(Error::DegeneratePolarization);
        }
        let k = self.canonical();
        let kl = self.mixed_power(l, self.n - 1, &k)?;
        Ok(-BigRational::from_integer(BigInt::from(self.n)) * kl / top)
    }

    /// `R̂` for a class with `2π` coefficients; same formula, exact in `τ`.
    pub fn average_scalar_curvature_tau(&self, l: &TauClass) -> Result<TauRatio> {
        let top = self.self_intersection(l)?;
        if Zero::is_zero(&top) {
            return Err(Error::DegeneratePolarization);
        }
        let k = self.canonical().to_tau();
        let kl = self.mixed_power(l, self.n - 1, &k)?;
        TauRatio::new(kl.scale(&-BigRational::from_integer(BigInt::from(self.n))), top)
    }

    /// `{2(n+1) c2 - n c1²} · c1^(n-2)`.
    pub fn my_quantity(&self) -> Result<BigRational> {
        if self.n < 2 {
            return Err(Error::DimensionTooLow(self.n));
        }
        let c1 = self.anticanonical();
        self.my_quantity_against(&c1.to_tau(), &c1)
            .map(|p| p.as_constant().expect("rational class gives rational value"))
    }

    /// `{2(n+1) c2 - n c1²} · W^(n-2)` for a (possibly `2π`-scaled) class `W`.
    pub fn my_quantity_against(&self, w: &TauClass, c1: &ClassVector) -> Result<TauPoly> {
        if self.n < 2 {
            return Err(Error::DimensionTooLow(self.n));
        }
        let n = self.n;
        let ws: Vec<&TauClass> = std::iter::repeat(w).take(n - 2).collect();
        let c2w = self.c2_pairing(&ws)?;
        let c1t = c1.to_tau();
        let mut args = vec![&c1t, &c1t];
        args.extend(ws.iter().copied());
        let c1sq = self.pairing(&args)?;
        let two_np1 = BigRational::from_integer(BigInt::from(2 * (n + 1)));
        let nn = BigRational::from_integer(BigInt::from(n));
        Ok(c2w.scale(&two_np1) - c1sq.scale(&nn))
    }

    /// `2π n c1(L)·[ω_ε]^(n-1) / [ω_ε]^n` with `[ω_ε] = 2π c1(L) + ε c1(A)`.
    pub fn key_lemma_ratio(
        &self,
        l: &ClassVector,
        a: &ClassVector,
        eps: &BigRational,
    ) -> Result<TauRatio> {
        if !eps.is_positive() {
            return Err(Error::InvalidData("eps must be positive".into()));
        }
        let w = kahler_class(l, a, eps);
        let den = self.self_intersection(&w)?;
        if Zero::is_zero(&den) {
            return Err(Error::DegenerateClass);
        }
        let lt = l.to_tau().scale(&TauPoly::tau());
        let num = self
            .mixed_power(&w, self.n - 1, &lt)?
            .scale(&BigRational::from_integer(BigInt::from(self.n)));
        TauRatio::new(num, den)
    }

    /// Whether `l + K` pairs to zero with every degree-`(n-1)` basis monomial.
    pub fn is_numerically_anticanonical(&self, l: &ClassVector) -> Result<bool> {
        let diff = l.plus(&self.canonical());
        diff.terms().try_for_each(|(lab, _)| {
            self.index.get(lab).map(|_| ()).ok_or_else(|| Error::UnknownLabel(lab.to_string()))
        })?;
        if self.n == 1 {
            return Ok(self.pairing(&[&diff])?.is_zero());
        }
        let labels: Vec<ClassVector> =
            self.basis.iter().map(|b| ClassVector::basis(b.label.clone())).collect();
        let mut idx = vec![0usize; self.n - 1];
        loop {
            let mut args: Vec<&ClassVector> = idx.iter().map(|&i| &labels[i]).collect();
            args.push(&diff);
            if !self.pairing(&args)?.is_zero() {
                return Ok(false);
            }
            // next non-decreasing multi-index
            let mut pos = idx.len();
            loop {
                if pos == 0 {
                    return Ok(true);
                }
                pos -= 1;
                if idx[pos] + 1 < labels.len() {
                    idx[pos] += 1;
                    for j in pos + 1..idx.len() {
                        idx[j] = idx[pos];
                    }
                    break;
                }
            }
        }
    }

    /// Limit of the Calabi-type functional: `((ν²-2ν+n) - n(n-1)) (2π)^n c1^n`.
    pub fn calabi_limit(&self, l: &ClassVector, a: &ClassVector) -> Result<TauPoly> {
        if !self.is_numerically_anticanonical(l)? {
            return Err(Error::NotAnticanonical);
        }
        let nu = self.numerical_dimension(l, a)? as i64;
        let n = self.n as i64;
        let scalar = BigRational::from_integer(BigInt::from((nu * nu - 2 * nu + n) - n * (n - 1)));
        let c1n = self.self_intersection(l)?;
        Ok(TauPoly::monomial(scalar * c1n, self.n))
    }

    /// `μ(S) = (c1(S)·L^(n-1)) / (rank · L^n)`.
    pub fn slope(&self, rank: usize, c1s: &ClassVector, l: &ClassVector) -> Result<BigRational> {
        if rank == 0 {
            return Err(Error::BadRank { rank, max: usize::MAX });
        }
        let top = self.self_intersection(l)?;
        if top.is_zero() {
            return Err(Error::DegeneratePolarization);
        }
        let deg = self.mixed_power(l, self.n - 1, c1s)?;
        Ok(deg / (top * BigRational::from_integer(BigInt::from(rank))))
    }

    /// Slope against a `2π`-scaled polarization `W = 2π L + ...`, in the
    /// normalization where `W/2π` plays the role of `c1(L)`.
    pub fn slope_tau(&self, rank: usize, c1s: &ClassVector, w: &TauClass) -> Result<TauRatio> {
        if rank == 0 {
            return Err(Error::BadRank { rank, max: usize::MAX });
        }
        let top = self.self_intersection(w)?;
        if Zero::is_zero(&top) {
            return Err(Error::DegeneratePolarization);
        }
        let deg = self.mixed_power(w, self.n - 1, &c1s.to_tau())?;
        Ok(TauRatio::new(deg, top.scale(&BigRational::from_integer(BigInt::from(rank))))?
            .times_tau())
    }

    /// Slope comparison of each supplied subobject against `E`.
    pub fn semistability_report(
        &self,
        rank_e: usize,
        c1e: &ClassVector,
        subobjects: &[(usize, ClassVector)],
        l: &ClassVector,
    ) -> Result<SemistabilityReport> {
        let mu_e = self.slope(rank_e, c1e, l)?;
        let entries = subobjects
            .iter()
            .map(|(rank, c1)| {
                if *rank == 0 || *rank > rank_e {
                    return Err(Error::BadRank { rank: *rank, max: rank_e });
                }
                let mu = self.slope(*rank, c1, l)?;
                let ok = mu <= mu_e;
                Ok(SubobjectVerdict { rank: *rank, mu, not_destabilizing: ok })
            })
            .collect::<Result<Vec<_>>>()?;
        let all = entries.iter().all(|e| e.not_destabilizing);
        Ok(SemistabilityReport { mu_e, entries, all_supplied_pass: all })
    }

    /// `c_γ = [γ]·L^(n-1) / L^n`.
    pub fn c_gamma(&self, l: &ClassVector, gamma: &ClassVector) -> Result<BigRational> {
        let top = self.self_intersection(l)?;
        if top.is_zero() {
            return Err(Error::DegeneratePolarization);
        }
        Ok(self.mixed_power(l, self.n - 1, gamma)? / top)
    }

    /// Nakai-Moishezon type inequality
    /// `∫_V (n c_γ L - p γ) L^(p-1) ≥ δ (n-p) ∫_V L^p` on each supplied subvariety.
    pub fn nm_check(
        &self,
        l: &ClassVector,
        gamma: &ClassVector,
        subvarieties: &[SubvarietyDatum],
        delta: &BigRational,
    ) -> Result<NmReport> {
        if delta.is_negative() {
            return Err(Error::InvalidData("delta must be nonnegative".into()));
        }
        let c_gamma = self.c_gamma(l, gamma)?;
        let n = BigRational::from_integer(BigInt::from(self.n));
        let entries = subvarieties
            .iter()
            .map(|v| {
                if v.p == 0 || v.p >= self.n {
                    return Err(Error::InvalidData(format!("subvariety dimension {}", v.p)));
                }
                let p = BigRational::from_integer(BigInt::from(v.p));
                let mixed = l.scale(&(n.clone() * c_gamma.clone())).minus(&gamma.scale(&p));
                let mut args = vec![&mixed];
                args.extend(std::iter::repeat(l).take(v.p - 1));
                let lhs = v.pair(&args)?;
                let lp = v.pair(&vec![l; v.p])?;
                let rhs = delta.clone()
                    * BigRational::from_integer(BigInt::from(self.n - v.p))
                    * lp;
                let holds = lhs >= rhs;
                Ok(NmEntry { p: v.p, lhs, rhs, holds })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NmReport { c_gamma, entries })
    }

    pub fn to_json(&self) -> IntersectionJson {
        let label = |idx: &[usize]| idx.iter().map(|&i| self.basis[i].label.clone()).collect();
        IntersectionJson {
            n: self.n,
            basis: self.basis.clone(),
            form: self
                .form
                .iter()
                .map(|(k, v)| MonomialValue { monomial: label(k), value: format_rational(v) })
                .collect(),
            c2: self
                .c2
                .iter()
                .map(|(k, v)| MonomialValue { monomial: label(k), value: format_rational(v) })
                .collect(),
        }
    }

    pub fn from_json(j: &IntersectionJson) -> Result<Self> {
        let conv = |list: &[MonomialValue]| -> Result<Vec<(Vec<String>, BigRational)>> {
            list.iter().map(|m| Ok((m.monomial.clone(), parse_rational(&m.value)?))).collect()
        };
        Self::new(j.n, j.basis.clone(), conv(&j.form)?, conv(&j.c2)?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: IntersectionJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&j)
    }

    /// `ε' = ((n+1)/n · α' - 1)^(-1) ε`.
    pub fn eps_prime(&self, alpha_prime: &BigRational, eps: &BigRational) -> Result<BigRational> {
        let factor = self.alpha_factor(alpha_prime) - BigRational::one();
        if !factor.is_positive() {
            return Err(Error::InvalidData("need α' > n/(n+1)".into()));
        }
        Ok(eps / factor)
    }

    /// `(n+1)/n · α' L + K`; equal to `((n+1)/n α' - 1)(L + ε' A)` when `L = -K + εA`.
    pub fn ample_rearrangement(&self, alpha_prime: &BigRational, l: &ClassVector) -> ClassVector {
        l.scale(&self.alpha_factor(alpha_prime)).plus(&self.canonical())
    }

    fn alpha_factor(&self, alpha_prime: &BigRational) -> BigRational {
        BigRational::new(BigInt::from(self.n + 1), BigInt::from(self.n)) * alpha_prime
    }
}

/// Restricted intersection numbers on a `p`-dimensional subvariety.
#[derive(Clone, Debug, PartialEq)]
pub struct SubvarietyDatum {
    pub p: usize,
    pub pairing: BTreeMap<Vec<String>, BigRational>,
}

impl SubvarietyDatum {
    pub fn new(p: usize, entries: Vec<(Vec<String>, BigRational)>) -> Self {
        let pairing = entries
            .into_iter()
            .map(|(mut m, v)| {
                m.sort();
                (m, v)
            })
            .collect();
        Self { p, pairing }
    }

    fn pair(&self, classes: &[&ClassVector]) -> Result<BigRational> {
        if classes.len() != self.p {
            return Err(Error::WrongArity { expected: self.p, got: classes.len() });
        }
        let mut total = BigRational::zero();
        fn walk(
            v: &SubvarietyDatum,
            classes: &[&ClassVector],
            depth: usize,
            coeff: BigRational,
            chosen: &mut Vec<String>,
            total: &mut BigRational,
        ) -> Result<()> {
            if depth == classes.len() {
                let mut key = chosen.clone();
                key.sort();
                let value =
                    v.pairing.get(&key).ok_or_else(|| Error::MissingPairing(key.clone()))?;
                *total += coeff * value;
                return Ok(());
            }
            for (l, c) in classes[depth].terms() {
                chosen.push(l.to_string());
                walk(v, classes, depth + 1, coeff.clone() * c, chosen, total)?;
                chosen.pop();
            }
            Ok(())
        }
        let mut labels = Vec::new();
        walk(self, classes, 0, BigRational::one(), &mut labels, &mut total)?;
        Ok(total)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubobjectVerdict {
    pub rank: usize,
    pub mu: BigRational,
    pub not_destabilizing: bool,
}

/// Verdicts for the supplied subobjects only; not a proof of semistability.
#[derive(Clone, Debug, PartialEq)]
pub struct SemistabilityReport {
    pub mu_e: BigRational,
    pub entries: Vec<SubobjectVerdict>,
    pub all_supplied_pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NmEntry {
    pub p: usize,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NmReport {
    pub c_gamma: BigRational,
    pub entries: Vec<NmEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialValue {
    pub monomial: Vec<String>,
    pub value: String,
}

/// Wire form of [`IntersectionData`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionJson {
    pub n: usize,
    pub basis: Vec<BasisLabel>,
    pub form: Vec<MonomialValue>,
    #[serde(default)]
    pub c2: Vec<MonomialValue>,
}

/// Projective space `P^n` with hyperplane class `H` (ample) and `K = -(n+1)H`.
pub fn projective_space(n: usize) -> IntersectionData {
    let h = "H".to_string();
    let k = "K".to_string();
    let basis = vec![
        BasisLabel { label: h.clone(), ample: true, canonical: false },
        BasisLabel { label: k.clone(), ample: false, canonical: true },
    ];
    let minus = -(n as i64 + 1);
    let mut form = Vec::new();
    for j in 0..=n {
        let mono: Vec<String> =
            std::iter::repeat(h.clone()).take(n - j).chain(std::iter::repeat(k.clone()).take(j)).collect();
        form.push((mono, BigRational::from_integer(BigInt::from(minus).pow(j as u32))));
    }
    // c(P^n) = (1+H)^(n+1): c2 = C(n+1,2) H².
    let mut c2 = Vec::new();
    if n >= 2 {
        let c2h = BigRational::from_integer(BigInt::from((n + 1) * n / 2));
        for j in 0..=n - 2 {
            let mono: Vec<String> = std::iter::repeat(h.clone())
                .take(n - 2 - j)
                .chain(std::iter::repeat(k.clone()).take(j))
                .collect();
            c2.push((mono, c2h.clone() * BigRational::from_integer(BigInt::from(minus).pow(j as u32))));
        }
    }
    IntersectionData::new(n, basis, form, c2).expect("projective space data is valid")
}

/// Surface datum modelling a very general blow-up of `P²` in nine points:
/// `K² = 0`, `K·A = -1`, `A² = 1`, `c2 = 12`.
pub fn dp9_type() -> IntersectionData {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let basis = vec![
        BasisLabel { label: "A".into(), ample: true, canonical: false },
        BasisLabel { label: "K".into(), ample: false, canonical: true },
    ];
    let form = vec![
        (s(&["A", "A"]), BigRational::one()),
        (s(&["A", "K"]), -BigRational::one()),
        (s(&["K", "K"]), BigRational::zero()),
    ];
    let c2 = vec![(Vec::new(), BigRational::from_integer(BigInt::from(12)))];
    IntersectionData::new(2, basis, form, c2).expect("dP9-type data is valid")
}
