//! Smooth projective toric surfaces: intersection data from fans, moment
//! polytopes, and torus-invariant estimates of the delta and alpha invariants.
//!
//! Everything here is exact. For a torus-invariant divisor `D = Σ a_i D_i` on
//! a smooth toric surface the log canonical threshold is `min_i 1/a_i`; the
//! k-basis-type divisor is taken over the monomial basis of `H^0(kL)`, so the
//! reported values are torus-invariant estimates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intersect::{BasisLabel, ClassVector, IntersectionData};
use crate::tau::format_rational;

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn det(a: [i64; 2], b: [i64; 2]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Complete smooth fan in `Z²`. Rays keep their input labels `D1, D2, …`
/// while cones are formed in counterclockwise order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricSurfaceFan {
    rays: Vec<[i64; 2]>,
    ccw: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FanJson {
    pub rays: Vec<[i64; 2]>,
}

impl ToricSurfaceFan {
    pub fn new(rays: Vec<[i64; 2]>) -> Result<Self> {
        if rays.len() < 3 {
            return Err(Error::NotComplete(format!("{} rays cannot span R²", rays.len())));
        }
        for (i, r) in rays.iter().enumerate() {
            if r[0].gcd(&r[1]) != 1 {
                return Err(Error::NotSmooth(format!("ray {i} {r:?} is not primitive")));
            }
            if rays[..i].contains(r) {
                return Err(Error::NotSmooth(format!("ray {r:?} repeated")));
            }
        }
        let mut ccw: Vec<usize> = (0..rays.len()).collect();
        let angle = |r: &[i64; 2]| (r[1] as f64).atan2(r[0] as f64).rem_euclid(std::f64::consts::TAU);
        ccw.sort_by(|&a, &b| angle(&rays[a]).total_cmp(&angle(&rays[b])));
        let m = ccw.len();
        for j in 0..m {
            let (a, b) = (rays[ccw[j]], rays[ccw[(j + 1) % m]]);
            let d = det(a, b);
            if d <= 0 {
                return Err(Error::NotComplete(format!("rays {a:?}, {b:?} span no strictly convex cone")));
            }
            if d != 1 {
                return Err(Error::NotSmooth(format!("cone ({a:?}, {b:?}) has multiplicity {d}")));
            }
        }
        Ok(Self { rays, ccw })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: FanJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(j.rays)
    }

    pub fn rays(&self) -> &[[i64; 2]] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn label(i: usize) -> String {
        format!("D{}", i + 1)
    }

    fn position(&self, i: usize) -> usize {
        self.ccw.iter().position(|&j| j == i).expect("ray index in range")
    }

    fn neighbours(&self, i: usize) -> (usize, usize) {
        let m = self.ccw.len();
        let p = self.position(i);
        (self.ccw[(p + m - 1) % m], self.ccw[(p + 1) % m])
    }

    /// `D_i²` from `v_(i-1) + v_(i+1) = -(D_i²) v_i`.
    pub fn self_intersection(&self, i: usize) -> i64 {
        let (a, b) = self.neighbours(i);
        let s = [self.rays[a][0] + self.rays[b][0], self.rays[a][1] + self.rays[b][1]];
        let v = self.rays[i];
        let c = if v[0] != 0 { s[0] / v[0] } else { s[1] / v[1] };
        debug_assert_eq!([c * v[0], c * v[1]], s);
        -c
    }

    /// `D_i · D_j` on the surface.
    pub fn pairing(&self, i: usize, j: usize) -> i64 {
        if i == j {
            return self.self_intersection(i);
        }
        let (a, b) = self.neighbours(i);
        if j == a || j == b {
            1
        } else {
            0
        }
    }

    /// Degree of `Σ c_i D_i` on each invariant curve `D_j`.
    pub fn degrees(&self, c: &[BigRational]) -> Vec<BigRational> {
        (0..self.len())
            .map(|j| (0..self.len()).map(|i| &c[i] * q(self.pairing(i, j))).sum())
            .collect()
    }

    /// An ample combination of the ray divisors: `-K` when it is ample,
    /// otherwise `a_i = ⌈N |v_i|⌉` for the least `N` that works.
    ///
    /// With `a_i = |v_i|` exactly, `D·D_j = a_(j-1) + a_(j+1) + D_j² a_j` is
    /// positive by the strict triangle inequality applied to
    /// `v_(j-1) + v_(j+1) = -D_j² v_j`, so rounding up a large enough multiple
    /// keeps every degree positive.
    pub fn ample_divisor(&self) -> Vec<i64> {
        let minus_k = vec![1i64; self.len()];
        if self.is_ample(&minus_k) {
            return minus_k;
        }
        (1i64..)
            .map(|n| self.rays.iter().map(|v| ceil_sqrt(n * n * (v[0] * v[0] + v[1] * v[1]))).collect::<Vec<_>>())
            .find(|c| self.is_ample(c))
            .expect("projective toric surfaces carry an ample divisor")
    }

    fn is_ample(&self, c: &[i64]) -> bool {
        let cq: Vec<BigRational> = c.iter().map(|&x| q(x)).collect();
        self.degrees(&cq).iter().all(Signed::is_positive)
    }

    /// Intersection data on labels `D1..Dr`, the canonical class `K = -ΣD_i`
    /// and an ample class `A`; `c2` is the number of rays.
    pub fn build_intersection_data(&self) -> IntersectionData {
        let r = self.len();
        let ample = self.ample_divisor();
        // every label as a vector over the D_i
        let mut vectors: Vec<(String, Vec<i64>)> =
            (0..r).map(|i| (Self::label(i), (0..r).map(|j| i64::from(i == j)).collect())).collect();
        vectors.push(("K".into(), vec![-1; r]));
        vectors.push(("A".into(), ample));
        let mut basis: Vec<BasisLabel> = (0..r)
            .map(|i| BasisLabel { label: Self::label(i), ample: false, canonical: false })
            .collect();
        basis.push(BasisLabel { label: "K".into(), ample: false, canonical: true });
        basis.push(BasisLabel { label: "A".into(), ample: true, canonical: false });
        let mut form = Vec::new();
        for (a, (la, va)) in vectors.iter().enumerate() {
            for (lb, vb) in vectors.iter().skip(a) {
                let mut value = 0i64;
                for i in 0..r {
                    for j in 0..r {
                        value += va[i] * vb[j] * self.pairing(i, j);
                    }
                }
                form.push((vec![la.clone(), lb.clone()], q(value)));
            }
        }
        let c2 = vec![(Vec::new(), q(r as i64))];
        IntersectionData::new(2, basis, form, c2).expect("toric data is consistent")
    }

    /// Whether `Σ (a_i - λ_i) D_i ~ 0`, i.e. `a_i - λ_i = ⟨m, v_i⟩` for some `m ∈ Q²`.
    pub fn is_linearly_equivalent(&self, a: &[BigRational], lambda: &[BigRational]) -> bool {
        let diff: Vec<BigRational> = a.iter().zip(lambda).map(|(x, y)| x - y).collect();
        let (i, j) = (self.ccw[0], self.ccw[1]);
        let (vi, vj) = (self.rays[i], self.rays[j]);
        let d = q(det(vi, vj));
        // solve m·vi = diff_i, m·vj = diff_j
        let m0 = (&diff[i] * q(vj[1]) - &diff[j] * q(vi[1])) / &d;
        let m1 = (&diff[j] * q(vi[0]) - &diff[i] * q(vj[0])) / &d;
        self.rays
            .iter()
            .zip(&diff)
            .all(|(v, dv)| &m0 * q(v[0]) + &m1 * q(v[1]) == *dv)
    }
}

/// Least `m ≥ 0` with `m² ≥ x`.
fn ceil_sqrt(x: i64) -> i64 {
    let mut m = (x as f64).sqrt() as i64;
    while m * m < x {
        m += 1;
    }
    while m > 0 && (m - 1) * (m - 1) >= x {
        m -= 1;
    }
    m
}

/// `{u : ⟨u, v_i⟩ ≥ -λ_i}` with exact rational offsets.
#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    normals: Vec<[i64; 2]>,
    offsets: Vec<BigRational>,
    vertices: Vec<[BigRational; 2]>,
}

impl Polytope {
    pub fn new(normals: Vec<[i64; 2]>, offsets: Vec<BigRational>) -> Result<Self> {
        assert_eq!(normals.len(), offsets.len());
        let feasible = |p: &[BigRational; 2]| {
            normals
                .iter()
                .zip(&offsets)
                .all(|(v, l)| &p[0] * q(v[0]) + &p[1] * q(v[1]) >= -l.clone())
        };
        let mut vertices: Vec<[BigRational; 2]> = Vec::new();
        for i in 0..normals.len() {
            for j in i + 1..normals.len() {
                let (a, b) = (normals[i], normals[j]);
                let d = det(a, b);
                if d == 0 {
                    continue;
                }
                let d = q(d);
                let (ra, rb) = (-offsets[i].clone(), -offsets[j].clone());
                let x = (&ra * q(b[1]) - &rb * q(a[1])) / &d;
                let y = (&rb * q(a[0]) - &ra * q(b[0])) / &d;
                let p = [x, y];
                if feasible(&p) && !vertices.contains(&p) {
                    vertices.push(p);
                }
            }
        }
        if vertices.len() < 3 {
            return Err(Error::EmptyPolytope);
        }
        // counterclockwise around the vertex average
        let m = q(vertices.len() as i64);
        let cx: BigRational = vertices.iter().map(|p| p[0].clone()).sum::<BigRational>() / &m;
        let cy: BigRational = vertices.iter().map(|p| p[1].clone()).sum::<BigRational>() / &m;
        let ang = |p: &[BigRational; 2]| {
            let dx = crate::tau::rational_to_f64(&(&p[0] - &cx));
            let dy = crate::tau::rational_to_f64(&(&p[1] - &cy));
            dy.atan2(dx)
        };
        vertices.sort_by(|a, b| ang(a).total_cmp(&ang(b)));
        let poly = Self { normals, offsets, vertices };
        if !poly.area().is_positive() {
            return Err(Error::EmptyPolytope);
        }
        Ok(poly)
    }

    /// Moment polytope of `Σ λ_i D_i`; every facet line must touch the polytope.
    pub fn of_divisor(fan: &ToricSurfaceFan, lambda: Vec<BigRational>) -> Result<Self> {
        let p = Self::new(fan.rays().to_vec(), lambda)?;
        for i in 0..p.normals.len() {
            if !p.vertices.iter().any(|u| p.pair(u, i) == -p.offsets[i].clone()) {
                return Err(Error::EmptyPolytope);
            }
        }
        Ok(p)
    }

    pub fn normals(&self) -> &[[i64; 2]] {
        &self.normals
    }

    pub fn offsets(&self) -> &[BigRational] {
        &self.offsets
    }

    pub fn vertices(&self) -> &[[BigRational; 2]] {
        &self.vertices
    }

    fn pair(&self, u: &[BigRational; 2], i: usize) -> BigRational {
        &u[0] * q(self.normals[i][0]) + &u[1] * q(self.normals[i][1])
    }

    /// Twice the signed area, by the shoelace formula.
    fn twice_area(&self) -> BigRational {
        let m = self.vertices.len();
        (0..m)
            .map(|i| {
                let (a, b) = (&self.vertices[i], &self.vertices[(i + 1) % m]);
                &a[0] * &b[1] - &a[1] * &b[0]
            })
            .sum()
    }

    pub fn area(&self) -> BigRational {
        self.twice_area() / q(2)
    }

    /// Exact barycenter by triangulating from the vertex average.
    pub fn barycenter(&self) -> [BigRational; 2] {
        let m = self.vertices.len();
        let mq = q(m as i64);
        let c: [BigRational; 2] = [
            self.vertices.iter().map(|p| p[0].clone()).sum::<BigRational>() / &mq,
            self.vertices.iter().map(|p| p[1].clone()).sum::<BigRational>() / &mq,
        ];
        let mut area = BigRational::zero();
        let mut moment = [BigRational::zero(), BigRational::zero()];
        for i in 0..m {
            let (a, b) = (&self.vertices[i], &self.vertices[(i + 1) % m]);
            let w = (&a[0] - &c[0]) * (&b[1] - &c[1]) - (&a[1] - &c[1]) * (&b[0] - &c[0]);
            for d in 0..2 {
                moment[d] += &w * (&c[d] + &a[d] + &b[d]) / q(3);
            }
            area += w;
        }
        [&moment[0] / &area, &moment[1] / &area]
    }

    /// Lattice points of `kP`, row by row.
    pub fn lattice_points(&self, k: u32) -> Vec<[i64; 2]> {
        let kq = q(k as i64);
        let xs: Vec<BigRational> = self.vertices.iter().map(|p| &p[0] * &kq).collect();
        let xmin = xs.iter().min().expect("vertices").ceil().to_integer();
        let xmax = xs.iter().max().expect("vertices").floor().to_integer();
        let mut out = Vec::new();
        let mut x = xmin;
        while x <= xmax {
            let xq = BigRational::from_integer(x.clone());
            let mut lo: Option<BigRational> = None;
            let mut hi: Option<BigRational> = None;
            let mut ok = true;
            for (v, l) in self.normals.iter().zip(&self.offsets) {
                // v0 x + v1 y >= -k l
                let rhs = -(&kq * l) - &xq * q(v[0]);
                match v[1].signum() {
                    1 => {
                        let b = rhs / q(v[1]);
                        lo = Some(lo.map_or(b.clone(), |c| c.max(b)));
                    }
                    -1 => {
                        let b = rhs / q(v[1]);
                        hi = Some(hi.map_or(b.clone(), |c| c.min(b)));
                    }
                    _ => ok &= !rhs.is_positive(),
                }
            }
            if ok {
                if let (Some(lo), Some(hi)) = (lo, hi) {
                    let (a, b) = (lo.ceil().to_integer(), hi.floor().to_integer());
                    let mut y = a;
                    while y <= b {
                        out.push([to_i64(&x), to_i64(&y)]);
                        y += 1;
                    }
                }
            }
            x += 1;
        }
        out
    }

    /// Lattice points on the boundary of `kP`; `None` unless all vertices are integral.
    pub fn boundary_lattice_points(&self, k: u32) -> Option<u64> {
        let kq = q(k as i64);
        let m = self.vertices.len();
        let mut total = 0u64;
        for i in 0..m {
            let (a, b) = (&self.vertices[i], &self.vertices[(i + 1) % m]);
            let dx = (&b[0] - &a[0]) * &kq;
            let dy = (&b[1] - &a[1]) * &kq;
            if !dx.is_integer() || !dy.is_integer() || !(&a[0] * &kq).is_integer() || !(&a[1] * &kq).is_integer() {
                return None;
            }
            total += to_i64(&dx.to_integer()).unsigned_abs().gcd(&to_i64(&dy.to_integer()).unsigned_abs());
        }
        Some(total)
    }

    fn check_level(&self, k: u32) -> Result<Vec<[i64; 2]>> {
        let pts = if k == 0 { Vec::new() } else { self.lattice_points(k) };
        if pts.is_empty() {
            return Err(Error::NoSections(k));
        }
        Ok(pts)
    }

    /// Order of vanishing of the monomial section `u` of `kL` along `D_i`.
    fn order(&self, u: &[i64; 2], i: usize, k: u32) -> BigRational {
        q(u[0] * self.normals[i][0] + u[1] * self.normals[i][1]) + q(k as i64) * &self.offsets[i]
    }

    /// `(N_k, a_i)` for the monomial k-basis-type divisor `Σ a_i D_i`.
    pub fn basis_type_coefficients(&self, k: u32) -> Result<(usize, Vec<BigRational>)> {
        let pts = self.check_level(k)?;
        let n_k = pts.len();
        let scale = q(k as i64 * n_k as i64);
        let coeffs = (0..self.normals.len())
            .map(|i| {
                let sum_u = pts.iter().fold([0i64, 0i64], |acc, u| [acc[0] + u[0], acc[1] + u[1]]);
                let total = q(sum_u[0] * self.normals[i][0] + sum_u[1] * self.normals[i][1])
                    + q(k as i64 * n_k as i64) * &self.offsets[i];
                total / &scale
            })
            .collect();
        Ok((n_k, coeffs))
    }

    /// `δ_k = min_i 1/a_i` over the monomial basis-type divisor.
    pub fn delta_k(&self, k: u32) -> Result<BigRational> {
        let (_, a) = self.basis_type_coefficients(k)?;
        Ok(lct_of_coefficients(&a))
    }

    /// `min_i 1/(λ_i + ⟨b, v_i⟩)` with `b` the barycenter.
    pub fn delta_limit(&self) -> BigRational {
        let b = self.barycenter();
        let a: Vec<BigRational> =
            (0..self.normals.len()).map(|i| &self.offsets[i] + self.pair(&b, i)).collect();
        lct_of_coefficients(&a)
    }

    /// Minimum over monomial sections of the lct of `(1/k) div(s_u)`.
    pub fn alpha_k(&self, k: u32) -> Result<BigRational> {
        let pts = self.check_level(k)?;
        let kq = q(k as i64);
        Ok(pts
            .iter()
            .map(|u| {
                let a: Vec<BigRational> =
                    (0..self.normals.len()).map(|i| self.order(u, i, k) / &kq).collect();
                lct_of_coefficients(&a)
            })
            .min()
            .expect("nonempty"))
    }

    /// `k → ∞` limit of [`Polytope::alpha_k`]: the worst vertex of `P`.
    pub fn alpha_limit(&self) -> BigRational {
        self.vertices
            .iter()
            .map(|u| {
                let a: Vec<BigRational> =
                    (0..self.normals.len()).map(|i| &self.offsets[i] + self.pair(u, i)).collect();
                lct_of_coefficients(&a)
            })
            .min()
            .expect("nonempty")
    }

    pub fn delta_estimate(&self, k: u32) -> Result<DeltaEstimate> {
        let (n_k, coefficients) = self.basis_type_coefficients(k)?;
        Ok(DeltaEstimate {
            k,
            n_k,
            delta_k: lct_of_coefficients(&coefficients),
            alpha_k: self.alpha_k(k)?,
            delta_limit: self.delta_limit(),
            coefficients,
        })
    }
}

fn to_i64(x: &BigInt) -> i64 {
    i64::try_from(x).expect("lattice coordinate fits in i64")
}

/// Toric lct: `min_i 1/a_i` over positive coefficients.
pub fn lct_of_coefficients(a: &[BigRational]) -> BigRational {
    a.iter()
        .filter(|x| x.is_positive())
        .map(|x| x.recip())
        .min()
        .unwrap_or_else(|| BigRational::from_integer(BigInt::from(i64::MAX)))
}

/// Moment polytope of `-K`: all offsets equal to one.
pub fn anticanonical_polytope(fan: &ToricSurfaceFan) -> Result<Polytope> {
    Polytope::of_divisor(fan, vec![BigRational::one(); fan.len()])
}

/// Moment polytope of `-K + εA` with `A` the fan's ample divisor.
pub fn perturbed_anticanonical_polytope(fan: &ToricSurfaceFan, eps: &BigRational) -> Result<Polytope> {
    let a = fan.ample_divisor();
    Polytope::of_divisor(fan, a.iter().map(|&c| BigRational::one() + eps * q(c)).collect())
}

/// `δ_k(-K + εA)` over a user-supplied grid of `ε`; no limit is inferred.
pub fn delta_on_eps_grid(
    fan: &ToricSurfaceFan,
    k: u32,
    eps: &[BigRational],
) -> Result<Vec<(BigRational, BigRational)>> {
    eps.iter()
        .map(|e| Ok((e.clone(), perturbed_anticanonical_polytope(fan, e)?.delta_k(k)?)))
        .collect()
}

/// Comparison inequalities between α and δ: `δ/(n+1) ≤ α ≤ δ`, and
/// `α ≤ n δ/(n+1)` when the class is ample.
pub fn check_bj_bounds(alpha: &BigRational, delta: &BigRational, n: usize, ample: bool) -> bool {
    let n1 = q(n as i64 + 1);
    let lower = alpha >= &(delta / &n1);
    let upper = alpha <= delta;
    let ample_ok = !ample || alpha <= &(delta * q(n as i64) / &n1);
    lower && upper && ample_ok
}

/// Torus-invariant estimate at level `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaEstimate {
    pub k: u32,
    pub n_k: usize,
    pub coefficients: Vec<BigRational>,
    pub delta_k: BigRational,
    pub alpha_k: BigRational,
    pub delta_limit: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaReportJson {
    pub k: u32,
    #[serde(rename = "N_k")]
    pub n_k: usize,
    pub coefficients: Vec<String>,
    pub delta_k: String,
    pub alpha_k: String,
    pub delta_limit: String,
}

impl DeltaEstimate {
    pub fn to_json(&self) -> DeltaReportJson {
        DeltaReportJson {
            k: self.k,
            n_k: self.n_k,
            coefficients: self.coefficients.iter().map(format_rational).collect(),
            delta_k: format_rational(&self.delta_k),
            alpha_k: format_rational(&self.alpha_k),
            delta_limit: format_rational(&self.delta_limit),
        }
    }
}

/// Divisor class `Σ c_i D_i` as a class vector on the fan's labels.
pub fn divisor_class(c: &[BigRational]) -> ClassVector {
    ClassVector::from_pairs(c.iter().enumerate().map(|(i, x)| (ToricSurfaceFan::label(i), x.clone())))
}

/// Named fans shipped with the lab.
pub mod fans {
    use super::ToricSurfaceFan;

    pub fn p2() -> ToricSurfaceFan {
        ToricSurfaceFan::new(vec![[1, 0], [0, 1], [-1, -1]]).expect("valid")
    }

    pub fn p1xp1() -> ToricSurfaceFan {
        ToricSurfaceFan::new(vec![[1, 0], [0, 1], [-1, 0], [0, -1]]).expect("valid")
    }

    /// One-point blow-up of `P²`; `D4` is the exceptional curve.
    pub fn bl1p2() -> ToricSurfaceFan {
        ToricSurfaceFan::new(vec![[1, 0], [0, 1], [-1, -1], [1, 1]]).expect("valid")
    }

    /// Hirzebruch surface `F_a`.
    pub fn hirzebruch(a: i64) -> ToricSurfaceFan {
        ToricSurfaceFan::new(vec![[1, 0], [0, 1], [-1, a], [0, -1]]).expect("valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tau::rat;

    #[test]
    fn chern_numbers_of_corpus() {
        for (fan, c1sq, c2) in [
            (fans::p2(), 9, 3),
            (fans::p1xp1(), 8, 4),
            (fans::bl1p2(), 8, 4),
            (fans::hirzebruch(2), 8, 4),
        ] {
            let d = fan.build_intersection_data();
            let c1 = d.anticanonical();
            assert_eq!(d.intersection_number(&[&c1, &c1]).unwrap(), rat(c1sq, 1));
            assert_eq!(d.c2_pairing::<BigRational>(&[]).unwrap(), rat(c2, 1));
            // Noether's formula for rational surfaces
            assert_eq!(c1sq + c2, 12);
        }
        assert_eq!(fans::bl1p2().self_intersection(3), -1);
        assert_eq!(fans::hirzebruch(2).self_intersection(1), -2);
    }

    #[test]
    fn invalid_fans() {
        assert!(matches!(ToricSurfaceFan::new(vec![[1, 0], [1, 2], [-1, -1]]), Err(Error::NotSmooth(_))));
        assert!(matches!(ToricSurfaceFan::new(vec![[2, 0], [0, 1], [-1, -1]]), Err(Error::NotSmooth(_))));
        assert!(matches!(ToricSurfaceFan::new(vec![[1, 0], [0, 1], [-1, 0]]), Err(Error::NotComplete(_))));
        assert!(matches!(ToricSurfaceFan::new(vec![[1, 0], [0, 1]]), Err(Error::NotComplete(_))));
    }

    #[test]
    fn anticanonical_polytopes() {
        let p = anticanonical_polytope(&fans::p2()).unwrap();
        let mut v: Vec<(i64, i64)> =
            p.vertices().iter().map(|u| (to_i64(&u[0].to_integer()), to_i64(&u[1].to_integer()))).collect();
        v.sort();
        assert_eq!(v, vec![(-1, -1), (-1, 2), (2, -1)]);
        let sq = anticanonical_polytope(&fans::p1xp1()).unwrap();
        assert_eq!(sq.vertices().len(), 4);
        assert_eq!(sq.area(), rat(4, 1));
        let bl = anticanonical_polytope(&fans::bl1p2()).unwrap();
        assert_eq!(bl.vertices().len(), 4);
        assert_eq!(bl.barycenter(), [rat(1, 12), rat(1, 12)]);
    }

    #[test]
    fn delta_and_alpha_values() {
        let p2 = anticanonical_polytope(&fans::p2()).unwrap();
        let (n1, a) = p2.basis_type_coefficients(1).unwrap();
        assert_eq!(n1, 10);
        assert!(a.iter().all(|x| *x == rat(1, 1)));
        assert_eq!(p2.delta_k(1).unwrap(), rat(1, 1));
        assert_eq!(p2.alpha_k(1).unwrap(), rat(1, 3));
        assert_eq!(p2.delta_limit(), rat(1, 1));
        let sq = anticanonical_polytope(&fans::p1xp1()).unwrap();
        assert_eq!(sq.basis_type_coefficients(1).unwrap().0, 9);
        assert_eq!(sq.alpha_k(1).unwrap(), rat(1, 2));
        let bl = anticanonical_polytope(&fans::bl1p2()).unwrap();
        assert!(bl.delta_k(2).unwrap() < rat(1, 1));
        assert_eq!(bl.delta_limit(), rat(6, 7));
        assert_eq!(bl.alpha_limit(), rat(1, 3));
        assert_eq!(bl.delta_k(0), Err(Error::NoSections(0)));
    }

    #[test]
    fn single_point_polytope_alpha() {
        // P = [-1/2, 1/3] x [-1/3, 1/2]-type box: only the origin at k = 1
        let fan = fans::p1xp1();
        let p = Polytope::of_divisor(&fan, vec![rat(1, 2), rat(1, 3), rat(1, 3), rat(1, 2)]).unwrap();
        assert_eq!(p.lattice_points(1), vec![[0, 0]]);
        assert_eq!(p.alpha_k(1).unwrap(), rat(2, 1));
    }

    #[test]
    fn bj_bounds() {
        assert!(check_bj_bounds(&rat(1, 3), &rat(1, 1), 2, true));
        assert!(!check_bj_bounds(&rat(1, 1), &rat(1, 1), 2, true));
        assert!(check_bj_bounds(&rat(1, 2), &rat(1, 2), 2, false));
        assert!(check_bj_bounds(&rat(0, 1), &rat(0, 1), 2, true));
        assert!(!check_bj_bounds(&rat(1, 10), &rat(1, 1), 2, false));
    }

    #[test]
    fn nef_but_not_ample_fan_has_ample_class() {
        let d = fans::hirzebruch(2).build_intersection_data();
        let a: ClassVector = ClassVector::basis("A");
        assert!(d.self_intersection(&a).unwrap().is_positive());
        assert_eq!(d.numerical_dimension(&d.anticanonical(), &a).unwrap(), 2);
    }
}
