#![allow(dead_code)]

use std::sync::Arc;

use mylab::radial::{grid::logistic, Grid, KahlerProfile, RadialForm};
use mylab::toric::Polytope;
use num_rational::BigRational;
use num_traits::Zero;
use mylab::tau::TAU;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn grid() -> Arc<Grid> {
    Arc::new(Grid::default_grid())
}

/// Random coefficients of `Σ c_k σ^k`, `k = 1..=degree`.
pub fn random_coeffs(rng: &mut impl Rng, degree: usize, amp: f64) -> Vec<f64> {
    (0..degree).map(|_| rng.gen_range(-amp..amp)).collect()
}

/// A random Kähler profile `φ = Σ c_k σ^k` in the class with parameter `eps`.
pub fn random_profile(rng: &mut impl Rng, n: usize, eps: f64, grid: &Arc<Grid>) -> KahlerProfile {
    loop {
        let c = random_coeffs(rng, 4, 0.6);
        if let Ok(p) = KahlerProfile::sigma_polynomial(n, eps, grid.clone(), &c) {
            return p;
        }
    }
}

/// Random smooth radial direction `u = Σ c_k σ^k`, scaled to sup norm 1 so
/// that a step `s` moves the potential by at most `s`.
pub fn random_direction(rng: &mut impl Rng, grid: &Grid) -> Vec<f64> {
    let c = random_coeffs(rng, 3, 1.0);
    let u: Vec<f64> = grid.sigma().iter().map(|&s| c.iter().rev().fold(0.0, |acc, a| (acc + a) * s)).collect();
    let sup = u.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    u.into_iter().map(|v| v / sup).collect()
}

/// `-(1/2π)` times the unit Fubini-Study form, representing `-c1(H)`.
pub fn theta_fs(grid: &Arc<Grid>) -> RadialForm {
    RadialForm::fubini_study(grid.clone(), -1.0 / TAU)
}

/// `θ_fs` plus the exact form `dd^c(-(b/2π) σ(1-σ))`, so that `θ` is not a
/// multiple of a round metric and the twisted solution is not round.
pub fn theta_bumped(grid: &Arc<Grid>, b: f64) -> RadialForm {
    RadialForm::from_momentum_fn(grid.clone(), -1.0 / TAU, |t| {
        let s = logistic(t);
        let s1 = s * logistic(-t);
        [
            -(b / TAU) * s1,
            -(s + b * s1 * (1.0 - 2.0 * s)) / TAU,
            -(s1 + b * s1 * (1.0 - 6.0 * s + 6.0 * s * s)) / TAU,
        ]
    })
}

/// Rays sorted counterclockwise by angle.
pub fn ccw(rays: &[[i64; 2]]) -> Vec<[i64; 2]> {
    let mut r = rays.to_vec();
    r.sort_by(|a, b| (a[1] as f64).atan2(a[0] as f64).total_cmp(&(b[1] as f64).atan2(b[0] as f64)));
    r
}

/// Every smooth complete fan with nef `-K` (all `D_i² ≥ -2`) reachable from
/// `P²`, `P¹×P¹` and `F_2` by toric blow-ups, up to the order they are found.
/// Contains the 16 smooth reflexive polygons, with repeats under `GL(2, Z)`.
pub fn nef_fans() -> Vec<mylab::toric::ToricSurfaceFan> {
    use mylab::toric::ToricSurfaceFan;
    let mut out: Vec<Vec<[i64; 2]>> = Vec::new();
    let mut frontier = vec![
        vec![[1, 0], [0, 1], [-1, -1]],
        vec![[1, 0], [0, 1], [-1, 0], [0, -1]],
        vec![[1, 0], [0, 1], [-1, 2], [0, -1]],
    ];
    while let Some(rays) = frontier.pop() {
        let rays = ccw(&rays);
        if out.contains(&rays) {
            continue;
        }
        let fan = ToricSurfaceFan::new(rays.clone()).expect("smooth fan");
        if (0..fan.len()).any(|i| fan.self_intersection(i) < -2) {
            continue;
        }
        for i in 0..rays.len() {
            let (a, b) = (rays[i], rays[(i + 1) % rays.len()]);
            let mut next = rays.clone();
            next.push([a[0] + b[0], a[1] + b[1]]);
            frontier.push(next);
        }
        out.push(rays);
    }
    out.into_iter().map(|r| ToricSurfaceFan::new(r).unwrap()).collect()
}

fn q(v: i64) -> BigRational {
    mylab::tau::rat(v, 1)
}

/// Lattice points of `kP` by scanning a bounding box, independent of the
/// row-sweep in the library.
pub fn brute_lattice_points(p: &Polytope, k: u32) -> Vec<[i64; 2]> {
    let kq = q(k as i64);
    let xs: Vec<BigRational> = p.vertices().iter().flat_map(|v| [&v[0] * &kq, &v[1] * &kq]).collect();
    let lo = xs.iter().min().unwrap().floor().to_integer();
    let hi = xs.iter().max().unwrap().ceil().to_integer();
    let (lo, hi): (i64, i64) = (i64::try_from(lo).unwrap(), i64::try_from(hi).unwrap());
    let mut out = Vec::new();
    for x in lo..=hi {
        for y in lo..=hi {
            let inside = p
                .normals()
                .iter()
                .zip(p.offsets())
                .all(|(v, l)| q(x * v[0] + y * v[1]) + &kq * l >= BigRational::zero());
            if inside {
                out.push([x, y]);
            }
        }
    }
    out
}

/// The basis-type divisor built section by section: each monomial `s_u`
/// contributes `div(s_u) = Σ_i (⟨u, v_i⟩ + kλ_i) D_i`, and the sum is
/// divided by `k N_k`.
pub fn brute_basis_type(p: &Polytope, k: u32) -> (usize, Vec<BigRational>) {
    let pts = brute_lattice_points(p, k);
    let r = p.normals().len();
    let mut sum = vec![BigRational::zero(); r];
    for u in &pts {
        for (i, (v, l)) in p.normals().iter().zip(p.offsets()).enumerate() {
            sum[i] += q(u[0] * v[0] + u[1] * v[1]) + q(k as i64) * l;
        }
    }
    let scale = q(k as i64 * pts.len() as i64);
    (pts.len(), sum.into_iter().map(|s| s / &scale).collect())
}

pub fn brute_delta(p: &Polytope, k: u32) -> BigRational {
    brute_basis_type(p, k).1.into_iter().filter(|a| *a > BigRational::zero()).map(|a| a.recip()).min().unwrap()
}

/// Directory of shipped example data: `MYLAB_CORPUS` if set, else the
/// `corpus/` folder at the workspace root.
pub fn corpus_dir() -> std::path::PathBuf {
    std::env::var_os("MYLAB_CORPUS")
        .map(Into::into)
        .unwrap_or_else(|| std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus"))
}

/// Every fan under `corpus/fans`, sorted by file name.
pub fn corpus_fans() -> Vec<(String, mylab::toric::ToricSurfaceFan)> {
    let mut paths: Vec<_> = std::fs::read_dir(corpus_dir().join("fans"))
        .expect("corpus/fans exists")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let fan = mylab::toric::ToricSurfaceFan::from_json_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
            (name, fan)
        })
        .collect()
}

/// Every intersection datum under `corpus/intersection`, sorted by file name.
pub fn corpus_intersection() -> Vec<(String, mylab::IntersectionData)> {
    let mut paths: Vec<_> = std::fs::read_dir(corpus_dir().join("intersection"))
        .expect("corpus/intersection exists")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let d = mylab::IntersectionData::from_json_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
            (name, d)
        })
        .collect()
}
