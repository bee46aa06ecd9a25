mod common;

use mylab::curvlab::*;
use mylab::intersect::{kahler_class, projective_space, ClassVector};
use mylab::radial::KahlerProfile;
use mylab::solver::{solve_twisted_ke, SolveConfig};
use mylab::tau::{rat, TauPoly};
use mylab::toric::ToricSurfaceFan;
use mylab::{Error, IntersectionData, TauClass};
use num_rational::BigRational;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `τ·s·H` on `P^n`.
fn fs_class(s: &BigRational) -> TauClass {
    ClassVector::from_pairs([("H", TauPoly::monomial(s.clone(), 1))])
}

fn p1xp1() -> IntersectionData {
    ToricSurfaceFan::new(vec![[1, 0], [0, 1], [-1, 0], [0, -1]]).unwrap().build_intersection_data()
}

/// `τ(s1 D1 + s2 D2)`: the first factor's point class is `D1`, the
/// second's `D2`, so `ω_FS(s1) ⊕ ω_FS(s2)` lies in it.
fn product_class(s1: &BigRational, s2: &BigRational) -> TauClass {
    ClassVector::from_pairs([("D1", TauPoly::monomial(s1.clone(), 1)), ("D2", TauPoly::monomial(s2.clone(), 1))])
}

fn fs_product(s1: BigRational, s2: BigRational) -> MetricModel {
    MetricModel::Product(vec![MetricModel::fubini_study(1, s1), MetricModel::fubini_study(1, s2)])
}

#[test]
fn fubini_study_is_a_space_form_everywhere() {
    for n in 1..=3 {
        let m = MetricModel::fubini_study(n, rat(n as i64 + 1, 1));
        for (z, _) in m.sample_points(8) {
            let f = curvature_tensors(&m, &z).unwrap();
            assert!(f.rm_tilde_norm2 < 1e-24, "n={n}");
            assert!(f.ric_tilde_norm2 < 1e-24);
            assert!(f.ric_minus_omega_norm2 < 1e-24, "KE scale gives Ric = ω");
        }
    }
}

#[test]
fn equal_scale_product_has_einstein_ricci_but_not_constant_curvature() {
    let m = fs_product(rat(2, 1), rat(2, 1));
    let f = curvature_tensors(&m, &[c(0.3, 0.1), c(-1.2, 0.4)]).unwrap();
    assert!(f.rm_tilde_norm2 > 0.1);
    assert!(f.ric_tilde_norm2 < 1e-24);
    assert!(f.rm.kahler_symmetry_defect() < 1e-15);
    assert!(f.contraction_defect() < 1e-14);
}

#[test]
fn chen_ogiue_on_p2_vanishes_on_both_sides() {
    let data = projective_space(2);
    for s in [rat(3, 1), rat(1, 2)] {
        let r = chen_ogiue_check(&MetricModel::fubini_study(2, s.clone()), &data, &fs_class(&s)).unwrap();
        assert_eq!(r.lhs_exact, TauPoly::constant(rat(0, 1)));
        assert!(r.rhs.abs() < 1e-10, "{}", r.rhs);
    }
}

#[test]
fn chen_ogiue_on_product_is_eight() {
    // {6c2 - 2c1²} = 6·4 - 2·8 = 8, independent of the polarization at n = 2
    let data = p1xp1();
    let s = rat(2, 1);
    let r = chen_ogiue_check(&fs_product(s.clone(), s.clone()), &data, &product_class(&s, &s)).unwrap();
    assert_eq!(r.lhs_exact.as_constant(), Some(rat(8, 1)));
    assert!((r.lhs - r.rhs).abs() <= 1e-4 * r.lhs.abs().max(1.0), "{} vs {}", r.lhs, r.rhs);
}

#[test]
fn unequal_scales_move_curvature_into_the_ricci_term() {
    let data = p1xp1();
    let (a, b) = (rat(2, 1), rat(5, 1));
    let r = chen_ogiue_check(&fs_product(a.clone(), b.clone()), &data, &product_class(&a, &b)).unwrap();
    assert_eq!(r.lhs_exact.as_constant(), Some(rat(8, 1)));
    assert!((r.lhs - r.rhs).abs() < 1e-8);
    assert!(r.lower_bound <= r.rhs + 1e-12 && r.lower_bound < r.lhs);
    let f = curvature_tensors(&fs_product(a, b), &[c(0.5, 0.0), c(0.5, 0.0)]).unwrap();
    assert!(f.ric_tilde_norm2 > 1e-3);
}

#[test]
fn chen_ogiue_rejects_curves_and_wrong_classes() {
    let data = projective_space(2);
    let e = chen_ogiue_check(&MetricModel::fubini_study(1, rat(2, 1)), &projective_space(1), &fs_class(&rat(2, 1)));
    assert!(matches!(e, Err(Error::DimensionTooLow(1))));
    let e = chen_ogiue_check(&MetricModel::fubini_study(2, rat(3, 1)), &data, &fs_class(&rat(2, 1)));
    assert!(matches!(e, Err(Error::ClassMismatch(_))));
}

#[test]
fn chen_ogiue_on_radial_profiles_of_p2() {
    // at n = 2 the right side is a Chern-Weil integral, so every invariant
    // metric on P² gives 0 = 0, which tests the numerical curvature
    let data = projective_space(2);
    let g = common::grid();
    let mut rng = common::rng(11);
    for _ in 0..3 {
        let p = common::random_profile(&mut rng, 2, 0.0, &g);
        let model = MetricModel::Radial(Box::new(p));
        let r = chen_ogiue_check(&model, &data, &fs_class(&rat(3, 1))).unwrap();
        assert!(r.rhs.abs() < 1e-4, "rhs {:e}", r.rhs);
        assert!(r.lower_bound <= r.rhs + 1e-6);
    }
}

#[test]
fn radial_frames_satisfy_kahler_identities() {
    let g = common::grid();
    let mut rng = common::rng(5);
    let p = common::random_profile(&mut rng, 2, 0.0, &g);
    let m = MetricModel::Radial(Box::new(p));
    for z in [[c(0.7, 0.2), c(-0.1, 0.4)], [c(3.0, -1.0), c(0.5, 2.0)], [c(0.02, 0.0), c(0.0, 0.01)]] {
        let f = curvature_tensors(&m, &z).unwrap();
        let scale = f.rm_norm2.sqrt().max(1.0);
        assert!(f.rm.kahler_symmetry_defect() < 1e-6 * scale, "{:e}", f.rm.kahler_symmetry_defect());
        assert!(f.contraction_defect() < 1e-6 * scale);
        assert!(m.kahler_torsion(&z, DEFAULT_FD_STEP).unwrap() < 1e-6);
    }
}

#[test]
fn round_profile_matches_closed_form_frame() {
    let g = common::grid();
    let round = MetricModel::Radial(Box::new(KahlerProfile::round(2, 0.0, g)));
    let fs = MetricModel::fubini_study(2, rat(3, 1));
    let z = [c(0.8, -0.3), c(0.2, 0.5)];
    let a = curvature_tensors(&round, &z).unwrap();
    let b = curvature_tensors(&fs, &z).unwrap();
    let worst = a.rm.components().iter().zip(b.rm.components()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    assert!(worst < 1e-6, "{worst:e}");
}

#[test]
fn p1_solve_at_eps_zero_reproduces_fubini_study() {
    let g = common::grid();
    let cfg = SolveConfig::new(1, 0.0, common::theta_fs(&g));
    let start = KahlerProfile::sigma_polynomial(1, 0.0, g.clone(), &[0.3, -0.3]).unwrap();
    let r = solve_twisted_ke(&cfg, &start).unwrap();
    let solved = MetricModel::Radial(Box::new(r.profile));
    let fs = MetricModel::fubini_study(1, rat(2, 1));
    for (z, _) in fs.sample_points(16) {
        let a = curvature_tensors(&solved, &z).unwrap();
        let b = curvature_tensors(&fs, &z).unwrap();
        assert!((a.metric[(0, 0)] - b.metric[(0, 0)]).norm() <= 1e-6 * b.metric[(0, 0)].norm());
        assert!((a.scalar - b.scalar).abs() < 1e-6, "R {} vs {}", a.scalar, b.scalar);
        assert!(a.ric_minus_omega_norm2.sqrt() < 1e-6);
    }
}

#[test]
fn finite_differences_converge_at_fourth_order() {
    let z = [c(0.4, 0.1), c(-0.3, 0.2)];
    let mut ratios = Vec::new();
    for h in [0.08, 0.04, 0.02] {
        let e1 = fd_error_against_closed_form(2, rat(1, 1), &z, h).unwrap();
        let e2 = fd_error_against_closed_form(2, rat(1, 1), &z, h / 2.0).unwrap();
        ratios.push(e1 / e2);
    }
    for r in ratios {
        assert!((r - 16.0).abs() < 0.1 * 16.0, "ratio {r}");
    }
}

#[test]
fn extension_blocks_at_zero_twist_are_the_tangent_curvature() {
    let m = MetricModel::fubini_study(2, rat(3, 1));
    let z = [c(0.2, 0.3), c(-0.5, 0.1)];
    let ext = canonical_extension_curvature(&m, 0.0, &z).unwrap();
    let f = curvature_tensors(&m, &z).unwrap();
    for cc in 0..2 {
        for d in 0..2 {
            let b = &ext.blocks[cc * 2 + d];
            for i in 0..3 {
                assert!(b[(0, i)].norm() < 1e-15 && b[(i, 0)].norm() < 1e-15);
            }
            for i in 0..2 {
                for j in 0..2 {
                    assert!((b[(i + 1, j + 1)] - f.rm_unitary.get(j, i, cc, d)).norm() < 1e-15);
                }
            }
        }
    }
    assert_eq!(ext.off_diagonal, 0.0);
}

#[test]
fn extension_twist_terms_cancel_in_the_trace() {
    let m = MetricModel::fubini_study(1, rat(2, 1));
    let z = [c(0.9, -0.4)];
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let ext = canonical_extension_curvature(&m, a, &z).unwrap();
    let base = canonical_extension_curvature(&m, 0.0, &z).unwrap();
    assert!((ext.blocks[0].trace() - base.blocks[0].trace()).norm() < 1e-15);
    assert!((ext.blocks[0][(0, 0)].re - 0.5).abs() < 1e-15);
    let k = &ext.mean_curvature;
    assert!((k[(0, 0)] - k[(1, 1)]).norm() < 1e-14, "diagonal mean curvatures differ");
    assert_eq!(ext.off_diagonal, 0.0);
}

#[test]
fn hym_holds_at_the_critical_twist() {
    for n in 1..=3usize {
        let s = rat(n as i64 + 1, 1);
        let data = projective_space(n);
        let a = 1.0 / ((n + 1) as f64).sqrt();
        let r = hym_residual(&MetricModel::fubini_study(n, s.clone()), a, &data, &fs_class(&s)).unwrap();
        assert_eq!(r.mu_exact.as_rational(), Some(rat(1, n as i64 + 1)));
        assert!(r.residual < 1e-8, "n={n}: {:e}", r.residual);
    }
}

#[test]
fn hym_fails_for_the_wrong_twist() {
    let s = rat(2, 1);
    let r = hym_residual(&MetricModel::fubini_study(1, s.clone()), 1.0, &projective_space(1), &fs_class(&s)).unwrap();
    assert!((r.residual - 0.5).abs() < 1e-12, "{}", r.residual);
}

#[test]
fn hym_residual_of_twisted_solutions_shrinks_with_eps() {
    let g = common::grid();
    let data = projective_space(2);
    let h = ClassVector::basis("H");
    let mut last = f64::INFINITY;
    for (num, den) in [(1, 5), (1, 10), (1, 20)] {
        let eps = rat(num, den);
        let e = num as f64 / den as f64;
        let cfg = SolveConfig::new(2, e, common::theta_bumped(&g, 0.2));
        let start = KahlerProfile::sigma_polynomial(2, e, g.clone(), &[0.3, -0.3]).unwrap();
        let sol = solve_twisted_ke(&cfg, &start).unwrap();
        let w = kahler_class(&h.scale(&rat(3, 1)), &h, &eps);
        let r = hym_residual(&MetricModel::Radial(Box::new(sol.profile)), 1.0 / 3f64.sqrt(), &data, &w).unwrap();
        assert!(r.residual < last, "eps={e}: {:e} not below {last:e}", r.residual);
        assert!(r.residual < 0.2 * e, "eps={e}: {:e}", r.residual);
        last = r.residual;
    }
}

#[test]
fn radial_chart_errors() {
    let g = common::grid();
    let m = MetricModel::Radial(Box::new(KahlerProfile::round(1, 0.0, g)));
    assert!(matches!(curvature_tensors(&m, &[c(0.0, 0.0)]), Err(Error::OutOfChart(_))));
    assert!(matches!(curvature_tensors(&m, &[c(1e5, 0.0)]), Err(Error::OutOfChart(_))));
}

#[test]
fn frame_json_round_trips() {
    let m = MetricModel::fubini_study(2, rat(3, 1));
    let f = curvature_tensors(&m, &[c(0.1, 0.2), c(0.3, 0.4)]).unwrap();
    let j = f.to_json();
    let s = serde_json::to_string(&j).unwrap();
    let back: FrameJson = serde_json::from_str(&s).unwrap();
    assert_eq!(back, j);
    assert_eq!(j.rm.len(), 16);
}

#[test]
fn product_quadrature_integrates_the_volume() {
    let m = MetricModel::Product(vec![
        MetricModel::fubini_study(1, rat(2, 1)),
        MetricModel::fubini_study(2, rat(1, 3)),
    ]);
    let total: f64 = m.sample_points(SAMPLE_NODES).iter().map(|p| p.1).sum();
    assert!((total - m.volume()).abs() < 1e-10 * m.volume());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fs_frames_have_kahler_symmetries(
        n in 1usize..=3,
        num in 1i64..8, den in 1i64..5,
        coords in prop::collection::vec(-2.0f64..2.0, 6),
    ) {
        let m = MetricModel::fubini_study(n, rat(num, den));
        let z: Vec<C64> = (0..n).map(|i| c(coords[2 * i], coords[2 * i + 1])).collect();
        let f = curvature_tensors(&m, &z).unwrap();
        let scale = f.rm.components().iter().map(|v| v.norm()).fold(1.0, f64::max);
        prop_assert!(f.rm.kahler_symmetry_defect() < 1e-13 * scale);
        prop_assert!(f.contraction_defect() < 1e-12 * scale);
        prop_assert!(f.rm_tilde_norm2 < 1e-20 * scale * scale);
        // R = n(n+1)/s
        let expect = (n * (n + 1)) as f64 * den as f64 / num as f64;
        prop_assert!((f.scalar - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn product_norms_add_over_factors(
        a in 1i64..6, b in 1i64..6,
        x in -1.5f64..1.5, y in -1.5f64..1.5,
    ) {
        let m = fs_product(rat(a, 1), rat(b, 1));
        let f = curvature_tensors(&m, &[c(x, 0.2), c(0.1, y)]).unwrap();
        // each P¹ factor has |Rm|² = (2/s)², Ric = (2/s)ω
        let (ka, kb) = (2.0 / a as f64, 2.0 / b as f64);
        prop_assert!((f.rm_norm2 - ka * ka - kb * kb).abs() < 1e-12);
        let mean = (ka + kb) / 2.0;
        let ric_tilde = (ka - mean).powi(2) + (kb - mean).powi(2);
        prop_assert!((f.ric_tilde_norm2 - ric_tilde).abs() < 1e-12);
    }
}

#[test]
fn hym_nearly_vanishes_on_the_round_radial_model() {
    let g = common::grid();
    let s = rat(3, 1);
    let m = MetricModel::Radial(Box::new(KahlerProfile::round(2, 0.0, g)));
    let r = hym_residual(&m, 1.0 / 3f64.sqrt(), &projective_space(2), &fs_class(&s)).unwrap();
    assert_eq!(r.points, SAMPLE_NODES);
    assert!(r.residual < 1e-7, "{:e}", r.residual);
}

#[test]
fn radial_frames_agree_across_charts_and_rotations() {
    // the same sphere |z| = r seen at different points, on both sides of
    // the switch to the chart at infinity
    let g = common::grid();
    let mut rng = common::rng(8);
    let m = MetricModel::Radial(Box::new(common::random_profile(&mut rng, 2, 0.0, &g)));
    for r in [0.05, 0.9, 1.1, 7.0, 30.0] {
        let a = curvature_tensors(&m, &[c(r, 0.0), c(0.0, 0.0)]).unwrap();
        let k = r / 3f64.sqrt();
        let b = curvature_tensors(&m, &[c(k, k), c(-k, 0.0)]).unwrap();
        for (x, y) in [(a.rm_norm2, b.rm_norm2), (a.scalar, b.scalar), (a.rm_tilde_norm2, b.rm_tilde_norm2)] {
            assert!((x - y).abs() < 1e-7 * x.abs().max(1.0), "r={r}: {x} vs {y}");
        }
    }
}
