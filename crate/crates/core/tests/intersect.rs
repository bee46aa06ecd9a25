mod common;

use mylab::intersect::{dp9_type, kahler_class, projective_space, SubvarietyDatum};
use mylab::tau::{rat, TauPoly};
use mylab::toric::fans;
use mylab::{ClassVector, Error, IntersectionData};
use num_rational::BigRational;
use proptest::prelude::*;

fn h() -> ClassVector {
    ClassVector::basis("H")
}

fn label_vectors(data: &IntersectionData) -> Vec<ClassVector> {
    data.basis().iter().map(|b| ClassVector::basis(b.label.clone())).collect()
}

fn combination(data: &IntersectionData, coeffs: &[(i64, i64)]) -> ClassVector {
    label_vectors(data)
        .iter()
        .zip(coeffs)
        .fold(ClassVector::zero(), |acc, (v, &(p, q))| acc.plus(&v.scale(&rat(p, q))))
}

#[test]
fn spec_intersection_numbers() {
    let p2 = fans::p2().build_intersection_data();
    let c1 = p2.anticanonical();
    assert_eq!(p2.intersection_number(&[&c1, &c1]).unwrap(), rat(9, 1));
    assert_eq!(projective_space(2).intersection_number(&[&h().scale(&rat(3, 1)), &h().scale(&rat(3, 1))]).unwrap(), rat(9, 1));
    let q = fans::p1xp1().build_intersection_data();
    let c1 = q.anticanonical();
    assert_eq!(q.intersection_number(&[&c1, &c1]).unwrap(), rat(8, 1));
    assert_eq!(q.intersection_number(&[&ClassVector::zero(), &c1]).unwrap(), rat(0, 1));
}

#[test]
fn wrong_arity_and_unknown_labels() {
    let d = projective_space(2);
    assert!(matches!(d.intersection_number(&[&h()]), Err(Error::WrongArity { expected: 2, got: 1 })));
    let bad = ClassVector::basis("Z");
    assert!(matches!(d.intersection_number(&[&bad, &h()]), Err(Error::UnknownLabel(_))));
}

#[test]
fn numerical_dimension_examples_and_ample_independence() {
    let d = dp9_type();
    let a = ClassVector::basis("A");
    assert_eq!(d.numerical_dimension(&d.anticanonical(), &a).unwrap(), 1);
    assert_eq!(d.numerical_dimension(&a, &a).unwrap(), 2);
    assert_eq!(d.numerical_dimension(&ClassVector::zero(), &a).unwrap(), 0);
    assert!(matches!(d.numerical_dimension(&a, &d.canonical()), Err(Error::NotAmple(_))));
    for fan in common::nef_fans() {
        let data = fan.build_intersection_data();
        let l = data.anticanonical();
        let nus: Vec<usize> = data
            .ample_labels()
            .map(|lab| data.numerical_dimension(&l, &ClassVector::basis(lab)).unwrap())
            .collect();
        assert!(nus.iter().all(|&v| v == 2), "{nus:?}");
        // an interior ample class built from -K and A gives the same answer
        let alt = l.plus(&ClassVector::basis("A"));
        assert!(data.is_flagged_ample(&ClassVector::basis("A")));
        assert!(data.mixed_power(&l, 2, &alt).is_ok());
    }
}

#[test]
fn average_scalar_curvature_examples() {
    let p2 = projective_space(2);
    assert_eq!(p2.average_scalar_curvature(&p2.anticanonical()).unwrap(), rat(2, 1));
    let p1 = projective_space(1);
    assert_eq!(p1.average_scalar_curvature(&p1.anticanonical()).unwrap(), rat(1, 1));
    assert_eq!(p2.average_scalar_curvature(&h().scale(&rat(4, 1))).unwrap(), rat(3, 2));
    let d = dp9_type();
    assert!(matches!(d.average_scalar_curvature(&d.anticanonical()), Err(Error::DegeneratePolarization)));
}

#[test]
fn miyaoka_yau_quantity_on_the_corpus() {
    assert_eq!(fans::p2().build_intersection_data().my_quantity().unwrap(), rat(0, 1));
    assert_eq!(fans::p1xp1().build_intersection_data().my_quantity().unwrap(), rat(8, 1));
    assert_eq!(fans::bl1p2().build_intersection_data().my_quantity().unwrap(), rat(8, 1));
    let fans = common::nef_fans();
    assert!(fans.len() >= 16);
    for fan in fans {
        let v = fan.build_intersection_data().my_quantity().unwrap();
        // c1² = 12 - r and c2 = r for r rays
        assert_eq!(v, rat(8 * fan.len() as i64 - 24, 1));
        assert!(v >= rat(0, 1));
    }
    assert!(matches!(projective_space(1).my_quantity(), Err(Error::DimensionTooLow(1))));
}

#[test]
fn key_lemma_examples() {
    let d = dp9_type();
    let a = ClassVector::basis("A");
    let r = d.key_lemma_ratio(&d.anticanonical(), &a, &rat(1, 10)).unwrap().to_f64();
    assert!((r - 0.992105).abs() < 5e-7, "{r}");
    // ample L: ratio → n
    let p2 = projective_space(2);
    let errs: Vec<f64> = [rat(1, 100), rat(1, 1000), rat(1, 10000)]
        .iter()
        .map(|e| (p2.key_lemma_ratio(&p2.anticanonical(), &h(), e).unwrap().to_f64() - 2.0).abs())
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2] && errs[2] < 1e-4, "{errs:?}");
    for e in [rat(1, 10), rat(3, 1)] {
        let zero = p2.key_lemma_ratio(&ClassVector::zero(), &h(), &e).unwrap();
        assert_eq!(zero.as_rational(), Some(rat(0, 1)));
    }
}

#[test]
fn calabi_limit_vanishes_across_the_corpus() {
    for fan in common::nef_fans() {
        let d = fan.build_intersection_data();
        let lim = d.calabi_limit(&d.anticanonical(), &ClassVector::basis("A")).unwrap();
        assert_eq!(lim, TauPoly::constant(rat(0, 1)));
    }
    let d = dp9_type();
    assert_eq!(d.calabi_limit(&d.anticanonical(), &ClassVector::basis("A")).unwrap(), TauPoly::constant(rat(0, 1)));
    let p2 = projective_space(2);
    assert!(matches!(p2.calabi_limit(&h(), &h()), Err(Error::NotAnticanonical)));
}

#[test]
fn slopes_of_the_canonical_extension() {
    for n in 1..=4usize {
        let d = projective_space(n);
        let c1 = d.anticanonical();
        assert_eq!(d.slope(n + 1, &c1, &c1).unwrap(), rat(1, n as i64 + 1));
        assert_eq!(d.slope(1, &ClassVector::zero(), &c1).unwrap(), rat(0, 1));
        assert_eq!(d.slope(1, &c1, &c1).unwrap(), rat(1, 1));
    }
    let d = projective_space(2);
    let c1 = d.anticanonical();
    let rep = d.semistability_report(3, &c1, &[(1, ClassVector::zero()), (3, c1.clone())], &c1).unwrap();
    assert!(rep.all_supplied_pass);
    let rep = d.semistability_report(3, &c1, &[(1, c1.clone())], &c1).unwrap();
    assert!(!rep.all_supplied_pass);
    assert!(matches!(d.semistability_report(3, &c1, &[(4, c1.clone())], &c1), Err(Error::BadRank { .. })));
}

#[test]
fn nakai_moishezon_examples() {
    let d = projective_space(2);
    let l = h().scale(&rat(4, 1));
    let gamma = h().scale(&rat(5, 1));
    let line = SubvarietyDatum::new(1, vec![(vec!["H".into()], rat(1, 1))]);
    let rep = d.nm_check(&l, &gamma, &[line.clone()], &rat(0, 1)).unwrap();
    assert_eq!(rep.c_gamma, rat(5, 4));
    assert_eq!(rep.entries[0].lhs, rat(20, 1) - rat(5, 1) * rat(1, 1) - rat(10, 1) + rat(0, 1));
    assert!(rep.entries[0].holds);
    assert!(!d.nm_check(&l, &gamma, &[line.clone()], &rat(1_000_000, 1)).unwrap().entries[0].holds);
    // γ proportional to L passes with δ = c_γ
    let g2 = l.scale(&rat(3, 2));
    let rep = d.nm_check(&l, &g2, &[line.clone()], &rat(3, 2)).unwrap();
    assert!(rep.entries[0].holds && rep.entries[0].lhs == rep.entries[0].rhs);
    let missing = SubvarietyDatum::new(1, vec![]);
    assert!(matches!(d.nm_check(&l, &gamma, &[missing], &rat(0, 1)), Err(Error::MissingPairing(_))));
}

#[test]
fn ample_rearrangement_identity() {
    // (n+1)/n α' L + K = ((n+1)/n α' - 1)(L + ε' A) for L = -K + εA
    for (d, a) in [(projective_space(2), h()), (dp9_type(), ClassVector::basis("A"))] {
        let eps = rat(1, 7);
        let alpha = rat(5, 6);
        let l = d.anticanonical().plus(&a.scale(&eps));
        let lhs = d.ample_rearrangement(&alpha, &l);
        let ep = d.eps_prime(&alpha, &eps).unwrap();
        let factor = rat(3, 2) * &alpha - rat(1, 1);
        let rhs = l.plus(&a.scale(&ep)).scale(&factor);
        for v in label_vectors(&d) {
            assert_eq!(d.intersection_number(&[&lhs, &v]).unwrap(), d.intersection_number(&[&rhs, &v]).unwrap());
        }
    }
}

#[test]
fn json_round_trip_over_the_corpus() {
    for d in common::nef_fans().iter().map(|f| f.build_intersection_data()).chain([dp9_type(), projective_space(3)]) {
        let s = serde_json::to_string(&d.to_json()).unwrap();
        let back = IntersectionData::from_json_str(&s).unwrap();
        let c1 = d.anticanonical();
        let args = vec![&c1; d.n()];
        assert_eq!(back.intersection_number(&args).unwrap(), d.intersection_number(&args).unwrap());
        if d.n() >= 2 {
            assert_eq!(back.my_quantity().unwrap(), d.my_quantity().unwrap());
        }
    }
}

#[test]
fn tau_classes_agree_with_rational_ones_at_the_top() {
    // (τL + εA)² expands as τ²L² + 2τε L·A + ε² A²
    let d = fans::bl1p2().build_intersection_data();
    let l = d.anticanonical();
    let a = ClassVector::basis("A");
    let eps = rat(2, 5);
    let w = kahler_class(&l, &a, &eps);
    let top = d.self_intersection(&w).unwrap();
    let ll = d.intersection_number(&[&l, &l]).unwrap();
    let la = d.intersection_number(&[&l, &a]).unwrap();
    let aa = d.intersection_number(&[&a, &a]).unwrap();
    assert_eq!(top.coeff(2), ll);
    assert_eq!(top.coeff(1), rat(2, 1) * &eps * la);
    assert_eq!(top.coeff(0), &eps * &eps * aa);
}

fn arb_coeffs(len: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-9i64..=9, 1i64..=6), len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pairing_is_multilinear_and_symmetric(
        which in 0usize..5,
        x in arb_coeffs(7), y in arb_coeffs(7), z in arb_coeffs(7),
        (p, q) in (-5i64..=5, 1i64..=4),
    ) {
        let fans = common::nef_fans();
        let d = fans[which % fans.len()].build_intersection_data();
        let k = d.basis().len();
        let (u, v, w) = (combination(&d, &x[..k.min(7)]), combination(&d, &y[..k.min(7)]), combination(&d, &z[..k.min(7)]));
        let s: BigRational = rat(p, q);
        let lhs = d.intersection_number(&[&u.scale(&s).plus(&w), &v]).unwrap();
        let rhs = s * d.intersection_number(&[&u, &v]).unwrap() + d.intersection_number(&[&w, &v]).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(d.intersection_number(&[&u, &v]).unwrap(), d.intersection_number(&[&v, &u]).unwrap());
    }

    #[test]
    fn threefold_pairing_is_symmetric(
        x in arb_coeffs(2), y in arb_coeffs(2), z in arb_coeffs(2), perm in 0usize..6,
    ) {
        let d = projective_space(3);
        let c = [combination(&d, &x), combination(&d, &y), combination(&d, &z)];
        let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let o = orders[perm];
        let base = d.intersection_number(&[&c[0], &c[1], &c[2]]).unwrap();
        prop_assert_eq!(d.intersection_number(&[&c[o[0]], &c[o[1]], &c[o[2]]]).unwrap(), base);
    }

    #[test]
    fn key_lemma_ratio_is_scale_free(e in 1i64..50, t in 1i64..6) {
        // scaling L and A together leaves the ratio unchanged
        let d = projective_space(2);
        let eps = rat(e, 100);
        let r1 = d.key_lemma_ratio(&d.anticanonical(), &h(), &eps).unwrap();
        let s = rat(t, 1);
        let r2 = d.key_lemma_ratio(&d.anticanonical().scale(&s), &h().scale(&s), &eps).unwrap();
        prop_assert!((r1.to_f64() - r2.to_f64()).abs() < 1e-12);
    }
}
