mod common;

use mylab::functionals::*;
use mylab::radial::{KahlerProfile, RadialForm};
use mylab::Error;
use proptest::prelude::*;

/// `∫ f ω^n / V` straight from the momentum: the pushforward of `ω^n` to
/// the `t` line is `(2π)^n x^(n-1) x' dt`, and `f` is frozen at its end
/// values beyond the mesh.
fn momentum_mean(p: &KahlerProfile, f: &[f64]) -> f64 {
    let n = p.n() as i32;
    let g = p.grid();
    let last = g.len() - 1;
    let num: Vec<f64> = (0..g.len()).map(|i| f[i] * n as f64 * p.x()[i].powi(n - 1) * p.dx()[i]).collect();
    let tails = f[0] * p.x()[0].powi(n) + f[last] * (p.m().powi(n) - p.x()[last].powi(n));
    (g.simpson(&num) + tails) / p.m().powi(n)
}

fn zero_twist(p: &KahlerProfile) -> Twist {
    Twist::Form(RadialForm::zero(p.grid().clone()))
}

#[test]
fn i_and_j_against_momentum_quadrature() {
    let g = common::grid();
    let mut rng = common::rng(11);
    for n in 1..=3 {
        let p0 = KahlerProfile::round(n, 0.1, g.clone());
        for _ in 0..5 {
            let p = common::random_profile(&mut rng, n, 0.1, &g);
            let pair = Pair::new(&p, &p0).unwrap();
            let i = momentum_mean(&p0, &pair.phi) - momentum_mean(&p, &pair.phi);
            assert!((pair.i_functional() - i).abs() < 1e-9 * (1.0 + i.abs()), "n={n}");
            if n == 1 {
                // E = (∫φ ω₀ + ∫φ ω_φ) / 2V in dimension one
                let e = 0.5 * (momentum_mean(&p0, &pair.phi) + momentum_mean(&p, &pair.phi));
                assert!((pair.energy() - e).abs() < 1e-9 * (1.0 + e.abs()));
            }
        }
    }
}

#[test]
fn energy_inequalities_on_random_profiles() {
    let g = common::grid();
    let mut rng = common::rng(3);
    for n in 1..=3 {
        let p0 = KahlerProfile::round(n, 0.2, g.clone());
        for _ in 0..20 {
            let p = common::random_profile(&mut rng, n, 0.2, &g);
            let r = energy_report(&p, &zero_twist(&p), &zero_twist(&p), &p0).unwrap();
            let tol = 1e-6 * r.i.abs().max(1e-12);
            let nf = n as f64;
            assert!(r.i >= -tol);
            assert!((nf + 1.0) / nf * r.j <= r.i + tol, "n={n} {r:?}");
            assert!(r.i <= (nf + 1.0) * r.j + tol, "n={n} {r:?}");
            if n == 1 {
                assert!((r.i - 2.0 * r.j).abs() <= 1e-6);
            }
            assert!(r.ent >= -1e-12);
        }
    }
}

#[test]
fn two_evaluations_of_the_k_energy_agree() {
    let g = common::grid();
    let mut rng = common::rng(5);
    for n in 1..=3 {
        let p0 = KahlerProfile::round(n, 0.1, g.clone());
        let p = common::random_profile(&mut rng, n, 0.1, &g);
        let r = energy_report(&p, &zero_twist(&p), &zero_twist(&p), &p0).unwrap();
        assert!((r.m - r.m_alt).abs() < 1e-8 * (1.0 + r.m.abs()), "n={n} {} vs {}", r.m, r.m_alt);
        // a zero twist changes nothing
        assert!((r.m - r.m_theta).abs() < 1e-12 * (1.0 + r.m.abs()));
    }
}

#[test]
fn k_energy_is_bounded_below_on_the_kahler_einstein_class() {
    // at ε = 0 the round metric minimizes M
    let g = common::grid();
    let mut rng = common::rng(8);
    for n in [1, 2] {
        let p0 = KahlerProfile::round(n, 0.0, g.clone());
        for _ in 0..5 {
            let p = common::random_profile(&mut rng, n, 0.0, &g);
            let r = energy_report(&p, &zero_twist(&p), &zero_twist(&p), &p0).unwrap();
            assert!(r.m >= -1e-9, "n={n} M={}", r.m);
        }
    }
}

#[test]
fn differentials_converge_at_second_order() {
    let g = common::grid();
    let mut rng = common::rng(21);
    let steps = [0.02, 0.01, 0.005];
    let gamma = Twist::Form(common::theta_bumped(&g, 0.4));
    let cases = [(Functional::E, 2), (Functional::E, 3), (Functional::EGamma, 3), (Functional::M, 1), (Functional::M, 2), (Functional::M, 3)];
    for (which, n) in cases {
        let p0 = KahlerProfile::round(n, 0.1, g.clone());
        let mut done = 0;
        while done < 2 {
            let p = common::random_profile(&mut rng, n, 0.1, &g);
            let u = common::random_direction(&mut rng, &g);
            // the largest step can leave the Kähler cone; draw again then
            let Ok(c) = differential_check(&p, &p0, &gamma, &u, which, &steps) else { continue };
            for r in c.ratios() {
                assert!((r / 4.0 - 1.0).abs() < 0.1, "{which:?} n={n} ratios {:?}", c.ratios());
            }
            done += 1;
        }
    }
}

#[test]
fn analytic_differentials_are_exact_on_linear_functionals() {
    // E is affine along φ + s·1, so every step reproduces dE(1) = 1
    let g = common::grid();
    let mut rng = common::rng(4);
    let p0 = KahlerProfile::round(2, 0.1, g.clone());
    let p = common::random_profile(&mut rng, 2, 0.1, &g);
    let one = vec![1.0; g.len()];
    let c = differential_check(&p, &p0, &zero_twist(&p), &one, Functional::E, &[0.5, 0.1]).unwrap();
    // the quadrature volume of ω_φ^n matches the class to VOLUME_TOLERANCE
    assert!((c.analytic - 1.0).abs() < VOLUME_TOLERANCE);
    assert!(c.errors().iter().all(|e| *e < 1e-10), "{:?}", c.errors());
}

#[test]
fn chen_formula_matches_the_path_integral() {
    let g = common::grid();
    let mut rng = common::rng(31);
    for n in [1, 2] {
        let p0 = KahlerProfile::round(n, 0.1, g.clone());
        for _ in 0..2 {
            let p = common::random_profile(&mut rng, n, 0.1, &g);
            let (direct, path) = chen_path_check(&p, &p0, 12).unwrap();
            assert!((direct - path).abs() <= 1e-4 * direct.abs().max(1e-12), "{direct} vs {path}");
        }
    }
}

#[test]
fn j_equation_residual_vanishes_only_on_solutions() {
    let g = common::grid();
    let p = KahlerProfile::round(2, 0.3, g.clone());
    assert!(j_equation_residual(&p, &RadialForm::fubini_study(g.clone(), 1.7)) < 1e-12);
    let bumped = common::theta_bumped(&g, 0.5);
    assert!(j_equation_residual(&p, &bumped) > 1e-3);
}

#[test]
fn average_scalar_curvature_from_the_class() {
    let g = common::grid();
    for n in 1..=3 {
        for eps in [0.0, 0.1, 0.5] {
            let p = KahlerProfile::round(n, eps, g.clone());
            let want = (n * (n + 1)) as f64 / p.m();
            assert!((average_scalar_curvature(&p) - want).abs() < 1e-12);
            assert!((p.average_scalar_curvature() - want).abs() < 1e-7);
        }
    }
}

#[test]
fn mismatched_classes_are_rejected() {
    let g = common::grid();
    let a = KahlerProfile::round(2, 0.1, g.clone());
    let b = KahlerProfile::round(2, 0.2, g.clone());
    let c = KahlerProfile::round(1, 0.1, g.clone());
    assert!(matches!(Pair::new(&a, &b), Err(Error::ClassMismatch(_))));
    assert!(matches!(Pair::new(&a, &c), Err(Error::ClassMismatch(_))));
    assert!(energy_report(&a, &zero_twist(&a), &zero_twist(&a), &b).is_err());
}

#[test]
fn report_json_round_trips() {
    let g = common::grid();
    let mut rng = common::rng(2);
    let p0 = KahlerProfile::round(2, 0.1, g.clone());
    let p = common::random_profile(&mut rng, 2, 0.1, &g);
    let r = energy_report(&p, &zero_twist(&p), &zero_twist(&p), &p0).unwrap();
    let s = serde_json::to_string(&r.to_json()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    for key in ["E", "E_gamma", "E_Ric", "I", "J", "J_mod", "Ent", "M", "M_alt", "M_theta", "Rhat", "c_gamma", "V"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let back: EnergyReportJson = serde_json::from_str(&s).unwrap();
    assert_eq!(back.i.parse::<f64>().unwrap(), r.i);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn normalized_functionals_ignore_constants(seed in 0u64..1000, shift in -3.0f64..3.0, n in 1usize..=3) {
        let g = common::grid();
        let mut rng = common::rng(seed);
        let p0 = KahlerProfile::round(n, 0.1, g.clone());
        let p = common::random_profile(&mut rng, n, 0.1, &g);
        let moved = KahlerProfile::new(n, 0.1, g.clone(), p.phi().iter().map(|v| v + shift).collect()).unwrap();
        let a = energy_report(&p, &zero_twist(&p), &zero_twist(&p), &p0).unwrap();
        let b = energy_report(&moved, &zero_twist(&p), &zero_twist(&p), &p0).unwrap();
        prop_assert!((b.e - a.e - shift).abs() < 1e-9);
        for (x, y) in [(a.i, b.i), (a.j, b.j), (a.ent, b.ent), (a.m, b.m)] {
            prop_assert!((x - y).abs() < 1e-9 * (1.0 + x.abs()), "{} vs {}", x, y);
        }
    }

    #[test]
    fn i_and_j_are_symmetric_in_the_right_way(seed in 0u64..1000, n in 1usize..=3) {
        // I is symmetric under swapping the two metrics, J is not but
        // J(ω₀, ω_φ) + J(ω_φ, ω₀) = I
        let g = common::grid();
        let mut rng = common::rng(seed);
        let a = common::random_profile(&mut rng, n, 0.1, &g);
        let b = common::random_profile(&mut rng, n, 0.1, &g);
        let ab = Pair::new(&a, &b).unwrap();
        let ba = Pair::new(&b, &a).unwrap();
        prop_assert!((ab.i_functional() - ba.i_functional()).abs() < 1e-9);
        prop_assert!((ab.j_functional() + ba.j_functional() - ab.i_functional()).abs() < 1e-9);
    }
}
