//! Property suites shared by the property tests and the acceptance target.

use super::*;
use hypoforge::exterior::{basis_masks, lambda_dim, KForm, Subspace};
use hypoforge::liealg::LieAlgebra;
use hypoforge::obstructions::{beta_test, prop4, prop6, ObstructionError};
use hypoforge::scalar::Scalar;
use hypoforge::splitting::{
    coherent_from_2form, hpq, hpq_with_complement, vanishing_criterion, Splitting,
};
use hypoforge::su2hypo::{is_hypo, is_su2_structure, quadruplet_from_coframe, Coframe};
use num_traits::Zero;
use proptest::test_runner::{Config, TestRunner};

pub const CASES: u32 = 128;

pub type Suite = fn(&mut TestRunner) -> Result<(), String>;

pub fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    })
}

fn monomial(m: u8) -> KForm {
    KForm::from_mask(5, m, Scalar::from_int(1))
}

pub fn d_squared_vanishes(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&(algebra(), 0usize..=4, any::<u64>()), |(g, k, seed)| {
            let masks = basis_masks(5, k);
            let eta = monomial(masks[(seed as usize) % masks.len()]).add(
                &monomial(masks[(seed as usize / 7) % masks.len()]).scale(&Scalar::from_int(-2)),
            );
            prop_assert!(g.d(&g.d(&eta)).is_zero());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn d_is_an_antiderivation(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&(algebra(), form(1), form(2), form(1)), |(g, a, b, c)| {
            for (x, p, y) in [(&a, 1, &b), (&b, 2, &c), (&a, 1, &c)] {
                let lhs = g.d(&x.wedge(y));
                let sign = Scalar::from_int(if p % 2 == 0 { 1 } else { -1 });
                let rhs = g.d(x).wedge(y).add(&x.wedge(&g.d(y)).scale(&sign));
                prop_assert_eq!(lhs, rhs);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn rank_nullity(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&(algebra(),), |(g,)| {
            for k in 0..=5 {
                let z = g.closed_forms(k).dim();
                let b_next = if k < 5 { g.exact_forms(k + 1).dim() } else { 0 };
                prop_assert_eq!(z + b_next, lambda_dim(5, k));
                prop_assert!(g.exact_forms(k).is_subspace_of(g.closed_forms(k)));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn hpq_ignores_the_complement(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(
            &(algebra(), noise(), noise(), 2usize..=3),
            |(g, n1, n2, rank)| {
                let (Some(frame), Some(shear)) = (BasisChange::new(&n1), BasisChange::new(&n2))
                else {
                    return Ok(());
                };
                let rows: Vec<KForm> = (1..=5).map(|i| frame.form(&KForm::e(5, i))).collect();
                let v1 = Subspace::span(5, 1, &rows[..rank]).unwrap();
                let v2a = Subspace::span(5, 1, &rows[rank..]).unwrap();
                // Shift the complement by elements of V₁; still complementary.
                let shifted: Vec<KForm> = rows[rank..]
                    .iter()
                    .map(|f| f.add(&shear.form(&rows[0])).sub(&rows[0]))
                    .collect();
                let v2b = Subspace::span(5, 1, &shifted).unwrap();
                let (Ok(sa), Ok(sb)) = (
                    Splitting::new(&g, v1.clone(), v2a),
                    Splitting::new(&g, v1.clone(), v2b),
                ) else {
                    return Ok(());
                };
                for k in 0..=5 {
                    for p in 0..=k {
                        let h = hpq(&g, &v1, p, k - p).unwrap();
                        prop_assert_eq!(hpq_with_complement(&sa, p, k - p), h);
                        prop_assert_eq!(hpq_with_complement(&sb, p, k - p), h);
                    }
                }
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
}

pub fn vanishing_criterion_matches_hpq(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(
            &(0..BASES.len(), -3i64..=3, 1i64..=3, -3i64..=3, noise()),
            |(idx, a, b, c, n)| {
                let base = base_algebra(idx, a, b, c);
                let bc = BasisChange::new(&n);
                let g = bc.as_ref().map_or(base.clone(), |bc| bc.algebra(&base));
                for &m in basis_masks(5, 2) {
                    let phi = bc.as_ref().map_or(monomial(m), |bc| bc.form(&monomial(m)));
                    if let Ok(s) = coherent_from_2form(&g, &phi) {
                        let vanishes = hpq_with_complement(&s, 0, 2) == 0
                            && hpq_with_complement(&s, 0, 3) == 0;
                        prop_assert_eq!(vanishing_criterion(&g, &phi).unwrap(), vanishes);
                    }
                }
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
}

pub fn prop4_is_scale_invariant(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(
            &(
                algebra(),
                form(1),
                form(1),
                nonzero_scalar(),
                nonzero_scalar(),
            ),
            |(g, a, b, c, c2)| {
                match prop4(&g, &a, &b) {
                    Err(e) => {
                        prop_assert!(matches!(e, ObstructionError::Dependent));
                        prop_assert!(prop4(&g, &a.scale(&c), &b.scale(&c2)).is_err());
                    }
                    Ok(o) => prop_assert_eq!(prop4(&g, &a.scale(&c), &b.scale(&c2)).unwrap(), o),
                }
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
}

pub fn uniform_test_is_scale_invariant(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&(algebra(), form(1), nonzero_scalar()), |(g, b, c)| {
            prop_assume!(!b.is_zero());
            let full = Subspace::full(5, 1);
            let t = beta_test(&g, &b, &full);
            let s = beta_test(&g, &b.scale(&c), &full);
            prop_assert_eq!(t.image_dim, s.image_dim);
            prop_assert_eq!(t.covered, s.covered);
            prop_assert_eq!(t.remaining, s.remaining);
            if let Some(t6) = prop6(&g) {
                let scaled =
                    LieAlgebra::new(g.differentials().iter().map(|f| f.scale(&c)).collect())
                        .unwrap();
                let s6 = prop6(&scaled).unwrap();
                prop_assert_eq!(t6.covered, s6.covered);
                prop_assert_eq!(t6.image_dim, s6.image_dim);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn prop6_reduces_to_prop4(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(
            &(algebra(), prop::collection::vec(form(1), 4)),
            |(g, alphas)| {
                if let Some(t) = prop6(&g) {
                    if t.covered {
                        for a in &alphas {
                            if let Ok(o) = prop4(&g, a, &t.beta) {
                                prop_assert!(o.obstructed, "alpha {} escapes", a);
                            }
                        }
                    }
                }
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
}

pub fn rotation_preserves_hypo(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(
            &(0..WITNESSES.len(), noise(), 0..ROTATIONS.len(), noise()),
            |(w, n, r, junk)| {
                let (consts, frame) = WITNESSES[w];
                let (mut g, mut cf) = (algebra_of(consts), coframe_of(frame));
                if let Some(bc) = BasisChange::new(&n) {
                    g = bc.algebra(&g);
                    cf = bc.coframe(&cf);
                }
                let (c, s, h) = ROTATIONS[r];
                let (c, s) = (Scalar::from_frac(c, h), Scalar::from_frac(s, h));
                let q = quadruplet_from_coframe(&cf);
                let rq = q.rotate(&c, &s);
                prop_assert!(is_su2_structure(&rq));
                prop_assert!(is_hypo(&g, &q).unwrap());
                prop_assert_eq!(is_hypo(&g, &rq).unwrap(), is_hypo(&g, &q).unwrap());
                // A random coframe keeps its (usually negative) outcome as well.
                if let Some(bc) = BasisChange::new(&junk) {
                    let other = bc.coframe(&Coframe::identity());
                    let q = quadruplet_from_coframe(&other);
                    prop_assert_eq!(
                        is_hypo(&g, &q.rotate(&c, &s)).unwrap(),
                        is_hypo(&g, &q).unwrap()
                    );
                }
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
}

pub fn wedge_is_graded_commutative(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&(form(1), form(2), form(1)), |(a, b, c)| {
            prop_assert_eq!(a.wedge(&b), b.wedge(&a));
            prop_assert_eq!(a.wedge(&c), c.wedge(&a).neg());
            prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
            prop_assert!(a.wedge(&a).is_zero());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn scalar_field_axioms(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(
            &(nonzero_scalar(), nonzero_scalar(), nonzero_scalar()),
            |(x, y, z)| {
                prop_assert_eq!(
                    (x.clone() * y.clone()) * z.clone(),
                    x.clone() * (y.clone() * z.clone())
                );
                prop_assert_eq!(
                    x.clone() * (y.clone() + z.clone()),
                    x.clone() * y.clone() + x.clone() * z.clone()
                );
                prop_assert_eq!(x.clone() * x.inverse().unwrap(), Scalar::from_int(1));
                prop_assert!((x.clone() - x.clone()).is_zero());
                let sum_sign = (x.clone() * x.clone() + y.clone() * y.clone()).is_positive();
                prop_assert!(sum_sign);
                prop_assert!(
                    (x.to_f64() * y.to_f64() - (x.clone() * y.clone()).to_f64()).abs()
                        < 1e-9 * (1.0 + (x * y).to_f64().abs())
                );
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
}

/// Every suite with its name.
pub const SUITES: &[(&str, Suite)] = &[
    ("d_squared_vanishes", d_squared_vanishes),
    ("d_is_an_antiderivation", d_is_an_antiderivation),
    ("rank_nullity", rank_nullity),
    ("hpq_ignores_the_complement", hpq_ignores_the_complement),
    (
        "vanishing_criterion_matches_hpq",
        vanishing_criterion_matches_hpq,
    ),
    ("prop4_is_scale_invariant", prop4_is_scale_invariant),
    (
        "uniform_test_is_scale_invariant",
        uniform_test_is_scale_invariant,
    ),
    ("prop6_reduces_to_prop4", prop6_reduces_to_prop4),
    ("rotation_preserves_hypo", rotation_preserves_hypo),
    ("wedge_is_graded_commutative", wedge_is_graded_commutative),
    ("scalar_field_axioms", scalar_field_axioms),
];
