mod common;

use common::{match_into, substitution, term, CONSTANTS, VARIABLES};
use neurosld_core::{is_variant, unify, Substitution, Term, UnifyFailure};
use proptest::prelude::*;

/// Every binding of `vars` to a constant or to itself.
fn enumerate(vars: &[&str]) -> Vec<Substitution> {
    let mut out = vec![Vec::<(&str, Term)>::new()];
    for &v in vars {
        let mut next = Vec::new();
        for partial in &out {
            next.push(partial.clone());
            for c in CONSTANTS {
                let mut p = partial.clone();
                p.push((v, Term::constant(c)));
                next.push(p);
            }
        }
        out = next;
    }
    out.into_iter().map(Substitution::from_pairs).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn mgu_equalizes_both_sides(s in term(4, 3), t in term(4, 3)) {
        if let Ok(mgu) = unify(&s, &t, true) {
            prop_assert_eq!(mgu.apply(&s), mgu.apply(&t));
        }
    }

    #[test]
    fn mgu_is_idempotent(s in term(4, 3), t in term(4, 3)) {
        if let Ok(mgu) = unify(&s, &t, true) {
            for probe in [&s, &t] {
                let once = mgu.apply(probe);
                prop_assert_eq!(mgu.apply(&once), once);
            }
            for (_, bound) in mgu.iter() {
                for (v, _) in mgu.iter() {
                    prop_assert!(!bound.contains_var(v));
                }
            }
        }
    }

    #[test]
    fn unification_is_symmetric_up_to_renaming(s in term(4, 3), t in term(4, 3)) {
        match (unify(&s, &t, true), unify(&t, &s, true)) {
            (Ok(m1), Ok(m2)) => prop_assert!(is_variant(&m1.apply(&s), &m2.apply(&s))),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "asymmetric outcome {:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn mgu_is_most_general(s in term(3, 2), t in term(3, 2)) {
        let vars = &VARIABLES[..2];
        let mgu = unify(&s, &t, true);
        for sigma in enumerate(vars) {
            if sigma.apply(&s) != sigma.apply(&t) {
                continue;
            }
            let mgu = match &mgu {
                Ok(m) => m,
                Err(e) => return Err(TestCaseError::fail(format!("{sigma} unifies but unify said {e:?}"))),
            };
            let mut theta = Vec::new();
            let factors = vars.iter().all(|v| {
                let var = Term::var(*v);
                match_into(&mgu.apply(&var), &sigma.apply(&var), &mut theta)
            });
            prop_assert!(factors, "{} does not factor through {}", sigma, mgu);
        }
    }

    #[test]
    fn composition_is_associative(
        a in substitution(3),
        b in substitution(3),
        c in substitution(3),
        probe in term(4, 3),
    ) {
        let left = a.compose(&b).compose(&c);
        let right = a.compose(&b.compose(&c));
        prop_assert_eq!(left.apply(&probe), right.apply(&probe));
    }

    #[test]
    fn composition_applies_in_sequence(a in substitution(3), b in substitution(3), probe in term(4, 3)) {
        prop_assert_eq!(a.compose(&b).apply(&probe), b.apply(&a.apply(&probe)));
    }

    #[test]
    fn ground_terms_unify_iff_equal(s in term(4, 0), t in term(4, 0)) {
        let result = unify(&s, &t, true);
        prop_assert_eq!(result.is_ok(), s == t);
        if let Ok(m) = result {
            prop_assert!(m.is_empty());
        }
    }
}

#[test]
fn occurs_check_rejects_cyclic_binding() {
    let x = Term::var("X");
    let fx = Term::compound("f", vec![x.clone()]);
    assert_eq!(unify(&x, &fx, true), Err(UnifyFailure::OccursCheck));
    assert!(unify(&x, &fx, false).is_ok());
}

#[test]
fn variable_chain_resolves_to_constant() {
    let s = Term::compound("p", vec![Term::var("X"), Term::var("Y"), Term::var("X")]);
    let t = Term::compound(
        "p",
        vec![Term::var("Y"), Term::var("Z"), Term::constant("a")],
    );
    let mgu = unify(&s, &t, true).unwrap();
    for v in ["X", "Y", "Z"] {
        assert_eq!(mgu.apply(&Term::var(v)), Term::constant("a"));
    }
}
