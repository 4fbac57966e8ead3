use bracketlab::bracket::{parse_form, realize, Binding, BracketForm, MonomialForm, PolynomialForm, Sign};
use bracketlab::{frac, int_part, Rational};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=9).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

fn monomial() -> impl Strategy<Value = Option<MonomialForm>> {
    (rational(), prop::collection::vec(1u32..=3, 0..=2), 0u32..=3)
        .prop_map(|(c, syms, pow)| MonomialForm::new(Sign::Plus, c, syms, pow))
}

fn poly() -> impl Strategy<Value = PolynomialForm> {
    prop::collection::vec(monomial(), 1..=4).prop_map(|ms| PolynomialForm::from_terms(ms.into_iter().flatten().collect()))
}

fn form() -> impl Strategy<Value = BracketForm> {
    poly().prop_map(BracketForm::poly).prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(BracketForm::neg),
            inner.clone().prop_map(BracketForm::frac),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| BracketForm::sum(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| BracketForm::sub(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| BracketForm::prod(a, b)),
        ]
    })
}

fn binding() -> Binding<f64> {
    Binding::from_values([2f64.sqrt(), 3f64.sqrt(), 0.7])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn parse_inverts_print(f in form()) {
        let text = f.to_string();
        let back = parse_form(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(back, f);
    }
}

proptest! {
    #[test]
    fn ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.neg().neg(), a.clone());
        prop_assert_eq!(a.add(&b).neg(), a.neg().add(&b.neg()));
    }

    #[test]
    fn realization_preserves_degree_and_constant_freeness(f in form()) {
        let p = realize(&f, &binding()).unwrap();
        prop_assert_eq!(p.degree_bound(), f.degree_bound());
        prop_assert_eq!(p.is_constant_free(), f.is_constant_free());
    }

    #[test]
    fn components_of_constant_free_forms_are_constant_free(f in form()) {
        prop_assume!(f.is_constant_free());
        for c in f.components() {
            prop_assert!(c.is_constant_free(), "{}", c);
        }
    }

    #[test]
    fn frac_ignores_integer_shifts(x in -1e6f64..1e6, m in -1000i64..1000) {
        prop_assert!((frac(&(x + m as f64)) - frac(&x)).abs() < 1e-9);
    }

    #[test]
    fn frac_splits_exactly(p in -10_000i64..10_000, q in 1i64..500) {
        let x = Rational::new(p.into(), q.into());
        let f = frac(&x);
        prop_assert_eq!(int_part(&x) + f.clone(), x);
        prop_assert!(f > Rational::new((-1).into(), 2.into()) && f <= Rational::new(1.into(), 2.into()));
    }

    #[test]
    fn float_split_is_tight(x in -1e6f64..1e6) {
        prop_assert!((int_part(&x) + frac(&x) - x).abs() <= 1e-12 * x.abs().max(1.0));
    }
}
