use bracketlab::bracket::{parse_form, realize, Binding};
use bracketlab::recurrence::{
    check_locally_poly, linear_recurrence_witness, strong_set_builder, CheckMode, CheckerBudget, RecurrenceSet,
};
use bracketlab::{circle_norm, Interval, Rational};
use proptest::prelude::*;

fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

fn unit_rational() -> impl Strategy<Value = Rational> {
    (0i64..1000, 1000i64..=1013).prop_map(|(p, d)| q(p, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linear_witnesses_recur(alphas in prop::collection::vec(unit_rational(), 1..=3), m in 2i64..=6) {
        let delta = q(1, m);
        let r = alphas.len() as u32;
        // One more point than cells forces a repeated cell.
        let n_max = (m as usize + 1).pow(r) + 1;
        let w = linear_recurrence_witness(&alphas, &delta, n_max);
        prop_assert!(!w.is_empty());
        for n in &w {
            prop_assert!(*n >= 1 && *n < n_max as i64);
            for a in &alphas {
                prop_assert!(circle_norm(&(a.clone() * Rational::from_integer((*n).into()))) < delta);
            }
        }
    }

    #[test]
    fn set_views_agree(alpha in unit_rational(), eps in 1i64..=20, n in 1usize..=200) {
        let phi = realize(&parse_form("a1*n").unwrap(), &Binding::from_values([alpha])).unwrap();
        let set = RecurrenceSet::new(n).with(phi, Interval::centered(q(eps, 50)).unwrap());
        let mask = set.mask();
        let members = set.members();
        prop_assert_eq!(mask.len(), n);
        prop_assert_eq!(members.len(), mask.iter().filter(|b| **b).count());
        for m in &members {
            prop_assert!(set.membership(*m));
        }
        prop_assert!((set.density() - members.len() as f64 / n as f64).abs() < 1e-15);
    }

    #[test]
    fn fractional_linear_phases_are_strongly_local(alpha in unit_rational(), n in 20usize..=80) {
        let phi = realize(&parse_form("{a1*n}").unwrap(), &Binding::from_values([alpha])).unwrap();
        let delta = q(1, 8);
        let js = vec![Interval::centered(q(1, 16)).unwrap()];
        let set = strong_set_builder(&phi, &delta, &q(1, 4), &js, n).unwrap();
        let out = check_locally_poly(&phi, &set.mask(), 2, &CheckMode::Strong, &CheckerBudget::exhaustive(u64::MAX)).unwrap();
        prop_assert!(!out.is_violation(), "{:?}", out.to_json());
    }
}
