//! Property tests over randomized exact values.

use proptest::prelude::*;

use coneatoms_core::contfrac::{cf_expand, mediant, normalize_even, CfExpansion};
use coneatoms_core::{ExactReal, Unimodular};
use num_bigint::BigInt;
use std::cmp::Ordering;

fn arb_rational() -> impl Strategy<Value = ExactReal> {
    (-400i64..=400, 1i64..=120).prop_map(|(n, d)| ExactReal::ratio(n, d).unwrap())
}

fn arb_quadratic() -> impl Strategy<Value = ExactReal> {
    (
        -60i64..=60,
        prop_oneof![-9i64..=-1, 1i64..=9],
        1i64..=20,
        prop::sample::select(vec![2i64, 3, 5, 6, 7, 10, 11, 13, 19, 21]),
    )
        .prop_map(|(a, b, c, d)| ExactReal::quadratic(a, b, c, d).unwrap())
}

fn arb_value() -> impl Strategy<Value = ExactReal> {
    prop_oneof![arb_rational(), arb_quadratic()]
}

fn arb_unimodular() -> impl Strategy<Value = Unimodular> {
    prop::collection::vec((0u8..4, -3i64..=3), 0..5).prop_map(|factors| {
        let mut m = Unimodular::identity();
        for (kind, k) in factors {
            let f = match kind {
                0 => Unimodular::shear_x(k),
                1 => Unimodular::shear_y(k),
                2 => Unimodular::quarter_turn(),
                _ => Unimodular::x_reflection(),
            };
            m = f.compose(&m);
        }
        m
    })
}

proptest! {
    #[test]
    fn compare_is_antisymmetric_and_equality_is_structural(
        a in arb_value(),
        b in arb_value(),
    ) {
        prop_assert_eq!(a.compare(&b), b.compare(&a).reverse());
        if a.compare(&b) == Ordering::Equal {
            prop_assert_eq!(&a, &b);
        }
    }

    #[test]
    fn compare_is_transitive(a in arb_value(), b in arb_value(), c in arb_value()) {
        let mut v = [a, b, c];
        v.sort_by(|x, y| x.compare(y));
        prop_assert_ne!(v[0].compare(&v[1]), Ordering::Greater);
        prop_assert_ne!(v[1].compare(&v[2]), Ordering::Greater);
        prop_assert_ne!(v[0].compare(&v[2]), Ordering::Greater);
    }

    #[test]
    fn floor_brackets_the_value(v in arb_value()) {
        let f = v.floor();
        let lo = ExactReal::integer(f.clone());
        let hi = ExactReal::integer(f + 1);
        prop_assert_ne!(lo.compare(&v), Ordering::Greater);
        prop_assert_eq!(v.compare(&hi), Ordering::Less);
    }

    #[test]
    fn display_round_trips(v in arb_value()) {
        let text = v.to_string();
        let back: ExactReal = text.parse().unwrap();
        prop_assert_eq!(back, v);
    }

    #[test]
    fn slope_transform_round_trips(v in arb_value(), m in arb_unimodular()) {
        if let Ok(image) = v.moebius(&m) {
            let back = image.moebius(&m.inverse());
            prop_assert_eq!(back, Ok(v));
        }
    }

    #[test]
    fn rational_expansions_evaluate_back(n in -500i64..=500, d in 1i64..=200) {
        let v = ExactReal::ratio(n, d).unwrap();
        let cf = cf_expand(&v, 5);
        prop_assert_eq!(cf.value(), Some(v.clone()));
        let even = normalize_even(&cf).unwrap();
        prop_assert_eq!(even.value(), Some(v.clone()));
        if let CfExpansion::Finite(q) = even {
            prop_assert_eq!((q.len() - 1) % 2, 0);
            prop_assert!(q.iter().skip(1).all(|a| a >= &BigInt::from(1)));
        }
    }

    #[test]
    fn mediant_lies_between_its_inputs(
        y1 in -60i64..=60, x1 in 1i64..=40,
        y2 in -60i64..=60, x2 in 1i64..=40,
    ) {
        let a = ExactReal::ratio(y1, x1).unwrap();
        let b = ExactReal::ratio(y2, x2).unwrap();
        let (lo, hi, ly, lx, hy, hx) = if a.compare(&b) == Ordering::Greater {
            (b, a, y2, x2, y1, x1)
        } else {
            (a, b, y1, x1, y2, x2)
        };
        let (my, mx) = mediant(
            (&BigInt::from(ly), &BigInt::from(lx)),
            (&BigInt::from(hy), &BigInt::from(hx)),
        )
        .unwrap();
        let mid = ExactReal::ratio(my, mx).unwrap();
        prop_assert_ne!(lo.compare(&mid), Ordering::Greater);
        prop_assert_ne!(mid.compare(&hi), Ordering::Greater);
    }

    #[test]
    fn convergents_bracket_quadratic_values(
        a in -30i64..=30,
        b in prop_oneof![-4i64..=-1, 1i64..=4],
        c in 1i64..=9,
        d in prop::sample::select(vec![2i64, 3, 5, 7, 13, 21, 94]),
    ) {
        // Consecutive convergents alternate around the value: even-indexed
        // ones never exceed it, odd-indexed ones never fall below it, and
        // they are strictly monotone from each side.
        let v = ExactReal::quadratic(a, b, c, d).unwrap();
        prop_assume!(!v.is_rational());
        let cf = cf_expand(&v, 24);
        let terms = cf.term_count().map(|n| n as i64).unwrap_or(24);
        let mut table = coneatoms_core::contfrac::ConvergentTable::new(cf);
        let mut prev_even: Option<ExactReal> = None;
        let mut prev_odd: Option<ExactReal> = None;
        for n in 0..terms {
            let (p, q) = table.convergent(n).unwrap();
            let approx = ExactReal::ratio(p, q).unwrap();
            if n % 2 == 0 {
                prop_assert_ne!(approx.compare(&v), Ordering::Greater, "n={}", n);
                if let Some(prev) = prev_even.replace(approx.clone()) {
                    prop_assert_eq!(prev.compare(&approx), Ordering::Less);
                }
            } else {
                prop_assert_ne!(approx.compare(&v), Ordering::Less, "n={}", n);
                if let Some(prev) = prev_odd.replace(approx.clone()) {
                    prop_assert_eq!(prev.compare(&approx), Ordering::Greater);
                }
            }
        }
    }
}
