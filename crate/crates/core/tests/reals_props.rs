use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use synthtop::reals::{
    calkin_wilf, calkin_wilf_index, decimal_to_cauchy_direct, distance, interval_open_decimal, kw_subbase,
    repair_decimal, signed_rational, signed_rational_index, Decimal, RationalInterval,
};
use synthtop::Fuel;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pow2_recip(k: u64) -> BigRational {
    BigRational::new(BigInt::from(1), num_traits::pow(BigInt::from(2), k as usize))
}

fn decimal() -> impl Strategy<Value = Decimal> {
    (
        any::<bool>(),
        0u64..4,
        prop::collection::vec(0u8..10, 0..4),
        prop::collection::vec(0u8..10, 0..3),
    )
        .prop_map(|(negative, int, prefix, cycle)| Decimal { negative, int, prefix, cycle })
}

fn interval() -> impl Strategy<Value = (BigRational, BigRational)> {
    (-200i64..200, 1i64..40, 1i64..200, 1i64..40)
        .prop_map(|(an, ad, w, wd)| (q(an, ad), q(an, ad) + q(w, wd)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn accepted_points_lie_inside(d in decimal(), (a, b) in interval()) {
        let u = interval_open_decimal(&a, &b).unwrap();
        if u.chi(&d.point()).accepted_within(Fuel(200)) {
            let x = d.value();
            prop_assert!(a < x && x < b, "{} accepted in ({}, {})", x, a, b);
        }
    }

    #[test]
    fn interior_points_are_accepted(d in decimal(), (a, b) in interval()) {
        let x = d.value();
        let u = interval_open_decimal(&a, &b).unwrap();
        let accepted = u.chi(&d.point()).accepted_within(Fuel(64));
        prop_assert_eq!(accepted, a < x && x < b);
    }

    #[test]
    fn widening_keeps_acceptance(d in decimal(), (a, b) in interval(), da in 0i64..10, db in 0i64..10) {
        let narrow = interval_open_decimal(&a, &b).unwrap().chi(&d.point()).acceptance(Fuel(64));
        let wide = interval_open_decimal(&(&a - q(da, 7)), &(&b + q(db, 7))).unwrap().chi(&d.point()).acceptance(Fuel(64));
        if let Some(n) = narrow {
            prop_assert!(wide.is_some_and(|w| w <= n));
        }
    }

    #[test]
    fn interval_index_round_trips(n in 0u64..1 << 24) {
        let r = RationalInterval::from_index(n);
        prop_assert!(r.a < r.b);
        prop_assert_eq!(r.index(), Some(n));
    }

    #[test]
    fn rational_enumerations_invert(i in 0u64..100_000) {
        prop_assert_eq!(calkin_wilf_index(&calkin_wilf(i + 1)), Some(i + 1));
        prop_assert_eq!(signed_rational_index(&signed_rational(i)), Some(i));
    }

    #[test]
    fn direct_truncation_is_cauchy(d in decimal(), n in 0u64..40) {
        let c = decimal_to_cauchy_direct(&d.name());
        prop_assert!(distance(&c.at(n), &d.value()) <= pow2_recip(n));
    }
}

#[test]
fn interval_examples() {
    let half: Decimal = "0.5".parse().unwrap();
    let third: Decimal = "0.3(3)".parse().unwrap();
    let unit = interval_open_decimal(&q(0, 1), &q(1, 1)).unwrap();
    assert_eq!(unit.chi(&half.point()).acceptance(Fuel(10)), Some(1));
    let tight = interval_open_decimal(&q(3, 10), &q(4, 10)).unwrap();
    assert_eq!(tight.chi(&third.point()).acceptance(Fuel(10)), Some(2));
    let boundary = interval_open_decimal(&q(1, 3), &q(1, 1)).unwrap();
    assert!(!boundary.chi(&third.point()).accepted_within(Fuel::DEFAULT));
    assert!(interval_open_decimal(&q(1, 2), &q(1, 2)).is_err());
}

#[test]
fn subbase_transposes() {
    let b = kw_subbase();
    let third: Decimal = "0.3(3)".parse().unwrap();
    let t = b.transpose(&third.point());
    let idx = |a: BigRational, b: BigRational| synthtop::spaces::Point::nat(RationalInterval { a, b }.index().unwrap());
    assert!(t.chi(&idx(q(3, 10), q(4, 10))).accepted_within(Fuel(10)));
    for (a, c) in [(q(0, 1), q(1, 3)), (q(1, 3), q(1, 1)), (q(-5, 1), q(1, 4)), (q(34, 100), q(1, 1))] {
        assert!(!t.chi(&idx(a, c)).accepted_within(Fuel::NEGATIVE));
    }
    // some enumerated interval separates distinct rationals
    for (x, y) in [("0.1", "0.2"), ("-1.5", "1.5"), ("0.3(3)", "0.3"), ("0.142857(142857)", "0.15")] {
        let (x, y): (Decimal, Decimal) = (x.parse().unwrap(), y.parse().unwrap());
        let (vx, vy) = (x.value(), y.value());
        let sep = (0..100_000u64)
            .find(|&n| {
                let r = RationalInterval::from_index(n);
                (r.a < vx && vx < r.b) != (r.a < vy && vy < r.b)
            })
            .expect("a separating interval");
        let sep = synthtop::spaces::Point::nat(sep);
        let (tx, ty) = (b.transpose(&x.point()), b.transpose(&y.point()));
        assert_ne!(tx.chi(&sep).accepted_within(Fuel(64)), ty.chi(&sep).accepted_within(Fuel(64)));
    }
}

#[test]
fn direct_examples() {
    let half: Decimal = "0.5".parse().unwrap();
    let c = decimal_to_cauchy_direct(&half.name());
    assert!((0..30).all(|n| c.at(n) == q(1, 2)));
    let third: Decimal = "0.3(3)".parse().unwrap();
    assert!(distance(&decimal_to_cauchy_direct(&third.name()).at(20), &q(1, 3)) <= pow2_recip(20));
    let nines: Decimal = "0.9(9)".parse().unwrap();
    let c = decimal_to_cauchy_direct(&nines.name());
    assert!((0..40).all(|n| distance(&c.at(n), &q(1, 1)) <= pow2_recip(n)));
}

#[test]
fn repair_examples() {
    let half: Decimal = "0.5".parse().unwrap();
    let out = repair_decimal(&half.name(), 10, Fuel::DEFAULT);
    assert!(out.exhausted.is_none());
    for (i, level) in out.levels.iter().enumerate() {
        let k = i as u64 + 1;
        // the level-k grid interval has width 2^-k around its midpoint
        let radius = pow2_recip(k + 1);
        assert!((level - &radius) < q(1, 2) && q(1, 2) < (level + &radius));
    }
    let nines: Decimal = "0.9(9)".parse().unwrap();
    let out = repair_decimal(&nines.name(), 10, Fuel::DEFAULT);
    assert_eq!(out.levels.len(), 10);
    assert!(distance(&out.levels[9], &q(1, 1)) <= pow2_recip(9));
    let starved = repair_decimal(&nines.name(), 10, Fuel(3));
    assert!(starved.exhausted.is_some() && starved.levels.len() < 10);
}

#[test]
fn parsing() {
    assert_eq!("-2.25".parse::<Decimal>().unwrap().value(), q(-9, 4));
    assert_eq!("7".parse::<Decimal>().unwrap().value(), q(7, 1));
    assert_eq!("0.142857(142857)".parse::<Decimal>().unwrap().value(), q(1, 7));
    for bad in ["", "0.3(", "0.()", "a.1", ".5", "1.2.3"] {
        assert!(bad.parse::<Decimal>().is_err(), "{bad:?} parsed");
    }
}
