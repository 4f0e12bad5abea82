//! Property tests for the arithmetic substrate: ring axioms on random
//! samples over every component ring, inverse round-trips, valuation
//! additivity, and soundness of the truncation floors (a stored
//! coefficient is always a true coefficient).

use fieldwork_core::exactfield::{
    AlgCtx, AlgebraicElem, LaurentSeries, Poly, Rat, RatFunc, RingTag, ValBound,
};
use fieldwork_core::rootlift::build_f;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rat::new(BigInt::from(n), BigInt::from(d)))
}

fn laurent_strategy() -> impl Strategy<Value = LaurentSeries> {
    (
        prop::collection::vec(((-6i64..=6), rat_strategy()), 0..5),
        prop::option::of(-25i64..=-8),
    )
        .prop_map(|(terms, floor)| LaurentSeries::from_terms(terms, floor))
}

fn poly_strategy() -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0u32..=6), rat_strategy()), 0..5)
        .prop_map(Poly::from_rat_coeffs)
}

fn ratfunc_strategy() -> impl Strategy<Value = RatFunc> {
    (poly_strategy(), poly_strategy()).prop_map(|(num, mut den)| {
        if den.is_zero() {
            den = Poly::one(RingTag::Rat);
        }
        RatFunc::new(num, den).expect("nonzero denominator")
    })
}

fn algebraic_strategy() -> impl Strategy<Value = AlgebraicElem> {
    // Quotient-ring products reduce modulo f and pay a gcd per coordinate
    // operation, so the samples stay deliberately small.
    let ctx = AlgCtx::new(build_f(3).unwrap()).unwrap();
    let coord = (
        prop::collection::vec(((0u32..=2), (-4i64..=4)), 0..3),
        0u32..=1,
        1i64..=2,
    )
        .prop_map(|(num, de, dc)| {
            let n = Poly::from_rat_coeffs(
                num.into_iter().map(|(e, c)| (e, Rat::from_integer(BigInt::from(c)))),
            );
            let d = Poly::from_rat_coeffs([
                (de, Rat::from_integer(BigInt::from(dc))),
                (0, Rat::from_integer(BigInt::from(1))),
            ]);
            RatFunc::new(n, d).expect("nonzero denominator")
        });
    prop::collection::vec(coord, 3).prop_map(move |coords| {
        AlgebraicElem::new(ctx.clone(), coords).expect("three coordinates")
    })
}

fn laurent_agree(a: &LaurentSeries, b: &LaurentSeries) -> bool {
    (a - b).stored_is_empty()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_ring_axioms(a in rat_strategy(), b in rat_strategy(), c in rat_strategy()) {
        prop_assert_eq!((&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
    }

    #[test]
    fn poly_ring_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(&(&(&a + &b) + &c), &(&a + &(&b + &c)));
        prop_assert_eq!(&(&(&a * &b) * &c), &(&a * &(&b * &c)));
        prop_assert_eq!(&(&a * &b), &(&b * &a));
        prop_assert_eq!(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)));
    }

    #[test]
    fn ratfunc_field_axioms(a in ratfunc_strategy(), b in ratfunc_strategy(), c in ratfunc_strategy()) {
        prop_assert_eq!(&(&(&a + &b) + &c), &(&a + &(&b + &c)));
        prop_assert_eq!(&(&(&a * &b) * &c), &(&a * &(&b * &c)));
        prop_assert_eq!(&(&a * &b), &(&b * &a));
        prop_assert_eq!(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)));
        if !a.is_zero() {
            let inv = a.invert().unwrap();
            prop_assert_eq!(&(&a * &inv), &RatFunc::one());
        }
    }

    #[test]
    fn laurent_ring_axioms(a in laurent_strategy(), b in laurent_strategy(), c in laurent_strategy()) {
        // checked above the propagated floor, the only decidable statement
        prop_assert!(laurent_agree(&(&(&a + &b) + &c), &(&a + &(&b + &c))));
        prop_assert!(laurent_agree(&(&(&a * &b) * &c), &(&a * &(&b * &c))));
        prop_assert!(laurent_agree(&(&a * &b), &(&b * &a)));
        prop_assert!(laurent_agree(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c))));
    }

    /// Floor soundness: truncating the inputs never corrupts a coefficient
    /// the result still claims to know.
    #[test]
    fn truncation_floors_are_sound(
        a in laurent_strategy(),
        b in laurent_strategy(),
        fa in -20i64..=-5,
        fb in -20i64..=-5,
    ) {
        let at = a.truncate_to(fa);
        let bt = b.truncate_to(fb);
        for (exact, truncated) in [(&a + &b, &at + &bt), (&a * &b, &at * &bt)] {
            if let Some(f) = truncated.floor() {
                for (e, c) in truncated.iter() {
                    prop_assert!(e >= f);
                    prop_assert_eq!(Some(c.clone()), exact.coeff(e));
                }
                // and no true coefficient above the floor is missing
                for (e, c) in exact.iter() {
                    if e >= f {
                        prop_assert_eq!(truncated.coeff(e), Some(c.clone()));
                    }
                }
            } else {
                prop_assert_eq!(&truncated, &exact);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn algebraic_ring_axioms(a in algebraic_strategy(), b in algebraic_strategy(), c in algebraic_strategy()) {
        let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(&ab_c, &a_bc);
        prop_assert_eq!(&a.mul(&b).unwrap(), &b.mul(&a).unwrap());
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
    }
}

#[test]
fn inversion_is_two_sided_for_200_random_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut done = 0usize;
    while done < 200 {
        let terms: Vec<(i64, Rat)> = (0..rng.gen_range(1..5))
            .map(|_| {
                (
                    rng.gen_range(-5..=5),
                    Rat::new(BigInt::from(rng.gen_range(-9..=9i64)), BigInt::from(rng.gen_range(1..=9i64))),
                )
            })
            .collect();
        let floor = rng.gen_range(-30..=-10);
        let a = LaurentSeries::from_terms(terms, Some(floor));
        if a.stored_is_empty() {
            continue;
        }
        let inv = a.inv().unwrap();
        let left = &a * &inv;
        let right = &inv * &a;
        assert!((&left - &LaurentSeries::one()).stored_is_empty(), "a * a^-1 != 1 for {a}");
        assert!((&right - &LaurentSeries::one()).stored_is_empty(), "a^-1 * a != 1 for {a}");
        done += 1;
    }
}

#[test]
fn valuation_is_additive_on_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut done = 0usize;
    while done < 100 {
        let mk = |rng: &mut ChaCha8Rng| {
            let terms: Vec<(i64, Rat)> = (0..rng.gen_range(1..4))
                .map(|_| (rng.gen_range(-6..=6), Rat::from_integer(BigInt::from(rng.gen_range(-5..=5i64)))))
                .collect();
            LaurentSeries::from_terms(terms, Some(rng.gen_range(-25..=-10)))
        };
        let a = mk(&mut rng);
        let b = mk(&mut rng);
        let (ValBound::Exact(va), ValBound::Exact(vb)) = (a.val_bound(), b.val_bound()) else {
            continue;
        };
        let prod = &a * &b;
        let ValBound::Exact(vp) = prod.val_bound() else {
            panic!("product valuation undecidable for visible factors");
        };
        assert_eq!(vp, va + vb, "val({a} * {b})");
        done += 1;
    }
}
