use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed};

/// Arbitrary-precision rational, always stored reduced with positive
/// denominator (`num_rational` maintains both invariants).
pub type Rat = num_rational::BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratq(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Least common multiple of the denominators of a family of rationals;
/// the smallest positive integer clearing all of them.
pub fn lcm_of_denominators<'a, I: IntoIterator<Item = &'a Rat>>(items: I) -> BigUint {
    let mut acc = BigInt::one();
    for r in items {
        acc = acc.lcm(r.denom());
    }
    acc.abs().to_biguint().expect("lcm is positive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn lcm_of_denominators_clears_fractions() {
        let xs = [ratq(1, 6), ratq(1, 4), rat(5)];
        assert_eq!(lcm_of_denominators(xs.iter()), BigUint::from(12u32));
        for x in &xs {
            assert!(is_integer(&(x * Rat::from_integer(BigInt::from(12)))));
        }
    }

    #[test]
    fn zero_is_canonical() {
        let z = ratq(0, 7);
        assert!(z.numer().is_zero());
        assert!(z.denom().is_one());
    }
}
