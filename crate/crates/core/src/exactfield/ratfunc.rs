//! The field Q(t), stored as reduced fractions with monic denominator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::laurent::LaurentSeries;
use super::poly::{Poly, RingTag};
use super::ring::{DivisionRing, Ring};
use crate::error::{ExactError, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly, // monic, coprime to num
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(ExactError::ZeroDivisor("zero denominator in Q(t)".to_string()));
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc { num: Poly::zero(RingTag::Rat), den: Poly::one(RingTag::Rat) };
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g).expect("gcd divides");
        let (den, _) = den.div_rem(&g).expect("gcd divides");
        // Normalize to a monic denominator.
        let lc = den.leading_coeff().expect("nonzero denominator").clone();
        RatFunc { num: num.scale(&lc.recip()), den: den.scale(&lc.recip()) }
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(RingTag::Rat), den: Poly::one(RingTag::Rat) }
    }

    pub fn one() -> Self {
        RatFunc { num: Poly::one(RingTag::Rat), den: Poly::one(RingTag::Rat) }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        // The denominator is monic, so degree zero means exactly 1.
        self.den.degree() == Some(0)
    }

    pub fn as_polynomial(&self) -> Option<Poly> {
        if self.is_polynomial() {
            Some(self.num.clone())
        } else {
            None
        }
    }

    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(ExactError::UndefinedInverse("1/0 in Q(t)".to_string()));
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    /// Splits into polynomial part and a proper fraction (numerator degree
    /// strictly below denominator degree). The proper part has positive
    /// valuation in Q((t^-1)) unless it is zero.
    pub fn poly_and_proper_parts(&self) -> (Poly, RatFunc) {
        let (q, r) = self.num.div_rem(&self.den).expect("den nonzero");
        (q, RatFunc::reduced(r, self.den.clone()))
    }

    /// Laurent expansion at `t = infinity`, truncated to `floor`.
    pub fn to_laurent(&self, floor: i64) -> Result<LaurentSeries> {
        if self.is_zero() {
            return Ok(LaurentSeries::zero());
        }
        let num_l = LaurentSeries::from_poly(&self.num);
        let den_l = LaurentSeries::from_poly(&self.den);
        if self.den.degree() == Some(0) {
            return Ok(num_l.scale(&self.den.coeff(0).recip()));
        }
        let num_top = num_l.top_exponent().expect("nonzero numerator");
        let den_inv = den_l.inv_to(floor - num_top)?;
        Ok((&num_l * &den_inv).truncate_to(floor))
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one(RingTag::Rat) }
    }
}

// Denominators are combined through their lcm (addition) or after cross
// cancellation (multiplication); this keeps the final gcd small, which is
// what makes long op chains feasible.

fn add_signed(a: &RatFunc, b: &RatFunc, negate: bool) -> RatFunc {
    let g = a.den.gcd(&b.den);
    let (da, _) = a.den.div_rem(&g).expect("gcd divides");
    let (db, _) = b.den.div_rem(&g).expect("gcd divides");
    let rhs_num = &b.num * &da;
    let num = if negate {
        &(&a.num * &db) - &rhs_num
    } else {
        &(&a.num * &db) + &rhs_num
    };
    RatFunc::reduced(num, &a.den * &db)
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        add_signed(self, rhs, false)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        add_signed(self, rhs, true)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let (n1, _) = self.num.div_rem(&g1).expect("gcd divides");
        let (n2, _) = rhs.num.div_rem(&g2).expect("gcd divides");
        let (d1, _) = self.den.div_rem(&g2).expect("gcd divides");
        let (d2, _) = rhs.den.div_rem(&g1).expect("gcd divides");
        RatFunc::reduced(&n1 * &n2, &d1 * &d2)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one(RingTag::Rat) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Q(t) as a ring object.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatFuncField;

impl Ring for RatFuncField {
    type Elem = RatFunc;

    fn zero(&self) -> RatFunc {
        RatFunc::zero()
    }
    fn one(&self) -> RatFunc {
        RatFunc::one()
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a + b
    }
    fn neg(&self, a: &RatFunc) -> RatFunc {
        -a
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a * b
    }
    fn is_zero(&self, a: &RatFunc) -> bool {
        a.is_zero()
    }
}

impl DivisionRing for RatFuncField {
    fn invert(&self, a: &RatFunc) -> Result<RatFunc> {
        a.invert()
    }
}
