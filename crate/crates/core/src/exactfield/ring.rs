//! Ring-object abstraction. A descriptor value carries whatever context the
//! element operations need (a quotient modulus, a coefficient tag), so the
//! same generic matrix code runs over every component ring.

use num_traits::Zero;

use super::laurent::LaurentSeries;
use super::poly::{Poly, RingTag};
use super::rational::{rat, Rat};
use crate::error::Result;

pub trait Ring: Clone {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// Structural zero test. Over truncated series this means "no visible
    /// term", which is all that can be said at finite precision.
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn from_i64(&self, n: i64) -> Self::Elem {
        let mut acc = self.zero();
        let one = self.one();
        for _ in 0..n.unsigned_abs() {
            acc = self.add(&acc, &one);
        }
        if n < 0 {
            acc = self.neg(&acc);
        }
        acc
    }
}

/// Rings in which nonzero elements can (sometimes) be inverted; `invert`
/// reports failure instead of guessing.
pub trait DivisionRing: Ring {
    fn invert(&self, a: &Self::Elem) -> Result<Self::Elem>;
}

/// The rational field Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatField;

impl Ring for RatField {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        rat(0)
    }
    fn one(&self) -> Rat {
        rat(1)
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }
    fn neg(&self, a: &Rat) -> Rat {
        -a.clone()
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, n: i64) -> Rat {
        rat(n)
    }
}

impl DivisionRing for RatField {
    fn invert(&self, a: &Rat) -> Result<Rat> {
        if a.is_zero() {
            return Err(crate::error::ExactError::UndefinedInverse("1/0 in Q".to_string()));
        }
        Ok(a.recip())
    }
}

/// Z[t] or Q[t], depending on the tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolyRing {
    pub tag: RingTag,
}

impl PolyRing {
    pub fn int() -> Self {
        PolyRing { tag: RingTag::Int }
    }
    pub fn rational() -> Self {
        PolyRing { tag: RingTag::Rat }
    }
}

impl Ring for PolyRing {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        Poly::zero(self.tag)
    }
    fn one(&self) -> Poly {
        Poly::one(self.tag)
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a + b
    }
    fn neg(&self, a: &Poly) -> Poly {
        -a
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a * b
    }
    fn is_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, n: i64) -> Poly {
        Poly::constant_tagged(rat(n), self.tag)
    }
}

/// Truncated Laurent series over Q; division spends precision per the
/// propagation rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LaurentRing;

impl Ring for LaurentRing {
    type Elem = LaurentSeries;

    fn zero(&self) -> LaurentSeries {
        LaurentSeries::zero()
    }
    fn one(&self) -> LaurentSeries {
        LaurentSeries::one()
    }
    fn add(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        a + b
    }
    fn neg(&self, a: &LaurentSeries) -> LaurentSeries {
        -a
    }
    fn mul(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        a * b
    }
    fn is_zero(&self, a: &LaurentSeries) -> bool {
        a.stored_is_empty()
    }
    fn from_i64(&self, n: i64) -> LaurentSeries {
        LaurentSeries::monomial(0, rat(n))
    }
}

impl DivisionRing for LaurentRing {
    fn invert(&self, a: &LaurentSeries) -> Result<LaurentSeries> {
        a.inv()
    }
}
