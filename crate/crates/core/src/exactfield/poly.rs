//! Polynomials in `t` with rational coefficients, tagged by the coefficient
//! ring they are declared over (`Z` or `Q`). The tag travels through
//! arithmetic: operations on two `Z`-tagged polynomials stay `Z`-tagged.
//! Integrality certificates always inspect the actual denominators, never
//! the tag alone.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{is_integer, rat, Rat};
use crate::error::{ExactError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingTag {
    Int,
    Rat,
}

impl RingTag {
    fn join(self, other: RingTag) -> RingTag {
        match (self, other) {
            (RingTag::Int, RingTag::Int) => RingTag::Int,
            _ => RingTag::Rat,
        }
    }
}

#[derive(Clone)]
pub struct Poly {
    /// exponent -> nonzero coefficient
    coeffs: BTreeMap<u32, Rat>,
    tag: RingTag,
}

/// Value equality: the declared coefficient ring does not distinguish
/// polynomials.
impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(tag: RingTag) -> Self {
        Poly { coeffs: BTreeMap::new(), tag }
    }

    pub fn one(tag: RingTag) -> Self {
        Self::constant_tagged(rat(1), tag)
    }

    pub fn constant(c: Rat) -> Self {
        let tag = if is_integer(&c) { RingTag::Int } else { RingTag::Rat };
        Self::constant_tagged(c, tag)
    }

    pub fn constant_tagged(c: Rat, tag: RingTag) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(0, c);
        }
        Poly { coeffs, tag }
    }

    /// `c * t^exp`.
    pub fn monomial(exp: u32, c: Rat) -> Self {
        let tag = if is_integer(&c) { RingTag::Int } else { RingTag::Rat };
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Poly { coeffs, tag }
    }

    /// `t`.
    pub fn t() -> Self {
        Self::monomial(1, rat(1))
    }

    pub fn from_int_coeffs<I: IntoIterator<Item = (u32, i64)>>(iter: I) -> Self {
        let mut p = Poly::zero(RingTag::Int);
        for (e, c) in iter {
            p.add_term(e, rat(c));
        }
        p
    }

    pub fn from_rat_coeffs<I: IntoIterator<Item = (u32, Rat)>>(iter: I) -> Self {
        let mut p = Poly::zero(RingTag::Rat);
        for (e, c) in iter {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert_with(|| rat(0));
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn tag(&self) -> RingTag {
        self.tag
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.coeffs.values().next_back()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn coeff(&self, exp: u32) -> Rat {
        self.coeffs.get(&exp).cloned().unwrap_or_else(|| rat(0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Rat)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// True when every coefficient is an integer (independent of the tag).
    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(is_integer)
    }

    /// Re-tags as a `Z[t]` element after checking integrality.
    pub fn retag_int(&self) -> Result<Poly> {
        if !self.is_integral() {
            return Err(ExactError::InvalidInput(format!(
                "{self} has a non-integer coefficient, cannot be tagged over Z"
            )));
        }
        Ok(Poly { coeffs: self.coeffs.clone(), tag: RingTag::Int })
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.tag);
        }
        let tag = if is_integer(c) { self.tag } else { RingTag::Rat };
        Poly { coeffs: self.coeffs.iter().map(|(e, x)| (*e, x * c)).collect(), tag }
    }

    pub fn scale_int(&self, c: &BigInt) -> Poly {
        self.scale(&Rat::from_integer(c.clone())).retag(self.tag)
    }

    fn retag(mut self, tag: RingTag) -> Poly {
        self.tag = tag;
        self
    }

    /// Evaluation at a rational point.
    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let mut acc = rat(0);
        let mut last_exp = 0u32;
        // Horner over the sparse support, highest exponent first.
        for (e, c) in self.coeffs.iter().rev() {
            if acc.is_zero() {
                acc = c.clone();
            } else {
                for _ in 0..(last_exp - e) {
                    acc *= x;
                }
                acc += c;
            }
            last_exp = *e;
        }
        for _ in 0..last_exp {
            acc *= x;
        }
        acc
    }

    /// Euclidean division over Q: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d
            .degree()
            .ok_or_else(|| ExactError::ZeroDivisor("polynomial division by zero".to_string()))?;
        let dlc = d.leading_coeff().expect("nonzero divisor").clone();
        let mut q = Poly::zero(RingTag::Rat);
        let mut r = self.clone().retag(RingTag::Rat);
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = r.leading_coeff().expect("nonzero remainder") / &dlc;
            let shift = rd - dd;
            q.add_term(shift, c.clone());
            let sub = d.scale(&c);
            for (e, x) in sub.coeffs {
                r.add_term(e + shift, -x);
            }
        }
        Ok((q, r))
    }

    /// Monic gcd over Q. Each remainder is renormalized to monic, which
    /// keeps the rational coefficients from exploding along the Euclid
    /// chain.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.make_monic().retag(RingTag::Rat);
        let mut b = other.make_monic().retag(RingTag::Rat);
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("b nonzero");
            a = b;
            b = r.make_monic();
        }
        a
    }

    pub fn make_monic(&self) -> Poly {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.tag);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone().retag(self.tag.join(rhs.tag));
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone().retag(self.tag.join(rhs.tag));
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.tag.join(rhs.tag));
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &rhs.coeffs {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c.clone())).collect(),
            tag: self.tag,
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut leading = true;
        for (e, c) in self.coeffs.iter().rev() {
            let mag = c.abs();
            if c.is_negative() {
                write!(f, "{}", if leading { "-" } else { " - " })?;
            } else if !leading {
                write!(f, " + ")?;
            }
            if *e == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if *e == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{e}")?;
                }
            }
            leading = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rational::ratq;

    #[test]
    fn tag_joins() {
        let a = Poly::from_int_coeffs([(1, 1)]);
        let b = Poly::from_rat_coeffs([(0, ratq(1, 2))]);
        assert_eq!((&a + &a).tag(), RingTag::Int);
        assert_eq!((&a * &b).tag(), RingTag::Rat);
        assert!(!(&a * &b).is_integral());
    }

    #[test]
    fn div_rem_roundtrips() {
        let a = Poly::from_int_coeffs([(3, 2), (1, -1), (0, 4)]);
        let d = Poly::from_int_coeffs([(1, 1), (0, 3)]);
        let (q, r) = a.div_rem(&d).unwrap();
        let back = &(&q * &d) + &r;
        assert_eq!(back, a.clone().retag(RingTag::Rat));
        assert!(r.degree() < d.degree());
    }

    #[test]
    fn gcd_is_monic() {
        let a = Poly::from_int_coeffs([(1, 2), (0, 2)]); // 2t + 2
        let b = Poly::from_int_coeffs([(2, 1), (0, -1)]); // t^2 - 1
        let g = a.gcd(&b);
        assert_eq!(g.to_string(), "t + 1");
    }

    #[test]
    fn eval_horner_sparse() {
        let p = Poly::from_int_coeffs([(4, 1), (1, -2), (0, 5)]);
        assert_eq!(p.eval_rat(&rat(3)), rat(81 - 6 + 5));
        assert_eq!(p.eval_rat(&rat(0)), rat(5));
    }

    #[test]
    fn display_signs() {
        let p = Poly::from_rat_coeffs([(2, rat(3)), (1, rat(-1)), (0, ratq(1, 2))]);
        assert_eq!(p.to_string(), "3*t^2 - t + 1/2");
    }
}
