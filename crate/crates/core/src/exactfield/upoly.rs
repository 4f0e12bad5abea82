//! Univariate polynomials in `x` over an arbitrary coefficient ring object.
//! Over Z[t] coefficients this is the home of `f(x)`; over Q(t) it carries
//! the quotient-ring arithmetic (division, extended gcd).

use std::fmt;

use super::matrix::Matrix;
use super::ring::{DivisionRing, Ring};
use crate::error::{ExactError, Result};

#[derive(Clone)]
pub struct UPoly<R: Ring> {
    ring: R,
    /// coeffs[i] multiplies x^i; no trailing zeros.
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> PartialEq for UPoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<R: Ring> UPoly<R> {
    pub fn new(ring: R, mut coeffs: Vec<R::Elem>) -> Self {
        while coeffs.last().map(|c| ring.is_zero(c)).unwrap_or(false) {
            coeffs.pop();
        }
        UPoly { ring, coeffs }
    }

    pub fn zero(ring: R) -> Self {
        UPoly { ring, coeffs: Vec::new() }
    }

    pub fn one(ring: R) -> Self {
        let one = ring.one();
        UPoly { ring, coeffs: vec![one] }
    }

    /// `x`.
    pub fn x(ring: R) -> Self {
        let coeffs = vec![ring.zero(), ring.one()];
        UPoly { ring, coeffs }
    }

    pub fn constant(ring: R, c: R::Elem) -> Self {
        Self::new(ring, vec![c])
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> R::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&R::Elem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading()
            .map(|c| self.ring.sub(c, &self.ring.one()))
            .map(|d| self.ring.is_zero(&d))
            .unwrap_or(false)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.ring.add(&self.coeff(i), &other.coeff(i)));
        }
        Self::new(self.ring.clone(), out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        UPoly {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| self.ring.neg(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ring.clone());
        }
        let mut out = vec![self.ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = self.ring.add(&out[i + j], &self.ring.mul(a, b));
            }
        }
        Self::new(self.ring.clone(), out)
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        Self::new(
            self.ring.clone(),
            self.coeffs.iter().map(|a| self.ring.mul(a, c)).collect(),
        )
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one(self.ring.clone());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Horner evaluation at a ring element.
    pub fn eval(&self, x: &R::Elem) -> R::Elem {
        let mut acc = self.ring.zero();
        for c in self.coeffs.iter().rev() {
            acc = self.ring.add(&self.ring.mul(&acc, x), c);
        }
        acc
    }

    /// Horner evaluation at a square matrix over the same ring; constants
    /// embed as scalar matrices.
    pub fn eval_matrix(&self, m: &Matrix<R>) -> Result<Matrix<R>> {
        if m.rows() != m.cols() {
            return Err(ExactError::DimensionMismatch(
                "polynomial evaluation needs a square matrix".to_string(),
            ));
        }
        let mut acc = Matrix::zero(self.ring.clone(), m.rows(), m.cols());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m)?;
            let scalar = Matrix::identity(self.ring.clone(), m.rows()).scale(c);
            acc = acc.add(&scalar)?;
        }
        Ok(acc)
    }

    /// Maps coefficients into another ring.
    pub fn map<R2: Ring>(&self, ring: R2, f: impl Fn(&R::Elem) -> R2::Elem) -> UPoly<R2> {
        UPoly::new(ring, self.coeffs.iter().map(f).collect())
    }
}

impl<R: DivisionRing> UPoly<R> {
    /// Division with remainder; requires an invertible leading coefficient
    /// in the divisor.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d
            .degree()
            .ok_or_else(|| ExactError::ZeroDivisor("division by zero polynomial".to_string()))?;
        let lc_inv = self.ring.invert(d.leading().expect("nonzero"))?;
        let mut q = Self::zero(self.ring.clone());
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = self.ring.mul(r.leading().expect("nonzero"), &lc_inv);
            let shift = rd - dd;
            let mut mono = vec![self.ring.zero(); shift + 1];
            mono[shift] = c;
            let mono = Self::new(self.ring.clone(), mono);
            q = q.add(&mono);
            r = r.sub(&mono.mul(d));
        }
        Ok((q, r))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.div_rem(d)?.1)
    }

    /// Extended gcd: returns `(g, s, t)` with `g = s*self + t*other`,
    /// `g` normalized monic when nonzero.
    pub fn ext_gcd(&self, other: &Self) -> Result<(Self, Self, Self)> {
        let ring = self.ring.clone();
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut s0 = Self::one(ring.clone());
        let mut s1 = Self::zero(ring.clone());
        let mut t0 = Self::zero(ring.clone());
        let mut t1 = Self::one(ring.clone());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if let Some(lc) = r0.leading() {
            let lc_inv = ring.invert(lc)?;
            return Ok((r0.scale(&lc_inv), s0.scale(&lc_inv), t0.scale(&lc_inv)));
        }
        Ok((r0, s0, t0))
    }
}

/// Polynomials over `R` as a ring object in their own right, so matrices of
/// polynomials (e.g. `xI - A`) can reuse the generic determinant.
#[derive(Clone)]
pub struct UPolyRing<R: Ring> {
    pub base: R,
}

impl<R: Ring> Ring for UPolyRing<R>
where
    R::Elem: 'static,
{
    type Elem = UPoly<R>;

    fn zero(&self) -> UPoly<R> {
        UPoly::zero(self.base.clone())
    }
    fn one(&self) -> UPoly<R> {
        UPoly::one(self.base.clone())
    }
    fn add(&self, a: &UPoly<R>, b: &UPoly<R>) -> UPoly<R> {
        a.add(b)
    }
    fn neg(&self, a: &UPoly<R>) -> UPoly<R> {
        a.neg()
    }
    fn mul(&self, a: &UPoly<R>, b: &UPoly<R>) -> UPoly<R> {
        a.mul(b)
    }
    fn is_zero(&self, a: &UPoly<R>) -> bool {
        a.is_zero()
    }
}

impl<R: Ring> fmt::Debug for UPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if self.ring.is_zero(c) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "({c:?})")?,
                1 => write!(f, "({c:?})*x")?,
                _ => write!(f, "({c:?})*x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::ratfunc::{RatFunc, RatFuncField};
    use crate::exactfield::ring::RatField;

    fn qpoly(cs: &[i64]) -> UPoly<RatField> {
        UPoly::new(RatField, cs.iter().map(|c| crate::exactfield::rational::rat(*c)).collect())
    }

    #[test]
    fn div_rem_over_q() {
        // x^3 - 1 = (x - 1)(x^2 + x + 1)
        let a = qpoly(&[-1, 0, 0, 1]);
        let d = qpoly(&[-1, 1]);
        let (q, r) = a.div_rem(&d).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, qpoly(&[1, 1, 1]));
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = qpoly(&[-1, 0, 1]); // x^2 - 1
        let b = qpoly(&[1, 1]); // x + 1
        let (g, s, t) = a.ext_gcd(&b).unwrap();
        assert_eq!(g, qpoly(&[1, 1]));
        let back = s.mul(&a).add(&t.mul(&b));
        assert_eq!(back, g);
    }

    #[test]
    fn ext_gcd_over_ratfunc_coefficients() {
        // gcd(x + t, x) = 1 over Q(t), with Bezout witnesses.
        let ring = RatFuncField;
        let t = RatFunc::from(crate::exactfield::poly::Poly::t());
        let a = UPoly::new(ring, vec![t.clone(), RatFunc::one()]);
        let b = UPoly::x(ring);
        let (g, s, tt) = a.ext_gcd(&b).unwrap();
        assert_eq!(g.degree(), Some(0));
        let back = s.mul(&a).add(&tt.mul(&b));
        assert_eq!(back, g);
    }
}
