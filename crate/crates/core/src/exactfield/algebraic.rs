//! The quotient ring Q(t)[x]/(f) with exact coordinates over Q(t).
//! Multiplication reduces modulo the (monic) modulus by polynomial division;
//! inverses come from the extended gcd.

use std::fmt;
use std::sync::Arc;

use super::ratfunc::{RatFunc, RatFuncField};
use super::ring::{DivisionRing, PolyRing, Ring};
use super::upoly::UPoly;
use crate::error::{ExactError, Result};

/// Shared modulus data: `f` monic of degree `n` with Z[t] coefficients,
/// lifted to Q(t) for division.
pub struct AlgCtx {
    n: usize,
    modulus_int: UPoly<PolyRing>,
    modulus: UPoly<RatFuncField>,
}

impl AlgCtx {
    pub fn new(modulus_int: UPoly<PolyRing>) -> Result<Arc<Self>> {
        let n = modulus_int
            .degree()
            .ok_or_else(|| ExactError::InvalidInput("zero modulus".to_string()))?;
        if n == 0 {
            return Err(ExactError::InvalidInput("constant modulus".to_string()));
        }
        if !modulus_int.is_monic() {
            return Err(ExactError::InvalidInput("modulus must be monic".to_string()));
        }
        let modulus = modulus_int.map(RatFuncField, |c| RatFunc::from(c.clone()));
        Ok(Arc::new(AlgCtx { n, modulus_int, modulus }))
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn modulus_int(&self) -> &UPoly<PolyRing> {
        &self.modulus_int
    }

    pub fn modulus(&self) -> &UPoly<RatFuncField> {
        &self.modulus
    }
}

impl fmt::Debug for AlgCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(t)[x]/({:?})", self.modulus_int)
    }
}

/// Residue class, stored on the basis `1, x, ..., x^(n-1)`.
#[derive(Clone)]
pub struct AlgebraicElem {
    ctx: Arc<AlgCtx>,
    coords: Vec<RatFunc>, // length ctx.n
}

impl PartialEq for AlgebraicElem {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl AlgebraicElem {
    pub fn new(ctx: Arc<AlgCtx>, mut coords: Vec<RatFunc>) -> Result<Self> {
        if coords.len() > ctx.n {
            return Err(ExactError::DimensionMismatch(format!(
                "{} coordinates for a degree-{} modulus",
                coords.len(),
                ctx.n
            )));
        }
        coords.resize(ctx.n, RatFunc::zero());
        Ok(AlgebraicElem { ctx, coords })
    }

    pub fn zero(ctx: Arc<AlgCtx>) -> Self {
        let coords = vec![RatFunc::zero(); ctx.n];
        AlgebraicElem { ctx, coords }
    }

    pub fn one(ctx: Arc<AlgCtx>) -> Self {
        let mut e = Self::zero(ctx);
        e.coords[0] = RatFunc::one();
        e
    }

    /// The class of `x`.
    pub fn generator(ctx: Arc<AlgCtx>) -> Self {
        let mut e = Self::zero(ctx.clone());
        if ctx.n == 1 {
            // x reduces to a constant immediately.
            let f = ctx.modulus();
            e.coords[0] = -&f.coeff(0);
        } else {
            e.coords[1] = RatFunc::one();
        }
        e
    }

    pub fn coords(&self) -> &[RatFunc] {
        &self.coords
    }

    pub fn ctx(&self) -> &Arc<AlgCtx> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(RatFunc::is_zero)
    }

    fn to_upoly(&self) -> UPoly<RatFuncField> {
        UPoly::new(RatFuncField, self.coords.clone())
    }

    fn from_upoly(ctx: Arc<AlgCtx>, p: UPoly<RatFuncField>) -> Self {
        let mut coords = p.coeffs().to_vec();
        coords.resize(ctx.n, RatFunc::zero());
        AlgebraicElem { ctx, coords }
    }

    fn same_ctx(&self, other: &Self) -> Result<()> {
        if !Arc::ptr_eq(&self.ctx, &other.ctx) && self.ctx.modulus_int != other.ctx.modulus_int {
            return Err(ExactError::InvalidInput(
                "operands live in different quotient rings".to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ctx(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(AlgebraicElem { ctx: self.ctx.clone(), coords })
    }

    pub fn neg(&self) -> Self {
        AlgebraicElem {
            ctx: self.ctx.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ctx(other)?;
        let prod = self.to_upoly().mul(&other.to_upoly());
        let rem = prod.rem(self.ctx.modulus())?;
        Ok(Self::from_upoly(self.ctx.clone(), rem))
    }

    /// Inverse modulo `f` via the extended gcd over Q(t)[x]; a nonconstant
    /// gcd witnesses a zero divisor.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(ExactError::UndefinedInverse("zero residue".to_string()));
        }
        let (g, s, _) = self.to_upoly().ext_gcd(self.ctx.modulus())?;
        if g.degree() != Some(0) {
            return Err(ExactError::ZeroDivisor(format!(
                "gcd with the modulus has degree {:?}",
                g.degree()
            )));
        }
        // g is normalized to 1, so s * self = 1 mod f already.
        let s = s.rem(self.ctx.modulus())?;
        Ok(Self::from_upoly(self.ctx.clone(), s))
    }
}

impl fmt::Debug for AlgebraicElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Q(t)[x]/(f) as a ring object; carries the shared modulus.
#[derive(Clone)]
pub struct AlgebraicRing {
    pub ctx: Arc<AlgCtx>,
}

impl Ring for AlgebraicRing {
    type Elem = AlgebraicElem;

    fn zero(&self) -> AlgebraicElem {
        AlgebraicElem::zero(self.ctx.clone())
    }
    fn one(&self) -> AlgebraicElem {
        AlgebraicElem::one(self.ctx.clone())
    }
    fn add(&self, a: &AlgebraicElem, b: &AlgebraicElem) -> AlgebraicElem {
        a.add(b).expect("shared modulus")
    }
    fn neg(&self, a: &AlgebraicElem) -> AlgebraicElem {
        a.neg()
    }
    fn mul(&self, a: &AlgebraicElem, b: &AlgebraicElem) -> AlgebraicElem {
        a.mul(b).expect("shared modulus")
    }
    fn is_zero(&self, a: &AlgebraicElem) -> bool {
        a.is_zero()
    }
}

impl DivisionRing for AlgebraicRing {
    fn invert(&self, a: &AlgebraicElem) -> Result<AlgebraicElem> {
        a.inv()
    }
}
