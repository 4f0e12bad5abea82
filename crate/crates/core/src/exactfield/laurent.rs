//! Truncated Laurent series in `t^-1` over the rationals.
//!
//! A value denotes `stored sum + unknown tail`, where the tail is supported
//! on exponents strictly below the precision floor. A floor of `None` means
//! there is no unknown tail at all — the value is exact. Every arithmetic
//! operation propagates floors conservatively, so a stored coefficient is
//! always a true coefficient of the value being represented.
//!
//! Valuation convention: `val(t^-1) = +1`, so the ring of integers
//! `Q[[t^-1]]` is exactly the set of values with valuation >= 0.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use super::rational::{rat, Rat};
use crate::error::{ExactError, Result};

/// Valuation of a series whose leading term is visible (or which is exactly 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    /// Exact zero.
    Infinite,
}

/// What can be said about a valuation at the working precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValBound {
    /// Leading stored term visible: the valuation is known exactly.
    Exact(i64),
    /// Every computable coefficient vanished; the tail forces val >= bound.
    AtLeast(i64),
    /// Exact zero.
    Infinite,
}

impl ValBound {
    /// True when the bound certifies `val >= threshold`.
    pub fn certifies_at_least(&self, threshold: i64) -> bool {
        match self {
            ValBound::Exact(v) | ValBound::AtLeast(v) => *v >= threshold,
            ValBound::Infinite => true,
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    /// exponent -> nonzero coefficient; every exponent >= floor.
    terms: BTreeMap<i64, Rat>,
    /// `None`: exact value. `Some(f)`: unknown tail below exponent `f`.
    floor: Option<i64>,
}

impl LaurentSeries {
    pub fn zero() -> Self {
        LaurentSeries { terms: BTreeMap::new(), floor: None }
    }

    pub fn one() -> Self {
        Self::monomial(0, rat(1))
    }

    pub fn monomial(exp: i64, coeff: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        LaurentSeries { terms, floor: None }
    }

    /// `t^exp`.
    pub fn t_power(exp: i64) -> Self {
        Self::monomial(exp, rat(1))
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rat)>>(iter: I, floor: Option<i64>) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in iter {
            if c.is_zero() {
                continue;
            }
            let entry = terms.entry(e).or_insert_with(|| rat(0));
            *entry += c;
        }
        terms.retain(|_, c: &mut Rat| !c.is_zero());
        let mut s = LaurentSeries { terms, floor };
        s.enforce_floor();
        s
    }

    pub fn from_poly(p: &Poly) -> Self {
        Self::from_terms(p.iter().map(|(e, c)| (e as i64, c.clone())), None)
    }

    fn enforce_floor(&mut self) {
        if let Some(f) = self.floor {
            self.terms.retain(|e, _| *e >= f);
        }
    }

    /// Forgets information below `floor` and records the coarser bound.
    /// Exact inputs become truncated; an already-coarser floor is kept.
    pub fn truncate_to(&self, floor: i64) -> Self {
        let new_floor = match self.floor {
            None => Some(floor),
            Some(f) => Some(f.max(floor)),
        };
        let mut s = LaurentSeries { terms: self.terms.clone(), floor: new_floor };
        s.enforce_floor();
        s
    }

    pub fn floor(&self) -> Option<i64> {
        self.floor
    }

    pub fn is_exact(&self) -> bool {
        self.floor.is_none()
    }

    /// Exactly the zero value (not merely "nothing visible").
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.floor.is_none()
    }

    pub fn stored_is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (i64, &Rat)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Largest stored exponent with its coefficient.
    pub fn leading(&self) -> Option<(i64, &Rat)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    pub fn top_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Coefficient of `t^exp` if it is determined at this precision.
    pub fn coeff(&self, exp: i64) -> Option<Rat> {
        match self.floor {
            Some(f) if exp < f => None,
            _ => Some(self.terms.get(&exp).cloned().unwrap_or_else(|| rat(0))),
        }
    }

    /// Strict upper bound on the exponents that can occur in the value,
    /// stored or hidden. `None` for exact zero.
    fn exponent_bound(&self) -> Option<i64> {
        match (self.top_exponent(), self.floor) {
            (Some(top), _) => Some(top + 1),
            (None, Some(f)) => Some(f),
            (None, None) => None,
        }
    }

    pub fn valuation(&self) -> Result<Valuation> {
        match (self.leading(), self.floor) {
            (Some((e, _)), _) => Ok(Valuation::Finite(-e)),
            (None, None) => Ok(Valuation::Infinite),
            (None, Some(f)) => Err(ExactError::InsufficientPrecision(format!(
                "no visible term above floor {f}; valuation undecidable"
            ))),
        }
    }

    /// Valuation information that never fails: an empty stored part with a
    /// finite floor still certifies a lower bound.
    pub fn val_bound(&self) -> ValBound {
        match (self.leading(), self.floor) {
            (Some((e, _)), _) => ValBound::Exact(-e),
            (None, None) => ValBound::Infinite,
            (None, Some(f)) => ValBound::AtLeast(1 - f),
        }
    }

    /// Splits into (coefficients at exponents >= 0 as a polynomial in t,
    /// strictly negative part). Errors when the floor hides exponents >= 0.
    pub fn polynomial_part(&self) -> Result<(Poly, LaurentSeries)> {
        if let Some(f) = self.floor {
            if f > 0 {
                return Err(ExactError::InsufficientPrecision(format!(
                    "floor {f} > 0 hides polynomial coefficients"
                )));
            }
        }
        let poly = Poly::from_rat_coeffs(
            self.terms
                .range(0..)
                .map(|(e, c)| (*e as u32, c.clone())),
        );
        let neg = LaurentSeries::from_terms(
            self.terms.range(..0).map(|(e, c)| (*e, c.clone())),
            self.floor,
        );
        Ok((poly, neg))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentSeries {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
            floor: self.floor,
        }
    }

    pub fn shift(&self, exp: i64) -> Self {
        LaurentSeries {
            terms: self.terms.iter().map(|(e, x)| (*e + exp, x.clone())).collect(),
            floor: self.floor.map(|f| f + exp),
        }
    }

    fn add_impl(&self, other: &Self, negate_other: bool) -> Self {
        let floor = match (self.floor, other.floor) {
            (None, f) | (f, None) => f,
            (Some(a), Some(b)) => Some(a.max(b)),
        };
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let c = if negate_other { -c.clone() } else { c.clone() };
            let entry = terms.entry(*e).or_insert_with(|| rat(0));
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        let mut s = LaurentSeries { terms, floor };
        s.enforce_floor();
        s
    }

    fn mul_impl(&self, other: &Self) -> Self {
        // Exact zero annihilates regardless of the other factor's floor.
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero();
        }
        let floor = match (self.floor, other.floor) {
            (None, None) => None,
            _ => {
                // Error terms: tail(a)*b lives strictly below
                // floor(a) + top(b), and symmetrically; keep the weaker of
                // the two constraints. For a stored-empty truncated operand
                // the exponent bound stands in for the missing top.
                let fa = self.floor.map(|f| match other.exponent_bound() {
                    Some(tb) => f + tb - 1,
                    None => unreachable!("exact zero handled above"),
                });
                let fb = other.floor.map(|f| match self.exponent_bound() {
                    Some(ta) => f + ta - 1,
                    None => unreachable!("exact zero handled above"),
                });
                match (fa, fb) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    (Some(a), None) => Some(a),
                    (None, Some(b)) => Some(b),
                    (None, None) => None,
                }
            }
        };
        let mut terms: BTreeMap<i64, Rat> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if let Some(f) = floor {
                    if e < f {
                        continue;
                    }
                }
                let entry = terms.entry(e).or_insert_with(|| rat(0));
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        LaurentSeries { terms, floor }
    }

    /// Multiplicative inverse. Exact monomials invert exactly; a truncated
    /// series with leading exponent `e` and floor `f` inverts to floor
    /// `f - 2e` (one relative precision is spent on the division). Exact
    /// multi-term input has an infinite expansion: use [`inv_to`] instead.
    ///
    /// [`inv_to`]: LaurentSeries::inv_to
    pub fn inv(&self) -> Result<Self> {
        let (e, _) = self.leading().ok_or_else(|| {
            ExactError::UndefinedInverse(match self.floor {
                None => "exact zero".to_string(),
                Some(f) => format!("no visible leading term above floor {f}"),
            })
        })?;
        match self.floor {
            None if self.terms.len() == 1 => {
                let c = &self.terms[&e];
                Ok(Self::monomial(-e, c.recip()))
            }
            None => Err(ExactError::UndefinedInverse(
                "exact multi-term series has an infinite inverse; pick a floor via inv_to"
                    .to_string(),
            )),
            Some(f) => self.inv_to(f - 2 * e),
        }
    }

    /// Inverse truncated to the requested floor, by leading-term division
    /// and geometric iteration.
    pub fn inv_to(&self, target_floor: i64) -> Result<Self> {
        let (e, c) = self
            .leading()
            .map(|(e, c)| (e, c.clone()))
            .ok_or_else(|| ExactError::UndefinedInverse("no visible leading term".to_string()))?;
        if let Some(f) = self.floor {
            // Result floor cannot be deeper than the input supports.
            if target_floor < f - 2 * e {
                return Err(ExactError::InsufficientPrecision(format!(
                    "inverse to floor {target_floor} needs input floor below {}",
                    target_floor + 2 * e
                )));
            }
        }
        let lead_inv = Self::monomial(-e, c.recip());
        // u = self / lead has leading term 1 at exponent 0; invert 1 + r by
        // the geometric series, truncating every intermediate at rel_floor.
        let rel_floor = target_floor + e;
        let u = (self * &lead_inv).truncate_to(rel_floor);
        let minus_r = (&Self::one() - &u).truncate_to(rel_floor);
        let mut sum = Self::one().truncate_to(rel_floor);
        let mut term = Self::one();
        loop {
            term = (&term * &minus_r).truncate_to(rel_floor);
            if term.stored_is_empty() {
                break;
            }
            sum = &sum + &term;
        }
        Ok((&lead_inv * &sum).truncate_to(target_floor))
    }

    /// Integer power; negative exponents go through [`inv`](Self::inv).
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// True when the stored parts agree above the coarser of the two floors;
    /// the only equality decidable for truncated values.
    pub fn agrees_with(&self, other: &Self) -> bool {
        (self - other).stored_is_empty()
    }
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.add_impl(rhs, false)
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.add_impl(rhs, true)
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.mul_impl(rhs)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        LaurentSeries {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
            floor: self.floor,
        }
    }
}

fn fmt_coeff(f: &mut fmt::Formatter<'_>, c: &Rat, leading: bool, exp: i64) -> fmt::Result {
    let mag = c.abs();
    if c.is_negative() {
        write!(f, "{}", if leading { "-" } else { " - " })?;
    } else if !leading {
        write!(f, " + ")?;
    }
    if exp == 0 {
        write!(f, "{mag}")
    } else if mag.is_one() {
        Ok(())
    } else {
        write!(f, "{mag}*")
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            match self.floor {
                None => write!(f, "0")?,
                Some(fl) => write!(f, "O(t^{})", fl - 1)?,
            }
            return Ok(());
        }
        let mut leading = true;
        for (e, c) in self.terms.iter().rev() {
            fmt_coeff(f, c, leading, *e)?;
            match e {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{e}")?,
            }
            leading = false;
        }
        if let Some(fl) = self.floor {
            write!(f, " + O(t^{})", fl - 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rational::ratq;

    fn exact(terms: &[(i64, i64)]) -> LaurentSeries {
        LaurentSeries::from_terms(terms.iter().map(|(e, c)| (*e, rat(*c))), None)
    }

    #[test]
    fn add_cancels() {
        let a = exact(&[(1, 1), (0, 1)]); // t + 1
        let b = exact(&[(1, -1)]); // -t
        assert_eq!(&a + &b, LaurentSeries::one());
    }

    #[test]
    fn add_identity() {
        let x = exact(&[(3, 2), (-1, 5)]);
        assert_eq!(&x + &LaurentSeries::zero(), x);
    }

    #[test]
    fn add_propagates_floor() {
        // (t^-1 floor -3) + (t^-2 floor -2) -> t^-1 + t^-2 with floor -2
        let a = LaurentSeries::t_power(-1).truncate_to(-3);
        let b = LaurentSeries::t_power(-2).truncate_to(-2);
        let s = &a + &b;
        assert_eq!(s.floor(), Some(-2));
        assert_eq!(s.coeff(-1), Some(rat(1)));
        assert_eq!(s.coeff(-2), Some(rat(1)));
        assert_eq!(s.coeff(-3), None, "below the floor nothing is known");
    }

    #[test]
    fn mul_monomials() {
        assert_eq!(&LaurentSeries::t_power(1) * &LaurentSeries::t_power(-1), LaurentSeries::one());
    }

    #[test]
    fn mul_truncates_per_rule() {
        // (-t + 1/2 t^-1, floor -5) squared -> t^2 - 1 + 1/4 t^-2, floor -4
        let a = LaurentSeries::from_terms([(1, rat(-1)), (-1, ratq(1, 2))], Some(-5));
        let sq = &a * &a;
        assert_eq!(sq.floor(), Some(-4));
        assert_eq!(sq.coeff(2), Some(rat(1)));
        assert_eq!(sq.coeff(0), Some(rat(-1)));
        assert_eq!(sq.coeff(-2), Some(ratq(1, 4)));
        assert_eq!(sq.iter().count(), 3);
    }

    #[test]
    fn mul_exact_zero_annihilates() {
        let a = LaurentSeries::t_power(5).truncate_to(-2);
        assert!((&a * &LaurentSeries::zero()).is_exact_zero());
    }

    #[test]
    fn inv_monomial_is_exact() {
        let i = LaurentSeries::t_power(1).inv().unwrap();
        assert_eq!(i, LaurentSeries::t_power(-1));
        assert!(i.is_exact());
    }

    #[test]
    fn inv_geometric_series() {
        // 1/(1 - t^-1) = 1 + t^-1 + t^-2 + ... down to the floor
        let a = LaurentSeries::from_terms([(0, rat(1)), (-1, rat(-1))], Some(-6));
        let i = a.inv().unwrap();
        for e in 0..6 {
            assert_eq!(i.coeff(-e), Some(rat(1)), "coefficient at t^-{e}");
        }
        let prod = &a * &i;
        assert!((&prod - &LaurentSeries::one()).stored_is_empty());
    }

    #[test]
    fn inv_with_leading_division() {
        // 1/(-2t + 1) = -1/2 t^-1 (1 + 1/2 t^-1 + 1/4 t^-2 + ...)
        let a = LaurentSeries::from_terms([(1, rat(-2)), (0, rat(1))], Some(-8));
        let i = a.inv().unwrap();
        assert_eq!(i.coeff(-1), Some(ratq(-1, 2)));
        assert_eq!(i.coeff(-2), Some(ratq(-1, 4)));
        assert_eq!(i.coeff(-3), Some(ratq(-1, 8)));
        let prod = &a * &i;
        assert!((&prod - &LaurentSeries::one()).stored_is_empty());
    }

    #[test]
    fn inv_of_zero_is_undefined() {
        assert!(matches!(
            LaurentSeries::zero().inv(),
            Err(ExactError::UndefinedInverse(_))
        ));
        let hidden = LaurentSeries::zero().truncate_to(-4);
        assert!(matches!(hidden.inv(), Err(ExactError::UndefinedInverse(_))));
    }

    #[test]
    fn valuation_convention() {
        assert_eq!(LaurentSeries::t_power(1).valuation().unwrap(), Valuation::Finite(-1));
        let x = exact(&[(-2, 3), (-5, 1)]);
        assert_eq!(x.valuation().unwrap(), Valuation::Finite(2));
        let y = exact(&[(2, 1), (0, -1)]);
        assert_eq!(y.valuation().unwrap(), Valuation::Finite(-2));
        assert_eq!(LaurentSeries::zero().valuation().unwrap(), Valuation::Infinite);
        assert!(LaurentSeries::zero().truncate_to(-3).valuation().is_err());
    }

    #[test]
    fn val_bound_on_hidden_tail() {
        let hidden = LaurentSeries::zero().truncate_to(-10);
        assert_eq!(hidden.val_bound(), ValBound::AtLeast(11));
        assert!(hidden.val_bound().certifies_at_least(11));
        assert!(!hidden.val_bound().certifies_at_least(12));
    }

    #[test]
    fn polynomial_part_splits() {
        let x = LaurentSeries::from_terms(
            [(2, rat(1)), (0, rat(3)), (-1, rat(1))],
            Some(-5),
        );
        let (p, neg) = x.polynomial_part().unwrap();
        assert_eq!(p.to_string(), "t^2 + 3");
        assert_eq!(neg.coeff(-1), Some(rat(1)));
        assert_eq!(neg.top_exponent(), Some(-1));
    }

    #[test]
    fn display_formats() {
        let x = LaurentSeries::from_terms(
            [(2, rat(3)), (0, rat(-1)), (-2, ratq(1, 4))],
            Some(-5),
        );
        assert_eq!(x.to_string(), "3*t^2 - 1 + 1/4*t^-2 + O(t^-6)");
    }
}
