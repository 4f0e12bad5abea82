//! Exact arithmetic substrate: big rationals, truncated Laurent series in
//! `t^-1`, polynomials in `t`, rational functions, the quotient ring
//! Q(t)[x]/(f), and matrices over each.
//!
//! Everything is immutable after construction and every operation is a pure
//! function. Group-element algebra stays in the exact rings; Laurent series
//! enter only where valuations or root expansions are intrinsically needed.

pub mod algebraic;
pub mod laurent;
pub mod matrix;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod ring;
pub mod upoly;

pub use algebraic::{AlgCtx, AlgebraicElem, AlgebraicRing};
pub use laurent::{LaurentSeries, ValBound, Valuation};
pub use matrix::Matrix;
pub use poly::{Poly, RingTag};
pub use ratfunc::{RatFunc, RatFuncField};
pub use rational::{lcm_of_denominators, rat, ratq, Rat};
pub use ring::{DivisionRing, LaurentRing, PolyRing, RatField, Ring};
pub use upoly::{UPoly, UPolyRing};
