//! Matrices over any of the component rings. Determinants are computed
//! division-free (Laplace expansion with subset memoization), so they are
//! exact over Z[t] and Q[t]; inverses go through the adjugate, which keeps
//! det-1 inverses inside the original ring and costs a single ring
//! inversion over fields.

use std::fmt;

use super::poly::Poly;
use super::ring::{DivisionRing, PolyRing, Ring};
use super::upoly::{UPoly, UPolyRing};
use crate::error::{ExactError, Result};

#[derive(Clone)]
pub struct Matrix<R: Ring> {
    ring: R,
    rows: usize,
    cols: usize,
    data: Vec<R::Elem>, // row-major
}

impl<R: Ring> PartialEq for Matrix<R> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl<R: Ring> Matrix<R> {
    pub fn new(ring: R, rows: usize, cols: usize, data: Vec<R::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(ExactError::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { ring, rows, cols, data })
    }

    pub fn zero(ring: R, rows: usize, cols: usize) -> Self {
        let data = (0..rows * cols).map(|_| ring.zero()).collect();
        Matrix { ring, rows, cols, data }
    }

    pub fn identity(ring: R, n: usize) -> Self {
        let mut m = Self::zero(ring, n, n);
        for i in 0..n {
            let one = m.ring.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_fn(ring: R, rows: usize, cols: usize, f: impl Fn(usize, usize) -> R::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { ring, rows, cols, data }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &R::Elem> {
        self.data.iter()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(ExactError::DimensionMismatch("matrix addition".to_string()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| self.ring.add(a, b))
            .collect();
        Ok(Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| self.ring.neg(a)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(ExactError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zero(self.ring.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.ring.zero();
                for k in 0..self.cols {
                    acc = self.ring.add(&acc, &self.ring.mul(self.get(i, k), other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[R::Elem]) -> Result<Vec<R::Elem>> {
        if self.cols != v.len() {
            return Err(ExactError::DimensionMismatch("matrix-vector product".to_string()));
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = self.ring.zero();
            for (k, x) in v.iter().enumerate() {
                acc = self.ring.add(&acc, &self.ring.mul(self.get(i, k), x));
            }
            out.push(acc);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| self.ring.mul(a, c)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ring.clone(), self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<R2: Ring>(&self, ring: R2, f: impl Fn(&R::Elem) -> R2::Elem) -> Matrix<R2> {
        Matrix {
            ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Result<Self> {
        if !self.is_square() {
            return Err(ExactError::DimensionMismatch("power of a non-square matrix".to_string()));
        }
        let mut acc = Self::identity(self.ring.clone(), self.rows);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Division-free determinant: Laplace expansion along rows with
    /// memoization over column subsets. Exponential in the dimension, which
    /// stays small here; exact over every component ring.
    pub fn det(&self) -> Result<R::Elem> {
        if !self.is_square() {
            return Err(ExactError::DimensionMismatch(
                "determinant of a non-square matrix".to_string(),
            ));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.ring.one());
        }
        if n > 16 {
            return Err(ExactError::InvalidInput(format!(
                "subset-memoized determinant not meant for n = {n}"
            )));
        }
        let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let mut dp: Vec<Option<R::Elem>> = vec![None; (full as usize) + 1];
        dp[0] = Some(self.ring.one());
        for mask in 1..=full {
            let k = mask.count_ones() as usize; // expanding along row k-1
            let mut acc = self.ring.zero();
            for j in 0..n {
                let bit = 1u32 << j;
                if mask & bit == 0 {
                    continue;
                }
                let sub = mask ^ bit;
                let prev = dp[sub as usize].as_ref().expect("filled in mask order");
                let entry = self.get(k - 1, j);
                if self.ring.is_zero(entry) {
                    continue;
                }
                let term = self.ring.mul(prev, entry);
                let pos = (sub & (bit - 1)).count_ones() as usize;
                if (pos + k - 1) % 2 == 0 {
                    acc = self.ring.add(&acc, &term);
                } else {
                    acc = self.ring.sub(&acc, &term);
                }
            }
            dp[mask as usize] = Some(acc);
        }
        Ok(dp[full as usize].take().expect("full mask filled"))
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        Self::from_fn(self.ring.clone(), self.rows - 1, self.cols - 1, |i, j| {
            let si = if i >= skip_row { i + 1 } else { i };
            let sj = if j >= skip_col { j + 1 } else { j };
            self.get(si, sj).clone()
        })
    }

    /// Adjugate (transposed cofactor matrix): `self * adj = det * I` over any
    /// commutative ring.
    pub fn adjugate(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(ExactError::DimensionMismatch("adjugate of a non-square matrix".to_string()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        if n == 1 {
            return Ok(Self::identity(self.ring.clone(), 1));
        }
        let mut adj = Self::zero(self.ring.clone(), n, n);
        for i in 0..n {
            for j in 0..n {
                let m = self.minor(i, j).det()?;
                let c = if (i + j) % 2 == 0 { m } else { self.ring.neg(&m) };
                adj.set(j, i, c);
            }
        }
        Ok(adj)
    }

    /// Inverse of a matrix with determinant +1 or -1; stays in the ring.
    pub fn inv_unimodular(&self) -> Result<Self> {
        let d = self.det()?;
        let one = self.ring.one();
        let adj = self.adjugate()?;
        if self.ring.is_zero(&self.ring.sub(&d, &one)) {
            Ok(adj)
        } else if self.ring.is_zero(&self.ring.add(&d, &one)) {
            Ok(adj.neg())
        } else {
            Err(ExactError::InvalidInput(format!(
                "determinant {d:?} is not a unit of the coefficient ring"
            )))
        }
    }

    /// Signed power: negative exponents via the unimodular inverse.
    pub fn pow_i64(&self, k: i64) -> Result<Self> {
        if k >= 0 {
            self.pow(k as usize)
        } else {
            self.inv_unimodular()?.pow(k.unsigned_abs() as usize)
        }
    }
}

impl<R: DivisionRing> Matrix<R> {
    /// Cofactor inverse: adjugate scaled by the inverted determinant.
    pub fn inv(&self) -> Result<Self> {
        let d = self.det()?;
        let d_inv = self
            .ring
            .invert(&d)
            .map_err(|_| ExactError::SingularMatrix)?;
        Ok(self.adjugate()?.scale(&d_inv))
    }
}

impl Matrix<PolyRing> {
    /// Characteristic polynomial `det(xI - A)` as a polynomial in `x` over
    /// the coefficient ring, computed division-free.
    pub fn char_poly(&self) -> Result<UPoly<PolyRing>> {
        if !self.is_square() {
            return Err(ExactError::DimensionMismatch(
                "characteristic polynomial of a non-square matrix".to_string(),
            ));
        }
        let base = *self.ring();
        let xring = UPolyRing { base };
        let x = UPoly::x(base);
        let m = Matrix::from_fn(xring, self.rows, self.cols, |i, j| {
            let c = UPoly::constant(base, self.get(i, j).clone());
            if i == j {
                x.sub(&c)
            } else {
                c.neg()
            }
        });
        m.det()
    }

    pub fn is_integral(&self) -> bool {
        self.entries().all(Poly::is_integral)
    }
}

impl<R: Ring> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rational::rat;
    use crate::exactfield::ratfunc::{RatFunc, RatFuncField};
    use crate::exactfield::ring::RatField;

    fn qmat(n: usize, data: &[i64]) -> Matrix<RatField> {
        Matrix::new(RatField, n, n, data.iter().map(|x| rat(*x)).collect()).unwrap()
    }

    #[test]
    fn det_identity() {
        for n in 1..=5 {
            let m = Matrix::identity(RatField, n);
            assert_eq!(m.det().unwrap(), rat(1));
        }
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let m = qmat(3, &[2, 0, 1, -1, 3, 2, 4, 1, -2]);
        // by hand: 2*(3*-2 - 2*1) - 0 + 1*(-1*1 - 3*4) = -16 - 13 = -29
        assert_eq!(m.det().unwrap(), rat(-29));
    }

    #[test]
    fn adjugate_identity_law() {
        let m = qmat(4, &[1, 2, 0, 3, 0, 1, 4, 0, 2, 0, 1, 1, 3, 1, 0, 2]);
        let adj = m.adjugate().unwrap();
        let d = m.det().unwrap();
        let prod = m.mul(&adj).unwrap();
        let expect = Matrix::identity(RatField, 4).scale(&d);
        assert_eq!(prod, expect);
    }

    #[test]
    fn field_inverse_roundtrip() {
        let m = qmat(3, &[1, 2, 0, 0, 1, 4, 2, 0, 1]);
        let inv = m.inv().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(RatField, 3));
        assert_eq!(inv.mul(&m).unwrap(), Matrix::identity(RatField, 3));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = qmat(2, &[1, 2, 2, 4]);
        assert!(matches!(m.inv(), Err(ExactError::SingularMatrix)));
    }

    #[test]
    fn det_similarity_invariance_over_ratfunc() {
        // det(D M D^-1) = det(M) with D = diag(t, t^-1) over Q(t)
        let ring = RatFuncField;
        let t = RatFunc::from(crate::exactfield::poly::Poly::t());
        let t_inv = t.invert().unwrap();
        let m = qmat(2, &[3, 1, 7, 2]).map(ring, |c| RatFunc::from(Poly::constant(c.clone())));
        let d = Matrix::new(ring, 2, 2, vec![t.clone(), RatFunc::zero(), RatFunc::zero(), t_inv])
            .unwrap();
        let conj = d.mul(&m).unwrap().mul(&d.inv().unwrap()).unwrap();
        assert_eq!(conj.det().unwrap(), m.det().unwrap());
    }

    #[test]
    fn char_poly_of_scalar_matrix() {
        // char(x; diag(c, c)) = (x - c)^2
        let ring = PolyRing::int();
        let c = Poly::from_int_coeffs([(1, 2)]); // 2t
        let m = Matrix::from_fn(ring, 2, 2, |i, j| if i == j { c.clone() } else { ring.zero() });
        let cp = m.char_poly().unwrap();
        let x = UPoly::x(ring);
        let expect = x.sub(&UPoly::constant(ring, c)).pow(2);
        assert_eq!(cp, expect);
    }
}
