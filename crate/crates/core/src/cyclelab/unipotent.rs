//! Last-column unipotent elements: the abelian group Q((t^-1))^(n-1) under
//! coordinate-wise addition, realized as matrices with an identity block
//! and one extra column. Powers are integer scalings of the coordinate
//! vector, and the polynomial / strictly-negative split of each coordinate
//! factors the element as u = u' u''.

use num_bigint::{BigInt, BigUint};

use crate::error::{ExactError, Result};
use crate::exactfield::{
    lcm_of_denominators, LaurentRing, LaurentSeries, Matrix, Poly, PolyRing, Rat, Ring, ValBound,
};

/// Element of the unipotent radical with Laurent-series coordinates
/// `u_1 .. u_(n-1)` (the (j, n) entries).
#[derive(Debug, Clone, PartialEq)]
pub struct Unipotent {
    coords: Vec<LaurentSeries>,
}

impl Unipotent {
    pub fn new(coords: Vec<LaurentSeries>) -> Self {
        Unipotent { coords }
    }

    pub fn zero(rank: usize) -> Self {
        Unipotent { coords: vec![LaurentSeries::zero(); rank] }
    }

    /// The root element with a single nonzero coordinate.
    pub fn root_element(rank: usize, j: usize, coord: LaurentSeries) -> Result<Self> {
        if j == 0 || j > rank {
            return Err(ExactError::InvalidInput(format!("root index {j} out of 1..={rank}")));
        }
        let mut u = Self::zero(rank);
        u.coords[j - 1] = coord;
        Ok(u)
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[LaurentSeries] {
        &self.coords
    }

    /// Group law (vector addition).
    pub fn add(&self, other: &Unipotent) -> Result<Unipotent> {
        if self.rank() != other.rank() {
            return Err(ExactError::DimensionMismatch("unipotent ranks differ".to_string()));
        }
        Ok(Unipotent {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        })
    }

    /// `u^k` = coordinate scaling by the integer k.
    pub fn pow_int(&self, k: &BigInt) -> Unipotent {
        let c = Rat::from_integer(k.clone());
        Unipotent { coords: self.coords.iter().map(|x| x.scale(&c)).collect() }
    }

    /// The (rank+1) x (rank+1) matrix with identity block and last column
    /// `(u_1, ..., u_rank, 1)`.
    pub fn matrix(&self) -> Matrix<LaurentRing> {
        let n = self.rank() + 1;
        Matrix::from_fn(LaurentRing, n, n, |i, j| {
            if i == j {
                LaurentSeries::one()
            } else if j + 1 == n && i < n - 1 {
                self.coords[i].clone()
            } else {
                LaurentSeries::zero()
            }
        })
    }

    /// Reads a unipotent back off a matrix, verifying the shape (identity
    /// block, zero bottom row). Entries computed through truncated frames
    /// carry floors, so the check is agreement of every visible
    /// coefficient; for exact entries this is exact equality.
    pub fn from_matrix(m: &Matrix<LaurentRing>) -> Result<Unipotent> {
        let n = m.rows();
        if !m.is_square() || n == 0 {
            return Err(ExactError::DimensionMismatch("unipotent matrix must be square".to_string()));
        }
        let one = LaurentSeries::one();
        for i in 0..n {
            for j in 0..n {
                if j + 1 == n && i + 1 < n {
                    continue;
                }
                let entry = m.get(i, j);
                let ok = if i == j {
                    (entry - &one).stored_is_empty()
                } else {
                    entry.stored_is_empty()
                };
                if !ok {
                    return Err(ExactError::ConstructionFailure(format!(
                        "entry ({i},{j}) = {entry} breaks the unipotent shape"
                    )));
                }
            }
        }
        Ok(Unipotent { coords: (0..n - 1).map(|i| m.get(i, n - 1).clone()).collect() })
    }

    /// Weakest valuation bound over the coordinates.
    pub fn min_val_bound(&self) -> ValBound {
        let mut worst = ValBound::Infinite;
        let key = |v: &ValBound| match v {
            ValBound::Infinite => i64::MAX,
            ValBound::Exact(x) | ValBound::AtLeast(x) => *x,
        };
        for c in &self.coords {
            let b = c.val_bound();
            if key(&b) < key(&worst) {
                worst = b;
            }
        }
        worst
    }

    /// Splits into the polynomial part (exponents >= 0, rational
    /// coefficients) and the strictly t^-1-small rest; `u = u' + u''`
    /// coordinate-wise, hence `u = u' u''` as matrices.
    pub fn split(&self) -> Result<(PolyUnipotent, Unipotent)> {
        let mut polys = Vec::with_capacity(self.rank());
        let mut rests = Vec::with_capacity(self.rank());
        for c in &self.coords {
            let (p, rest) = c.polynomial_part()?;
            polys.push(p);
            rests.push(rest);
        }
        Ok((PolyUnipotent { coords: polys }, Unipotent { coords: rests }))
    }
}

/// Unipotent with polynomial coordinates (the `u'` part).
#[derive(Debug, Clone, PartialEq)]
pub struct PolyUnipotent {
    coords: Vec<Poly>,
}

impl PolyUnipotent {
    pub fn new(coords: Vec<Poly>) -> Self {
        PolyUnipotent { coords }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Poly] {
        &self.coords
    }

    pub fn add(&self, other: &PolyUnipotent) -> Result<PolyUnipotent> {
        if self.rank() != other.rank() {
            return Err(ExactError::DimensionMismatch("unipotent ranks differ".to_string()));
        }
        Ok(PolyUnipotent {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn pow_int(&self, k: &BigInt) -> PolyUnipotent {
        PolyUnipotent { coords: self.coords.iter().map(|x| x.scale_int(k)).collect() }
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(Poly::is_integral)
    }

    /// Least positive integer whose multiple clears every coefficient
    /// denominator.
    pub fn denominator_lcm(&self) -> BigUint {
        lcm_of_denominators(self.coords.iter().flat_map(|p| p.iter().map(|(_, c)| c)))
    }

    pub fn matrix_poly(&self, ring: PolyRing) -> Matrix<PolyRing> {
        let n = self.rank() + 1;
        Matrix::from_fn(ring, n, n, |i, j| {
            if i == j {
                ring.one()
            } else if j + 1 == n && i < n - 1 {
                self.coords[i].clone()
            } else {
                ring.zero()
            }
        })
    }

    pub fn to_laurent(&self) -> Unipotent {
        Unipotent { coords: self.coords.iter().map(LaurentSeries::from_poly).collect() }
    }
}

/// Conjugation `a^-1 u a` through honest matrix arithmetic, for any `a`
/// normalizing the unipotent radical (block-diagonal with lower-right 1).
pub fn conjugate_unipotent(
    a: &Matrix<LaurentRing>,
    a_inv: &Matrix<LaurentRing>,
    u: &Unipotent,
) -> Result<Unipotent> {
    let m = a_inv.mul(&u.matrix())?.mul(a)?;
    Unipotent::from_matrix(&m)
}

/// `ell(a, u)`: the least positive integer such that the polynomial part
/// of `a^-1 u^ell a` has Z[t] coordinates; equivalently the lcm of the
/// coefficient denominators of the polynomial part of `a^-1 u a`.
pub fn ell_of(
    a: &Matrix<LaurentRing>,
    a_inv: &Matrix<LaurentRing>,
    u: &Unipotent,
) -> Result<BigUint> {
    let conj = conjugate_unipotent(a, a_inv, u)?;
    let (poly_part, _) = conj.split()?;
    Ok(poly_part.denominator_lcm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{rat, ratq};

    fn series(terms: &[(i64, Rat)], floor: Option<i64>) -> LaurentSeries {
        LaurentSeries::from_terms(terms.iter().cloned(), floor)
    }

    #[test]
    fn split_mixed_entry() {
        // t^2 + 3 + t^-1 -> (t^2 + 3, t^-1)
        let u = Unipotent::new(vec![series(
            &[(2, rat(1)), (0, rat(3)), (-1, rat(1))],
            Some(-10),
        )]);
        let (p, rest) = u.split().unwrap();
        assert_eq!(p.coords()[0].to_string(), "t^2 + 3");
        assert_eq!(rest.coords()[0].coeff(-1), Some(rat(1)));
        assert!(rest.min_val_bound().certifies_at_least(1));
    }

    #[test]
    fn split_of_polynomial_has_zero_rest() {
        let u = Unipotent::new(vec![LaurentSeries::from_poly(&Poly::from_int_coeffs([
            (3, 2),
            (0, -1),
        ]))]);
        let (_, rest) = u.split().unwrap();
        assert!(rest.coords()[0].is_exact_zero());
    }

    #[test]
    fn split_respects_addition() {
        let a = Unipotent::new(vec![series(&[(1, rat(2)), (-2, ratq(1, 3))], Some(-8))]);
        let b = Unipotent::new(vec![series(&[(1, rat(-2)), (-1, rat(5))], Some(-8))]);
        let (pa, ra) = a.split().unwrap();
        let (pb, rb) = b.split().unwrap();
        let (ps, rs) = a.add(&b).unwrap().split().unwrap();
        assert_eq!(ps, pa.add(&pb).unwrap());
        assert_eq!(rs, ra.add(&rb).unwrap());
    }

    #[test]
    fn matrix_factorization_u_equals_u1_u2() {
        let u = Unipotent::new(vec![
            series(&[(2, rat(1)), (-1, rat(4))], Some(-6)),
            series(&[(0, ratq(1, 2)), (-3, rat(-1))], Some(-6)),
        ]);
        let (p, rest) = u.split().unwrap();
        let lhs = u.matrix();
        let rhs = p.to_laurent().matrix().mul(&rest.matrix()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((lhs.get(i, j) - rhs.get(i, j)).stored_is_empty());
            }
        }
        // the two factors commute
        let other = rest.matrix().mul(&p.to_laurent().matrix()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((rhs.get(i, j) - other.get(i, j)).stored_is_empty());
            }
        }
    }

    #[test]
    fn denominator_lcm_example() {
        // coefficients 1/6 and 1/4 -> 12
        let p = PolyUnipotent::new(vec![
            Poly::from_rat_coeffs([(1, ratq(1, 6))]),
            Poly::from_rat_coeffs([(0, ratq(1, 4))]),
        ]);
        assert_eq!(p.denominator_lcm(), BigUint::from(12u32));
        assert!(!p.is_integral());
        assert!(p.pow_int(&BigInt::from(12)).is_integral());
        // minimality: 11 does not clear the denominators
        assert!(!p.pow_int(&BigInt::from(11)).is_integral());
    }

    #[test]
    fn ell_of_identity_on_integral_u() {
        let rank = 2;
        let id = Matrix::identity(LaurentRing, rank + 1);
        let u = PolyUnipotent::new(vec![
            Poly::from_int_coeffs([(2, 5)]),
            Poly::from_int_coeffs([(0, -3)]),
        ])
        .to_laurent();
        assert_eq!(ell_of(&id, &id, &u).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn from_matrix_rejects_bad_shape() {
        let mut m = Matrix::identity(LaurentRing, 3);
        m.set(1, 0, LaurentSeries::one());
        assert!(Unipotent::from_matrix(&m).is_err());
    }
}
