//! The free abelian diagonalizable subgroup of SL_n(Z[t]).
//!
//! Multiplication by `x` on Z[t][x]/(f) gives the companion matrix `C_f`;
//! the generators are `a_i = (C_f + q_(i+1) t I)^2`, squared so their
//! determinants are exactly 1. All identities here are exact over Z[t]:
//! `f(C_f) = 0`, `prod_i (C_f + q_i t I) = I`, commutativity, unit
//! determinants. Laurent series enter only for eigenvalue expansions, where
//! branch roots turn each word into a diagonal family with computable
//! valuations.

use std::fmt;

use crate::error::{ExactError, Result};
use crate::exactfield::{
    rat, LaurentRing, LaurentSeries, Matrix, Poly, PolyRing, Rat, Ring, UPoly, ValBound,
};
use crate::rootlift::{build_f, lift_root, prime_sequence, q_sequence};

/// Multiplication-by-x matrix on the basis `1, x, ..., x^(n-1)` of
/// Z[t][x]/(f): ones on the subdiagonal, minus the low coefficients of `f`
/// in the last column.
pub fn companion_matrix(n: usize) -> Result<Matrix<PolyRing>> {
    let f = build_f(n)?;
    companion_of(&f)
}

fn companion_of(f: &UPoly<PolyRing>) -> Result<Matrix<PolyRing>> {
    let n = f
        .degree()
        .ok_or_else(|| ExactError::InvalidInput("zero modulus".to_string()))?;
    if !f.is_monic() {
        return Err(ExactError::InvalidInput(
            "companion matrix needs a monic polynomial".to_string(),
        ));
    }
    let ring = PolyRing::int();
    Ok(Matrix::from_fn(ring, n, n, |i, j| {
        if j + 1 == n {
            -&f.coeff(i)
        } else if i == j + 1 {
            ring.one()
        } else {
            ring.zero()
        }
    }))
}

/// The exact matrix data of the subgroup: companion matrix, generators,
/// and their inverses.
pub struct TorusGenerators {
    n: usize,
    q: Vec<i64>,
    primes: Vec<i64>,
    f: UPoly<PolyRing>,
    companion: Matrix<PolyRing>,
    gens: Vec<Matrix<PolyRing>>,
    gens_inv: Vec<Matrix<PolyRing>>,
}

/// Exponent vector `m_1 .. m_(n-1)` of a word `prod a_i^(m_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordExponents(pub Vec<i64>);

impl WordExponents {
    pub fn zero(rank: usize) -> Self {
        WordExponents(vec![0; rank])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|m| *m == 0)
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for WordExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}

/// Builds the generators and verifies every construction identity exactly.
pub fn make_generators(n: usize) -> Result<TorusGenerators> {
    let q = q_sequence(n)?;
    let primes = prime_sequence(n)?;
    let f = build_f(n)?;
    let companion = companion_of(&f)?;
    let ring = *companion.ring();
    let identity = Matrix::identity(ring, n);

    // f(C_f) = 0 (Cayley-Hamilton for the companion matrix).
    let fc = f.eval_matrix(&companion)?;
    if fc != Matrix::zero(ring, n, n) {
        return Err(ExactError::ConstructionFailure("f(C_f) != 0".to_string()));
    }

    // prod_i (C_f + q_i t I) = I, the invertibility witness for each factor.
    let shifted: Vec<Matrix<PolyRing>> = q
        .iter()
        .map(|qi| {
            let shift = identity.scale(&Poly::from_int_coeffs([(1, *qi)]));
            companion.add(&shift)
        })
        .collect::<Result<_>>()?;
    let mut prod = identity.clone();
    for s in &shifted {
        prod = prod.mul(s)?;
    }
    if prod != identity {
        return Err(ExactError::ConstructionFailure(
            "prod (C_f + q_i t I) != I".to_string(),
        ));
    }

    let one = Poly::one(ring.tag);
    let mut gens = Vec::with_capacity(n - 1);
    let mut gens_inv = Vec::with_capacity(n - 1);
    for factor in shifted.iter().skip(1) {
        let d = factor.det()?;
        if !(d == one || d == -&one) {
            return Err(ExactError::ConstructionFailure(format!(
                "det(C_f + q t I) = {d}, expected a unit"
            )));
        }
        let a = factor.mul(factor)?;
        if a.det()? != one {
            return Err(ExactError::ConstructionFailure("det a_i != 1".to_string()));
        }
        let a_inv = a.inv_unimodular()?;
        if a.mul(&a_inv)? != identity {
            return Err(ExactError::ConstructionFailure("a_i * a_i^-1 != I".to_string()));
        }
        gens.push(a);
        gens_inv.push(a_inv);
    }

    for i in 0..gens.len() {
        for j in 0..i {
            if gens[i].mul(&gens[j])? != gens[j].mul(&gens[i])? {
                return Err(ExactError::ConstructionFailure(format!(
                    "a_{} and a_{} do not commute",
                    i + 1,
                    j + 1
                )));
            }
        }
    }

    Ok(TorusGenerators { n, q, primes, f, companion, gens, gens_inv })
}

impl TorusGenerators {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.n - 1
    }

    pub fn q(&self) -> &[i64] {
        &self.q
    }

    /// `p_i = q_(i+1) - 1`, the leading coefficient of the unsquared factor.
    pub fn primes(&self) -> &[i64] {
        &self.primes
    }

    pub fn modulus(&self) -> &UPoly<PolyRing> {
        &self.f
    }

    pub fn companion(&self) -> &Matrix<PolyRing> {
        &self.companion
    }

    pub fn generators(&self) -> &[Matrix<PolyRing>] {
        &self.gens
    }

    pub fn generator_inverses(&self) -> &[Matrix<PolyRing>] {
        &self.gens_inv
    }

    /// `prod_i a_i^(m_i)`, exact over Z[t]; negative exponents use the
    /// adjugate inverses.
    pub fn word_matrix(&self, m: &WordExponents) -> Result<Matrix<PolyRing>> {
        if m.0.len() != self.rank() {
            return Err(ExactError::DimensionMismatch(format!(
                "word has {} exponents, rank is {}",
                m.0.len(),
                self.rank()
            )));
        }
        let mut acc = Matrix::identity(*self.companion.ring(), self.n);
        for (i, e) in m.0.iter().enumerate() {
            let base = if *e >= 0 { &self.gens[i] } else { &self.gens_inv[i] };
            for _ in 0..e.unsigned_abs() {
                acc = acc.mul(base)?;
            }
        }
        Ok(acc)
    }

    /// Truncated eigen data for all branches at one working floor.
    pub fn eigen_frame(&self, floor: i64) -> Result<EigenFrame> {
        let mut roots = Vec::with_capacity(self.n);
        for branch in 1..=self.n {
            roots.push(lift_root(self.n, branch, floor)?);
        }
        // factor_sq[j][i] = (alpha_j + q_(i+1) t)^2 for generator i.
        let mut factor_sq = Vec::with_capacity(self.n);
        let mut factor_sq_inv = Vec::with_capacity(self.n);
        for root in &roots {
            let mut row = Vec::with_capacity(self.rank());
            let mut row_inv = Vec::with_capacity(self.rank());
            for qi in self.q.iter().skip(1) {
                let factor = root + &LaurentSeries::monomial(1, rat(*qi));
                let sq = &factor * &factor;
                row_inv.push(sq.inv()?);
                row.push(sq);
            }
            factor_sq.push(row);
            factor_sq_inv.push(row_inv);
        }
        Ok(EigenFrame {
            n: self.n,
            floor,
            primes: self.primes.clone(),
            roots,
            factor_sq,
            factor_sq_inv,
        })
    }
}

/// Per-floor eigenvalue machinery: truncated branch roots and the squared
/// factor series of each generator on each branch.
pub struct EigenFrame {
    n: usize,
    floor: i64,
    primes: Vec<i64>,
    roots: Vec<LaurentSeries>,
    factor_sq: Vec<Vec<LaurentSeries>>,
    factor_sq_inv: Vec<Vec<LaurentSeries>>,
}

/// Leading term of the branch-1 eigenvalue of a word, against the exact
/// prediction `prod p_i^(2 m_i) * t^(2 sum m_i)`. Unique factorization makes
/// the prediction equal `(1, t^0)` only for the empty word, so `nontrivial`
/// certifies the word is not the identity.
#[derive(Debug, Clone)]
pub struct LeadingCert {
    pub word: WordExponents,
    pub lead_exp: i64,
    pub lead_coeff: Rat,
    pub expected_exp: i64,
    pub expected_coeff: Rat,
    pub matches: bool,
    pub nontrivial: bool,
}

/// Evidence that a word's eigenvalue is not a rational constant: either a
/// nonzero valuation, or a visible nonzero coefficient at a negative
/// exponent. Either rules out every fixed point in the building.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NoFixedPointCert {
    NonzeroValuation { branch: usize, valuation: i64 },
    NonconstantTail { branch: usize, exponent: i64 },
}

impl EigenFrame {
    pub fn floor(&self) -> i64 {
        self.floor
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self, branch: usize) -> &LaurentSeries {
        &self.roots[branch - 1]
    }

    pub fn roots(&self) -> &[LaurentSeries] {
        &self.roots
    }

    /// `prod_i (alpha_branch + q_(i+1) t)^(2 m_i)`.
    pub fn eigenvalue_of_word(&self, m: &WordExponents, branch: usize) -> Result<LaurentSeries> {
        if m.0.len() != self.n - 1 {
            return Err(ExactError::DimensionMismatch("word rank mismatch".to_string()));
        }
        if branch == 0 || branch > self.n {
            return Err(ExactError::InvalidInput(format!("branch {branch} out of range")));
        }
        let mut acc = LaurentSeries::one();
        for (i, e) in m.0.iter().enumerate() {
            let base = if *e >= 0 {
                &self.factor_sq[branch - 1][i]
            } else {
                &self.factor_sq_inv[branch - 1][i]
            };
            for _ in 0..e.unsigned_abs() {
                acc = &acc * base;
            }
        }
        Ok(acc)
    }

    /// Eigenvalues on every branch at once.
    pub fn eigenvalues_of_word(&self, m: &WordExponents) -> Result<Vec<LaurentSeries>> {
        (1..=self.n).map(|b| self.eigenvalue_of_word(m, b)).collect()
    }

    /// Valuations of the eigenvalues across branches; sums to zero because
    /// the word has determinant one.
    pub fn valuation_vector(&self, m: &WordExponents) -> Result<Vec<i64>> {
        let mut out = Vec::with_capacity(self.n);
        for b in 1..=self.n {
            let mu = self.eigenvalue_of_word(m, b)?;
            match mu.val_bound() {
                ValBound::Exact(v) => out.push(v),
                other => {
                    return Err(ExactError::InsufficientPrecision(format!(
                        "eigenvalue valuation on branch {b} undecidable: {other:?}"
                    )))
                }
            }
        }
        Ok(out)
    }

    pub fn leading_term_certificate(&self, m: &WordExponents) -> Result<LeadingCert> {
        if m.is_zero() {
            return Err(ExactError::InvalidInput(
                "leading-term certificate needs a nonzero word".to_string(),
            ));
        }
        let mu = self.eigenvalue_of_word(m, 1)?;
        let (lead_exp, lead_coeff) = mu.leading().map(|(e, c)| (e, c.clone())).ok_or_else(|| {
            ExactError::InsufficientPrecision("eigenvalue has no visible term".to_string())
        })?;
        let mut expected_coeff = rat(1);
        for (p, e) in self.primes.iter().zip(&m.0) {
            expected_coeff *= rat(*p).pow((2 * e) as i32);
        }
        let expected_exp = 2 * m.sum();
        let matches = lead_exp == expected_exp && lead_coeff == expected_coeff;
        let nontrivial = !(expected_coeff == rat(1) && expected_exp == 0);
        Ok(LeadingCert {
            word: m.clone(),
            lead_exp,
            lead_coeff,
            expected_exp,
            expected_coeff,
            matches,
            nontrivial,
        })
    }

    /// Searches the branches for evidence that the word's eigenvalues are
    /// not all rational constants. A word fixing a point of the building
    /// would have algebraic -- hence constant rational -- eigenvalues, so a
    /// certificate here rules out every fixed point.
    pub fn fixes_no_point_certificate(&self, m: &WordExponents) -> Result<NoFixedPointCert> {
        if m.is_zero() {
            return Err(ExactError::InvalidInput(
                "the identity word fixes every point".to_string(),
            ));
        }
        let eigs = self.eigenvalues_of_word(m)?;
        no_fixed_point_from_eigenvalues(&eigs)
    }
}

/// Certificate search over precomputed eigenvalues (branch order 1..n).
/// A nonzero valuation on any branch is preferred; with every valuation
/// zero, a visible negative-exponent term still rules out constancy.
pub fn no_fixed_point_from_eigenvalues(eigs: &[LaurentSeries]) -> Result<NoFixedPointCert> {
    for (idx, mu) in eigs.iter().enumerate() {
        if let ValBound::Exact(v) = mu.val_bound() {
            if v != 0 {
                return Ok(NoFixedPointCert::NonzeroValuation { branch: idx + 1, valuation: v });
            }
        }
    }
    for (idx, mu) in eigs.iter().enumerate() {
        if let ValBound::Exact(0) = mu.val_bound() {
            if let Some((e, _)) = mu.iter().filter(|(e, _)| *e < 0).next_back() {
                return Ok(NoFixedPointCert::NonconstantTail { branch: idx + 1, exponent: e });
            }
        }
    }
    Err(ExactError::Inconclusive(
        "no branch shows a nonzero valuation or a negative-exponent term".to_string(),
    ))
}

/// Eigen data of one branch: the root, and the power vector
/// `(1, alpha, ..., alpha^(n-1))`, a left eigenvector of the companion
/// matrix (the companion here multiplies column coordinate vectors by `x`,
/// so the power vector acts from the left: `v C_f = alpha v`).
pub struct EigenData {
    pub branch: usize,
    pub root: LaurentSeries,
    pub eigenvector: Vec<LaurentSeries>,
}

/// Change of basis `g` with `g C_f g^-1 = diag(alpha_1, ..., alpha_n)` up to
/// the working floor; `g` is the row-Vandermonde of the branch roots and its
/// inverse columns are the right eigenvectors. Conjugation by `g`
/// simultaneously diagonalizes every word.
pub struct Diagonalizer {
    pub n: usize,
    pub floor: i64,
    pub eigen: Vec<EigenData>,
    pub g: Matrix<LaurentRing>,
    pub g_inv: Matrix<LaurentRing>,
}

pub fn diagonalizer(n: usize, floor: i64) -> Result<Diagonalizer> {
    if n < 2 {
        return Err(ExactError::InvalidInput("need n >= 2".to_string()));
    }
    let mut eigen = Vec::with_capacity(n);
    for branch in 1..=n {
        let root = lift_root(n, branch, floor)?;
        let mut eigenvector = Vec::with_capacity(n);
        let mut pow = LaurentSeries::one();
        for _ in 0..n {
            eigenvector.push(pow.clone());
            pow = &pow * &root;
        }
        eigen.push(EigenData { branch, root, eigenvector });
    }
    // Row i is the power vector of branch i+1.
    let g = Matrix::from_fn(LaurentRing, n, n, |i, j| eigen[i].eigenvector[j].clone());
    let g_inv = g.inv().map_err(|e| match e {
        ExactError::SingularMatrix => ExactError::InsufficientPrecision(
            "root Vandermonde not invertible at this floor".to_string(),
        ),
        other => other,
    })?;
    Ok(Diagonalizer { n, floor, eigen, g, g_inv })
}

impl Diagonalizer {
    /// `g M g^-1` for an exact polynomial matrix.
    pub fn conjugate_poly(&self, m: &Matrix<PolyRing>) -> Result<Matrix<LaurentRing>> {
        let ml = m.map(LaurentRing, LaurentSeries::from_poly);
        self.conjugate(&ml)
    }

    pub fn conjugate(&self, m: &Matrix<LaurentRing>) -> Result<Matrix<LaurentRing>> {
        self.g.mul(m)?.mul(&self.g_inv)
    }

    /// Weakest certified valuation bound over the off-diagonal entries.
    pub fn off_diagonal_bound(conj: &Matrix<LaurentRing>) -> ValBound {
        let mut worst = ValBound::Infinite;
        for i in 0..conj.rows() {
            for j in 0..conj.cols() {
                if i == j {
                    continue;
                }
                worst = weaker_bound(worst, conj.get(i, j).val_bound());
            }
        }
        worst
    }
}

fn weaker_bound(a: ValBound, b: ValBound) -> ValBound {
    let key = |v: &ValBound| match v {
        ValBound::Infinite => i64::MAX,
        ValBound::Exact(x) | ValBound::AtLeast(x) => *x,
    };
    if key(&b) < key(&a) {
        b
    } else {
        a
    }
}

/// Convenience wrappers matching the operation names used in reports.
pub fn word_matrix(gens: &TorusGenerators, m: &WordExponents) -> Result<Matrix<PolyRing>> {
    gens.word_matrix(m)
}

pub fn eigenvalue_of_word(
    n: usize,
    m: &WordExponents,
    branch: usize,
    floor: i64,
) -> Result<LaurentSeries> {
    make_generators(n)?.eigen_frame(floor)?.eigenvalue_of_word(m, branch)
}

pub fn fixes_no_point_certificate(
    n: usize,
    m: &WordExponents,
    floor: i64,
) -> Result<NoFixedPointCert> {
    make_generators(n)?.eigen_frame(floor)?.fixes_no_point_certificate(m)
}

/// Leading term `(exponent, coefficient)` of an eigenvalue. Leading terms
/// multiply exactly -- the visible leading term of a truncated series is
/// the true one, and products cannot cancel it -- so the scan can carry
/// them instead of whole series.
pub type LeadingTerm = (i64, Rat);

/// Enumerates all words with `|m_i| <= bound`, reusing partial products:
/// one matrix multiplication and one leading-term multiplication per
/// branch per visited node. `visit` receives the exponents, the exact word
/// matrix, and the eigenvalue leading term on every branch.
pub fn scan_words(
    gens: &TorusGenerators,
    frame: &EigenFrame,
    bound: i64,
    visit: &mut dyn FnMut(&WordExponents, &Matrix<PolyRing>, &[LeadingTerm]) -> Result<()>,
) -> Result<()> {
    let rank = gens.rank();
    let n = gens.n();
    // Power tables: mat_pow[i][e + bound] = a_i^e, and per branch the
    // leading terms of the squared eigen factor powers.
    let mut mat_pow: Vec<Vec<Matrix<PolyRing>>> = Vec::with_capacity(rank);
    let mut lead_pow: Vec<Vec<Vec<LeadingTerm>>> = Vec::with_capacity(rank);
    for i in 0..rank {
        let mut mats = Vec::with_capacity((2 * bound + 1) as usize);
        for e in -bound..=bound {
            let m = if e >= 0 {
                gens.generators()[i].pow(e as usize)?
            } else {
                gens.generator_inverses()[i].pow(e.unsigned_abs() as usize)?
            };
            mats.push(m);
        }
        mat_pow.push(mats);
        let mut rows = Vec::with_capacity(n);
        for b in 0..n {
            let (fe, fc) = frame.factor_sq[b][i].leading().ok_or_else(|| {
                ExactError::InsufficientPrecision("eigen factor has no visible term".to_string())
            })?;
            let mut leads = Vec::with_capacity((2 * bound + 1) as usize);
            for e in -bound..=bound {
                let exp = fe * e;
                let coeff = if e >= 0 {
                    fc.pow(e as i32)
                } else {
                    fc.recip().pow((-e) as i32)
                };
                leads.push((exp, coeff));
            }
            rows.push(leads);
        }
        lead_pow.push(rows);
    }

    struct Dfs<'a> {
        rank: usize,
        n: usize,
        bound: i64,
        mat_pow: &'a [Vec<Matrix<PolyRing>>],
        lead_pow: &'a [Vec<Vec<LeadingTerm>>],
    }

    impl Dfs<'_> {
        fn rec(
            &self,
            pos: usize,
            exps: &mut Vec<i64>,
            mat: &Matrix<PolyRing>,
            leads: &[LeadingTerm],
            visit: &mut dyn FnMut(
                &WordExponents,
                &Matrix<PolyRing>,
                &[LeadingTerm],
            ) -> Result<()>,
        ) -> Result<()> {
            if pos == self.rank {
                return visit(&WordExponents(exps.clone()), mat, leads);
            }
            for e in -self.bound..=self.bound {
                let idx = (e + self.bound) as usize;
                let m2 = mat.mul(&self.mat_pow[pos][idx])?;
                let mut leads2 = Vec::with_capacity(self.n);
                for (b, (le, lc)) in leads.iter().enumerate() {
                    let (pe, pc) = &self.lead_pow[pos][b][idx];
                    leads2.push((le + pe, lc * pc));
                }
                exps.push(e);
                self.rec(pos + 1, exps, &m2, &leads2, visit)?;
                exps.pop();
            }
            Ok(())
        }
    }

    let dfs = Dfs { rank, n, bound, mat_pow: &mat_pow, lead_pow: &lead_pow };
    let mat0 = Matrix::identity(*gens.companion().ring(), n);
    let lead0 = vec![(0i64, rat(1)); n];
    dfs.rec(0, &mut Vec::new(), &mat0, &lead0, visit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::ratq;
    use crate::rootlift::default_floor;

    #[test]
    fn companion_n2_matches_reduction() {
        // x^2 = -4t x - (3t^2 - 1) mod f_2
        let c = companion_matrix(2).unwrap();
        assert_eq!(*c.get(0, 0), Poly::zero(crate::exactfield::RingTag::Int));
        assert_eq!(*c.get(0, 1), Poly::from_int_coeffs([(2, -3), (0, 1)]));
        assert_eq!(*c.get(1, 0), Poly::one(crate::exactfield::RingTag::Int));
        assert_eq!(*c.get(1, 1), Poly::from_int_coeffs([(1, -4)]));
    }

    #[test]
    fn char_poly_is_plus_minus_f() {
        for n in 2..=5 {
            let c = companion_matrix(n).unwrap();
            let cp = c.char_poly().unwrap();
            let f = build_f(n).unwrap();
            assert!(cp == f || cp == f.neg(), "n={n}");
        }
    }

    #[test]
    fn cayley_hamilton_exact() {
        for n in 2..=5 {
            let c = companion_matrix(n).unwrap();
            let f = build_f(n).unwrap();
            let z = f.eval_matrix(&c).unwrap();
            assert_eq!(z, Matrix::zero(*c.ring(), n, n));
        }
    }

    #[test]
    fn generators_verify() {
        for n in 2..=4 {
            let gens = make_generators(n).unwrap();
            assert_eq!(gens.generators().len(), n - 1);
        }
    }

    #[test]
    fn word_of_zero_is_identity() {
        let gens = make_generators(3).unwrap();
        let w = gens.word_matrix(&WordExponents::zero(2)).unwrap();
        assert_eq!(w, Matrix::identity(*gens.companion().ring(), 3));
    }

    #[test]
    fn single_generator_word() {
        let gens = make_generators(2).unwrap();
        let w = gens.word_matrix(&WordExponents(vec![1])).unwrap();
        assert_eq!(&w, &gens.generators()[0]);
    }

    #[test]
    fn small_nonzero_words_are_not_identity() {
        let gens = make_generators(3).unwrap();
        let id = Matrix::identity(*gens.companion().ring(), 3);
        for m1 in -2..=2i64 {
            for m2 in -2..=2i64 {
                if m1 == 0 && m2 == 0 {
                    continue;
                }
                let w = gens.word_matrix(&WordExponents(vec![m1, m2])).unwrap();
                assert_ne!(w, id, "word ({m1},{m2})");
            }
        }
    }

    #[test]
    fn leading_certificates_n3() {
        let gens = make_generators(3).unwrap();
        let frame = gens.eigen_frame(default_floor(3)).unwrap();
        // p_1 = 2 squared
        let c = frame.leading_term_certificate(&WordExponents(vec![1, 0])).unwrap();
        assert!(c.matches && c.nontrivial);
        assert_eq!((c.lead_exp, c.lead_coeff.clone()), (2, rat(4)));
        // p_2 = 3 squared
        let c = frame.leading_term_certificate(&WordExponents(vec![0, 1])).unwrap();
        assert!(c.matches && c.nontrivial);
        assert_eq!((c.lead_exp, c.lead_coeff.clone()), (2, rat(9)));
        // ratio lands at exponent 0 with coefficient 4/9
        let c = frame.leading_term_certificate(&WordExponents(vec![1, -1])).unwrap();
        assert!(c.matches && c.nontrivial);
        assert_eq!((c.lead_exp, c.lead_coeff.clone()), (0, ratq(4, 9)));
    }

    #[test]
    fn eigenvalue_valuations_n2() {
        let gens = make_generators(2).unwrap();
        let frame = gens.eigen_frame(default_floor(2)).unwrap();
        let m = WordExponents(vec![1]);
        let mu1 = frame.eigenvalue_of_word(&m, 1).unwrap();
        assert_eq!(mu1.leading().map(|(e, c)| (e, c.clone())), Some((2, rat(4))));
        let mu2 = frame.eigenvalue_of_word(&m, 2).unwrap();
        assert_eq!(mu2.leading().map(|(e, c)| (e, c.clone())), Some((-2, ratq(1, 4))));
        // the two branch values multiply to 1 within precision
        let prod = &mu1 * &mu2;
        assert!((&prod - &LaurentSeries::one()).stored_is_empty());
    }

    #[test]
    fn eigenvalue_of_empty_word_is_one() {
        let gens = make_generators(3).unwrap();
        let frame = gens.eigen_frame(default_floor(3)).unwrap();
        for b in 1..=3 {
            let mu = frame.eigenvalue_of_word(&WordExponents::zero(2), b).unwrap();
            assert_eq!(mu, LaurentSeries::one());
        }
    }

    #[test]
    fn eigenvalue_product_over_branches_is_one() {
        let gens = make_generators(3).unwrap();
        let frame = gens.eigen_frame(default_floor(3)).unwrap();
        let m = WordExponents(vec![2, -1]);
        let mut prod = LaurentSeries::one();
        for b in 1..=3 {
            prod = &prod * &frame.eigenvalue_of_word(&m, b).unwrap();
        }
        assert!((&prod - &LaurentSeries::one()).stored_is_empty());
    }

    #[test]
    fn valuation_vector_sums_to_zero() {
        let gens = make_generators(3).unwrap();
        let frame = gens.eigen_frame(default_floor(3)).unwrap();
        for m in [vec![1, 0], vec![0, 1], vec![1, -1], vec![2, 3], vec![-1, -2]] {
            let v = frame.valuation_vector(&WordExponents(m)).unwrap();
            assert_eq!(v.iter().sum::<i64>(), 0, "valuations {v:?}");
        }
    }

    #[test]
    fn diagonalizer_diagonalizes_companion() {
        for n in 2..=3usize {
            let d = diagonalizer(n, default_floor(n)).unwrap();
            let c = companion_matrix(n).unwrap();
            let conj = d.conjugate_poly(&c).unwrap();
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        assert!(conj.get(i, i).agrees_with(&d.eigen[i].root), "diagonal n={n}");
                    } else {
                        assert!(conj.get(i, j).stored_is_empty(), "off-diagonal n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn diagonalizer_kills_generator_off_diagonals() {
        let n = 3;
        let d = diagonalizer(n, default_floor(n)).unwrap();
        let gens = make_generators(n).unwrap();
        for a in gens.generators() {
            let conj = d.conjugate_poly(a).unwrap();
            let bound = Diagonalizer::off_diagonal_bound(&conj);
            assert!(bound.certifies_at_least(20), "off-diagonal bound {bound:?}");
        }
    }

    #[test]
    fn conjugating_identity_gives_identity() {
        let d = diagonalizer(2, default_floor(2)).unwrap();
        let id = Matrix::identity(PolyRing::int(), 2);
        let conj = d.conjugate_poly(&id).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                if i == j {
                    assert!((&LaurentSeries::one() - conj.get(i, j)).stored_is_empty());
                } else {
                    assert!(conj.get(i, j).stored_is_empty());
                }
            }
        }
    }

    #[test]
    fn eigenvector_relation_holds() {
        // power vectors are left eigenvectors: v C = alpha v, i.e. C^T v = alpha v
        let n = 3;
        let d = diagonalizer(n, default_floor(n)).unwrap();
        let ct = companion_matrix(n)
            .unwrap()
            .map(LaurentRing, LaurentSeries::from_poly)
            .transpose();
        for e in &d.eigen {
            let cv = ct.mul_vec(&e.eigenvector).unwrap();
            for (i, entry) in cv.iter().enumerate() {
                let expect = &e.root * &e.eigenvector[i];
                assert!(entry.agrees_with(&expect), "branch {} row {i}", e.branch);
            }
        }
    }

    #[test]
    fn g_inverse_columns_are_right_eigenvectors() {
        let n = 3;
        let d = diagonalizer(n, default_floor(n)).unwrap();
        let c = companion_matrix(n).unwrap().map(LaurentRing, LaurentSeries::from_poly);
        for j in 0..n {
            let col: Vec<_> = (0..n).map(|i| d.g_inv.get(i, j).clone()).collect();
            let cv = c.mul_vec(&col).unwrap();
            for (i, entry) in cv.iter().enumerate() {
                let expect = &d.eigen[j].root * &col[i];
                assert!(entry.agrees_with(&expect), "column {j} row {i}");
            }
        }
    }

    #[test]
    fn no_fixed_point_certificates() {
        let gens = make_generators(2).unwrap();
        let frame = gens.eigen_frame(default_floor(2)).unwrap();
        let c = frame.fixes_no_point_certificate(&WordExponents(vec![1])).unwrap();
        assert_eq!(c, NoFixedPointCert::NonzeroValuation { branch: 1, valuation: -2 });

        let gens = make_generators(3).unwrap();
        let frame = gens.eigen_frame(default_floor(3)).unwrap();
        let c = frame.fixes_no_point_certificate(&WordExponents(vec![1, -1])).unwrap();
        assert!(matches!(c, NoFixedPointCert::NonzeroValuation { .. }));

        assert!(frame.fixes_no_point_certificate(&WordExponents(vec![0, 0])).is_err());
    }

    #[test]
    fn scan_words_visits_full_cube() {
        let gens = make_generators(2).unwrap();
        let frame = gens.eigen_frame(default_floor(2)).unwrap();
        let mut seen = Vec::new();
        scan_words(&gens, &frame, 2, &mut |m, mat, leads| {
            // spot-check consistency with the direct computations
            assert_eq!(*mat, gens.word_matrix(m).unwrap());
            for b in 1..=2usize {
                let mu = frame.eigenvalue_of_word(m, b).unwrap();
                let (e, c) = mu.leading().map(|(e, c)| (e, c.clone())).unwrap();
                assert_eq!(leads[b - 1], (e, c), "word {m} branch {b}");
            }
            seen.push(m.clone());
            Ok(())
        })
        .unwrap();
        assert_eq!(seen.len(), 5);
    }
}
