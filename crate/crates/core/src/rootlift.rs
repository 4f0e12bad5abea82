//! Construction of the marker polynomial `f(x) = prod(x + q_i t) - 1` over
//! Z[t] and expansion of all `n` of its roots as Laurent series in `t^-1`.
//!
//! The root on branch `k` has the shape `sum_i c_i t^(1-in)` with leading
//! term `-q_k t`. Coefficient `c_m` is pinned down by one linear equation:
//! the level-`m` coefficient of `prod_k (alpha + q_k t)` must match the
//! constant series 1. The linear coefficient of `c_m` equals
//! `prod_{j != k} (q_j - q_k)`, which is nonzero because the `q_i` are
//! pairwise distinct; this is asserted at every step rather than assumed.

use num_traits::Zero;

use crate::error::{ExactError, Result};
use crate::exactfield::{rat, LaurentSeries, Poly, PolyRing, Rat, UPoly, ValBound};

/// `q_1 = 1`, `q_i = p_(i-1) + 1` for the i-th entry (`p_j` the j-th prime).
pub fn q_sequence(n: usize) -> Result<Vec<i64>> {
    if n < 2 {
        return Err(ExactError::InvalidInput(format!("need n >= 2, got {n}")));
    }
    let mut q = Vec::with_capacity(n);
    q.push(1);
    let mut p = 2i64;
    for _ in 1..n {
        q.push(p + 1);
        p = next_prime(p);
    }
    Ok(q)
}

/// Primes shifted down from the q-sequence: `p_i = q_(i+1) - 1`.
pub fn prime_sequence(n: usize) -> Result<Vec<i64>> {
    Ok(q_sequence(n)?.iter().skip(1).map(|q| q - 1).collect())
}

fn next_prime(p: i64) -> i64 {
    let mut c = p + 1;
    loop {
        if is_prime(c) {
            return c;
        }
        c += 1;
    }
}

fn is_prime(x: i64) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= x {
        if x % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The monic degree-n polynomial `prod_i (x + q_i t) - 1` in x over Z[t].
pub fn build_f(n: usize) -> Result<UPoly<PolyRing>> {
    let q = q_sequence(n)?;
    let ring = PolyRing::int();
    let mut f = UPoly::one(ring);
    for qi in &q {
        let factor = UPoly::new(ring, vec![Poly::from_int_coeffs([(1, *qi)]), Poly::one(ring.tag)]);
        f = f.mul(&factor);
    }
    Ok(f.sub(&UPoly::one(ring)))
}

/// State of the coefficient recursion for one root branch.
pub struct RootLiftState {
    n: usize,
    branch: usize,
    q: Vec<i64>,
    /// q-sequence with the branch entry moved to the front.
    sigma: Vec<i64>,
    target_floor: i64,
    /// `c_0 .. c_M`, `c_0 = -q_branch`.
    coeffs: Vec<Rat>,
}

impl RootLiftState {
    /// Runs the recursion for the given branch down to `floor <= 1 - n`.
    pub fn run(n: usize, branch: usize, floor: i64) -> Result<Self> {
        let q = q_sequence(n)?;
        if branch == 0 || branch > n {
            return Err(ExactError::InvalidInput(format!(
                "branch {branch} out of range 1..={n}"
            )));
        }
        if floor > 1 - n as i64 {
            return Err(ExactError::InvalidInput(format!(
                "floor {floor} too shallow; need floor <= {}",
                1 - n as i64
            )));
        }
        let mut sigma = Vec::with_capacity(n);
        sigma.push(q[branch - 1]);
        sigma.extend(q.iter().enumerate().filter(|(i, _)| *i != branch - 1).map(|(_, v)| *v));

        // Highest coefficient index whose exponent 1 - i*n still clears the floor.
        let steps = ((1 - floor) / n as i64) as usize;

        let qb = q[branch - 1];
        // u_k[0] = sigma_k - q_branch; u_k[m] = c_m for every k when m >= 1.
        let u0: Vec<Rat> = sigma.iter().map(|s| rat(s - qb)).collect();

        // Prefix convolutions P_k = u_1 * ... * u_k, filled row by row.
        // prefix[k][j] is the level-j coefficient of the k-factor product.
        let mut prefix: Vec<Vec<Rat>> = vec![Vec::with_capacity(steps + 1); n + 1];
        prefix[0].push(rat(1));
        for k in 1..=n {
            let head = &prefix[k - 1][0] * &u0[k - 1];
            prefix[k].push(head);
        }
        let mut coeffs = vec![rat(-qb)];

        for m in 1..=steps {
            prefix[0].push(rat(0));
            // Row m of each prefix as a linear function a + b*c_m.
            let mut lin: Vec<(Rat, Rat)> = Vec::with_capacity(n + 1);
            lin.push((rat(0), rat(0))); // P_0[m] = 0 for m >= 1
            for k in 1..=n {
                let (pa, pb) = &lin[k - 1];
                let mut a = pa * &u0[k - 1];
                let mut b = pb * &u0[k - 1];
                // P_{k-1}[0] multiplies the unknown u_k[m] = c_m.
                b += prefix[k - 1][0].clone();
                for j in 1..m {
                    // u_k[m - j] = c_{m-j}, already known.
                    a += &prefix[k - 1][j] * &coeffs[m - j];
                }
                lin.push((a, b));
            }
            let (a_n, b_n) = lin[n].clone();
            if b_n.is_zero() {
                return Err(ExactError::DegenerateRecursion { step: m });
            }
            let rhs = if m == 1 { rat(1) } else { rat(0) };
            let cm = (&rhs - &a_n) / &b_n;
            for k in 1..=n {
                let (a, b) = &lin[k];
                let val = a + &(b * &cm);
                prefix[k].push(val);
            }
            debug_assert_eq!(prefix[n][m], rhs);
            coeffs.push(cm);
        }

        Ok(RootLiftState { n, branch, q, sigma, target_floor: floor, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn branch(&self) -> usize {
        self.branch
    }

    pub fn q(&self) -> &[i64] {
        &self.q
    }

    pub fn permuted_q(&self) -> &[i64] {
        &self.sigma
    }

    pub fn target_floor(&self) -> i64 {
        self.target_floor
    }

    pub fn coefficients(&self) -> &[Rat] {
        &self.coeffs
    }

    /// The truncated root `sum_i c_i t^(1-in)` with the requested floor.
    pub fn series(&self) -> LaurentSeries {
        let n = self.n as i64;
        LaurentSeries::from_terms(
            self.coeffs.iter().enumerate().map(|(i, c)| (1 - (i as i64) * n, c.clone())),
            Some(self.target_floor),
        )
    }
}

/// Expands the branch-k root of `f_n` to the requested floor.
pub fn lift_root(n: usize, branch: usize, floor: i64) -> Result<LaurentSeries> {
    Ok(RootLiftState::run(n, branch, floor)?.series())
}

/// Default floor giving forty coefficients per root.
pub fn default_floor(n: usize) -> i64 {
    1 - n as i64 - 40 * n as i64
}

/// Valuation information for `f(alpha)` evaluated in truncated Laurent
/// arithmetic (the brute-force residual oracle). For a correctly lifted
/// root every computable term cancels and only the tail bound remains.
pub fn residual_valuation(alpha: &LaurentSeries, n: usize) -> Result<ValBound> {
    let q = q_sequence(n)?;
    let mut prod = LaurentSeries::one();
    for qi in &q {
        let factor = alpha + &LaurentSeries::monomial(1, rat(*qi));
        prod = &prod * &factor;
    }
    Ok((&prod - &LaurentSeries::one()).val_bound())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::ratq;

    #[test]
    fn q_sequence_examples() {
        assert_eq!(q_sequence(2).unwrap(), vec![1, 3]);
        assert_eq!(q_sequence(4).unwrap(), vec![1, 3, 4, 6]);
        assert_eq!(q_sequence(6).unwrap(), vec![1, 3, 4, 6, 8, 12]);
        assert!(q_sequence(1).is_err());
    }

    #[test]
    fn q_sequence_pairwise_distinct() {
        for n in 2..=10 {
            let q = q_sequence(n).unwrap();
            for i in 0..n {
                for j in 0..i {
                    assert_ne!(q[i], q[j], "q must be pairwise distinct");
                }
            }
            assert!(q.iter().all(|&x| x > 0));
        }
    }

    #[test]
    fn build_f_n2_expands() {
        // (x + t)(x + 3t) - 1 = x^2 + 4t x + 3t^2 - 1
        let f = build_f(2).unwrap();
        assert_eq!(f.degree(), Some(2));
        assert_eq!(f.coeff(2), Poly::one(crate::exactfield::RingTag::Int));
        assert_eq!(f.coeff(1), Poly::from_int_coeffs([(1, 4)]));
        assert_eq!(f.coeff(0), Poly::from_int_coeffs([(2, 3), (0, -1)]));
    }

    #[test]
    fn build_f_vieta_endpoints() {
        for n in 2..=6 {
            let f = build_f(n).unwrap();
            let q = q_sequence(n).unwrap();
            assert!(f.is_monic());
            let prod_q: i64 = q.iter().product();
            assert_eq!(
                f.coeff(0),
                Poly::from_int_coeffs([(n as u32, prod_q), (0, -1)]),
                "constant coefficient is prod(q_i) t^n - 1"
            );
        }
    }

    #[test]
    fn build_f_vanishing_factor() {
        // f(-q_1 t) = -1 exactly
        for n in 2..=5 {
            let f = build_f(n).unwrap();
            let arg = Poly::from_int_coeffs([(1, -1)]); // -t, q_1 = 1
            let val = f.eval(&arg);
            assert_eq!(val, Poly::from_int_coeffs([(0, -1)]));
        }
    }

    #[test]
    fn branch_leading_coefficients() {
        for n in 2..=5 {
            let q = q_sequence(n).unwrap();
            for branch in 1..=n {
                let st = RootLiftState::run(n, branch, 1 - 3 * n as i64).unwrap();
                assert_eq!(st.coefficients()[0], rat(-q[branch - 1]));
                let s = st.series();
                assert_eq!(s.coeff(1), Some(rat(-q[branch - 1])));
            }
        }
    }

    #[test]
    fn n2_branch1_frozen_coefficients() {
        // Oracle-derived: substituting the series into f_2 forces
        // c_1 = 1/2 and c_2 = -1/8 (and c_3 = 1/16 one step further).
        let st = RootLiftState::run(2, 1, -9).unwrap();
        let c = st.coefficients();
        assert_eq!(c[0], rat(-1));
        assert_eq!(c[1], ratq(1, 2));
        assert_eq!(c[2], ratq(-1, 8));
        assert_eq!(c[3], ratq(1, 16));
    }

    #[test]
    fn residuals_certify_all_branches() {
        for n in 2..=5usize {
            let floor = 1 - n as i64 - 8 * n as i64;
            for branch in 1..=n {
                let alpha = lift_root(n, branch, floor).unwrap();
                let r = residual_valuation(&alpha, n).unwrap();
                let needed = -floor - n as i64;
                assert!(
                    r.certifies_at_least(needed),
                    "n={n} branch={branch}: residual {r:?} below {needed}"
                );
            }
        }
    }

    #[test]
    fn residual_of_bare_leading_term() {
        // alpha = -q_1 t with no tail: f(alpha) = -1, valuation 0
        let alpha = LaurentSeries::monomial(1, rat(-1));
        assert_eq!(residual_valuation(&alpha, 3).unwrap(), ValBound::Exact(0));
    }

    #[test]
    fn residual_of_zero() {
        // f(0) = prod(q_i) t^n - 1, valuation -n
        for n in 2..=4 {
            let r = residual_valuation(&LaurentSeries::zero(), n).unwrap();
            assert_eq!(r, ValBound::Exact(-(n as i64)));
        }
    }

    #[test]
    fn deeper_floor_preserves_prefix() {
        for n in [2usize, 3] {
            let shallow = RootLiftState::run(n, 1, 1 - 6 * n as i64).unwrap();
            let deep = RootLiftState::run(n, 1, 1 - 12 * n as i64).unwrap();
            let k = shallow.coefficients().len();
            assert_eq!(&deep.coefficients()[..k], shallow.coefficients());
        }
    }

    #[test]
    fn branch_product_is_one_within_floor() {
        // prod_k (alpha^(1) + q_k t) = 1 + tail below floor
        for n in 2..=4usize {
            let floor = 1 - n as i64 - 10 * n as i64;
            let alpha = lift_root(n, 1, floor).unwrap();
            let q = q_sequence(n).unwrap();
            let mut prod = LaurentSeries::one();
            for qi in &q {
                prod = &prod * &(&alpha + &LaurentSeries::monomial(1, rat(*qi)));
            }
            let diff = &prod - &LaurentSeries::one();
            assert!(diff.stored_is_empty(), "n={n}: residual {diff}");
        }
    }

    #[test]
    fn vieta_sum_and_product_across_branches() {
        for n in 2..=4usize {
            let floor = 1 - n as i64 - 10 * n as i64;
            let roots: Vec<_> =
                (1..=n).map(|b| lift_root(n, b, floor).unwrap()).collect();
            let q = q_sequence(n).unwrap();

            let mut sum = LaurentSeries::zero();
            for r in &roots {
                sum = &sum + r;
            }
            let q_total: i64 = q.iter().sum();
            let expect_sum = LaurentSeries::monomial(1, rat(-q_total));
            assert!((&sum - &expect_sum).stored_is_empty());

            let mut prod = LaurentSeries::one();
            for r in &roots {
                prod = &prod * r;
            }
            // constant term of f is prod(q) t^n - 1; product of roots is
            // (-1)^n times it.
            let q_prod: i64 = q.iter().product();
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let expect_prod = LaurentSeries::from_terms(
                [(n as i64, rat(sign * q_prod)), (0, rat(-sign))],
                None,
            );
            assert!((&prod - &expect_prod).stored_is_empty());
        }
    }

    #[test]
    fn distinct_branches_have_distinct_leading_terms() {
        let n = 5;
        let roots: Vec<_> = (1..=n).map(|b| lift_root(n, b, 1 - 3 * n as i64).unwrap()).collect();
        for i in 0..n {
            for j in 0..i {
                let d = &roots[i] - &roots[j];
                assert_eq!(d.top_exponent(), Some(1), "leading terms differ at t^1");
            }
        }
    }
}
