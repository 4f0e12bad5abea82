//! Integer simplicial homology via Smith normal form of boundary matrices.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{ExactError, Result};

/// Dense integer matrix, just big enough for boundary computations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(ExactError::DimensionMismatch("integer matrix product".to_string()));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    if !add.is_zero() {
                        let cur = out.get(i, j) + add;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Invariant factors (positive, each dividing the next). The rank is
    /// their count.
    pub fn smith_invariants(&self) -> Vec<BigUint> {
        let mut m = self.clone();
        let mut diag: Vec<BigInt> = Vec::new();
        let mut top = 0usize;
        let mut left = 0usize;
        while top < m.rows && left < m.cols {
            // Pick the nonzero entry of smallest magnitude as pivot.
            let mut pivot: Option<(usize, usize)> = None;
            for i in top..m.rows {
                for j in left..m.cols {
                    if !m.get(i, j).is_zero() {
                        let better = match pivot {
                            None => true,
                            Some((pi, pj)) => m.get(i, j).abs() < m.get(pi, pj).abs(),
                        };
                        if better {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            m.swap_rows(top, pi);
            m.swap_cols(left, pj);
            // Clear the pivot row and column; restarts happen when a
            // division leaves a smaller remainder to pivot on.
            let mut clean = true;
            for i in (top + 1)..m.rows {
                let q = div_round(m.get(i, left), m.get(top, left));
                if !q.is_zero() {
                    m.row_sub(i, top, &q);
                }
                if !m.get(i, left).is_zero() {
                    clean = false;
                }
            }
            for j in (left + 1)..m.cols {
                let q = div_round(m.get(top, j), m.get(top, left));
                if !q.is_zero() {
                    m.col_sub(j, left, &q);
                }
                if !m.get(top, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            diag.push(m.get(top, left).abs());
            top += 1;
            left += 1;
        }
        // Enforce the divisibility chain d_i | d_(i+1).
        loop {
            let mut changed = false;
            for i in 1..diag.len() {
                let (a, b) = (diag[i - 1].clone(), diag[i].clone());
                if !(&b % &a).is_zero() {
                    let g = a.gcd(&b);
                    let l = &a * &b / &g;
                    diag[i - 1] = g;
                    diag[i] = l;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        diag.into_iter().map(|d| d.to_biguint().expect("abs")).collect()
    }

    pub fn rank(&self) -> usize {
        self.smith_invariants().len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn row_sub(&mut self, i: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(i, j) - q * self.get(src, j);
            self.set(i, j, v);
        }
    }

    fn col_sub(&mut self, j: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, j) - q * self.get(i, src);
            self.set(i, j, v);
        }
    }
}

/// Rounded division keeps pivot growth in check.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if r.abs() * BigInt::from(2) > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + BigInt::one()
        } else {
            q - BigInt::one()
        }
    } else {
        q
    }
}

/// Finitely generated abelian group descriptor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<BigUint>,
}

impl HomologyGroup {
    pub fn free(rank: usize) -> Self {
        HomologyGroup { rank, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Chain complex of free abelian groups with integer boundary matrices;
/// `boundary[d]` maps degree-d chains to degree d-1 (so it has
/// `dims[d-1]` rows and `dims[d]` columns).
pub struct ChainComplex {
    dims: Vec<usize>,
    boundaries: Vec<IntMatrix>, // boundaries[d] defined for d in 1..dims.len()
}

impl ChainComplex {
    pub fn new(dims: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        if boundaries.len() + 1 != dims.len().max(1) {
            return Err(ExactError::DimensionMismatch(format!(
                "{} boundary maps for {} chain groups",
                boundaries.len(),
                dims.len()
            )));
        }
        for (d, b) in boundaries.iter().enumerate() {
            let d = d + 1;
            if b.rows() != dims[d - 1] || b.cols() != dims[d] {
                return Err(ExactError::DimensionMismatch(format!(
                    "boundary {d} is {}x{}, expected {}x{}",
                    b.rows(),
                    b.cols(),
                    dims[d - 1],
                    dims[d]
                )));
            }
        }
        Ok(ChainComplex { dims, boundaries })
    }

    pub fn top_dimension(&self) -> usize {
        self.dims.len().saturating_sub(1)
    }

    pub fn dim_count(&self, d: usize) -> usize {
        self.dims.get(d).copied().unwrap_or(0)
    }

    pub fn boundary(&self, d: usize) -> Option<&IntMatrix> {
        if d == 0 || d >= self.dims.len() {
            None
        } else {
            Some(&self.boundaries[d - 1])
        }
    }

    /// `boundary . boundary = 0` in every degree.
    pub fn boundary_squares_to_zero(&self) -> Result<bool> {
        for d in 2..self.dims.len() {
            let prod = self.boundaries[d - 2].mul(&self.boundaries[d - 1])?;
            if !prod.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn rank_of_boundary(&self, d: usize) -> usize {
        self.boundary(d).map(|b| b.rank()).unwrap_or(0)
    }

    /// Ordinary integer homology in degree d.
    pub fn homology(&self, d: usize) -> HomologyGroup {
        let dim = self.dim_count(d);
        if dim == 0 {
            return HomologyGroup::free(0);
        }
        let rank_out = self.rank_of_boundary(d);
        let rank_in = self.rank_of_boundary(d + 1);
        let torsion = self
            .boundary(d + 1)
            .map(|b| {
                b.smith_invariants()
                    .into_iter()
                    .filter(|x| !x.is_one())
                    .collect()
            })
            .unwrap_or_default();
        HomologyGroup { rank: dim - rank_out - rank_in, torsion }
    }

    /// Reduced homology: degree 0 quotients by the image of the
    /// augmentation, i.e. the rank drops by one on a nonempty complex.
    pub fn reduced_homology(&self, d: usize) -> HomologyGroup {
        let mut h = self.homology(d);
        if d == 0 && self.dim_count(0) > 0 {
            h.rank -= 1;
        }
        h
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(d, n)| if d % 2 == 0 { *n as i64 } else { -(*n as i64) })
            .sum()
    }
}

/// Finite abstract simplicial complex with deterministic cell ordering.
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    /// by_dim[d] lists the d-simplices as sorted vertex tuples, in
    /// lexicographic order.
    by_dim: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// Builds the closure of a set of maximal simplices.
    pub fn from_maximal<I: IntoIterator<Item = Vec<usize>>>(maximal: I) -> Self {
        let mut seen: Vec<std::collections::BTreeSet<Vec<usize>>> = Vec::new();
        for s in maximal {
            let mut v = s;
            v.sort_unstable();
            v.dedup();
            insert_with_faces(&mut seen, v);
        }
        let by_dim = seen
            .into_iter()
            .map(|set| set.into_iter().collect())
            .collect();
        SimplicialComplex { by_dim }
    }

    pub fn dimension(&self) -> Option<usize> {
        if self.by_dim.is_empty() {
            None
        } else {
            Some(self.by_dim.len() - 1)
        }
    }

    pub fn simplices(&self, d: usize) -> &[Vec<usize>] {
        self.by_dim.get(d).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn simplex_count(&self, d: usize) -> usize {
        self.simplices(d).len()
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        let mut v = simplex.to_vec();
        v.sort_unstable();
        if v.is_empty() {
            return false;
        }
        self.by_dim
            .get(v.len() - 1)
            .map(|list| list.binary_search(&v).is_ok())
            .unwrap_or(false)
    }

    /// True when every simplex is a face of a top-dimensional one.
    pub fn is_pure(&self) -> bool {
        let Some(top) = self.dimension() else { return true };
        for d in 0..top {
            for s in self.simplices(d) {
                let covered = self.simplices(d + 1).iter().any(|big| {
                    s.iter().all(|v| big.contains(v))
                });
                if !covered {
                    return false;
                }
            }
        }
        true
    }

    /// Standard simplicial chain complex with alternating-sign boundaries.
    pub fn chain_complex(&self) -> Result<ChainComplex> {
        let dims: Vec<usize> = self.by_dim.iter().map(|v| v.len()).collect();
        let mut boundaries = Vec::new();
        for d in 1..self.by_dim.len() {
            let index: HashMap<&[usize], usize> = self.by_dim[d - 1]
                .iter()
                .enumerate()
                .map(|(i, s)| (s.as_slice(), i))
                .collect();
            let mut b = IntMatrix::zero(dims[d - 1], dims[d]);
            for (j, s) in self.by_dim[d].iter().enumerate() {
                for (k, _) in s.iter().enumerate() {
                    let mut face = s.clone();
                    face.remove(k);
                    let i = *index.get(face.as_slice()).expect("face closure");
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    b.set(i, j, BigInt::from(sign));
                }
            }
            boundaries.push(b);
        }
        ChainComplex::new(dims, boundaries)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(d, v)| if d % 2 == 0 { v.len() as i64 } else { -(v.len() as i64) })
            .sum()
    }
}

fn insert_with_faces(seen: &mut Vec<std::collections::BTreeSet<Vec<usize>>>, simplex: Vec<usize>) {
    if simplex.is_empty() {
        return;
    }
    let d = simplex.len() - 1;
    while seen.len() <= d {
        seen.push(Default::default());
    }
    if !seen[d].insert(simplex.clone()) {
        return;
    }
    if d == 0 {
        return;
    }
    for k in 0..simplex.len() {
        let mut face = simplex.clone();
        face.remove(k);
        insert_with_faces(seen, face);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_of_diagonal_fixes_divisibility() {
        let m = IntMatrix::from_rows(vec![vec![2, 0], vec![0, 3]]);
        let inv = m.smith_invariants();
        assert_eq!(inv, vec![BigUint::from(1u32), BigUint::from(6u32)]);
    }

    #[test]
    fn smith_rank_of_singular() {
        let m = IntMatrix::from_rows(vec![vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn torsion_from_multiplication_by_two() {
        // Z --2--> Z has H_0 = Z/2
        let cc = ChainComplex::new(vec![1, 1], vec![IntMatrix::from_rows(vec![vec![2]])]).unwrap();
        let h0 = cc.homology(0);
        assert_eq!(h0.rank, 0);
        assert_eq!(h0.torsion, vec![BigUint::from(2u32)]);
    }

    #[test]
    fn circle_homology() {
        // boundary of a triangle
        let c = SimplicialComplex::from_maximal([vec![0, 1], vec![1, 2], vec![0, 2]]);
        let cc = c.chain_complex().unwrap();
        assert!(cc.boundary_squares_to_zero().unwrap());
        assert_eq!(cc.reduced_homology(0), HomologyGroup::free(0));
        assert_eq!(cc.homology(1), HomologyGroup::free(1));
        assert_eq!(cc.euler_characteristic(), 0);
    }

    #[test]
    fn two_sphere_homology() {
        // boundary of a tetrahedron
        let c = SimplicialComplex::from_maximal([
            vec![0, 1, 2],
            vec![0, 1, 3],
            vec![0, 2, 3],
            vec![1, 2, 3],
        ]);
        let cc = c.chain_complex().unwrap();
        assert!(cc.boundary_squares_to_zero().unwrap());
        assert_eq!(cc.reduced_homology(0), HomologyGroup::free(0));
        assert_eq!(cc.homology(1), HomologyGroup::free(0));
        assert_eq!(cc.homology(2), HomologyGroup::free(1));
        assert_eq!(cc.euler_characteristic(), 2);
    }

    #[test]
    fn solid_triangle_is_acyclic() {
        let c = SimplicialComplex::from_maximal([vec![0, 1, 2]]);
        let cc = c.chain_complex().unwrap();
        for d in 0..=2 {
            assert!(cc.reduced_homology(d).is_trivial(), "degree {d}");
        }
        assert_eq!(cc.euler_characteristic(), 1);
        assert!(c.is_pure());
    }

    #[test]
    fn zero_sphere_reduced_homology() {
        let c = SimplicialComplex::from_maximal([vec![0], vec![1]]);
        let cc = c.chain_complex().unwrap();
        assert_eq!(cc.reduced_homology(0), HomologyGroup::free(1));
    }

    #[test]
    fn purity_detects_dangling_edge() {
        let c = SimplicialComplex::from_maximal([vec![0, 1, 2], vec![2, 3]]);
        assert!(!c.is_pure());
    }
}
