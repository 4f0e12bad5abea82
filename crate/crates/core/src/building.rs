//! Coordinates and decision procedures for the Euclidean building of
//! SL_n(Q((t^-1))).
//!
//! Vertices are homothety classes of Q[[t^-1]]-lattices. The building is
//! locally infinite (residue field Q), so nothing here enumerates
//! neighborhoods: every question is a decision procedure on explicitly
//! presented vertices, either apartment exponent vectors or lattice bases.
//! The base vertex `x_0` is the class of the standard lattice; a group
//! element fixes a vertex exactly when conjugating by the basis lands in
//! integral matrices, which reduces to entry valuations.

use std::collections::BTreeSet;
use std::fmt;

use crate::cyclelab::homology::{HomologyGroup, SimplicialComplex};
use crate::error::{ExactError, Result};
use crate::exactfield::{rat, LaurentRing, LaurentSeries, Matrix, Poly, PolyRing, ValBound, Valuation};

/// Apartment vertex `D(t^(m_1), ..., t^(m_n)) x_0`, stored as the canonical
/// representative of its class mod the diagonal shift: the minimum exponent
/// is normalized to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApartmentVertex {
    exps: Vec<i64>,
}

impl ApartmentVertex {
    pub fn new(raw: Vec<i64>) -> Self {
        assert!(!raw.is_empty(), "vertex needs at least one exponent");
        let min = raw.iter().copied().min().expect("nonempty");
        ApartmentVertex { exps: raw.iter().map(|m| m - min).collect() }
    }

    pub fn base(n: usize) -> Self {
        ApartmentVertex { exps: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exps
    }

    /// `m_i - m_j` (independent of the representative).
    pub fn diff(&self, i: usize, j: usize) -> i64 {
        self.exps[i] - self.exps[j]
    }

    /// Lattice basis `diag(t^(m_1), ..., t^(m_n))`, exact.
    pub fn to_lattice(&self) -> LatticeVertex {
        let n = self.n();
        let basis = Matrix::from_fn(LaurentRing, n, n, |i, j| {
            if i == j {
                LaurentSeries::t_power(self.exps[i])
            } else {
                LaurentSeries::zero()
            }
        });
        LatticeVertex::new(basis).expect("diagonal monomial basis is invertible")
    }
}

impl fmt::Display for ApartmentVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, m) in self.exps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}

/// Membership in the sector of weakly decreasing exponent vectors based at
/// `x_0` (the fundamental domain for SL_n(Q[t])).
pub fn sector_contains(v: &ApartmentVertex) -> bool {
    v.exps.windows(2).all(|w| w[0] >= w[1])
}

/// Translation by `D(t, ..., t, t^-(n-1))^k` in apartment coordinates:
/// adds `k*(1, ..., 1, 1-n)` and re-canonicalizes.
pub fn b_translate(v: &ApartmentVertex, k: i64) -> ApartmentVertex {
    let n = v.n() as i64;
    let mut raw = v.exps.clone();
    for (i, m) in raw.iter_mut().enumerate() {
        if i + 1 == v.n() {
            *m += k * (1 - n);
        } else {
            *m += k;
        }
    }
    ApartmentVertex::new(raw)
}

/// Valuation shift of the entry (j, n) coordinate of a root element under
/// conjugation by `b^-k`: linear growth `k * n`, the contraction that pushes
/// root groups to the identity.
pub fn contraction_profile(n: usize, j: usize, k: i64) -> Result<i64> {
    if j == 0 || j >= n {
        return Err(ExactError::InvalidInput(format!("root index {j} out of 1..{n}")));
    }
    if k < 0 {
        return Err(ExactError::InvalidInput("contraction exponent must be >= 0".to_string()));
    }
    Ok(k * n as i64)
}

/// A vertex presented by an explicit column basis of a Q[[t^-1]]-lattice.
pub struct LatticeVertex {
    basis: Matrix<LaurentRing>,
    basis_inv: Matrix<LaurentRing>,
}

impl LatticeVertex {
    pub fn new(basis: Matrix<LaurentRing>) -> Result<Self> {
        if !basis.is_square() {
            return Err(ExactError::DimensionMismatch("lattice basis must be square".to_string()));
        }
        let basis_inv = basis.inv().map_err(|e| match e {
            ExactError::SingularMatrix | ExactError::UndefinedInverse(_) => {
                ExactError::InsufficientPrecision(
                    "lattice basis not invertible at stored precision".to_string(),
                )
            }
            other => other,
        })?;
        Ok(LatticeVertex { basis, basis_inv })
    }

    /// Vertex `F^-1 D(t^m) x_0` of a transported apartment, where `frame_inv`
    /// is the matrix of `F^-1`.
    pub fn in_frame(frame_inv: &Matrix<LaurentRing>, v: &ApartmentVertex) -> Result<Self> {
        let diag = v.to_lattice();
        Self::new(frame_inv.mul(diag.basis())?)
    }

    pub fn n(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix<LaurentRing> {
        &self.basis
    }

    pub fn basis_inv(&self) -> &Matrix<LaurentRing> {
        &self.basis_inv
    }

    /// Equality as building vertices: homothety-normalize the change of
    /// basis and ask for an integral unit.
    pub fn same_vertex(&self, other: &LatticeVertex) -> Result<bool> {
        if self.n() != other.n() {
            return Ok(false);
        }
        let m = self.basis_inv.mul(other.basis())?;
        let mut min_val: Option<i64> = None;
        for entry in m.entries() {
            match entry.val_bound() {
                ValBound::Exact(v) => {
                    min_val = Some(min_val.map_or(v, |c: i64| c.min(v)));
                }
                ValBound::Infinite => {}
                ValBound::AtLeast(b) => {
                    // A hidden entry can only matter if it could undercut the
                    // visible minimum.
                    if let Some(c) = min_val {
                        if b > c {
                            continue;
                        }
                    }
                    return Err(ExactError::InsufficientPrecision(
                        "entry valuation hidden below the working floor".to_string(),
                    ));
                }
            }
        }
        let Some(d) = min_val else {
            return Ok(false); // zero change of basis cannot happen for invertible bases
        };
        // Scale so the minimal valuation becomes 0, then demand a unit.
        let scaled = m.scale(&LaurentSeries::t_power(d));
        let det = scaled.det()?;
        match det.valuation() {
            Ok(Valuation::Finite(0)) => Ok(true),
            Ok(_) => Ok(false),
            Err(_) => Err(ExactError::InsufficientPrecision(
                "determinant valuation undecidable".to_string(),
            )),
        }
    }
}

/// Whether `g` (with determinant 1) stabilizes the lattice class: all
/// entries of `basis^-1 g basis` must have valuation >= 0. Definite
/// violations win over undecidable entries; a truly hidden entry is an
/// error, never a guess.
pub fn fixes_vertex(g: &Matrix<LaurentRing>, v: &LatticeVertex) -> Result<bool> {
    let conj = v.basis_inv().mul(g)?.mul(v.basis())?;
    let mut undecidable = false;
    for entry in conj.entries() {
        match entry.val_bound() {
            ValBound::Exact(val) => {
                if val < 0 {
                    return Ok(false);
                }
            }
            ValBound::AtLeast(b) => {
                if b < 0 {
                    undecidable = true;
                }
            }
            ValBound::Infinite => {}
        }
    }
    if undecidable {
        return Err(ExactError::InsufficientPrecision(
            "an entry's integrality is hidden below the floor".to_string(),
        ));
    }
    Ok(true)
}

/// Convenience: polynomial matrices embed exactly; an optional floor
/// truncates first (to model a fixed working precision).
pub fn poly_matrix_to_laurent(g: &Matrix<PolyRing>, floor: Option<i64>) -> Matrix<LaurentRing> {
    g.map(LaurentRing, |p| {
        let s = LaurentSeries::from_poly(p);
        match floor {
            Some(f) => s.truncate_to(f),
            None => s,
        }
    })
}

/// Degree bound for one matrix entry of a stabilizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeBound {
    /// The entry is forced to vanish (the bound would be negative).
    ZeroForced,
    /// `deg <= bound` in t.
    AtMost(i64),
}

/// The n x n table of entry degree bounds cutting out the stabilizer of a
/// sector vertex inside SL_n(Q[t]): entry (i, j) may have degree up to
/// `m_i - m_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerShape {
    n: usize,
    bounds: Vec<DegreeBound>,
}

pub fn stabilizer_degree_bounds(v: &ApartmentVertex) -> StabilizerShape {
    let n = v.n();
    let mut bounds = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let d = v.diff(i, j);
            bounds.push(if d < 0 { DegreeBound::ZeroForced } else { DegreeBound::AtMost(d) });
        }
    }
    StabilizerShape { n, bounds }
}

impl StabilizerShape {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bound(&self, i: usize, j: usize) -> DegreeBound {
        self.bounds[i * self.n + j]
    }

    /// Shape membership for a polynomial matrix: every entry obeys its
    /// degree bound, with marked entries identically zero.
    pub fn contains(&self, g: &Matrix<PolyRing>) -> bool {
        if g.rows() != self.n || g.cols() != self.n {
            return false;
        }
        for i in 0..self.n {
            for j in 0..self.n {
                let entry = g.get(i, j);
                match self.bound(i, j) {
                    DegreeBound::ZeroForced => {
                        if !entry.is_zero() {
                            return false;
                        }
                    }
                    DegreeBound::AtMost(d) => {
                        if let Some(deg) = entry.degree() {
                            if deg as i64 > d {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

impl fmt::Display for StabilizerShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, " ")?;
                }
                match self.bound(i, j) {
                    DegreeBound::ZeroForced => write!(f, ".")?,
                    DegreeBound::AtMost(d) => write!(f, "{d}")?,
                }
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// Vertex of the spherical building at infinity: the stabilizer of the
/// coordinate subspace spanned by a nonempty proper subset of basis lines.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ParabolicVertex {
    n: usize,
    subset: BTreeSet<usize>, // 1-based coordinate labels
}

impl ParabolicVertex {
    pub fn new(n: usize, subset: BTreeSet<usize>) -> Result<Self> {
        if subset.is_empty() || subset.len() >= n || subset.iter().any(|i| *i == 0 || *i > n) {
            return Err(ExactError::InvalidInput(format!(
                "need a nonempty proper subset of 1..={n}"
            )));
        }
        Ok(ParabolicVertex { n, subset })
    }

    pub fn subset(&self) -> &BTreeSet<usize> {
        &self.subset
    }

    /// All nonempty proper subsets, in deterministic order.
    pub fn enumerate(n: usize) -> Vec<ParabolicVertex> {
        let mut out = Vec::new();
        for mask in 1u32..((1u32 << n) - 1) {
            let subset: BTreeSet<usize> =
                (0..n).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect();
            out.push(ParabolicVertex { n, subset });
        }
        out.sort();
        out
    }
}

impl fmt::Display for ParabolicVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{{")?;
        for (k, i) in self.subset.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Whether the root group at entry (i, n) fixes the boundary vertex: true
/// exactly when `n in I` implies `i in I`.
pub fn boundary_action(n: usize, root_index: usize, vertex: &ParabolicVertex) -> Result<bool> {
    if root_index == 0 || root_index >= n {
        return Err(ExactError::InvalidInput(format!(
            "root index {root_index} out of 1..{n}"
        )));
    }
    Ok(!vertex.subset.contains(&n) || vertex.subset.contains(&root_index))
}

/// Report of the boundary-combinatorics verification for one n.
#[derive(Debug, Clone)]
pub struct MReport {
    pub n: usize,
    /// Vertices fixed by every root group, expected to be exactly the
    /// nonempty subsets of 1..n-1.
    pub fixed_count: usize,
    pub expected_fixed_count: usize,
    pub fixed_set_matches: bool,
    /// Order complex of the fixed poset: pure of dimension n-2 with
    /// (n-1)! top cells, contractible, Euler characteristic 1.
    pub pure: bool,
    pub dimension_ok: bool,
    pub top_cells: usize,
    pub expected_top_cells: usize,
    pub homology: Vec<HomologyGroup>,
    pub homology_trivial: bool,
    pub euler: i64,
    /// For each facet index i: the chamber beyond the facet is moved by
    /// the root group i and fixed by every other.
    pub facet_walls_ok: bool,
    pub pass: bool,
}

/// Enumerates the boundary vertices, computes the fixed set of the root
/// groups, and checks that it carries the subdivided-simplex structure.
pub fn verify_m_combinatorics(n: usize) -> Result<MReport> {
    if !(2..=16).contains(&n) {
        return Err(ExactError::InvalidInput(format!("n = {n} out of supported range")));
    }
    let vertices = ParabolicVertex::enumerate(n);
    let mut fixed = Vec::new();
    for v in &vertices {
        let mut all = true;
        for i in 1..n {
            if !boundary_action(n, i, v)? {
                all = false;
                break;
            }
        }
        if all {
            fixed.push(v.clone());
        }
    }
    let expected_fixed_count = (1usize << (n - 1)) - 1;
    let fixed_set_matches = fixed.iter().all(|v| !v.subset.contains(&n))
        && fixed.len() == expected_fixed_count;

    // Order complex: vertices are the fixed parabolic subsets (encoded by
    // bitmask), maximal simplices the complete flags of 1..n-1.
    let mut flags: Vec<Vec<usize>> = Vec::new();
    let labels: Vec<usize> = (1..n).collect();
    let mut perm = labels.clone();
    permutations(&mut perm, 0, &mut |order| {
        let mut mask = 0usize;
        let mut chain = Vec::with_capacity(order.len());
        for i in order {
            mask |= 1 << (i - 1);
            chain.push(mask);
        }
        flags.push(chain);
    });
    let complex = SimplicialComplex::from_maximal(flags);
    let dimension_ok = complex.dimension() == Some(n - 2);
    let pure = complex.is_pure();
    let top_cells = complex.simplex_count(n - 2);
    let expected_top_cells = factorial(n - 1);
    let vertex_count_ok = complex.simplex_count(0) == expected_fixed_count;

    let cc = complex.chain_complex()?;
    let dd_zero = cc.boundary_squares_to_zero()?;
    let mut homology = Vec::new();
    let mut homology_trivial = true;
    for d in 0..=(n - 2) {
        let h = cc.reduced_homology(d);
        homology_trivial &= h.is_trivial();
        homology.push(h);
    }
    let euler = complex.euler_characteristic();

    // Across each facet F_i, the opposite chamber's extra vertex is
    // P_(1..n minus i): fixed by every root group except the i-th.
    let mut facet_walls_ok = true;
    for i in 1..n {
        let opposite: BTreeSet<usize> = (1..=n).filter(|j| *j != i).collect();
        let opposite = ParabolicVertex::new(n, opposite)?;
        for j in 1..n {
            let fixed_by_j = boundary_action(n, j, &opposite)?;
            if fixed_by_j != (j != i) {
                facet_walls_ok = false;
            }
        }
    }

    let pass = fixed_set_matches
        && dimension_ok
        && pure
        && top_cells == expected_top_cells
        && vertex_count_ok
        && dd_zero
        && homology_trivial
        && euler == 1
        && facet_walls_ok;

    Ok(MReport {
        n,
        fixed_count: fixed.len(),
        expected_fixed_count,
        fixed_set_matches,
        pure,
        dimension_ok,
        top_cells,
        expected_top_cells,
        homology,
        homology_trivial,
        euler,
        facet_walls_ok,
        pass,
    })
}

fn permutations(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, visit);
        items.swap(k, i);
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Elementary matrix `I + c t^d E_(i,j)` over Q[t].
pub fn elementary_poly(n: usize, i: usize, j: usize, c: i64, d: u32) -> Result<Matrix<PolyRing>> {
    if i == j || i >= n || j >= n {
        return Err(ExactError::InvalidInput("elementary matrix needs i != j".to_string()));
    }
    let ring = PolyRing::rational();
    let mut m = Matrix::identity(ring, n);
    m.set(i, j, Poly::monomial(d, rat(c)));
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x0(n: usize) -> LatticeVertex {
        ApartmentVertex::base(n).to_lattice()
    }

    #[test]
    fn identity_fixes_everything() {
        for exps in [vec![0, 0], vec![3, 1], vec![5, 2, 0]] {
            let v = ApartmentVertex::new(exps).to_lattice();
            let id = Matrix::identity(LaurentRing, v.n());
            assert!(fixes_vertex(&id, &v).unwrap());
        }
    }

    #[test]
    fn elementary_matrices_at_base_vertex() {
        // E_12(t) moves x_0, E_12(1) fixes it
        let e_t = poly_matrix_to_laurent(&elementary_poly(2, 0, 1, 1, 1).unwrap(), None);
        let e_1 = poly_matrix_to_laurent(&elementary_poly(2, 0, 1, 1, 0).unwrap(), None);
        assert!(!fixes_vertex(&e_t, &x0(2)).unwrap());
        assert!(fixes_vertex(&e_1, &x0(2)).unwrap());
    }

    #[test]
    fn b_moves_base_vertex() {
        let n = 3;
        let b = Matrix::from_fn(LaurentRing, n, n, |i, j| {
            if i != j {
                LaurentSeries::zero()
            } else if i + 1 == n {
                LaurentSeries::t_power(-(n as i64 - 1))
            } else {
                LaurentSeries::t_power(1)
            }
        });
        assert!(!fixes_vertex(&b, &x0(n)).unwrap());
    }

    #[test]
    fn shape_of_base_vertex_is_constants() {
        let shape = stabilizer_degree_bounds(&ApartmentVertex::base(3));
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(shape.bound(i, j), DegreeBound::AtMost(0));
            }
        }
    }

    #[test]
    fn shape_n2_sector_vertex() {
        let shape = stabilizer_degree_bounds(&ApartmentVertex::new(vec![1, 0]));
        assert_eq!(shape.bound(0, 0), DegreeBound::AtMost(0));
        assert_eq!(shape.bound(0, 1), DegreeBound::AtMost(1));
        assert_eq!(shape.bound(1, 0), DegreeBound::ZeroForced);
        assert_eq!(shape.bound(1, 1), DegreeBound::AtMost(0));
    }

    #[test]
    fn shape_matches_fixes_vertex_on_elementaries() {
        // deg <= m_i - m_j is exactly the fixing condition
        let v = ApartmentVertex::new(vec![2, 0]);
        let shape = stabilizer_degree_bounds(&v);
        let lat = v.to_lattice();
        for d in 0..=3u32 {
            let e = elementary_poly(2, 0, 1, 1, d).unwrap();
            let fixes = fixes_vertex(&poly_matrix_to_laurent(&e, None), &lat).unwrap();
            assert_eq!(fixes, shape.contains(&e), "degree {d}");
        }
    }

    #[test]
    fn sector_membership() {
        assert!(sector_contains(&ApartmentVertex::new(vec![2, 1, 0])));
        // canonicalization keeps order: (0,1,0) -> not decreasing
        assert!(!sector_contains(&ApartmentVertex::new(vec![0, 1, 0])));
        assert!(sector_contains(&ApartmentVertex::base(4)));
    }

    #[test]
    fn b_translate_canonicalizes() {
        let v = ApartmentVertex::base(3);
        let w = b_translate(&v, 1);
        assert_eq!(w.exponents(), &[3, 3, 0]);
        assert_eq!(b_translate(&v, 0), v);
        // additivity
        let a = b_translate(&b_translate(&v, 2), 3);
        assert_eq!(a, b_translate(&v, 5));
        // a b-translate of a sector vertex can leave the sector
        let s = ApartmentVertex::new(vec![0, 0, 0]);
        assert!(sector_contains(&s));
        assert!(sector_contains(&b_translate(&s, 1)));
        let t = ApartmentVertex::new(vec![0, 1, 0]);
        assert!(!sector_contains(&b_translate(&t, 1)));
    }

    #[test]
    fn b_translate_agrees_with_lattice_action() {
        let n = 3;
        let v = ApartmentVertex::new(vec![2, 1, 0]);
        let k = 2;
        let b = Matrix::from_fn(LaurentRing, n, n, |i, j| {
            if i != j {
                LaurentSeries::zero()
            } else if i + 1 == n {
                LaurentSeries::t_power(k * (1 - n as i64))
            } else {
                LaurentSeries::t_power(k)
            }
        });
        let moved = LatticeVertex::new(b.mul(v.to_lattice().basis()).unwrap()).unwrap();
        let coord = b_translate(&v, k).to_lattice();
        assert!(moved.same_vertex(&coord).unwrap());
        assert!(!moved.same_vertex(&v.to_lattice()).unwrap());
    }

    #[test]
    fn contraction_profile_linear() {
        assert_eq!(contraction_profile(3, 1, 1).unwrap(), 3);
        assert_eq!(contraction_profile(3, 2, 0).unwrap(), 0);
        for k in 0..=10 {
            assert_eq!(contraction_profile(4, 3, k).unwrap(), 4 * k);
        }
        assert!(contraction_profile(3, 3, 1).is_err());
    }

    #[test]
    fn contraction_grows_fixing_radius() {
        // b^-k E_13(1) b^k = E_13(t^-3k) fixes D(t^(m,0,0)) x_0 iff
        // m >= -3k (n = 3): the fixed half-apartment swallows more of the
        // opposite side as k grows.
        let n = 3usize;
        for k in 0..3i64 {
            let shift = contraction_profile(n, 1, k).unwrap();
            let mut e = Matrix::identity(LaurentRing, n);
            e.set(0, n - 1, LaurentSeries::t_power(-shift));
            for m in 0..=9i64 {
                let v = ApartmentVertex::new(vec![-m, 0, 0]).to_lattice();
                let fixes = fixes_vertex(&e, &v).unwrap();
                assert_eq!(fixes, m <= shift, "k={k} m={m}");
            }
        }
    }

    #[test]
    fn boundary_action_rule() {
        let p = |s: &[usize]| ParabolicVertex::new(3, s.iter().copied().collect()).unwrap();
        assert!(boundary_action(3, 1, &p(&[2])).unwrap());
        assert!(!boundary_action(3, 1, &p(&[2, 3])).unwrap());
        assert!(boundary_action(3, 2, &p(&[2, 3])).unwrap());
        for i in 1..4usize {
            if i < 4 {
                let v = ParabolicVertex::new(4, (1..=3).collect()).unwrap();
                assert!(boundary_action(4, i.min(3), &v).unwrap());
            }
        }
    }

    #[test]
    fn m_combinatorics_small_n() {
        for n in 2..=5 {
            let r = verify_m_combinatorics(n).unwrap();
            assert!(r.pass, "n={n}: {r:?}");
            assert_eq!(r.fixed_count, (1 << (n - 1)) - 1);
            assert_eq!(r.top_cells, factorial(n - 1));
            assert_eq!(r.euler, 1);
        }
    }

    #[test]
    fn m_combinatorics_n3_fixed_set() {
        // fixed set is {P{1}, P{2}, P{1,2}}: a subdivided edge
        let vertices = ParabolicVertex::enumerate(3);
        let fixed: Vec<_> = vertices
            .into_iter()
            .filter(|v| (1..3).all(|i| boundary_action(3, i, v).unwrap()))
            .collect();
        assert_eq!(fixed.len(), 3);
        assert!(fixed.iter().all(|v| !v.subset().contains(&3)));
    }

    #[test]
    fn shape_closed_under_multiplication() {
        // degree-bound tables multiply into themselves
        let v = ApartmentVertex::new(vec![3, 1, 0]);
        let shape = stabilizer_degree_bounds(&v);
        let a = elementary_poly(3, 0, 1, 2, 2).unwrap(); // deg 2 <= m_1 - m_2 = 2
        let b = elementary_poly(3, 1, 2, -1, 1).unwrap(); // deg 1 <= m_2 - m_3 = 1
        assert!(shape.contains(&a));
        assert!(shape.contains(&b));
        let prod = a.mul(&b).unwrap();
        assert!(shape.contains(&prod));
    }

    #[test]
    fn same_vertex_respects_homothety() {
        let v = ApartmentVertex::new(vec![1, 0]);
        let a = v.to_lattice();
        // scale the basis by t^3: same class
        let scaled = a.basis().scale(&LaurentSeries::t_power(3));
        let b = LatticeVertex::new(scaled).unwrap();
        assert!(a.same_vertex(&b).unwrap());
        let other = ApartmentVertex::new(vec![2, 0]).to_lattice();
        assert!(!a.same_vertex(&other).unwrap());
    }
}
