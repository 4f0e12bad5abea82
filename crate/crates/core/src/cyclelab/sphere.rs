//! Combinatorial model of the translated-unipotent ball and its boundary
//! sphere.
//!
//! The ball around `b^k e` is assembled from 2^(n-1) orthant pieces, one
//! per subset of the wall elements: the piece of the subset S is the image
//! of the base piece under `prod_(j in S) r_j^ell`. Cutting the unit ball
//! of R^(n-1) by the n-1 coordinate hyperplanes realizes exactly this cell
//! structure, which is simplicial once each orthant sector is coned off
//! from the center: the complex is the cone over the boundary of the
//! cross-polytope on the 2(n-1) signed unit vectors.

use num_bigint::BigUint;

use super::homology::{ChainComplex, HomologyGroup, SimplicialComplex};
use crate::error::{ExactError, Result};

/// One top-dimensional piece of the ball: the orthant reached by applying
/// the wall elements indexed by `subset`.
#[derive(Debug, Clone)]
pub struct OrthantCell {
    /// Root indices j with a positive sign (the applied subset S).
    pub subset: Vec<usize>,
    /// Vertex ids of the ball cell (center first).
    pub ball_simplex: Vec<usize>,
    /// Vertex ids of its outer sphere face.
    pub sphere_simplex: Vec<usize>,
}

pub struct SphereComplex {
    pub n: usize,
    pub ell: BigUint,
    pub k: i64,
    ball: SimplicialComplex,
    sphere: SimplicialComplex,
    /// Vertex id of the cell containing `b^k e` (the cone point).
    pub center_vertex: usize,
    orthants: Vec<OrthantCell>,
}

/// Vertex numbering: 0 is the center; the signed unit vector
/// `sign * e_j` (j in 1..=rank) gets id `2j - 1` for +, `2j` for -.
fn signed_vertex(j: usize, positive: bool) -> usize {
    if positive {
        2 * j - 1
    } else {
        2 * j
    }
}

/// Builds the cell model of the ball `Y_ell` around `b^k e` together with
/// its boundary sphere.
pub fn build_sphere(n: usize, ell: BigUint, k: i64) -> Result<SphereComplex> {
    if n < 2 {
        return Err(ExactError::InvalidInput("need n >= 2".to_string()));
    }
    let rank = n - 1;
    let mut ball_cells = Vec::new();
    let mut sphere_cells = Vec::new();
    let mut orthants = Vec::new();
    for mask in 0u32..(1 << rank) {
        let mut subset = Vec::new();
        let mut outer = Vec::new();
        for j in 1..=rank {
            let positive = mask & (1 << (j - 1)) != 0;
            if positive {
                subset.push(j);
            }
            outer.push(signed_vertex(j, positive));
        }
        let mut cone = vec![0usize];
        cone.extend(&outer);
        ball_cells.push(cone.clone());
        sphere_cells.push(outer.clone());
        orthants.push(OrthantCell { subset, ball_simplex: cone, sphere_simplex: outer });
    }
    let ball = SimplicialComplex::from_maximal(ball_cells);
    let sphere = SimplicialComplex::from_maximal(sphere_cells);
    Ok(SphereComplex { n, ell, k, ball, sphere, center_vertex: 0, orthants })
}

impl SphereComplex {
    pub fn rank(&self) -> usize {
        self.n - 1
    }

    pub fn ball(&self) -> &SimplicialComplex {
        &self.ball
    }

    pub fn sphere(&self) -> &SimplicialComplex {
        &self.sphere
    }

    /// The 2^(n-1) top cells with their subset labels.
    pub fn orthants(&self) -> &[OrthantCell] {
        &self.orthants
    }

    pub fn ball_chain(&self) -> Result<ChainComplex> {
        self.ball.chain_complex()
    }

    pub fn sphere_chain(&self) -> Result<ChainComplex> {
        self.sphere.chain_complex()
    }

    /// Reduced homology of the ball in degree d.
    pub fn ball_homology(&self, d: usize) -> Result<HomologyGroup> {
        Ok(self.ball_chain()?.reduced_homology(d))
    }

    /// Reduced homology of the boundary sphere in degree d.
    pub fn sphere_homology(&self, d: usize) -> Result<HomologyGroup> {
        Ok(self.sphere_chain()?.reduced_homology(d))
    }

    /// The center cell is interior: it appears in every top ball cell and
    /// in no sphere cell.
    pub fn center_is_interior(&self) -> bool {
        let in_all_ball_tops = self
            .orthants
            .iter()
            .all(|c| c.ball_simplex.contains(&self.center_vertex));
        let in_no_sphere_cell = (0..=self.sphere.dimension().unwrap_or(0))
            .all(|d| {
                self.sphere
                    .simplices(d)
                    .iter()
                    .all(|s| !s.contains(&self.center_vertex))
            });
        in_all_ball_tops && in_no_sphere_cell
    }

    /// Chain-level boundary of the ball equals the sphere: orienting each
    /// orthant cone by the product of its coordinate signs, the interior
    /// faces cancel in pairs and exactly the outer faces survive, once
    /// each. (This is the fundamental cycle of the boundary sphere.)
    pub fn ball_boundary_is_sphere(&self) -> Result<bool> {
        let cc = self.ball_chain()?;
        let top = self.n - 1;
        let Some(bmat) = cc.boundary(top) else {
            return Ok(false);
        };
        let tops = self.ball.simplices(top);
        let mut col_sum = vec![num_bigint::BigInt::from(0); bmat.rows()];
        for (j, cell) in tops.iter().enumerate() {
            // sign = product over non-center vertices: odd ids are the
            // positive unit vectors.
            let mut sign = 1i64;
            for v in cell {
                if *v != self.center_vertex && v % 2 == 0 {
                    sign = -sign;
                }
            }
            for (i, item) in col_sum.iter_mut().enumerate() {
                *item += bmat.get(i, j) * num_bigint::BigInt::from(sign);
            }
        }
        let faces = self.ball.simplices(top - 1);
        for (i, s) in faces.iter().enumerate() {
            let on_sphere = self.sphere.contains(s);
            let coeff = col_sum[i].magnitude();
            let expect = if on_sphere { BigUint::from(1u32) } else { BigUint::from(0u32) };
            if coeff != &expect {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sc(n: usize) -> SphereComplex {
        build_sphere(n, BigUint::from(1u32), 1).unwrap()
    }

    #[test]
    fn n2_is_an_arc_with_two_endpoints() {
        let s = sc(2);
        assert_eq!(s.orthants().len(), 2);
        assert_eq!(s.ball().simplex_count(1), 2);
        assert_eq!(s.sphere().simplex_count(0), 2);
        assert_eq!(s.sphere_homology(0).unwrap(), HomologyGroup::free(1));
        assert!(s.center_is_interior());
        assert!(s.ball_boundary_is_sphere().unwrap());
    }

    #[test]
    fn n3_is_a_disk_with_circle_boundary() {
        let s = sc(3);
        assert_eq!(s.orthants().len(), 4);
        assert_eq!(s.ball().simplex_count(2), 4);
        assert_eq!(s.sphere().simplex_count(1), 4);
        assert_eq!(s.sphere_homology(0).unwrap(), HomologyGroup::free(0));
        assert_eq!(s.sphere_homology(1).unwrap(), HomologyGroup::free(1));
        for d in 1..=2 {
            assert!(s.ball_homology(d).unwrap().is_trivial());
        }
        assert!(s.center_is_interior());
        assert!(s.ball_boundary_is_sphere().unwrap());
    }

    #[test]
    fn n4_sphere_is_s2() {
        let s = sc(4);
        assert_eq!(s.orthants().len(), 8);
        assert_eq!(s.sphere_homology(2).unwrap(), HomologyGroup::free(1));
        assert_eq!(s.sphere_homology(1).unwrap(), HomologyGroup::free(0));
        assert!(s.ball_homology(1).unwrap().is_trivial());
        assert!(s.ball_homology(2).unwrap().is_trivial());
        assert!(s.ball_homology(3).unwrap().is_trivial());
        assert!(s.ball_boundary_is_sphere().unwrap());
    }

    #[test]
    fn boundary_squares_to_zero_and_euler() {
        for n in 2..=5usize {
            let s = sc(n);
            assert!(s.ball_chain().unwrap().boundary_squares_to_zero().unwrap());
            assert!(s.sphere_chain().unwrap().boundary_squares_to_zero().unwrap());
            assert_eq!(s.ball().euler_characteristic(), 1, "ball Euler, n={n}");
            let expect = if (n - 2) % 2 == 0 { 2 } else { 0 };
            assert_eq!(s.sphere().euler_characteristic(), expect, "sphere Euler, n={n}");
        }
    }

    #[test]
    fn orthant_subsets_enumerate_all() {
        let s = sc(3);
        let mut subsets: Vec<Vec<usize>> =
            s.orthants().iter().map(|c| c.subset.clone()).collect();
        subsets.sort();
        assert_eq!(subsets, vec![vec![], vec![1], vec![1, 2], vec![2]]);
    }
}
