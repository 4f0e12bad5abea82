//! The sphere-and-certificate machinery around the translated fundamental
//! domain: unipotent decompositions, the exponent `ell`, translation
//! vectors, the ball/sphere cell complex with integer homology, and the
//! membership certificates that feed the filtration argument.

pub mod homology;
pub mod sphere;
pub mod system;
pub mod unipotent;

pub use homology::{ChainComplex, HomologyGroup, IntMatrix, SimplicialComplex};
pub use sphere::{build_sphere, OrthantCell, SphereComplex};
pub use system::{CycleSystem, MembershipCertificate, WallCheck, WallElement};
pub use unipotent::{conjugate_unipotent, ell_of, PolyUnipotent, Unipotent};
