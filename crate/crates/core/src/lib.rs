//! Exact-arithmetic workbench for SL_n over the Laurent series field
//! Q((t^-1)).
//!
//! The crate constructs, with no floating point anywhere, the objects that
//! witness how SL_n(Z[t]) acts on the Euclidean building of
//! SL_n(Q((t^-1))): Laurent-series roots of a marker polynomial, a free
//! abelian diagonalizable subgroup of SL_n(Z[t]), degree-bound shapes of
//! vertex stabilizers, translated unipotent spheres with integer homology,
//! and membership certificates for the orbit of a fundamental domain. Every
//! claim that is decidable at finite truncation precision is machine-checked
//! by the [`pipeline`] module and surfaced through the CLI.

pub mod building;
pub mod cyclelab;
pub mod error;
pub mod exactfield;
pub mod pipeline;
pub mod rootlift;
pub mod toruslab;

pub use error::{ExactError, Result};
