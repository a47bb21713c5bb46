//! Group-invariant ideals and subalgebras of complex matrix algebras.
//!
//! Given a finite group `G` and an irreducible complex representation `V`,
//! the crate enumerates the `G`-invariant one-sided ideals and the
//! `G`-invariant subalgebras of `End(V)`, builds them from induction data,
//! extracts tensor factorizations, and provides the Weyl-dimension based
//! classification for compact connected Lie groups.

pub mod catalog;
pub mod character;
pub mod classify;
pub mod error;
pub mod factor;
pub mod group;
pub mod ideals;
pub mod json;
pub mod lie;
pub mod lift;
pub mod linalg;
pub mod matalg;
pub mod rep;
pub mod subspace;

pub use error::{Error, Result};

/// Rank and membership tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Distance to the nearest integer accepted when rounding character sums.
pub const ROUNDING_TOL: f64 = 1e-6;
/// Eigenvalues closer than this are treated as one cluster.
pub const EIGEN_GAP: f64 = 1e-6;
/// Residual below which two subspaces are declared equal.
pub const SUBSPACE_EQ_TOL: f64 = 1e-6;
/// Fresh-randomness retries for the randomized splitting routines.
pub const MAX_RETRIES: usize = 20;
pub const DEFAULT_SEED: u64 = 0;
