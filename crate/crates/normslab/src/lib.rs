//! Exact computational algebra over finite abelian group rings.
//!
//! The crate provides four layers, each built on the one below:
//!
//! * [`exact`] — canonical-form linear algebra over the integers (Smith and
//!   Hermite normal forms) and over residue rings `Z/m` (Howell form), with
//!   kernels, solves and row-space lattices. Everything is exact: entries are
//!   arbitrary-precision integers.
//! * [`group_ring`] — the ring `B[A]` for a finite abelian group `A` over the
//!   base `B = Z` or `Z/m`, together with ring homomorphisms (tower transition
//!   maps) and the two action-twisting involutions.
//! * [`fp_module`], [`multilinear`], [`ideals`] — finitely presented modules
//!   over a group ring with the homological toolkit (Hom, Ext^1, duals, base
//!   change, torsion, isomorphism certificates), exterior powers and exterior
//!   biduals with rank-reduction maps, and (fractional) ideal arithmetic
//!   including Fitting ideals and reflexive hulls.
//! * [`tower`] and [`harness`] — truncated tower rings `B[C_{p^n} x G]` with
//!   synthetic quadratic complexes, universal norms, basic norms, the
//!   determinant-module projection and its pairing, plus the deterministic,
//!   seed-replayable verification suites exposed by the `normslab` binary.
//!
//! All randomised components are driven by explicit 64-bit seeds and produce
//! byte-identical reports for identical `(config, seed, version)` triples.

pub mod error;
pub mod exact;
pub mod fp_module;
pub mod group_ring;
pub mod harness;
pub mod ideals;
pub mod multilinear;
pub mod tower;

pub use error::Error;

/// Report schema version embedded in every verdict record.
pub const SCHEMA_VERSION: u32 = 1;

/// Crate version string embedded in reports for replay compatibility checks.
pub fn artifact_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}
