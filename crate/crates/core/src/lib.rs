//! Rigorous prover/verifier toolkit for Rupert passages of point-symmetric
//! convex polyhedra.
//!
//! The crate is split along the trust boundary:
//!
//! * [`exact`] is the kernel every certificate check relies on: big rationals,
//!   Taylor sine/cosine with a proven `kappa = 1e-10` budget, directed square
//!   roots, pi enclosures, and the real cyclotomic subfield for congruence.
//! * [`geom`] is the fast double-precision mirror of the same formulas, used
//!   by the certificate builder to search; nothing in it is trusted.
//!
//! Higher layers (solids, exclusion criteria, certificate trees, builder,
//! verifier, solution finder) combine the two: floats propose, rationals
//! dispose.

pub mod band;
pub mod builder;
pub mod certtree;
pub mod exact;
pub mod exclusion;
pub mod geom;
pub mod solids;
pub mod solution;
pub mod verifier;
