//! Finite congruence-simple semirings with zero.
//!
//! The crate builds endomorphism semirings `End(M)` of finite lattices,
//! enumerates their dense subsemirings, decides congruence-simplicity of
//! finite semirings given by Cayley tables, and runs the irreducible
//! semimodule construction that embeds a simple semiring densely into some
//! `End(M)`.
//!
//! Module map:
//!
//! - [`lattice`]: finite lattices as join tables, duality, distributivity,
//!   enumeration up to isomorphism.
//! - [`endo`]: `End(M)`, the maps `e_{a,b}`, dense closures and the family of
//!   dense subsemirings, transposition to the dual lattice.
//! - [`semiring`]: Cayley-table semirings, congruences, simplicity, structure
//!   flags, isomorphism search.
//! - [`semimodule`]: left semimodules, irreducibility, the irreducible
//!   descent, representations and commutants.
//! - [`format`]: the `.lat`, `.sr`, `.srs` and `.smod` text formats.
//! - [`catalog`]: classification table reproduction, minimum-order sweep and
//!   the persisted catalog.

pub mod bitset;
pub mod catalog;
pub mod endo;
pub mod format;
pub mod lattice;
pub mod partition;
pub mod semimodule;
pub mod semiring;

pub use endo::{EndSemiring, EndoSubsemiring, Endomorphism};
pub use lattice::{FiniteLattice, LatticeIso};
pub use partition::{Congruence, ModuleCongruence};
pub use semimodule::Semimodule;
pub use semiring::FiniteSemiring;
