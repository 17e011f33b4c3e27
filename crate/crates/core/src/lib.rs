//! Exact-arithmetic toolkit for second cohomology of finite groups, group
//! extensions, and the obstruction theory of co-prolongations.
//!
//! A *co-prolongation* of an extension `0 -> A -> B0 -> G0 -> 1` along a
//! surjection `gamma: G0 ->> G` is an extension `0 -> A -> B -> G -> 1`
//! fitting into a commuting ladder that fixes `A` pointwise. Existence is
//! governed by an obstruction class in the cokernel of the induced map
//! `H^2(G,A) -> H^2(G0,A)`, and when the obstruction vanishes the set of
//! equivalence classes is a torsor under the kernel of that map.
//!
//! Everything here is exact: groups are validated Cayley tables, coefficients
//! live in invariant-factor coordinates, and all linear algebra is integer
//! Smith/Hermite normal form with arbitrary precision. A brute-force oracle
//! certifies the linear-algebra path at desk scale.

pub mod catalog;
pub mod cohomology;
pub mod coprolong;
pub mod extension;
pub mod group;
pub mod json;
pub mod oracle;
pub mod sweep;
pub mod zlattice;

pub use cohomology::{Cochain, GModule, H2Map, H2Presentation};
pub use coprolong::{CoprolongError, ObstructionResult, System};
pub use sweep::{run_sweep, SweepOptions, SweepReport};
pub use extension::{CrossedModule, Extension, Section};
pub use group::{FiniteGroup, GroupHom, Subgroup};
pub use zlattice::{FiniteAbelianGroup, IntMatrix, SnfResult};
