//! Exact arithmetic for even lattices, their discriminant forms, and the
//! integral orthogonal groups of the extended form `S₁ = U ⊕ U ⊕ (−S)`.

pub mod error;
pub mod fqm;
pub mod lattice;
pub mod linalg;
pub mod orthogonal;
pub mod roots;
pub mod cosets;

pub use cosets::{HatEmbedding, ScaledOrthogonal};
pub use error::{Error, Result};
pub use fqm::{Element, FiniteQuadraticModule, GlueGroup, Limits};
pub use lattice::{EvenLattice, LatticeEmbedding};
pub use linalg::{Matrix, QMatrix};
pub use orthogonal::{Class, Classification, ExtendedForm, GroupElement};
pub use roots::{Family, RootLatticeSpec};
