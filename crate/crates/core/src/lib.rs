//! Brauer graphs modelled as ribbon graphs.
//!
//! The crate covers the combinatorics (faces, genus, canonical forms), the
//! quiver with relations of a Brauer graph algebra together with a monomial
//! basis, the graph moves relating derived equivalent algebras (Kauer move,
//! flips and m-angulation mutation, the dual Kauer move on trees), two-term
//! tilting complexes over Brauer tree algebras, and exact Cartan-matrix
//! invariants used to rule out derived equivalences.

pub mod dot;
pub mod invariants;
pub mod linalg;
pub mod moves;
pub mod quiver;
pub mod ribbon;
pub mod tilting;

pub use invariants::{IntMatrix, IntPoly, InertiaTriple, Verdict};
pub use moves::{DualTree, MAngulation, MoveError};
pub use quiver::{PathBasis, Quiver, RelationSet};
pub use ribbon::{CanonicalForm, Edge, Face, GraphError, RibbonGraph, SurfaceInvariants, Vertex, Violation};
pub use tilting::{TiltingComplex, TwoTermComplex};
