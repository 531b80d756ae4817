//! Exact computations for non-symplectic automorphisms of 2-power order on
//! K3 surfaces acting trivially on the Néron-Severi lattice.
//!
//! * [`lattice`]: even lattices, discriminant groups, Nikulin invariants.
//! * [`cyclotomic`]: exact arithmetic in `Q(ζ_n)`.
//! * [`lefschetz`]: holomorphic and topological Lefschetz counting of fixed points.
//! * [`classification`]: order constraints and fixed-locus profiles.
//! * [`elliptic`]: Weierstrass models, Kodaira fibers and Shioda-Tate checks.
//! * [`isometry`]: bounded search for finite-order lattice isometries.

pub mod classification;
pub mod cyclotomic;
pub mod elliptic;
pub mod error;
pub mod isometry;
pub mod lattice;
pub mod lefschetz;
pub mod matrix;
pub mod poly;
pub mod rational;

pub use cyclotomic::CyclotomicNumber;
pub use error::{Error, Result};
pub use lattice::{GramLattice, LatticeExpr, LatticeInvariants, RootLattice};
