//! Exact-arithmetic calculus for the deformation theory of rational curves
//! in smooth 3-folds built from two affine charts.
//!
//! Everything here is computed over the rationals with arbitrary precision;
//! there is no floating point anywhere. The library covers, bottom up:
//!
//! * [`ncpoly`]: sparse noncommutative polynomials in two letters, with
//!   cyclic derivatives, cyclic normal forms and abelianisation;
//! * [`necklace`]: cyclic-word orbit decompositions, necklace polynomials
//!   `N_{j,k}`, monomial sums and superpotentials built from a coefficient
//!   table;
//! * [`geometry`]: the two-chart neighbourhood data: coefficient tables,
//!   chart/overlap polynomials, the glue substitution and the derived
//!   invariants `(t, r, s)` together with the `A`/`B` polynomial family;
//! * [`resolution`]: twisted sums of line bundles on the two charts, the
//!   three-step locally free resolution and its complex/gluing checks;
//! * [`cech_dg`]: the two-chart Cech DG-algebra of the resolution: the
//!   differential, the cup product, the named generator/homotopy library
//!   and canonical decompositions of closed elements;
//! * [`kadeishvili`]: the homotopy-transfer recursion producing the
//!   A-infinity minimal model on cohomology, plus the Stasheff identity
//!   checker;
//! * [`jacobi`]: truncated dimension counts of the (non)commutative Jacobi
//!   algebra of a superpotential, with a finiteness probe.
//!
//! The [`corpus`] module ships a fixed set of sample coefficient tables used
//! by the verification suites and the command-line `selftest`.

pub mod cech_dg;
pub mod corpus;
pub mod geometry;
pub mod jacobi;
pub mod kadeishvili;
pub mod matrix;
pub mod ncpoly;
pub mod necklace;
pub mod rational;
pub mod resolution;

pub use cech_dg::{
    BasisClass, CechDga, CechElement, CechError, ChartCochain, CohomologyClass, Decomposition,
    GeneratorLibrary, CatalogueReport,
};
pub use geometry::{
    Chart, GeometryError, GeometryInvariants, LambdaTable, NormalBundle, Poly3, Violation,
};
pub use jacobi::{FinitenessVerdict, TruncatedAlgebraReport};
pub use kadeishvili::{AInfinityTable, TransferState};
pub use matrix::Mat;
pub use ncpoly::{CommPoly, FreePoly, Letter, Word};
pub use necklace::{Necklace, NecklaceError, OrbitDecomposition};
pub use rational::Q;
pub use resolution::{ResolutionComplex, ResolutionError, SheafMorphism, TwistVector};
