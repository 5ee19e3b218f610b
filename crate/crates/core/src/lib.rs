//! Rational homology of partition strata `w_λ` of symmetric products.
//!
//! Three independent engines compute Betti tables and are cross-checked:
//!
//! - [`cohomology`]: cohomology of commutative differential graded algebras
//!   over ℚ, applied to the Møller–Raussen models of `Map_l(ℂPᵐ, S²ᵐ)` built
//!   in [`models`];
//! - [`models`]: Poincaré series of loop spaces and compactly supported
//!   section spaces of punctured `ℂᵈ`;
//! - [`gerstenhaber`]: basis enumeration in the free `2d`-Gerstenhaber
//!   algebra, which gives the exact (unstable) homology of every stratum.
//!
//! [`strata`] holds the closed-form stable tables and dispatches to the
//! engines, and [`verify`] bundles the named verification suites.
//!
//! Core types are generic over the coefficient [`Field`]; the aliases below
//! fix it to arbitrary precision rationals.

pub mod algebra;
pub mod cohomology;
pub mod error;
pub mod gerstenhaber;
pub mod linalg;
pub mod models;
pub mod presentation;
pub mod scalar;
pub mod strata;
pub mod verify;

pub use algebra::{AlgebraSpec, Element, GeneratorSpec, Monomial};
pub use cohomology::{CohomologyReport, DSquaredCheck, Derivation, DgaModel};
pub use error::{Error, Result};
pub use gerstenhaber::{BasicProduct, Partition, StratumMonomial};
pub use models::PoincareSeries;
pub use presentation::{RingPresentation, RingReport};
pub use scalar::Field;

/// Arbitrary precision rationals, the default coefficient field.
pub type Rational = num_rational::BigRational;

pub type QElement = Element<Rational>;
pub type QDerivation = Derivation<Rational>;
pub type QDgaModel = DgaModel<Rational>;
pub type QCohomologyReport = CohomologyReport<Rational>;
pub type QRingPresentation = RingPresentation<Rational>;
pub type QRingReport = RingReport<Rational>;

/// `(degree, dimension)` rows, one per degree starting at 0.
pub type BettiTable = Vec<(u32, u64)>;

/// Dimensions of a [`BettiTable`] in degree order.
pub fn dims(table: &[(u32, u64)]) -> Vec<u64> {
    table.iter().map(|&(_, dim)| dim).collect()
}
