//! Exact torus-equivariant K-theory of flag varieties.
//!
//! Everything is computed over the integers: weights live in the weight
//! lattice (fundamental-weight coordinates), classes are tuples of integer
//! Laurent polynomials indexed by torus-fixed points, and every division is
//! exact division with a hard failure on nonzero remainder.
//!
//! Module layout:
//! - [`lattice`]: weights and Laurent polynomials on the weight lattice.
//! - [`roots`]: root systems, Weyl groups, Bruhat order, coset representatives.
//! - [`gkm`]: fixed-point models of flag spaces `G/P`, Schubert-type bases,
//!   Euler characteristics, basis expansions and structure constants.
//! - [`projective`]: closed formulas and recurrences for the structure
//!   constants of projective space.
//! - [`positivity`]: membership certificates for the cones
//!   `Z_+[e^{-beta} - 1]` / `Z_+[e^{beta} - 1]` over the positive roots.

pub mod error;
pub mod gkm;
pub mod lattice;
pub mod positivity;
pub mod projective;
pub mod render;
pub mod roots;

pub use error::Error;
pub use gkm::{Basis, DemazureVariant, Family, FlagSpace, GKMClass, Side};
pub use lattice::{LaurentPoly, Weight};
pub use positivity::{
    cone_certificate, ring_membership, CertTerm, Certificate, ConeSign, Membership,
    DEFAULT_NODE_CAP,
};
pub use roots::{RootSystem, WeylElem};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
