//! Exact global residues for zero-dimensional polynomial complete
//! intersections over the rationals.
//!
//! The central object is a [`BasisProfile`]: a square system whose initial
//! forms under a positive weight are pure powers `x_i^{r_i+1}`. For such a
//! system the crate computes global residues two independent ways (the
//! inverse of a weighted deformation series, and the top coefficient of the
//! normal form), and builds on them traces, trace forms, root counts,
//! mapping degrees, the Chow form, and degree bounds from the Gröbner cone.
//! Systems without pure-power initial forms are reduced to that case by a
//! cofactor-tracking Buchberger completion and the transformation law.

pub mod cones;
pub mod linalg;
pub mod multiseries;
pub mod normal_form;
pub mod poly;
pub mod polyhedral;
pub mod residue;
pub mod roots;
pub mod series;
pub mod transform;
pub mod weight;

pub use linalg::{BigInteger, CharPoly, LinalgError, Rational, RationalMatrix};
pub use poly::{ExponentVector, PolyError, PolySystem, Polynomial, Variables};
pub use weight::{BasisError, BasisProfile, WeightVector};

use thiserror::Error;

/// Any failure surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Polyhedral(#[from] polyhedral::PolyhedralError),
    #[error(transparent)]
    Cone(#[from] cones::ConeError),
    #[error(transparent)]
    Transform(#[from] transform::TransformError),
    #[error(transparent)]
    Series(#[from] multiseries::SeriesError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
