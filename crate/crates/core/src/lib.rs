//! Entropy lower bounds for self-maps of nilmanifolds.
//!
//! The pipeline runs from algebra to numbers: a nilpotent Lie algebra with a
//! lattice and an endomorphism give an integer linearization matrix
//! ([`nilcore`]); its characteristic polynomial is analysed exactly and
//! numerically ([`intpoly`]); the product of eigenvalue moduli outside the
//! unit circle gives the entropy bound and a handful of absolute bounds
//! ([`spectral`]). For affine maps of tori the bound is an equality, which
//! [`entropy_sim`] checks by counting separated orbits.

pub mod entropy_sim;
pub mod intpoly;
pub mod lattice;
pub mod matrix;
pub mod nilcore;
pub mod spectral;

pub use entropy_sim::{AffineTorusMap, CoverSpec, EntropyEstimate, SimError};
pub use intpoly::{IntPolynomial, PolyError};
pub use matrix::{IntMatrix, RatMatrix};
pub use nilcore::{
    AlgebraEndomorphism, CentralSeries, LinearizationBlocks, NilError, NilpotentAlgebra,
};
pub use spectral::{BoundReport, SpectralError};
