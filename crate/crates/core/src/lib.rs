//! Finite orthogonal polynomials of the Askey scheme over exact rationals.
//!
//! Twelve families on the lattice `x = 0..=N`, their difference operators, the zero-norm
//! (virtual) polynomials obtained by dividing out the lattice polynomial, Darboux
//! transformations built from them, and the shape-invariance identities they satisfy.
#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod arith;
pub mod darboux;
pub mod diophantine;
pub mod error;
pub mod family;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod shape;
pub mod spectral;
pub mod verify;

pub use arith::Rational;
pub use error::{ArithError, Error};
pub use family::{CoordClass, FamilyId, FamilyParams, Lambda};
pub use poly::EtaPolynomial;
