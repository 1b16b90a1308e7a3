//! Exact arithmetic for quaternion algebras over ℚ and their ℤ-orders.
//!
//! The crate is organised bottom-up:
//!
//! - [`exactnum`]: valuations, residue symbols, the 2-adic quadratic defect,
//!   primality and bounded prime search.
//! - [`quadforms`]: integral quadratic forms, p-adic Jordan decompositions,
//!   local similarity and the catalog of standard ternary forms.
//! - [`quatalg`]: quaternion algebras `(a,b)_ℚ`, Hilbert symbols, ramification
//!   and construction of an algebra from its discriminant.
//! - [`orders`]: lattices and orders, discriminants, duals, the order ↔
//!   ternary form correspondence, Gorenstein closures and maximal orders.
//! - [`localclass`]: per-prime classification of orders, the Eichler
//!   invariant, and counts of local isomorphism classes and genera.
//!
//! All arithmetic is exact: integers are [`BigInt`] and rationals are
//! [`Rational`].

pub mod error;
pub mod exactnum;
mod linalg;
pub mod localclass;
pub mod orders;
pub mod quadforms;
pub mod quatalg;
pub mod serde_util;

pub use num_bigint::BigInt;

/// Exact rational numbers used throughout the crate.
pub type Rational = num_rational::BigRational;

/// Coordinates of a quaternion in the basis `1, i, j, ij`.
pub type Coords = [Rational; 4];

pub use error::{Error, Result};
pub use exactnum::{Place, Prime};
pub use localclass::{EichlerInvariant, LocalOrderClass, OrderCategory};
pub use orders::{Lattice, MaximalOrderCertificate, Order};
pub use quadforms::{LocalKind, QuadraticForm, Side, StandardFormLabel};
pub use quatalg::{QuaternionAlgebra, QuaternionElement, Ramification};
