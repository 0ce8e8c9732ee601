//! Exact classification of fixed loci of non-symplectic automorphisms on
//! K3 surfaces.
//!
//! An automorphism of finite order acting on the holomorphic 2-form by a
//! primitive root of unity fixes a disjoint union of isolated points and
//! smooth curves. The holomorphic and topological Lefschetz fixed-point
//! formulas turn that geometry into exact linear constraints on the
//! multiplicities of local fixed-point types. This crate builds those
//! constraints over cyclotomic fields, with arbitrary-precision rational
//! arithmetic throughout, and exhaustively enumerates every integer
//! configuration compatible with them.
//!
//! Modules:
//!
//! - [`cyclotomic`] — exact arithmetic in Q(zeta_n) and cyclotomic polynomials
//! - [`lattice`] — even lattices by Gram matrix and rank bookkeeping
//! - [`lefschetz`] — fixed-point types, Lefschetz terms, constraint systems
//! - [`enumerate`] — power-map compatibility and exhaustive integer search
//! - [`weierstrass`] — diagonal-action checks on monomial Weierstrass models
//! - [`report`] — scenario files and machine/human solution reports
//!
//! No floating point enters any result; the `embed` helpers exist only so
//! tests can compare exact values against numeric evaluation.

pub mod cyclotomic;
pub mod enumerate;
pub mod error;
pub mod lattice;
pub mod lefschetz;
pub mod report;
pub mod weierstrass;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Exact rational scalar carrying every coefficient in the crate.
///
/// Stored in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer as a [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for the fraction `n / d` as a [`Rational`].
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
