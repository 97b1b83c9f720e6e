//! Exact tools for the polynomials `f(X) = X^a (X - A)^(n-a) + A`: hypothesis
//! checks on `(n, a, A)`, local certificates (Eisenstein, tame ramification at
//! infinity, transpositions from the critical orbit), a permutation-group
//! engine for automorphisms of the `n`-ary rooted tree, and Frobenius
//! sampling of iterates modulo primes.

pub mod arith;
pub mod certificates;
pub mod chebotarev;
pub mod error;
pub mod newton;
pub mod params;
pub mod poly;
pub mod ring;
pub mod tree;

pub use error::{Error, Result};

/// Exact rationals; the internal denominator is always positive.
pub type Rational = num_rational::BigRational;
pub type PolyRat = poly::Poly<Rational>;
pub type PolyInt = poly::Poly<num_bigint::BigInt>;
/// Polynomials in `X` whose coefficients are polynomials in a parameter `t`.
pub type PolyRatT = poly::Poly<PolyRat>;
pub type PolyF64 = poly::Poly<f64>;

pub use arith::{Prime, Valuation};
pub use poly::fp::PolyFp;
pub use poly::zn::PolyZn;
pub use poly::Poly;
