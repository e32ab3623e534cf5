//! Exact tooling for deciding whether concrete homogeneous polynomial
//! systems over finite fields define set-theoretic or ideal-theoretic
//! complete intersections, nonsingular varieties, or absolutely irreducible
//! varieties, together with the closed-form degree, probability and
//! counting bounds that govern how often random systems have these
//! properties.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`]: arithmetic in `F_q`, `q = p^k`, and embeddings into extensions.
//! * [`homopoly`]: sparse homogeneous polynomials, degree patterns, Jacobian
//!   minors and the four certificate test systems.
//! * [`macaulay`]: the projective emptiness test for `n+1` forms in `n+1`
//!   variables, via the rank of a Macaulay matrix.
//! * [`chow`]: truncated Chow-ring products used to extract degree bounds.
//! * [`bounds`]: every closed-form quantity (pattern statistics, degree and
//!   probability bounds, pattern landscapes, factorization counts).
//! * [`census`]: exhaustive and Monte Carlo censuses plus brute-force oracles.

pub mod bounds;
pub mod census;
pub mod chow;
pub mod error;
pub mod field;
pub mod homopoly;
pub mod macaulay;
pub mod numfmt;

pub use error::{Error, Result};
pub use field::{Elem, Field};
pub use homopoly::{Certificate, DegreePattern, HomoPoly, Monomial, PolySystem, TestSystem};
