//! Arithmetic of diagonal quartic surfaces a x^4 + b y^4 + c z^4 + d w^4 = 0
//! over number fields: decide from the coefficients whether odd-torsion
//! Brauer classes can obstruct weak approximation, and verify the underlying
//! local-field identities by exhaustive finite computation.
//!
//! - [`arith`]: arbitrary-precision primality, factoring, valuations.
//! - [`gaussian`]: Z[i], primary primes, places of Q(i), valuations.
//! - [`brauer`]: congruence depths, candidate supersets, exponent bounds.
//! - [`fielddata`]: surface descriptions and per-place ramification data.
//! - [`criteria`]: the weak-approximation checkers and verdicts.
//! - [`fflab`]: the supersingular curve over F_2, cyclic cohomology of
//!   Z[i]/p^m, and exact threshold inequalities.
//! - [`qp2`]: 2-adic numbers, Hilbert symbols, the Kummer-surface check.

pub mod arith;
pub mod brauer;
pub mod criteria;
pub mod error;
pub mod fielddata;
pub mod fflab;
pub mod gaussian;
pub mod qp2;

pub use error::{Error, Result};
