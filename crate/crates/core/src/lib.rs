//! Order-2 ideal classes in real quadratic fields `K = Q(√m)`.
//!
//! For `m = p₁⋯p_t` a product of distinct primes `pⱼ ≡ 1 (mod 4)`, every
//! representation `m = a² + 4b²` yields an ideal `𝔞 = (2b + √m, a)` whose
//! square is the principal ideal `(2b + √m)`. This crate builds those ideals
//! alongside the products of ramified primes `𝔟ₑ`, computes the 2-torsion of
//! the class group through indefinite binary quadratic forms, and checks how
//! the two families of classes relate depending on the sign of the norm of
//! the fundamental unit. A small layer covers the cyclic quartic fields
//! `Q(√(m + 2b√m))` attached to each representation.
//!
//! Module map:
//!
//! * [`arith`]: factoring, primality, square roots of −1, Cornacchia.
//! * [`reps`]: all essentially different `m = a² + 4b²`.
//! * [`quadfield`]: elements of the maximal order, continued fractions, units.
//! * [`forms`]: reduction, cycles, composition, class enumeration.
//! * [`ideals`]: normal-form ideals and the ideals `𝔞`, `𝔭ⱼ`, `𝔟ₑ`.
//! * [`quartic`]: quartic characters, minimal polynomials, discriminants.
//! * [`verify`]: per-`m` classification reports and range scans.
//! * [`cli`]: command-line front end and report serialization.

pub mod arith;
pub mod cli;
mod error;
pub mod forms;
pub mod ideals;
pub mod quadfield;
pub mod quartic;
pub mod reps;
pub mod verify;

pub use error::{Error, InvalidReason, Result};
