//! Exact arithmetic for algebraic continued fractions over F₂((1/t)).
//!
//! The crate builds continued fractions whose partial quotients are two fixed
//! polynomials a, b over the two-element field, following the period-doubling
//! and Prouhet–Thue–Morse substitution sequences, and verifies the algebraic
//! and differential identities these expansions satisfy:
//!
//!   * bit-packed polynomial arithmetic over F₂[t] ([`gf2poly`]),
//!   * truncated Laurent series in 1/t with guaranteed-precision windows
//!     ([`laurent`]),
//!   * two-letter words, substitution morphisms and their fixed points
//!     ([`words`]),
//!   * continuants, convergents and continued-fraction expansion
//!     ([`contfrac`]),
//!   * the quartic relation A·x⁴+B·x³+C·x²+1 = 0 of the period-doubling
//!     expansion, its u/v doubling recurrences, and the Riccati / Baum–Sweet
//!     differential criteria ([`verifier`]),
//!   * relation mining from truncated series data by exact linear algebra
//!     over F₂ ([`miner`]).

mod bits;

pub mod contfrac;
pub mod error;
pub mod gf2poly;
pub mod laurent;
pub mod miner;
pub mod verifier;
pub mod words;

pub use contfrac::{Convergent, PartialQuotients};
pub use error::{Error, Result};
pub use gf2poly::Poly2;
pub use laurent::{Leading, Series};
pub use miner::{MinerConfig, Relation};
pub use verifier::{CheckRecord, Quartic, Report};
pub use words::{Letter, LetterAssignment, Morphism, NamedSequence, Word};
