//! Laurent polynomials, the dP3 quiver and its mutations, the dP3 brane
//! tiling with its diamonds, and perfect matchings of those diamonds.
//!
//! The core types are generic over the coefficient or count type; the
//! aliases below fix the exact big-integer instances used throughout.

pub mod diamonds;
pub mod laurent;
pub mod matchings;
pub mod quiver;
pub mod tiling;
pub mod verify;

use num_bigint::BigInt;

/// Laurent polynomial with arbitrary-precision integer coefficients.
pub type Poly = laurent::LaurentPoly<BigInt>;
/// Seed with arbitrary-precision integer coefficients.
pub type BigSeed = quiver::Seed<BigInt>;
/// Memoised exchange recurrence over arbitrary-precision integers.
pub type BigRecurrence = quiver::YRecurrence<BigInt>;
