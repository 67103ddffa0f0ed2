use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{weighted_pm_sum, MatchingError};
use crate::diamonds::{build_diamond, DiamondGraph, HalfOrder};
use crate::laurent::{Exponents, LaurentPoly};
use crate::tiling::Tiling;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CondensationKind {
    /// `w(D_n) w(D_{n-3/2})`, for `n >= 2`.
    One,
    /// `w(D_{n+1/2}) w(D_{n-1})`, for `n >= 1`.
    Two,
}

impl CondensationKind {
    pub fn number(self) -> u8 {
        match self {
            CondensationKind::One => 1,
            CondensationKind::Two => 2,
        }
    }

    pub fn min_n(self) -> u32 {
        match self {
            CondensationKind::One => 2,
            CondensationKind::Two => 1,
        }
    }

    pub fn from_number(k: u8) -> Option<Self> {
        match k {
            1 => Some(CondensationKind::One),
            2 => Some(CondensationKind::Two),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondensationPair {
    pub first: DiamondGraph,
    pub second: DiamondGraph,
    pub monomial: Exponents,
}

/// `w(big) w(center) = w(pair1) mono1 + w(pair2) mono2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondensationInstance {
    pub n: u32,
    pub kind: CondensationKind,
    pub big: DiamondGraph,
    pub center: DiamondGraph,
    pub pair1: CondensationPair,
    pub pair2: CondensationPair,
}

/// `1 / (x1 x2 x3 x4 x5 x6)`, the first factor of both kinds.
pub const MONO1: Exponents = Exponents([-1; 6]);
/// `1 / (x1 x2^2 x3^2 x5)`, the second factor of both kinds.
pub const MONO2: Exponents = Exponents([-1, -2, -2, 0, -1, 0]);

pub fn condensation_instance(
    tiling: &Tiling,
    n: u32,
    kind: CondensationKind,
) -> Result<CondensationInstance, MatchingError> {
    if n < kind.min_n() {
        return Err(MatchingError::OutOfRange { kind: kind.number(), n, min: kind.min_n() });
    }
    let d = |big: u32, primed: bool| build_diamond(tiling, HalfOrder(big), primed);
    // half-orders of (big, center, pair)
    let (big, center, p, q) = match kind {
        CondensationKind::One => (2 * n, 2 * n - 3, 2 * n - 1, 2 * n - 2),
        CondensationKind::Two => (2 * n + 1, 2 * n - 2, 2 * n, 2 * n - 1),
    };
    Ok(CondensationInstance {
        n,
        kind,
        big: d(big, false),
        center: d(center, false),
        pair1: CondensationPair { first: d(p, false), second: d(q, false), monomial: MONO1 },
        pair2: CondensationPair { first: d(p, true), second: d(q, true), monomial: MONO2 },
    })
}

/// Both sides of a checked identity; `difference` is `lhs - rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondensationDiff {
    pub lhs: LaurentPoly<BigInt>,
    pub rhs: LaurentPoly<BigInt>,
    pub difference: LaurentPoly<BigInt>,
}

impl CondensationDiff {
    pub fn holds(&self) -> bool {
        self.difference.is_zero()
    }
}

/// Computes all six matching polynomials separately and compares both sides.
pub fn verify_condensation(inst: &CondensationInstance) -> Result<CondensationDiff, MatchingError> {
    let w = weighted_pm_sum;
    let lhs = w(&inst.big)? * w(&inst.center)?;
    let side = |p: &CondensationPair| -> Result<LaurentPoly<BigInt>, MatchingError> {
        Ok((w(&p.first)? * w(&p.second)?).mul_monomial(&p.monomial))
    };
    let rhs = side(&inst.pair1)? + side(&inst.pair2)?;
    let difference = &lhs - &rhs;
    Ok(CondensationDiff { lhs, rhs, difference })
}
