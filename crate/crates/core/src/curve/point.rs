use crate::modarith::crt_u64;
use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

use super::local::LocalPoint;

/// Zero: z = 0 mod N. Strongly non-zero: gcd(z, N) = 1. Anything else is
/// non-zero but not strongly so.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointClass {
    Zero,
    NonZeroNotStrong,
    StronglyNonZero,
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointClass::Zero => "zero",
            PointClass::NonZeroNotStrong => "non-zero",
            PointClass::StronglyNonZero => "strongly-non-zero",
        })
    }
}

/// A point of E(Z/NZ), stored as canonical components modulo each prime
/// power of N. Two points are equal iff all components are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    pub(crate) parts: Vec<LocalPoint>,
    pub(crate) moduli: Arc<[u64]>,
}

impl ProjPoint {
    pub fn modulus(&self) -> BigUint {
        self.moduli
            .iter()
            .fold(BigUint::from(1u32), |acc, &q| acc * q)
    }

    pub fn components(&self) -> &[LocalPoint] {
        &self.parts
    }

    pub fn component_moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// Coordinates mod N. Strongly non-zero points come out with z = 1 and
    /// the identity as (0 : 1 : 0).
    pub fn coords(&self) -> (BigUint, BigUint, BigUint) {
        let pick = |f: fn(&LocalPoint) -> u64| {
            let rs: Vec<_> = self
                .parts
                .iter()
                .zip(self.moduli.iter())
                .map(|(pt, &q)| (f(pt), q))
                .collect();
            crt_u64(&rs)
        };
        (pick(|p| p.x), pick(|p| p.y), pick(|p| p.z))
    }

    pub fn class(&self) -> PointClass {
        if self.parts.iter().all(|p| p.z == 0) {
            PointClass::Zero
        } else if self
            .parts
            .iter()
            .zip(self.moduli.iter())
            .all(|(p, &q)| p.z.gcd(&q) == 1)
        {
            PointClass::StronglyNonZero
        } else {
            PointClass::NonZeroNotStrong
        }
    }

    pub fn is_identity(&self) -> bool {
        self.parts.iter().all(|p| *p == LocalPoint::IDENTITY)
    }

    pub fn is_zero(&self) -> bool {
        self.class() == PointClass::Zero
    }

    pub fn is_strong(&self) -> bool {
        self.class() == PointClass::StronglyNonZero
    }

    /// Strongly non-zero with y = 0 mod N, i.e. of the form (x : 0 : 1).
    pub fn is_strong_two_torsion(&self) -> bool {
        self.is_strong() && self.parts.iter().all(|p| p.y == 0)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y, z) = self.coords();
        write!(f, "{x}:{y}:{z} mod {}", self.modulus())
    }
}

/// Serialized form of a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    pub x: String,
    pub y: String,
    pub z: String,
    pub n: String,
}

impl From<&ProjPoint> for PointRecord {
    fn from(p: &ProjPoint) -> Self {
        let (x, y, z) = p.coords();
        PointRecord {
            x: x.to_string(),
            y: y.to_string(),
            z: z.to_string(),
            n: p.modulus().to_string(),
        }
    }
}
