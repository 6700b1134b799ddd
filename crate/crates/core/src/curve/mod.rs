//! Short Weierstrass curves over Z/NZ, their points and the group law.

mod group;
mod local;
mod point;
pub mod rational;
mod structure;

pub use group::{AffineSum, CurveGroup, DEFAULT_POINT_CAP};
pub(crate) use local::{raw_mul, raw_on_curve};
pub use local::{LocalCurve, LocalPoint};
pub use point::{PointClass, PointRecord, ProjPoint};
pub use structure::Reachability;

use crate::modarith::reduce_u64;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// y^2 = x^3 + A x + B, optionally tagged with CM by an order in Q(sqrt(-d)).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Curve {
    a: BigInt,
    b: BigInt,
    cm_disc: Option<u64>,
}

impl Curve {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Curve {
            a: a.into(),
            b: b.into(),
            cm_disc: None,
        }
    }

    pub fn with_cm(mut self, d: u64) -> Self {
        self.cm_disc = Some(d);
        self
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn cm_disc(&self) -> Option<u64> {
        self.cm_disc
    }

    /// 4A^3 + 27B^2.
    pub fn disc_inner(&self) -> BigInt {
        BigInt::from(4) * &self.a * &self.a * &self.a + BigInt::from(27) * &self.b * &self.b
    }

    /// -16(4A^3 + 27B^2).
    pub fn discriminant(&self) -> BigInt {
        BigInt::from(-16) * self.disc_inner()
    }

    pub fn is_singular(&self) -> bool {
        self.disc_inner().is_zero()
    }

    /// Good reduction at an odd prime means p does not divide 4A^3 + 27B^2.
    pub fn good_reduction_at(&self, p: u64) -> bool {
        p != 2 && reduce_u64(&self.disc_inner(), p) != 0
    }

    pub fn a_mod(&self, q: u64) -> u64 {
        reduce_u64(&self.a, q)
    }

    pub fn b_mod(&self, q: u64) -> u64 {
        reduce_u64(&self.b, q)
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})x + ({})", self.a, self.b)?;
        if let Some(d) = self.cm_disc {
            write!(f, " [d={d}]")?;
        }
        Ok(())
    }
}

/// Parses `A,B`.
impl FromStr for Curve {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| crate::Error::Parse(format!("curve must be A,B: {s:?}")))?;
        let parse = |t: &str| {
            BigInt::from_str(t.trim())
                .map_err(|_| crate::Error::Parse(format!("bad integer {t:?}")))
        };
        Ok(Curve::new(parse(a)?, parse(b)?))
    }
}

/// Discriminants d of imaginary quadratic orders of class number one that
/// have a curve with CM over Q in short form below.
pub const CM_DISCRIMINANTS: [u64; 9] = [1, 2, 3, 7, 11, 19, 43, 67, 163];

/// A short-form curve over Q with CM by the maximal order of Q(sqrt(-d)).
pub fn cm_curve(d: u64) -> Option<Curve> {
    let (a, b) = match d {
        1 => ("-1", "0"),
        2 => ("-36750", "2401000"),
        3 => ("0", "1"),
        7 => ("-7875", "-330750"),
        11 => ("-51744", "-4648336"),
        19 => ("-5472", "-155952"),
        43 => ("-4214000", "-3329586750"),
        67 => ("-151173207108000", "-715418812525615506000"),
        163 => (
            "-30056174633699993112642000",
            "-63423276123735942491056611552320342250",
        ),
        _ => return None,
    };
    let parse = |s: &str| BigInt::from_str(s).expect("table literal");
    Some(Curve::new(parse(a), parse(b)).with_cm(d))
}

/// The built-in CM table, one curve per discriminant.
pub fn cm_table() -> Vec<Curve> {
    CM_DISCRIMINANTS
        .iter()
        .filter_map(|&d| cm_curve(d))
        .collect()
}
