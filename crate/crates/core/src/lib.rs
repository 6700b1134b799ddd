//! Elliptic curves over Z/NZ with a total, CRT-backed group law; the
//! Gordon and Silverman elliptic pseudoprime tests and their strong
//! variants; strongly non-zero point theory; and an exact-rational
//! statistics engine for 2-adic point-order proportions.

pub mod error;
pub mod modarith;

pub use error::{Error, Result};
pub use modarith::{Factorization, Ratio};
pub mod curve;
pub mod fp;
pub mod lseries;
pub mod psp;
pub mod stats;

pub use curve::{Curve, CurveGroup, PointClass, ProjPoint};
