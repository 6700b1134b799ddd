//! Points of E(Q) in affine rational coordinates, used to reduce a fixed
//! rational point modulo many N and to screen out torsion inputs.

use super::Curve;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A point of E(Q): `None` is the point at infinity.
pub type RationalPoint = Option<(BigRational, BigRational)>;

pub fn rational_point(curve: &Curve, x: BigRational, y: BigRational) -> Result<RationalPoint> {
    let a = BigRational::from_integer(curve.a().clone());
    let b = BigRational::from_integer(curve.b().clone());
    if &y * &y != &x * &x * &x + a * &x + b {
        return Err(Error::NotOnCurve);
    }
    Ok(Some((x, y)))
}

pub fn add_rational(curve: &Curve, p: &RationalPoint, q: &RationalPoint) -> RationalPoint {
    let (Some((x1, y1)), Some((x2, y2))) = (p, q) else {
        return p.clone().or_else(|| q.clone());
    };
    let lam = if x1 == x2 {
        if (y1 + y2).is_zero() {
            return None;
        }
        let three = BigRational::from_integer(BigInt::from(3));
        let two = BigRational::from_integer(BigInt::from(2));
        (three * x1 * x1 + BigRational::from_integer(curve.a().clone())) / (two * y1)
    } else {
        (y2 - y1) / (x2 - x1)
    };
    let x3 = &lam * &lam - x1 - x2;
    let y3 = &lam * (x1 - &x3) - y1;
    Some((x3, y3))
}

/// Whether kP = O for some 1 <= k <= 12. Torsion points over Q have
/// order at most 12, so `false` means P has infinite order.
pub fn has_small_order(curve: &Curve, p: &RationalPoint) -> bool {
    let mut acc = p.clone();
    for _ in 1..=12 {
        if acc.is_none() {
            return true;
        }
        acc = add_rational(curve, &acc, p);
    }
    false
}

/// Numerator and denominator pair used to reduce a rational coordinate
/// modulo N: x = n/d becomes (n : ... : d) in projective form.
pub fn projective_integers(p: &RationalPoint) -> (BigInt, BigInt, BigInt) {
    match p {
        None => (BigInt::zero(), BigInt::one(), BigInt::zero()),
        Some((x, y)) => {
            // x = a/c^2 and y = b/c^3 for a point in lowest terms; use the
            // common denominator D of x and y: (x D : y D : D).
            let d = num_integer::lcm(x.denom().clone(), y.denom().clone());
            let xi = x.numer() * (&d / x.denom());
            let yi = y.numer() * (&d / y.denom());
            (xi, yi, d)
        }
    }
}
