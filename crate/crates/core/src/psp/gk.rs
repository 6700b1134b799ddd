use crate::curve::{raw_mul, raw_on_curve, Curve};
use crate::error::{Error, Result};
use crate::modarith::{is_prime_u64, reduce_u64, Factorization};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Outcome of checking a Goldwasser-Kilian certificate (E, M, P) for N.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GkReport {
    /// M > (N^(1/4) + 1)^2.
    pub size_ok: bool,
    /// MP is zero mod N.
    pub mp_zero: bool,
    /// (M/q)P is strongly non-zero for every prime q | M.
    pub cofactors_strong: bool,
}

impl GkReport {
    pub fn is_valid(&self) -> bool {
        self.size_ok && self.mp_zero && self.cofactors_strong
    }
}

/// M > (N^(1/4) + 1)^2, decided exactly: with u = sqrt(M) the condition
/// is (u - 1)^4 > N, i.e. M^2 + 6M + 1 - N > 4(M + 1)u.
pub fn gk_size_ok(n: &BigUint, m: &BigUint) -> bool {
    if *m <= BigUint::from(1u32) {
        return false;
    }
    let (n, m) = (BigInt::from(n.clone()), BigInt::from(m.clone()));
    let lhs = &m * &m + 6 * &m + 1 - n;
    if lhs <= BigInt::zero() {
        return false;
    }
    let k = 4 * (&m + 1);
    &lhs * &lhs > &k * &k * m
}

/// Verify a certificate for N < 2^63. Arithmetic is done modulo N without
/// knowing its factorization; a degenerate sum makes the certificate invalid.
/// A valid certificate for a composite N is reported as an error.
pub fn gk_certificate_check(
    curve: &Curve,
    n: u64,
    m: &BigUint,
    point: (&BigInt, &BigInt, &BigInt),
    m_factors: &Factorization,
) -> Result<GkReport> {
    if n < 3 || n.is_multiple_of(2) || n >= 1 << 63 {
        return Err(Error::InvalidModulus(format!("{n}")));
    }
    if !BigInt::from(n)
        .gcd(&curve.disc_inner())
        .eq(&BigInt::from(1))
    {
        return Err(Error::InvalidArgument(format!("gcd({n}, disc) != 1")));
    }
    if m_factors.n() != m {
        return Err(Error::InvalidArgument(
            "factorization does not match M".into(),
        ));
    }
    let (a, b) = (curve.a_mod(n), curve.b_mod(n));
    let p = [
        reduce_u64(point.0, n),
        reduce_u64(point.1, n),
        reduce_u64(point.2, n),
    ];
    if !raw_on_curve(a, b, n, p) {
        return Err(Error::NotOnCurve);
    }
    let size_ok = gk_size_ok(&BigUint::from(n), m);
    let mp_zero = matches!(raw_mul(a, b, n, m, p), Some(r) if r[2] == 0);
    let cofactors_strong = m_factors
        .primes()
        .all(|q| matches!(raw_mul(a, b, n, &(m / q), p), Some(r) if r[2].gcd(&n) == 1));
    let report = GkReport {
        size_ok,
        mp_zero,
        cofactors_strong,
    };
    if report.is_valid() && !is_prime_u64(n) {
        return Err(Error::TheoremViolation(format!(
            "certificate accepted for composite {n}"
        )));
    }
    Ok(report)
}
