//! Integer and rational primitives: modular arithmetic on machine words,
//! Jacobi symbols, inverses that report factors, valuations and CRT.

mod factor;
mod ratio;

pub use factor::{factor_u64, is_prime_u64, Factorization, DEFAULT_TRIAL_BOUND};
pub use ratio::Ratio;

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Legendre symbol for an odd prime `p` via Euler's criterion.
pub fn legendre(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Jacobi symbol (a/n) for odd positive `n`.
pub fn jacobi(a: &BigInt, n: &BigUint) -> Result<i8> {
    if n.is_zero() || n.is_even() {
        return Err(Error::InvalidArgument(format!(
            "Jacobi symbol needs an odd positive modulus, got {n}"
        )));
    }
    let mut n = n.clone();
    let mut a = reduce(a, &n);
    let mut sign = 1i8;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let n8 = (&n % 8u32).to_u32_digits().first().copied().unwrap_or(0);
        if tz % 2 == 1 && (n8 == 3 || n8 == 5) {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        let a4 = (&a % 4u32).to_u32_digits().first().copied().unwrap_or(0);
        let n4 = (&n % 4u32).to_u32_digits().first().copied().unwrap_or(0);
        if a4 == 3 && n4 == 3 {
            sign = -sign;
        }
        a %= &n;
    }
    Ok(if n.is_one() { sign } else { 0 })
}

/// Convenience wrapper for machine-sized arguments.
pub fn jacobi_i64(a: i64, n: u64) -> Result<i8> {
    jacobi(&BigInt::from(a), &BigUint::from(n))
}

/// Least non-negative residue of a signed integer.
pub fn reduce(a: &BigInt, n: &BigUint) -> BigUint {
    let n = BigInt::from(n.clone());
    a.mod_floor(&n)
        .to_biguint()
        .expect("mod_floor is non-negative")
}

/// Least non-negative residue of a signed integer modulo a word.
pub fn reduce_u64(a: &BigInt, m: u64) -> u64 {
    let r = a.mod_floor(&BigInt::from(m));
    r.to_u64_digits().1.first().copied().unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InverseOrFactor {
    Inverse(BigUint),
    FactorFound(BigUint),
    ZeroDivisorTotal,
}

pub fn inverse_or_factor(a: &BigInt, n: &BigUint) -> Result<InverseOrFactor> {
    if *n < BigUint::from(2u32) {
        return Err(Error::InvalidModulus(format!("{n} < 2")));
    }
    let ar = reduce(a, n);
    let g = ar.gcd(n);
    if g.is_one() {
        let ext = BigInt::from(ar).extended_gcd(&BigInt::from(n.clone()));
        Ok(InverseOrFactor::Inverse(reduce(&ext.x, n)))
    } else if &g == n {
        Ok(InverseOrFactor::ZeroDivisorTotal)
    } else {
        Ok(InverseOrFactor::FactorFound(g))
    }
}

/// p-adic valuation of `n`.
pub fn nu(p: &BigUint, n: &BigUint) -> Result<u32> {
    if n.is_zero() || *p < BigUint::from(2u32) {
        return Err(Error::InvalidArgument("nu needs p >= 2 and n >= 1".into()));
    }
    let mut n = n.clone();
    let mut e = 0;
    while (&n % p).is_zero() {
        n /= p;
        e += 1;
    }
    Ok(e)
}

/// p-adic valuation for machine words; `n` must be non-zero.
pub fn nu_u64(p: u64, mut n: u64) -> u32 {
    debug_assert!(p >= 2 && n != 0);
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    e
}

/// Solve x = r_i mod m_i. Returns (x, prod m_i).
pub fn crt_combine(residues: &[(BigUint, BigUint)]) -> Result<(BigUint, BigUint)> {
    let mut x = BigUint::zero();
    let mut m = BigUint::one();
    for (r, mi) in residues {
        if mi.is_zero() {
            return Err(Error::InvalidModulus("0".into()));
        }
        if !m.gcd(mi).is_one() {
            return Err(Error::NonCoprimeModuli);
        }
        // x + m * k = r mod mi
        let inv = match inverse_or_factor(&BigInt::from(m.clone()), mi)? {
            InverseOrFactor::Inverse(u) => u,
            _ if mi.is_one() => BigUint::zero(),
            _ => return Err(Error::NonCoprimeModuli),
        };
        let diff = reduce(&(BigInt::from(r.clone()) - BigInt::from(x.clone())), mi);
        let k = (diff * inv) % mi;
        x += &m * k;
        m *= mi;
        x %= &m;
    }
    Ok((x, m))
}

/// CRT for word-sized moduli whose product may exceed a word.
pub fn crt_u64(residues: &[(u64, u64)]) -> BigUint {
    let pairs: Vec<_> = residues
        .iter()
        .map(|&(r, m)| (BigUint::from(r), BigUint::from(m)))
        .collect();
    crt_combine(&pairs).expect("component moduli are coprime").0
}

/// Integer k-th root (floor).
pub fn iroot(n: &BigUint, k: u32) -> BigUint {
    n.nth_root(k)
}

pub(crate) fn to_u64(n: &BigUint) -> Option<u64> {
    let d = n.to_u64_digits();
    match d.len() {
        0 => Some(0),
        1 => Some(d[0]),
        _ => None,
    }
}
