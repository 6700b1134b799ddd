//! Dirichlet coefficients a_n of L(E, s): a_p from point counts, the
//! prime-power recursion and multiplicativity.

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::fp::count_points_any;
use crate::modarith::{is_prime_u64, Factorization};
use num_bigint::BigInt;
use num_traits::One;
use std::collections::HashMap;
use std::sync::RwLock;

/// Coefficients of one curve, memoized by prime power. Safe to share
/// between threads; concurrent misses may compute a value twice.
#[derive(Debug)]
pub struct LCoeffContext {
    curve: Curve,
    cache: RwLock<HashMap<(u64, u32), BigInt>>,
}

impl LCoeffContext {
    pub fn new(curve: &Curve) -> Self {
        LCoeffContext {
            curve: curve.clone(),
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    /// 1 if E has good reduction at p, else 0.
    pub fn good_reduction(&self, p: u64) -> bool {
        self.curve.good_reduction_at(p)
    }

    /// a_p = p + 1 - #E(F_p), with the singular count at bad primes.
    pub fn a_p(&self, p: u64) -> Result<BigInt> {
        self.a_prime_power(p, 1)
    }

    pub fn a_prime_power(&self, p: u64, e: u32) -> Result<BigInt> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Ok(BigInt::one());
        }
        if let Some(v) = self.cache.read().expect("cache lock").get(&(p, e)) {
            return Ok(v.clone());
        }
        let v = if e == 1 {
            BigInt::from(p) + 1 - BigInt::from(count_points_any(&self.curve, p)?)
        } else {
            let ap = self.a_prime_power(p, 1)?;
            let prev = self.a_prime_power(p, e - 1)?;
            let mut v = ap * prev;
            if self.good_reduction(p) {
                v -= BigInt::from(p) * self.a_prime_power(p, e - 2)?;
            }
            v
        };
        self.cache
            .write()
            .expect("cache lock")
            .insert((p, e), v.clone());
        Ok(v)
    }

    /// a_N as the product of its prime-power coefficients.
    pub fn a_n(&self, n: &Factorization) -> Result<BigInt> {
        n.factors().iter().try_fold(BigInt::one(), |acc, &(p, e)| {
            Ok(acc * self.a_prime_power(p, e)?)
        })
    }
}
