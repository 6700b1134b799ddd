use super::{mul_mod, pow_mod, to_u64};
use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

// Sufficient for every n < 3.3 * 10^24, in particular all 64-bit inputs.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Full factorization of a word by trial division. Intended for group
/// orders at enumeration scale.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    let mut p = 3u64;
    while p.saturating_mul(p) <= n {
        if is_prime_u64(n) {
            break;
        }
        push(p, &mut n);
        p += 2;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// A positive integer with its prime factorization (primes increasing,
/// each fitting in 64 bits).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    n: BigUint,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Factor an odd `n` by trial division up to the default bound plus a
    /// primality test on the cofactor.
    pub fn new(n: &BigUint) -> Result<Self> {
        Self::with_bound(n, DEFAULT_TRIAL_BOUND, false)
    }

    pub fn from_u64(n: u64) -> Result<Self> {
        Self::new(&BigUint::from(n))
    }

    /// Like [`Factorization::new`] but allowing the prime 2.
    pub fn new_allow_even(n: &BigUint) -> Result<Self> {
        Self::with_bound(n, DEFAULT_TRIAL_BOUND, true)
    }

    pub fn with_bound(n: &BigUint, bound: u64, allow_even: bool) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::InvalidModulus("0".into()));
        }
        let mut rest = n.clone();
        let mut factors = Vec::new();
        let mut p = 2u64;
        while p <= bound {
            if let Some(r) = to_u64(&rest) {
                if r == 1 || is_prime_u64(r) || p.saturating_mul(p) > r {
                    break;
                }
            }
            let bp = BigUint::from(p);
            let mut e = 0;
            while (&rest % &bp).is_zero() {
                rest /= &bp;
                e += 1;
            }
            if e > 0 {
                factors.push((p, e));
            }
            p = if p == 2 { 3 } else { p + 2 };
        }
        if !rest.is_one() {
            match to_u64(&rest) {
                Some(r) if is_prime_u64(r) => match factors.last_mut() {
                    Some((q, e)) if *q == r => *e += 1,
                    _ => factors.push((r, 1)),
                },
                _ => return Err(Error::FactorizationFailed(n.to_string())),
            }
        }
        factors.sort_unstable();
        Self::checked(n.clone(), factors, allow_even)
    }

    /// Build from explicit prime powers, verifying primality.
    pub fn from_factors(factors: &[(u64, u32)]) -> Result<Self> {
        Self::from_factors_impl(factors, false)
    }

    pub fn from_factors_allow_even(factors: &[(u64, u32)]) -> Result<Self> {
        Self::from_factors_impl(factors, true)
    }

    fn from_factors_impl(factors: &[(u64, u32)], allow_even: bool) -> Result<Self> {
        let mut fs: Vec<(u64, u32)> = Vec::new();
        let mut sorted = factors.to_vec();
        sorted.sort_unstable();
        for (p, e) in sorted {
            if e == 0 {
                continue;
            }
            match fs.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => fs.push((p, e)),
            }
        }
        let n = fs
            .iter()
            .fold(BigUint::one(), |acc, &(p, e)| acc * BigUint::from(p).pow(e));
        Self::checked(n, fs, allow_even)
    }

    fn checked(n: BigUint, factors: Vec<(u64, u32)>, allow_even: bool) -> Result<Self> {
        for &(p, _) in &factors {
            if !is_prime_u64(p) {
                return Err(Error::NotPrime(p));
            }
            if p == 2 && !allow_even {
                return Err(Error::InvalidModulus(format!("{n} is even")));
            }
        }
        Ok(Factorization { n, factors })
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn distinct_primes(&self) -> usize {
        self.factors.len()
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    /// Composite in the usual sense: more than one prime factor counted
    /// with multiplicity.
    pub fn is_composite(&self) -> bool {
        self.factors.iter().map(|&(_, e)| e).sum::<u32>() >= 2
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// The prime powers p^a as words; fails if one exceeds 2^63.
    pub fn prime_powers(&self) -> Result<Vec<u64>> {
        self.factors
            .iter()
            .map(|&(p, e)| {
                p.checked_pow(e)
                    .filter(|&q| q < (1 << 63))
                    .ok_or_else(|| Error::InvalidModulus(format!("{p}^{e} exceeds 2^63")))
            })
            .collect()
    }

    /// Factorization of the largest divisor not divisible by the last prime.
    pub fn without_last(&self) -> Option<Factorization> {
        if self.factors.len() < 2 {
            return None;
        }
        let fs = &self.factors[..self.factors.len() - 1];
        Some(Self::from_factors_allow_even(fs).expect("sub-factorization of a valid one"))
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n)?;
        if self.factors.len() > 1 || self.factors.iter().any(|&(_, e)| e > 1) {
            write!(f, "=")?;
            for (i, (p, e)) in self.factors.iter().enumerate() {
                if i > 0 {
                    write!(f, "*")?;
                }
                if *e == 1 {
                    write!(f, "{p}")?;
                } else {
                    write!(f, "{p}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Accepts `N`, `N=p^a*q^b` or `p^a*q^b`.
impl FromStr for Factorization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (lhs, rhs) = match s.split_once('=') {
            Some((l, r)) => (Some(l.trim()), Some(r.trim())),
            None if s.contains('*') || s.contains('^') => (None, Some(s)),
            None => (Some(s), None),
        };
        let Some(rhs) = rhs else {
            let n = BigUint::from_str(lhs.unwrap_or_default())
                .map_err(|_| Error::Parse(format!("bad integer {s:?}")))?;
            return Factorization::new(&n);
        };
        let mut fs = Vec::new();
        for term in rhs.split('*') {
            let (p, e) = match term.split_once('^') {
                Some((p, e)) => (p.trim(), e.trim()),
                None => (term.trim(), "1"),
            };
            let p: u64 = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime {p:?}")))?;
            let e: u32 = e
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?;
            fs.push((p, e));
        }
        let fac = Factorization::from_factors(&fs)?;
        if let Some(l) = lhs {
            let n = BigUint::from_str(l).map_err(|_| Error::Parse(format!("bad integer {l:?}")))?;
            if &n != fac.n() {
                return Err(Error::Parse(format!(
                    "{l} does not equal the product {rhs}"
                )));
            }
        }
        Ok(fac)
    }
}
