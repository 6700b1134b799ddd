//! Curves over F_p: point counts, the (s, r, t, w) group structure,
//! anomalous primes, roots of the cubic and the cubic census.

use crate::curve::{Curve, CurveGroup, LocalCurve};
use crate::error::{Error, Result};
use crate::modarith::{is_prime_u64, legendre, mul_mod, nu_u64, Factorization, Ratio};
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;

/// #E(F_p) for y^2 = x^3 + ax + b with p an odd prime, by Euler's
/// criterion. Also valid for singular cubics.
pub fn count_points_raw(a: u64, b: u64, p: u64) -> u64 {
    let (a, b) = (a % p, b % p);
    let mut n = 1u64;
    for x in 0..p {
        let f = (mul_mod(mul_mod(x, x, p), x, p) + mul_mod(a, x, p) + b) % p;
        n += (1 + legendre(f, p) as i64) as u64;
    }
    n
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::UnsupportedPrime(2));
    }
    Ok(())
}

fn check_good(curve: &Curve, p: u64) -> Result<()> {
    check_prime(p)?;
    if !curve.good_reduction_at(p) {
        return Err(Error::BadReduction { p });
    }
    Ok(())
}

/// #E(F_p), identity included. Requires good reduction at the odd prime p.
pub fn count_points(curve: &Curve, p: u64) -> Result<u64> {
    check_good(curve, p)?;
    Ok(count_points_raw(curve.a_mod(p), curve.b_mod(p), p))
}

/// Number of projective points of the (possibly singular) cubic mod p,
/// for any prime p including 2.
pub fn count_points_any(curve: &Curve, p: u64) -> Result<u64> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    let (a, b) = (curve.a_mod(p), curve.b_mod(p));
    if p == 2 {
        let affine = (0..2u64)
            .flat_map(|x| (0..2u64).map(move |y| (x, y)))
            .filter(|&(x, y)| (y * y) % 2 == (x * x * x + a * x + b) % 2)
            .count() as u64;
        return Ok(affine + 1);
    }
    Ok(count_points_raw(a, b, p))
}

pub fn is_anomalous(curve: &Curve, p: u64) -> Result<bool> {
    Ok(count_points(curve, p)? == p)
}

/// A finite abelian group Z/2^s t + Z/2^r w with s <= r, t and w odd and
/// 2^s t dividing 2^r w.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupStructure {
    pub s: u32,
    pub r: u32,
    pub t: u64,
    pub w: u64,
}

impl GroupStructure {
    pub fn new(s: u32, r: u32, t: u64, w: u64) -> Result<Self> {
        let g = GroupStructure { s, r, t, w };
        if s > r
            || t.is_multiple_of(2)
            || w.is_multiple_of(2)
            || t == 0
            || w == 0
            || !w.is_multiple_of(t)
        {
            return Err(Error::InvalidArgument(format!("invalid structure {g}")));
        }
        Ok(g)
    }

    /// From invariant factors n1 | n2 of Z/n1 + Z/n2.
    pub fn from_invariants(n1: u64, n2: u64) -> Result<Self> {
        if n1 == 0 || !n2.is_multiple_of(n1) {
            return Err(Error::InvalidArgument(format!("{n1} does not divide {n2}")));
        }
        let (s, r) = (nu_u64(2, n1), nu_u64(2, n2));
        Self::new(s, r, n1 >> s, n2 >> r)
    }

    pub fn n1(&self) -> u64 {
        self.t << self.s
    }

    pub fn n2(&self) -> u64 {
        self.w << self.r
    }

    pub fn order(&self) -> u64 {
        self.n1() * self.n2()
    }

    pub fn exponent(&self) -> u64 {
        self.n2()
    }
}

impl fmt::Display for GroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Z/{} + Z/{} (s={}, r={}, t={}, w={})",
            self.n1(),
            self.n2(),
            self.s,
            self.r,
            self.t,
            self.w
        )
    }
}

/// Structure of E(F_p) from the orders of all its points.
pub fn group_structure(curve: &Curve, p: u64) -> Result<GroupStructure> {
    check_good(curve, p)?;
    let lc = LocalCurve::new(p, 1, curve.a_mod(p), curve.b_mod(p));
    structure_from_orders(
        lc.order(),
        lc.fp_points().iter().map(|pt| lc.point_order(pt)),
    )
}

/// Structure of E(Z/p^e) for a prime-power group (its p-part has rank at
/// most 2 because the p-torsion of E(F_p) is cyclic).
pub fn group_structure_of(group: &CurveGroup) -> Result<GroupStructure> {
    if group.components().len() != 1 {
        return Err(Error::InvalidArgument(
            "structure needs a prime-power modulus".into(),
        ));
    }
    let c = &group.components()[0];
    let pts = group.component_points(0)?;
    structure_from_orders(c.order(), pts.iter().map(|pt| c.point_order(pt)))
}

fn structure_from_orders(total: u64, orders: impl Iterator<Item = u64>) -> Result<GroupStructure> {
    let exponent = orders.fold(1u64, |acc, o| acc.lcm(&o));
    GroupStructure::from_invariants(total / exponent, exponent)
}

/// Number of distinct roots of x^3 + Ax + B mod p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootCount {
    NoRoots,
    OneRoot,
    ThreeRoots,
}

pub fn cubic_roots(a: i64, b: i64, p: u64) -> Result<RootCount> {
    check_prime(p)?;
    let curve = Curve::new(a, b);
    if !curve.good_reduction_at(p) {
        return Err(Error::InvalidArgument(format!(
            "x^3 + {a}x + {b} has a repeated root mod {p}"
        )));
    }
    let (a, b) = (curve.a_mod(p), curve.b_mod(p));
    let roots = (0..p)
        .filter(|&x| (mul_mod(mul_mod(x, x, p), x, p) + mul_mod(a, x, p) + b).is_multiple_of(p))
        .count();
    Ok(match roots {
        0 => RootCount::NoRoots,
        1 => RootCount::OneRoot,
        3 => RootCount::ThreeRoots,
        n => unreachable!("separable cubic with {n} roots"),
    })
}

/// Counts of monic cubics x^3 + ax^2 + bx + c over F_p by root pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub p: u64,
    pub no_roots: u64,
    pub one_root: u64,
    pub three_roots: u64,
    pub singular: u64,
}

impl CensusRecord {
    /// Counts predicted by counting factorization patterns.
    pub fn closed_form(p: u64) -> Self {
        let three = p * (p - 1) * (p - 2) / 6;
        let one = p * (p * p - p * (p - 1) / 2 - p);
        let singular = p * p;
        CensusRecord {
            p,
            no_roots: p * p * p - singular - three - one,
            one_root: one,
            three_roots: three,
            singular,
        }
    }

    pub fn nonsingular(&self) -> u64 {
        self.no_roots + self.one_root + self.three_roots
    }

    /// Proportions of (no roots, one root, three roots) among nonsingular cubics.
    pub fn proportions(&self) -> [Ratio; 3] {
        let n = self.nonsingular() as i64;
        [
            Ratio::new(self.no_roots as i64, n),
            Ratio::new(self.one_root as i64, n),
            Ratio::new(self.three_roots as i64, n),
        ]
    }

    /// (p+1)/3p, 1/2, (p-2)/6p.
    pub fn predicted_proportions(p: u64) -> [Ratio; 3] {
        let p = p as i64;
        [
            Ratio::new(p + 1, 3 * p),
            Ratio::new(1, 2),
            Ratio::new(p - 2, 6 * p),
        ]
    }
}

/// Exhaustive census of all p^3 monic cubics over F_p.
pub fn curve_census(p: u64) -> Result<CensusRecord> {
    check_prime(p)?;
    let parts: Vec<[u64; 4]> = (0..p)
        .into_par_iter()
        .map(|a| {
            let mut acc = [0u64; 4];
            let mut hits = vec![0u64; p as usize];
            for b in 0..p {
                hits.iter_mut().for_each(|h| *h = 0);
                for x in 0..p {
                    let g = (mul_mod(mul_mod(x, x, p), x + a, p) + mul_mod(b, x, p)) % p;
                    hits[g as usize] += 1;
                }
                for c in 0..p {
                    if cubic_disc(a, b, c, p) == 0 {
                        acc[3] += 1;
                        continue;
                    }
                    // roots of g(x) + c are the x with g(x) = -c
                    match hits[((p - c) % p) as usize] {
                        0 => acc[0] += 1,
                        1 => acc[1] += 1,
                        3 => acc[2] += 1,
                        n => unreachable!("separable cubic with {n} roots"),
                    }
                }
            }
            acc
        })
        .collect();
    let sum = parts.iter().fold([0u64; 4], |mut s, a| {
        for i in 0..4 {
            s[i] += a[i];
        }
        s
    });
    Ok(CensusRecord {
        p,
        no_roots: sum[0],
        one_root: sum[1],
        three_roots: sum[2],
        singular: sum[3],
    })
}

// a^2 b^2 - 4b^3 - 4a^3 c - 27c^2 + 18abc mod p
fn cubic_disc(a: u64, b: u64, c: u64, p: u64) -> u64 {
    let m = |x: u64, y: u64| mul_mod(x, y, p);
    let pos = m(m(a, a), m(b, b)) + m(18 % p, m(m(a, b), c));
    let neg = m(4 % p, m(m(b, b), b)) + m(4 % p, m(m(m(a, a), a), c)) + m(27 % p, m(c, c));
    (pos % p + p - neg % p) % p
}

/// Census of short forms y^2 = x^3 + Ax + B over F_p: counts of (A, B) by
/// root pattern, the space used for random-curve experiments.
pub fn short_form_census(p: u64) -> Result<CensusRecord> {
    check_prime(p)?;
    let mut rec = CensusRecord {
        p,
        no_roots: 0,
        one_root: 0,
        three_roots: 0,
        singular: 0,
    };
    for a in 0..p {
        for b in 0..p {
            match cubic_roots(a as i64, b as i64, p) {
                Ok(RootCount::NoRoots) => rec.no_roots += 1,
                Ok(RootCount::OneRoot) => rec.one_root += 1,
                Ok(RootCount::ThreeRoots) => rec.three_roots += 1,
                Err(_) => rec.singular += 1,
            }
        }
    }
    Ok(rec)
}

/// Group orders #E(Z/p^e) = p^(e-1) #E(F_p) for every prime power of N.
pub fn component_orders(curve: &Curve, fac: &Factorization) -> Result<Vec<u64>> {
    fac.factors()
        .iter()
        .map(|&(p, e)| Ok(p.pow(e - 1) * count_points(curve, p)?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scan_count(a: u64, b: u64, p: u64) -> u64 {
        let mut n = 1;
        for x in 0..p {
            for y in 0..p {
                if (y * y) % p == (x * x * x + a * x + b) % p {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn count_examples() {
        assert_eq!(scan_count(1, 0, 5), 4);
        assert_eq!(
            count_points(&Curve::new(1, 0), 5).unwrap(),
            scan_count(1, 0, 5)
        );
        assert_eq!(
            count_points(&Curve::new(0, 1), 5).unwrap(),
            scan_count(0, 1, 5)
        );
        assert_eq!(scan_count(0, 1, 5), 6);
        assert_eq!(
            count_points(&Curve::new(1, 0), 2),
            Err(Error::UnsupportedPrime(2))
        );
        assert_eq!(
            count_points(&Curve::new(0, 0), 5),
            Err(Error::BadReduction { p: 5 })
        );
    }

    #[test]
    fn counts_match_scan() {
        for p in [3u64, 5, 7, 11, 13] {
            for a in 0..p {
                for b in 0..p {
                    assert_eq!(count_points_raw(a, b, p), scan_count(a, b, p));
                }
            }
        }
        assert_eq!(count_points_any(&Curve::new(1, 1), 2).unwrap(), 3);
    }

    #[test]
    fn structure_examples() {
        let g = group_structure(&Curve::new(1, 0), 5).unwrap();
        assert_eq!(g, GroupStructure::new(1, 1, 1, 1).unwrap());
        assert!(!is_anomalous(&Curve::new(1, 0), 5).unwrap());
        assert!(GroupStructure::new(2, 1, 1, 1).is_err());
        assert!(GroupStructure::new(0, 1, 3, 5).is_err());
    }

    #[test]
    fn cubic_root_examples() {
        assert_eq!(cubic_roots(1, 0, 5).unwrap(), RootCount::ThreeRoots);
        let scanned = (0..7u64).filter(|x| (x * x * x + 2) % 7 == 0).count();
        let expect = match scanned {
            0 => RootCount::NoRoots,
            1 => RootCount::OneRoot,
            _ => RootCount::ThreeRoots,
        };
        assert_eq!(cubic_roots(0, 2, 7).unwrap(), expect);
        assert!(cubic_roots(0, 0, 7).is_err());
    }

    #[test]
    fn census_p5() {
        let mut rec = CensusRecord {
            p: 5,
            no_roots: 0,
            one_root: 0,
            three_roots: 0,
            singular: 0,
        };
        for a in 0..5u64 {
            for b in 0..5u64 {
                for c in 0..5u64 {
                    let roots = (0..5u64)
                        .filter(|x| (x * x * x + a * x * x + b * x + c) % 5 == 0)
                        .count();
                    let repeated = (0..5u64).any(|x| {
                        (x * x * x + a * x * x + b * x + c) % 5 == 0
                            && (3 * x * x + 2 * a * x + b) % 5 == 0
                    });
                    match (repeated, roots) {
                        (true, _) => rec.singular += 1,
                        (false, 0) => rec.no_roots += 1,
                        (false, 1) => rec.one_root += 1,
                        _ => rec.three_roots += 1,
                    }
                }
            }
        }
        assert_eq!(curve_census(5).unwrap(), rec);
        assert_eq!(rec.nonsingular(), 100);
        assert_eq!(
            rec.proportions(),
            [Ratio::new(2, 5), Ratio::new(1, 2), Ratio::new(1, 10)]
        );
    }
}
