//! Independent reference implementations used as test oracles. Nothing
//! here calls into the library's arithmetic.
#![allow(dead_code)]

use std::collections::BTreeSet;

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

pub fn inv(a: u64, m: u64) -> Option<u64> {
    (1..m).find(|&u| (a as u128 * u as u128 % m as u128) == 1)
}

/// Affine point or None for infinity, over F_p.
pub type Aff = Option<(u64, u64)>;

pub fn aff_add(a: u64, p: u64, u: Aff, v: Aff) -> Aff {
    let (Some((x1, y1)), Some((x2, y2))) = (u, v) else {
        return u.or(v);
    };
    let m = |x: u64, y: u64| x * y % p;
    let lam = if x1 == x2 {
        if (y1 + y2) % p == 0 {
            return None;
        }
        m((3 * m(x1, x1) + a) % p, inv(2 * y1 % p, p).unwrap())
    } else {
        m((y2 + p - y1) % p, inv((x2 + p - x1) % p, p).unwrap())
    };
    let x3 = (m(lam, lam) + 2 * p - x1 - x2) % p;
    let y3 = (m(lam, (x1 + p - x3) % p) + p - y1) % p;
    Some((x3, y3))
}

pub fn aff_points(a: u64, b: u64, p: u64) -> Vec<Aff> {
    let mut v = vec![None];
    for x in 0..p {
        for y in 0..p {
            if y * y % p == (x * x * x + a * x + b) % p {
                v.push(Some((x, y)));
            }
        }
    }
    v
}

pub fn aff_order(a: u64, p: u64, pt: Aff) -> u64 {
    let mut acc = pt;
    let mut k = 1;
    while acc.is_some() {
        acc = aff_add(a, p, acc, pt);
        k += 1;
    }
    k
}

/// Projective points of y^2 z = x^3 + a x z^2 + b z^3 over Z/q, q = p^e,
/// as equivalence classes under unit scaling, each represented by its
/// lexicographically smallest scaling. Found by scanning all triples.
pub fn proj_classes(a: u64, b: u64, p: u64, q: u64) -> BTreeSet<(u64, u64, u64)> {
    let units: Vec<u64> = (1..q).filter(|u| u % p != 0).collect();
    let mut out = BTreeSet::new();
    for x in 0..q {
        for y in 0..q {
            for z in 0..q {
                if x % p == 0 && y % p == 0 && z % p == 0 {
                    continue;
                }
                let lhs = (y * y % q) * z % q;
                let rhs = (x * x % q * x + a * x % q * (z * z % q) + b * (z * z % q) % q * z) % q;
                if lhs != rhs {
                    continue;
                }
                let rep = units
                    .iter()
                    .map(|&u| (u * x % q, u * y % q, u * z % q))
                    .min()
                    .unwrap();
                out.insert(rep);
            }
        }
    }
    out
}

/// Orders of the elements of Z/n1 + Z/n2.
pub fn abstract_orders(n1: u64, n2: u64) -> Vec<u64> {
    let mut v = Vec::new();
    for i in 0..n1 {
        for j in 0..n2 {
            let o1 = n1 / gcd(i, n1);
            let o2 = n2 / gcd(j, n2);
            v.push(o1 / gcd(o1, o2) * o2);
        }
    }
    v
}

pub fn nu2(mut n: u64) -> u32 {
    let mut e = 0;
    while n.is_multiple_of(2) {
        n /= 2;
        e += 1;
    }
    e
}

/// Nonsingular short forms (A, B) mod p, p odd.
pub fn short_forms(p: u64) -> Vec<(u64, u64)> {
    let mut v = Vec::new();
    for a in 0..p {
        for b in 0..p {
            if (4 * a * a * a + 27 * b * b) % p != 0 {
                v.push((a, b));
            }
        }
    }
    v
}

/// Integer curve (A, B) that reduces to the given pairs modulo the given
/// coprime moduli.
pub fn crt_pair(parts: &[(u64, u64, u64)]) -> (i64, i64) {
    let m: u64 = parts.iter().map(|t| t.2).product();
    let pick = |sel: fn(&(u64, u64, u64)) -> u64| -> i64 {
        (0..m)
            .find(|&x| parts.iter().all(|t| x % t.2 == sel(t)))
            .unwrap() as i64
    };
    (pick(|t| t.0), pick(|t| t.1))
}
