//! Arithmetic on E(Z/p^e) for a single odd prime power that fits in a word.

use crate::fp;
use crate::modarith::{factor_u64, inv_mod, mul_mod};
use num_bigint::BigUint;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

/// Residue modulo a word-sized modulus q < 2^63.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Zq {
    pub v: u64,
    pub q: u64,
}

impl Zq {
    #[inline]
    pub fn new(v: u64, q: u64) -> Self {
        Zq { v: v % q, q }
    }

    #[inline]
    fn k(self, c: u64) -> Self {
        Zq::new(c, self.q)
    }
}

impl Add for Zq {
    type Output = Zq;
    #[inline]
    fn add(self, o: Zq) -> Zq {
        let s = self.v + o.v;
        Zq {
            v: if s >= self.q { s - self.q } else { s },
            q: self.q,
        }
    }
}

impl Sub for Zq {
    type Output = Zq;
    #[inline]
    fn sub(self, o: Zq) -> Zq {
        Zq {
            v: if self.v >= o.v {
                self.v - o.v
            } else {
                self.v + self.q - o.v
            },
            q: self.q,
        }
    }
}

impl Mul for Zq {
    type Output = Zq;
    #[inline]
    fn mul(self, o: Zq) -> Zq {
        Zq {
            v: mul_mod(self.v, o.v, self.q),
            q: self.q,
        }
    }
}

impl Neg for Zq {
    type Output = Zq;
    #[inline]
    fn neg(self) -> Zq {
        Zq {
            v: if self.v == 0 { 0 } else { self.q - self.v },
            q: self.q,
        }
    }
}

type Triple = [Zq; 3];

// Two addition laws of bidegree (2,2) for y^2 z = x^3 + a x z^2 + b z^3.
// Over a field, law 1 vanishes only when P = Q and law 2 only when P - Q is
// a point of order 2, so one of them is always defined.

pub(crate) fn add_law_1(a: Zq, b: Zq, p: Triple, q: Triple) -> Triple {
    let [x1, y1, z1] = p;
    let [x2, y2, z2] = q;
    let b3 = b.k(3) * b;
    let x3 = b3 * z1 * z1 * x2 * z2 + a * z1 * z1 * x2 * x2
        - a.k(2) * y1 * z1 * x2 * y2
        - y1 * y1 * x2 * z2
        - b3 * x1 * z1 * z2 * z2
        + x1 * z1 * y2 * y2
        + a.k(2) * x1 * y1 * y2 * z2
        - a * x1 * x1 * z2 * z2;
    let y3 = -(b3 * z1 * z1 * y2 * z2) - a * z1 * z1 * x2 * y2
        + b3 * y1 * z1 * z2 * z2
        + y1 * z1 * y2 * y2
        + a.k(2) * a * y1 * z1 * x2 * z2
        - y1 * y1 * y2 * z2
        - a.k(2) * a * x1 * z1 * y2 * z2
        + a * x1 * y1 * z2 * z2
        + a.k(3) * x1 * y1 * x2 * x2
        - a.k(3) * x1 * x1 * x2 * y2;
    let z3 = z1 * z1 * y2 * y2 - a * z1 * z1 * x2 * z2 - y1 * y1 * z2 * z2 + a * x1 * z1 * z2 * z2
        - a.k(3) * x1 * z1 * x2 * x2
        + a.k(3) * x1 * x1 * x2 * z2;
    [x3, y3, z3]
}

pub(crate) fn add_law_2(a: Zq, b: Zq, p: Triple, q: Triple) -> Triple {
    let [x1, y1, z1] = p;
    let [x2, y2, z2] = q;
    let b3 = b.k(3) * b;
    let b6 = b.k(6) * b;
    let b9 = b.k(9) * b;
    let a2 = a * a;
    let ab3 = a * b3;
    let x3 = a2 * z1 * z1 * y2 * z2 - b3 * z1 * z1 * x2 * y2 + a2 * y1 * z1 * z2 * z2
        - b6 * y1 * z1 * x2 * z2
        - a * y1 * z1 * x2 * x2
        + y1 * y1 * x2 * y2
        - b6 * x1 * z1 * y2 * z2
        - a.k(2) * a * x1 * z1 * x2 * y2
        - b3 * x1 * y1 * z2 * z2
        + x1 * y1 * y2 * y2
        - a.k(2) * a * x1 * y1 * x2 * z2
        - a * x1 * x1 * y2 * z2;
    let y3 = -(b9 * b * z1 * z1 * z2 * z2)
        - a2 * a * z1 * z1 * z2 * z2
        - ab3 * z1 * z1 * x2 * z2
        - a2 * z1 * z1 * x2 * x2
        + y1 * y1 * y2 * y2
        - ab3 * x1 * z1 * z2 * z2
        - a.k(4) * a2 * x1 * z1 * x2 * z2
        + b9 * x1 * z1 * x2 * x2
        - a2 * x1 * x1 * z2 * z2
        + b9 * x1 * x1 * x2 * z2
        + a.k(3) * a * x1 * x1 * x2 * x2;
    let z3 = b3 * z1 * z1 * y2 * z2
        + a * z1 * z1 * x2 * y2
        + b3 * y1 * z1 * z2 * z2
        + y1 * z1 * y2 * y2
        + a.k(2) * a * y1 * z1 * x2 * z2
        + y1 * y1 * y2 * z2
        + a.k(2) * a * x1 * z1 * y2 * z2
        + a * x1 * y1 * z2 * z2
        + a.k(3) * x1 * y1 * x2 * x2
        + a.k(3) * x1 * x1 * x2 * y2;
    [x3, y3, z3]
}

/// Canonical representative of a point of E(Z/p^e).
///
/// If z is a unit the point is scaled to z = 1; otherwise y is a unit and
/// the point is scaled to y = 1. The identity is (0 : 1 : 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalPoint {
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

impl LocalPoint {
    pub const IDENTITY: LocalPoint = LocalPoint { x: 0, y: 1, z: 0 };
}

/// The curve y^2 = x^3 + ax + b over Z/p^e.
#[derive(Debug)]
pub struct LocalCurve {
    pub(crate) p: u64,
    pub(crate) e: u32,
    pub(crate) q: u64,
    pub(crate) a: u64,
    pub(crate) b: u64,
    fp_count: OnceLock<u64>,
}

impl Clone for LocalCurve {
    fn clone(&self) -> Self {
        let c = LocalCurve::new(self.p, self.e, self.a, self.b);
        if let Some(&n) = self.fp_count.get() {
            let _ = c.fp_count.set(n);
        }
        c
    }
}

impl LocalCurve {
    pub(crate) fn new(p: u64, e: u32, a: u64, b: u64) -> Self {
        let q = p.pow(e);
        LocalCurve {
            p,
            e,
            q,
            a: a % q,
            b: b % q,
            fp_count: OnceLock::new(),
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// #E(F_p).
    pub fn fp_order(&self) -> u64 {
        *self
            .fp_count
            .get_or_init(|| fp::count_points_raw(self.a % self.p, self.b % self.p, self.p))
    }

    /// #E(Z/p^e) = p^(e-1) #E(F_p).
    pub fn order(&self) -> u64 {
        self.p.pow(self.e - 1) * self.fp_order()
    }

    #[inline]
    fn z(&self, v: u64) -> Zq {
        Zq::new(v, self.q)
    }

    pub(crate) fn is_unit(&self, v: u64) -> bool {
        !v.is_multiple_of(self.p)
    }

    pub fn on_curve(&self, x: u64, y: u64, z: u64) -> bool {
        let (x, y, z) = (self.z(x), self.z(y), self.z(z));
        let (a, b) = (self.z(self.a), self.z(self.b));
        y * y * z == x * x * x + a * x * z * z + b * z * z * z
    }

    /// Scale a primitive triple to canonical form. Returns `None` if the
    /// triple is not primitive or not on the curve.
    pub fn canonical(&self, x: u64, y: u64, z: u64) -> Option<LocalPoint> {
        let (x, y, z) = (x % self.q, y % self.q, z % self.q);
        if !self.on_curve(x, y, z) {
            return None;
        }
        self.normalize([self.z(x), self.z(y), self.z(z)])
    }

    fn normalize(&self, t: Triple) -> Option<LocalPoint> {
        let [x, y, z] = t;
        let pivot = if self.is_unit(z.v) {
            z
        } else if self.is_unit(y.v) {
            y
        } else {
            // on-curve triples with p | y, z force p | x
            return None;
        };
        let u = self.z(inv_mod(pivot.v, self.q)?);
        Some(LocalPoint {
            x: (x * u).v,
            y: (y * u).v,
            z: (z * u).v,
        })
    }

    fn triple(&self, p: &LocalPoint) -> Triple {
        [self.z(p.x), self.z(p.y), self.z(p.z)]
    }

    pub fn is_strong(&self, p: &LocalPoint) -> bool {
        self.is_unit(p.z)
    }

    pub fn add(&self, p: &LocalPoint, q: &LocalPoint) -> LocalPoint {
        if *p == LocalPoint::IDENTITY {
            return *q;
        }
        if *q == LocalPoint::IDENTITY {
            return *p;
        }
        let (a, b) = (self.z(self.a), self.z(self.b));
        let (tp, tq) = (self.triple(p), self.triple(q));
        let r = add_law_2(a, b, tp, tq);
        if let Some(pt) = self.normalize(r) {
            return pt;
        }
        let r = add_law_1(a, b, tp, tq);
        self.normalize(r)
            .expect("the two addition laws cover every pair of points")
    }

    pub fn neg(&self, p: &LocalPoint) -> LocalPoint {
        let (x, y, z) = (self.z(p.x), self.z(p.y), self.z(p.z));
        if self.is_unit(p.z) {
            LocalPoint {
                x: p.x,
                y: (-y).v,
                z: p.z,
            }
        } else {
            // (x : -1 : z) ~ (-x : 1 : -z)
            LocalPoint {
                x: (-x).v,
                y: p.y,
                z: (-z).v,
            }
        }
    }

    pub fn double(&self, p: &LocalPoint) -> LocalPoint {
        self.add(p, p)
    }

    pub fn mul_u64(&self, mut k: u64, p: &LocalPoint) -> LocalPoint {
        let mut acc = LocalPoint::IDENTITY;
        let mut base = *p;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.double(&base);
            k >>= 1;
        }
        acc
    }

    pub fn mul(&self, k: &BigUint, p: &LocalPoint) -> LocalPoint {
        let mut acc = LocalPoint::IDENTITY;
        for i in (0..k.bits()).rev() {
            acc = self.double(&acc);
            if k.bit(i) {
                acc = self.add(&acc, p);
            }
        }
        acc
    }

    /// Order of a point, by descending from the group order.
    pub fn point_order(&self, p: &LocalPoint) -> u64 {
        let mut ord = self.order();
        for (l, _) in factor_u64(ord) {
            while ord.is_multiple_of(l) && self.mul_u64(ord / l, p) == LocalPoint::IDENTITY {
                ord /= l;
            }
        }
        ord
    }

    /// All points of E(F_p), identity first.
    pub(crate) fn fp_points(&self) -> Vec<LocalPoint> {
        let p = self.p;
        let mut roots: Vec<Vec<u64>> = vec![Vec::new(); p as usize];
        for y in 0..p {
            roots[mul_mod(y, y, p) as usize].push(y);
        }
        let (a, b) = (self.a % p, self.b % p);
        let mut out = vec![LocalPoint::IDENTITY];
        for x in 0..p {
            let f = (mul_mod(mul_mod(x, x, p), x, p) + mul_mod(a, x, p) + b) % p;
            for &y in &roots[f as usize] {
                out.push(LocalPoint { x, y, z: 1 });
            }
        }
        out
    }

    /// Preimages at level `e` of a point given at level `e - 1`.
    ///
    /// Preimages of (x0 : y0 : 1) are (x0 + m a : y0 + m b : 1) with m = p^(e-1)
    /// and (a, b) on a line mod p; preimages of (x0 : 1 : z0) are
    /// (x0 + m a : 1 : z0 + m b) likewise. Either way exactly p of them.
    pub(crate) fn lift_from_below(&self, q: &LocalPoint) -> Vec<LocalPoint> {
        assert!(self.e >= 2, "lifting needs a target exponent of at least 2");
        let p = self.p;
        let m = self.q / p;
        let pz = |v: u64| Zq::new(v, p);
        let (ac, bc) = (self.z(self.a), self.z(self.b));
        let mut out = Vec::with_capacity(p as usize);
        if self.is_unit(q.z) {
            // F(x, y) = y^2 - x^3 - a x - b
            let (x, y) = (self.z(q.x), self.z(q.y));
            let f = y * y - x * x * x - ac * x - bc;
            let c = pz(f.v / m);
            let fx = -(pz(3) * pz(q.x) * pz(q.x) + pz(self.a));
            let fy = pz(2) * pz(q.y);
            for (da, db) in solve_line(c, fx, fy) {
                out.push(LocalPoint {
                    x: q.x + m * da,
                    y: q.y + m * db,
                    z: 1,
                });
            }
        } else {
            // G(x, z) = z - x^3 - a x z^2 - b z^3, with dG/dz = 1 mod p
            let (x, z) = (self.z(q.x), self.z(q.z));
            let g = z - x * x * x - ac * x * z * z - bc * z * z * z;
            let c = pz(g.v / m);
            let gx = -(pz(3) * pz(q.x) * pz(q.x) + pz(self.a) * pz(q.z) * pz(q.z));
            let gz = pz(1)
                - pz(2) * pz(self.a) * pz(q.x) * pz(q.z)
                - pz(3) * pz(self.b) * pz(q.z) * pz(q.z);
            for (da, db) in solve_line(c, gx, gz) {
                out.push(LocalPoint {
                    x: q.x + m * da,
                    y: 1,
                    z: q.z + m * db,
                });
            }
        }
        out
    }

    /// Reduce a canonical point at this level to level `n <= e`.
    pub(crate) fn reduce(&self, pt: &LocalPoint, n: u32) -> LocalPoint {
        let r = self.p.pow(n);
        LocalPoint {
            x: pt.x % r,
            y: pt.y % r,
            z: pt.z % r,
        }
    }
}

// All (a, b) mod p with c + u a + v b = 0, given (u, v) != (0, 0).
fn solve_line(c: Zq, u: Zq, v: Zq) -> Vec<(u64, u64)> {
    let p = c.q;
    if v.v != 0 {
        let vi = Zq::new(inv_mod(v.v, p).expect("p is prime"), p);
        (0..p)
            .map(|a| (a, (-(c + u * Zq::new(a, p)) * vi).v))
            .collect()
    } else {
        let ui = Zq::new(inv_mod(u.v, p).expect("nonsingular curve"), p);
        let a = (-c * ui).v;
        (0..p).map(|b| (a, b)).collect()
    }
}

/// Sum of two projective triples computed directly modulo `n`, whose
/// factorization is unknown. Returns `None` when neither addition law
/// gives a primitive triple, which can only happen for composite `n`.
pub(crate) fn raw_add(a: u64, b: u64, n: u64, p: [u64; 3], q: [u64; 3]) -> Option<[u64; 3]> {
    use num_integer::Integer;
    let t = |v: [u64; 3]| v.map(|c| Zq::new(c, n));
    let (a, b) = (Zq::new(a, n), Zq::new(b, n));
    let primitive = |r: &Triple| r[0].v.gcd(&r[1].v).gcd(&r[2].v).gcd(&n) == 1;
    let r = add_law_2(a, b, t(p), t(q));
    if primitive(&r) {
        return Some(r.map(|c| c.v));
    }
    let r = add_law_1(a, b, t(p), t(q));
    primitive(&r).then(|| r.map(|c| c.v))
}

/// kP modulo `n` via [`raw_add`]; `None` if some step degenerates.
pub(crate) fn raw_mul(a: u64, b: u64, n: u64, k: &BigUint, p: [u64; 3]) -> Option<[u64; 3]> {
    let mut acc = [0, 1, 0];
    for i in (0..k.bits()).rev() {
        acc = raw_add(a, b, n, acc, acc)?;
        if k.bit(i) {
            acc = raw_add(a, b, n, acc, p)?;
        }
    }
    Some(acc)
}

/// Whether a triple is primitive modulo `n` and satisfies the curve equation.
pub(crate) fn raw_on_curve(a: u64, b: u64, n: u64, p: [u64; 3]) -> bool {
    use num_integer::Integer;
    if p[0].gcd(&p[1]).gcd(&p[2]).gcd(&n) != 1 {
        return false;
    }
    let [x, y, z] = p.map(|c| Zq::new(c, n));
    let (a, b) = (Zq::new(a, n), Zq::new(b, n));
    y * y * z == x * x * x + a * x * z * z + b * z * z * z
}
