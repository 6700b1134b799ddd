use super::local::{LocalCurve, LocalPoint};
use super::point::{PointClass, ProjPoint};
use super::Curve;
use crate::error::{Error, Result};
use crate::modarith::{inverse_or_factor, reduce, reduce_u64, Factorization, InverseOrFactor};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use std::sync::{Arc, OnceLock};

/// Default bound on the number of points an enumeration may produce.
pub const DEFAULT_POINT_CAP: u64 = 1_000_000;

/// E(Z/NZ) for a curve with good reduction at every prime of N, realized
/// as the product of the groups E(Z/p^e).
#[derive(Clone, Debug)]
pub struct CurveGroup {
    curve: Curve,
    fac: Factorization,
    comps: Vec<LocalCurve>,
    moduli: Arc<[u64]>,
    cap: u64,
    points_cache: Vec<OnceLock<Vec<LocalPoint>>>,
}

/// Outcome of the chord-tangent addition over Z/NZ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineSum {
    Sum(ProjPoint),
    FactorFound(BigUint),
}

impl CurveGroup {
    pub fn new(curve: &Curve, fac: &Factorization) -> Result<Self> {
        if fac.factors().is_empty() {
            return Err(Error::InvalidModulus("1".into()));
        }
        for &(p, _) in fac.factors() {
            if p == 2 {
                return Err(Error::UnsupportedPrime(2));
            }
            if !curve.good_reduction_at(p) {
                return Err(Error::BadReduction { p });
            }
        }
        let moduli: Arc<[u64]> = fac.prime_powers()?.into();
        let comps: Vec<_> = fac
            .factors()
            .iter()
            .zip(moduli.iter())
            .map(|(&(p, e), &q)| LocalCurve::new(p, e, curve.a_mod(q), curve.b_mod(q)))
            .collect();
        let points_cache = comps.iter().map(|_| OnceLock::new()).collect();
        Ok(CurveGroup {
            curve: curve.clone(),
            fac: fac.clone(),
            comps,
            moduli,
            cap: DEFAULT_POINT_CAP,
            points_cache,
        })
    }

    /// Convenience constructor for word-sized N.
    pub fn with_modulus(curve: &Curve, n: u64) -> Result<Self> {
        Self::new(curve, &Factorization::from_u64(n)?)
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn factorization(&self) -> &Factorization {
        &self.fac
    }

    pub fn n(&self) -> &BigUint {
        self.fac.n()
    }

    pub fn components(&self) -> &[LocalCurve] {
        &self.comps
    }

    fn make(&self, parts: Vec<LocalPoint>) -> ProjPoint {
        ProjPoint {
            parts,
            moduli: self.moduli.clone(),
        }
    }

    pub fn identity(&self) -> ProjPoint {
        self.make(vec![LocalPoint::IDENTITY; self.comps.len()])
    }

    /// The point (x : y : z) mod N; must be primitive and on the curve.
    pub fn point(&self, x: &BigInt, y: &BigInt, z: &BigInt) -> Result<ProjPoint> {
        let mut parts = Vec::with_capacity(self.comps.len());
        for c in &self.comps {
            let q = c.modulus();
            let (xr, yr, zr) = (reduce_u64(x, q), reduce_u64(y, q), reduce_u64(z, q));
            if !c.on_curve(xr, yr, zr) {
                return Err(Error::NotOnCurve);
            }
            let pt = c.canonical(xr, yr, zr).ok_or_else(|| {
                Error::InvalidPoint(format!("coordinates share the factor {} with N", c.prime()))
            })?;
            parts.push(pt);
        }
        Ok(self.make(parts))
    }

    pub fn affine(&self, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Result<ProjPoint> {
        self.point(&x.into(), &y.into(), &BigInt::one())
    }

    /// Assemble a point from canonical components, one per prime power.
    pub fn from_components(&self, parts: Vec<LocalPoint>) -> Result<ProjPoint> {
        if parts.len() != self.comps.len() {
            return Err(Error::InvalidPoint("wrong number of components".into()));
        }
        let mut out = Vec::with_capacity(parts.len());
        for (c, pt) in self.comps.iter().zip(parts) {
            if !c.on_curve(pt.x, pt.y, pt.z) {
                return Err(Error::NotOnCurve);
            }
            out.push(
                c.canonical(pt.x, pt.y, pt.z)
                    .ok_or_else(|| Error::InvalidPoint("not primitive".into()))?,
            );
        }
        Ok(self.make(out))
    }

    /// Whether `p` is a point of this group.
    pub fn contains(&self, p: &ProjPoint) -> bool {
        p.moduli == self.moduli
            && self
                .comps
                .iter()
                .zip(&p.parts)
                .all(|(c, pt)| c.canonical(pt.x, pt.y, pt.z) == Some(*pt))
    }

    fn zip<'a>(
        &'a self,
        p: &'a ProjPoint,
    ) -> impl Iterator<Item = (&'a LocalCurve, &'a LocalPoint)> {
        debug_assert_eq!(
            p.moduli, self.moduli,
            "point belongs to a different modulus"
        );
        self.comps.iter().zip(p.parts.iter())
    }

    pub fn classify(&self, p: &ProjPoint) -> PointClass {
        p.class()
    }

    pub fn add(&self, p: &ProjPoint, q: &ProjPoint) -> ProjPoint {
        let parts = self
            .zip(p)
            .zip(q.parts.iter())
            .map(|((c, a), b)| c.add(a, b))
            .collect();
        self.make(parts)
    }

    pub fn neg(&self, p: &ProjPoint) -> ProjPoint {
        self.make(self.zip(p).map(|(c, a)| c.neg(a)).collect())
    }

    pub fn double(&self, p: &ProjPoint) -> ProjPoint {
        self.add(p, p)
    }

    pub fn mul(&self, k: &BigUint, p: &ProjPoint) -> ProjPoint {
        self.make(self.zip(p).map(|(c, a)| c.mul(k, a)).collect())
    }

    pub fn mul_u64(&self, k: u64, p: &ProjPoint) -> ProjPoint {
        self.make(self.zip(p).map(|(c, a)| c.mul_u64(k, a)).collect())
    }

    /// kP for a signed scalar.
    pub fn mul_int(&self, k: &BigInt, p: &ProjPoint) -> ProjPoint {
        let r = self.mul(k.magnitude(), p);
        if k.sign() == num_bigint::Sign::Minus {
            self.neg(&r)
        } else {
            r
        }
    }

    /// #E(Z/NZ).
    pub fn order(&self) -> BigUint {
        self.comps
            .iter()
            .fold(BigUint::one(), |acc, c| acc * c.order())
    }

    pub fn point_order(&self, p: &ProjPoint) -> BigUint {
        self.zip(p)
            .map(|(c, a)| BigUint::from(c.point_order(a)))
            .fold(BigUint::one(), |acc, o| acc.lcm(&o))
    }

    /// E(Z/p_i^{e_i}) as a group of its own.
    pub fn component_group(&self, i: usize) -> CurveGroup {
        let (p, e) = self.fac.factors()[i];
        let fac =
            Factorization::from_factors(&[(p, e)]).expect("prime power of a valid factorization");
        let g = CurveGroup::new(&self.curve, &fac)
            .expect("component of a valid group")
            .with_cap(self.cap);
        if let Some(pts) = self.points_cache[i].get() {
            let _ = g.points_cache[0].set(pts.clone());
        }
        g
    }

    /// Components of a point as points of the component groups.
    pub fn split(&self, p: &ProjPoint) -> Vec<ProjPoint> {
        p.parts
            .iter()
            .zip(self.moduli.iter())
            .map(|(pt, &q)| ProjPoint {
                parts: vec![*pt],
                moduli: Arc::from(vec![q]),
            })
            .collect()
    }

    /// Inverse of [`CurveGroup::split`].
    pub fn combine(&self, parts: &[ProjPoint]) -> Result<ProjPoint> {
        if parts.len() != self.comps.len() {
            return Err(Error::InvalidPoint("wrong number of components".into()));
        }
        for (pt, &q) in parts.iter().zip(self.moduli.iter()) {
            if pt.moduli.len() != 1 || pt.moduli[0] != q {
                return Err(Error::InvalidPoint("component modulus mismatch".into()));
            }
        }
        Ok(self.make(parts.iter().map(|p| p.parts[0]).collect()))
    }

    /// All points of the i-th component E(Z/p^e), identity first,
    /// obtained by lifting E(F_p) one level at a time.
    pub fn component_points(&self, i: usize) -> Result<&[LocalPoint]> {
        let c = &self.comps[i];
        if c.order() > self.cap {
            return Err(Error::CapExceeded {
                size: c.order().to_string(),
                cap: self.cap,
            });
        }
        Ok(self.points_cache[i].get_or_init(|| {
            let base = LocalCurve::new(c.prime(), 1, c.a, c.b);
            let mut pts = base.fp_points();
            for k in 2..=c.exponent() {
                let level = LocalCurve::new(c.prime(), k, c.a, c.b);
                pts = pts.iter().flat_map(|q| level.lift_from_below(q)).collect();
            }
            pts.sort_unstable_by_key(|pt| (*pt != LocalPoint::IDENTITY, *pt));
            pts
        }))
    }

    fn check_cap(&self, n: &BigUint) -> Result<()> {
        if *n > BigUint::from(self.cap) {
            return Err(Error::CapExceeded {
                size: n.to_string(),
                cap: self.cap,
            });
        }
        Ok(())
    }

    /// Every point of E(Z/NZ).
    pub fn points(&self) -> Result<Vec<ProjPoint>> {
        self.check_cap(&self.order())?;
        self.product(|_, _| true)
    }

    /// Every strongly non-zero point of E(Z/NZ).
    pub fn strong_points(&self) -> Result<Vec<ProjPoint>> {
        self.check_cap(&self.order())?;
        self.product(|c, pt| c.is_strong(pt))
    }

    fn product(&self, keep: impl Fn(&LocalCurve, &LocalPoint) -> bool) -> Result<Vec<ProjPoint>> {
        let mut lists = Vec::with_capacity(self.comps.len());
        for (i, c) in self.comps.iter().enumerate() {
            let l: Vec<LocalPoint> = self
                .component_points(i)?
                .iter()
                .filter(|pt| keep(c, pt))
                .copied()
                .collect();
            lists.push(l);
        }
        let total: usize = lists.iter().map(Vec::len).product();
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; lists.len()];
        if lists.iter().any(Vec::is_empty) {
            return Ok(out);
        }
        loop {
            out.push(self.make(idx.iter().zip(&lists).map(|(&i, l)| l[i]).collect()));
            let mut k = lists.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < lists[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    fn single(&self) -> Result<(&LocalCurve, u64, u32)> {
        match self.comps.as_slice() {
            [c] => Ok((c, c.prime(), c.exponent())),
            _ => Err(Error::InvalidArgument(
                "operation needs a prime-power modulus".into(),
            )),
        }
    }

    /// For N = p^m, the group E(Z/p^n).
    pub fn prime_power_group(&self, n: u32) -> Result<CurveGroup> {
        let (_, p, _) = self.single()?;
        if n == 0 {
            return Err(Error::InvalidArgument("exponent must be positive".into()));
        }
        let fac = Factorization::from_factors(&[(p, n)])?;
        Ok(CurveGroup::new(&self.curve, &fac)?.with_cap(self.cap))
    }

    /// The reduction map E(Z/p^m) -> E(Z/p^n) for n <= m.
    pub fn reduce_point(&self, pt: &ProjPoint, n: u32) -> Result<ProjPoint> {
        let (c, p, m) = self.single()?;
        if n == 0 || n > m {
            return Err(Error::InvalidArgument(format!(
                "cannot reduce from p^{m} to p^{n}"
            )));
        }
        let r = c.reduce(&pt.parts[0], n);
        Ok(ProjPoint {
            parts: vec![r],
            moduli: Arc::from(vec![p.pow(n)]),
        })
    }

    /// For N = p^(n-1), all preimages of `q` in E(Z/p^n).
    pub fn lift_points(&self, q: &ProjPoint) -> Result<Vec<ProjPoint>> {
        let (_, _, e) = self.single()?;
        let up = self.prime_power_group(e + 1)?;
        let lifted = up.comps[0].lift_from_below(&q.parts[0]);
        Ok(lifted.into_iter().map(|pt| up.make(vec![pt])).collect())
    }

    /// Chord-tangent addition computed directly mod N. Returns a proper
    /// factor of N whenever a denominator is a non-unit.
    pub fn add_affine_attempt(&self, p: &ProjPoint, q: &ProjPoint) -> Result<AffineSum> {
        if p.is_identity() {
            return Ok(AffineSum::Sum(q.clone()));
        }
        if q.is_identity() {
            return Ok(AffineSum::Sum(p.clone()));
        }
        if !p.is_strong() || !q.is_strong() {
            return Err(Error::InvalidPoint(
                "affine addition needs strongly non-zero points".into(),
            ));
        }
        let n = self.n();
        let nn = BigInt::from(n.clone());
        let (x1, y1, _) = p.coords();
        let (x2, y2, _) = q.coords();
        let (x1, y1, x2, y2) = (
            BigInt::from(x1),
            BigInt::from(y1),
            BigInt::from(x2),
            BigInt::from(y2),
        );
        let (num, den) = if x1 == x2 {
            if reduce(&(&y1 + &y2), n).is_zero() {
                return Ok(AffineSum::Sum(self.identity()));
            }
            if y1 != y2 {
                let g = reduce(&(&y1 - &y2), n).gcd(n);
                return Ok(AffineSum::FactorFound(g));
            }
            (
                BigInt::from(3) * &x1 * &x1 + self.curve.a(),
                BigInt::from(2) * &y1,
            )
        } else {
            (&y2 - &y1, &x2 - &x1)
        };
        let u = match inverse_or_factor(&den, n)? {
            InverseOrFactor::Inverse(u) => BigInt::from(u),
            InverseOrFactor::FactorFound(d) => return Ok(AffineSum::FactorFound(d)),
            InverseOrFactor::ZeroDivisorTotal => {
                return Err(Error::TheoremViolation(
                    "zero denominator after special cases".into(),
                ))
            }
        };
        let lam = (num * u).mod_floor(&nn);
        let x3 = (&lam * &lam - &x1 - &x2).mod_floor(&nn);
        let y3 = (&lam * (&x1 - &x3) - &y1).mod_floor(&nn);
        Ok(AffineSum::Sum(self.point(&x3, &y3, &BigInt::one())?))
    }
}
