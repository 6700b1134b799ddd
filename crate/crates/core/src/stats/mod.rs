//! Exact distributions of the 2-adic valuation of point orders, and the
//! bounds built from them.

mod experiment;

pub use experiment::{
    equal_nu2_census, g_stat, h_stat, incompat_bound, incompat_proportion, j_stat, j_vector,
    random_curve_bound_check, strong_g_point_fraction, ExperimentRecord,
};

use crate::error::{Error, Result};
use crate::fp::GroupStructure;
use crate::modarith::Ratio;
use serde::{Deserialize, Serialize};

/// Where an h vector came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Provenance {
    /// All points of Z/2^s t + Z/2^r w.
    Points { s: u32, r: u32 },
    /// Strongly non-zero points, i.e. all but the identity.
    StrongPoints { s: u32, r: u32, t: u64, w: u64 },
}

/// Entry k is the proportion of points whose order has 2-adic valuation k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HVector {
    entries: Vec<Ratio>,
    provenance: Provenance,
}

impl HVector {
    pub fn entries(&self) -> &[Ratio] {
        &self.entries
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Entry k, zero past the end.
    pub fn get(&self, k: usize) -> Ratio {
        self.entries.get(k).cloned().unwrap_or_else(Ratio::zero)
    }

    pub fn total(&self) -> Ratio {
        self.entries.iter().sum()
    }

    pub fn dot(&self, other: &HVector) -> Ratio {
        dot(self, other)
    }
}

/// Integer numerators over a shared denominator, for grid sweeps.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Frac {
    nums: Vec<u128>,
    den: u128,
}

impl Frac {
    fn h(s: u32, r: u32) -> Frac {
        let nums = (0..=r)
            .map(|k| match k {
                0 => 1,
                k if k <= s => 3u128 << (2 * k - 2),
                k => 1u128 << (s + k - 1),
            })
            .collect();
        Frac {
            nums,
            den: 1u128 << (r + s),
        }
    }

    fn h_prime(s: u32, r: u32, t: u64, w: u64) -> Frac {
        let tw = (t * w) as u128;
        let nums = (0..=r)
            .map(|x| match x {
                0 => tw - 1,
                x if x <= s => (3u128 << (2 * x - 2)) * tw,
                x => (1u128 << (s + x - 1)) * tw,
            })
            .collect();
        Frac {
            nums,
            den: (tw << (r + s)) - 1,
        }
    }

    /// (numerator, denominator) of the dot product.
    fn dot(&self, o: &Frac) -> (u128, u128) {
        let n = self.nums.iter().zip(&o.nums).map(|(a, b)| a * b).sum();
        (n, self.den * o.den)
    }

    fn into_hvector(self, provenance: Provenance) -> HVector {
        let den = self.den;
        let entries = self
            .nums
            .into_iter()
            .map(|n| Ratio::new(n as i128, den as i128))
            .collect();
        HVector {
            entries,
            provenance,
        }
    }
}

fn less(a: (u128, u128), b: (u128, u128)) -> bool {
    a.0 * b.1 < b.0 * a.1
}

fn ratio((n, d): (u128, u128)) -> Ratio {
    Ratio::new(n as i128, d as i128)
}

/// ν2-order distribution over all points of Z/2^s t + Z/2^r w.
pub fn h_vector(s: u32, r: u32) -> Result<HVector> {
    if s > r {
        return Err(Error::InvalidArgument(format!("h({s},{r}) needs s <= r")));
    }
    if r + s > 100 {
        return Err(Error::InvalidArgument("exponents too large".into()));
    }
    Ok(Frac::h(s, r).into_hvector(Provenance::Points { s, r }))
}

/// ν2-order distribution over the non-identity points of
/// Z/2^s t + Z/2^r w. Only s, r and tw matter, so t and w need not be in
/// normal form.
pub fn h_prime_vector(s: u32, r: u32, t: u64, w: u64) -> Result<HVector> {
    if s > r || t.is_multiple_of(2) || w.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "h'({s},{r},{t},{w}) needs s <= r and odd t, w"
        )));
    }
    if r + s > 60 || t.checked_mul(w).is_none_or(|tw| tw > 1 << 32) {
        return Err(Error::InvalidArgument("structure too large".into()));
    }
    if s == 0 && r == 0 && t * w == 1 {
        return Err(Error::InvalidArgument(
            "trivial group has no strongly non-zero points".into(),
        ));
    }
    Ok(Frac::h_prime(s, r, t, w).into_hvector(Provenance::StrongPoints { s, r, t, w }))
}

/// Σ u_k v_k over the common support.
pub fn dot(u: &HVector, v: &HVector) -> Ratio {
    u.entries.iter().zip(&v.entries).map(|(a, b)| a * b).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxHReport {
    pub grid_bound: u32,
    pub checked: usize,
    pub max: Ratio,
    /// Every (s1, r1, s2, r2) attaining the max.
    pub argmax: Vec<(u32, u32, u32, u32)>,
    /// Points of the grid above 5/8.
    pub violations: Vec<(u32, u32, u32, u32)>,
}

impl MaxHReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.argmax == [(1, 1, 1, 1)]
    }
}

/// h(s1,r1).h(s2,r2) over 0 <= s_i <= r_i <= grid_bound with r1 >= 1.
pub fn verify_max_h(grid_bound: u32) -> Result<MaxHReport> {
    if !(2..=30).contains(&grid_bound) {
        return Err(Error::InvalidArgument(format!(
            "grid bound {grid_bound} outside 2..=30"
        )));
    }
    let shapes: Vec<(u32, u32, Frac)> = (0..=grid_bound)
        .flat_map(|r| (0..=r).map(move |s| (s, r, Frac::h(s, r))))
        .collect();
    let cap = (5u128, 8u128);
    let mut best = (0u128, 1u128);
    let mut argmax = Vec::new();
    let mut violations = Vec::new();
    let mut checked = 0;
    for (s1, r1, u) in shapes.iter().filter(|x| x.1 >= 1) {
        for (s2, r2, v) in &shapes {
            let d = u.dot(v);
            let key = (*s1, *r1, *s2, *r2);
            checked += 1;
            if less(cap, d) {
                violations.push(key);
            }
            if less(best, d) {
                best = d;
                argmax.clear();
            }
            if !less(d, best) {
                argmax.push(key);
            }
        }
    }
    Ok(MaxHReport {
        grid_bound,
        checked,
        max: ratio(best),
        argmax,
        violations,
    })
}

type Shape = (u32, u32, u64, u64);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxHPrimeReport {
    pub grid_bound: u32,
    pub tw_bound: u64,
    pub checked: usize,
    /// Pairs where h'.h' exceeds h'(1,1,t1,w1).h'(1,1,t2,w2).
    pub relative_violations: Vec<(Shape, Shape)>,
    /// Largest value over pairs whose first group has order >= 6.
    pub max: Ratio,
    pub argmax: Vec<(Shape, Shape)>,
    /// Pairs whose first group has order >= 6, above 9/11.
    pub cap_violations: Vec<(Shape, Shape)>,
    /// Pairs whose first group has order 2 or 4, above 9/11.
    pub small_group_exceptions: Vec<(Shape, Shape)>,
}

impl MaxHPrimeReport {
    pub fn passed(&self) -> bool {
        self.relative_violations.is_empty() && self.cap_violations.is_empty()
    }
}

fn order((s, r, t, w): Shape) -> u128 {
    ((t * w) as u128) << (r + s)
}

/// h'(a).h'(b) over structures with s <= r <= grid_bound and odd
/// t, w <= tw_bound, where the first group has even order (r >= 1) and
/// the second is nontrivial.
///
/// The 9/11 cap is asserted when the first group has order >= 6, as
/// #E(F_p) = p + 1 with p >= 5 does; pairs whose first group has order 2
/// or 4 are listed separately.
pub fn verify_max_h_prime(grid_bound: u32, tw_bound: u64) -> Result<MaxHPrimeReport> {
    if !(2..=20).contains(&grid_bound) || !(1..=99).contains(&tw_bound) {
        return Err(Error::InvalidArgument("grid bounds out of range".into()));
    }
    let mut shapes: Vec<(Shape, Frac)> = Vec::new();
    for r in 0..=grid_bound {
        for s in 0..=r {
            for t in (1..=tw_bound).step_by(2) {
                for w in (1..=tw_bound).step_by(2) {
                    let sh = (s, r, t, w);
                    if GroupStructure::new(s, r, t, w).is_ok() && order(sh) > 1 {
                        shapes.push((sh, Frac::h_prime(s, r, t, w)));
                    }
                }
            }
        }
    }
    let cap = (9u128, 11u128);
    let mut rep = MaxHPrimeReport {
        grid_bound,
        tw_bound,
        checked: 0,
        relative_violations: Vec::new(),
        max: Ratio::zero(),
        argmax: Vec::new(),
        cap_violations: Vec::new(),
        small_group_exceptions: Vec::new(),
    };
    let mut best = (0u128, 1u128);
    for (a, u) in shapes.iter().filter(|(a, _)| a.1 >= 1) {
        let ua = Frac::h_prime(1, 1, a.2, a.3);
        for (b, v) in &shapes {
            rep.checked += 1;
            let d = u.dot(v);
            if less(ua.dot(&Frac::h_prime(1, 1, b.2, b.3)), d) {
                rep.relative_violations.push((*a, *b));
            }
            if order(*a) < 6 {
                if less(cap, d) {
                    rep.small_group_exceptions.push((*a, *b));
                }
                continue;
            }
            if less(cap, d) {
                rep.cap_violations.push((*a, *b));
            }
            if less(best, d) {
                best = d;
                rep.argmax.clear();
            }
            if !less(d, best) {
                rep.argmax.push((*a, *b));
            }
        }
    }
    rep.max = ratio(best);
    Ok(rep)
}

/// (17pq + 2p + 2q + 4) / 32pq: bound on the probability that a random
/// point on a random curve has equal ν2-orders mod the two largest primes.
pub fn overall_curves_bound(p: u64, q: u64) -> Ratio {
    let (p, q) = (p as i128, q as i128);
    Ratio::new(17 * p * q + 2 * p + 2 * q + 4, 32 * p * q)
}

/// (78pq - 5p - 5q + 12) / 120pq: the strongly non-zero analogue.
pub fn overall_curves_bound_snz(p: u64, q: u64) -> Ratio {
    let (p, q) = (p as i128, q as i128);
    Ratio::new(78 * p * q - 5 * p - 5 * q + 12, 120 * p * q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_vectors() {
        assert_eq!(
            h_vector(1, 1).unwrap().entries(),
            [Ratio::new(1, 4), Ratio::new(3, 4)]
        );
        assert_eq!(
            h_vector(0, 1).unwrap().entries(),
            [Ratio::new(1, 2), Ratio::new(1, 2)]
        );
        assert_eq!(h_vector(0, 0).unwrap().entries(), [Ratio::one()]);
        assert!(h_vector(2, 1).is_err());
        assert_eq!(
            h_prime_vector(1, 1, 1, 1).unwrap().entries(),
            [Ratio::zero(), Ratio::one()]
        );
        assert_eq!(
            h_prime_vector(1, 1, 3, 1).unwrap().entries(),
            [Ratio::new(2, 11), Ratio::new(9, 11)]
        );
        assert!(h_prime_vector(0, 0, 1, 1).is_err());
        assert!(h_prime_vector(1, 1, 3, 4).is_err());
        assert_eq!(
            h_prime_vector(1, 1, 1, 3).unwrap().entries(),
            h_prime_vector(1, 1, 3, 1).unwrap().entries()
        );
    }

    #[test]
    fn dot_values() {
        let h = |s, r| h_vector(s, r).unwrap();
        assert_eq!(dot(&h(1, 1), &h(1, 1)), Ratio::new(5, 8));
        assert_eq!(dot(&h(0, 1), &h(0, 1)), Ratio::new(1, 2));
        assert_eq!(dot(&h(0, 1), &h(1, 1)), Ratio::new(1, 2));
        assert_eq!(dot(&h(0, 0), &h(1, 1)), Ratio::new(1, 4));
        assert_eq!(h(3, 5).get(9), Ratio::zero());
    }

    #[test]
    fn closed_forms_at_5_7() {
        assert_eq!(overall_curves_bound(5, 7), Ratio::new(623, 1120));
        assert_eq!(overall_curves_bound_snz(5, 7), Ratio::new(447, 700));
    }
}
