use super::{gate, strong_kernel, target, weak_kernel, Reason, TestKind};
use crate::curve::{CurveGroup, LocalPoint, ProjPoint};
use crate::error::{Error, Result};
use crate::fp::group_structure;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointSet {
    All,
    StronglyNonZero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarmichaelReport {
    pub test: TestKind,
    pub points: PointSet,
    /// First failing gate, if any.
    pub gate: Option<Reason>,
    /// Whether every point of the set passes the test's point condition.
    pub kernel_holds: bool,
    /// A failing point when the kernel does not hold.
    pub witness: Option<ProjPoint>,
    pub checked: usize,
}

impl CarmichaelReport {
    /// Gates pass and every point passes.
    pub fn holds(&self) -> bool {
        self.gate.is_none() && self.kernel_holds
    }
}

/// Whether the test passes at every point of E(Z/NZ), or at every strongly
/// non-zero point. The witness is the first failing point in enumeration order.
pub fn carmichael_test(g: &CurveGroup, kind: TestKind, set: PointSet) -> Result<CarmichaelReport> {
    let gate = gate(kind, g.curve(), g.factorization())?;
    let tgt = target(kind, g.curve(), g.factorization())?;
    let pts = match set {
        PointSet::All => g.points()?,
        PointSet::StronglyNonZero => g.strong_points()?,
    };
    let passes = |p: &ProjPoint| -> bool {
        if kind.is_strong() {
            tgt.is_positive() && strong_kernel(g, tgt.magnitude(), p).0
        } else {
            weak_kernel(g, &tgt, p)
        }
    };
    let witness = pts.par_iter().find_first(|p| !passes(p)).cloned();
    Ok(CarmichaelReport {
        test: kind,
        points: set,
        gate,
        kernel_holds: witness.is_none(),
        witness,
        checked: pts.len(),
    })
}

/// Exponent of E(Z/p^e) where p^e exactly divides N.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Epsilon {
    pub p: u64,
    pub value: u64,
}

impl Epsilon {
    pub fn divides(&self, t: &BigUint) -> bool {
        (t % self.value).is_zero()
    }
}

pub fn epsilon(g: &CurveGroup, p: u64) -> Result<Epsilon> {
    let i = g
        .factorization()
        .primes()
        .position(|q| q == p)
        .ok_or_else(|| Error::InvalidArgument(format!("{p} does not divide N")))?;
    let c = &g.components()[i];
    let value = g
        .component_points(i)?
        .iter()
        .fold(1u64, |acc, pt| acc.lcm(&c.point_order(pt)));
    Ok(Epsilon { p, value })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SnzCharacterization {
    /// Every epsilon divides t.
    HoldsViaI,
    /// Every epsilon divides 2t and every E(F_p) is Z/2 + Z/2 or Z/2.
    HoldsViaII,
    Fails,
}

impl SnzCharacterization {
    pub fn holds(self) -> bool {
        self != SnzCharacterization::Fails
    }
}

/// Decide from epsilons and group structures whether N is a strong
/// S-pseudoprime at every strongly non-zero point.
pub fn strong_s_snz_characterization(g: &CurveGroup) -> Result<SnzCharacterization> {
    for (i, c) in g.components().iter().enumerate() {
        if !g.component_points(i)?.iter().any(|pt| c.is_strong(pt)) {
            return Err(Error::NoStronglyNonZero { p: c.prime() });
        }
    }
    if gate(TestKind::StrongS, g.curve(), g.factorization())?.is_some() {
        return Ok(SnzCharacterization::Fails);
    }
    let tgt: BigInt = target(TestKind::StrongS, g.curve(), g.factorization())?;
    if !tgt.is_positive() {
        return Ok(SnzCharacterization::Fails);
    }
    let tgt = tgt.magnitude();
    let s = tgt.trailing_zeros().unwrap_or(0);
    let t = tgt >> s;
    let eps: Vec<Epsilon> = g
        .factorization()
        .primes()
        .map(|p| epsilon(g, p))
        .collect::<Result<_>>()?;
    if eps.iter().all(|e| e.divides(&t)) {
        return Ok(SnzCharacterization::HoldsViaI);
    }
    let t2 = &t * 2u32;
    let mut via_ii = s >= 1 && eps.iter().all(|e| e.divides(&t2));
    if via_ii {
        for p in g.factorization().primes() {
            let st = group_structure(g.curve(), p)?;
            let small = (st.s, st.r, st.t, st.w) == (1, 1, 1, 1)
                || (st.s, st.r, st.t, st.w) == (0, 1, 1, 1);
            via_ii &= small;
        }
    }
    Ok(if via_ii {
        SnzCharacterization::HoldsViaII
    } else {
        SnzCharacterization::Fails
    })
}

pub(crate) fn first_strong(g: &CurveGroup, i: usize) -> Result<LocalPoint> {
    let c = &g.components()[i];
    g.component_points(i)?
        .iter()
        .find(|pt| c.is_strong(pt))
        .copied()
        .ok_or(Error::NoStronglyNonZero { p: c.prime() })
}
