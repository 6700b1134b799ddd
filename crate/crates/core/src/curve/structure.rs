//! Which non-strong points are multiples of strongly non-zero points, and
//! strongly non-zero points whose order is a multiple of a given order.

use super::group::CurveGroup;
use super::local::LocalPoint;
use super::point::ProjPoint;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// How a point in the reduction kernel of E(Z/p^n) relates to the strongly
/// non-zero points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reachability {
    /// #E(F_p) != p.
    NotAnomalous,
    /// E(Z/p^n) is cyclic of order p^n.
    Cyclic,
    /// E(Z/p^n) = Z/p + Z/p^(n-1) and the point is not a generator of the kernel.
    SplitNonGenerator,
    /// E(Z/p^n) = Z/p + Z/p^(n-1) and the point generates the kernel.
    SplitGenerator,
}

impl Reachability {
    pub fn is_reachable(self) -> bool {
        !matches!(self, Reachability::SplitGenerator)
    }
}

impl CurveGroup {
    fn prime_power(&self) -> Result<(u64, u32)> {
        match self.factorization().factors() {
            [(p, e)] => Ok((*p, *e)),
            _ => Err(Error::InvalidArgument(
                "operation needs a prime-power modulus".into(),
            )),
        }
    }

    /// Classify a non-strong point of E(Z/p^n) by the three cases of the
    /// reachability criterion.
    pub fn snz_reachability(&self, q: &ProjPoint) -> Result<Reachability> {
        let (p, n) = self.prime_power()?;
        if q.is_strong() {
            return Err(Error::InvalidArgument("point is strongly non-zero".into()));
        }
        let c = &self.components()[0];
        if c.fp_order() != p {
            return Ok(Reachability::NotAnomalous);
        }
        let pts = self.component_points(0)?;
        let torsion = pts
            .iter()
            .filter(|pt| c.mul_u64(p, pt) == LocalPoint::IDENTITY)
            .count() as u64;
        if torsion == p {
            return Ok(Reachability::Cyclic);
        }
        if c.point_order(&q.parts[0]) < p.pow(n - 1) {
            Ok(Reachability::SplitNonGenerator)
        } else {
            Ok(Reachability::SplitGenerator)
        }
    }

    /// Whether kP = Q for some integer k and strongly non-zero P.
    pub fn snz_reachable(&self, q: &ProjPoint) -> Result<bool> {
        Ok(self.snz_reachability(q)?.is_reachable())
    }

    /// A strongly non-zero point whose order is a multiple of the order of `q`.
    ///
    /// Built componentwise: strongly non-zero components of `q` are kept,
    /// the others are replaced by a strongly non-zero point of the same
    /// component whose order they divide.
    pub fn snz_dominator(&self, q: &ProjPoint) -> Result<ProjPoint> {
        let mut parts = Vec::with_capacity(self.components().len());
        for (i, (c, pt)) in self.components().iter().zip(&q.parts).enumerate() {
            if c.is_strong(pt) {
                parts.push(*pt);
                continue;
            }
            let need = c.point_order(pt);
            let strong: Vec<_> = self
                .component_points(i)?
                .iter()
                .filter(|t| c.is_strong(t))
                .collect();
            if strong.is_empty() {
                return Err(Error::NoStronglyNonZero { p: c.prime() });
            }
            let t = strong
                .into_iter()
                .find(|t| c.point_order(t) % need == 0)
                .ok_or_else(|| {
                    Error::TheoremViolation(format!(
                        "no strongly non-zero point mod {} has order divisible by {need}",
                        c.modulus()
                    ))
                })?;
            parts.push(*t);
        }
        self.from_components(parts)
    }
}
