use super::{gate, run_kernel, target, TestKind, Verdict};
use crate::curve::rational::{projective_integers, RationalPoint};
use crate::curve::{Curve, CurveGroup};
use crate::error::{Error, Result};
use crate::modarith::{is_prime_u64, Factorization};
use rayon::prelude::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchHit {
    pub n: Factorization,
    pub verdict: Verdict,
}

/// Every odd composite N in [from, to] at which the rational point P
/// passes the test, in increasing order.
pub fn search(
    kind: TestKind,
    curve: &Curve,
    point: &RationalPoint,
    from: u64,
    to: u64,
) -> Result<Vec<SearchHit>> {
    if kind.is_gordon() && curve.cm_disc().is_none() {
        return Err(Error::MissingCmData);
    }
    let (x, y, z) = projective_integers(point);
    let start = from.max(9) | 1;
    if start > to {
        return Ok(Vec::new());
    }
    let odd: Vec<u64> = (start..=to).step_by(2).collect();
    let hits: Vec<Option<SearchHit>> = odd
        .into_par_iter()
        .map(|n| -> Result<Option<SearchHit>> {
            if is_prime_u64(n) {
                return Ok(None);
            }
            let fac = Factorization::from_u64(n)?;
            if gate(kind, curve, &fac)?.is_some() {
                return Ok(None);
            }
            let g = match CurveGroup::new(curve, &fac) {
                Ok(g) => g,
                Err(Error::BadReduction { .. }) | Err(Error::UnsupportedPrime(_)) => {
                    return Ok(None)
                }
                Err(e) => return Err(e),
            };
            let Ok(p) = g.point(&x, &y, &z) else {
                return Ok(None);
            };
            let v = run_kernel(kind, &g, &target(kind, curve, &fac)?, &p)?;
            Ok(v.passed.then_some(SearchHit { n: fac, verdict: v }))
        })
        .collect::<Result<_>>()?;
    Ok(hits.into_iter().flatten().collect())
}
