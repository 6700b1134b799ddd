use super::carmichael::first_strong;
use super::strong_kernel;
use crate::curve::{CurveGroup, LocalPoint, ProjPoint};
use crate::error::{Error, Result};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

/// Which construction produced a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WitnessCase {
    /// p^2 | N: a point whose order is divisible by p.
    SquareFactor,
    /// #E(F_p) = p + 1 and some other #E(F_q) is not a power of 2: even
    /// order at p, odd order > 1 at q.
    OddEvenMix,
    /// All other #E(F_q) are powers of 2.
    PowerOfTwo,
    /// No construction applied; found by scanning the strongly non-zero points.
    Scan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub point: ProjPoint,
    pub case: WitnessCase,
}

/// A strongly non-zero point at which the strong G condition fails
/// (gates aside) for composite N.
pub fn strong_g_witness(g: &CurveGroup) -> Result<Witness> {
    if !g.factorization().is_composite() {
        return Err(Error::InvalidArgument(format!(
            "{} is not composite",
            g.n()
        )));
    }
    let tgt = g.n().clone() + 1u32;
    let fails = |pt: &ProjPoint| pt.is_strong() && !strong_kernel(g, &tgt, pt).0;
    if let Some((point, case)) = construct(g)? {
        if fails(&point) {
            return Ok(Witness { point, case });
        }
    }
    let point = scan(g, &tgt)?.ok_or_else(|| {
        Error::TheoremViolation(format!(
            "every strongly non-zero point mod {} passes the strong G test",
            g.n()
        ))
    })?;
    Ok(Witness {
        point,
        case: WitnessCase::Scan,
    })
}

/// First failing strongly non-zero point in enumeration order.
pub(crate) fn scan(g: &CurveGroup, tgt: &BigUint) -> Result<Option<ProjPoint>> {
    Ok(g.strong_points()?
        .into_iter()
        .find(|p| !strong_kernel(g, tgt, p).0))
}

fn construct(g: &CurveGroup) -> Result<Option<(ProjPoint, WitnessCase)>> {
    let comps = g.components();
    let mut parts: Vec<LocalPoint> = (0..comps.len())
        .map(|i| first_strong(g, i))
        .collect::<Result<_>>()?;
    let find = |i: usize, pred: &dyn Fn(u64) -> bool| -> Result<Option<LocalPoint>> {
        let c = &comps[i];
        Ok(g.component_points(i)?
            .iter()
            .find(|pt| c.is_strong(pt) && pred(c.point_order(pt)))
            .copied())
    };
    if let Some(i) = comps.iter().position(|c| c.exponent() >= 2) {
        let p = comps[i].prime();
        return Ok(find(i, &|o| o % p == 0)?.map(|pt| {
            parts[i] = pt;
            (
                g.from_components(parts)
                    .expect("components are on the curve"),
                WitnessCase::SquareFactor,
            )
        }));
    }
    let Some(i) = comps.iter().position(|c| c.fp_order() == c.prime() + 1) else {
        return Ok(None);
    };
    let two_power = |n: u64| n.is_power_of_two();
    let case =
        if let Some(j) = (0..comps.len()).find(|&j| j != i && !two_power(comps[j].fp_order())) {
            let even = find(i, &|o| o % 2 == 0)?;
            let odd = find(j, &|o| o % 2 == 1 && o > 1)?;
            match (even, odd) {
                (Some(a), Some(b)) => {
                    parts[i] = a;
                    parts[j] = b;
                    WitnessCase::OddEvenMix
                }
                _ => return Ok(None),
            }
        } else {
            let Some(j) = (0..comps.len()).find(|&j| j != i) else {
                return Ok(None);
            };
            if !two_power(comps[i].fp_order()) {
                let odd = find(i, &|o| o % 2 == 1 && o > 1)?;
                let even = find(j, &|o| o % 2 == 0)?;
                match (odd, even) {
                    (Some(a), Some(b)) => {
                        parts[i] = a;
                        parts[j] = b;
                    }
                    _ => return Ok(None),
                }
            } else {
                let four = find(i, &|o| o == 4)?;
                let two = find(j, &|o| o == 2)?;
                match (four, two) {
                    (Some(a), Some(b)) => {
                        parts[i] = a;
                        parts[j] = b;
                    }
                    _ => return Ok(None),
                }
            }
            WitnessCase::PowerOfTwo
        };
    Ok(Some((g.from_components(parts)?, case)))
}
