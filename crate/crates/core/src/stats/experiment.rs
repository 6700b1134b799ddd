use super::{overall_curves_bound, overall_curves_bound_snz};
use crate::curve::{Curve, CurveGroup, LocalCurve, LocalPoint};
use crate::error::{Error, Result};
use crate::modarith::{Factorization, Ratio};
use crate::psp::{strong_kernel, PointSet};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

fn nu2(n: u64) -> usize {
    n.trailing_zeros() as usize
}

fn tally(counts: Vec<u64>, total: u64) -> Vec<Ratio> {
    counts.into_iter().map(|c| Ratio::new(c, total)).collect()
}

fn nu2_counts(c: &LocalCurve, pts: &[LocalPoint], set: PointSet) -> (Vec<u64>, u64) {
    let mut counts = Vec::new();
    let mut total = 0;
    for pt in pts {
        if set == PointSet::StronglyNonZero && !c.is_strong(pt) {
            continue;
        }
        let k = nu2(c.point_order(pt));
        if counts.len() <= k {
            counts.resize(k + 1, 0);
        }
        counts[k] += 1;
        total += 1;
    }
    (counts, total)
}

/// J(x, p^a) for every x up to the largest one with a nonzero value.
pub fn j_vector(curve: &Curve, p: u64, a: u32) -> Result<Vec<Ratio>> {
    let g = CurveGroup::new(curve, &Factorization::from_factors(&[(p, a)])?)?;
    let (counts, total) = nu2_counts(&g.components()[0], g.component_points(0)?, PointSet::All);
    Ok(tally(counts, total))
}

/// Proportion of points of E(Z/p^a) whose order has 2-adic valuation x.
pub fn j_stat(curve: &Curve, p: u64, a: u32, x: usize) -> Result<Ratio> {
    Ok(j_vector(curve, p, a)?
        .get(x)
        .cloned()
        .unwrap_or_else(Ratio::zero))
}

/// Product of J(x, p^a) over the prime powers of N.
pub fn h_stat(curve: &Curve, n: &Factorization, x: usize) -> Result<Ratio> {
    n.factors()
        .iter()
        .map(|&(p, a)| j_stat(curve, p, a, x))
        .product()
}

/// Σ_x H(x, N): the proportion of points whose components all share one
/// ν2-order.
pub fn g_stat(curve: &Curve, n: &Factorization) -> Result<Ratio> {
    let js: Vec<Vec<Ratio>> = n
        .factors()
        .iter()
        .map(|&(p, a)| j_vector(curve, p, a))
        .collect::<Result<_>>()?;
    let len = js.iter().map(Vec::len).min().unwrap_or(0);
    Ok((0..len)
        .map(|x| js.iter().map(|j| j[x].clone()).product::<Ratio>())
        .sum())
}

/// (p^(α-1) - 1) / p^(α-1).
pub fn incompat_bound(p: u64, alpha: u32) -> Ratio {
    let m = p.pow(alpha - 1);
    Ratio::new(m - 1, m)
}

/// Proportion of points of E(Z/p^α) whose order is divisible by p.
pub fn incompat_proportion(curve: &Curve, p: u64, alpha: u32) -> Result<Ratio> {
    if alpha < 2 {
        return Err(Error::InvalidArgument("alpha must be at least 2".into()));
    }
    let g = CurveGroup::new(curve, &Factorization::from_factors(&[(p, alpha)])?)?;
    let c = &g.components()[0];
    let pts = g.component_points(0)?;
    let hits = pts.iter().filter(|pt| c.point_order(pt) % p == 0).count();
    let value = Ratio::new(hits as u64, pts.len() as u64);
    if value < incompat_bound(p, alpha) {
        return Err(Error::TheoremViolation(format!(
            "{value} below the bound at p = {p}, alpha = {alpha}"
        )));
    }
    Ok(value)
}

/// Fraction of the points (or strongly non-zero points) of E(Z/NZ) that
/// satisfy the strong G condition against N + 1. Gates are not applied.
pub fn strong_g_point_fraction(g: &CurveGroup, set: PointSet) -> Result<Ratio> {
    let pts = match set {
        PointSet::All => g.points()?,
        PointSet::StronglyNonZero => g.strong_points()?,
    };
    if pts.is_empty() {
        return Err(Error::NoStronglyNonZero {
            p: g.components()[0].prime(),
        });
    }
    let tgt = g.n() + BigUint::from(1u32);
    let pass = pts
        .par_iter()
        .filter(|p| strong_kernel(g, &tgt, p).0)
        .count();
    Ok(Ratio::new(pass as u64, pts.len() as u64))
}

/// Exact probability that a uniform point on a uniform curve has equal
/// ν2-orders at every prime of N. Curves are short forms with good
/// reduction, drawn independently per prime; points are counted over F_p.
pub fn equal_nu2_census(n: &Factorization, set: PointSet) -> Result<Ratio> {
    let per_prime: Vec<Vec<Ratio>> = n
        .primes()
        .map(|p| {
            let forms: Vec<(u64, u64)> = (0..p)
                .flat_map(|a| (0..p).map(move |b| (a, b)))
                .filter(|&(a, b)| Curve::new(a, b).good_reduction_at(p))
                .collect();
            if forms.len() as u64 > 1_000_000 {
                return Err(Error::CapExceeded {
                    size: forms.len().to_string(),
                    cap: 1_000_000,
                });
            }
            let vecs: Vec<Vec<Ratio>> = forms
                .par_iter()
                .map(|&(a, b)| {
                    let c = LocalCurve::new(p, 1, a, b);
                    let (counts, total) = nu2_counts(&c, &c.fp_points(), set);
                    tally(counts, total)
                })
                .collect();
            let len = vecs.iter().map(Vec::len).max().unwrap_or(0);
            let k = Ratio::new(1, forms.len() as u64);
            Ok((0..len)
                .map(|x| vecs.iter().filter_map(|v| v.get(x)).sum::<Ratio>() * k.clone())
                .collect())
        })
        .collect::<Result<_>>()?;
    let len = per_prime.iter().map(Vec::len).min().unwrap_or(0);
    Ok((0..len)
        .map(|x| per_prime.iter().map(|v| v[x].clone()).product::<Ratio>())
        .sum())
}

/// One Monte Carlo run against the random-curve bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub seed: u64,
    #[serde(rename = "N")]
    pub n: String,
    pub p: u64,
    pub q: u64,
    pub curve_space: String,
    pub points: PointSet,
    pub sample_size: u64,
    pub hits: u64,
    pub observed: Ratio,
    pub bound: Ratio,
    /// Three binomial standard deviations at the bound.
    pub radius: f64,
    pub within_bound: bool,
}

const CHUNK: u64 = 256;

fn sample_event(rng: &mut ChaCha8Rng, primes: &[u64], set: PointSet) -> bool {
    let mut first = None;
    let mut equal = true;
    for &p in primes {
        let c = loop {
            let (a, b) = (rng.gen_range(0..p), rng.gen_range(0..p));
            if (4 * (a * a % p) * a + 27 * (b * b % p)) % p != 0 {
                break LocalCurve::new(p, 1, a, b);
            }
        };
        let pts = c.fp_points();
        // identity comes first
        let lo = if set == PointSet::StronglyNonZero {
            1
        } else {
            0
        };
        let pt = pts[rng.gen_range(lo..pts.len())];
        let k = nu2(c.point_order(&pt));
        equal &= *first.get_or_insert(k) == k;
    }
    equal
}

/// Sample points on random curves mod each prime of N and compare the
/// frequency of equal ν2-orders with the closed-form bound at (p, q).
///
/// Samples are drawn in chunks of 256; chunk i uses ChaCha8 seeded with
/// `seed` on stream i, so the result does not depend on thread count.
pub fn random_curve_bound_check(
    n: &Factorization,
    p: u64,
    q: u64,
    samples: u64,
    seed: u64,
    set: PointSet,
) -> Result<ExperimentRecord> {
    let primes: Vec<u64> = n.primes().collect();
    if p == q || !primes.contains(&p) || !primes.contains(&q) {
        return Err(Error::InvalidArgument(format!(
            "p = {p} and q = {q} must be distinct primes of {n}"
        )));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    if primes.iter().any(|&l| !(5..=100_000).contains(&l)) {
        return Err(Error::InvalidArgument(
            "primes must lie in 5..=100000".into(),
        ));
    }
    let chunks = samples.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let m = CHUNK.min(samples - i * CHUNK);
            (0..m)
                .filter(|_| sample_event(&mut rng, &primes, set))
                .count() as u64
        })
        .sum();
    let bound = match set {
        PointSet::All => overall_curves_bound(p, q),
        PointSet::StronglyNonZero => overall_curves_bound_snz(p, q),
    };
    let observed = Ratio::new(hits, samples);
    let b = bound.to_f64();
    let radius = 3.0 * (b * (1.0 - b) / samples as f64).sqrt();
    let within_bound = observed <= bound || observed.to_f64() - b <= radius;
    Ok(ExperimentRecord {
        seed,
        n: n.to_string(),
        p,
        q,
        curve_space: "short-form".into(),
        points: set,
        sample_size: samples,
        hits,
        observed,
        bound,
        radius,
        within_bound,
    })
}
