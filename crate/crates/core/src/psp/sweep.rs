use crate::curve::{Curve, CM_DISCRIMINANTS};
use crate::error::{Error, Result};
use crate::fp::count_points_raw;
use crate::modarith::{crt_u64, jacobi_i64, legendre, Factorization};
use num_bigint::BigInt;

/// A short form mod p with its point count.
type Form = (u64, u64, u64);

fn forms(p: u64) -> Vec<Form> {
    let mut v = Vec::new();
    for a in 0..p {
        for b in 0..p {
            if !(4 * (a * a % p) * a + 27 * (b * b % p)).is_multiple_of(p) {
                v.push((a, b, count_points_raw(a, b, p)));
            }
        }
    }
    v
}

/// Visit every tuple of per-prime forms, CRT-lifted to integers in [0, rad(N)).
fn for_each_lift(n: &Factorization, mut f: impl FnMut(&[&Form], Curve)) -> Result<()> {
    let primes: Vec<u64> = n.primes().collect();
    if primes.iter().any(|&p| p < 3) {
        return Err(Error::InvalidArgument(format!("{n}: sweeps need odd N")));
    }
    let total: u64 = primes.iter().map(|&p| p * p).product();
    if total > 10_000_000 {
        return Err(Error::CapExceeded {
            size: total.to_string(),
            cap: 10_000_000,
        });
    }
    let per: Vec<Vec<Form>> = primes.iter().map(|&p| forms(p)).collect();
    let mut idx = vec![0usize; primes.len()];
    'outer: loop {
        let pick: Vec<&Form> = idx.iter().zip(&per).map(|(&i, f)| &f[i]).collect();
        let lift = |sel: fn(&Form) -> u64| {
            BigInt::from(crt_u64(
                &pick
                    .iter()
                    .zip(&primes)
                    .map(|(f, &p)| (sel(f), p))
                    .collect::<Vec<_>>(),
            ))
        };
        f(&pick, Curve::new(lift(|f| f.0), lift(|f| f.1)));
        for k in (0..idx.len()).rev() {
            idx[k] += 1;
            if idx[k] < per[k].len() {
                continue 'outer;
            }
            idx[k] = 0;
        }
        return Ok(());
    }
}

/// Every short form (A, B) with 0 <= A, B < rad(N) and good reduction at
/// each prime of N, in mixed-radix order over the primes.
pub fn good_reduction_curves(n: &Factorization) -> Result<Vec<Curve>> {
    let mut out = Vec::new();
    for_each_lift(n, |_, c| out.push(c))?;
    Ok(out)
}

/// The curves of [`good_reduction_curves`] that can pass the G gates,
/// each paired with a CM discriminant d from the built-in list:
/// #E(F_p) = p + 1 wherever (-d/p) = -1, and jacobi(-d, N) = -1 when N
/// is squarefree. The first such d is attached; curves admitting none are
/// skipped.
///
/// The curves are not CM in general; the supersingularity condition is
/// what the CM hypothesis supplies at inert primes.
pub fn gordon_sweep(n: &Factorization) -> Result<Vec<Curve>> {
    if n.primes().any(|p| p < 5) {
        return Err(Error::InvalidArgument(format!(
            "{n}: sweep needs gcd(N, 6) = 1"
        )));
    }
    let primes: Vec<u64> = n.primes().collect();
    let n_u64 = n.prime_powers()?.iter().product::<u64>();
    let ds: Vec<(u64, Vec<bool>)> = CM_DISCRIMINANTS
        .iter()
        .filter(|&&d| {
            let j = jacobi_i64(-(d as i64), n_u64).unwrap_or(0);
            j != 0 && (!n.is_squarefree() || j == -1)
        })
        .map(|&d| {
            (
                d,
                primes
                    .iter()
                    .map(|&p| legendre(p - d % p, p) == -1)
                    .collect(),
            )
        })
        .collect();
    let mut out = Vec::new();
    for_each_lift(n, |pick, c| {
        let d = ds.iter().find(|(_, inert)| {
            inert
                .iter()
                .zip(pick)
                .zip(&primes)
                .all(|((&i, f), &p)| !i || f.2 == p + 1)
        });
        if let Some((d, _)) = d {
            out.push(c.with_cm(*d));
        }
    })?;
    Ok(out)
}
