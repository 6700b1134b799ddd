mod common;

use common::*;
use ellpsp::curve::{PointClass, Reachability};
use ellpsp::{Curve, CurveGroup, ProjPoint};
use num_bigint::BigUint;
use std::collections::BTreeSet;

/// Groups mod p^2 for p in {5, 7}: three fixed curves per prime plus a few
/// lifts of every anomalous short form.
fn sample_groups() -> Vec<(u64, CurveGroup)> {
    let mut out = Vec::new();
    for p in [5u64, 7] {
        let forms = short_forms(p);
        let mut fixed = 0;
        for &(a, b) in &forms {
            let anomalous = aff_points(a, b, p).len() as u64 == p;
            if anomalous {
                for i in 0..3 {
                    for j in 0..3 {
                        let e = Curve::new((a + p * i) as i64, (b + p * j) as i64);
                        out.push((p, CurveGroup::with_modulus(&e, p * p).unwrap()));
                    }
                }
            } else if fixed < 3 {
                fixed += 1;
                out.push((
                    p,
                    CurveGroup::with_modulus(&Curve::new(a as i64, b as i64), p * p).unwrap(),
                ));
            }
        }
    }
    out
}

fn u(n: &BigUint) -> u64 {
    n.to_u64_digits().first().copied().unwrap_or(0)
}

/// All kP with P strongly non-zero and 0 <= k < #E.
fn strong_multiples(g: &CurveGroup) -> BTreeSet<ProjPoint> {
    let n = u(&g.order());
    let mut seen = BTreeSet::new();
    for p in g.strong_points().unwrap() {
        let mut acc = g.identity();
        for _ in 0..n {
            seen.insert(acc.clone());
            acc = g.add(&acc, &p);
        }
    }
    seen
}

#[test]
fn reduction_detects_the_kernel() {
    for (p, g) in sample_groups() {
        let gp = g.prime_power_group(1).unwrap();
        for q in g.points().unwrap() {
            let r = g.reduce_point(&q, 1).unwrap();
            assert!(gp.contains(&r));
            assert_eq!(q.is_strong(), r.is_strong(), "p={p} {q}");
            assert_eq!(!q.is_strong(), r.is_identity());
            assert_eq!(g.reduce_point(&q, 2).unwrap(), q);
        }
    }
}

#[test]
fn kernel_orders_are_proper_powers_of_p() {
    for (p, g) in sample_groups() {
        let mut kernel = 0;
        for q in g.points().unwrap().iter().filter(|q| !q.is_strong()) {
            let o = u(&g.point_order(q));
            assert!(o == 1 || o == p, "p={p} {q} order {o}");
            kernel += 1;
        }
        assert_eq!(kernel, p);
    }
}

#[test]
fn lifts_number_p_and_reduce_back() {
    for (p, g) in sample_groups() {
        let gp = g.prime_power_group(1).unwrap();
        for q in gp.points().unwrap() {
            let lifts = gp.lift_points(&q).unwrap();
            assert_eq!(lifts.len() as u64, p);
            assert_eq!(lifts.iter().collect::<BTreeSet<_>>().len() as u64, p);
            for l in &lifts {
                assert!(g.contains(l));
                assert_eq!(g.reduce_point(l, 1).unwrap(), q);
            }
            if q.is_identity() {
                assert!(lifts.iter().all(|l| l.class() == PointClass::Zero));
            }
        }
    }
}

#[test]
fn coprime_multiples_reach_the_kernel_iff_k_kills_a_strong_point() {
    for (p, g) in sample_groups() {
        let strong = g.strong_points().unwrap();
        for q in g.points().unwrap().iter().filter(|q| !q.is_strong()) {
            for k in [1u64, 2, 3, 4, 6] {
                if k % p == 0 {
                    continue;
                }
                let lhs = strong.iter().any(|s| &g.mul_u64(k, s) == q);
                let rhs = strong.iter().any(|s| g.mul_u64(k, s).is_identity());
                assert_eq!(lhs, rhs, "p={p} k={k} {q}");
            }
        }
    }
}

#[test]
fn kernel_points_are_dominated_by_strong_points() {
    for (_, g) in sample_groups() {
        let strong = g.strong_points().unwrap();
        for q in g.points().unwrap() {
            let oq = g.point_order(&q);
            assert!(strong
                .iter()
                .any(|s| (g.point_order(s) % &oq) == BigUint::from(0u32)));
            let d = g.snz_dominator(&q).unwrap();
            assert!(d.is_strong());
            assert_eq!(g.point_order(&d) % &oq, BigUint::from(0u32));
            if q.is_strong() {
                assert_eq!(d, q);
            }
        }
    }
}

#[test]
fn dominator_mod_15_and_35() {
    for n in [15u64, 35] {
        for (a, b) in [(1i64, 1i64), (1, 3), (2, 1)] {
            let g = CurveGroup::with_modulus(&Curve::new(a, b), n).unwrap();
            for q in g.points().unwrap() {
                let d = g.snz_dominator(&q).unwrap();
                assert!(d.is_strong());
                assert_eq!(g.point_order(&d) % g.point_order(&q), BigUint::from(0u32));
            }
        }
    }
}

#[test]
fn reachability_matches_brute_force() {
    let mut cases = BTreeSet::new();
    for (p, g) in sample_groups() {
        let reach = strong_multiples(&g);
        for q in g.points().unwrap().iter().filter(|q| !q.is_strong()) {
            let r = g.snz_reachability(q).unwrap();
            assert_eq!(
                r.is_reachable(),
                reach.contains(q),
                "p={p} {} {q}: {r:?}",
                g.curve()
            );
            cases.insert(format!("{r:?}"));
        }
        let anomalous = g.components()[0].fp_order() == p;
        if !anomalous {
            assert!(g
                .points()
                .unwrap()
                .iter()
                .filter(|q| !q.is_strong())
                .all(|q| g.snz_reachable(q).unwrap()));
        }
    }
    for c in [
        Reachability::NotAnomalous,
        Reachability::Cyclic,
        Reachability::SplitNonGenerator,
        Reachability::SplitGenerator,
    ] {
        assert!(
            cases.contains(&format!("{c:?}")),
            "{c:?} never exercised: {cases:?}"
        );
    }
}

#[test]
fn reachability_rejects_strong_points() {
    let g = CurveGroup::with_modulus(&Curve::new(1, 1), 25).unwrap();
    let p = g.strong_points().unwrap().remove(0);
    assert!(g.snz_reachability(&p).is_err());
}

#[test]
fn zero_mod_15_iff_components_zero() {
    for (a, b) in [(1i64, 1i64), (1, 3), (2, 1), (4, 2)] {
        let g = CurveGroup::with_modulus(&Curve::new(a, b), 15).unwrap();
        for q in g.points().unwrap() {
            let parts = g.split(&q);
            assert_eq!(q.is_zero(), parts.iter().all(|c| c.is_zero()));
            assert_eq!(q.is_strong(), parts.iter().all(|c| c.is_strong()));
            assert_eq!(
                q.class() == PointClass::NonZeroNotStrong,
                !q.is_zero() && parts.iter().any(|c| !c.is_strong())
            );
        }
    }
}
