mod common;

use common::*;
use ellpsp::fp::group_structure;
use ellpsp::psp::{gordon_sweep, PointSet};
use ellpsp::stats::{
    dot, equal_nu2_census, g_stat, h_prime_vector, h_stat, h_vector, incompat_bound,
    incompat_proportion, j_stat, j_vector, overall_curves_bound, overall_curves_bound_snz,
    random_curve_bound_check, strong_g_point_fraction, verify_max_h, verify_max_h_prime,
};
use ellpsp::{Curve, CurveGroup, Factorization, Ratio};
use proptest::prelude::*;

fn fac(n: u64) -> Factorization {
    Factorization::from_u64(n).unwrap()
}

/// ν2-order histogram of Z/n1 + Z/n2, optionally without the identity.
fn census(n1: u64, n2: u64, skip_identity: bool) -> Vec<Ratio> {
    let orders = abstract_orders(n1, n2);
    let pool: Vec<u64> = orders
        .into_iter()
        .filter(|&o| !(skip_identity && o == 1))
        .collect();
    let top = pool.iter().map(|&o| nu2(o)).max().unwrap() as usize;
    (0..=top)
        .map(|k| {
            Ratio::new(
                pool.iter().filter(|&&o| nu2(o) as usize == k).count() as u64,
                pool.len() as u64,
            )
        })
        .collect()
}

#[test]
fn h_vectors_sum_to_one() {
    for r in 0..=8 {
        for s in 0..=r {
            assert_eq!(h_vector(s, r).unwrap().total(), Ratio::one());
            for t in [1, 3, 5, 7] {
                for w in [1, 3, 5, 7] {
                    if s + r == 0 && t * w == 1 {
                        continue;
                    }
                    assert_eq!(h_prime_vector(s, r, t, w).unwrap().total(), Ratio::one());
                }
            }
        }
    }
}

#[test]
fn h_vectors_match_abstract_groups() {
    for r in 0..=3u32 {
        for s in 0..=r {
            for t in [1u64, 3] {
                for w in [1u64, 3] {
                    let (n1, n2) = ((1 << s) * t, (1 << r) * w);
                    assert_eq!(
                        h_vector(s, r).unwrap().entries(),
                        census(n1, n2, false),
                        "({s},{r},{t},{w})"
                    );
                    if n1 * n2 > 1 {
                        assert_eq!(
                            h_prime_vector(s, r, t, w).unwrap().entries(),
                            census(n1, n2, true)
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn j_matches_h_of_the_structure() {
    for p in (5..=31u64).filter(|&p| is_prime(p)) {
        for (a, b) in short_forms(p) {
            let e = Curve::new(a as i64, b as i64);
            let st = group_structure(&e, p).unwrap();
            let j = j_vector(&e, p, 1).unwrap();
            let h = h_vector(st.s, st.r).unwrap();
            assert_eq!(j.len(), h.entries().len());
            for (x, v) in j.iter().enumerate() {
                assert_eq!(v, &h.get(x), "p={p} ({a},{b}) x={x}");
            }
        }
    }
}

#[test]
fn j_is_stable_under_lifting() {
    let klein = Curve::new(1, 0);
    assert_eq!(j_stat(&klein, 5, 1, 0).unwrap(), Ratio::new(1, 4));
    assert_eq!(j_stat(&klein, 5, 1, 1).unwrap(), Ratio::new(3, 4));
    for p in [5u64, 7] {
        for (a, b) in [(1i64, 0i64), (1, 1), (2, 1), (4, 2), (3, 3)] {
            let e = Curve::new(a, b);
            if !e.good_reduction_at(p) {
                continue;
            }
            let one = j_vector(&e, p, 1).unwrap();
            assert_eq!(one, j_vector(&e, p, 2).unwrap(), "p={p} ({a},{b})");
            let total: Ratio = one.iter().sum();
            assert_eq!(total, Ratio::one());
        }
    }
}

#[test]
fn g_shrinks_when_a_prime_is_added() {
    for n in [35u64, 55, 77, 385, 5 * 7 * 13] {
        let f = fac(n);
        let m = f.without_last().unwrap();
        for (a, b) in [(1i64, 1i64), (1, 3), (2, 1), (-1, 0), (4, 1)] {
            let e = Curve::new(a, b);
            if !f.primes().all(|p| e.good_reduction_at(p)) {
                continue;
            }
            assert!(
                g_stat(&e, &f).unwrap() <= g_stat(&e, &m).unwrap(),
                "N={n} ({a},{b})"
            );
        }
    }
    let e = Curve::new(1, 0);
    assert_eq!(g_stat(&e, &fac(5)).unwrap(), Ratio::one());
    assert_eq!(
        h_stat(&e, &fac(5), 1).unwrap(),
        j_stat(&e, 5, 1, 1).unwrap()
    );
    let h35 = h_stat(&e, &fac(35), 1).unwrap();
    assert_eq!(
        h35,
        j_stat(&e, 5, 1, 1).unwrap() * j_stat(&e, 7, 1, 1).unwrap()
    );
    assert!(g_stat(&e, &fac(35)).unwrap() <= g_stat(&e, &fac(5)).unwrap());
}

#[test]
fn dot_products() {
    let h11 = h_vector(1, 1).unwrap();
    assert_eq!(dot(&h11, &h11), Ratio::new(5, 8));
    assert_eq!(
        dot(
            &h_prime_vector(1, 1, 1, 1).unwrap(),
            &h_prime_vector(1, 1, 3, 1).unwrap()
        ),
        Ratio::new(9, 11)
    );
    for (s1, r1, s2, r2) in [(0, 2, 1, 3), (2, 2, 0, 0), (1, 4, 3, 5)] {
        let (u, v) = (h_vector(s1, r1).unwrap(), h_vector(s2, r2).unwrap());
        assert_eq!(dot(&u, &v), dot(&v, &u));
    }
    for s2 in 0..=1 {
        let mut prev = dot(&h11, &h_vector(s2, 1).unwrap());
        for r2 in 2..=8 {
            let d = dot(&h11, &h_vector(s2, r2).unwrap());
            assert!(d < prev);
            prev = d;
        }
    }
}

#[test]
fn grid_maxima() {
    let rep = verify_max_h(8).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.max, Ratio::new(5, 8));
    assert_eq!(rep.argmax, [(1, 1, 1, 1)]);
    assert!(verify_max_h(1).is_err());

    let rep = verify_max_h_prime(8, 9).unwrap();
    assert!(rep.relative_violations.is_empty());
    assert!(rep.cap_violations.is_empty());
    assert_eq!(rep.max, Ratio::new(9, 11));
    assert!(rep.argmax.contains(&((1, 1, 1, 3), (1, 1, 1, 1))));
    assert!(!rep.small_group_exceptions.is_empty());
    assert!(rep
        .small_group_exceptions
        .contains(&((1, 1, 1, 1), (1, 1, 1, 1))));
    assert!(rep.passed());
}

#[test]
fn incompatible_point_proportion() {
    assert_eq!(incompat_bound(5, 2), Ratio::new(4, 5));
    assert_eq!(incompat_bound(7, 2), Ratio::one() - Ratio::new(1, 7));
    let mut cyclic = false;
    for (a, b) in short_forms(5) {
        for i in 0..5 {
            let e = Curve::new((a + 5 * i) as i64, b as i64);
            let v = incompat_proportion(&e, 5, 2).unwrap();
            assert!(v >= Ratio::new(4, 5));
            let anomalous = aff_points(a, b, 5).len() == 5;
            if anomalous && v == Ratio::new(24, 25) {
                cyclic = true;
            }
        }
    }
    assert!(cyclic);
    assert!(incompat_proportion(&Curve::new(1, 1), 5, 1).is_err());
}

#[test]
fn closed_form_bounds() {
    assert_eq!(overall_curves_bound(5, 7), Ratio::new(623, 1120));
    assert_eq!(overall_curves_bound_snz(5, 7), Ratio::new(2682, 4200));
}

/// Exact equal-ν2 probabilities over pairs of curves mod 5 and mod 7,
/// from affine point orders.
fn census_35(skip_identity: bool) -> Ratio {
    let hist = |p: u64| -> Vec<Vec<Ratio>> {
        short_forms(p)
            .into_iter()
            .map(|(a, b)| {
                let orders: Vec<u64> = aff_points(a, b, p)
                    .into_iter()
                    .filter(|pt| !(skip_identity && pt.is_none()))
                    .map(|pt| aff_order(a, p, pt))
                    .collect();
                (0..8)
                    .map(|k| {
                        Ratio::new(
                            orders.iter().filter(|&&o| nu2(o) == k).count() as u64,
                            orders.len() as u64,
                        )
                    })
                    .collect()
            })
            .collect()
    };
    let (h5, h7) = (hist(5), hist(7));
    let mut total = Ratio::zero();
    for u in &h5 {
        for v in &h7 {
            total = total + u.iter().zip(v).map(|(a, b)| a * b).sum::<Ratio>();
        }
    }
    total / Ratio::from((h5.len() * h7.len()) as i64)
}

#[test]
fn exact_census_at_35() {
    let all = equal_nu2_census(&fac(35), PointSet::All).unwrap();
    let snz = equal_nu2_census(&fac(35), PointSet::StronglyNonZero).unwrap();
    assert_eq!(all, census_35(false));
    assert_eq!(snz, census_35(true));
    assert!(all <= overall_curves_bound(5, 7));
    assert!(snz <= overall_curves_bound_snz(5, 7));
}

#[test]
fn strong_g_fractions_on_sampled_sweeps() {
    let n = fac(35);
    for e in gordon_sweep(&n).unwrap().into_iter().step_by(7) {
        let g = CurveGroup::new(&e, &n).unwrap();
        assert!(
            strong_g_point_fraction(&g, PointSet::All).unwrap() <= Ratio::new(5, 8),
            "{e}"
        );
        assert!(
            strong_g_point_fraction(&g, PointSet::StronglyNonZero).unwrap() <= Ratio::new(9, 11),
            "{e}"
        );
    }
    for p in [5u64, 7] {
        let n = fac(p * p);
        for e in gordon_sweep(&n).unwrap() {
            let g = CurveGroup::new(&e, &n).unwrap();
            assert!(
                strong_g_point_fraction(&g, PointSet::All).unwrap() <= Ratio::new(1, p as i64),
                "{e}"
            );
        }
    }
}

#[test]
fn monte_carlo_is_replayable_and_bounded() {
    let n = fac(35);
    let a = random_curve_bound_check(&n, 5, 7, 4000, 42, PointSet::All).unwrap();
    let b = random_curve_bound_check(&n, 5, 7, 4000, 42, PointSet::All).unwrap();
    assert_eq!(a, b);
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let c = single.install(|| random_curve_bound_check(&n, 5, 7, 4000, 42, PointSet::All).unwrap());
    assert_eq!(a, c);
    assert!(a.within_bound);
    assert_eq!(a.bound, Ratio::new(623, 1120));
    let s = random_curve_bound_check(&n, 5, 7, 4000, 42, PointSet::StronglyNonZero).unwrap();
    assert!(s.within_bound);
    assert_eq!(s.bound, Ratio::new(447, 700));
    let n3 = fac(5 * 7 * 11);
    let r = random_curve_bound_check(&n3, 7, 11, 2000, 1, PointSet::All).unwrap();
    assert!(r.within_bound);
    let json = serde_json::to_string(&a).unwrap();
    assert!(json.contains("\"observed\":\"") && json.contains("\"seed\":42"));
    assert!(random_curve_bound_check(&n, 5, 5, 10, 1, PointSet::All).is_err());
    assert!(random_curve_bound_check(&n, 5, 11, 10, 1, PointSet::All).is_err());
}

proptest! {
    #[test]
    fn dot_is_symmetric(s1 in 0u32..6, d1 in 0u32..4, s2 in 0u32..6, d2 in 0u32..4) {
        let u = h_vector(s1, s1 + d1).unwrap();
        let v = h_vector(s2, s2 + d2).unwrap();
        prop_assert_eq!(dot(&u, &v), dot(&v, &u));
        prop_assert!(dot(&u, &v) <= Ratio::one());
    }
}
