//! Property tests for the invariants the library promises.

use bettibound::exactmath::{rat, CyclotomicInteger, ExtRational, Rational};
use bettibound::ffcount::{make_field, CountOptions, Counter, Domain};
use bettibound::polygon::{dominates, newton_polygon};
use bettibound::polytope::{convex_hull, minkowski_sum, mixed_volume, LatticePolytope, LaurentPolynomial};
use bettibound::verify::{verify_cayley, Verdict};
use num_bigint::BigInt;
use proptest::prelude::*;

fn counter(jobs: usize, chunk_size: u64) -> Counter {
    Counter::new(CountOptions { jobs, chunk_size, ..CountOptions::default() }).unwrap()
}

fn polygon_points() -> impl Strategy<Value = Vec<(usize, ExtRational)>> {
    prop::collection::vec(prop::option::weighted(0.8, (-6i64..6, 1i64..4)), 2..8).prop_map(|vals| {
        vals.into_iter()
            .enumerate()
            .map(|(i, v)| {
                let v = match v {
                    Some((a, b)) => ExtRational::Finite(rat(a, b)),
                    None => ExtRational::Infinite,
                };
                (i, v)
            })
            .collect()
    })
}

fn plane_polytope() -> impl Strategy<Value = LatticePolytope> {
    prop::collection::vec(prop::collection::vec(0i64..4, 2), 3..7)
        .prop_filter_map("degenerate", |pts| convex_hull(&pts).ok().filter(|p| p.is_full_dimensional()))
}

/// Random polynomial in `n` variables of degree at most `d` with coefficients mod `p`.
fn polynomial(n: usize, d: i64, p: i64) -> impl Strategy<Value = LaurentPolynomial> {
    let exps: Vec<Vec<i64>> = (0..(d + 1).pow(n as u32))
        .map(|k| (0..n).map(|i| (k / (d + 1).pow(i as u32)) % (d + 1)).collect::<Vec<i64>>())
        .filter(|e| e.iter().sum::<i64>() <= d)
        .collect();
    prop::collection::vec(0..p, exps.len()).prop_map(move |cs| {
        let terms = exps.iter().cloned().zip(cs.into_iter().map(BigInt::from));
        LaurentPolynomial::from_terms(n, terms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn newton_polygon_is_convex_and_dominates_itself(points in polygon_points()) {
        let Ok(np) = newton_polygon(&points) else { return Ok(()) };
        prop_assert!(dominates(&np, &np));
        let slopes: Vec<Rational> = np
            .vertices()
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
            .collect();
        prop_assert!(slopes.windows(2).all(|s| s[0] < s[1]));
        for (i, v) in &points {
            if let ExtRational::Finite(v) = v {
                if let Some(y) = np.value_at(&Rational::from_integer((*i).into())) {
                    prop_assert!(&y <= v);
                }
            }
        }
    }

    #[test]
    fn mixed_volume_symmetric_and_multilinear(a in plane_polytope(), b in plane_polytope(), c in plane_polytope()) {
        let v = |x: &LatticePolytope, y: &LatticePolytope| mixed_volume(&[x.clone(), y.clone()], &[1, 1]).unwrap();
        prop_assert_eq!(v(&a, &b), v(&b, &a));
        let ab = minkowski_sum(&a, &b).unwrap();
        prop_assert_eq!(v(&ab, &c), v(&a, &c) + v(&b, &c));
        prop_assert_eq!(mixed_volume(std::slice::from_ref(&a), &[2]).unwrap(), v(&a, &a));
    }

    #[test]
    fn galois_twist_of_character_sums(f in polynomial(1, 3, 5), p in prop::sample::select(vec![3u64, 5]), a in 1u64..5) {
        prop_assume!(a % p != 0);
        let field = make_field(p, 1).unwrap();
        let ctr = counter(2, 64);
        for m in 1..=2 {
            let s1 = ctr.char_sum(&f, &[], &Domain::Affine(1), &field, m, 1).unwrap().value;
            let sa = ctr.char_sum(&f, &[], &Domain::Affine(1), &field, m, a).unwrap().value;
            prop_assert_eq!(sa, s1.galois(a));
        }
    }

    #[test]
    fn zero_character_sum_counts_points(g in polynomial(2, 2, 3)) {
        let field = make_field(3, 1).unwrap();
        let ctr = counter(2, 16);
        let zero = LaurentPolynomial::zero(2);
        for m in 1..=2 {
            let s = ctr.char_sum(&zero, std::slice::from_ref(&g), &Domain::Affine(2), &field, m, 1).unwrap().value;
            let n = ctr.count_points(std::slice::from_ref(&g), &Domain::Affine(2), &field, m).unwrap().count;
            prop_assert_eq!(s, CyclotomicInteger::from_int(3, n));
        }
    }

    #[test]
    fn counts_ignore_chunking_and_workers(g in polynomial(2, 3, 2), chunk in 1u64..200, jobs in 1usize..6) {
        let field = make_field(2, 1).unwrap();
        let sys = std::slice::from_ref(&g);
        let base = counter(1, 1 << 12).counts(sys, &Domain::Affine(2), &field, 4).unwrap();
        let other = counter(jobs, chunk).counts(sys, &Domain::Affine(2), &field, 4).unwrap();
        prop_assert_eq!(base, other);
    }

    #[test]
    fn free_line_multiplies_counts(g in polynomial(1, 3, 3)) {
        // g(x1) viewed on A^2 is the product of its zero set with a line
        let field = make_field(3, 1).unwrap();
        let ctr = counter(2, 64);
        let lifted = g.with_nvars(2).unwrap();
        for m in 1..=2u32 {
            let base = ctr.count_points(std::slice::from_ref(&g), &Domain::Affine(1), &field, m).unwrap().count;
            let prod = ctr.count_points(std::slice::from_ref(&lifted), &Domain::Affine(2), &field, m).unwrap().count;
            prop_assert_eq!(prod, base * BigInt::from(3u64.pow(m)));
        }
    }

    #[test]
    fn cayley_identity_on_random_systems(f1 in polynomial(2, 2, 2), f2 in polynomial(2, 1, 2), two in any::<bool>()) {
        let field = make_field(2, 1).unwrap();
        let fs = if two { vec![f1, f2] } else { vec![f1] };
        let checks = verify_cayley(&fs, 2, &field, 2, &counter(2, 256)).unwrap();
        prop_assert!(checks.iter().all(|c| c.verdict == Verdict::Pass), "{:?}", checks);
    }
}

#[test]
fn zero_polynomial_counts_everything() {
    let field = make_field(3, 1).unwrap();
    let n = counter(1, 64).count_points(&[LaurentPolynomial::zero(2)], &Domain::Affine(2), &field, 2).unwrap();
    assert_eq!(n.count, BigInt::from(81));
}
