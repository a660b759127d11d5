use lowdim::metric_cover::{cover_report, covering_number, packing_number, restrict, Ball, IntervalUnion};
use proptest::prelude::*;

/// Largest subset whose consecutive points are at least `sep` apart, by a
/// longest-chain recursion over candidate points. A maximal chain can be
/// slid left until each point is a component start or sits exactly `sep`
/// after its predecessor, so the points `a_i + j·sep` of the set suffice. The
/// rounding of the candidate arithmetic is forgiven.
fn max_separated(ivs: &[(f64, f64)], sep: f64) -> usize {
    let end = ivs.last().map_or(0.0, |iv| iv.1);
    let mut cands = Vec::new();
    for &(a, _) in ivs {
        let mut p = a;
        while p <= end {
            if ivs.iter().any(|&(l, r)| l <= p && p <= r) {
                cands.push(p);
            }
            p += sep;
        }
    }
    cands.sort_by(f64::total_cmp);
    let n = cands.len();
    let mut chain = vec![1usize; n];
    for i in (0..n).rev() {
        for j in i + 1..n {
            if cands[j] - cands[i] >= sep - 1e-13 {
                chain[i] = chain[i].max(1 + chain[j]);
            }
        }
    }
    chain.into_iter().max().unwrap_or(0)
}

/// An open ball of radius `r` holds at most one point of a `2r`-separated
/// set, and on the line that bound is attained.
fn oracle_cover(ivs: &[(f64, f64)], r: f64) -> usize {
    max_separated(ivs, 2.0 * r)
}

fn oracle_packing(ivs: &[(f64, f64)], r: f64) -> usize {
    max_separated(ivs, r)
}

fn union_strategy(max_parts: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec(0.0f64..1.0, 2..=2 * max_parts).prop_map(|mut cuts| {
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        cuts.chunks_exact(2)
            .map(|c| (c[0], c[1]))
            .filter(|c| c.1 > c.0)
            .collect()
    })
}

#[test]
fn cantor_pair_counts() {
    let set = IntervalUnion::new(vec![(0.0, 1.0 / 3.0), (2.0 / 3.0, 1.0)]).unwrap();
    let rep = cover_report(&set, None, 1.0 / 3.0);
    assert_eq!((rep.n_cover, rep.m_pack, rep.m_pack_4r), (2, 4, 1));
    assert!(rep.sandwich_ok());
    let empty = cover_report(&IntervalUnion::empty(), None, 0.1);
    assert_eq!((empty.n_cover, empty.m_pack, empty.m_pack_4r), (0, 0, 0));
}

#[test]
fn oracle_matches_on_fixed_unions() {
    let cases: Vec<(Vec<(f64, f64)>, f64)> = vec![
        (vec![(0.0, 1.0)], 0.3),
        (vec![(0.0, 0.1), (0.15, 0.2), (0.5, 0.55)], 0.07),
        (vec![(0.05, 0.05), (0.31, 0.4), (0.41, 0.42), (0.9, 0.97)], 0.11),
    ];
    for (ivs, r) in cases {
        let set = IntervalUnion::new(ivs.clone()).unwrap();
        assert_eq!(covering_number(&set, r), oracle_cover(&ivs, r), "{ivs:?}");
        assert_eq!(packing_number(&set, r), oracle_packing(&ivs, r), "{ivs:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn greedy_counts_are_optimal(ivs in union_strategy(8), r in 0.01f64..0.5) {
        let set = IntervalUnion::new(ivs.clone()).unwrap();
        prop_assert_eq!(covering_number(&set, r), oracle_cover(&ivs, r));
        prop_assert_eq!(packing_number(&set, r), oracle_packing(&ivs, r));
    }

    #[test]
    fn sandwich_is_exact(ivs in union_strategy(30), r in 1e-6f64..1.0, c in 0.0f64..1.0, big in 1e-4f64..1.0) {
        let set = IntervalUnion::new(ivs).unwrap();
        prop_assert!(cover_report(&set, None, r).sandwich_ok());
        prop_assert!(cover_report(&set, Some(Ball::new(c, big).unwrap()), r).sandwich_ok());
    }

    #[test]
    fn counts_are_monotone(ivs in union_strategy(20), r in 1e-4f64..0.5, f in 1.0f64..4.0) {
        let set = IntervalUnion::new(ivs).unwrap();
        prop_assert!(covering_number(&set, r * f) <= covering_number(&set, r));
        prop_assert!(packing_number(&set, r * f) <= packing_number(&set, r));
    }

    #[test]
    fn restriction_is_idempotent_and_shrinks(ivs in union_strategy(20), c in -0.2f64..1.2, big in 1e-3f64..1.0, r in 1e-3f64..0.5) {
        let set = IntervalUnion::new(ivs).unwrap();
        let ball = Ball::new(c, big).unwrap();
        let once = restrict(&set, &ball);
        prop_assert_eq!(&restrict(&once, &ball), &once);
        prop_assert!(covering_number(&once, r) <= covering_number(&set, r));
        for &(a, b) in once.intervals() {
            prop_assert!(set.contains(a) && set.contains(b));
            prop_assert!((a - c).abs() < big && (b - c).abs() < big);
        }
    }
}
