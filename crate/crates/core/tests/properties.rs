//! Property tests for the index-set and width machinery: invariants that
//! must hold for any admissible spectrum or weight vector, not just the
//! worked examples.

mod common;

use proptest::prelude::*;

use lipwidth::index_sets::{
    enumerate_rearrangement, sobolev_weight, td_index_set, td_size_bounds, MultiIndex,
};
use lipwidth::widths::stesin_width;

/// Strategy: a nonincreasing eigenvalue table in [0.05, 1].
fn descending_lambda(max_dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..=1.0, 1..=max_dim).prop_map(|mut v| {
        v.sort_by(|a, b| b.total_cmp(a));
        v
    })
}

fn sparse_index(max_dim: usize, max_degree: u32) -> impl Strategy<Value = MultiIndex> {
    prop::collection::vec(0..=max_degree, 1..=max_dim)
        .prop_map(|dense| MultiIndex::from_dense(&dense))
}

proptest! {
    /// Weights live in (0, 1] and shrink when any entry grows.
    #[test]
    fn weights_in_unit_interval_and_monotone(
        lambda in descending_lambda(5),
        gamma in sparse_index(5, 6),
        extra in 1usize..=5,
    ) {
        let dim = lambda.len();
        let s = common::explicit_spectrum(&lambda);
        let mut g = MultiIndex::from_dense(&gamma.to_dense(dim));
        let u = sobolev_weight(&g, &s).unwrap();
        prop_assert!(u > 0.0 && u <= 1.0);
        let coord = (extra - 1) % dim + 1;
        g = g.plus_unit(coord);
        let u_bigger = sobolev_weight(&g, &s).unwrap();
        prop_assert!(u_bigger < u);
    }

    /// Every enumerated prefix is downward closed: each listed index's
    /// one-unit-smaller neighbors appear earlier in the list.
    #[test]
    fn enumerated_prefixes_downward_closed(
        lambda in descending_lambda(4),
        k in 1usize..=120,
    ) {
        let s = common::explicit_spectrum(&lambda);
        let list = enumerate_rearrangement(&s, k).unwrap();
        let mut seen = std::collections::HashSet::new();
        for item in &list.items {
            for &(j, _) in item.index.pairs() {
                let parent = item.index.minus_unit(j).unwrap();
                prop_assert!(seen.contains(&parent));
            }
            seen.insert(item.index.clone());
        }
    }

    /// Enumeration agrees with the exhaustive box oracle on cost and
    /// weight sequences.
    #[test]
    fn enumeration_matches_box_oracle(
        raw in prop::collection::vec(0.25f64..=1.0, 1..=3),
        k in 1usize..=60,
    ) {
        let mut lambda = raw;
        lambda.sort_by(|a, b| b.total_cmp(a));
        let s = common::explicit_spectrum(&lambda);
        let list = enumerate_rearrangement(&s, k).unwrap();
        // Bound chosen so the oracle box always covers the head.
        let bound = match lambda.len() {
            1 => 70,
            2 => 60,
            _ => 30,
        };
        let oracle = common::box_rearrangement_oracle(&lambda, bound, k);
        prop_assert_eq!(list.items.len(), oracle.len());
        let mut got: Vec<f64> = list.items.iter().map(|it| it.cost).collect();
        let mut expect: Vec<f64> = oracle.iter().map(|it| it.cost).collect();
        got.sort_by(|a, b| a.total_cmp(b));
        expect.sort_by(|a, b| a.total_cmp(b));
        for (g, e) in got.iter().zip(expect.iter()) {
            prop_assert!((g - e).abs() <= 1e-12 * e.max(1.0));
        }
        for (item, orc) in list.items.iter().zip(oracle.iter()) {
            prop_assert!((item.weight - orc.weight).abs() <= 1e-12);
        }
    }

    /// Eq-style size sandwich for anisotropic TD sets.
    #[test]
    fn td_size_sandwich(
        raw in prop::collection::vec(0.05f64..=2.0, 1..=6),
    ) {
        let mut a = raw;
        a.sort_by(|x, y| x.total_cmp(y));
        let (lower, upper) = td_size_bounds(&a).unwrap();
        let set = td_index_set(&a).unwrap();
        let size = set.len() as f64;
        prop_assert!(lower <= size + 1e-9, "lower {lower} vs size {size}");
        prop_assert!(size <= upper + 1e-9, "size {size} vs upper {upper}");
    }

    /// The closed-form Kolmogorov width equals the tail-sum expression for
    /// q = 2 < p.
    #[test]
    fn stesin_tail_sum_identity(
        w in prop::collection::vec(0.01f64..=3.0, 1..=12),
        p_frac in 0.0f64..1.0,
        m_frac in 0.0f64..1.0,
    ) {
        // Bounded away from 2: the exponent 2p/(p-2) otherwise overflows
        // the powers before both routes can agree.
        let p = 2.2 + p_frac * 5.8; // (2, 8)
        let m = ((w.len() as f64 - 1.0) * m_frac) as usize;
        let got = stesin_width(&w, p, 2.0, m).unwrap();
        // Independent route: nonincreasing sort, drop the m largest, sum
        // the rest to the explicit exponent.
        let e = 2.0 * p / (p - 2.0);
        let mut sorted = w.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let tail: f64 = sorted[m..].iter().map(|&x| x.powf(e)).sum();
        let expect = tail.powf((p - 2.0) / (2.0 * p));
        prop_assert!(
            (got - expect).abs() <= 1e-12 * expect,
            "{got} vs {expect}"
        );
    }

    /// Effective dimension shrinks as the threshold loosens.
    #[test]
    fn effective_dimension_monotone(
        lambda in descending_lambda(6),
        eps_lo in 0.05f64..0.5,
        eps_hi in 0.5f64..2.0,
    ) {
        use lipwidth::spectrum::EffectiveDimension::*;
        let s = common::explicit_spectrum(&lambda);
        let d_lo = s.effective_dimension(eps_lo);
        let d_hi = s.effective_dimension(eps_hi);
        let rank = |d| match d {
            Finite(v) => v,
            AtLeast(v) => v + 1,
            Infinite => usize::MAX,
        };
        prop_assert!(rank(d_lo) >= rank(d_hi));
    }
}
