use bmcarpet::carpet::{Cardinality, DigitSet};
use bmcarpet::connectivity::{count_classes, count_components, Domain, Reach};
use bmcarpet::gaps::{component_forest, gap_from_h, h_bracket, Rational};
use bmcarpet::grid::Caps;
use bmcarpet::theory::comparability_verdict;
use proptest::prelude::*;

fn digit_set() -> impl Strategy<Value = DigitSet> {
    (2u32..=5)
        .prop_flat_map(|n| (Just(n), 2u32..=n.min(4)))
        .prop_flat_map(|(n, m)| (Just(n), Just(m), proptest::collection::vec(any::<bool>(), (n * m) as usize)))
        .prop_filter_map("need two digits", |(n, m, mask)| {
            let digits: Vec<_> = (0..n * m).filter(|&c| mask[c as usize]).map(|c| (c % n, c / n)).collect();
            (digits.len() >= 2).then(|| DigitSet::new(n, m, digits).unwrap())
        })
}

fn components(ds: &DigitSet, k: u32) -> u64 {
    count_components(ds, k, Domain::Plain, &Caps::default()).unwrap().component_count
}

fn delta() -> impl Strategy<Value = Rational> {
    (1i64..=40, 1i64..=400).prop_map(|(p, q)| Rational::new(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip(ds in digit_set()) {
        prop_assert_eq!(DigitSet::from_json(&ds.to_json()).unwrap(), ds);
    }

    #[test]
    fn counts_invariant_under_symmetries(ds in digit_set(), k in 1u32..=3) {
        let mirror: Vec<u32> = (0..ds.n()).rev().collect();
        let c = components(&ds, k);
        prop_assert_eq!(components(&ds.rotated(), k), c);
        prop_assert_eq!(components(&ds.with_columns_permuted(&mirror), k), c);
    }

    #[test]
    fn counts_grow_with_level(ds in digit_set(), k in 1u32..=3) {
        prop_assert!(components(&ds, k + 1) >= components(&ds, k));
    }

    #[test]
    fn brackets_monotone_in_delta(ds in digit_set(), a in delta(), b in delta(), level in 1u32..=3) {
        let (small, large) = if a <= b { (a, b) } else { (b, a) };
        let caps = Caps::default();
        let hs = h_bracket(&ds, level, &small, &caps).unwrap();
        let hl = h_bracket(&ds, level, &large, &caps).unwrap();
        prop_assert!(hs.h_low <= hs.h_high && hl.h_low <= hl.h_high);
        prop_assert!(hl.h_low <= hs.h_low);
        prop_assert!(hl.h_high <= hs.h_high);
    }

    #[test]
    fn reach_is_monotone(ds in digit_set(), dx in 1u64..6, dy in 1u64..6, k in 1u32..=3) {
        let caps = Caps::default();
        let base = count_classes(&ds, k, Reach { dx, dy }, &caps).unwrap();
        let wider = count_classes(&ds, k, Reach { dx: dx + 1, dy }, &caps).unwrap();
        let taller = count_classes(&ds, k, Reach { dx, dy: dy + 1 }, &caps).unwrap();
        prop_assert!(wider <= base && taller <= base);
    }

    #[test]
    fn gaps_round_trip(ds in digit_set(), k in 1u32..=3) {
        let g = component_forest(&ds, k, &Caps::default()).unwrap().gap_sequence();
        prop_assert!(g.is_well_formed());
        prop_assert_eq!(gap_from_h(&g.step_function()).unwrap().entries, g.entries);
    }

    #[test]
    fn threshold_matches_mst(ds in digit_set(), k in 1u32..=3, deltas in proptest::collection::vec(delta(), 20)) {
        let forest = component_forest(&ds, k, &Caps::default()).unwrap();
        let c = forest.components.len();
        let weights = forest.mst_weights();
        for d in &deltas {
            let mut parent: Vec<usize> = (0..c).collect();
            fn root(p: &mut [usize], mut i: usize) -> usize {
                while p[i] != i { i = p[i]; }
                i
            }
            let mut classes = c;
            for a in 0..c {
                for b in a + 1..c {
                    if &forest.distance(a, b) <= d {
                        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                        if ra != rb { parent[ra] = rb; classes -= 1; }
                    }
                }
            }
            let joined = weights.iter().filter(|w| *w <= d).count();
            prop_assert_eq!(classes, c - joined);
        }
    }

    #[test]
    fn euclidean_within_sqrt2(ds in digit_set(), k in 1u32..=2) {
        let forest = component_forest(&ds, k, &Caps::default()).unwrap();
        let mut cheb: Vec<f64> = forest.mst_weights().iter().map(Rational::to_f64).collect();
        cheb.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let euclid = forest.euclidean_mst_weights();
        prop_assert_eq!(cheb.len(), euclid.len());
        for (c, e) in cheb.iter().zip(&euclid) {
            prop_assert!(*c <= e + 1e-12 && *e <= c * std::f64::consts::SQRT_2 + 1e-12);
        }
    }

    #[test]
    fn verdict_is_symmetric(a in digit_set(), b in digit_set()) {
        let cards = [Cardinality::Infinite, Cardinality::Finite(1), Cardinality::Unknown];
        for &ca in &cards {
            for &cb in &cards {
                let ab = comparability_verdict(&a, &b, ca, cb);
                let ba = comparability_verdict(&b, &a, cb, ca);
                prop_assert_eq!(ab.verdict, ba.verdict);
                prop_assert_eq!(ab.near_tie, ba.near_tie);
                prop_assert_eq!(ab.exact_witness.is_some(), ba.exact_witness.is_some());
                if ab.exact_witness.is_some() {
                    prop_assert!(!ab.near_tie);
                }
            }
        }
    }
}
