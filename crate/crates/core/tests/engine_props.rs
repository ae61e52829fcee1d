use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use iecount::engine::{
    upgrade_a, upgrade_a_weighted, upgrade_b_scan, upgrade_b_scan_with, ScanOptions, SignConvention,
};
use iecount::exclusion::{ab_algorithm, n_algorithm, ClashGraph, GeneratorSet};
use iecount::facecount::{union_face_numbers, union_parity_weight, WeightVector};
use iecount::rows::Face;

fn generator_sets() -> impl Strategy<Value = GeneratorSet> {
    (1..=10usize).prop_flat_map(|h| {
        let face = proptest::collection::btree_set(1..=h, 1..=h.min(4));
        proptest::collection::vec(face, 0..=6).prop_map(move |gs| {
            GeneratorSet::new(h, gs.into_iter().map(|s| Face::new(h, s).unwrap()).collect()).unwrap()
        })
    })
}

fn poly(coeffs: &[u32], x: u64) -> BigUint {
    coeffs.iter().rev().fold(BigUint::from(0u8), |acc, &c| acc * x + c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn size_invariant_terms(g in generator_sets(), coeffs in proptest::collection::vec(0u32..50, 1..4)) {
        let u = n_algorithm(&g);
        let gk = |k: usize| poly(&coeffs, k as u64);
        let by_face = |f: &Face| gk(f.len());
        let a = upgrade_a(&union_face_numbers(&u), gk);
        prop_assert_eq!(&a, &upgrade_b_scan(&u, &by_face, SignConvention::Primal).unwrap());
        let dual = upgrade_b_scan(&u, &by_face, SignConvention::Dual).unwrap();
        prop_assert_eq!(dual, BigInt::from(gk(0)) - a);
    }

    #[test]
    fn weight_invariant_terms(
        g in generator_sets(),
        w in proptest::collection::vec(0u64..12, 10),
        coeffs in proptest::collection::vec(0u32..20, 1..4),
    ) {
        let u = n_algorithm(&g);
        let w = &w[..g.h()];
        let gv = |v: &BigUint| poly(&coeffs, u64::try_from(v).unwrap());
        let by_face = |f: &Face| gv(&BigUint::from(f.elements().iter().map(|&e| w[e - 1]).sum::<u64>()));
        let t = union_parity_weight(&u, &WeightVector::from_u64(w)).unwrap();
        prop_assert_eq!(t.total(), u.cardinality());
        prop_assert_eq!(upgrade_a_weighted(&t, gv), upgrade_b_scan(&u, &by_face, SignConvention::Primal).unwrap());
    }

    #[test]
    fn anticlique_rows_under_both_upgrades(
        edges in proptest::collection::vec((1usize..=9, 1usize..=9), 0..14),
        w in proptest::collection::vec(1u64..6, 9),
    ) {
        let mut graph = ClashGraph::edgeless(9);
        for (a, b) in edges.into_iter().filter(|(a, b)| a != b) {
            graph.add_edge(a, b).unwrap();
        }
        let u = ab_algorithm(&graph);
        let gk = |k: usize| BigUint::from(3u8).pow(9 - k as u32);
        let by_size = |f: &Face| gk(f.len());
        prop_assert_eq!(upgrade_a(&union_face_numbers(&u), gk), upgrade_b_scan(&u, &by_size, SignConvention::Primal).unwrap());

        let gv = |v: &BigUint| v * v + 7u8;
        let by_weight = |f: &Face| gv(&BigUint::from(f.elements().iter().map(|&e| w[e - 1]).sum::<u64>()));
        let t = union_parity_weight(&u, &WeightVector::from_u64(&w)).unwrap();
        prop_assert_eq!(upgrade_a_weighted(&t, gv), upgrade_b_scan(&u, &by_weight, SignConvention::Primal).unwrap());
    }

    #[test]
    fn threads_do_not_change_the_sum(g in generator_sets(), threads in 2usize..5) {
        let u = n_algorithm(&g);
        let n = |f: &Face| BigUint::from(f.elements().iter().map(|e| e * e).sum::<usize>() + 1);
        let seq = upgrade_b_scan(&u, &n, SignConvention::Dual).unwrap();
        let par = upgrade_b_scan_with(&u, &n, SignConvention::Dual, ScanOptions { threads }).unwrap();
        prop_assert_eq!(seq, par);
    }
}
