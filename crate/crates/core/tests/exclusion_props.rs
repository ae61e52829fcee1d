use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;

use iecount::exclusion::{
    ab_algorithm, anticliques_via_edges, n_algorithm, relevant_count, transversal_count, ClashGraph, GeneratorSet,
};
use iecount::facecount::union_face_numbers;
use iecount::oracles::{brute_set_ideal, OracleBudget};
use iecount::rows::{check_disjoint, check_disjoint_brute, ABRow, Face, NRow, Row, RowUnion};

fn generator_sets(max_h: usize, max_m: usize) -> impl Strategy<Value = GeneratorSet> {
    (1..=max_h).prop_flat_map(move |h| {
        let face = proptest::collection::btree_set(1..=h, 1..=h.min(5));
        proptest::collection::vec(face, 0..=max_m).prop_map(move |gs| {
            let faces = gs.into_iter().map(|s| Face::new(h, s).unwrap()).collect();
            GeneratorSet::new(h, faces).unwrap()
        })
    })
}

fn graphs(max_h: usize) -> impl Strategy<Value = ClashGraph> {
    (1..=max_h).prop_flat_map(|h| {
        proptest::collection::vec((1..=h, 1..=h), 0..=2 * h).prop_map(move |es| {
            let mut g = ClashGraph::edgeless(h);
            for (u, v) in es {
                if u != v {
                    g.add_edge(u, v).unwrap();
                }
            }
            g
        })
    })
}

fn members<R: Row>(u: &RowUnion<R>) -> Vec<Face> {
    let mut m: Vec<Face> = u.members().collect();
    m.sort();
    m
}

fn histogram(h: usize, faces: &[Face]) -> Vec<BigUint> {
    let mut hist = vec![BigUint::from(0u8); h + 1];
    for f in faces {
        hist[f.len()] += 1u8;
    }
    hist
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn n_algorithm_matches_brute_force(g in generator_sets(14, 8)) {
        let u = n_algorithm(&g);
        prop_assert!(check_disjoint(&u));
        let mut expect = brute_set_ideal(&g, &OracleBudget::default()).unwrap();
        expect.sort();
        let got = members(&u);
        prop_assert_eq!(&got, &expect);
        prop_assert_eq!(union_face_numbers(&u).as_slice().to_vec(), histogram(g.h(), &expect));
        prop_assert_eq!(relevant_count(&g), BigUint::from(expect.len()));
        prop_assert_eq!(transversal_count(&g), BigUint::from(expect.len()));
    }

    #[test]
    fn n_algorithm_rows_are_disjoint_exhaustively(g in generator_sets(10, 6)) {
        prop_assert!(check_disjoint_brute(&n_algorithm(&g)).unwrap());
    }

    #[test]
    fn minimal_generators_cut_out_the_same_complex(g in generator_sets(9, 8)) {
        let m = GeneratorSet::new(g.h(), g.minimal()).unwrap();
        let gm: BTreeSet<Face> = m.generators().iter().cloned().collect();
        for a in &gm {
            for b in &gm {
                prop_assert!(a == b || !a.is_subset(b));
            }
        }
        prop_assert_eq!(members(&n_algorithm(&m)), members(&n_algorithm(&g)));
    }

    #[test]
    fn anticlique_rows_match_brute_force(g in graphs(12)) {
        let h = g.vertex_count();
        let expect: Vec<Face> = {
            let mut v: Vec<Face> = (0u64..1 << h)
                .map(|m| Face::from_mask(h, m))
                .filter(|u| g.is_anticlique(u))
                .collect();
            v.sort();
            v
        };
        let ab = ab_algorithm(&g);
        prop_assert!(check_disjoint(&ab));
        prop_assert_eq!(&members(&ab), &expect);
        prop_assert_eq!(union_face_numbers(&ab).as_slice().to_vec(), histogram(h, &expect));
        prop_assert_eq!(&members(&anticliques_via_edges(&g)), &expect);
    }

    #[test]
    fn rows_round_trip_through_text(g in generator_sets(8, 5), e in graphs(8)) {
        for r in n_algorithm(&g).rows() {
            let back: NRow = r.to_string().parse().unwrap();
            prop_assert_eq!(&back, r);
        }
        for r in ab_algorithm(&e).rows() {
            let back: ABRow = r.to_string().parse().unwrap();
            prop_assert_eq!(back.to_string(), r.to_string());
            prop_assert_eq!(back.cardinality(), r.cardinality());
        }
    }
}
