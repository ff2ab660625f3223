use eigencm::homology::{
    cm_by_definition, cm_by_garst, cm_by_intervals, order_complex, poset_homology, rational_bettis, reduced_homology_with,
    reduced_euler_from_faces, CmRing, Pipeline,
};
use eigencm::posets::{boolean_lattice, Poset};
use proptest::prelude::*;

/// Random poset on up to 9 elements from a random DAG.
fn random_poset() -> impl Strategy<Value = Poset<usize>> {
    (1usize..10).prop_flat_map(|n| {
        prop::collection::vec(prop::bool::weighted(0.35), n * n).prop_map(move |bits| {
            let edges: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| bits[i * n + j]).collect();
            Poset::from_covers((0..n).collect(), &edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn snf_agrees_with_rational_ranks(p in random_poset()) {
        let c = order_complex(&p).unwrap();
        let h = reduced_homology_with(&c, Pipeline::Direct).unwrap();
        prop_assert_eq!(h.bettis(), rational_bettis(&c));
        prop_assert_eq!(h.euler_characteristic(), reduced_euler_from_faces(&h.f_vector));
    }

    #[test]
    fn reduction_preserves_homology(p in random_poset()) {
        let c = order_complex(&p).unwrap();
        prop_assert_eq!(
            reduced_homology_with(&c, Pipeline::Direct).unwrap(),
            reduced_homology_with(&c, Pipeline::Reduced).unwrap()
        );
    }

    #[test]
    fn cm_strategies_agree(p in random_poset()) {
        let d = cm_by_definition(&p, CmRing::Integers, 100_000).unwrap();
        prop_assert_eq!(cm_by_garst(&p, CmRing::Integers).unwrap().is_cm, d.is_cm);
        prop_assert_eq!(cm_by_intervals(&p, CmRing::Integers).unwrap().is_cm, d.is_cm);
    }
}

#[test]
fn proper_part_of_boolean_lattice_is_a_sphere() {
    let b = boolean_lattice(4);
    let proper: Vec<usize> = (0..b.len()).filter(|&i| Some(i) != b.unique_min() && Some(i) != b.unique_max()).collect();
    let h = poset_homology(&b.induced(&proper)).unwrap();
    assert!(h.concentrated_in(2));
    assert_eq!(h.betti(2), 1);
}
