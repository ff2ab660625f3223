use eigencm::eigenposet::{build_eigen_poset, intersection_lattice, reduce_poset};
use eigencm::groups::{a_zeta, molien_degrees, GroupSpec, GroupTable, RootSpec};
use eigencm::homology::{is_cohen_macaulay, poset_homology};

fn table(name: &str) -> GroupTable {
    GroupTable::enumerate(&GroupSpec::named(name).unwrap()).unwrap()
}

#[test]
fn identity_eigenspaces_form_the_intersection_lattice() {
    let t = table("A3");
    let ep = build_eigen_poset(&t, RootSpec::new(0, 1)).unwrap();
    let lattice = intersection_lattice(&t).unwrap();
    assert!(ep.same_subspaces(lattice.items()));
    // Set partitions of four points.
    assert_eq!(ep.len(), 15);
}

#[test]
fn maximal_eigenspaces_have_dimension_a_zeta() {
    for (name, zeta) in [("B3", RootSpec::new(1, 2)), ("G(3,1,2)", RootSpec::new(1, 3)), ("H3", RootSpec::new(1, 5))] {
        let t = table(name);
        let d = molien_degrees(&t).unwrap();
        let ep = build_eigen_poset(&t, zeta).unwrap();
        let a = a_zeta(t.spec(), &d.degrees, zeta).unwrap();
        for m in ep.maximal_eigenspaces() {
            assert_eq!(ep.subspace(m).dim(), a, "{name} ζ={zeta}");
        }
    }
}

#[test]
fn eigenspace_posets_are_cohen_macaulay() {
    let t = table("D4");
    for z in RootSpec::all_dividing(6) {
        let ep = build_eigen_poset(&t, z).unwrap();
        assert!(is_cohen_macaulay(ep.poset()).unwrap().is_cm, "ζ={z}");
    }
}

#[test]
fn reduced_poset_of_g312_at_omega_is_four_points() {
    let ep = build_eigen_poset(&table("G(3,1,2)"), RootSpec::new(1, 3)).unwrap();
    let h = poset_homology(&reduce_poset(ep.poset())).unwrap();
    assert_eq!(h.f_vector, vec![5]);
    assert_eq!(h.betti(0), 4);
}
