use eigencm::groups::{self, GroupSpec, GroupTable};

fn degrees(name: &str) -> (usize, groups::Degrees) {
    let t = GroupTable::enumerate(&GroupSpec::named(name).unwrap()).unwrap();
    let d = groups::molien_degrees(&t).unwrap();
    (t.order(), d)
}

#[test]
fn e6_order_degrees_and_reflections() {
    let (order, d) = degrees("E6");
    assert_eq!(order, 51840);
    assert_eq!(d.degrees, vec![2, 5, 6, 8, 9, 12]);
    assert_eq!(d.reflections, 36);
    assert_eq!(d.product(), 51840);
}

#[test]
fn k5_is_g33() {
    let (order, d) = degrees("K5");
    assert_eq!(order, 51840);
    assert_eq!(d.degrees, vec![4, 6, 10, 12, 18]);
    assert_eq!(d.reflections, 45);
}

#[test]
fn shipped_groups_satisfy_degree_identities() {
    for name in ["A1", "A4", "B4", "D4", "F4", "G2", "H3", "H4", "I2(8)", "G(3,1,3)", "G(4,2,3)", "G(3,3,4)"] {
        let (order, d) = degrees(name);
        assert_eq!(d.product(), order as u128, "{name}");
        assert_eq!(d.codegree_sum(), d.reflections as u64, "{name}");
    }
}

#[test]
fn shuffled_generators_give_the_same_group() {
    let spec = GroupSpec::named("B3").unwrap();
    let mut gens = spec.generators();
    gens.reverse();
    let shuffled = GroupSpec::explicit(3, gens, None);
    let a = GroupTable::enumerate(&spec).unwrap();
    let b = GroupTable::enumerate(&shuffled).unwrap();
    let sa: std::collections::HashSet<_> = (0..a.order()).map(|i| a.matrix(i)).collect();
    let sb: std::collections::HashSet<_> = (0..b.order()).map(|i| b.matrix(i)).collect();
    assert_eq!(sa, sb);
}
