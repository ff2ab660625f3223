use std::collections::HashSet;

use crate::groups::{reflections, GroupTable};
use crate::linalg::{fixed_space, Subspace};
use crate::par;
use crate::posets::Poset;

use super::{reverse_inclusion_poset, EigenError};

/// Distinct reflecting hyperplanes, canonically sorted.
pub fn hyperplanes(table: &GroupTable) -> Vec<Subspace> {
    let refl = reflections(table);
    let mut hs: Vec<Subspace> = par::map(&refl, |&r| fixed_space(&table.matrix(r)));
    hs.sort();
    hs.dedup();
    hs
}

/// `L(A(G))`: all intersections of reflecting hyperplanes, by reverse inclusion.
///
/// Built one codimension at a time by intersecting with every hyperplane,
/// using exact arithmetic only.
pub fn intersection_lattice(table: &GroupTable) -> Result<Poset<Subspace>, EigenError> {
    let hs = hyperplanes(table);
    let mut all: HashSet<Subspace> = HashSet::new();
    let full = Subspace::full(table.rank());
    all.insert(full.clone());
    let mut layer = vec![full];
    while !layer.is_empty() {
        let next: Vec<Vec<Subspace>> = par::map(&layer, |x| {
            hs.iter()
                .filter(|h| !h.contains(x).expect("same ambient"))
                .map(|h| x.intersect(h).expect("same ambient"))
                .collect()
        });
        let mut fresh = Vec::new();
        for y in next.into_iter().flatten() {
            if all.insert(y.clone()) {
                fresh.push(y);
            }
        }
        layer = fresh;
    }
    reverse_inclusion_poset(all.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupSpec;

    fn lattice(spec: GroupSpec) -> Poset<Subspace> {
        intersection_lattice(&GroupTable::enumerate(&spec).unwrap()).unwrap()
    }

    #[test]
    fn small_lattices() {
        let a1 = lattice(GroupSpec::monomial(2, 1, 1));
        assert_eq!(a1.len(), 2);
        let b2 = lattice(GroupSpec::monomial(2, 1, 2));
        assert_eq!(b2.len(), 6);
        assert_eq!(b2.items().iter().filter(|s| s.dim() == 1).count(), 4);
        let s3 = lattice(GroupSpec::monomial(1, 1, 3));
        assert_eq!(s3.len(), 5);
        assert!(s3.lattice_report().geometric);
        // partition lattice of a 4-set
        let s4 = lattice(GroupSpec::monomial(1, 1, 4));
        assert_eq!(s4.len(), 15);
        assert!(s4.lattice_report().geometric);
    }
}
