use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::Poset;

/// Exhaustively checked lattice-theoretic properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LatticeReport {
    pub connected: bool,
    pub join_semilattice: bool,
    pub meet_semilattice: bool,
    pub lattice: bool,
    pub ranked: bool,
    pub atomic: bool,
    pub semimodular: bool,
    pub geometric: bool,
}

impl<T: Sync> Poset<T> {
    /// The least element of a set, if any.
    fn least_of(&self, set: &FixedBitSet) -> Option<usize> {
        let count = set.count_ones(..);
        set.ones().find(|&x| {
            let mut above = self.up_set(x).clone();
            above.intersect_with(set);
            above.count_ones(..) == count
        })
    }

    fn greatest_of(&self, set: &FixedBitSet) -> Option<usize> {
        let count = set.count_ones(..);
        set.ones().find(|&x| {
            let mut below = self.down_set(x).clone();
            below.intersect_with(set);
            below.count_ones(..) == count
        })
    }

    /// Least upper bound of a set of elements; the empty set joins to `0̂`.
    pub fn join_of(&self, xs: &[usize]) -> Option<usize> {
        let mut common = FixedBitSet::with_capacity(self.len());
        common.insert_range(..);
        for &x in xs {
            common.intersect_with(self.up_set(x));
        }
        self.least_of(&common)
    }

    pub fn meet_of(&self, xs: &[usize]) -> Option<usize> {
        let mut common = FixedBitSet::with_capacity(self.len());
        common.insert_range(..);
        for &x in xs {
            common.intersect_with(self.down_set(x));
        }
        self.greatest_of(&common)
    }

    pub fn join_elem(&self, x: usize, y: usize) -> Option<usize> {
        self.join_of(&[x, y])
    }

    pub fn meet_elem(&self, x: usize, y: usize) -> Option<usize> {
        self.meet_of(&[x, y])
    }

    pub fn is_join_semilattice(&self) -> bool {
        all_pairs(self.len(), |x, y| self.join_elem(x, y).is_some())
    }

    pub fn is_meet_semilattice(&self) -> bool {
        all_pairs(self.len(), |x, y| self.meet_elem(x, y).is_some())
    }

    /// Elements covering the minimum; empty if there is no minimum.
    pub fn atoms(&self) -> Vec<usize> {
        self.unique_min().map(|m| self.covers(m).to_vec()).unwrap_or_default()
    }

    pub fn lattice_report(&self) -> LatticeReport {
        let n = self.len();
        let connected = self.is_connected();
        let join_semilattice = n > 0 && self.is_join_semilattice();
        let meet_semilattice = n > 0 && self.is_meet_semilattice();
        let lattice = join_semilattice && meet_semilattice;
        let info = self.rank_info();
        let ranked = n > 0 && info.is_ranked;
        let atomic = lattice && {
            let atoms = self.atoms();
            (0..n).all(|x| {
                let below: Vec<usize> = atoms.iter().copied().filter(|&a| self.leq(a, x)).collect();
                self.join_of(&below) == Some(x)
            })
        };
        let semimodular = lattice
            && ranked
            && all_pairs(n, |x, y| {
                let j = self.join_elem(x, y).unwrap();
                let m = self.meet_elem(x, y).unwrap();
                info.rank[j] + info.rank[m] <= info.rank[x] + info.rank[y]
            });
        LatticeReport {
            connected,
            join_semilattice,
            meet_semilattice,
            lattice,
            ranked,
            atomic,
            semimodular,
            geometric: lattice && ranked && atomic && semimodular,
        }
    }
}

fn all_pairs(n: usize, f: impl Fn(usize, usize) -> bool + Sync) -> bool {
    crate::par::all_range(n, |x| (x + 1..n).all(|y| f(x, y)))
}

#[cfg(test)]
mod tests {
    use super::super::*;

    #[test]
    fn partition_lattice_is_geometric() {
        let r = partition_lattice(4).lattice_report();
        assert!(r.geometric && r.lattice && r.ranked);
    }

    #[test]
    fn divisors_are_modular_but_not_atomic() {
        let r = divisor_lattice(12).lattice_report();
        assert!(r.lattice && r.semimodular && r.ranked);
        assert!(!r.atomic);
        assert!(!r.geometric);
    }

    #[test]
    fn boolean_and_non_lattices() {
        assert!(boolean_lattice(3).lattice_report().geometric);
        let two = antichain(2).lattice_report();
        assert!(!two.connected && !two.join_semilattice && !two.lattice);
        // bowtie: two minima below two maxima
        let bowtie = Poset::from_covers(vec![0, 1, 2, 3], &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let r = bowtie.lattice_report();
        assert!(r.connected && r.ranked && !r.join_semilattice);
        // pentagon: lattice, not ranked
        let n5 = Poset::from_covers(vec![0, 1, 2, 3, 4], &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap();
        let r = n5.lattice_report();
        assert!(r.lattice && !r.ranked && !r.geometric);
    }

    #[test]
    fn joins_of_elements() {
        let b = boolean_lattice(3);
        assert_eq!(b.join_elem(1, 2), Some(3));
        assert_eq!(b.meet_elem(3, 6), Some(2));
        assert_eq!(b.join_of(&[]), Some(0));
        assert_eq!(b.atoms(), vec![1, 2, 4]);
    }
}
