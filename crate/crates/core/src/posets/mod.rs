//! Finite posets with opaque payloads, stored as up/down closure bitsets plus
//! the covering relation.

mod hasse;
mod lattice;

pub use hasse::{read_hasse, write_hasse};
pub use lattice::LatticeReport;

use fixedbitset::FixedBitSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PosetError {
    #[error("relation is not reflexive at element {0}")]
    NotReflexive(usize),
    #[error("relation is not antisymmetric: {0} and {1}")]
    NotAntisymmetric(usize, usize),
    #[error("relation is not transitive: {0} <= {1} <= {2}")]
    NotTransitive(usize, usize, usize),
    #[error("element {0} is not below element {1}")]
    NotComparable(usize, usize),
    #[error("the given elements do not form a chain")]
    NotAChain,
    #[error("index {0} out of range")]
    OutOfRange(usize),
    #[error("malformed Hasse file: {0}")]
    Malformed(String),
    #[error("cover relation contains a cycle")]
    Cyclic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankInfo {
    pub is_ranked: bool,
    /// Length of the longest chain ending at each element.
    pub rank: Vec<usize>,
}

#[derive(Clone)]
pub struct Poset<T> {
    items: Vec<T>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    covers: Vec<Vec<usize>>,
    lower_covers: Vec<Vec<usize>>,
}

impl<T: std::fmt::Debug> std::fmt::Debug for Poset<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Poset").field("items", &self.items).field("covers", &self.covers).finish()
    }
}

/// Builds a poset from an order test; the axioms are verified in debug builds.
pub fn build_poset<T>(items: Vec<T>, leq: impl Fn(&T, &T) -> bool) -> Result<Poset<T>, PosetError> {
    let n = items.len();
    let mut up = vec![FixedBitSet::with_capacity(n); n];
    for i in 0..n {
        for j in 0..n {
            if i == j || leq(&items[i], &items[j]) {
                up[i].insert(j);
            }
        }
    }
    if cfg!(debug_assertions) {
        for i in 0..n {
            if !leq(&items[i], &items[i]) {
                return Err(PosetError::NotReflexive(i));
            }
        }
    }
    Poset::from_up_sets(items, up)
}

impl<T> Poset<T> {
    /// From reflexive up-sets `up[i] = {j : i ≤ j}`; checks the axioms in debug builds.
    pub fn from_up_sets(items: Vec<T>, up: Vec<FixedBitSet>) -> Result<Self, PosetError> {
        let n = items.len();
        assert_eq!(up.len(), n);
        if cfg!(debug_assertions) {
            check_axioms(&up)?;
        }
        Ok(Self::from_verified_up_sets(items, up))
    }

    /// Same as [`Poset::from_up_sets`] but checks the axioms unconditionally.
    pub fn from_up_sets_checked(items: Vec<T>, up: Vec<FixedBitSet>) -> Result<Self, PosetError> {
        check_axioms(&up)?;
        Ok(Self::from_verified_up_sets(items, up))
    }

    fn from_verified_up_sets(items: Vec<T>, up: Vec<FixedBitSet>) -> Self {
        let n = items.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (i, u) in up.iter().enumerate() {
            for j in u.ones() {
                down[j].insert(i);
            }
        }
        let covers = transitive_reduction(&up, &down);
        let mut lower_covers = vec![Vec::new(); n];
        for (i, cs) in covers.iter().enumerate() {
            for &j in cs {
                lower_covers[j].push(i);
            }
        }
        Poset { items, up, down, covers, lower_covers }
    }

    /// From a cover relation `(i, j)` meaning `i ⋖ j`.
    pub fn from_covers(items: Vec<T>, covers: &[(usize, usize)]) -> Result<Self, PosetError> {
        let n = items.len();
        let mut succ = vec![Vec::new(); n];
        for &(i, j) in covers {
            if i >= n || j >= n {
                return Err(PosetError::OutOfRange(i.max(j)));
            }
            succ[i].push(j);
        }
        // topological order (Kahn) then closure in reverse order
        let mut indeg = vec![0usize; n];
        for s in &succ {
            for &j in s {
                indeg[j] += 1;
            }
        }
        let mut order: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut head = 0;
        while head < order.len() {
            let i = order[head];
            head += 1;
            for &j in &succ[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    order.push(j);
                }
            }
        }
        if order.len() != n {
            return Err(PosetError::Cyclic);
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for &i in order.iter().rev() {
            let mut u = FixedBitSet::with_capacity(n);
            u.insert(i);
            for &j in &succ[i] {
                u.union_with(&up[j]);
            }
            up[i] = u;
        }
        Ok(Self::from_verified_up_sets(items, up))
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn item(&self, i: usize) -> &T {
        &self.items[i]
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }

    pub fn into_items(self) -> Vec<T> {
        self.items
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.up[i].contains(j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.leq(j, i)
    }

    /// `{j : i ≤ j}`.
    pub fn up_set(&self, i: usize) -> &FixedBitSet {
        &self.up[i]
    }

    /// `{j : j ≤ i}`.
    pub fn down_set(&self, i: usize) -> &FixedBitSet {
        &self.down[i]
    }

    /// Elements covering `i`.
    pub fn covers(&self, i: usize) -> &[usize] {
        &self.covers[i]
    }

    /// Elements covered by `i`.
    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.lower_covers[i]
    }

    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> =
            self.covers.iter().enumerate().flat_map(|(i, cs)| cs.iter().map(move |&j| (i, j))).collect();
        out.sort_unstable();
        out
    }

    pub fn cover_count(&self) -> usize {
        self.covers.iter().map(Vec::len).sum()
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.lower_covers[i].is_empty()).collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.covers[i].is_empty()).collect()
    }

    pub fn unique_min(&self) -> Option<usize> {
        match self.minimal()[..] {
            [m] if self.up[m].count_ones(..) == self.len() => Some(m),
            _ => None,
        }
    }

    pub fn unique_max(&self) -> Option<usize> {
        match self.maximal()[..] {
            [m] if self.down[m].count_ones(..) == self.len() => Some(m),
            _ => None,
        }
    }

    /// Indices in an order compatible with ≤ (a linear extension).
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by_key(|&i| (self.down[i].count_ones(..), i));
        idx
    }

    /// Length of the longest chain ending at each element.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.len()];
        for i in self.linear_extension() {
            h[i] = self.lower_covers[i].iter().map(|&j| h[j] + 1).max().unwrap_or(0);
        }
        h
    }

    /// `l(P)`, the maximum chain length; −1 for the empty poset.
    pub fn length(&self) -> isize {
        self.heights().into_iter().max().map_or(-1, |h| h as isize)
    }

    pub fn rank_info(&self) -> RankInfo {
        let rank = self.heights();
        let covers_ok = self.cover_pairs().iter().all(|&(i, j)| rank[j] == rank[i] + 1);
        let max_ranks: std::collections::BTreeSet<usize> = self.maximal().iter().map(|&m| rank[m]).collect();
        RankInfo { is_ranked: covers_ok && max_ranks.len() <= 1, rank }
    }

    /// The induced subposet on the given indices (in the given order).
    pub fn induced(&self, idx: &[usize]) -> Poset<T>
    where
        T: Clone,
    {
        let m = idx.len();
        let up = idx
            .iter()
            .map(|&i| {
                let mut b = FixedBitSet::with_capacity(m);
                for (a, &j) in idx.iter().enumerate() {
                    if self.leq(i, j) {
                        b.insert(a);
                    }
                }
                b
            })
            .collect();
        Poset::from_verified_up_sets(idx.iter().map(|&i| self.items[i].clone()).collect(), up)
    }

    /// Induced subposet on a bitset of indices (in increasing index order).
    pub fn induced_bits(&self, bits: &FixedBitSet) -> Poset<T>
    where
        T: Clone,
    {
        self.induced(&bits.ones().collect::<Vec<_>>())
    }

    fn check_index(&self, i: usize) -> Result<(), PosetError> {
        if i < self.len() {
            Ok(())
        } else {
            Err(PosetError::OutOfRange(i))
        }
    }

    /// `[x, y]`.
    pub fn interval(&self, x: usize, y: usize) -> Result<Poset<T>, PosetError>
    where
        T: Clone,
    {
        Ok(self.induced_bits(&self.interval_bits(x, y)?))
    }

    /// `(x, y)`.
    pub fn open_interval(&self, x: usize, y: usize) -> Result<Poset<T>, PosetError>
    where
        T: Clone,
    {
        let mut b = self.interval_bits(x, y)?;
        b.set(x, false);
        b.set(y, false);
        Ok(self.induced_bits(&b))
    }

    pub fn interval_bits(&self, x: usize, y: usize) -> Result<FixedBitSet, PosetError> {
        self.check_index(x)?;
        self.check_index(y)?;
        if !self.leq(x, y) {
            return Err(PosetError::NotComparable(x, y));
        }
        let mut b = self.up[x].clone();
        b.intersect_with(&self.down[y]);
        Ok(b)
    }

    /// `P_{≤x}`.
    pub fn below(&self, x: usize) -> Poset<T>
    where
        T: Clone,
    {
        self.induced_bits(&self.down[x])
    }

    /// `P_{≥x}`.
    pub fn above(&self, x: usize) -> Poset<T>
    where
        T: Clone,
    {
        self.induced_bits(&self.up[x])
    }

    /// `P_{<x}`.
    pub fn strictly_below(&self, x: usize) -> Poset<T>
    where
        T: Clone,
    {
        let mut b = self.down[x].clone();
        b.set(x, false);
        self.induced_bits(&b)
    }

    /// `P_{>x}`.
    pub fn strictly_above(&self, x: usize) -> Poset<T>
    where
        T: Clone,
    {
        let mut b = self.up[x].clone();
        b.set(x, false);
        self.induced_bits(&b)
    }

    pub fn is_chain(&self, c: &[usize]) -> bool {
        c.iter().all(|&i| i < self.len())
            && c.iter().enumerate().all(|(a, &i)| c[a + 1..].iter().all(|&j| i != j && self.comparable(i, j)))
    }

    /// Elements outside `c` comparable with every element of `c`, as a bitset.
    pub fn link_bits(&self, c: &[usize]) -> Result<FixedBitSet, PosetError> {
        if !self.is_chain(c) {
            return Err(PosetError::NotAChain);
        }
        let n = self.len();
        let mut b = FixedBitSet::with_capacity(n);
        b.insert_range(..);
        for &x in c {
            let mut comp = self.up[x].clone();
            comp.union_with(&self.down[x]);
            b.intersect_with(&comp);
        }
        for &x in c {
            b.set(x, false);
        }
        Ok(b)
    }

    /// `lk_P(C)`: elements not in `C` that extend `C` to a larger chain.
    pub fn link(&self, c: &[usize]) -> Result<Poset<T>, PosetError>
    where
        T: Clone,
    {
        Ok(self.induced_bits(&self.link_bits(c)?))
    }

    /// The link assembled from its join decomposition
    /// `(< x_0) ∗ (x_0, x_1) ∗ … ∗ (> x_k)` for a chain sorted bottom to top.
    pub fn link_by_decomposition(&self, c: &[usize]) -> Result<Poset<T>, PosetError>
    where
        T: Clone,
    {
        if !self.is_chain(c) {
            return Err(PosetError::NotAChain);
        }
        let mut chain = c.to_vec();
        chain.sort_by_key(|&i| self.down[i].count_ones(..));
        let Some((&first, _)) = chain.split_first() else { return Ok(self.clone()) };
        let mut result = self.strictly_below(first);
        for w in chain.windows(2) {
            result = result.join(&self.open_interval(w[0], w[1])?);
        }
        result = result.join(&self.strictly_above(*chain.last().unwrap()));
        Ok(result)
    }

    /// `P ∗ Q`: disjoint union with every element of `P` below every element of `Q`.
    pub fn join(&self, other: &Poset<T>) -> Poset<T>
    where
        T: Clone,
    {
        let (a, b) = (self.len(), other.len());
        let n = a + b;
        let mut up = Vec::with_capacity(n);
        for i in 0..a {
            let mut u = FixedBitSet::with_capacity(n);
            u.extend(self.up[i].ones());
            u.insert_range(a..n);
            up.push(u);
        }
        for j in 0..b {
            let mut u = FixedBitSet::with_capacity(n);
            u.extend(other.up[j].ones().map(|k| k + a));
            up.push(u);
        }
        let items = self.items.iter().chain(other.items.iter()).cloned().collect();
        Poset::from_verified_up_sets(items, up)
    }

    /// `P × Q` with the componentwise order; element `(i, j)` has index `i·|Q| + j`.
    pub fn product<U: Clone>(&self, other: &Poset<U>) -> Poset<(T, U)>
    where
        T: Clone,
    {
        let (a, b) = (self.len(), other.len());
        let n = a * b;
        let mut up = Vec::with_capacity(n);
        let mut items = Vec::with_capacity(n);
        for i in 0..a {
            for j in 0..b {
                let mut u = FixedBitSet::with_capacity(n);
                for k in self.up[i].ones() {
                    u.extend(other.up[j].ones().map(|l| k * b + l));
                }
                up.push(u);
                items.push((self.items[i].clone(), other.items[j].clone()));
            }
        }
        Poset::from_verified_up_sets(items, up)
    }

    pub fn map_items<U>(&self, f: impl Fn(&T) -> U) -> Poset<U> {
        Poset {
            items: self.items.iter().map(f).collect(),
            up: self.up.clone(),
            down: self.down.clone(),
            covers: self.covers.clone(),
            lower_covers: self.lower_covers.clone(),
        }
    }

    /// Removes the given elements.
    pub fn without(&self, remove: &[usize]) -> Poset<T>
    where
        T: Clone,
    {
        let keep: Vec<usize> = (0..self.len()).filter(|i| !remove.contains(i)).collect();
        self.induced(&keep)
    }

    /// Connected components of the comparability graph, as index lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut members = Vec::new();
            while let Some(x) = stack.pop() {
                members.push(x);
                for &y in self.covers[x].iter().chain(self.lower_covers[x].iter()) {
                    if comp[y] == usize::MAX {
                        comp[y] = id;
                        stack.push(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Removes one cover edge while keeping all other covers (for negative controls).
    pub fn with_cover_removed(&self, i: usize, j: usize) -> Result<Poset<T>, PosetError>
    where
        T: Clone,
    {
        let pairs: Vec<(usize, usize)> = self.cover_pairs().into_iter().filter(|&p| p != (i, j)).collect();
        Poset::from_covers(self.items.clone(), &pairs)
    }
}

/// Chain poset `0 < 1 < … < n−1`.
pub fn chain(n: usize) -> Poset<usize> {
    let covers: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    Poset::from_covers((0..n).collect(), &covers).expect("acyclic")
}

/// Antichain on `n` elements.
pub fn antichain(n: usize) -> Poset<usize> {
    Poset::from_covers((0..n).collect(), &[]).expect("acyclic")
}

/// Boolean lattice `B_n` on subsets of `{0..n}` encoded as bitmasks.
pub fn boolean_lattice(n: usize) -> Poset<u32> {
    build_poset((0..1u32 << n).collect(), |a, b| a & !b == 0).expect("partial order")
}

/// Divisors of `m` under divisibility.
pub fn divisor_lattice(m: u64) -> Poset<u64> {
    build_poset((1..=m).filter(|d| m.is_multiple_of(*d)).collect(), |a, b| b % a == 0).expect("partial order")
}

/// Set partitions of `{0..n}` ordered by refinement (finer below).
pub fn partition_lattice(n: usize) -> Poset<Vec<usize>> {
    // restricted growth strings
    let mut parts = Vec::new();
    let mut s = vec![0usize; n];
    fn rec(i: usize, max: usize, s: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == s.len() {
            out.push(s.clone());
            return;
        }
        for b in 0..=max + 1 {
            s[i] = b;
            rec(i + 1, max.max(b), s, out);
        }
    }
    if n == 0 {
        parts.push(Vec::new());
    } else {
        s[0] = 0;
        rec(1, 0, &mut s, &mut parts);
    }
    build_poset(parts, |a, b| {
        // a refines b: same block in a ⇒ same block in b
        (0..a.len()).all(|i| (0..a.len()).all(|j| a[i] != a[j] || b[i] == b[j]))
    })
    .expect("partial order")
}

fn check_axioms(up: &[FixedBitSet]) -> Result<(), PosetError> {
    let n = up.len();
    for i in 0..n {
        if !up[i].contains(i) {
            return Err(PosetError::NotReflexive(i));
        }
        for j in up[i].ones() {
            if j != i && up[j].contains(i) {
                return Err(PosetError::NotAntisymmetric(i, j));
            }
            if !up[j].is_subset(&up[i]) {
                let k = up[j].difference(&up[i]).next().unwrap();
                return Err(PosetError::NotTransitive(i, j, k));
            }
        }
    }
    Ok(())
}

/// Upper covers of each element: the minimal elements of its strict up-set.
fn transitive_reduction(up: &[FixedBitSet], down: &[FixedBitSet]) -> Vec<Vec<usize>> {
    let n = up.len();
    let size: Vec<usize> = down.iter().map(|d| d.count_ones(..)).collect();
    crate::par::map_range(n, |i| {
        let mut cand: Vec<usize> = up[i].ones().filter(|&j| j != i).collect();
        cand.sort_by_key(|&j| (size[j], j));
        let mut dominated = FixedBitSet::with_capacity(n);
        let mut out = Vec::new();
        for j in cand {
            if dominated.contains(j) {
                continue;
            }
            out.push(j);
            dominated.union_with(&up[j]);
        }
        out.sort_unstable();
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cover_counts() {
        assert_eq!(antichain(3).cover_count(), 0);
        assert_eq!(chain(4).cover_count(), 3);
        assert_eq!(divisor_lattice(12).cover_count(), 7);
    }

    #[test]
    fn lengths_and_intervals() {
        assert_eq!(chain(4).length(), 3);
        assert_eq!(antichain(0).length(), -1);
        let d = divisor_lattice(12);
        let (one, twelve) = (0, d.len() - 1);
        assert_eq!(d.interval(one, twelve).unwrap().len(), d.len());
        let b3 = boolean_lattice(3);
        let open = b3.open_interval(0, 7).unwrap();
        assert_eq!(open.len(), 6);
        assert_eq!(open.length(), 1);
        assert!(matches!(d.interval(twelve, one), Err(PosetError::NotComparable(..))));
    }

    #[test]
    fn links() {
        let c = chain(3);
        assert_eq!(c.link(&[]).unwrap().len(), 3);
        let l = c.link(&[1]).unwrap();
        assert_eq!(l.items(), &[0, 2]);
        assert!(l.lt(0, 1));
        let b3 = boolean_lattice(3);
        let proper = b3.open_interval(0, 7).unwrap();
        let atom = proper.items().iter().position(|&m| m == 1).unwrap();
        let link = proper.link(&[atom]).unwrap();
        let above = proper.strictly_above(atom);
        assert_eq!(link.items(), above.items());
        assert!(c.link(&[0, 0]).is_err());
        assert!(antichain(2).link(&[0, 1]).is_err());
    }

    #[test]
    fn joins_and_products() {
        let p = chain(2);
        let empty = antichain(0);
        assert_eq!(empty.join(&p).len(), 2);
        let cone = antichain(1).join(&antichain(3));
        assert_eq!(cone.unique_min(), Some(0));
        let diamond = p.product(&p);
        assert_eq!(diamond.len(), 4);
        assert_eq!(diamond.cover_count(), 4);
        let q = divisor_lattice(6).map_items(|&d| d as usize);
        assert_eq!(p.join(&q).length(), p.length() + q.length() + 1);
        assert_eq!(p.product(&q).length(), p.length() + q.length());
    }

    #[test]
    fn axiom_violations_detected() {
        let mut up = vec![FixedBitSet::with_capacity(2); 2];
        up[0].insert(0);
        up[1].insert(1);
        up[0].insert(1);
        up[1].insert(0);
        assert!(matches!(Poset::from_up_sets_checked(vec![0, 1], up), Err(PosetError::NotAntisymmetric(..))));
        let cyc = Poset::from_covers(vec![0, 1], &[(0, 1), (1, 0)]);
        assert!(matches!(cyc, Err(PosetError::Cyclic)));
    }

    #[test]
    fn partition_lattice_sizes() {
        assert_eq!(partition_lattice(4).len(), 15);
        assert_eq!(partition_lattice(3).len(), 5);
    }
}
