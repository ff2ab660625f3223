//! Posets of ζ-eigenspaces of reflection cosets, the intersection lattice, and
//! executable checks of their structure theorems.
//!
//! Construction reduces every coset element mod p and deduplicates the mod-p
//! eigenspaces. Group elements have order prime to p, so they stay
//! diagonalizable after reduction and mod-p eigenspace dimensions are exact.
//! Each distinct eigenspace is then computed exactly from a witness, and the
//! remaining steps are confirmed over the cyclotomic field.

mod checks;
mod export;
mod lattice;

pub use checks::{
    check_four_posets, check_reducible_iso, fixed_spaces, lower_ideal_iso, verify_existence_int4, FourPosetReport,
    LowerIdealReport, ReducibleIsoReport,
};
pub use export::{export_poset, import_poset, Sidecar, SidecarElement};
pub use lattice::{hyperplanes, intersection_lattice};

use fixedbitset::FixedBitSet;
use rustc_hash::FxHashMap;

use crate::cyclo::Cyclotomic;
use crate::groups::{GroupError, GroupSpec, GroupTable, RootSpec};
use crate::linalg::{eigenspace, fp_eigenspace, FpSubspace, LinalgError, Matrix, Subspace};
use crate::par;
use crate::posets::{Poset, PosetError};

#[derive(Debug, thiserror::Error)]
pub enum EigenError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("exact and modular computations disagree: {0}")]
    Inconsistent(String),
    #[error("subspace is not an element of the eigenspace poset")]
    NotMember,
    #[error("the group does not act essentially (common fixed space of dimension {0}); restrict to the essential part")]
    NotEssential(usize),
    #[error("pairwise intersection of elements {0} and {1} is not an eigenspace")]
    NotClosed(usize, usize),
}

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    /// Confirm exactly that every coset element has the eigenspace its mod-p key names.
    pub verify_members: bool,
    /// Confirm closure under pairwise intersection.
    pub verify_closure: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { verify_members: true, verify_closure: true }
    }
}

/// `S_ζ(γG)`: distinct ζ-eigenspaces of coset elements under reverse inclusion.
///
/// Indices are sorted by decreasing dimension, then canonically, so index
/// order is a linear extension of the poset.
#[derive(Debug, Clone)]
pub struct EigenPoset {
    poset: Poset<Subspace>,
    zeta: RootSpec,
    spec: GroupSpec,
    witnesses: Vec<usize>,
    keys: Vec<FpSubspace>,
    prime: u64,
    closure_verified: bool,
}

impl EigenPoset {
    pub fn poset(&self) -> &Poset<Subspace> {
        &self.poset
    }

    pub fn zeta(&self) -> RootSpec {
        self.zeta
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn subspace(&self, i: usize) -> &Subspace {
        self.poset.item(i)
    }

    pub fn subspaces(&self) -> &[Subspace] {
        self.poset.items()
    }

    /// Smallest table index `x` with `V(γ g_x, ζ)` equal to element `i`
    /// (`γ` omitted for posets built by [`build_group_poset`]).
    pub fn witness(&self, i: usize) -> usize {
        self.witnesses[i]
    }

    pub fn witnesses(&self) -> &[usize] {
        &self.witnesses
    }

    pub fn index_of(&self, s: &Subspace) -> Option<usize> {
        self.poset.items().iter().position(|t| t == s)
    }

    /// The unique maximum (the intersection of all elements).
    pub fn maximum(&self) -> usize {
        self.poset.unique_max().expect("eigenspace posets have a unique maximum")
    }

    pub fn unique_min(&self) -> Option<usize> {
        self.poset.unique_min()
    }

    pub fn has_unique_min(&self) -> bool {
        self.unique_min().is_some()
    }

    /// Minimal elements, i.e. the maximal eigenspaces.
    pub fn maximal_eigenspaces(&self) -> Vec<usize> {
        self.poset.minimal()
    }

    pub fn closure_verified(&self) -> bool {
        self.closure_verified
    }

    /// Mod-p fingerprint of element `i` (for the prime reported by [`EigenPoset::prime`]).
    pub fn key(&self, i: usize) -> &FpSubspace {
        &self.keys[i]
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// `S̃`: remove the maximum, and the minimum if unique.
    pub fn reduce(&self) -> ReducedEigenPoset {
        let max = self.maximum();
        let min = self.unique_min().filter(|&m| m != max);
        ReducedEigenPoset {
            poset: reduce_poset(&self.poset),
            removed_max: self.subspace(max).clone(),
            removed_min: min.map(|m| self.subspace(m).clone()),
        }
    }

    /// Order-preserving relabeling check against another poset of subspaces.
    pub fn same_subspaces(&self, other: &[Subspace]) -> bool {
        let mut a: Vec<&Subspace> = self.subspaces().iter().collect();
        let mut b: Vec<&Subspace> = other.iter().collect();
        a.sort();
        b.sort();
        a == b
    }
}

/// Removes the unique maximum, and the unique minimum if there is one.
pub fn reduce_poset<T: Clone>(p: &Poset<T>) -> Poset<T> {
    let max = p.unique_max();
    let min = p.unique_min().filter(|&m| Some(m) != max);
    let remove: Vec<usize> = max.into_iter().chain(min).collect();
    p.without(&remove)
}

/// `S̃_ζ(γG)`.
#[derive(Debug, Clone)]
pub struct ReducedEigenPoset {
    pub poset: Poset<Subspace>,
    pub removed_max: Subspace,
    pub removed_min: Option<Subspace>,
}

pub fn build_eigen_poset(table: &GroupTable, zeta: RootSpec) -> Result<EigenPoset, EigenError> {
    build_eigen_poset_with(table, zeta, BuildOptions::default())
}

/// Enumerates the spec and builds `S_ζ(γG)`.
pub fn build_eigen_poset_for(spec: &GroupSpec, zeta: RootSpec) -> Result<EigenPoset, EigenError> {
    let table = GroupTable::enumerate(spec)?;
    build_eigen_poset(&table, zeta)
}

pub fn build_eigen_poset_with(table: &GroupTable, zeta: RootSpec, opts: BuildOptions) -> Result<EigenPoset, EigenError> {
    build_inner(table, zeta, opts, table.has_twist())
}

/// `S_ζ(G)` for the group itself, ignoring any coset twist.
pub fn build_group_poset(table: &GroupTable, zeta: RootSpec) -> Result<EigenPoset, EigenError> {
    build_inner(table, zeta, BuildOptions::default(), false)
}

fn build_inner(table: &GroupTable, zeta: RootSpec, opts: BuildOptions, coset: bool) -> Result<EigenPoset, EigenError> {
    let n = table.rank();
    let zeta = zeta.reduced();
    let zval = zeta.value();
    let view = table.view_for(zeta.order());
    let map = view.map();
    let z = map.image(&zval).expect("roots of unity survive reduction");
    let exact_matrix = |i: usize| if coset { table.coset_matrix(i) } else { table.matrix(i) };

    // distinct mod-p eigenspaces with their smallest witness
    let key_of = |i: usize, buf: &mut Vec<u64>| {
        table.modp_matrix_into(&view, i, coset, buf);
        fp_eigenspace(buf, n, z, map)
    };
    let chunks: Vec<(FpSubspace, usize)> = par::map_chunks(table.order(), 4096, |range| {
        let mut buf = vec![0u64; n * n];
        let mut local: FxHashMap<FpSubspace, usize> = FxHashMap::default();
        for i in range {
            local.entry(key_of(i, &mut buf)).or_insert(i);
        }
        local.into_iter().collect()
    });
    let mut distinct: FxHashMap<FpSubspace, usize> = FxHashMap::default();
    for (k, i) in chunks {
        let e = distinct.entry(k).or_insert(i);
        *e = (*e).min(i);
    }

    // exact eigenspaces, confirmed to reduce to their keys
    let found: Vec<(FpSubspace, usize)> = distinct.into_iter().collect();
    let exact: Vec<Result<Subspace, EigenError>> = par::map(&found, |(key, w)| {
        let s = eigenspace(&exact_matrix(*w), &zval);
        match FpSubspace::from_subspace(&s, map) {
            Some(k) if k == *key => Ok(s),
            _ => Err(EigenError::Inconsistent(format!("eigenspace of element {w} does not match its reduction"))),
        }
    });
    let mut members: Vec<(Subspace, FpSubspace, usize)> = Vec::with_capacity(found.len());
    for ((key, w), s) in found.into_iter().zip(exact) {
        members.push((s?, key, w));
    }
    members.sort_by(|a, b| b.0.dim().cmp(&a.0.dim()).then_with(|| a.0.sort_key().cmp(&b.0.sort_key())));
    let index: FxHashMap<FpSubspace, usize> = members.iter().enumerate().map(|(i, m)| (m.1.clone(), i)).collect();

    if opts.verify_members {
        let ok = par::map_chunks(table.order(), 1024, |range| {
            let mut buf = vec![0u64; n * n];
            range
                .filter(|&i| {
                    let k = key_of(i, &mut buf);
                    let m = &members[index[&k]].0;
                    !m.acts_as_scalar(&exact_matrix(i), &zval)
                })
                .take(1)
                .collect::<Vec<usize>>()
        });
        if let Some(&bad) = ok.first() {
            return Err(EigenError::Inconsistent(format!("element {bad} does not act as ζ on its eigenspace")));
        }
    }

    // reverse inclusion: up[a] = {b : b ⊆ a}; mod-p containment can only over-report
    let m = members.len();
    let up: Vec<FixedBitSet> = par::map_range(m, |a| {
        let mut b = FixedBitSet::with_capacity(m);
        for (j, other) in members.iter().enumerate() {
            if members[a].1.contains(&other.1, map) {
                b.insert(j);
            }
        }
        b
    });
    let (subspaces, keys, witnesses): (Vec<Subspace>, Vec<FpSubspace>, Vec<usize>) = {
        let mut s = Vec::with_capacity(m);
        let mut k = Vec::with_capacity(m);
        let mut w = Vec::with_capacity(m);
        for (a, b, c) in members {
            s.push(a);
            k.push(b);
            w.push(c);
        }
        (s, k, w)
    };
    let poset = Poset::from_up_sets(subspaces, up)?;
    // exact check of each cover; transitivity then makes the whole order exact
    let witness_mats: Vec<Matrix> = par::map(&witnesses, |&w| exact_matrix(w));
    let pairs = poset.cover_pairs();
    let bad = par::map(&pairs, |&(a, b)| !poset.item(b).acts_as_scalar(&witness_mats[a], &zval));
    if let Some(p) = pairs.iter().zip(bad).find(|(_, b)| *b).map(|(p, _)| p) {
        return Err(EigenError::Inconsistent(format!("cover {p:?} is not an exact inclusion")));
    }

    let mut ep = EigenPoset {
        poset,
        zeta,
        spec: table.spec().clone(),
        witnesses,
        keys,
        prime: map.prime(),
        closure_verified: false,
    };
    if ep.poset.unique_max().is_none() {
        return Err(EigenError::Inconsistent("no unique maximal element".into()));
    }
    if opts.verify_closure {
        check_closure(&ep, map)?;
        ep.closure_verified = true;
    }
    Ok(ep)
}

/// Every pairwise intersection is an element. For incomparable `A`, `B` let
/// `M` be the largest element contained in both (the first common index,
/// since indices decrease in dimension). Then `M ⊆ A ∩ B` exactly, and
/// `dim M = dim Ā + dim B̄ − rank_p[A; B] ≥ dim(A ∩ B)` forces `M = A ∩ B`.
fn check_closure(ep: &EigenPoset, map: &crate::cyclo::ModpMap) -> Result<(), EigenError> {
    let m = ep.len();
    let n = ep.subspace(0).ambient_dim();
    let failures = par::map_range(m, |a| {
        let (ka, up_a) = (&ep.keys[a], ep.poset.up_set(a).as_slice());
        for b in a + 1..m {
            if ep.poset.leq(a, b) {
                continue;
            }
            let kb = &ep.keys[b];
            let meet_dim = ka.dim() + kb.dim() - stacked_rank(ka, kb, n, map);
            let common = up_a
                .iter()
                .zip(ep.poset.up_set(b).as_slice())
                .enumerate()
                .find_map(|(w, (x, y))| (x & y != 0).then(|| w * 32 + (x & y).trailing_zeros() as usize));
            match common {
                Some(c) if ep.keys[c].dim() == meet_dim => {}
                _ => return Some((a, b)),
            }
        }
        None
    });
    match failures.into_iter().flatten().next() {
        Some((a, b)) => Err(EigenError::NotClosed(a, b)),
        None => Ok(()),
    }
}

/// `rank_p[A; B]` for RREF row blocks of width `n ≤ 8`: reduce the rows of `B`
/// against the pivots of `A`, then eliminate the remainder without division.
fn stacked_rank(a: &FpSubspace, b: &FpSubspace, n: usize, map: &crate::cyclo::ModpMap) -> usize {
    const W: usize = crate::groups::MAX_RANK;
    let mut rest = [[0u64; W]; W];
    let (pa, ra, rb) = (a.pivots(), a.rows(), b.rows());
    for (i, row) in rest.iter_mut().enumerate().take(b.dim()) {
        row[..n].copy_from_slice(&rb[i * n..(i + 1) * n]);
        for (k, &p) in pa.iter().enumerate() {
            let f = row[p];
            if f != 0 {
                for j in 0..n {
                    row[j] = map.sub(row[j], map.mul(f, ra[k * n + j]));
                }
            }
        }
    }
    let rows = b.dim();
    let mut rank = 0;
    for c in 0..n {
        let Some(piv) = (rank..rows).find(|&i| rest[i][c] != 0) else { continue };
        rest.swap(piv, rank);
        let pr = rest[rank];
        for row in rest.iter_mut().take(rows).skip(rank + 1) {
            let f = row[c];
            if f != 0 {
                for j in c..n {
                    row[j] = map.sub(map.mul(row[j], pr[c]), map.mul(f, pr[j]));
                }
            }
        }
        rank += 1;
    }
    a.dim() + rank
}

/// Exact version of the closure check, used as an oracle on small posets.
pub fn closure_exact(ep: &EigenPoset) -> Result<(), EigenError> {
    let set: std::collections::HashSet<&Subspace> = ep.subspaces().iter().collect();
    for a in 0..ep.len() {
        for b in a + 1..ep.len() {
            let x = ep.subspace(a).intersect(ep.subspace(b))?;
            if !set.contains(&x) {
                return Err(EigenError::NotClosed(a, b));
            }
        }
    }
    Ok(())
}

/// The ζ-eigenspaces of explicit matrices, deduplicated exactly (no group table).
pub fn eigenspaces_of(mats: &[Matrix], zeta: &Cyclotomic) -> Vec<Subspace> {
    let mut out: Vec<Subspace> = par::map(mats, |g| eigenspace(g, zeta));
    out.sort();
    out.dedup();
    out
}

/// Orders exact subspaces by reverse inclusion (exact containment tests).
pub fn reverse_inclusion_poset(mut subspaces: Vec<Subspace>) -> Result<Poset<Subspace>, EigenError> {
    subspaces.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.sort_key().cmp(&b.sort_key())));
    subspaces.dedup();
    let m = subspaces.len();
    let up: Vec<FixedBitSet> = par::map_range(m, |a| {
        let mut b = FixedBitSet::with_capacity(m);
        for (j, s) in subspaces.iter().enumerate() {
            if subspaces[a].contains(s).expect("same ambient") {
                b.insert(j);
            }
        }
        b
    });
    Ok(Poset::from_up_sets(subspaces, up)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(r: u32, p: u32, n: usize) -> GroupTable {
        GroupTable::enumerate(&GroupSpec::monomial(r, p, n)).unwrap()
    }

    #[test]
    fn symmetric_group_fixed_spaces() {
        let ep = build_eigen_poset(&table(1, 1, 3), RootSpec::new(0, 1)).unwrap();
        assert_eq!(ep.len(), 5);
        let dims: Vec<usize> = ep.subspaces().iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![3, 2, 2, 2, 1]);
        assert!(ep.closure_verified());
        closure_exact(&ep).unwrap();
        let red = ep.reduce();
        assert_eq!(red.poset.len(), 3);
        assert_eq!(red.poset.cover_count(), 0);
        assert_eq!(red.removed_max.dim(), 1);
    }

    #[test]
    fn minus_one_shift_in_rank_two() {
        let t = table(2, 1, 2);
        let one = build_eigen_poset(&t, RootSpec::new(0, 1)).unwrap();
        let minus = build_eigen_poset(&t, RootSpec::new(1, 2)).unwrap();
        assert!(one.same_subspaces(minus.subspaces()));
    }

    #[test]
    fn absent_eigenvalue_gives_a_point() {
        let ep = build_eigen_poset(&table(2, 1, 2), RootSpec::new(1, 5)).unwrap();
        assert_eq!(ep.len(), 1);
        assert!(ep.subspace(0).is_zero());
        assert!(ep.reduce().poset.is_empty());
    }

    #[test]
    fn exact_order_agrees() {
        let t = table(3, 1, 2);
        let ep = build_eigen_poset(&t, RootSpec::new(1, 3)).unwrap();
        let exact = reverse_inclusion_poset(ep.subspaces().to_vec()).unwrap();
        assert_eq!(exact.items(), ep.subspaces());
        assert_eq!(exact.cover_pairs(), ep.poset().cover_pairs());
        let mats: Vec<Matrix> = (0..t.order()).map(|i| t.matrix(i)).collect();
        assert_eq!(eigenspaces_of(&mats, &RootSpec::new(1, 3).value()).len(), ep.len());
    }
}
