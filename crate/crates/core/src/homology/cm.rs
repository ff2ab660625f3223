//! Cohen–Macaulay certificates over ℤ.
//!
//! Three strategies, which must agree:
//! - `Intervals`: every open interval of `P̂ = P ∪ {0̂, 1̂}` has reduced homology
//!   only in its top degree. Links of chains are joins of such intervals, and
//!   by the Künneth formula for joins (top groups are free, so no Tor terms)
//!   a join of concentrated posets is concentrated; conversely each interval
//!   is the link of a chain made of saturated pieces. Each interval is
//!   computed once.
//! - `Garst`: recursion on links of single elements, memoized on the element
//!   set of each link.
//! - `Definition`: the link of every chain, including the empty one.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::par;
use crate::posets::Poset;

use super::{order_complex, poset_homology, HomologyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CmStrategy {
    Intervals,
    Garst,
    Definition,
}

/// Coefficients: over ℚ only Betti numbers matter, over ℤ torsion counts too.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CmRing {
    Integers,
    Rationals,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CmCertificate {
    pub is_cm: bool,
    pub strategy: CmStrategy,
    pub ring: CmRing,
    /// A chain whose link has homology outside its top degree.
    pub witness_chain: Option<Vec<usize>>,
    /// The offending degree.
    pub degree: Option<isize>,
    /// Number of subposets whose homology was computed.
    pub checked: usize,
}

impl CmCertificate {
    fn pass(strategy: CmStrategy, ring: CmRing, checked: usize) -> Self {
        CmCertificate { is_cm: true, strategy, ring, witness_chain: None, degree: None, checked }
    }

    fn fail(strategy: CmStrategy, ring: CmRing, chain: Vec<usize>, degree: isize, checked: usize) -> Self {
        CmCertificate { is_cm: false, strategy, ring, witness_chain: Some(chain), degree: Some(degree), checked }
    }
}

/// Cohen–Macaulay over ℤ.
pub fn is_cohen_macaulay<T: Clone + Sync>(p: &Poset<T>) -> Result<CmCertificate, HomologyError> {
    cm_by_intervals(p, CmRing::Integers)
}

/// First degree other than `l(Q)` carrying homology, if any.
fn offending_degree<T>(q: &Poset<T>, ring: CmRing) -> Result<Option<isize>, HomologyError> {
    let h = poset_homology(q)?;
    let l = q.length();
    Ok(h.degrees
        .iter()
        .filter(|d| match ring {
            CmRing::Integers => !d.is_zero(),
            CmRing::Rationals => d.betti > 0,
        })
        .map(|d| d.dim)
        .find(|&d| d != l))
}

fn sort_chain<T>(p: &Poset<T>, mut c: Vec<usize>) -> Vec<usize> {
    c.sort_by_key(|&x| (p.down_set(x).count_ones(..), x));
    c
}

pub fn cm_by_intervals<T: Clone + Sync>(p: &Poset<T>, ring: CmRing) -> Result<CmCertificate, HomologyError> {
    let n = p.len();
    // endpoints: None stands for 0̂ (as x) or 1̂ (as y)
    let mut pairs: Vec<(Option<usize>, Option<usize>)> = vec![(None, None)];
    for x in 0..n {
        pairs.push((None, Some(x)));
        pairs.push((Some(x), None));
        for y in p.up_set(x).ones().filter(|&y| y != x) {
            pairs.push((Some(x), Some(y)));
        }
    }
    let results = par::map(&pairs, |&(x, y)| {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        if let Some(x) = x {
            bits.intersect_with(p.up_set(x));
            bits.set(x, false);
        }
        if let Some(y) = y {
            bits.intersect_with(p.down_set(y));
            bits.set(y, false);
        }
        offending_degree(&p.induced_bits(&bits), ring)
    });
    for (&(x, y), r) in pairs.iter().zip(results) {
        if let Some(d) = r? {
            let mut chain = Vec::new();
            if let Some(x) = x {
                chain.push(x);
                let mut z = x;
                while let Some(&w) = p.lower_covers(z).first() {
                    chain.push(w);
                    z = w;
                }
            }
            if let Some(y) = y {
                chain.push(y);
                let mut z = y;
                while let Some(&w) = p.covers(z).first() {
                    chain.push(w);
                    z = w;
                }
            }
            return Ok(CmCertificate::fail(CmStrategy::Intervals, ring, sort_chain(p, chain), d, pairs.len()));
        }
    }
    Ok(CmCertificate::pass(CmStrategy::Intervals, ring, pairs.len()))
}

type Failure = Option<(Vec<usize>, isize)>;

pub fn cm_by_garst<T: Clone + Sync>(p: &Poset<T>, ring: CmRing) -> Result<CmCertificate, HomologyError> {
    let mut memo: HashMap<FixedBitSet, Failure> = HashMap::new();
    let mut all = FixedBitSet::with_capacity(p.len());
    all.insert_range(..);
    let fail = garst(p, all, ring, &mut memo)?;
    let checked = memo.len();
    Ok(match fail {
        None => CmCertificate::pass(CmStrategy::Garst, ring, checked),
        Some((chain, d)) => CmCertificate::fail(CmStrategy::Garst, ring, sort_chain(p, chain), d, checked),
    })
}

fn garst<T: Clone + Sync>(
    p: &Poset<T>,
    set: FixedBitSet,
    ring: CmRing,
    memo: &mut HashMap<FixedBitSet, Failure>,
) -> Result<Failure, HomologyError> {
    if let Some(r) = memo.get(&set) {
        return Ok(r.clone());
    }
    let sub = p.induced_bits(&set);
    let mut result = offending_degree(&sub, ring)?.map(|d| (Vec::new(), d));
    if result.is_none() {
        for x in set.ones() {
            let mut link = set.clone();
            let mut comparable = p.up_set(x).clone();
            comparable.union_with(p.down_set(x));
            link.intersect_with(&comparable);
            link.set(x, false);
            if let Some((mut chain, d)) = garst(p, link, ring, memo)? {
                chain.push(x);
                result = Some((chain, d));
                break;
            }
        }
    }
    memo.insert(set, result.clone());
    Ok(result)
}

/// Checks the link of every chain directly. `max_chains` guards the cost.
pub fn cm_by_definition<T: Clone + Sync>(p: &Poset<T>, ring: CmRing, max_chains: usize) -> Result<CmCertificate, HomologyError> {
    let c = order_complex(p)?;
    if c.simplex_count() + 1 > max_chains {
        return Err(HomologyError::CapExceeded { cap: max_chains });
    }
    let mut chains: Vec<Vec<usize>> = vec![Vec::new()];
    for k in 0..=c.dim().max(-1) {
        chains.extend(c.simplices(k as usize).map(|s| s.iter().map(|&v| v as usize).collect()));
    }
    let results = par::map(&chains, |chain| -> Result<Option<isize>, HomologyError> {
        offending_degree(&p.link(chain)?, ring)
    });
    for (chain, r) in chains.iter().zip(results) {
        if let Some(d) = r? {
            return Ok(CmCertificate::fail(CmStrategy::Definition, ring, chain.clone(), d, chains.len()));
        }
    }
    Ok(CmCertificate::pass(CmStrategy::Definition, ring, chains.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::posets::{antichain, boolean_lattice, chain};

    fn all_three<T: Clone + Sync>(p: &Poset<T>) -> bool {
        let a = cm_by_intervals(p, CmRing::Integers).unwrap();
        let b = cm_by_garst(p, CmRing::Integers).unwrap();
        let c = cm_by_definition(p, CmRing::Integers, 100_000).unwrap();
        assert_eq!(a.is_cm, b.is_cm);
        assert_eq!(a.is_cm, c.is_cm);
        a.is_cm
    }

    #[test]
    fn boolean_interior_is_cm() {
        let b4 = boolean_lattice(4);
        assert!(all_three(&b4.open_interval(0, 15).unwrap()));
        assert!(all_three(&b4));
    }

    #[test]
    fn two_disjoint_chains_are_not_cm() {
        let p = chain(2).join(&antichain(0));
        let two = Poset::from_covers(vec![0, 1, 2, 3], &[(0, 1), (2, 3)]).unwrap();
        assert!(all_three(&p));
        assert!(!all_three(&two));
        let cert = cm_by_definition(&two, CmRing::Integers, 1000).unwrap();
        assert_eq!(cert.witness_chain, Some(vec![]));
        assert_eq!(cert.degree, Some(0));
        let cert = cm_by_intervals(&two, CmRing::Integers).unwrap();
        assert_eq!(cert.degree, Some(0));
    }

    #[test]
    fn unranked_posets_fail() {
        // a 3-chain next to a 2-chain sharing top and bottom
        let p = Poset::from_covers(vec![0, 1, 2, 3, 4], &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap();
        assert!(!all_three(&p));
    }
}
