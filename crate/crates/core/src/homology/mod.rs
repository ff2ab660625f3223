//! Order complexes, reduced integral homology via Smith normal form, and
//! Cohen–Macaulay certificates.

mod chain;
mod cm;
mod complex;
pub mod snf;

pub use chain::ChainComplex;
pub use cm::{cm_by_definition, cm_by_garst, cm_by_intervals, is_cohen_macaulay, CmCertificate, CmRing, CmStrategy};
pub use complex::{count_chains, order_complex, order_complex_with_cap, OrderComplex, DEFAULT_SIMPLEX_CAP};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::par;
use crate::posets::{Poset, PosetError};

#[derive(Debug, thiserror::Error)]
pub enum HomologyError {
    #[error("order complex exceeds the cap of {cap} simplices")]
    CapExceeded { cap: usize },
    #[error("Euler characteristic mismatch: f-vector gives {from_faces}, homology gives {from_betti}")]
    EulerMismatch { from_faces: i128, from_betti: i128 },
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// Reduced homology in one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeHomology {
    pub dim: isize,
    pub betti: usize,
    #[serde(serialize_with = "serialize_ints")]
    pub torsion: Vec<BigInt>,
}

impl DegreeHomology {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

fn serialize_ints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match x.to_u64() {
            Some(u) => seq.serialize_element(&u)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

/// `H̃_k` for `k = −1..=dim`, plus the f-vector it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyResult {
    pub degrees: Vec<DegreeHomology>,
    pub f_vector: Vec<usize>,
}

impl HomologyResult {
    pub fn degree(&self, k: isize) -> Option<&DegreeHomology> {
        self.degrees.iter().find(|d| d.dim == k)
    }

    pub fn betti(&self, k: isize) -> usize {
        self.degree(k).map_or(0, |d| d.betti)
    }

    pub fn bettis(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.betti).collect()
    }

    pub fn has_torsion(&self) -> bool {
        self.degrees.iter().any(|d| !d.torsion.is_empty())
    }

    /// Degrees carrying nonzero homology.
    pub fn support(&self) -> Vec<isize> {
        self.degrees.iter().filter(|d| !d.is_zero()).map(|d| d.dim).collect()
    }

    /// True iff every degree other than `k` is zero.
    pub fn concentrated_in(&self, k: isize) -> bool {
        self.support().iter().all(|&d| d == k)
    }

    /// Reduced Euler characteristic `Σ (−1)^k rank H̃_k`.
    pub fn euler_characteristic(&self) -> i128 {
        self.degrees.iter().map(|d| if d.dim.rem_euclid(2) == 0 { d.betti as i128 } else { -(d.betti as i128) }).sum()
    }
}

/// `−1 + f_0 − f_1 + …`.
pub fn reduced_euler_from_faces(f: &[usize]) -> i128 {
    -1 + f.iter().enumerate().map(|(k, &x)| if k % 2 == 0 { x as i128 } else { -(x as i128) }).sum::<i128>()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pipeline {
    /// SNF of every boundary matrix of the full complex.
    Direct,
    /// Collapses and coreductions first, then SNF.
    Reduced,
}

pub fn reduced_homology(c: &OrderComplex) -> Result<HomologyResult, HomologyError> {
    reduced_homology_with(c, Pipeline::Reduced)
}

pub fn reduced_homology_with(c: &OrderComplex, pipeline: Pipeline) -> Result<HomologyResult, HomologyError> {
    let cc = ChainComplex::from_order_complex(c);
    let cc = match pipeline {
        Pipeline::Direct => cc,
        Pipeline::Reduced => cc.reduce(),
    };
    let mut result = chain_homology(&cc, c.dim());
    result.f_vector = c.f_vector();
    let from_faces = reduced_euler_from_faces(&result.f_vector);
    let from_betti = result.euler_characteristic();
    if from_faces != from_betti {
        return Err(HomologyError::EulerMismatch { from_faces, from_betti });
    }
    Ok(result)
}

/// Homology of an augmented chain complex, reported for degrees `−1..=top`.
pub fn chain_homology(cc: &ChainComplex, top: isize) -> HomologyResult {
    let d = cc.dim();
    let ks: Vec<usize> = (0..(d + 1) as usize).collect();
    let factors = par::map(&ks, |&k| snf::invariant_factors(cc.boundary(k)));
    let rank = |k: isize| -> usize {
        if k < 0 || k > d {
            0
        } else {
            factors[k as usize].len()
        }
    };
    let degrees = (-1..=top.max(-1))
        .map(|k| {
            let betti = cc.rank(k) - rank(k) - rank(k + 1);
            let torsion = if k + 1 >= 0 && k < d {
                factors[(k + 1) as usize].iter().filter(|x| !x.is_one()).cloned().collect()
            } else {
                Vec::new()
            };
            DegreeHomology { dim: k, betti, torsion }
        })
        .collect();
    HomologyResult { degrees, f_vector: Vec::new() }
}

/// Betti numbers from ranks over ℚ (an oracle; no torsion information).
pub fn rational_bettis(c: &OrderComplex) -> Vec<usize> {
    let cc = ChainComplex::from_order_complex(c);
    let d = cc.dim();
    let ranks: Vec<usize> = (0..=d).map(|k| snf::rank_over_q(cc.boundary(k as usize))).collect();
    let r = |k: isize| if k < 0 || k > d { 0 } else { ranks[k as usize] };
    (-1..=c.dim().max(-1)).map(|k| cc.rank(k) - r(k) - r(k + 1)).collect()
}

pub fn poset_homology<T>(p: &Poset<T>) -> Result<HomologyResult, HomologyError> {
    reduced_homology(&order_complex(p)?)
}

pub fn poset_homology_with_cap<T>(p: &Poset<T>, cap: usize) -> Result<HomologyResult, HomologyError> {
    reduced_homology(&order_complex_with_cap(p, cap)?)
}

/// Whether reduced homology vanishes outside degree `l(P)`.
#[derive(Debug, Clone, Serialize)]
pub struct ConcentrationReport {
    pub length: isize,
    pub concentrated: bool,
    pub top_betti: usize,
    pub homology: HomologyResult,
}

pub fn homology_concentration<T>(p: &Poset<T>) -> Result<ConcentrationReport, HomologyError> {
    homology_concentration_with_cap(p, DEFAULT_SIMPLEX_CAP)
}

pub fn homology_concentration_with_cap<T>(p: &Poset<T>, cap: usize) -> Result<ConcentrationReport, HomologyError> {
    let homology = poset_homology_with_cap(p, cap)?;
    let length = p.length();
    Ok(ConcentrationReport {
        length,
        concentrated: homology.concentrated_in(length),
        top_betti: homology.betti(length),
        homology,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::posets::{antichain, boolean_lattice, chain};

    fn hollow_triangle() -> OrderComplex {
        OrderComplex::from_facets(3, &[vec![0, 1], vec![1, 2], vec![0, 2]])
    }

    #[test]
    fn basic_spaces() {
        let h = reduced_homology(&hollow_triangle()).unwrap();
        assert_eq!(h.support(), vec![1]);
        assert_eq!(h.betti(1), 1);
        let pts = poset_homology(&antichain(4)).unwrap();
        assert_eq!(pts.support(), vec![0]);
        assert_eq!(pts.betti(0), 3);
        let cone = poset_homology(&chain(3)).unwrap();
        assert!(cone.support().is_empty());
        let empty = poset_homology(&antichain(0)).unwrap();
        assert_eq!(empty.support(), vec![-1]);
        assert_eq!(empty.betti(-1), 1);
        let point = poset_homology(&antichain(1)).unwrap();
        assert!(point.support().is_empty());
    }

    #[test]
    fn sphere_from_boolean_lattice() {
        let b4 = boolean_lattice(4);
        let proper = b4.open_interval(0, 15).unwrap();
        let h = poset_homology(&proper).unwrap();
        assert_eq!(h.support(), vec![2]);
        assert_eq!(h.betti(2), 1);
    }

    #[test]
    fn projective_plane_has_torsion() {
        // minimal 6-vertex triangulation of RP²
        let faces = [
            [0, 1, 3], [0, 1, 4], [0, 2, 3], [0, 2, 5], [0, 4, 5],
            [1, 2, 4], [1, 2, 5], [1, 3, 5], [2, 3, 4], [3, 4, 5],
        ];
        let c = OrderComplex::from_facets(6, &faces.iter().map(|f| f.to_vec()).collect::<Vec<_>>());
        for pipeline in [Pipeline::Direct, Pipeline::Reduced] {
            let h = reduced_homology_with(&c, pipeline).unwrap();
            assert!(h.bettis().iter().all(|&b| b == 0));
            assert_eq!(h.degree(0).unwrap().torsion, Vec::<BigInt>::new());
            assert_eq!(h.degree(1).unwrap().torsion, vec![BigInt::from(2)]);
        }
    }

    #[test]
    fn chain_complexes_square_to_zero() {
        let b = boolean_lattice(4);
        let c = order_complex(&b.open_interval(0, 15).unwrap()).unwrap();
        let cc = ChainComplex::from_order_complex(&c);
        assert!(cc.is_complex());
        assert!(cc.reduce().is_complex());
        assert!(cc.reduce().cell_count() < cc.cell_count());
    }

    #[test]
    fn cones_reduce_to_nothing() {
        let c = order_complex(&chain(4).join(&antichain(3))).unwrap();
        let cc = ChainComplex::from_order_complex(&c).reduce();
        assert_eq!(cc.cell_count(), 0);
    }
}
