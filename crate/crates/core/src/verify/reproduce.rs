//! The published homology values of reduced eigenspace posets, and the
//! comparison of computed results against them.

use serde::Serialize;

use crate::groups::RootSpec;
use crate::homology::HomologyResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PaperCase {
    pub id: &'static str,
    pub group: &'static str,
    /// `e^{2πik/N}` as `(k, N)`.
    pub zeta: (i64, u32),
    /// The single degree carrying homology, and its free rank.
    pub degree: isize,
    pub rank: usize,
    /// No runtime guarantee.
    pub experimental: bool,
}

impl PaperCase {
    pub fn root(&self) -> RootSpec {
        RootSpec::new(self.zeta.0, self.zeta.1)
    }

    /// Concentrated in the expected degree, torsion-free, with the expected rank.
    pub fn matches(&self, h: &HomologyResult) -> bool {
        !h.has_torsion() && h.concentrated_in(self.degree) && h.betti(self.degree) == self.rank
    }
}

pub const CASES: [PaperCase; 4] = [
    PaperCase { id: "k5-omega", group: "K5", zeta: (1, 3), degree: 2, rank: 364, experimental: false },
    PaperCase { id: "e6-minus1", group: "E6", zeta: (1, 2), degree: 3, rank: 475, experimental: false },
    PaperCase { id: "e6-omega", group: "E6", zeta: (1, 3), degree: 2, rank: 649, experimental: false },
    PaperCase { id: "e7-omega", group: "E7", zeta: (1, 3), degree: 2, rank: 87751, experimental: true },
];

/// The cases expected to finish on a desk machine.
pub const DESK_CASES: [&str; 3] = ["k5-omega", "e6-minus1", "e6-omega"];

pub fn case(id: &str) -> Option<&'static PaperCase> {
    CASES.iter().find(|c| c.id == id)
}

/// Explanation printed when an E8 case is requested.
pub const E8_REFUSAL: &str = "E8 cases are out of scope: the eigenspace posets of W(E8) \
(696729600 elements) have order complexes far beyond desk scale, and their homology was \
obtained with specialized topological techniques that this tool does not implement.";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::DegreeHomology;

    fn result(bettis: &[(isize, usize)], top: isize) -> HomologyResult {
        HomologyResult {
            degrees: (-1..=top)
                .map(|k| DegreeHomology {
                    dim: k,
                    betti: bettis.iter().find(|b| b.0 == k).map_or(0, |b| b.1),
                    torsion: Vec::new(),
                })
                .collect(),
            f_vector: Vec::new(),
        }
    }

    #[test]
    fn matching() {
        let c = case("e6-omega").unwrap();
        assert!(c.matches(&result(&[(2, 649)], 2)));
        assert!(!c.matches(&result(&[(2, 648)], 2)));
        assert!(!c.matches(&result(&[(2, 649), (1, 1)], 2)));
        assert!(case("e8-omega").is_none());
        assert!(DESK_CASES.iter().all(|id| case(id).is_some_and(|c| !c.experimental)));
    }
}
