use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::groups::{GroupError, GroupSpec, RootSpec, DEFAULT_ELEMENT_CAP};
use crate::homology::DEFAULT_SIMPLEX_CAP;

/// The fixed registry of checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// `S_ζ` is Cohen–Macaulay over ℤ.
    Cm,
    /// Descriptions of the subspaces of each `E` agree; the quotient group
    /// description is also checked for maximal eigenspaces.
    FourPosets,
    /// Pairwise intersections of elements are elements.
    Closure,
    /// Every upper interval `[E, 1̂]` is a geometric lattice.
    GeometricIntervals,
    /// `S_1(G)` equals the intersection lattice and is geometric.
    FixedLattice,
    /// Maximal eigenspaces have dimension `a(ζ)`.
    MaximalDims,
    /// Maximal eigenspaces form a single `G`-orbit.
    MaximalOrbit,
    /// Principal lower ideals match the eigenspace poset of `x·G_E`.
    LowerIdeal,
    /// Some `γh` has no fixed vector.
    Int4,
    /// Reduced homology of `S̃_ζ` lives only in degree `l(S̃_ζ)`.
    Concentration,
    /// `S̃_ζ` is connected when its length is positive.
    Connectivity,
    /// `dim(rX ∩ X) = dim X − 1` for reflections `r` not stabilizing `X`.
    ReflectionIntersection,
    /// `S_ζ(G ⊕ H) = S_ζ(G) × S_ζ(H)` for `H` of order 2 on a line.
    Product,
    /// Block-permuting cosets: `dim V(γx, ζ) = dim V(x_k⋯x_1, ζ^k)`.
    ReducibleIso,
}

impl Suite {
    pub const ALL: [Suite; 14] = [
        Suite::Cm,
        Suite::FourPosets,
        Suite::Closure,
        Suite::GeometricIntervals,
        Suite::FixedLattice,
        Suite::MaximalDims,
        Suite::MaximalOrbit,
        Suite::LowerIdeal,
        Suite::Int4,
        Suite::Concentration,
        Suite::Connectivity,
        Suite::ReflectionIntersection,
        Suite::Product,
        Suite::ReducibleIso,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Cm => "cm",
            Suite::FourPosets => "four_posets",
            Suite::Closure => "closure",
            Suite::GeometricIntervals => "geometric_intervals",
            Suite::FixedLattice => "fixed_lattice",
            Suite::MaximalDims => "maximal_dims",
            Suite::MaximalOrbit => "maximal_orbit",
            Suite::LowerIdeal => "lower_ideal",
            Suite::Int4 => "int4",
            Suite::Concentration => "concentration",
            Suite::Connectivity => "connectivity",
            Suite::ReflectionIntersection => "reflection_intersection",
            Suite::Product => "product",
            Suite::ReducibleIso => "reducible_iso",
        }
    }

    /// Whether the suite runs once per root of unity (otherwise once per group).
    pub fn per_zeta(&self) -> bool {
        !matches!(self, Suite::FixedLattice | Suite::Int4 | Suite::ReducibleIso)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}; known: {}", Suite::ALL.map(|x| x.name()).join(", ")))
    }
}

/// A group given by shipped name (`"G(3,1,2)"`, `"E6"`) or an inline spec object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupEntry {
    Name(String),
    Spec(serde_json::Value),
}

impl GroupEntry {
    pub fn resolve(&self) -> Result<GroupSpec, GroupError> {
        match self {
            GroupEntry::Name(n) => GroupSpec::named(n),
            GroupEntry::Spec(v) => GroupSpec::from_json(&v.to_string()),
        }
    }
}

/// Roots as `"k/N"` strings, or every root whose order divides `all_dividing`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ZetaGrid {
    List(Vec<String>),
    Dividing { all_dividing: u32 },
}

impl Default for ZetaGrid {
    fn default() -> Self {
        ZetaGrid::Dividing { all_dividing: 12 }
    }
}

impl ZetaGrid {
    pub fn resolve(&self) -> Result<Vec<RootSpec>, String> {
        match self {
            ZetaGrid::Dividing { all_dividing: 0 } => Err("all_dividing must be positive".into()),
            ZetaGrid::Dividing { all_dividing } => Ok(RootSpec::all_dividing(*all_dividing)),
            ZetaGrid::List(v) => v.iter().map(|s| s.parse::<RootSpec>().map(|z| z.reduced())).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    /// Group (or coset) elements enumerated per group.
    pub elements: usize,
    /// Simplices in any order complex.
    pub simplices: usize,
    /// Largest group on which reflection intersections are checked exhaustively.
    pub reflection_group_order: usize,
    /// Largest poset whose closure is recomputed by exact pairwise intersection.
    pub exact_closure: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            elements: DEFAULT_ELEMENT_CAP,
            simplices: DEFAULT_SIMPLEX_CAP,
            reflection_group_order: 10_000,
            exact_closure: 400,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub groups: Vec<GroupEntry>,
    pub zetas: ZetaGrid,
    pub suites: Vec<Suite>,
    pub caps: Caps,
    /// Worker threads; `None` uses available parallelism.
    pub threads: Option<usize>,
    /// Adds the negative control: an upper interval check on a lattice with
    /// one cover deleted, which must fail.
    pub sabotage: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            groups: monomial_grid(3, 3),
            zetas: ZetaGrid::default(),
            suites: Suite::ALL.to_vec(),
            caps: Caps::default(),
            threads: None,
            sabotage: false,
        }
    }
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self, GroupError> {
        let cfg: SuiteConfig = serde_json::from_str(text).map_err(|e| GroupError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        let c = &self.caps;
        if c.elements == 0 || c.simplices == 0 || c.reflection_group_order == 0 || c.exact_closure == 0 {
            return Err(GroupError::InvalidSpec("caps must be positive".into()));
        }
        if self.threads == Some(0) {
            return Err(GroupError::InvalidSpec("threads must be positive".into()));
        }
        self.zetas.resolve().map_err(GroupError::InvalidSpec)?;
        Ok(())
    }
}

/// `G(r, p, n)` for all `r ≤ max_r`, `p | r`, `n ≤ max_n`.
pub fn monomial_grid(max_r: u32, max_n: usize) -> Vec<GroupEntry> {
    let mut out = Vec::new();
    for r in 1..=max_r {
        for p in (1..=r).filter(|p| r % p == 0) {
            for n in 1..=max_n {
                out.push(GroupEntry::Name(format!("G({r},{p},{n})")));
            }
        }
    }
    out
}
