//! Group and coset specifications and their JSON file format.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cyclo::{lcm_u32, Cyclotomic};
use crate::linalg::Matrix;

use super::{named, GroupError};

/// The exact root of unity `e^{2πik/N}`, written `k/N` on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootSpec {
    pub k: i64,
    #[serde(rename = "N")]
    pub n: u32,
}

impl RootSpec {
    pub fn new(k: i64, n: u32) -> Self {
        assert!(n >= 1);
        RootSpec { k: k.rem_euclid(n as i64), n }
    }

    pub fn value(&self) -> Cyclotomic {
        Cyclotomic::root_of_unity(self.k, self.n)
    }

    /// Multiplicative order of the root.
    pub fn order(&self) -> u32 {
        let g = num_integer::gcd(self.k.rem_euclid(self.n as i64), self.n as i64) as u32;
        self.n / g
    }

    /// The same root written with the smallest possible denominator.
    pub fn reduced(&self) -> RootSpec {
        let d = self.n / self.order();
        RootSpec { k: self.k.rem_euclid(self.n as i64) / d as i64, n: self.order() }
    }

    /// All roots whose order divides `d`.
    pub fn all_dividing(d: u32) -> Vec<RootSpec> {
        (0..d as i64).map(|k| RootSpec::new(k, d).reduced()).collect()
    }
}

impl fmt::Display for RootSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.k, self.n)
    }
}

impl FromStr for RootSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (k, n) = s.split_once('/').ok_or_else(|| format!("expected k/N, got {s:?}"))?;
        let k: i64 = k.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let n: u32 = n.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if n == 0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(RootSpec::new(k, n))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GroupKind {
    /// G(r, p, n): monomial matrices with r-th root of unity entries whose
    /// product is an (r/p)-th root of unity.
    Monomial { r: u32, p: u32, n: usize },
    ExplicitGenerators { n: usize, generators: Vec<Matrix>, name: Option<String> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum CosetTwist {
    Scalar(RootSpec),
    /// diag(ξ_{e·r/p}, 1, …, 1) for a monomial G(r, p, n) with e | p.
    DiagonalCase1 { e: u32 },
    ExplicitMatrix(Matrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub twist: Option<CosetTwist>,
    /// Coset factors ε_i, paired with the degrees in increasing order.
    pub factors: Option<Vec<RootSpec>>,
}

impl GroupSpec {
    pub fn monomial(r: u32, p: u32, n: usize) -> Self {
        GroupSpec { kind: GroupKind::Monomial { r, p, n }, twist: None, factors: None }
    }

    pub fn explicit(n: usize, generators: Vec<Matrix>, name: Option<&str>) -> Self {
        GroupSpec {
            kind: GroupKind::ExplicitGenerators { n, generators, name: name.map(str::to_owned) },
            twist: None,
            factors: None,
        }
    }

    /// A shipped group by name: `E6`, `K5`, `B3`, `H3`, `I2(5)`, `G(3,1,2)`, `trivial1`, ….
    pub fn named(name: &str) -> Result<Self, GroupError> {
        named::lookup(name).ok_or_else(|| GroupError::UnknownGroup(name.to_owned()))
    }

    pub fn with_twist(mut self, twist: CosetTwist) -> Self {
        self.twist = Some(twist);
        self
    }

    pub fn with_factors(mut self, factors: Vec<RootSpec>) -> Self {
        self.factors = Some(factors);
        self
    }

    pub fn rank(&self) -> usize {
        match &self.kind {
            GroupKind::Monomial { n, .. } => *n,
            GroupKind::ExplicitGenerators { n, .. } => *n,
        }
    }

    pub fn name(&self) -> String {
        let base = match &self.kind {
            GroupKind::Monomial { r, p, n } => format!("G({r},{p},{n})"),
            GroupKind::ExplicitGenerators { name: Some(s), .. } => s.clone(),
            GroupKind::ExplicitGenerators { n, .. } => format!("matrix group on C^{n}"),
        };
        match &self.twist {
            None => base,
            Some(CosetTwist::Scalar(z)) => format!("{z}·{base}"),
            Some(CosetTwist::DiagonalCase1 { e }) => format!("γ[e={e}]·{base}"),
            Some(CosetTwist::ExplicitMatrix(_)) => format!("γ·{base}"),
        }
    }

    /// Generating matrices of the group (the twist is not included).
    pub fn generators(&self) -> Vec<Matrix> {
        match &self.kind {
            GroupKind::Monomial { r, p, n } => named::monomial_generators(*r, *p, *n),
            GroupKind::ExplicitGenerators { generators, .. } => generators.clone(),
        }
    }

    /// The twist γ as a matrix, if any.
    pub fn twist_matrix(&self) -> Result<Option<Matrix>, GroupError> {
        let n = self.rank();
        Ok(match &self.twist {
            None => None,
            Some(CosetTwist::Scalar(z)) => Some(Matrix::scalar(n, &z.value())),
            Some(CosetTwist::DiagonalCase1 { e }) => {
                let GroupKind::Monomial { r, p, .. } = self.kind else {
                    return Err(GroupError::InvalidSpec(
                        "diagonal_case1 twist requires a monomial group".into(),
                    ));
                };
                let mut d = vec![Cyclotomic::one(); n];
                d[0] = Cyclotomic::root_of_unity((p / e) as i64, r);
                Some(Matrix::diagonal(&d))
            }
            Some(CosetTwist::ExplicitMatrix(m)) => Some(m.clone()),
        })
    }

    /// Conductor of the field containing all generator and twist entries.
    pub fn conductor(&self) -> Result<u32, GroupError> {
        let mut c = match &self.kind {
            GroupKind::Monomial { r, .. } => lcm_u32(*r, 1),
            GroupKind::ExplicitGenerators { generators, .. } => {
                generators.iter().fold(1, |a, g| lcm_u32(a, g.conductor()))
            }
        };
        if let Some(t) = self.twist_matrix()? {
            c = lcm_u32(c, t.conductor());
        }
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        let bad = |m: String| Err(GroupError::InvalidSpec(m));
        match &self.kind {
            GroupKind::Monomial { r, p, n } => {
                if *r == 0 || *p == 0 || r % p != 0 {
                    return bad(format!("G({r},{p},{n}): p must divide r"));
                }
                if *n == 0 {
                    return bad("rank must be at least 1".into());
                }
            }
            GroupKind::ExplicitGenerators { n, generators, .. } => {
                if *n == 0 {
                    return bad("rank must be at least 1".into());
                }
                for (i, g) in generators.iter().enumerate() {
                    if g.rows() != *n || g.cols() != *n {
                        return bad(format!("generator {i} is not {n}x{n}"));
                    }
                }
            }
        }
        match &self.twist {
            Some(CosetTwist::DiagonalCase1 { e }) => match self.kind {
                GroupKind::Monomial { p, .. } if *e >= 1 && p % e == 0 => {}
                GroupKind::Monomial { p, .. } => return bad(format!("e = {e} must divide p = {p}")),
                _ => return bad("diagonal_case1 twist requires a monomial group".into()),
            },
            Some(CosetTwist::ExplicitMatrix(m)) if m.rows() != self.rank() || m.cols() != self.rank() => {
                return bad("twist matrix has the wrong size".into());
            }
            _ => {}
        }
        if let Some(f) = &self.factors {
            if f.len() != self.rank() {
                return bad(format!("{} factors given for rank {}", f.len(), self.rank()));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SpecFile::from(self)).expect("spec serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, GroupError> {
        let file: SpecFile = serde_json::from_str(text).map_err(|e| GroupError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let spec = file.into_spec()?;
        spec.validate()?;
        Ok(spec)
    }

    /// Hex SHA-256 of the canonical JSON form; used as a cache key.
    pub fn content_hash(&self) -> String {
        let canon = serde_json::to_string(&SpecFile::from(self)).expect("spec serializes");
        let digest = Sha256::digest(canon.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum TwistFile {
    Scalar(RootSpec),
    DiagonalCase1 { e: u32 },
    Matrix(Matrix),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    conductor: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<Matrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    twist: Option<TwistFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    factors: Option<Vec<RootSpec>>,
}

impl From<&GroupSpec> for SpecFile {
    fn from(s: &GroupSpec) -> Self {
        let twist = s.twist.as_ref().map(|t| match t {
            CosetTwist::Scalar(z) => TwistFile::Scalar(*z),
            CosetTwist::DiagonalCase1 { e } => TwistFile::DiagonalCase1 { e: *e },
            CosetTwist::ExplicitMatrix(m) => TwistFile::Matrix(m.clone()),
        });
        let mut f = SpecFile {
            kind: String::new(),
            r: None,
            p: None,
            n: None,
            name: None,
            conductor: None,
            generators: None,
            twist,
            factors: s.factors.clone(),
        };
        match &s.kind {
            GroupKind::Monomial { r, p, n } => {
                f.kind = "monomial".into();
                (f.r, f.p, f.n) = (Some(*r), Some(*p), Some(*n));
            }
            GroupKind::ExplicitGenerators { n, generators, name } => {
                f.kind = "matrix".into();
                f.n = Some(*n);
                f.name = name.clone();
                f.conductor = Some(generators.iter().fold(1, |a, g| lcm_u32(a, g.conductor())));
                f.generators = Some(generators.clone());
            }
        }
        f
    }
}

impl SpecFile {
    fn into_spec(self) -> Result<GroupSpec, GroupError> {
        let missing = |what: &str| GroupError::InvalidSpec(format!("missing field {what:?}"));
        let kind = match self.kind.as_str() {
            "monomial" => GroupKind::Monomial {
                r: self.r.ok_or_else(|| missing("r"))?,
                p: self.p.ok_or_else(|| missing("p"))?,
                n: self.n.ok_or_else(|| missing("n"))?,
            },
            "matrix" => {
                let generators = self.generators.ok_or_else(|| missing("generators"))?;
                let n = match (self.n, generators.first()) {
                    (Some(n), _) => n,
                    (None, Some(g)) => g.rows(),
                    (None, None) => return Err(missing("n")),
                };
                GroupKind::ExplicitGenerators { n, generators, name: self.name }
            }
            "named" => {
                let name = self.name.ok_or_else(|| missing("name"))?;
                GroupSpec::named(&name)?.kind
            }
            other => {
                return Err(GroupError::InvalidSpec(format!(
                    "unknown kind {other:?} (expected monomial, matrix or named)"
                )))
            }
        };
        let twist = self.twist.map(|t| match t {
            TwistFile::Scalar(z) => CosetTwist::Scalar(z),
            TwistFile::DiagonalCase1 { e } => CosetTwist::DiagonalCase1 { e },
            TwistFile::Matrix(m) => CosetTwist::ExplicitMatrix(m),
        });
        Ok(GroupSpec { kind, twist, factors: self.factors })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let s = GroupSpec::monomial(3, 1, 3).with_twist(CosetTwist::Scalar(RootSpec::new(1, 3)));
        let back = GroupSpec::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        let e6 = GroupSpec::named("E6").unwrap();
        let back = GroupSpec::from_json(&e6.to_json()).unwrap();
        assert_eq!(back, e6);
        assert_eq!(back.content_hash(), e6.content_hash());
    }

    #[test]
    fn parses_documented_forms() {
        let s = GroupSpec::from_json(r#"{"kind":"monomial","r":2,"p":2,"n":4,"twist":{"diagonal_case1":{"e":2}}}"#)
            .unwrap();
        assert_eq!(s.twist, Some(CosetTwist::DiagonalCase1 { e: 2 }));
        let s = GroupSpec::from_json(
            r#"{"kind":"matrix","n":1,"conductor":1,"generators":[[[{"N":1,"coeffs":[[-1,1]]}]]]}"#,
        )
        .unwrap();
        assert_eq!(s.rank(), 1);
        let err = GroupSpec::from_json("{\"kind\":\"monomial\",\n\"r\":2,,}").unwrap_err();
        assert!(matches!(err, GroupError::Parse { line: 2, .. }), "{err}");
        assert!(GroupSpec::from_json(r#"{"kind":"monomial","r":3,"p":2,"n":2}"#).is_err());
    }

    #[test]
    fn root_specs() {
        let z: RootSpec = "2/6".parse().unwrap();
        assert_eq!(z.order(), 3);
        assert_eq!(z.reduced(), RootSpec::new(1, 3));
        assert_eq!(RootSpec::all_dividing(12).len(), 12);
        assert!("1/0".parse::<RootSpec>().is_err());
    }
}
