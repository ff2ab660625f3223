//! Hasse-diagram export with a JSON sidecar describing each element's subspace.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::groups::RootSpec;
use crate::linalg::Subspace;
use crate::posets::{read_hasse, write_hasse, Poset, PosetError};

pub const SIDECAR_SCHEMA: &str = "eigencm.poset.v1";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SidecarElement {
    pub index: usize,
    pub dim: usize,
    pub subspace: Subspace,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Sidecar {
    pub schema: String,
    pub group: String,
    pub zeta: Option<RootSpec>,
    pub elements: Vec<SidecarElement>,
}

/// Writes `<stem>.hasse` and `<stem>.json`.
pub fn export_poset(
    poset: &Poset<Subspace>,
    group: &str,
    zeta: Option<RootSpec>,
    stem: &Path,
) -> std::io::Result<()> {
    let hasse = stem.with_extension("hasse");
    let json = stem.with_extension("json");
    write_hasse(poset, std::io::BufWriter::new(std::fs::File::create(hasse)?))?;
    let sidecar = Sidecar {
        schema: SIDECAR_SCHEMA.into(),
        group: group.into(),
        zeta,
        elements: poset
            .items()
            .iter()
            .enumerate()
            .map(|(index, s)| SidecarElement { index, dim: s.dim(), subspace: s.clone() })
            .collect(),
    };
    serde_json::to_writer_pretty(std::io::BufWriter::new(std::fs::File::create(json)?), &sidecar)?;
    Ok(())
}

/// Reads back an exported poset; the payloads come from the sidecar.
pub fn import_poset(stem: &Path) -> Result<(Poset<Subspace>, Sidecar), PosetError> {
    let io = |e: std::io::Error| PosetError::Malformed(e.to_string());
    let hasse = read_hasse(std::io::BufReader::new(std::fs::File::open(stem.with_extension("hasse")).map_err(io)?))?;
    let text = std::fs::read_to_string(stem.with_extension("json")).map_err(io)?;
    let sidecar: Sidecar = serde_json::from_str(&text).map_err(|e| PosetError::Malformed(e.to_string()))?;
    if sidecar.elements.len() != hasse.len() || sidecar.elements.iter().enumerate().any(|(i, e)| e.index != i) {
        return Err(PosetError::Malformed("sidecar does not match the Hasse diagram".into()));
    }
    let items: Vec<Subspace> = sidecar.elements.iter().map(|e| e.subspace.clone()).collect();
    let poset = Poset::from_covers(items, &hasse.cover_pairs())?;
    Ok((poset, sidecar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigenposet::build_eigen_poset_for;
    use crate::groups::GroupSpec;

    #[test]
    fn round_trip() {
        let ep = build_eigen_poset_for(&GroupSpec::monomial(3, 1, 2), RootSpec::new(1, 3)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let stem = dir.path().join("s");
        export_poset(ep.poset(), "G(3,1,2)", Some(ep.zeta()), &stem).unwrap();
        let (p, side) = import_poset(&stem).unwrap();
        assert_eq!(p.items(), ep.subspaces());
        assert_eq!(p.cover_pairs(), ep.poset().cover_pairs());
        assert_eq!(side.zeta, Some(RootSpec::new(1, 3)));
    }
}
