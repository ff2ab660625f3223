//! On-disk cache keyed by the spec's content hash and ζ.
//!
//! Layout: `<dir>/<hash>/zeta_<k>_<N>.{hasse,json}` for the poset and
//! `zeta_<k>_<N>.{full,reduced}.homology.json` for homology. The poset is written
//! as soon as it is built, so a later failure keeps that progress.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use eigencm::eigenposet::{export_poset, import_poset};
use eigencm::groups::{GroupSpec, RootSpec};
use eigencm::homology::{DegreeHomology, HomologyResult};
use eigencm::linalg::Subspace;
use eigencm::posets::Poset;

const HOMOLOGY_SCHEMA: &str = "eigencm.cached-homology.v1";

pub struct Cache {
    dir: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct CachedHomology {
    schema: String,
    f_vector: Vec<usize>,
    /// `(degree, betti, torsion)`; torsion coefficients as decimal strings.
    degrees: Vec<(isize, usize, Vec<String>)>,
}

impl Cache {
    /// `None` disables caching.
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    pub fn default_dir() -> Option<PathBuf> {
        let base = std::env::var_os("XDG_CACHE_HOME")
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))?;
        Some(base.join("eigencm"))
    }

    fn stem(&self, spec: &GroupSpec, zeta: RootSpec) -> Option<PathBuf> {
        let z = zeta.reduced();
        Some(self.dir.as_ref()?.join(spec.content_hash()).join(format!("zeta_{}_{}", z.k, z.n)))
    }

    pub fn load_poset(&self, spec: &GroupSpec, zeta: RootSpec) -> Option<Poset<Subspace>> {
        let stem = self.stem(spec, zeta)?;
        let (poset, side) = import_poset(&stem).ok()?;
        (side.zeta.map(|z| z.reduced()) == Some(zeta.reduced())).then_some(poset)
    }

    pub fn store_poset(&self, spec: &GroupSpec, zeta: RootSpec, poset: &Poset<Subspace>) -> std::io::Result<()> {
        let Some(stem) = self.stem(spec, zeta) else { return Ok(()) };
        ensure_parent(&stem)?;
        export_poset(poset, &spec.name(), Some(zeta.reduced()), &stem)
    }

    fn homology_path(&self, spec: &GroupSpec, zeta: RootSpec, reduced: bool) -> Option<PathBuf> {
        let stem = self.stem(spec, zeta)?;
        let kind = if reduced { "reduced" } else { "full" };
        let name = format!("{}.{kind}.homology.json", stem.file_name()?.to_string_lossy());
        Some(stem.with_file_name(name))
    }

    pub fn load_homology(&self, spec: &GroupSpec, zeta: RootSpec, reduced: bool) -> Option<HomologyResult> {
        let text = std::fs::read_to_string(self.homology_path(spec, zeta, reduced)?).ok()?;
        let c: CachedHomology = serde_json::from_str(&text).ok()?;
        if c.schema != HOMOLOGY_SCHEMA {
            return None;
        }
        let degrees = c
            .degrees
            .into_iter()
            .map(|(dim, betti, torsion)| {
                let torsion = torsion.iter().map(|t| t.parse().ok()).collect::<Option<Vec<_>>>()?;
                Some(DegreeHomology { dim, betti, torsion })
            })
            .collect::<Option<Vec<_>>>()?;
        Some(HomologyResult { degrees, f_vector: c.f_vector })
    }

    pub fn store_homology(&self, spec: &GroupSpec, zeta: RootSpec, reduced: bool, h: &HomologyResult) -> std::io::Result<()> {
        let Some(path) = self.homology_path(spec, zeta, reduced) else { return Ok(()) };
        ensure_parent(&path)?;
        let c = CachedHomology {
            schema: HOMOLOGY_SCHEMA.into(),
            f_vector: h.f_vector.clone(),
            degrees: h
                .degrees
                .iter()
                .map(|d| (d.dim, d.betti, d.torsion.iter().map(|t| t.to_string()).collect()))
                .collect(),
        };
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string_pretty(&c)?)?;
        std::fs::rename(tmp, path)
    }
}

fn ensure_parent(p: &Path) -> std::io::Result<()> {
    match p.parent() {
        Some(d) => std::fs::create_dir_all(d),
        None => Ok(()),
    }
}
