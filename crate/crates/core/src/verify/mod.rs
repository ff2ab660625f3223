//! Named checks over grids of groups and roots of unity, with
//! machine-readable reports.
//!
//! Suites that depend on ζ run once per (group, ζ); the others run once per
//! group and carry no ζ. A negative control (a lattice with one cover
//! deleted) can be added to confirm the checkers can fail.

mod config;
pub mod reproduce;
mod suites;

pub use config::{monomial_grid, Caps, GroupEntry, Suite, SuiteConfig, ZetaGrid};

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::eigenposet::{build_eigen_poset, intersection_lattice, EigenPoset};
use crate::groups::{GroupError, GroupSpec, GroupTable, RootSpec};
use crate::par;

use suites::{GroupCtx, Outcome, SuiteError};

pub const REPORT_SCHEMA: &str = "eigencm.report.v1";

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("group {index}: {source}")]
    Spec { index: usize, source: GroupError },
    #[error("bad config: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    /// A resource cap was hit; not counted as a failure.
    Cap,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sizes {
    pub group_order: Option<usize>,
    pub elements: Option<usize>,
    pub f_vector: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteEntry {
    pub group: String,
    pub zeta: Option<RootSpec>,
    pub suite: Suite,
    pub status: Status,
    pub detail: Value,
    pub sizes: Sizes,
    pub millis: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub cap: usize,
    pub error: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema: &'static str,
    pub counts: Counts,
    pub entries: Vec<SuiteEntry>,
}

impl SuiteReport {
    fn new(entries: Vec<SuiteEntry>) -> Self {
        let mut counts = Counts::default();
        for e in &entries {
            *match e.status {
                Status::Pass => &mut counts.pass,
                Status::Fail => &mut counts.fail,
                Status::Skipped => &mut counts.skipped,
                Status::Cap => &mut counts.cap,
                Status::Error => &mut counts.error,
            } += 1;
        }
        SuiteReport { schema: REPORT_SCHEMA, counts, entries }
    }

    /// No entry failed or errored.
    pub fn all_pass(&self) -> bool {
        self.counts.fail == 0 && self.counts.error == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &SuiteEntry> {
        self.entries.iter().filter(|e| matches!(e.status, Status::Fail | Status::Error))
    }

    pub fn entry(&self, group: &str, zeta: Option<RootSpec>, suite: Suite) -> Option<&SuiteEntry> {
        self.entries.iter().find(|e| e.group == group && e.zeta == zeta && e.suite == suite)
    }

    /// Timings zeroed, for comparing runs.
    pub fn without_timings(&self) -> SuiteReport {
        let mut r = self.clone();
        r.entries.iter_mut().for_each(|e| e.millis = 0);
        r
    }

    /// One row per suite: pass/fail/skip/cap/error counts, then every failure.
    pub fn summary_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<24} {:>6} {:>6} {:>6} {:>6} {:>6}", "suite", "pass", "fail", "skip", "cap", "error");
        for s in Suite::ALL {
            let rows: Vec<&SuiteEntry> = self.entries.iter().filter(|e| e.suite == s).collect();
            if rows.is_empty() {
                continue;
            }
            let n = |st: Status| rows.iter().filter(|e| e.status == st).count();
            let _ = writeln!(
                out,
                "{:<24} {:>6} {:>6} {:>6} {:>6} {:>6}",
                s.name(),
                n(Status::Pass),
                n(Status::Fail),
                n(Status::Skipped),
                n(Status::Cap),
                n(Status::Error)
            );
        }
        let c = &self.counts;
        let _ = writeln!(out, "{:<24} {:>6} {:>6} {:>6} {:>6} {:>6}", "total", c.pass, c.fail, c.skipped, c.cap, c.error);
        for e in self.failures() {
            let z = e.zeta.map_or("-".to_owned(), |z| z.to_string());
            let _ = writeln!(out, "FAILED {} ζ={} {}: {}", e.group, z, e.suite, e.detail);
        }
        out
    }
}

pub fn run_suites(cfg: &SuiteConfig) -> Result<SuiteReport, VerifyError> {
    cfg.validate().map_err(|e| VerifyError::Config(e.to_string()))?;
    let specs: Vec<GroupSpec> = cfg
        .groups
        .iter()
        .enumerate()
        .map(|(index, g)| g.resolve().map_err(|source| VerifyError::Spec { index, source }))
        .collect::<Result<_, _>>()?;
    let zetas = cfg.zetas.resolve().map_err(VerifyError::Config)?;
    let mut suites = cfg.suites.clone();
    suites.sort();
    suites.dedup();
    Ok(par::with_threads(cfg.threads, || {
        let mut entries = Vec::new();
        for spec in specs {
            entries.extend(run_group(spec, &zetas, &suites, &cfg.caps));
        }
        if cfg.sabotage {
            entries.push(sabotage_entry());
        }
        SuiteReport::new(entries)
    }))
}

fn entry(group: &str, zeta: Option<RootSpec>, suite: Suite, outcome: Outcome, sizes: Sizes, millis: u64) -> SuiteEntry {
    let f_vector = outcome.f_vector.or(sizes.f_vector);
    SuiteEntry {
        group: group.to_owned(),
        zeta,
        suite,
        status: outcome.status,
        detail: outcome.detail,
        sizes: Sizes { f_vector, ..sizes },
        millis,
    }
}

fn error_outcome(e: &SuiteError) -> Outcome {
    Outcome { status: e.status(), detail: json!({ "error": e.to_string() }), f_vector: None }
}

fn timed(f: impl FnOnce() -> Result<Outcome, SuiteError>) -> (Outcome, u64) {
    let t = Instant::now();
    let o = f().unwrap_or_else(|e| error_outcome(&e));
    (o, t.elapsed().as_millis() as u64)
}

fn run_group(spec: GroupSpec, zetas: &[RootSpec], suites: &[Suite], caps: &Caps) -> Vec<SuiteEntry> {
    let name = spec.name();
    let global: Vec<Suite> = suites.iter().copied().filter(|s| !s.per_zeta()).collect();
    let local: Vec<Suite> = suites.iter().copied().filter(|s| s.per_zeta()).collect();
    let table = match GroupTable::enumerate_with_cap(&spec, caps.elements) {
        Ok(t) => t,
        Err(e) => {
            let outcome = || error_outcome(&SuiteError::Group(clone_group_error(&e)));
            let none = || Sizes { group_order: None, elements: None, f_vector: None };
            let mut out: Vec<SuiteEntry> = global.iter().map(|&s| entry(&name, None, s, outcome(), none(), 0)).collect();
            for &z in zetas {
                out.extend(local.iter().map(|&s| entry(&name, Some(z), s, outcome(), none(), 0)));
            }
            return out;
        }
    };
    let order = table.order();
    let ctx = GroupCtx::new(spec, table);
    let mut out = Vec::new();
    for &s in &global {
        let (o, ms) = timed(|| match s {
            Suite::FixedLattice => suites::fixed_lattice(&ctx),
            Suite::Int4 => suites::int4(&ctx, caps),
            Suite::ReducibleIso => suites::reducible_iso(&ctx, zetas),
            _ => unreachable!("per-ζ suite"),
        });
        out.push(entry(&name, None, s, o, Sizes { group_order: Some(order), elements: None, f_vector: None }, ms));
    }
    if local.is_empty() {
        return out;
    }
    let per_zeta = par::map(zetas, |&z| {
        let built = build_eigen_poset(&ctx.table, z).map_err(SuiteError::from);
        let elements = built.as_ref().ok().map(EigenPoset::len);
        let sizes = || Sizes { group_order: Some(order), elements, f_vector: None };
        local
            .iter()
            .map(|&s| {
                let ep = match &built {
                    Ok(ep) => ep,
                    Err(e) => return entry(&name, Some(z), s, error_outcome(e), sizes(), 0),
                };
                let (o, ms) = timed(|| run_local(s, &ctx, ep, caps));
                entry(&name, Some(z), s, o, sizes(), ms)
            })
            .collect::<Vec<_>>()
    });
    out.extend(per_zeta.into_iter().flatten());
    out
}

fn run_local(s: Suite, ctx: &GroupCtx, ep: &EigenPoset, caps: &Caps) -> Result<Outcome, SuiteError> {
    match s {
        Suite::Cm => suites::cm(ep),
        Suite::FourPosets => suites::four_posets(ctx, ep),
        Suite::Closure => suites::closure(ep, caps),
        Suite::GeometricIntervals => Ok(suites::geometric_intervals(ep.poset())),
        Suite::MaximalDims => suites::maximal_dims(ctx, ep),
        Suite::MaximalOrbit => suites::maximal_orbit(ctx, ep),
        Suite::LowerIdeal => suites::lower_ideal(ctx, ep),
        Suite::Concentration => suites::concentration(ep, caps),
        Suite::Connectivity => suites::connectivity(ep),
        Suite::ReflectionIntersection => suites::reflection_intersection(ctx, ep, caps),
        Suite::Product => suites::product(ctx, ep, caps),
        Suite::FixedLattice | Suite::Int4 | Suite::ReducibleIso => unreachable!("per-group suite"),
    }
}

fn clone_group_error(e: &GroupError) -> GroupError {
    match e {
        GroupError::CapExceeded { what, cap } => GroupError::CapExceeded { what, cap: *cap },
        other => GroupError::InvalidSpec(other.to_string()),
    }
}

/// Base group of the negative control.
pub const SABOTAGE_BASE: &str = "G(2,1,3)";

/// The intersection lattice of the base group with its first cover deleted,
/// run through the upper-interval check. Its status must be `Fail`.
pub fn sabotage_entry() -> SuiteEntry {
    let t = Instant::now();
    let spec = GroupSpec::named(SABOTAGE_BASE).expect("shipped group");
    let outcome = GroupTable::enumerate(&spec)
        .map_err(SuiteError::from)
        .and_then(|table| Ok(intersection_lattice(&table)?))
        .and_then(|lattice| {
            let (i, j) = lattice.cover_pairs()[0];
            let broken = lattice.with_cover_removed(i, j)?;
            let mut o = suites::geometric_intervals(&broken);
            o.detail["deleted_cover"] = json!([i, j]);
            Ok(o)
        })
        .unwrap_or_else(|e| error_outcome(&e));
    let sizes = Sizes { group_order: None, elements: None, f_vector: None };
    let ms = t.elapsed().as_millis() as u64;
    entry(&format!("sabotage:{SABOTAGE_BASE}"), Some(RootSpec::new(0, 1)), Suite::GeometricIntervals, outcome, sizes, ms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sabotage_fails_with_witness() {
        let e = sabotage_entry();
        assert_eq!(e.status, Status::Fail, "{}", e.detail);
        assert!(e.detail["element"].is_u64());
    }

    #[test]
    fn small_grid_passes_and_is_complete() {
        let cfg = SuiteConfig {
            groups: monomial_grid(2, 2),
            zetas: ZetaGrid::Dividing { all_dividing: 4 },
            ..SuiteConfig::default()
        };
        let r = run_suites(&cfg).unwrap();
        assert!(r.all_pass(), "{}", r.summary_table());
        let per_group = 3 + 11 * 4;
        assert_eq!(r.entries.len(), cfg.groups.len() * per_group);
        let again = run_suites(&cfg).unwrap();
        assert_eq!(r.without_timings(), again.without_timings());
    }

    #[test]
    fn config_parsing() {
        let cfg = SuiteConfig::from_json(
            r#"{"groups": ["G(3,1,2)", {"kind": "monomial", "r": 2, "p": 1, "n": 2}],
                "zetas": ["1/3", "0/1"], "suites": ["cm", "int4"], "sabotage": true}"#,
        )
        .unwrap();
        assert_eq!(cfg.groups.len(), 2);
        assert_eq!(cfg.zetas.resolve().unwrap(), vec![RootSpec::new(1, 3), RootSpec::new(0, 1)]);
        let r = run_suites(&cfg).unwrap();
        assert_eq!(r.entries.len(), 2 * (1 + 2) + 1);
        assert!(!r.all_pass());
        assert_eq!(r.counts.fail, 1);
        assert!(SuiteConfig::from_json(r#"{"suites": ["nope"]}"#).is_err());
        assert!(SuiteConfig::from_json(r#"{"caps": {"elements": 0}}"#).is_err());
    }
}
