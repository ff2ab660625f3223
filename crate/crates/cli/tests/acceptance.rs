//! Acceptance criteria, one result line each. Exits non-zero if any fails.
//!
//! Criterion 4 (E7, ζ = ω) is a stretch goal and runs only with
//! `EIGENCM_ACCEPT_E7=1`; `EIGENCM_ACCEPT_E7_MOLIEN=1` adds W(E7) to the
//! degree checks of criterion 12.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use serde_json::Value;

use eigencm::eigenposet::{build_eigen_poset, reduce_poset};
use eigencm::groups::{molien_degrees, GroupSpec, GroupTable, RootSpec};
use eigencm::homology::{
    cm_by_definition, cm_by_garst, order_complex_with_cap, rational_bettis, reduced_homology_with, CmRing,
    HomologyError, Pipeline,
};
use eigencm::linalg::Subspace;
use eigencm::posets::Poset;
use eigencm::verify::{monomial_grid, run_suites, GroupEntry, Status, Suite, SuiteConfig, SuiteReport, ZetaGrid};

enum Verdict {
    Pass(String),
    Fail(String),
    NotAttempted(String),
}

fn grid_config(groups: Vec<GroupEntry>, suites: Vec<Suite>) -> SuiteConfig {
    SuiteConfig { groups, zetas: ZetaGrid::Dividing { all_dividing: 12 }, suites, ..SuiteConfig::default() }
}

/// Pass iff no entry of the given suites failed, errored or hit a cap.
fn judge(report: &SuiteReport, suites: &[Suite], allow_skip: impl Fn(&eigencm::verify::SuiteEntry) -> bool) -> Verdict {
    let rows: Vec<_> = report.entries.iter().filter(|e| suites.contains(&e.suite)).collect();
    let pass = rows.iter().filter(|e| e.status == Status::Pass).count();
    let skipped: Vec<_> = rows.iter().filter(|e| e.status == Status::Skipped).collect();
    let bad: Vec<_> = rows.iter().filter(|e| matches!(e.status, Status::Fail | Status::Error | Status::Cap)).collect();
    if let Some(e) = bad.first() {
        let z = e.zeta.map_or("-".into(), |z| z.to_string());
        return Verdict::Fail(format!("{} ζ={z} {}: {:?} {}", e.group, e.suite, e.status, e.detail));
    }
    if let Some(e) = skipped.iter().find(|e| !allow_skip(e)) {
        return Verdict::Fail(format!("unexpected skip: {} {} {}", e.group, e.suite, e.detail));
    }
    if pass == 0 {
        return Verdict::Fail("no entries ran".into());
    }
    Verdict::Pass(format!("{pass} checks passed, {} skipped", skipped.len()))
}

fn reproduce(case: &str) -> Verdict {
    let out = Command::new(env!("CARGO_BIN_EXE_eigencm"))
        .args(["reproduce", "--case", case, "--no-cache", "--format", "json"])
        .output()
        .expect("run the binary");
    let doc: Value = match serde_json::from_slice(&out.stdout) {
        Ok(v) => v,
        Err(e) => return Verdict::Fail(format!("bad output ({e}); stderr: {}", String::from_utf8_lossy(&out.stderr))),
    };
    let row = &doc["rows"][0];
    let summary = format!(
        "expected Z^{} in degree {}, computed Z^{} with support {} in {}s",
        row["expected_rank"], row["expected_degree"], row["computed_rank"], row["computed_support"], row["seconds"]
    );
    if out.status.code() == Some(0) && row["match"] == Value::Bool(true) && row["torsion_free"] == Value::Bool(true) {
        Verdict::Pass(summary)
    } else {
        Verdict::Fail(format!("exit {:?}; {summary}", out.status.code()))
    }
}

fn criterion_4() -> Verdict {
    if std::env::var("EIGENCM_ACCEPT_E7").as_deref() != Ok("1") {
        return Verdict::NotAttempted("stretch goal; set EIGENCM_ACCEPT_E7=1 to run".into());
    }
    match reproduce("e7-omega") {
        Verdict::Fail(m) => Verdict::NotAttempted(format!("did not complete or match: {m}")),
        v => v,
    }
}

/// Every eigenspace poset on the grid, full and reduced.
fn grid_posets() -> Vec<(String, Poset<Subspace>)> {
    let mut out = Vec::new();
    for entry in monomial_grid(4, 3) {
        let spec = entry.resolve().expect("grid spec");
        let table = GroupTable::enumerate(&spec).expect("grid group");
        for z in RootSpec::all_dividing(12) {
            let ep = build_eigen_poset(&table, z).expect("eigenposet");
            let label = format!("{} ζ={z}", spec.name());
            out.push((format!("{label} reduced"), reduce_poset(ep.poset())));
            out.push((label, ep.poset().clone()));
        }
    }
    out
}

fn criterion_12() -> Verdict {
    let posets = grid_posets();
    let (mut snf, mut cm) = (0, 0);
    for (label, p) in &posets {
        match order_complex_with_cap(p, 100_000) {
            Ok(c) => {
                let direct = reduced_homology_with(&c, Pipeline::Direct).expect("homology");
                let reduced = reduced_homology_with(&c, Pipeline::Reduced).expect("homology");
                if direct != reduced {
                    return Verdict::Fail(format!("{label}: reduction changed the homology"));
                }
                if direct.bettis() != rational_bettis(&c) {
                    return Verdict::Fail(format!("{label}: SNF and ℚ-rank Betti numbers differ"));
                }
                snf += 1;
                // Chains including the empty one.
                if c.simplex_count() < 10_000 {
                    let a = cm_by_definition(p, CmRing::Integers, 10_000).expect("definitional");
                    let b = cm_by_garst(p, CmRing::Integers).expect("recursive");
                    if a.is_cm != b.is_cm {
                        return Verdict::Fail(format!("{label}: definitional and recursive CM checks disagree"));
                    }
                    cm += 1;
                }
            }
            Err(HomologyError::CapExceeded { .. }) => continue,
            Err(e) => return Verdict::Fail(format!("{label}: {e}")),
        }
    }
    let mut groups: Vec<String> = ["A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "B5", "D4", "D5", "E6", "F4", "G2", "H3", "H4", "I2(5)", "I2(8)", "K5"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    groups.extend(monomial_grid(6, 3).into_iter().filter_map(|e| match e {
        GroupEntry::Name(n) => Some(n),
        GroupEntry::Spec(_) => None,
    }));
    if std::env::var("EIGENCM_ACCEPT_E7_MOLIEN").as_deref() == Ok("1") {
        groups.push("E7".into());
    }
    for name in &groups {
        let table = GroupTable::enumerate(&GroupSpec::named(name).expect("shipped")).expect("enumerate");
        let d = molien_degrees(&table).expect("degrees");
        if d.product() != d.order as u128 || d.codegree_sum() != d.reflections as u64 {
            return Verdict::Fail(format!("{name}: degrees {:?} inconsistent with order {} / {} reflections", d.degrees, d.order, d.reflections));
        }
    }
    Verdict::Pass(format!(
        "SNF = ℚ-rank and reduction invariant on {snf} complexes; CM oracles agree on {cm} posets; Molien degrees consistent on {} groups (E8 excluded)",
        groups.len()
    ))
}

fn main() {
    let t0 = Instant::now();
    let grid = run_suites(&grid_config(monomial_grid(4, 3), Suite::ALL.to_vec())).expect("grid suites");
    let e6 = run_suites(&grid_config(
        vec![GroupEntry::Name("E6".into())],
        vec![Suite::MaximalDims, Suite::MaximalOrbit, Suite::Closure, Suite::Connectivity],
    ))
    .expect("E6 suites");
    let g224 = run_suites(&grid_config(vec![GroupEntry::Name("G(2,2,4)".into())], vec![Suite::Int4])).expect("G(2,2,4)");
    let extra = run_suites(&grid_config(
        ["G(2,1,4)", "G(3,3,4)", "F4", "H3"].iter().map(|s| GroupEntry::Name(s.to_string())).collect(),
        vec![Suite::Concentration, Suite::Connectivity, Suite::ReflectionIntersection],
    ))
    .expect("extra suites");

    let short_length = |e: &eigencm::verify::SuiteEntry| e.suite == Suite::Connectivity;
    let inessential = |e: &eigencm::verify::SuiteEntry| e.suite == Suite::Int4 && e.detail["common_fixed_dim"].as_u64().is_some_and(|d| d > 0);
    let none = |_: &eigencm::verify::SuiteEntry| false;

    type Check<'a> = (u32, &'a str, Box<dyn Fn() -> Verdict + 'a>);
    let checks: Vec<Check> = vec![
        (1, "K5, ζ=ω: Z^364 in degree 2", Box::new(|| reproduce("k5-omega"))),
        (2, "E6, ζ=−1: Z^475 in degree 3", Box::new(|| reproduce("e6-minus1"))),
        (3, "E6, ζ=ω: Z^649 in degree 2", Box::new(|| reproduce("e6-omega"))),
        (4, "E7, ζ=ω: Z^87751 in degree 2 (stretch)", Box::new(criterion_4)),
        (5, "Cohen-Macaulay over Z on the G(r,p,n) grid", Box::new(|| judge(&grid, &[Suite::Cm], none))),
        (6, "maximal eigenspaces: dimension a(ζ), one orbit (grid + E6)", Box::new(|| {
            match judge(&grid, &[Suite::MaximalDims, Suite::MaximalOrbit], none) {
                Verdict::Pass(a) => match judge(&e6, &[Suite::MaximalDims, Suite::MaximalOrbit], none) {
                    Verdict::Pass(b) => Verdict::Pass(format!("grid: {a}; E6: {b}")),
                    v => v,
                },
                v => v,
            }
        })),
        (7, "ζ=1 poset equals the intersection lattice, geometric", Box::new(|| judge(&grid, &[Suite::FixedLattice], none))),
        (8, "four posets agree; lower ideals for maximal elements", Box::new(|| judge(&grid, &[Suite::FourPosets, Suite::LowerIdeal], none))),
        (9, "closure under pairwise intersection", Box::new(|| {
            match (judge(&grid, &[Suite::Closure], none), judge(&e6, &[Suite::Closure], none)) {
                (Verdict::Pass(a), Verdict::Pass(b)) => Verdict::Pass(format!("grid: {a}; E6: {b}")),
                (Verdict::Pass(_), v) | (v, _) => v,
            }
        })),
        (10, "coset elements without fixed vectors, incl. G(2,2,4) e=2", Box::new(|| {
            let e = g224.entries.first().expect("entry");
            let diag = e.detail["cosets"].as_array().is_some_and(|c| c.iter().any(|x| x["coset"].as_str().is_some_and(|s| s.contains("[e=2]"))));
            match judge(&grid, &[Suite::Int4], inessential) {
                Verdict::Pass(a) if e.status == Status::Pass && diag => Verdict::Pass(format!("grid: {a}; G(2,2,4) with e=2")),
                Verdict::Pass(_) => Verdict::Fail(format!("G(2,2,4): {:?} {}", e.status, e.detail)),
                v => v,
            }
        })),
        (11, "homology concentration, connectivity, reflection intersections", Box::new(|| {
            let suites = [Suite::Concentration, Suite::Connectivity, Suite::ReflectionIntersection];
            match (judge(&grid, &suites, short_length), judge(&extra, &suites, short_length), judge(&e6, &[Suite::Connectivity], short_length)) {
                (Verdict::Pass(a), Verdict::Pass(b), Verdict::Pass(c)) => Verdict::Pass(format!("grid: {a}; rank 4: {b}; E6 connectivity: {c}")),
                (Verdict::Pass(_), Verdict::Pass(_), v) | (Verdict::Pass(_), v, _) | (v, _, _) => v,
            }
        })),
        (12, "independent oracles: SNF vs ℚ, reduction, CM, Molien", Box::new(criterion_12)),
    ];

    let mut failed = 0;
    for (n, what, check) in checks {
        let t = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Verdict::Fail("panicked".into()));
        let (tag, msg) = match verdict {
            Verdict::Pass(m) => ("PASS", m),
            Verdict::Fail(m) => {
                failed += 1;
                ("FAIL", m)
            }
            Verdict::NotAttempted(m) => ("NOT ATTEMPTED", m),
        };
        println!("criterion {n:>2} {tag:<13} {what} — {msg} [{:.1}s]", t.elapsed().as_secs_f64());
    }
    println!("acceptance: {failed} failed, total {:.1}s", t0.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
