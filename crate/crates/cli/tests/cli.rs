use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eigencm"))
        .args(args)
        .env("EIGENCM_CACHE_DIR", cache)
        .output()
        .expect("run the binary")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn group_info_reports_degrees() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["group-info", "--group", "G(2,1,2)", "--zeta", "1/2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "eigencm.group-info.v1");
    assert_eq!(v["order"], 8);
    assert_eq!(v["degrees"], serde_json::json!([2, 4]));
    assert_eq!(v["consistent"], true);
    assert_eq!(v["a_zeta"][0]["a"], 2);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["poset"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["poset", "--group", "Q7"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["reproduce", "--case", "nope"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["--threads", "0", "poset", "--group", "A2"], dir.path()).status.code(), Some(2));

    let spec = dir.path().join("bad.json");
    std::fs::write(&spec, "{\n  \"kind\": \"monomial\",\n  \"r\": 2,,\n}").unwrap();
    let out = run(&["poset", spec.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["schema"], "eigencm.error.v1");
    assert!(v["message"].as_str().unwrap().contains("line 3"), "{v}");
}

#[test]
fn caps_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["poset", "--group", "E6", "--zeta", "1/3", "--element-cap", "100", "--no-cache"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"], "cap");

    let out = run(&["homology", "--group", "B4", "--simplex-cap", "10", "--no-cache"], dir.path());
    assert_eq!(out.status.code(), Some(3));

    let out = run(&["reproduce", "--case", "e8-omega"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("E8"));
}

#[test]
fn homology_of_a_small_poset() {
    let dir = tempfile::tempdir().unwrap();
    // Reduced ζ=ω poset of G(3,1,2): four points.
    let out = run(&["homology", "--group", "G(3,1,2)", "--zeta", "1/3", "--reduced"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["f_vector"], serde_json::json!([5]));
    assert_eq!(v["betti"], serde_json::json!([0, 4]));
    assert_eq!(v["homology_cached"], false);
    let again = json(&run(&["homology", "--group", "G(3,1,2)", "--zeta", "1/3", "--reduced"], dir.path()));
    assert_eq!(again["homology_cached"], true);
    assert_eq!(again["betti"], v["betti"]);
}

#[test]
fn export_round_trips_through_hasse_input() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("out/b3");
    let stem_s = stem.to_str().unwrap();
    let built = json(&run(&["homology", "--group", "B3", "--zeta", "1/2", "--reduced", "--export", stem_s], dir.path()));
    assert!(stem.with_extension("hasse").exists() && stem.with_extension("json").exists());
    let hasse = stem.with_extension("hasse");
    let read = json(&run(&["homology", "--hasse", hasse.to_str().unwrap()], dir.path()));
    assert_eq!(built["f_vector"], read["f_vector"]);
    assert_eq!(built["degrees"], read["degrees"]);

    let side: Value = serde_json::from_str(&std::fs::read_to_string(stem.with_extension("json")).unwrap()).unwrap();
    assert_eq!(side["schema"], "eigencm.poset.v1");
    assert_eq!(side["group"], "B3");
}

#[test]
fn cm_with_oracle_agrees() {
    let dir = tempfile::tempdir().unwrap();
    for strategy in ["intervals", "garst", "definition"] {
        let out = run(&["cm", "--group", "G(4,2,2)", "--zeta", "1/4", "--strategy", strategy, "--check-oracle"], dir.path());
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["certificate"]["is_cm"], true);
        assert_eq!(v["oracle"]["agrees"], true);
    }
}

#[test]
fn output_does_not_depend_on_threads() {
    let dir = tempfile::tempdir().unwrap();
    let args = |t: &'static str| ["--threads", t, "--no-cache", "homology", "--group", "H3", "--zeta", "1/2", "--reduced"];
    let one = run(&args("1"), dir.path());
    let four = run(&args("4"), dir.path());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn verify_exit_codes_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"groups": ["G(2,1,2)", "G(3,1,2)"], "zetas": {"all_dividing": 6}}"#).unwrap();
    let report = dir.path().join("report.json");
    let out = run(&["verify", "--config", cfg.to_str().unwrap(), "--report", report.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["schema"], "eigencm.report.v1");
    assert_eq!(r["counts"]["fail"], 0);

    let out = run(&["verify", "--config", cfg.to_str().unwrap(), "--sabotage", "--format", "json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["counts"]["fail"], 1);

    let tsv = run(&["verify", "--config", cfg.to_str().unwrap(), "--format", "tsv"], dir.path());
    let text = String::from_utf8(tsv.stdout).unwrap();
    assert!(text.lines().next().unwrap().contains("suite\t") || text.lines().next().unwrap().contains("\tsuite"));

    std::fs::write(&cfg, r#"{"groups": ["G(2,1,2)"], "caps": {"simplices": 0}}"#).unwrap();
    assert_eq!(run(&["verify", "--config", cfg.to_str().unwrap()], dir.path()).status.code(), Some(2));

    std::fs::write(&cfg, r#"{"groups": ["E6"], "zetas": ["1/2"], "suites": ["concentration"], "caps": {"simplices": 50}}"#).unwrap();
    assert_eq!(run(&["verify", "--config", cfg.to_str().unwrap()], dir.path()).status.code(), Some(3));
}

#[test]
fn malformed_cache_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let first = json(&run(&["poset", "--group", "A3", "--zeta", "1/2"], dir.path()));
    for entry in walk(dir.path()) {
        std::fs::write(entry, "garbage").unwrap();
    }
    let second = json(&run(&["poset", "--group", "A3", "--zeta", "1/2"], dir.path()));
    assert_eq!(second["cached"], false);
    assert_eq!(first["size"], second["size"]);
    let third = json(&run(&["poset", "--group", "A3", "--zeta", "1/2"], dir.path()));
    assert_eq!(third["cached"], true);
    assert_eq!(first["covers"], third["covers"]);
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}

#[test]
fn shipped_examples_are_valid() {
    let dir = tempfile::tempdir().unwrap();
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let a = json(&run(&["group-info", root.join("specs/g312.json").to_str().unwrap()], dir.path()));
    let b = json(&run(&["group-info", root.join("specs/g312-matrices.json").to_str().unwrap()], dir.path()));
    assert_eq!(a["order"], 18);
    assert_eq!(a["degrees"], b["degrees"]);
    let out = run(&["verify", "--config", root.join("configs/cosets.json").to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    for cfg in ["configs/grid.json", "configs/e6.json"] {
        let text = std::fs::read_to_string(root.join(cfg)).unwrap();
        eigencm::verify::SuiteConfig::from_json(&text).unwrap().validate().unwrap();
    }
}
