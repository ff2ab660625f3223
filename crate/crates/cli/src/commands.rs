//! Subcommand implementations. Each returns a JSON document with a `schema`
//! field, an optional human rendering, and an exit code.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde_json::{json, Map, Value};

use eigencm::eigenposet::{build_eigen_poset, export_poset, reduce_poset, EigenError};
use eigencm::groups::{a_zeta, molien_degrees, GroupError, GroupSpec, GroupTable, RootSpec};
use eigencm::homology::{
    cm_by_definition, cm_by_garst, cm_by_intervals, poset_homology_with_cap, CmCertificate, CmRing, HomologyError,
    HomologyResult,
};
use eigencm::linalg::Subspace;
use eigencm::posets::{read_hasse, write_hasse, Poset, PosetError};
use eigencm::verify::reproduce::{self, PaperCase};
use eigencm::verify::{run_suites, SuiteConfig, VerifyError};

use crate::cache::Cache;
use crate::{Cli, CliError, Command, GroupArgs, Outcome, PosetArgs, StrategyArg};

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            GroupError::Parse { .. }
            | GroupError::UnknownGroup(_)
            | GroupError::InvalidSpec(_)
            | GroupError::MissingFactors => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<EigenError> for CliError {
    fn from(e: EigenError) -> Self {
        match e {
            EigenError::Group(g) => g.into(),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<HomologyError> for CliError {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<PosetError> for CliError {
    fn from(e: PosetError) -> Self {
        CliError::Failure(e.to_string())
    }
}

struct Ctx {
    cache: Cache,
    element_cap: usize,
    simplex_cap: usize,
    verbose: bool,
}

impl Ctx {
    fn progress(&self, msg: impl AsRef<str>) {
        if self.verbose {
            eprintln!("[eigencm] {}", msg.as_ref());
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    let dir = if g.no_cache { None } else { g.cache_dir.clone().or_else(Cache::default_dir) };
    let ctx = Ctx { cache: Cache::new(dir), element_cap: g.element_cap, simplex_cap: g.simplex_cap, verbose: g.verbose };
    if ctx.element_cap == 0 || ctx.simplex_cap == 0 {
        return Err(CliError::Usage("caps must be positive".into()));
    }
    match &cli.command {
        Command::GroupInfo { group, zetas } => group_info(&ctx, group, zetas),
        Command::Poset(args) => poset(&ctx, args),
        Command::Homology(args) => homology(&ctx, args),
        Command::Cm { poset, strategy, check_oracle, max_chains } => cm(&ctx, poset, *strategy, *check_oracle, *max_chains),
        Command::Reproduce { case } => reproduce_cases(&ctx, case),
        Command::Verify { config, sabotage, report } => verify(cli, config.as_deref(), *sabotage, report.as_deref()),
    }
}

fn resolve_spec(g: &GroupArgs) -> Result<GroupSpec, CliError> {
    let spec = match (&g.spec, &g.group) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            GroupSpec::from_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        (None, Some(name)) => GroupSpec::named(name)?,
        _ => return Err(CliError::Usage("give a group spec file or --group NAME".into())),
    };
    spec.validate()?;
    Ok(spec)
}

fn enumerate(ctx: &Ctx, spec: &GroupSpec) -> Result<GroupTable, CliError> {
    ctx.progress(format!("enumerating {}", spec.name()));
    Ok(GroupTable::enumerate_with_cap(spec, ctx.element_cap)?)
}

fn group_info(ctx: &Ctx, g: &GroupArgs, zetas: &[RootSpec]) -> Result<Outcome, CliError> {
    let spec = resolve_spec(g)?;
    let table = enumerate(ctx, &spec)?;
    let d = molien_degrees(&table)?;
    let roots: Vec<RootSpec> = if zetas.is_empty() {
        let mut ds = d.degrees.clone();
        ds.dedup();
        ds.into_iter().map(|n| RootSpec::new(1, n)).collect()
    } else {
        zetas.iter().map(|z| z.reduced()).collect()
    };
    let a: Vec<Value> = roots
        .iter()
        .map(|&z| {
            let v = a_zeta(&spec, &d.degrees, z).map_or(Value::Null, |a| json!(a));
            json!({ "zeta": z.to_string(), "a": v })
        })
        .collect();
    let consistent = d.product() == d.order as u128 && d.codegree_sum() == d.reflections as u64;
    let value = json!({
        "schema": "eigencm.group-info.v1",
        "name": spec.name(),
        "rank": spec.rank(),
        "order": d.order,
        "reflections": d.reflections,
        "degrees": d.degrees,
        "degree_product": d.product().to_string(),
        "reflection_count_from_degrees": d.codegree_sum(),
        "consistent": consistent,
        "twisted": table.has_twist(),
        "content_hash": spec.content_hash(),
        "a_zeta": a,
    });
    let code = if consistent { 0 } else { 1 };
    Ok(Outcome { value, pretty: None, code })
}

/// A poset ready for topology: from a group and ζ, or from a Hasse file.
struct Loaded {
    meta: Map<String, Value>,
    shape: Poset<()>,
    subspaces: Option<Poset<Subspace>>,
    key: Option<(GroupSpec, RootSpec)>,
    reduced: bool,
}

fn build_poset(ctx: &Ctx, spec: &GroupSpec, zeta: RootSpec) -> Result<(Poset<Subspace>, Map<String, Value>), CliError> {
    let mut meta = Map::new();
    meta.insert("group".into(), json!(spec.name()));
    meta.insert("zeta".into(), json!(zeta.to_string()));
    if let Some(p) = ctx.cache.load_poset(spec, zeta) {
        ctx.progress("poset loaded from cache");
        meta.insert("cached".into(), json!(true));
        meta.insert("elements".into(), Value::Null);
        return Ok((p, meta));
    }
    let table = enumerate(ctx, spec)?;
    ctx.progress(format!("{} elements; building the ζ={zeta} poset", table.order()));
    let ep = build_eigen_poset(&table, zeta)?;
    if let Err(e) = ctx.cache.store_poset(spec, zeta, ep.poset()) {
        eprintln!("warning: could not write the cache: {e}");
    }
    meta.insert("cached".into(), json!(false));
    meta.insert("elements".into(), json!(table.order()));
    Ok((ep.poset().clone(), meta))
}

fn load(ctx: &Ctx, args: &PosetArgs) -> Result<Loaded, CliError> {
    let (shape, subspaces, mut meta, key) = match &args.hasse {
        Some(path) => {
            let f = std::fs::File::open(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let p = read_hasse(std::io::BufReader::new(f)).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            let mut meta = Map::new();
            meta.insert("source".into(), json!(path.display().to_string()));
            let p = p.map_items(|_| ());
            (if args.reduced { reduce_poset(&p) } else { p }, None, meta, None)
        }
        None => {
            let spec = resolve_spec(&args.group)?;
            let zeta = args.zeta.unwrap_or(RootSpec::new(0, 1)).reduced();
            let (p, meta) = build_poset(ctx, &spec, zeta)?;
            let p = if args.reduced { reduce_poset(&p) } else { p };
            (p.map_items(|_| ()), Some(p), meta, Some((spec, zeta)))
        }
    };
    meta.insert("reduced".into(), json!(args.reduced));
    if let Some(stem) = &args.export {
        export(stem, &meta, subspaces.as_ref(), &shape, key.as_ref().map(|k| k.1))?;
        meta.insert("exported".into(), json!(stem.display().to_string()));
    }
    Ok(Loaded { meta, shape, subspaces, key, reduced: args.reduced })
}

fn export(stem: &Path, meta: &Map<String, Value>, sub: Option<&Poset<Subspace>>, shape: &Poset<()>, zeta: Option<RootSpec>) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Failure(format!("export to {}: {e}", stem.display()));
    if let Some(parent) = stem.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(io)?;
    }
    match sub {
        Some(p) => export_poset(p, meta["group"].as_str().unwrap_or(""), zeta, stem).map_err(io),
        None => {
            let f = std::fs::File::create(stem.with_extension("hasse")).map_err(io)?;
            write_hasse(shape, std::io::BufWriter::new(f)).map_err(io)
        }
    }
}

fn poset_summary(p: &Poset<()>, sub: Option<&Poset<Subspace>>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("size".into(), json!(p.len()));
    m.insert("covers".into(), json!(p.cover_count()));
    m.insert("length".into(), json!(p.length()));
    m.insert("ranked".into(), json!(p.rank_info().is_ranked));
    m.insert("minimal".into(), json!(p.minimal().len()));
    m.insert("maximal".into(), json!(p.maximal().len()));
    m.insert("unique_min".into(), json!(p.unique_min().is_some()));
    m.insert("unique_max".into(), json!(p.unique_max().is_some()));
    if let Some(s) = sub {
        let top = s.items().iter().map(|x| x.dim()).max().unwrap_or(0);
        let mut dims = vec![0usize; top + 1];
        s.items().iter().for_each(|x| dims[x.dim()] += 1);
        m.insert("elements_by_dimension".into(), json!(dims));
    }
    m
}

fn poset(ctx: &Ctx, args: &PosetArgs) -> Result<Outcome, CliError> {
    let l = load(ctx, args)?;
    let mut v = Map::new();
    v.insert("schema".into(), json!("eigencm.poset-summary.v1"));
    v.extend(l.meta);
    v.extend(poset_summary(&l.shape, l.subspaces.as_ref()));
    Ok(Outcome { value: Value::Object(v), pretty: None, code: 0 })
}

fn compute_homology(ctx: &Ctx, l: &Loaded) -> Result<(HomologyResult, bool), CliError> {
    if let Some((spec, zeta)) = &l.key {
        if let Some(h) = ctx.cache.load_homology(spec, *zeta, l.reduced) {
            ctx.progress("homology loaded from cache");
            return Ok((h, true));
        }
    }
    ctx.progress(format!("order complex of a {}-element poset", l.shape.len()));
    let h = poset_homology_with_cap(&l.shape, ctx.simplex_cap)?;
    if let Some((spec, zeta)) = &l.key {
        if let Err(e) = ctx.cache.store_homology(spec, *zeta, l.reduced, &h) {
            eprintln!("warning: could not write the cache: {e}");
        }
    }
    Ok((h, false))
}

fn homology_json(h: &HomologyResult) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("f_vector".into(), json!(h.f_vector));
    m.insert("degrees".into(), json!(h.degrees));
    m.insert("betti".into(), json!(h.bettis()));
    m.insert("support".into(), json!(h.support()));
    m.insert("torsion_free".into(), json!(!h.has_torsion()));
    m.insert("reduced_euler_characteristic".into(), json!(h.euler_characteristic().to_string()));
    m
}

fn describe(h: &HomologyResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "f-vector: {:?}", h.f_vector);
    let nonzero: Vec<_> = h.degrees.iter().filter(|d| !d.is_zero()).collect();
    if nonzero.is_empty() {
        let _ = writeln!(out, "reduced homology vanishes");
    }
    for d in nonzero {
        let mut parts = Vec::new();
        if d.betti > 0 {
            parts.push(format!("Z^{}", d.betti));
        }
        parts.extend(d.torsion.iter().map(|t| format!("Z/{t}")));
        let _ = writeln!(out, "H~_{} = {}", d.dim, parts.join(" + "));
    }
    out
}

fn homology(ctx: &Ctx, args: &PosetArgs) -> Result<Outcome, CliError> {
    let l = load(ctx, args)?;
    let (h, cached) = compute_homology(ctx, &l)?;
    let mut v = Map::new();
    v.insert("schema".into(), json!("eigencm.homology.v1"));
    v.extend(l.meta);
    v.insert("length".into(), json!(l.shape.length()));
    v.insert("homology_cached".into(), json!(cached));
    v.extend(homology_json(&h));
    Ok(Outcome { value: Value::Object(v), pretty: Some(describe(&h)), code: 0 })
}

fn certificate(p: &Poset<()>, strategy: StrategyArg, max_chains: usize) -> Result<CmCertificate, CliError> {
    let ring = CmRing::Integers;
    Ok(match strategy {
        StrategyArg::Intervals => cm_by_intervals(p, ring)?,
        StrategyArg::Garst => cm_by_garst(p, ring)?,
        StrategyArg::Definition => cm_by_definition(p, ring, max_chains)?,
    })
}

fn cm(ctx: &Ctx, args: &PosetArgs, strategy: StrategyArg, oracle: bool, max_chains: usize) -> Result<Outcome, CliError> {
    let l = load(ctx, args)?;
    ctx.progress("checking Cohen-Macaulayness");
    let cert = certificate(&l.shape, strategy, max_chains)?;
    let mut v = Map::new();
    v.insert("schema".into(), json!("eigencm.cm.v1"));
    v.extend(l.meta);
    v.insert("certificate".into(), json!(cert));
    let mut code = 0;
    if oracle {
        let o = match cm_by_definition(&l.shape, CmRing::Integers, max_chains) {
            Ok(o) => {
                let agree = o.is_cm == cert.is_cm;
                if !agree {
                    code = 1;
                }
                json!({ "certificate": o, "agrees": agree })
            }
            Err(HomologyError::CapExceeded { cap }) => json!({ "skipped": format!("more than {cap} chains") }),
            Err(e) => return Err(e.into()),
        };
        v.insert("oracle".into(), o);
    }
    let verdict = if cert.is_cm { "Cohen-Macaulay over Z" } else { "not Cohen-Macaulay over Z" };
    let mut pretty = format!("{verdict} ({} subposets checked)\n", cert.checked);
    if let (Some(c), Some(d)) = (&cert.witness_chain, cert.degree) {
        let _ = writeln!(pretty, "witness chain {c:?}: link has homology in degree {d}");
    }
    Ok(Outcome { value: Value::Object(v), pretty: Some(pretty), code })
}

fn run_case(ctx: &Ctx, case: &PaperCase) -> Result<(Value, bool), CliError> {
    if case.experimental {
        eprintln!("note: {} is experimental; it may exceed memory or time on a desk machine", case.id);
    }
    let t = Instant::now();
    let spec = GroupSpec::named(case.group)?;
    let zeta = case.root();
    let (h, cached, elements) = match ctx.cache.load_homology(&spec, zeta, true) {
        Some(h) => (h, true, Value::Null),
        None => {
            let (full, meta) = build_poset(ctx, &spec, zeta)?;
            let shape = reduce_poset(&full).map_items(|_| ());
            let l = Loaded { meta, shape, subspaces: None, key: Some((spec.clone(), zeta)), reduced: true };
            let (h, _) = compute_homology(ctx, &l)?;
            (h, false, l.meta.get("elements").cloned().unwrap_or(Value::Null))
        }
    };
    let ok = case.matches(&h);
    let row = json!({
        "case": case.id,
        "group": case.group,
        "zeta": zeta.to_string(),
        "expected_degree": case.degree,
        "expected_rank": case.rank,
        "computed_support": h.support(),
        "computed_rank": h.betti(case.degree),
        "torsion_free": !h.has_torsion(),
        "match": ok,
        "f_vector": h.f_vector,
        "elements": elements,
        "cached": cached,
        "experimental": case.experimental,
        "seconds": (t.elapsed().as_secs_f64() * 100.0).round() / 100.0,
    });
    Ok((row, ok))
}

fn reproduce_cases(ctx: &Ctx, id: &str) -> Result<Outcome, CliError> {
    let id = id.trim().to_ascii_lowercase();
    if id.starts_with("e8") {
        return Err(CliError::Cap(reproduce::E8_REFUSAL.into()));
    }
    let cases: Vec<&PaperCase> = if id == "all-desk" {
        reproduce::DESK_CASES.iter().filter_map(|c| reproduce::case(c)).collect()
    } else {
        let known: Vec<&str> = reproduce::CASES.iter().map(|c| c.id).collect();
        vec![reproduce::case(&id).ok_or_else(|| {
            CliError::Usage(format!("unknown case {id:?}; expected one of {}, all-desk", known.join(", ")))
        })?]
    };
    let mut rows = Vec::new();
    let mut all = true;
    for c in cases {
        ctx.progress(format!("case {}", c.id));
        let (row, ok) = run_case(ctx, c)?;
        all &= ok;
        rows.push(row);
    }
    let mut pretty = format!("{:<10} {:<6} {:<5} {:>10} {:>12} {:>6} {:>9}\n", "case", "group", "zeta", "expected", "computed", "match", "seconds");
    for r in &rows {
        let _ = writeln!(
            pretty,
            "{:<10} {:<6} {:<5} {:>10} {:>12} {:>6} {:>9}",
            r["case"].as_str().unwrap_or(""),
            r["group"].as_str().unwrap_or(""),
            r["zeta"].as_str().unwrap_or(""),
            format!("Z^{} @{}", r["expected_rank"], r["expected_degree"]),
            format!("Z^{} {}", r["computed_rank"], r["computed_support"]),
            if r["match"] == json!(true) { "yes" } else { "NO" },
            r["seconds"].as_f64().unwrap_or(0.0),
        );
    }
    let value = json!({ "schema": "eigencm.reproduce.v1", "all_match": all, "rows": rows });
    Ok(Outcome { value, pretty: Some(pretty), code: if all { 0 } else { 1 } })
}

fn verify(cli: &Cli, config: Option<&Path>, sabotage: bool, report: Option<&Path>) -> Result<Outcome, CliError> {
    let mut cfg = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            SuiteConfig::from_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => SuiteConfig::default(),
    };
    cfg.sabotage |= sabotage;
    if cli.global.threads.is_some() {
        cfg.threads = cli.global.threads;
    }
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let r = run_suites(&cfg).map_err(|e| match e {
        VerifyError::Spec { source: GroupError::CapExceeded { .. }, .. } => CliError::Cap(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    })?;
    let value = serde_json::to_value(&r).expect("report serializes");
    if let Some(path) = report {
        let text = serde_json::to_string_pretty(&value).expect("json");
        std::fs::write(path, text).map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display())))?;
    }
    let code = if !r.all_pass() {
        1
    } else if r.counts.cap > 0 {
        3
    } else {
        0
    };
    Ok(Outcome { value, pretty: Some(r.summary_table()), code })
}
