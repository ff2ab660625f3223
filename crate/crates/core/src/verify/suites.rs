use std::collections::BTreeSet;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cyclo::Cyclotomic;
use crate::eigenposet::{
    build_eigen_poset, build_group_poset, check_four_posets, check_reducible_iso, closure_exact, eigenspaces_of,
    fixed_spaces, intersection_lattice, lower_ideal_iso, verify_existence_int4, EigenError, EigenPoset,
};
use crate::groups::{
    a_zeta, molien_degrees, reflections, CosetTwist, GroupError, GroupKind, GroupSpec, GroupTable, RootSpec, MAX_RANK,
};
use crate::homology::{cm_by_intervals, homology_concentration_with_cap, CmRing, HomologyError};
use crate::linalg::{LinalgError, Matrix, Subspace};
use crate::par;
use crate::posets::{LatticeReport, Poset, PosetError};

use super::{Caps, Status};

#[derive(Debug, thiserror::Error)]
pub(super) enum SuiteError {
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("{0}")]
    Other(String),
}

impl SuiteError {
    pub(super) fn status(&self) -> Status {
        match self {
            SuiteError::Group(GroupError::CapExceeded { .. })
            | SuiteError::Eigen(EigenError::Group(GroupError::CapExceeded { .. }))
            | SuiteError::Homology(HomologyError::CapExceeded { .. }) => Status::Cap,
            _ => Status::Error,
        }
    }
}

pub(super) struct Outcome {
    pub status: Status,
    pub detail: Value,
    pub f_vector: Option<Vec<usize>>,
}

impl Outcome {
    fn new(pass: bool, detail: Value) -> Self {
        Outcome { status: if pass { Status::Pass } else { Status::Fail }, detail, f_vector: None }
    }

    fn skipped(reason: &str) -> Self {
        Outcome { status: Status::Skipped, detail: json!({ "reason": reason }), f_vector: None }
    }
}

type SuiteResult = Result<Outcome, SuiteError>;

/// Per-group data shared by every suite and root of unity.
pub(super) struct GroupCtx {
    pub spec: GroupSpec,
    pub table: GroupTable,
    fixed: OnceLock<Result<Vec<Subspace>, String>>,
    degrees: OnceLock<Result<Vec<u32>, String>>,
}

impl GroupCtx {
    pub fn new(spec: GroupSpec, table: GroupTable) -> Self {
        GroupCtx { spec, table, fixed: OnceLock::new(), degrees: OnceLock::new() }
    }

    fn fixed(&self) -> Result<&[Subspace], SuiteError> {
        self.fixed
            .get_or_init(|| fixed_spaces(&self.table).map_err(|e| e.to_string()))
            .as_deref()
            .map_err(|e| SuiteError::Other(e.clone()))
    }

    fn degrees(&self) -> Result<&[u32], SuiteError> {
        self.degrees
            .get_or_init(|| molien_degrees(&self.table).map(|d| d.degrees).map_err(|e| e.to_string()))
            .as_deref()
            .map_err(|e| SuiteError::Other(e.clone()))
    }
}

fn dims(ep: &EigenPoset, idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|&i| ep.subspace(i).dim()).collect()
}

pub(super) fn cm(ep: &EigenPoset) -> SuiteResult {
    let cert = cm_by_intervals(ep.poset(), CmRing::Integers)?;
    let chain = cert.witness_chain.clone().unwrap_or_default();
    Ok(Outcome::new(
        cert.is_cm,
        json!({
            "intervals_checked": cert.checked,
            "witness_chain": cert.witness_chain,
            "witness_dims": dims(ep, &chain),
            "degree": cert.degree,
        }),
    ))
}

pub(super) fn four_posets(ctx: &GroupCtx, ep: &EigenPoset) -> SuiteResult {
    let fixed = ctx.fixed()?;
    let mut quotient_checked = 0;
    for e in 0..ep.len() {
        let r = check_four_posets(ep, &ctx.table, e, fixed)?;
        quotient_checked += r.quotient_fixed.is_some() as usize;
        if !r.pass {
            return Ok(Outcome::new(
                false,
                json!({ "element": e, "subspace": ep.subspace(e), "counterexample": r.counterexample }),
            ));
        }
    }
    Ok(Outcome::new(true, json!({ "checked": ep.len(), "quotient_checked": quotient_checked })))
}

pub(super) fn closure(ep: &EigenPoset, caps: &Caps) -> SuiteResult {
    if ep.len() <= caps.exact_closure {
        return Ok(match closure_exact(ep) {
            Ok(()) => Outcome::new(true, json!({ "method": "exact" })),
            Err(EigenError::NotClosed(i, j)) => Outcome::new(
                false,
                json!({ "method": "exact", "pair": [i, j], "subspaces": [ep.subspace(i), ep.subspace(j)] }),
            ),
            Err(e) => return Err(e.into()),
        });
    }
    // the build refuses posets whose modular closure certificate fails
    Ok(Outcome::new(ep.closure_verified(), json!({ "method": "modular_certificate", "prime": ep.prime() })))
}

/// First element whose upper interval is not a geometric lattice.
pub(super) fn first_non_geometric<T: Clone + Sync>(p: &Poset<T>) -> Option<(usize, LatticeReport)> {
    (0..p.len()).map(|e| (e, p.above(e).lattice_report())).find(|(_, r)| !r.geometric)
}

pub(super) fn geometric_intervals<T: Clone + Sync>(p: &Poset<T>) -> Outcome {
    match first_non_geometric(p) {
        None => Outcome::new(true, json!({ "checked": p.len() })),
        Some((e, r)) => Outcome::new(false, json!({ "element": e, "report": r })),
    }
}

pub(super) fn fixed_lattice(ctx: &GroupCtx) -> SuiteResult {
    let s1 = build_group_poset(&ctx.table, RootSpec::new(0, 1))?;
    let lattice = intersection_lattice(&ctx.table)?;
    let same = s1.same_subspaces(lattice.items());
    let report = s1.poset().lattice_report();
    Ok(Outcome::new(
        same && report.geometric,
        json!({
            "fixed_spaces": s1.len(),
            "intersection_lattice": lattice.len(),
            "same_subspaces": same,
            "report": report,
        }),
    ))
}

pub(super) fn maximal_dims(ctx: &GroupCtx, ep: &EigenPoset) -> SuiteResult {
    if ctx.spec.twist.is_some() && ctx.spec.factors.is_none() {
        return Ok(Outcome::skipped("twisted spec without coset factors"));
    }
    let a = a_zeta(&ctx.spec, ctx.degrees()?, ep.zeta())?;
    let found: BTreeSet<usize> = dims(ep, &ep.maximal_eigenspaces()).into_iter().collect();
    Ok(Outcome::new(
        found.iter().all(|&d| d == a),
        json!({ "a_zeta": a, "dims": found, "count": ep.maximal_eigenspaces().len() }),
    ))
}

pub(super) fn maximal_orbit(ctx: &GroupCtx, ep: &EigenPoset) -> SuiteResult {
    let maxes: BTreeSet<Subspace> = ep.maximal_eigenspaces().iter().map(|&i| ep.subspace(i).clone()).collect();
    let gens = ctx.spec.generators();
    let start = maxes.iter().next().expect("posets are nonempty").clone();
    let mut orbit = BTreeSet::from([start.clone()]);
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let images: Vec<Subspace> = par::map(&frontier, |s| gens.iter().map(|g| s.image(g)).collect::<Vec<_>>())
            .into_iter()
            .flatten()
            .collect();
        frontier.clear();
        for s in images {
            if !maxes.contains(&s) {
                return Ok(Outcome::new(false, json!({ "image_not_maximal": s })));
            }
            if orbit.insert(s.clone()) {
                frontier.push(s);
            }
        }
    }
    let missing = maxes.difference(&orbit).next();
    Ok(Outcome::new(
        missing.is_none(),
        json!({ "maximal": maxes.len(), "orbit": orbit.len(), "outside_orbit": missing }),
    ))
}

pub(super) fn lower_ideal(ctx: &GroupCtx, ep: &EigenPoset) -> SuiteResult {
    for e in 0..ep.len() {
        let r = lower_ideal_iso(ep, &ctx.table, e)?;
        if !r.pass {
            return Ok(Outcome::new(false, json!({ "element": e, "subspace": ep.subspace(e), "report": r })));
        }
    }
    Ok(Outcome::new(true, json!({ "checked": ep.len() })))
}

/// Twists tried for an untwisted group: scalars of order ≤ 6, and the
/// diagonal twists for every `e > 1` dividing `p`.
fn int4_twists(spec: &GroupSpec) -> Vec<GroupSpec> {
    if spec.twist.is_some() {
        return vec![spec.clone()];
    }
    let mut out: Vec<GroupSpec> = (1..=6u32)
        .flat_map(|n| (0..n as i64).filter(move |&k| num_integer::gcd(k, n as i64) == 1).map(move |k| (k, n)))
        .map(|(k, n)| spec.clone().with_twist(CosetTwist::Scalar(RootSpec::new(k, n))))
        .collect();
    if let GroupKind::Monomial { p, .. } = spec.kind {
        out.extend((2..=p).filter(|e| p % e == 0).map(|e| spec.clone().with_twist(CosetTwist::DiagonalCase1 { e })));
    }
    out
}

pub(super) fn int4(ctx: &GroupCtx, caps: &Caps) -> SuiteResult {
    let mut found = Vec::new();
    for ts in int4_twists(&ctx.spec) {
        let table = GroupTable::enumerate_with_cap(&ts, caps.elements)?;
        match verify_existence_int4(&table) {
            Ok(Some(h)) => found.push(json!({ "coset": ts.name(), "witness": h })),
            Ok(None) => return Ok(Outcome::new(false, json!({ "coset": ts.name(), "witness": null }))),
            Err(EigenError::NotEssential(d)) => {
                return Ok(Outcome {
                    status: Status::Skipped,
                    detail: json!({ "reason": "group does not act essentially", "common_fixed_dim": d }),
                    f_vector: None,
                })
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Outcome::new(true, json!({ "cosets": found })))
}

pub(super) fn concentration(ep: &EigenPoset, caps: &Caps) -> SuiteResult {
    let reduced = ep.reduce();
    let rep = homology_concentration_with_cap(&reduced.poset, caps.simplices)?;
    let bettis: Vec<Value> = rep
        .homology
        .degrees
        .iter()
        .filter(|d| !d.is_zero())
        .map(|d| json!({ "degree": d.dim, "betti": d.betti, "torsion": d.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>() }))
        .collect();
    Ok(Outcome {
        f_vector: Some(rep.homology.f_vector.clone()),
        ..Outcome::new(rep.concentrated, json!({ "length": rep.length, "top_betti": rep.top_betti, "nonzero": bettis }))
    })
}

pub(super) fn connectivity(ep: &EigenPoset) -> SuiteResult {
    let reduced = ep.reduce().poset;
    let length = reduced.length();
    if length <= 0 {
        return Ok(Outcome::skipped("reduced poset has length ≤ 0"));
    }
    let components = reduced.components().len();
    Ok(Outcome::new(components == 1, json!({ "length": length, "components": components })))
}

pub(super) fn reflection_intersection(ctx: &GroupCtx, ep: &EigenPoset, caps: &Caps) -> SuiteResult {
    if ctx.table.order() > caps.reflection_group_order {
        return Ok(Outcome::skipped("group exceeds the exhaustive-check order cap"));
    }
    let refl: Vec<Matrix> = reflections(&ctx.table).into_iter().map(|i| ctx.table.matrix(i)).collect();
    let results = par::map(ep.subspaces(), |x| -> Result<(usize, Option<Value>), LinalgError> {
        let mut checked = 0;
        for (ri, r) in refl.iter().enumerate() {
            let rx = x.image(r);
            if &rx == x {
                continue;
            }
            checked += 1;
            let d = rx.intersect(x)?.dim();
            if d + 1 != x.dim() {
                return Ok((checked, Some(json!({ "subspace": x, "reflection": ri, "intersection_dim": d }))));
            }
        }
        Ok((checked, None))
    });
    let mut checked = 0;
    for r in results {
        let (c, bad) = r?;
        checked += c;
        if let Some(w) = bad {
            return Ok(Outcome::new(false, w));
        }
    }
    Ok(Outcome::new(true, json!({ "reflections": refl.len(), "pairs_checked": checked })))
}

fn direct_sum(a: &Subspace, b: &Subspace) -> Subspace {
    let (n, m) = (a.ambient_dim(), b.ambient_dim());
    let mut vecs: Vec<Vec<Cyclotomic>> = Vec::new();
    for r in a.basis_rows() {
        let mut v = r.clone();
        v.resize(n + m, Cyclotomic::zero());
        vecs.push(v);
    }
    for r in b.basis_rows() {
        let mut v = vec![Cyclotomic::zero(); n];
        v.extend(r.iter().cloned());
        vecs.push(v);
    }
    Subspace::span(n + m, vecs)
}

fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, m) = (a.rows(), b.rows());
    let mut out = Matrix::zeros(n + m, n + m);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, a.get(i, j).clone());
        }
    }
    for i in 0..m {
        for j in 0..m {
            out.set(n + i, n + j, b.get(i, j).clone());
        }
    }
    out
}

pub(super) fn product(ctx: &GroupCtx, ep: &EigenPoset, caps: &Caps) -> SuiteResult {
    if ctx.spec.twist.is_some() {
        return Ok(Outcome::skipped("twisted spec"));
    }
    let n = ctx.spec.rank();
    if n + 1 > MAX_RANK {
        return Ok(Outcome::skipped("rank too large for the extra factor"));
    }
    let one = Matrix::identity(1);
    let minus = Matrix::scalar(1, &Cyclotomic::from_i64(-1));
    let mut gens: Vec<Matrix> = ctx.spec.generators().iter().map(|g| block_diag(g, &one)).collect();
    gens.push(block_diag(&Matrix::identity(n), &minus));
    let spec = GroupSpec::explicit(n + 1, gens, Some(&format!("{} x G(2,1,1)", ctx.spec.name())));
    let table = GroupTable::enumerate_with_cap(&spec, caps.elements)?;
    let whole = build_eigen_poset(&table, ep.zeta())?;
    let small: BTreeSet<Subspace> = eigenspaces_of(&[one, minus], &ep.zeta().value()).into_iter().collect();
    let expected: BTreeSet<Subspace> =
        ep.subspaces().iter().flat_map(|e| small.iter().map(move |f| direct_sum(e, f))).collect();
    let got: BTreeSet<Subspace> = whole.subspaces().iter().cloned().collect();
    let witness = expected.symmetric_difference(&got).next();
    Ok(Outcome::new(
        witness.is_none() && expected.len() == ep.len() * small.len(),
        json!({
            "product_size": whole.len(),
            "factor_sizes": [ep.len(), small.len()],
            "difference": witness,
        }),
    ))
}

pub(super) fn reducible_iso(ctx: &GroupCtx, zetas: &[RootSpec]) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let order = ctx.table.order();
    let mut checked = 0;
    for blocks in 1..=3 {
        let tuples: Vec<Vec<usize>> =
            (0..20).map(|_| (0..blocks).map(|_| rng.gen_range(0..order)).collect()).collect();
        let r = check_reducible_iso(&ctx.table, blocks, &tuples, zetas)?;
        checked += r.checked;
        if !r.pass() {
            return Ok(Outcome::new(false, json!({ "blocks": blocks, "mismatch": r.mismatches[0] })));
        }
    }
    Ok(Outcome::new(true, json!({ "checked": checked })))
}
