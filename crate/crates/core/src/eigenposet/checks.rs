use std::collections::BTreeSet;

use serde::Serialize;

use crate::cyclo::Cyclotomic;
use crate::groups::{pointwise_stabilizer, setwise_and_pointwise_on, GroupTable, RootSpec};
use crate::linalg::{eigenspace, fp_eigenspace, kernel, Matrix, Subspace};
use crate::par;

use super::{build_group_poset, eigenspaces_of, hyperplanes, reverse_inclusion_poset, EigenError, EigenPoset};

#[derive(Debug, Clone, Serialize)]
pub struct FourPosetReport {
    pub element: usize,
    /// `{V(γh, ζ) ⊆ E}`.
    pub contained: Vec<Subspace>,
    /// `{V(γh, ζ) ∩ E}`.
    pub intersected: Vec<Subspace>,
    /// `{E ∩ Fix(x) : x ∈ G}`.
    pub fixed_in_e: Vec<Subspace>,
    /// Fixed spaces of `N(E)/C(E)` on `E`; computed only for maximal `E`.
    pub quotient_fixed: Option<Vec<Subspace>>,
    pub pass: bool,
    /// A subspace in one set but not another.
    pub counterexample: Option<Subspace>,
}

fn sorted(v: impl IntoIterator<Item = Subspace>) -> Vec<Subspace> {
    v.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

fn first_difference(a: &[Subspace], b: &[Subspace]) -> Option<Subspace> {
    let sa: BTreeSet<&Subspace> = a.iter().collect();
    let sb: BTreeSet<&Subspace> = b.iter().collect();
    sa.symmetric_difference(&sb).next().map(|s| (*s).clone())
}

/// Fixed spaces of `G` itself (ignoring any twist).
pub fn fixed_spaces(table: &GroupTable) -> Result<Vec<Subspace>, EigenError> {
    Ok(build_group_poset(table, RootSpec::new(0, 1))?.subspaces().to_vec())
}

/// Compares the three descriptions of the ideal of subspaces of `E`, plus the
/// quotient description when `E` is a maximal eigenspace. `fixed` must be the
/// fixed spaces of the group (see [`super::build_group_poset`]).
pub fn check_four_posets(
    ep: &EigenPoset,
    table: &GroupTable,
    element: usize,
    fixed: &[Subspace],
) -> Result<FourPosetReport, EigenError> {
    let e = ep.subspace(element);
    let contained = sorted(ep.poset().up_set(element).ones().map(|j| ep.subspace(j).clone()));
    let intersected = sorted(
        par::map(ep.subspaces(), |s| s.intersect(e))
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?,
    );
    let fixed_in_e = sorted(par::map(fixed, |f| f.intersect(e)).into_iter().collect::<Result<Vec<_>, _>>()?);

    let quotient_fixed = if ep.poset().lower_covers(element).is_empty() {
        let stab = setwise_and_pointwise_on(e, table)?;
        let set = if e.dim() == 0 {
            vec![e.clone()]
        } else {
            let coords = eigenspaces_of(&stab.quotient_elements, &Cyclotomic::one());
            coords.iter().map(|c| e.lift(c)).collect()
        };
        Some(sorted(set))
    } else {
        None
    };

    let mut counterexample = first_difference(&contained, &intersected)
        .or_else(|| first_difference(&contained, &fixed_in_e));
    if let Some(q) = &quotient_fixed {
        counterexample = counterexample.or_else(|| first_difference(&contained, q));
    }
    Ok(FourPosetReport {
        element,
        pass: counterexample.is_none(),
        contained,
        intersected,
        fixed_in_e,
        quotient_fixed,
        counterexample,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LowerIdealReport {
    pub element: usize,
    pub ideal_size: usize,
    pub coset_poset_size: usize,
    pub stabilizer_order: usize,
    pub pass: bool,
}

/// The elements containing `E` against the eigenspaces of the coset `x·G_E`,
/// where `x` is the witness of `E` and `G_E` its pointwise stabilizer.
pub fn lower_ideal_iso(ep: &EigenPoset, table: &GroupTable, element: usize) -> Result<LowerIdealReport, EigenError> {
    let e = ep.subspace(element);
    let x = ep.witness(element);
    let stab = pointwise_stabilizer(table, e)?;
    let zeta = ep.zeta().value();
    let spaces: Vec<Subspace> =
        par::map(&stab.elements, |&g| eigenspace(&table.coset_matrix(table.compose(x, g)), &zeta));
    let coset_poset = reverse_inclusion_poset(spaces)?;
    let ideal = ep.poset().below(element);
    let pass = coset_poset.items() == ideal.items() && coset_poset.cover_pairs() == ideal.cover_pairs();
    Ok(LowerIdealReport {
        element,
        ideal_size: ideal.len(),
        coset_poset_size: coset_poset.len(),
        stabilizer_order: stab.elements.len(),
        pass,
    })
}

/// Searches for `h` with `V(γh, 1) = {0}`; the group must act essentially.
pub fn verify_existence_int4(table: &GroupTable) -> Result<Option<usize>, EigenError> {
    let n = table.rank();
    let mut common = Subspace::full(n);
    for h in hyperplanes(table) {
        common = common.intersect(&h)?;
    }
    if common.dim() > 0 {
        return Err(EigenError::NotEssential(common.dim()));
    }
    let view = table.view();
    let map = view.map();
    let coset = table.has_twist();
    let candidates: Vec<usize> = par::map_chunks(table.order(), 4096, |range| {
        let mut buf = vec![0u64; n * n];
        range
            .filter(|&i| {
                table.modp_matrix_into(view, i, coset, &mut buf);
                fp_eigenspace(&buf, n, 1, map).dim() == 0
            })
            .take(1)
            .collect::<Vec<_>>()
    });
    for i in candidates {
        let x = table.coset_matrix(i);
        if kernel(&x.minus_scalar(&Cyclotomic::one())).dim() == 0 {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Serialize)]
pub struct ReducibleIsoReport {
    pub blocks: usize,
    pub checked: usize,
    /// `(tuple, ζ, dim V(γx, ζ), dim V(x_k⋯x_1, ζ^k))` for each disagreement.
    pub mismatches: Vec<(Vec<usize>, RootSpec, usize, usize)>,
}

impl ReducibleIsoReport {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// `V = V_1^k` with `γ` moving block `i` to block `i+1`. For each tuple of
/// base elements `x = (x_1, …, x_k)` acting blockwise, compares
/// `dim V(γx, ζ)` with `dim V(x_k⋯x_1, ζ^k)` on one block.
pub fn check_reducible_iso(
    base: &GroupTable,
    blocks: usize,
    tuples: &[Vec<usize>],
    zetas: &[RootSpec],
) -> Result<ReducibleIsoReport, EigenError> {
    let n = base.rank();
    let big = n * blocks;
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for t in tuples {
        assert_eq!(t.len(), blocks, "one base element per block");
        let mats: Vec<Matrix> = t.iter().map(|&i| base.matrix(i)).collect();
        // γx sends block i (acted on by x_i) to block i+1
        let mut gx = Matrix::zeros(big, big);
        for (b, m) in mats.iter().enumerate() {
            let target = (b + 1) % blocks;
            for r in 0..n {
                for c in 0..n {
                    gx.set(target * n + r, b * n + c, m.get(r, c).clone());
                }
            }
        }
        let mut prod = Matrix::identity(n);
        for m in &mats {
            prod = m.checked_mul(&prod)?;
        }
        for z in zetas {
            let lhs = eigenspace(&gx, &z.value()).dim();
            let zk = RootSpec::new(z.k * blocks as i64, z.n);
            let rhs = eigenspace(&prod, &zk.value()).dim();
            checked += 1;
            if lhs != rhs {
                mismatches.push((t.clone(), *z, lhs, rhs));
            }
        }
    }
    Ok(ReducibleIsoReport { blocks, checked, mismatches })
}

#[cfg(test)]
mod tests {
    use super::super::build_eigen_poset;
    use super::*;
    use crate::groups::{CosetTwist, GroupSpec};

    fn table(spec: GroupSpec) -> GroupTable {
        GroupTable::enumerate(&spec).unwrap()
    }

    #[test]
    fn four_posets_in_rank_two() {
        let t = table(GroupSpec::monomial(2, 1, 2));
        let fixed = fixed_spaces(&t).unwrap();
        let ep = build_eigen_poset(&t, RootSpec::new(0, 1)).unwrap();
        for e in 0..ep.len() {
            let r = check_four_posets(&ep, &t, e, &fixed).unwrap();
            assert!(r.pass, "{:?}", r.counterexample);
        }
        let max = ep.maximum();
        let r = check_four_posets(&ep, &t, max, &fixed).unwrap();
        assert_eq!(r.contained.len(), 1);
        assert!(r.contained[0].is_zero());
    }

    #[test]
    fn lower_ideals() {
        let t = table(GroupSpec::monomial(3, 1, 3));
        let ep = build_eigen_poset(&t, RootSpec::new(1, 3)).unwrap();
        for e in 0..ep.len() {
            assert!(lower_ideal_iso(&ep, &t, e).unwrap().pass, "element {e}");
        }
    }

    #[test]
    fn int4_witnesses() {
        let t = table(GroupSpec::monomial(2, 1, 2));
        let h = verify_existence_int4(&t).unwrap().unwrap();
        assert_eq!(t.coset_matrix(h), Matrix::scalar(2, &Cyclotomic::from_i64(-1)));
        let case1 = GroupSpec::monomial(2, 2, 4).with_twist(CosetTwist::DiagonalCase1 { e: 2 });
        assert!(verify_existence_int4(&table(case1)).unwrap().is_some());
        let scalar = GroupSpec::monomial(3, 3, 3).with_twist(CosetTwist::Scalar(RootSpec::new(1, 3)));
        assert!(verify_existence_int4(&table(scalar)).unwrap().is_some());
        let nonessential = GroupSpec::monomial(1, 1, 3);
        assert!(matches!(verify_existence_int4(&table(nonessential)), Err(EigenError::NotEssential(1))));
    }

    #[test]
    fn reducible_blocks() {
        let trivial = table(GroupSpec::monomial(1, 1, 1));
        let zetas: Vec<RootSpec> = (1..=6).flat_map(|n| (0..n as i64).map(move |k| RootSpec::new(k, n))).collect();
        let r = check_reducible_iso(&trivial, 3, &[vec![0, 0, 0]], &zetas).unwrap();
        assert!(r.pass());
        let t = table(GroupSpec::monomial(2, 1, 2));
        let tuples: Vec<Vec<usize>> = (0..t.order()).map(|i| vec![i, (i * 5 + 1) % t.order()]).collect();
        let r = check_reducible_iso(&t, 2, &tuples, &zetas).unwrap();
        assert!(r.pass(), "{:?}", r.mismatches);
    }
}
