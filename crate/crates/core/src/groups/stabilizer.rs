//! Pointwise and setwise stabilizers of subspaces.

use std::collections::HashSet;

use crate::cyclo::ModpMap;
use crate::linalg::{Matrix, Subspace};
use crate::par;

use super::degrees::reflections;
use super::spec::GroupSpec;
use super::table::{GroupTable, ModpView};
use super::GroupError;

/// `G_U = {g : Fix(g) ⊇ U}` together with the reflections it contains.
#[derive(Debug, Clone)]
pub struct Parabolic {
    pub elements: Vec<usize>,
    pub reflections: Vec<usize>,
    /// Whether the reflections whose hyperplanes contain U generate G_U.
    pub generated_by_reflections: bool,
}

fn modp_rows(s: &Subspace, map: &ModpMap) -> Option<Vec<Vec<u64>>> {
    s.basis_rows().iter().map(|r| r.iter().map(|x| map.image(x)).collect()).collect()
}

fn modp_apply(g: &[u64], v: &[u64], map: &ModpMap) -> Vec<u64> {
    let n = v.len();
    (0..n)
        .map(|r| (0..n).fold(0, |acc, k| map.add(acc, map.mul(g[r * n + k], v[k]))))
        .collect()
}

fn fixes_pointwise(table: &GroupTable, view: &ModpView, rows: Option<&[Vec<u64>]>, u: &Subspace, i: usize) -> bool {
    if let Some(rows) = rows {
        let g = table.modp_matrix(view, i, false);
        if rows.iter().any(|v| modp_apply(&g, v, view.map()) != *v) {
            return false;
        }
    }
    let m = table.matrix(i);
    u.basis_rows().iter().all(|v| m.mul_vec(v) == *v)
}

pub fn pointwise_stabilizer(table: &GroupTable, u: &Subspace) -> Result<Parabolic, GroupError> {
    if u.ambient_dim() != table.rank() {
        return Err(GroupError::InvalidSpec("subspace lives in a different space".into()));
    }
    let view = table.view_for(u.conductor().max(1));
    let rows = modp_rows(u, view.map());
    let elements: Vec<usize> = par::map_chunks(table.order(), 1024, |range| {
        range.filter(|&i| fixes_pointwise(table, &view, rows.as_deref(), u, i)).collect()
    });
    let member: HashSet<usize> = elements.iter().copied().collect();
    let refl: Vec<usize> = reflections(table).into_iter().filter(|r| member.contains(r)).collect();
    let generated = table.closure(&refl) == elements;
    Ok(Parabolic { elements, reflections: refl, generated_by_reflections: generated })
}

/// `N(E)`, `C(E)` and the reflection group `N(E)/C(E)` acting on `E`.
#[derive(Debug, Clone)]
pub struct SetwiseStabilizer {
    pub normalizer: Vec<usize>,
    pub centralizer: Vec<usize>,
    /// Distinct restrictions of N(E) to E, in the RREF basis of E.
    pub quotient_elements: Vec<Matrix>,
    /// The quotient as a group on ℂ^{dim E}; `None` when E = 0.
    pub quotient: Option<GroupSpec>,
    /// Whether the reflections among the restrictions generate the quotient.
    pub generated_by_reflections: bool,
}

pub fn setwise_and_pointwise_on(e: &Subspace, table: &GroupTable) -> Result<SetwiseStabilizer, GroupError> {
    if e.ambient_dim() != table.rank() {
        return Err(GroupError::InvalidSpec("subspace lives in a different space".into()));
    }
    let view = table.view_for(e.conductor().max(1));
    let map = view.map();
    let rows = modp_rows(e, map);
    let fp_e = rows.as_ref().and_then(|_| crate::linalg::FpSubspace::from_subspace(e, map));
    let normalizer: Vec<usize> = par::map_chunks(table.order(), 1024, |range| {
        range
            .filter(|&i| {
                if let (Some(rows), Some(fe)) = (&rows, &fp_e) {
                    let g = table.modp_matrix(&view, i, false);
                    if rows.iter().any(|v| !fe.contains_vector(&modp_apply(&g, v, map), map)) {
                        return false;
                    }
                }
                let m = table.matrix(i);
                e.basis_rows().iter().all(|v| e.contains_vector(&m.mul_vec(v)))
            })
            .collect()
    });
    let restrictions: Vec<Matrix> =
        par::map(&normalizer, |&i| e.restrict(&table.matrix(i)).expect("g stabilizes E"));
    let centralizer: Vec<usize> = normalizer
        .iter()
        .zip(&restrictions)
        .filter(|(_, r)| r.is_identity())
        .map(|(&i, _)| i)
        .collect();
    let mut seen = HashSet::new();
    let mut quotient_elements = Vec::new();
    for r in restrictions {
        if seen.insert(r.clone()) {
            quotient_elements.push(r);
        }
    }
    let d = e.dim();
    if d == 0 {
        return Ok(SetwiseStabilizer {
            normalizer,
            centralizer,
            quotient_elements,
            quotient: None,
            generated_by_reflections: true,
        });
    }
    let refl: Vec<Matrix> = quotient_elements
        .iter()
        .filter(|m| {
            let fixed = crate::linalg::fixed_space(m);
            fixed.dim() + 1 == d
        })
        .cloned()
        .collect();
    let by_refl = GroupSpec::explicit(d, refl, Some("N(E)/C(E)"));
    let generated = GroupTable::enumerate(&by_refl)?.order() == quotient_elements.len();
    let quotient = if generated {
        by_refl
    } else {
        GroupSpec::explicit(d, quotient_elements.clone(), Some("N(E)/C(E)"))
    };
    Ok(SetwiseStabilizer {
        normalizer,
        centralizer,
        quotient_elements,
        quotient: Some(quotient),
        generated_by_reflections: generated,
    })
}

/// Whether `g` maps the subspace onto itself.
pub fn stabilizes(g: &Matrix, s: &Subspace) -> bool {
    s.basis_rows().iter().all(|v| s.contains_vector(&g.mul_vec(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::Cyclotomic as C;

    fn e(i: usize, n: usize) -> Vec<C> {
        (0..n).map(|j| if i == j { C::one() } else { C::zero() }).collect()
    }

    #[test]
    fn parabolic_examples() {
        let t = GroupTable::enumerate(&GroupSpec::monomial(2, 1, 2)).unwrap();
        let all = pointwise_stabilizer(&t, &Subspace::zero(2)).unwrap();
        assert_eq!(all.elements.len(), 8);
        assert!(all.generated_by_reflections);
        let none = pointwise_stabilizer(&t, &Subspace::full(2)).unwrap();
        assert_eq!(none.elements, vec![0]);
        let line = pointwise_stabilizer(&t, &Subspace::span(2, vec![e(0, 2)])).unwrap();
        assert_eq!(line.elements.len(), 2);
        let g = t.matrix(line.elements[1]);
        assert_eq!(g, Matrix::diagonal(&[C::one(), C::from_i64(-1)]));
        assert!(line.generated_by_reflections);
    }

    #[test]
    fn setwise_examples() {
        let t = GroupTable::enumerate(&GroupSpec::monomial(1, 1, 3)).unwrap();
        let v = setwise_and_pointwise_on(&Subspace::full(3), &t).unwrap();
        assert_eq!(v.normalizer.len(), 6);
        assert_eq!(v.centralizer, vec![0]);
        // the hyperplane x1 = x2
        let h = Subspace::span(3, vec![vec![C::one(), C::one(), C::zero()], e(2, 3)]);
        let s = setwise_and_pointwise_on(&h, &t).unwrap();
        assert_eq!(s.centralizer.len(), 2);
        assert_eq!(s.normalizer.len(), 2);
        assert_eq!(s.quotient_elements.len(), 1);
    }
}
