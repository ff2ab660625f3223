//! Eigenvalues of group elements, reflections, and invariant degrees from the
//! Molien series.
//!
//! Eigenvalues are read off the characteristic polynomial mod p, where
//! p ≡ 1 (mod M) is much larger than |G|. Reduction mod p is injective on roots
//! of unity of order prime to p, so if the reduced polynomial splits into
//! linear factors at images of M-th roots of unity, those roots are exactly
//! the eigenvalues (with multiplicity) of the exact matrix.

use rustc_hash::FxHashMap;

use crate::cyclo::{euler_phi, gcd_u32, lcm_u32, mobius, ModpMap};
use crate::linalg::fp_rref;
use crate::par;

use super::spec::{GroupSpec, RootSpec};
use super::table::{GroupTable, ModpView};
use super::GroupError;

/// Characteristic polynomial `det(tI − A)` of a row-major mod-p matrix,
/// coefficients low degree first (monic), by Faddeev–LeVerrier.
pub(crate) fn modp_char_poly(a: &[u64], n: usize, map: &ModpMap) -> Vec<u64> {
    let mut c = vec![0u64; n + 1];
    c[n] = 1;
    let mut m = vec![0u64; n * n];
    let mut am = vec![0u64; n * n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        matmul(a, &m, &mut am, n, map);
        for i in 0..n {
            am[i * n + i] = map.add(am[i * n + i], c[n - k + 1]);
        }
        std::mem::swap(&mut m, &mut am);
        matmul(a, &m, &mut am, n, map);
        let tr = (0..n).fold(0, |t, i| map.add(t, am[i * n + i]));
        c[n - k] = map.sub(0, map.mul(tr, map.inv(k as u64)));
    }
    c
}

fn matmul(a: &[u64], b: &[u64], out: &mut [u64], n: usize, map: &ModpMap) {
    let p = map.prime() as u128;
    for i in 0..n {
        for j in 0..n {
            let mut acc: u128 = 0;
            for k in 0..n {
                acc += a[i * n + k] as u128 * b[k * n + j] as u128;
            }
            out[i * n + j] = (acc % p) as u64;
        }
    }
}

/// Exponents `j` (of `ζ_M`, M = map conductor) of the roots of a monic mod-p
/// polynomial, with multiplicity; `None` unless it splits completely.
pub(crate) fn split_over_roots(poly: &[u64], map: &ModpMap) -> Option<Vec<u32>> {
    let m = map.conductor();
    let mut f = poly.to_vec();
    let mut out = Vec::new();
    let root = map.root_power(1);
    let mut x = 1u64;
    for j in 0..m {
        while f.len() > 1 {
            // synthetic division by (t - x)
            let deg = f.len() - 1;
            let mut q = vec![0u64; deg];
            let mut acc = 0u64;
            for i in (0..=deg).rev() {
                acc = map.add(map.mul(acc, x), f[i]);
                if i > 0 {
                    q[i - 1] = acc;
                }
            }
            if acc != 0 {
                break;
            }
            f = q;
            out.push(j);
        }
        if f.len() == 1 {
            return Some(out);
        }
        x = map.mul(x, root);
    }
    None
}

/// Eigenvalues of `g_i` (or `γ g_i`) as sorted exponents of `ζ_M`.
pub fn eigenvalue_exponents(table: &GroupTable, view: &ModpView, i: usize, coset: bool) -> Result<Vec<u32>, GroupError> {
    let n = table.rank();
    let a = table.modp_matrix(view, i, coset);
    let poly = modp_char_poly(&a, n, view.map());
    split_over_roots(&poly, view.map()).ok_or(GroupError::EigenvaluesOutOfRange(view.map().conductor()))
}

/// Number of elements per distinct characteristic polynomial (mod p).
fn char_poly_classes(table: &GroupTable, view: &ModpView, coset: bool) -> FxHashMap<Vec<u64>, u64> {
    let n = table.rank();
    let parts = par::map_chunks(table.order(), 4096, |range| {
        let mut local: FxHashMap<Vec<u64>, u64> = FxHashMap::default();
        let mut a = vec![0u64; n * n];
        for i in range {
            table.modp_matrix_into(view, i, coset, &mut a);
            *local.entry(modp_char_poly(&a, n, view.map())).or_default() += 1;
        }
        vec![local]
    });
    let mut total: FxHashMap<Vec<u64>, u64> = FxHashMap::default();
    for part in parts {
        for (k, v) in part {
            *total.entry(k).or_default() += v;
        }
    }
    total
}

/// `dim Fix(g_i)`; exact, because g_i is diagonalizable mod p (its order is prime to p).
pub fn fixed_dim(table: &GroupTable, i: usize) -> usize {
    let n = table.rank();
    let view = table.view();
    let map = view.map();
    let mut a = table.modp_matrix(view, i, false);
    for k in 0..n {
        a[k * n + k] = map.sub(a[k * n + k], 1);
    }
    n - fp_rref(&mut a, n, n, map).len()
}

/// Indices of the reflections: elements whose fixed space is a hyperplane.
pub fn reflections(table: &GroupTable) -> Vec<usize> {
    let n = table.rank();
    par::map_chunks(table.order(), 4096, |range| range.filter(|&i| fixed_dim(table, i) + 1 == n).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Degrees {
    /// d_1 ≤ … ≤ d_n.
    pub degrees: Vec<u32>,
    pub order: usize,
    pub reflections: usize,
}

impl Degrees {
    pub fn product(&self) -> u128 {
        self.degrees.iter().map(|&d| d as u128).product()
    }

    pub fn codegree_sum(&self) -> u64 {
        self.degrees.iter().map(|&d| d as u64 - 1).sum()
    }
}

/// Coefficients `|G|·[t^j] (1/|G|) Σ_g 1/det(I − t g)` for j ≤ k, as integers.
pub fn molien_series(table: &GroupTable, k: usize) -> Result<Vec<i128>, GroupError> {
    let view = table.view();
    let classes = char_poly_classes(table, view, false);
    let m = view.map().conductor();
    let mut split: Vec<(Vec<u32>, u64)> = Vec::with_capacity(classes.len());
    for (poly, count) in classes {
        let ex = split_over_roots(&poly, view.map()).ok_or(GroupError::EigenvaluesOutOfRange(m))?;
        split.push((ex, count));
    }
    split.sort();
    // work in ℤ[x]/(x^e − 1) with e the exponent of the group
    let e = split
        .iter()
        .flat_map(|(ex, _)| ex.iter())
        .fold(1, |acc, &j| lcm_u32(acc, m / gcd_u32(j, m)));
    let step = m / e;
    // normalized trace of ζ_e^s is μ(d)/φ(d), d = e / gcd(s, e); scale by a common denominator
    let den = (1..=e).filter(|d| e % d == 0).fold(1u32, |acc, d| lcm_u32(acc, euler_phi(d)));
    let weight: Vec<i128> = (0..e)
        .map(|s| {
            let d = e / gcd_u32(s, e);
            mobius(d) as i128 * (den / euler_phi(d)) as i128
        })
        .collect();
    let e = e as usize;
    let per_class = par::map(&split, |(ex, count)| {
        // h[j][s]: number of monomials of degree j whose eigenvalue product is ζ^s
        let mut h = vec![vec![0i128; e]; k + 1];
        h[0][0] = 1;
        for &x in ex {
            let x = (x / step) as usize;
            for j in 1..=k {
                for s in 0..e {
                    let prev = h[j - 1][(s + e - x) % e];
                    h[j][s] += prev;
                }
            }
        }
        h.iter()
            .map(|row| row.iter().zip(&weight).map(|(a, w)| a * w).sum::<i128>() * *count as i128)
            .collect::<Vec<i128>>()
    });
    let mut total = vec![0i128; k + 1];
    for v in per_class {
        for (t, x) in total.iter_mut().zip(v) {
            *t += x;
        }
    }
    let den = den as i128;
    for (j, t) in total.iter_mut().enumerate() {
        if *t % den != 0 {
            return Err(GroupError::MolienMismatch(format!("coefficient {j} is not integral")));
        }
        *t /= den;
    }
    Ok(total)
}

/// Degrees of the basic invariants, by matching the Molien series against
/// `Π 1/(1 − t^{d_i})`, with the checks `Π d_i = |G|` and `Σ (d_i − 1) = #reflections`.
pub fn molien_degrees(table: &GroupTable) -> Result<Degrees, GroupError> {
    let n = table.rank();
    let order = table.order() as i128;
    let mut k = 64;
    loop {
        let series = molien_series(table, k)?;
        let mut q: Vec<i128> = series.clone();
        if q[0] != order {
            return Err(GroupError::MolienMismatch("constant term differs from |G|".into()));
        }
        let mut degrees = Vec::new();
        let mut exhausted = false;
        while degrees.len() < n {
            let Some(j) = (1..=k).find(|&j| q[j] != 0) else {
                exhausted = true;
                break;
            };
            if q[j] < 0 || q[j] % order != 0 {
                return Err(GroupError::MolienMismatch(format!("coefficient of t^{j} is not a multiplicity")));
            }
            for _ in 0..q[j] / order {
                degrees.push(j as u32);
                for i in (j..=k).rev() {
                    q[i] -= q[i - j];
                }
            }
        }
        if exhausted {
            if k >= 4096 {
                return Err(GroupError::MolienMismatch("too few degrees found".into()));
            }
            k *= 2;
            continue;
        }
        if degrees.len() != n || q[1..].iter().any(|&x| x != 0) {
            return Err(GroupError::MolienMismatch(format!(
                "series is not of the form Π 1/(1 - t^d) (degrees so far {degrees:?})"
            )));
        }
        let d = Degrees { degrees, order: table.order(), reflections: reflections(table).len() };
        if d.product() != d.order as u128 {
            return Err(GroupError::MolienMismatch(format!(
                "product of degrees {:?} is not |G| = {}",
                d.degrees, d.order
            )));
        }
        if d.codegree_sum() != d.reflections as u64 {
            return Err(GroupError::MolienMismatch(format!(
                "sum of (d_i - 1) over {:?} is not the reflection count {}",
                d.degrees, d.reflections
            )));
        }
        return Ok(d);
    }
}

/// `a(ζ) = #{i : ε_i ζ^{d_i} = 1}`; factors default to 1 without a twist.
pub fn a_zeta(spec: &GroupSpec, degrees: &[u32], zeta: RootSpec) -> Result<usize, GroupError> {
    let factors: Vec<RootSpec> = match (&spec.factors, &spec.twist) {
        (Some(f), _) => f.clone(),
        (None, None) => vec![RootSpec::new(0, 1); degrees.len()],
        (None, Some(_)) => return Err(GroupError::MissingFactors),
    };
    if factors.len() != degrees.len() {
        return Err(GroupError::InvalidSpec("factor count differs from degree count".into()));
    }
    let count = degrees
        .iter()
        .zip(&factors)
        .filter(|(&d, eps)| {
            let l = lcm_u32(eps.n, zeta.n) as i64;
            let total = eps.k * (l / eps.n as i64) + d as i64 * zeta.k * (l / zeta.n as i64);
            total.rem_euclid(l) == 0
        })
        .count();
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degrees_of(spec: &GroupSpec) -> Degrees {
        molien_degrees(&GroupTable::enumerate(spec).unwrap()).unwrap()
    }

    #[test]
    fn small_groups() {
        assert_eq!(degrees_of(&GroupSpec::monomial(2, 1, 2)).degrees, vec![2, 4]);
        assert_eq!(degrees_of(&GroupSpec::monomial(1, 1, 3)).degrees, vec![1, 2, 3]);
        assert_eq!(degrees_of(&GroupSpec::named("trivial1").unwrap()).degrees, vec![1]);
        assert_eq!(degrees_of(&GroupSpec::monomial(3, 3, 3)).degrees, vec![3, 3, 6]);
        assert_eq!(degrees_of(&GroupSpec::named("H3").unwrap()).degrees, vec![2, 6, 10]);
        assert_eq!(degrees_of(&GroupSpec::monomial(4, 2, 2)).degrees, vec![4, 4]);
    }

    #[test]
    fn reflection_counts() {
        let t = GroupTable::enumerate(&GroupSpec::monomial(1, 1, 3)).unwrap();
        assert_eq!(reflections(&t).len(), 3);
        let t = GroupTable::enumerate(&GroupSpec::monomial(2, 1, 2)).unwrap();
        assert_eq!(reflections(&t).len(), 4);
    }

    #[test]
    fn a_zeta_examples() {
        let e6 = GroupSpec::named("E6").unwrap();
        let d = [2, 5, 6, 8, 9, 12];
        assert_eq!(a_zeta(&e6, &d, RootSpec::new(1, 2)).unwrap(), 4);
        assert_eq!(a_zeta(&e6, &d, RootSpec::new(1, 3)).unwrap(), 3);
        assert_eq!(a_zeta(&e6, &d, RootSpec::new(0, 1)).unwrap(), 6);
        let twisted = GroupSpec::monomial(2, 1, 2).with_twist(super::super::spec::CosetTwist::Scalar(RootSpec::new(1, 2)));
        assert!(matches!(a_zeta(&twisted, &[2, 4], RootSpec::new(0, 1)), Err(GroupError::MissingFactors)));
    }

    #[test]
    fn splitting_detects_roots() {
        let map = ModpMap::new(12);
        // (t - 1)(t - ζ_12^5)
        let r5 = map.root_power(5);
        let poly = vec![r5, map.sub(0, map.add(1, r5)), 1];
        assert_eq!(split_over_roots(&poly, &map), Some(vec![0, 5]));
    }
}
