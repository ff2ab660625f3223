//! Enumerated groups.
//!
//! Elements are encoded by where they send the standard basis: `Ω` is the
//! (finite) orbit of `e_1, …, e_n` under the group, and an element `g` is the
//! tuple of indices of `g e_1, …, g e_n` in `Ω`, packed into a `u128`. Applying
//! a generator is then a table lookup per coordinate, and matrices are
//! materialized on demand from the orbit vectors.
//!
//! A mod-p image of `Ω` (injective, checked at construction) lets us apply an
//! arbitrary element to an orbit vector and recognise the result without exact
//! arithmetic: the result is known to lie in `Ω`, so matching its image is enough.

use std::borrow::Cow;

use rustc_hash::FxHashMap;

use crate::cyclo::{lcm_u32, Cyclotomic, ModpMap};
use crate::linalg::{matrix_order, Matrix};
use crate::par;

use super::element::{Element, MonomialForm};
use super::spec::{GroupKind, GroupSpec};
use super::GroupError;

pub type Code = u128;

pub const MAX_RANK: usize = 8;
pub const MAX_ORBIT: usize = u16::MAX as usize;
pub const DEFAULT_ELEMENT_CAP: usize = 5_000_000;

/// Extra conductor folded into the default mod-p view, so that every element
/// order up to 30 (and many more) divides the view's conductor.
const VIEW_EXPONENT: u32 = 2520;

pub(crate) type Key = [u64; MAX_RANK];

pub fn pack(images: &[u32]) -> Code {
    images.iter().enumerate().fold(0, |acc, (k, &j)| acc | ((j as Code) << (16 * k)))
}

pub fn unpack(code: Code, n: usize) -> [u32; MAX_RANK] {
    let mut out = [0u32; MAX_RANK];
    for (k, o) in out.iter_mut().enumerate().take(n) {
        *o = ((code >> (16 * k)) & 0xffff) as u32;
    }
    out
}

/// Mod-p images of the orbit (and the twisted orbit) for one prime.
#[derive(Clone, Debug)]
pub struct ModpView {
    map: ModpMap,
    orbit: Vec<Key>,
    twisted: Option<Vec<Key>>,
}

impl ModpView {
    pub fn map(&self) -> &ModpMap {
        &self.map
    }
}

pub struct GroupTable {
    spec: GroupSpec,
    n: usize,
    conductor: u32,
    orbit: Vec<Vec<Cyclotomic>>,
    twist: Option<Matrix>,
    twisted_orbit: Option<Vec<Vec<Cyclotomic>>>,
    view: ModpView,
    lookup: FxHashMap<Key, u32>,
    codes: Vec<Code>,
    index: FxHashMap<Code, u32>,
}

impl std::fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupTable")
            .field("group", &self.spec.name())
            .field("order", &self.codes.len())
            .field("orbit", &self.orbit.len())
            .finish()
    }
}

impl GroupTable {
    pub fn enumerate(spec: &GroupSpec) -> Result<Self, GroupError> {
        Self::enumerate_with_cap(spec, DEFAULT_ELEMENT_CAP)
    }

    pub fn enumerate_with_cap(spec: &GroupSpec, cap: usize) -> Result<Self, GroupError> {
        spec.validate()?;
        let n = spec.rank();
        if n > MAX_RANK {
            return Err(GroupError::InvalidSpec(format!("rank {n} exceeds {MAX_RANK}")));
        }
        let conductor = spec.conductor()?;
        let (orbit, codes) = match &spec.kind {
            GroupKind::Monomial { r, p, n } => monomial_codes(*r, *p, *n, cap)?,
            GroupKind::ExplicitGenerators { generators, .. } => closure(n, generators, cap)?,
        };
        let twist = spec.twist_matrix()?;
        if let Some(t) = &twist {
            if t.inverse().is_err() {
                return Err(GroupError::InvalidSpec("twist matrix is singular".into()));
            }
            matrix_order(t, 100_000).map_err(|_| {
                GroupError::InvalidSpec("twist matrix does not have finite order".into())
            })?;
        }
        let twisted_orbit = twist.as_ref().map(|t| orbit.iter().map(|v| t.mul_vec(v)).collect());
        let (view, lookup) = build_view(lcm_u32(conductor, VIEW_EXPONENT), &orbit, twisted_orbit.as_ref())?;
        let index = codes.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
        let table = GroupTable {
            spec: spec.clone(),
            n,
            conductor,
            orbit,
            twist,
            twisted_orbit,
            view,
            lookup,
            codes,
            index,
        };
        table.check_twist_normalizes()?;
        Ok(table)
    }

    fn check_twist_normalizes(&self) -> Result<(), GroupError> {
        let Some(t) = &self.twist else { return Ok(()) };
        let inv = t.inverse()?;
        for (i, s) in self.spec.generators().iter().enumerate() {
            let conj = t.checked_mul(s)?.checked_mul(&inv)?;
            if self.index_of_matrix(&conj).is_none() {
                return Err(GroupError::TwistNotNormalizing(i));
            }
        }
        Ok(())
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.codes.len()
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn orbit(&self) -> &[Vec<Cyclotomic>] {
        &self.orbit
    }

    pub fn has_twist(&self) -> bool {
        self.twist.is_some()
    }

    pub fn twist(&self) -> Option<&Matrix> {
        self.twist.as_ref()
    }

    pub fn codes(&self) -> &[Code] {
        &self.codes
    }

    pub fn images(&self, i: usize) -> [u32; MAX_RANK] {
        unpack(self.codes[i], self.n)
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn index_of_code(&self, c: Code) -> Option<usize> {
        self.index.get(&c).map(|&i| i as usize)
    }

    /// The element `g_i` as an exact matrix.
    pub fn matrix(&self, i: usize) -> Matrix {
        let img = self.images(i);
        Matrix::from_columns(&img[..self.n].iter().map(|&j| self.orbit[j as usize].clone()).collect::<Vec<_>>())
    }

    /// The coset element `γ g_i` (equal to `g_i` without a twist).
    pub fn coset_matrix(&self, i: usize) -> Matrix {
        match &self.twisted_orbit {
            None => self.matrix(i),
            Some(t) => {
                let img = self.images(i);
                Matrix::from_columns(&img[..self.n].iter().map(|&j| t[j as usize].clone()).collect::<Vec<_>>())
            }
        }
    }

    pub fn element(&self, i: usize) -> Element {
        match self.spec.kind {
            GroupKind::Monomial { r, .. } => {
                let img = self.images(i);
                let perm = img[..self.n].iter().map(|&j| (j / r) as usize).collect();
                let exps = img[..self.n].iter().map(|&j| j % r).collect();
                Element::Monomial(MonomialForm { r, perm, exps })
            }
            _ => Element::Matrix(self.matrix(i)),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    /// Default mod-p data; its conductor is a multiple of the group's and of 2520.
    pub fn view(&self) -> &ModpView {
        &self.view
    }

    /// A mod-p view whose conductor is also a multiple of `m`.
    pub fn view_for(&self, m: u32) -> Cow<'_, ModpView> {
        let c = self.view.map.conductor();
        if c.is_multiple_of(m) {
            return Cow::Borrowed(&self.view);
        }
        let (view, _) = build_view(lcm_u32(c, m), &self.orbit, self.twisted_orbit.as_ref())
            .expect("a larger prime view exists");
        Cow::Owned(view)
    }

    /// Row-major mod-p image of `g_i` (or `γ g_i` when `coset`) into `out`.
    pub fn modp_matrix_into(&self, view: &ModpView, i: usize, coset: bool, out: &mut [u64]) {
        let n = self.n;
        let cols = match (&view.twisted, coset) {
            (Some(t), true) => t,
            _ => &view.orbit,
        };
        let img = self.images(i);
        for k in 0..n {
            let col = &cols[img[k] as usize];
            for r in 0..n {
                out[r * n + k] = col[r];
            }
        }
    }

    pub fn modp_matrix(&self, view: &ModpView, i: usize, coset: bool) -> Vec<u64> {
        let mut out = vec![0; self.n * self.n];
        self.modp_matrix_into(view, i, coset, &mut out);
        out
    }

    /// Index in `Ω` of `g_i Ω_j`.
    fn act_on_orbit(&self, i: usize, j: usize) -> u32 {
        let map = &self.view.map;
        let img = self.images(i);
        let v = &self.view.orbit[j];
        let mut out: Key = [0; MAX_RANK];
        for (l, &vl) in v.iter().enumerate().take(self.n) {
            if vl == 0 {
                continue;
            }
            let col = &self.view.orbit[img[l] as usize];
            for r in 0..self.n {
                out[r] = map.add(out[r], map.mul(vl, col[r]));
            }
        }
        *self.lookup.get(&out).expect("group maps the orbit to itself")
    }

    /// Index of `g_i g_j`.
    pub fn compose(&self, i: usize, j: usize) -> usize {
        let hj = self.images(j);
        let imgs: Vec<u32> = hj[..self.n].iter().map(|&m| self.act_on_orbit(i, m as usize)).collect();
        self.index_of_code(pack(&imgs)).expect("group is closed")
    }

    /// Index of `g_i^{-1}`.
    pub fn inverse(&self, i: usize) -> usize {
        let map = &self.view.map;
        let n = self.n;
        let m = self.modp_matrix(&self.view, i, false);
        let inv = modp_inverse(&m, n, map).expect("group elements are invertible");
        let imgs: Vec<u32> = (0..n)
            .map(|k| {
                let mut key: Key = [0; MAX_RANK];
                for r in 0..n {
                    key[r] = inv[r * n + k];
                }
                *self.lookup.get(&key).expect("inverse maps basis into orbit")
            })
            .collect();
        self.index_of_code(pack(&imgs)).expect("group is closed")
    }

    /// Index of the element equal to `m`, if `m` lies in the group.
    pub fn index_of_matrix(&self, m: &Matrix) -> Option<usize> {
        if m.rows() != self.n || m.cols() != self.n || !self.view.map.conductor().is_multiple_of(m.conductor()) {
            return None;
        }
        let mut imgs = Vec::with_capacity(self.n);
        for k in 0..self.n {
            let mut key: Key = [0; MAX_RANK];
            for r in 0..self.n {
                key[r] = self.view.map.image(m.get(r, k))?;
            }
            imgs.push(*self.lookup.get(&key)?);
        }
        let i = self.index_of_code(pack(&imgs))?;
        (self.matrix(i) == *m).then_some(i)
    }

    /// The subgroup generated by the given elements, as sorted indices.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0usize];
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &x in &frontier {
                for &g in gens {
                    let y = self.compose(g, x);
                    if !seen[y] {
                        seen[y] = true;
                        out.push(y);
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        out.sort_unstable();
        out
    }
}

fn build_view(
    m: u32,
    orbit: &[Vec<Cyclotomic>],
    twisted: Option<&Vec<Vec<Cyclotomic>>>,
) -> Result<(ModpView, FxHashMap<Key, u32>), GroupError> {
    let image = |map: &ModpMap, v: &[Cyclotomic]| -> Option<Key> {
        let mut k: Key = [0; MAX_RANK];
        for (o, x) in k.iter_mut().zip(v) {
            *o = map.image(x)?;
        }
        Some(k)
    };
    let mut map = ModpMap::new(m);
    for _ in 0..64 {
        let imgs: Option<Vec<Key>> = orbit.iter().map(|v| image(&map, v)).collect();
        let tw: Option<Option<Vec<Key>>> = match twisted {
            None => Some(None),
            Some(t) => t.iter().map(|v| image(&map, v)).collect::<Option<Vec<Key>>>().map(Some),
        };
        if let (Some(imgs), Some(tw)) = (imgs, tw) {
            let lookup: FxHashMap<Key, u32> =
                imgs.iter().enumerate().map(|(i, k)| (*k, i as u32)).collect();
            if lookup.len() == imgs.len() {
                return Ok((ModpView { map, orbit: imgs, twisted: tw }, lookup));
            }
        }
        map = ModpMap::with_bound(m, map.prime());
    }
    Err(GroupError::InvalidSpec("no suitable prime for the orbit".into()))
}

fn closure(n: usize, generators: &[Matrix], cap: usize) -> Result<(Vec<Vec<Cyclotomic>>, Vec<Code>), GroupError> {
    for (i, g) in generators.iter().enumerate() {
        if g.inverse().is_err() {
            return Err(GroupError::InvalidSpec(format!("generator {i} is singular")));
        }
    }
    // orbit of the basis
    let mut orbit: Vec<Vec<Cyclotomic>> = (0..n)
        .map(|k| (0..n).map(|j| if j == k { Cyclotomic::one() } else { Cyclotomic::zero() }).collect())
        .collect();
    let mut where_: std::collections::HashMap<Vec<Cyclotomic>, u32> =
        orbit.iter().enumerate().map(|(i, v)| (v.clone(), i as u32)).collect();
    let mut perms: Vec<Vec<u32>> = vec![Vec::new(); generators.len()];
    let mut j = 0;
    while j < orbit.len() {
        for (g, perm) in generators.iter().zip(perms.iter_mut()) {
            let w = g.mul_vec(&orbit[j]);
            let idx = match where_.get(&w) {
                Some(&i) => i,
                None => {
                    if orbit.len() >= MAX_ORBIT {
                        return Err(GroupError::NotFinite(MAX_ORBIT));
                    }
                    let i = orbit.len() as u32;
                    where_.insert(w.clone(), i);
                    orbit.push(w);
                    i
                }
            };
            perm.push(idx);
        }
        j += 1;
    }
    let id = pack(&(0..n as u32).collect::<Vec<_>>());
    let mut codes = vec![id];
    let mut seen: rustc_hash::FxHashSet<Code> = [id].into_iter().collect();
    let mut frontier = vec![id];
    let apply = |perm: &[u32], c: Code| -> Code {
        let img = unpack(c, n);
        let mut out: Code = 0;
        for k in 0..n {
            out |= (perm[img[k] as usize] as Code) << (16 * k);
        }
        out
    };
    while !frontier.is_empty() {
        let children: Vec<Vec<Code>> =
            par::map(&frontier, |&c| perms.iter().map(|p| apply(p, c)).collect());
        let mut next = Vec::new();
        for c in children.into_iter().flatten() {
            if seen.insert(c) {
                if codes.len() >= cap {
                    return Err(GroupError::CapExceeded { what: "group elements", cap });
                }
                codes.push(c);
                next.push(c);
            }
        }
        frontier = next;
    }
    Ok((orbit, codes))
}

fn monomial_codes(r: u32, p: u32, n: usize, cap: usize) -> Result<(Vec<Vec<Cyclotomic>>, Vec<Code>), GroupError> {
    let fact: u128 = (1..=n as u128).product();
    let size = (r as u128).pow(n as u32) * fact / p as u128;
    if size > cap as u128 {
        return Err(GroupError::CapExceeded { what: "group elements", cap });
    }
    if n * r as usize > MAX_ORBIT {
        return Err(GroupError::NotFinite(MAX_ORBIT));
    }
    // Ω_{i·r + a} = ζ_r^a e_i
    let orbit: Vec<Vec<Cyclotomic>> = (0..n)
        .flat_map(|i| {
            (0..r).map(move |a| {
                (0..n)
                    .map(|j| if j == i { Cyclotomic::root_of_unity(a as i64, r) } else { Cyclotomic::zero() })
                    .collect()
            })
        })
        .collect();
    let mut codes = Vec::with_capacity(size as usize);
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mut exps = vec![0u32; n];
        'exps: loop {
            if exps.iter().sum::<u32>() % p == 0 {
                let imgs: Vec<u32> = (0..n).map(|k| perm[k] as u32 * r + exps[k]).collect();
                codes.push(pack(&imgs));
            }
            let mut k = 0;
            loop {
                if k == n {
                    break 'exps;
                }
                exps[k] += 1;
                if exps[k] < r {
                    break;
                }
                exps[k] = 0;
                k += 1;
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    debug_assert_eq!(codes.len() as u128, size);
    Ok((orbit, codes))
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Inverse of a row-major `n × n` matrix over F_p.
pub(crate) fn modp_inverse(m: &[u64], n: usize, map: &ModpMap) -> Option<Vec<u64>> {
    let w = 2 * n;
    let mut a = vec![0u64; n * w];
    for r in 0..n {
        a[r * w..r * w + n].copy_from_slice(&m[r * n..(r + 1) * n]);
        a[r * w + n + r] = 1;
    }
    let piv = crate::linalg::fp_rref(&mut a, n, w, map);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    let mut out = vec![0u64; n * n];
    for r in 0..n {
        out[r * n..(r + 1) * n].copy_from_slice(&a[r * w + n..(r + 1) * w]);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::spec::{CosetTwist, RootSpec};

    #[test]
    fn monomial_orders() {
        for (r, p, n, size) in [(1, 1, 3, 6), (2, 1, 2, 8), (3, 3, 3, 54), (4, 2, 2, 16), (2, 2, 4, 192)] {
            let t = GroupTable::enumerate(&GroupSpec::monomial(r, p, n)).unwrap();
            assert_eq!(t.order(), size, "G({r},{p},{n})");
            assert!(t.matrix(0).is_identity());
        }
    }

    #[test]
    fn closure_agrees_with_formula() {
        for (r, p, n) in [(2, 1, 2), (3, 1, 2), (4, 2, 2), (3, 3, 3), (2, 2, 3)] {
            let gens = crate::groups::named::monomial_generators(r, p, n);
            let t = GroupTable::enumerate(&GroupSpec::explicit(n, gens, None)).unwrap();
            let f = GroupTable::enumerate(&GroupSpec::monomial(r, p, n)).unwrap();
            assert_eq!(t.order(), f.order(), "G({r},{p},{n})");
            let a: std::collections::HashSet<Matrix> = (0..t.order()).map(|i| t.matrix(i)).collect();
            let b: std::collections::HashSet<Matrix> = (0..f.order()).map(|i| f.matrix(i)).collect();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn compose_and_inverse_match_matrices() {
        let t = GroupTable::enumerate(&GroupSpec::monomial(3, 1, 2)).unwrap();
        for i in (0..t.order()).step_by(3) {
            for j in (0..t.order()).step_by(5) {
                let k = t.compose(i, j);
                assert_eq!(t.matrix(k), t.matrix(i).checked_mul(&t.matrix(j)).unwrap());
            }
            let inv = t.inverse(i);
            assert!(t.matrix(i).checked_mul(&t.matrix(inv)).unwrap().is_identity());
        }
    }

    #[test]
    fn shipped_group_orders() {
        for (name, size) in [("A3", 24), ("B3", 48), ("D4", 192), ("G2", 12), ("H3", 120), ("I2(5)", 10), ("F4", 1152)] {
            let t = GroupTable::enumerate(&GroupSpec::named(name).unwrap()).unwrap();
            assert_eq!(t.order(), size, "{name}");
        }
        let triv = GroupTable::enumerate(&GroupSpec::named("trivial1").unwrap()).unwrap();
        assert_eq!(triv.order(), 1);
    }

    #[test]
    fn cap_is_reported() {
        let err = GroupTable::enumerate_with_cap(&GroupSpec::monomial(2, 1, 3), 10).unwrap_err();
        assert!(matches!(err, GroupError::CapExceeded { cap: 10, .. }));
        let err = GroupTable::enumerate_with_cap(&GroupSpec::named("B3").unwrap(), 10).unwrap_err();
        assert!(matches!(err, GroupError::CapExceeded { cap: 10, .. }));
    }

    #[test]
    fn twists() {
        let s = GroupSpec::monomial(2, 2, 4).with_twist(CosetTwist::DiagonalCase1 { e: 2 });
        let t = GroupTable::enumerate(&s).unwrap();
        let g = t.coset_matrix(0);
        assert_eq!(*g.get(0, 0), Cyclotomic::from_i64(-1));
        let s = GroupSpec::monomial(3, 3, 3).with_twist(CosetTwist::Scalar(RootSpec::new(1, 3)));
        assert!(GroupTable::enumerate(&s).is_ok());
        // a twist that does not normalize: diag(i, 1) against G(2,1,2)
        let bad = Matrix::diagonal(&[Cyclotomic::root_of_unity(1, 8), Cyclotomic::one()]);
        let s = GroupSpec::named("A2").unwrap().with_twist(CosetTwist::ExplicitMatrix(
            Matrix::diagonal(&[Cyclotomic::from_i64(2), Cyclotomic::one()]),
        ));
        assert!(GroupTable::enumerate(&s).is_err());
        let s = GroupSpec::monomial(2, 1, 2).with_twist(CosetTwist::ExplicitMatrix(bad));
        assert!(matches!(GroupTable::enumerate(&s), Err(GroupError::TwistNotNormalizing(_))));
    }
}
