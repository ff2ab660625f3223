use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::cyclo::{lcm_u32, Cyclotomic};

use super::{kernel, rref_rows, LinalgError, Matrix};

/// A subspace of `V = ℂ^n`, held as the unique RREF of a basis.
#[derive(Clone)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<Cyclotomic>>,
    pivots: Vec<usize>,
}

impl Subspace {
    /// The span of arbitrary vectors.
    pub fn span(ambient: usize, mut vectors: Vec<Vec<Cyclotomic>>) -> Self {
        assert!(vectors.iter().all(|v| v.len() == ambient), "vector length mismatch");
        let pivots = rref_rows(&mut vectors, ambient);
        vectors.truncate(pivots.len());
        let m = vectors
            .iter()
            .flatten()
            .fold(1, |acc, x| lcm_u32(acc, x.conductor()));
        for row in vectors.iter_mut() {
            for x in row.iter_mut() {
                if x.conductor() != m {
                    *x = x.embed(m);
                }
            }
        }
        Subspace { ambient, rows: vectors, pivots }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| {
                (0..ambient)
                    .map(|j| if i == j { Cyclotomic::one() } else { Cyclotomic::zero() })
                    .collect()
            })
            .collect();
        Subspace { ambient, rows, pivots: (0..ambient).collect() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// RREF basis as a `dim × n` matrix.
    pub fn basis(&self) -> Matrix {
        if self.rows.is_empty() {
            return Matrix::zeros(0, self.ambient);
        }
        Matrix::from_rows(self.rows.clone())
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Cyclotomic>> {
        self.rows.clone()
    }

    pub fn basis_rows(&self) -> &[Vec<Cyclotomic>] {
        &self.rows
    }

    pub fn conductor(&self) -> u32 {
        self.rows.iter().flatten().fold(1, |acc, x| lcm_u32(acc, x.conductor()))
    }

    /// Coordinates of `v` in the RREF basis, if `v` lies in the subspace.
    /// They are just the entries of `v` at the pivot columns.
    pub fn coordinates(&self, v: &[Cyclotomic]) -> Option<Vec<Cyclotomic>> {
        if self.contains_vector(v) {
            Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
        } else {
            None
        }
    }

    /// The vector with the given coordinates.
    pub fn vector_from_coordinates(&self, coords: &[Cyclotomic]) -> Vec<Cyclotomic> {
        assert_eq!(coords.len(), self.dim());
        let mut out = vec![Cyclotomic::zero(); self.ambient];
        for (c, row) in coords.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                if !x.is_zero() {
                    *o = &*o + &(c * x);
                }
            }
        }
        out
    }

    pub fn contains_vector(&self, v: &[Cyclotomic]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut pi = 0;
        for j in 0..self.ambient {
            if pi < self.pivots.len() && self.pivots[pi] == j {
                pi += 1;
                continue;
            }
            let mut acc = Cyclotomic::zero();
            for (i, &p) in self.pivots.iter().enumerate() {
                let c = &v[p];
                let x = &self.rows[i][j];
                if !c.is_zero() && !x.is_zero() {
                    acc = &acc + &(c * x);
                }
            }
            if acc != v[j] {
                return false;
            }
        }
        true
    }

    /// True iff `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check_ambient(other)?;
        if other.dim() > self.dim() {
            return Ok(false);
        }
        if self.is_full() || other.is_zero() {
            return Ok(true);
        }
        if other.pivots.iter().any(|p| !self.pivots.contains(p)) {
            // a vector of `other` with a leading entry at a non-pivot column of
            // `self` cannot be reduced to zero against `self`
            return Ok(false);
        }
        Ok(other.rows.iter().all(|r| self.contains_vector(r)))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        if self.contains(other)? {
            return Ok(other.clone());
        }
        if other.contains(self)? {
            return Ok(self.clone());
        }
        // Solve αA = βB via the kernel of [Aᵀ | Bᵀ].
        let (da, db) = (self.dim(), other.dim());
        let mut cols: Vec<Vec<Cyclotomic>> = self.rows.clone();
        cols.extend(other.rows.iter().cloned());
        let m = Matrix::from_columns(&cols);
        let k = kernel(&m);
        let vecs: Vec<Vec<Cyclotomic>> = k
            .rows
            .iter()
            .map(|kv| {
                let alpha = &kv[..da];
                let _ = db;
                self.vector_from_coordinates(alpha)
            })
            .collect();
        Ok(Subspace::span(self.ambient, vecs))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        let mut v = self.rows.clone();
        v.extend(other.rows.iter().cloned());
        Ok(Subspace::span(self.ambient, v))
    }

    /// `{w : w·v = 0 for all v}` under the bilinear pairing Σ w_i v_i.
    pub fn annihilator(&self) -> Subspace {
        if self.is_zero() {
            return Subspace::full(self.ambient);
        }
        kernel(&self.basis())
    }

    /// `g(S)`.
    pub fn image(&self, g: &Matrix) -> Subspace {
        let v = self.rows.iter().map(|r| g.mul_vec(r)).collect();
        Subspace::span(self.ambient, v)
    }

    /// True iff `g v = v` for all `v` in the subspace.
    pub fn fixed_pointwise_by(&self, g: &Matrix) -> bool {
        self.rows.iter().all(|r| g.mul_vec(r) == *r)
    }

    /// True iff `g v = c v` for all `v` in the subspace.
    pub fn acts_as_scalar(&self, g: &Matrix, c: &Cyclotomic) -> bool {
        self.rows.iter().all(|r| {
            let gv = g.mul_vec(r);
            gv.iter().zip(r).all(|(a, b)| *a == b * c)
        })
    }

    /// Restriction of `g` (which must stabilize the subspace) to the RREF basis.
    pub fn restrict(&self, g: &Matrix) -> Option<Matrix> {
        let d = self.dim();
        let mut cols = Vec::with_capacity(d);
        for r in &self.rows {
            cols.push(self.coordinates(&g.mul_vec(r))?);
        }
        if d == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        Some(Matrix::from_columns(&cols))
    }

    /// The subspace of `self` spanned by vectors with the given coordinates.
    pub fn lift(&self, coords: &Subspace) -> Subspace {
        assert_eq!(coords.ambient_dim(), self.dim());
        let v = coords.rows.iter().map(|c| self.vector_from_coordinates(c)).collect();
        Subspace::span(self.ambient, v)
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        Ok(())
    }

    /// Deterministic total order key: dimension, pivots, then entries.
    pub fn sort_key(&self) -> (usize, Vec<usize>, Vec<Cyclotomic>) {
        (self.dim(), self.pivots.clone(), self.rows.iter().flatten().cloned().collect())
    }
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.pivots == other.pivots && self.rows == other.rows
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.pivots.hash(state);
        for x in self.rows.iter().flatten() {
            x.hash(state);
        }
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}", self.dim(), self.ambient)?;
        for r in &self.rows {
            let s: Vec<String> = r.iter().map(ToString::to_string).collect();
            write!(f, "; [{}]", s.join(", "))?;
        }
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceText {
    ambient: usize,
    dim: usize,
    basis: Vec<Vec<Cyclotomic>>,
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SubspaceText { ambient: self.ambient, dim: self.dim(), basis: self.rows.clone() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let t = SubspaceText::deserialize(d)?;
        if t.basis.iter().any(|r| r.len() != t.ambient) {
            return Err(serde::de::Error::custom("basis vector length mismatch"));
        }
        Ok(Subspace::span(t.ambient, t.basis))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::Cyclotomic as C;
    use proptest::prelude::*;

    fn e(i: usize, n: usize) -> Vec<C> {
        (0..n).map(|j| if i == j { C::one() } else { C::zero() }).collect()
    }

    fn ann_oracle(a: &Subspace, b: &Subspace) -> Subspace {
        a.annihilator().sum(&b.annihilator()).unwrap().annihilator()
    }

    #[test]
    fn containment_examples() {
        let v = Subspace::full(3);
        assert!(v.contains(&Subspace::zero(3)).unwrap());
        let a = Subspace::span(3, vec![e(0, 3)]);
        let b = Subspace::span(3, vec![e(1, 3)]);
        assert!(!a.contains(&b).unwrap());
        assert!(a.contains(&Subspace::span(2, vec![e(0, 2)])).is_err());
    }

    #[test]
    fn intersection_examples() {
        let v = Subspace::full(3);
        let x = Subspace::span(3, vec![vec![C::one(), C::from_i64(2), C::from_i64(3)]]);
        assert_eq!(v.intersect(&x).unwrap(), x);
        let a = Subspace::span(3, vec![e(0, 3), e(1, 3)]);
        let b = Subspace::span(3, vec![e(1, 3), e(2, 3)]);
        assert_eq!(a.intersect(&b).unwrap(), Subspace::span(3, vec![e(1, 3)]));
    }

    #[test]
    fn canonical_form_independent_of_spanning_set() {
        let w = C::root_of_unity(1, 3);
        let u = vec![C::one(), w.clone(), C::zero()];
        let v = vec![C::zero(), C::one(), w.clone()];
        let s1 = Subspace::span(3, vec![u.clone(), v.clone()]);
        let sum: Vec<C> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
        let scaled: Vec<C> = v.iter().map(|a| a * &w).collect();
        let s2 = Subspace::span(3, vec![sum, scaled, u]);
        assert_eq!(s1, s2);
        use std::collections::hash_map::DefaultHasher;
        let h = |s: &Subspace| {
            let mut st = DefaultHasher::new();
            s.hash(&mut st);
            st.finish()
        };
        assert_eq!(h(&s1), h(&s2));
    }

    fn small_cyclo() -> impl Strategy<Value = C> {
        (-3i64..=3, -3i64..=3).prop_map(|(a, b)| &C::from_i64(a) + &C::root_of_unity(1, 3).scale_i64(b))
    }

    fn vectors(n: usize, k: usize) -> impl Strategy<Value = Vec<Vec<C>>> {
        prop::collection::vec(prop::collection::vec(small_cyclo(), n), 0..=k)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn intersection_matches_annihilator_oracle(a in vectors(4, 3), b in vectors(4, 3)) {
            let sa = Subspace::span(4, a);
            let sb = Subspace::span(4, b);
            let i = sa.intersect(&sb).unwrap();
            prop_assert!(sa.contains(&i).unwrap());
            prop_assert!(sb.contains(&i).unwrap());
            prop_assert!(i.dim() + 4 >= sa.dim() + sb.dim());
            prop_assert_eq!(i, ann_oracle(&sa, &sb));
        }

        #[test]
        fn dropping_a_row_gives_a_subspace(a in vectors(4, 4)) {
            let sa = Subspace::span(4, a);
            if sa.dim() > 0 {
                let mut rows = sa.basis_vectors();
                rows.pop();
                let sb = Subspace::span(4, rows);
                prop_assert!(sa.contains(&sb).unwrap());
            }
        }

        #[test]
        fn rref_preserves_row_space(a in vectors(4, 4)) {
            let n = a.len();
            if n > 0 {
                let m = Matrix::from_rows(a.clone());
                let r = super::super::rref(&m);
                let s_in = Subspace::span(4, a);
                let s_out = Subspace::span(4, r.row_vecs());
                prop_assert!(s_in.contains(&s_out).unwrap() && s_out.contains(&s_in).unwrap());
            }
        }
    }
}
