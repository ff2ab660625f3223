//! Linear algebra over F_p, used as a fast filter in front of exact work.
//!
//! For any matrix `A` over ℤ[ζ][1/d] whose denominators survive reduction,
//! `rank_p(A) ≤ rank(A)`, so `dim ker_p(A) ≥ dim ker(A)`. When the two
//! dimensions agree, the image of the exact RREF basis is the RREF basis of
//! the mod-p kernel.

use crate::cyclo::ModpMap;

use super::{Matrix, Subspace};

/// Row-reduce a dense `rows × cols` matrix over F_p in place; returns pivots.
pub fn fp_rref(m: &mut [u64], rows: usize, cols: usize, map: &ModpMap) -> Vec<usize> {
    let p = map.prime();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i * cols + c] != 0) else { continue };
        if piv != r {
            for j in 0..cols {
                m.swap(piv * cols + j, r * cols + j);
            }
        }
        let inv = map.inv(m[r * cols + c]);
        for j in c..cols {
            m[r * cols + j] = map.mul(m[r * cols + j], inv);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = m[i * cols + c];
            if f == 0 {
                continue;
            }
            for j in c..cols {
                let t = map.mul(f, m[r * cols + j]);
                m[i * cols + j] = (m[i * cols + j] + p - t) % p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A subspace of F_p^n in RREF; usable as a hash key.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpSubspace {
    ambient: usize,
    pivots: Vec<usize>,
    rows: Vec<u64>,
}

impl FpSubspace {
    pub fn span(ambient: usize, mut data: Vec<u64>, map: &ModpMap) -> Self {
        assert_eq!(data.len() % ambient.max(1), 0);
        let nrows = data.len().checked_div(ambient).unwrap_or(0);
        let pivots = fp_rref(&mut data, nrows, ambient, map);
        data.truncate(pivots.len() * ambient);
        FpSubspace { ambient, pivots, rows: data }
    }

    /// Reduction of an exact subspace; `None` if a denominator vanishes mod p.
    pub fn from_subspace(s: &Subspace, map: &ModpMap) -> Option<Self> {
        let mut data = Vec::with_capacity(s.dim() * s.ambient_dim());
        for row in s.basis_rows() {
            for x in row {
                data.push(map.image(x)?);
            }
        }
        // exact RREF reduces to an RREF mod p (pivots are 1, pivot columns are unit vectors)
        Some(FpSubspace { ambient: s.ambient_dim(), pivots: s.pivots().to_vec(), rows: data })
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Row-major RREF basis.
    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// `{v : ⟨r, v⟩ = 0 for every basis row r}` (bilinear, no conjugation).
    pub fn annihilator(&self, map: &ModpMap) -> FpSubspace {
        fp_kernel(self.rows.clone(), self.dim(), self.ambient, map)
    }

    /// Intersection computed as the annihilator of the sum of annihilators.
    pub fn intersect_annihilators(a: &FpSubspace, b: &FpSubspace, map: &ModpMap) -> FpSubspace {
        let n = a.ambient;
        let mut stacked = a.rows.clone();
        stacked.extend_from_slice(&b.rows);
        fp_kernel(stacked, a.dim() + b.dim(), n, map)
    }

    pub fn contains_vector(&self, v: &[u64], map: &ModpMap) -> bool {
        let n = self.ambient;
        let mut pi = 0;
        for j in 0..n {
            if pi < self.pivots.len() && self.pivots[pi] == j {
                pi += 1;
                continue;
            }
            let mut acc = 0u64;
            for (i, &p) in self.pivots.iter().enumerate() {
                acc = map.add(acc, map.mul(v[p], self.rows[i * n + j]));
            }
            if acc != v[j] {
                return false;
            }
        }
        true
    }

    /// True iff `other ⊆ self`.
    pub fn contains(&self, other: &FpSubspace, map: &ModpMap) -> bool {
        assert_eq!(self.ambient, other.ambient);
        if other.dim() > self.dim() {
            return false;
        }
        let n = self.ambient;
        (0..other.dim()).all(|i| self.contains_vector(&other.rows[i * n..(i + 1) * n], map))
    }
}

/// Mod-p image of a square matrix, or `None` on a vanishing denominator.
pub fn fp_matrix(m: &Matrix, map: &ModpMap) -> Option<Vec<u64>> {
    m.entries().iter().map(|x| map.image(x)).collect()
}

/// Kernel of a dense `rows × cols` F_p matrix.
pub fn fp_kernel(mut m: Vec<u64>, rows: usize, cols: usize, map: &ModpMap) -> FpSubspace {
    let pivots = fp_rref(&mut m, rows, cols, map);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut data = vec![0u64; free.len() * cols];
    for (k, &f) in free.iter().enumerate() {
        data[k * cols + f] = 1;
        for (i, &p) in pivots.iter().enumerate() {
            data[k * cols + p] = map.sub(0, m[i * cols + f]);
        }
    }
    FpSubspace::span(cols, data, map)
}

/// Mod-p eigenspace of `g` (given as its mod-p image) for the eigenvalue image `z`.
pub fn fp_eigenspace(g: &[u64], n: usize, z: u64, map: &ModpMap) -> FpSubspace {
    let mut m = g.to_vec();
    for i in 0..n {
        m[i * n + i] = map.sub(m[i * n + i], z);
    }
    fp_kernel(m, n, n, map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::Cyclotomic as C;
    use crate::linalg::eigenspace;

    #[test]
    fn exact_and_modular_eigenspaces_agree() {
        let g = Matrix::from_i64_rows(&[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        let map = ModpMap::new(3);
        let w = C::root_of_unity(1, 3);
        let exact = eigenspace(&g, &w);
        let gp = fp_matrix(&g, &map).unwrap();
        let modp = fp_eigenspace(&gp, 3, map.image(&w).unwrap(), &map);
        assert_eq!(modp.dim(), exact.dim());
        assert_eq!(FpSubspace::from_subspace(&exact, &map).unwrap(), modp);
    }

    #[test]
    fn containment_mod_p() {
        let map = ModpMap::new(1);
        let a = FpSubspace::span(3, vec![1, 0, 0, 0, 1, 0], &map);
        let b = FpSubspace::span(3, vec![2, 3, 0], &map);
        let c = FpSubspace::span(3, vec![0, 0, 1], &map);
        assert!(a.contains(&b, &map));
        assert!(!a.contains(&c, &map));
    }
}
