use crate::par;

use super::complex::OrderComplex;
use super::snf::SparseMatrix;

/// The augmented chain complex `0 → C_d → … → C_0 → C_{−1} = ℤ → 0`.
///
/// `boundary[k]` is `∂_k : C_k → C_{k−1}` for `k = 0..=d`, so `boundary[0]`
/// is the augmentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    /// `ranks[k + 1] = rank C_k`, for `k = −1..=d`.
    ranks: Vec<usize>,
    boundary: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn new(ranks: Vec<usize>, boundary: Vec<SparseMatrix>) -> Self {
        assert_eq!(ranks.len(), boundary.len() + 1);
        for (k, b) in boundary.iter().enumerate() {
            assert_eq!(b.ncols(), ranks[k + 1]);
            assert_eq!(b.nrows, ranks[k]);
        }
        ChainComplex { ranks, boundary }
    }

    pub fn from_order_complex(c: &OrderComplex) -> Self {
        let d = c.f_vector().len();
        let mut ranks = vec![1];
        ranks.extend(c.f_vector());
        let mut boundary = Vec::with_capacity(d);
        boundary.push(SparseMatrix::new(1, vec![vec![(0, 1)]; c.count(0)]));
        for k in 1..d {
            let idx: Vec<usize> = (0..c.count(k)).collect();
            let cols = par::map(&idx, |&i| {
                let s = c.simplex(k, i);
                let mut face = Vec::with_capacity(k);
                let mut col: Vec<(u32, i64)> = (0..=k)
                    .map(|j| {
                        face.clear();
                        face.extend(s.iter().enumerate().filter(|&(t, _)| t != j).map(|(_, &v)| v));
                        let row = c.index_of(&face).expect("faces of chains are chains");
                        (row as u32, if j % 2 == 0 { 1 } else { -1 })
                    })
                    .collect();
                col.sort_unstable_by_key(|e| e.0);
                col
            });
            boundary.push(SparseMatrix::new(c.count(k - 1), cols));
        }
        ChainComplex { ranks, boundary }
    }

    /// Top dimension; −1 when only the augmentation cell remains.
    pub fn dim(&self) -> isize {
        self.boundary.len() as isize - 1
    }

    /// `rank C_k` for `k ≥ −1`.
    pub fn rank(&self, k: isize) -> usize {
        self.ranks.get((k + 1) as usize).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `∂_k` for `k = 0..=dim`.
    pub fn boundary(&self, k: usize) -> &SparseMatrix {
        &self.boundary[k]
    }

    pub fn cell_count(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// `∂_{k−1} ∘ ∂_k = 0` for every `k`.
    pub fn is_complex(&self) -> bool {
        self.boundary.windows(2).all(|w| w[0].mul_is_zero(&w[1]))
    }

    /// Removes cell pairs `(a, b)` with `⟨∂a, b⟩ = ±1` where `b` is the only
    /// face of `a` (coreduction) or `a` the only coface of `b` (collapse).
    /// Either way the other boundaries change only by deleting `a` and `b`,
    /// and the result is chain homotopy equivalent to the input.
    pub fn reduce(&self) -> ChainComplex {
        let levels = self.ranks.len();
        // faces[l][i]: (cell in level l−1, coeff); cofaces[l][i]: cells in level l+1
        let faces: Vec<Vec<Vec<(u32, i64)>>> = (0..levels)
            .map(|l| if l == 0 { vec![Vec::new()] } else { self.boundary[l - 1].cols.clone() })
            .collect();
        let mut cofaces: Vec<Vec<Vec<(u32, i64)>>> = self.ranks.iter().map(|&r| vec![Vec::new(); r]).collect();
        for l in 1..levels {
            for (i, col) in faces[l].iter().enumerate() {
                for &(r, v) in col {
                    cofaces[l - 1][r as usize].push((i as u32, v));
                }
            }
        }
        let mut alive: Vec<Vec<bool>> = self.ranks.iter().map(|&r| vec![true; r]).collect();
        let mut nfaces: Vec<Vec<u32>> = faces.iter().map(|f| f.iter().map(|c| c.len() as u32).collect()).collect();
        let mut ncofaces: Vec<Vec<u32>> = cofaces.iter().map(|f| f.iter().map(|c| c.len() as u32).collect()).collect();
        let mut queue: Vec<(usize, u32)> = Vec::new();
        for l in 0..levels {
            for i in 0..self.ranks[l] {
                queue.push((l, i as u32));
            }
        }
        let kill = |l: usize,
                    i: usize,
                    alive: &mut Vec<Vec<bool>>,
                    nfaces: &mut Vec<Vec<u32>>,
                    ncofaces: &mut Vec<Vec<u32>>,
                    queue: &mut Vec<(usize, u32)>| {
            alive[l][i] = false;
            if l > 0 {
                for &(r, _) in &faces[l][i] {
                    if alive[l - 1][r as usize] {
                        ncofaces[l - 1][r as usize] -= 1;
                        queue.push((l - 1, r));
                    }
                }
            }
            for &(c, _) in &cofaces[l][i] {
                if alive[l + 1][c as usize] {
                    nfaces[l + 1][c as usize] -= 1;
                    queue.push((l + 1, c));
                }
            }
        };
        while let Some((l, i)) = queue.pop() {
            let iu = i as usize;
            if !alive[l][iu] {
                continue;
            }
            // coreduction: a = (l, i) with exactly one live face
            if l > 0 && nfaces[l][iu] == 1 {
                let &(b, v) = faces[l][iu].iter().find(|(r, _)| alive[l - 1][*r as usize]).unwrap();
                if v.abs() == 1 {
                    kill(l, iu, &mut alive, &mut nfaces, &mut ncofaces, &mut queue);
                    kill(l - 1, b as usize, &mut alive, &mut nfaces, &mut ncofaces, &mut queue);
                    continue;
                }
            }
            // collapse: b = (l, i) with exactly one live coface
            if l + 1 < levels && ncofaces[l][iu] == 1 {
                let &(a, v) = cofaces[l][iu].iter().find(|(c, _)| alive[l + 1][*c as usize]).unwrap();
                if v.abs() == 1 {
                    kill(l + 1, a as usize, &mut alive, &mut nfaces, &mut ncofaces, &mut queue);
                    kill(l, iu, &mut alive, &mut nfaces, &mut ncofaces, &mut queue);
                }
            }
        }
        // renumber survivors
        let newid: Vec<Vec<u32>> = alive
            .iter()
            .map(|a| {
                let mut next = 0u32;
                a.iter()
                    .map(|&x| {
                        let id = next;
                        next += x as u32;
                        if x { id } else { u32::MAX }
                    })
                    .collect()
            })
            .collect();
        let mut ranks: Vec<usize> = alive.iter().map(|a| a.iter().filter(|&&x| x).count()).collect();
        while ranks.len() > 1 && *ranks.last().unwrap() == 0 {
            ranks.pop();
        }
        let boundary = (1..ranks.len())
            .map(|l| {
                let cols = faces[l]
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| alive[l][*i])
                    .map(|(_, col)| {
                        col.iter()
                            .filter(|(r, _)| alive[l - 1][*r as usize])
                            .map(|&(r, v)| (newid[l - 1][r as usize], v))
                            .collect()
                    })
                    .collect();
                SparseMatrix::new(ranks[l - 1], cols)
            })
            .collect();
        ChainComplex { ranks, boundary }
    }
}
