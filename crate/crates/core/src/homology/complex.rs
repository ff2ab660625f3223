use crate::par;
use crate::posets::Poset;

use super::HomologyError;

pub const DEFAULT_SIMPLEX_CAP: usize = 200_000_000;

/// `Δ(P)`: simplices are chains, each stored bottom to top; simplices of one
/// dimension are kept in lexicographic order in one flat array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderComplex {
    vertices: usize,
    /// `faces[k]` holds the k-simplices, `k + 1` vertices each.
    faces: Vec<Vec<u32>>,
}

impl OrderComplex {
    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    /// Dimension; −1 for the empty complex.
    pub fn dim(&self) -> isize {
        self.faces.len() as isize - 1
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().enumerate().map(|(k, f)| f.len() / (k + 1)).collect()
    }

    pub fn simplex_count(&self) -> usize {
        self.f_vector().iter().sum()
    }

    pub fn count(&self, k: usize) -> usize {
        self.faces.get(k).map_or(0, |f| f.len() / (k + 1))
    }

    pub fn simplex(&self, k: usize, i: usize) -> &[u32] {
        &self.faces[k][i * (k + 1)..(i + 1) * (k + 1)]
    }

    pub fn simplices(&self, k: usize) -> impl Iterator<Item = &[u32]> {
        self.faces.get(k).map(|f| f.chunks_exact(k + 1)).into_iter().flatten()
    }

    /// Index of a k-simplex, by binary search in the sorted list.
    pub fn index_of(&self, s: &[u32]) -> Option<usize> {
        let k = s.len().checked_sub(1)?;
        let f = self.faces.get(k)?;
        let (mut lo, mut hi) = (0, f.len() / (k + 1));
        while lo < hi {
            let mid = (lo + hi) / 2;
            match f[mid * (k + 1)..(mid + 1) * (k + 1)].cmp(s) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// From explicit simplices (any vertex order inside each is canonicalized
    /// by sorting); faces are added so the result is closed.
    pub fn from_facets(vertices: usize, facets: &[Vec<u32>]) -> Self {
        let mut all: std::collections::BTreeSet<Vec<u32>> = Default::default();
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            let k = f.len();
            for mask in 1u64..(1 << k) {
                all.insert((0..k).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect());
            }
        }
        let top = all.iter().map(Vec::len).max().unwrap_or(0);
        let mut faces = vec![Vec::new(); top];
        for s in all {
            faces[s.len() - 1].extend_from_slice(&s);
        }
        OrderComplex { vertices, faces }
    }
}

/// All chains of `p`, by depth-first extension in index order.
pub fn order_complex<T>(p: &Poset<T>) -> Result<OrderComplex, HomologyError> {
    order_complex_with_cap(p, DEFAULT_SIMPLEX_CAP)
}

pub fn order_complex_with_cap<T>(p: &Poset<T>, cap: usize) -> Result<OrderComplex, HomologyError> {
    let n = p.len();
    let above: Vec<Vec<u32>> = (0..n).map(|x| p.up_set(x).ones().filter(|&y| y != x).map(|y| y as u32).collect()).collect();
    let total = std::sync::atomic::AtomicUsize::new(0);
    let per_start: Vec<Option<Vec<Vec<u32>>>> = par::map_range(n, |v| {
        let mut faces: Vec<Vec<u32>> = Vec::new();
        let mut chain = vec![v as u32];
        let mut stack: Vec<usize> = vec![0];
        let mut local = 0usize;
        emit(&mut faces, &chain);
        while let Some(pos) = stack.last_mut() {
            let top = *chain.last().unwrap() as usize;
            if *pos == above[top].len() {
                stack.pop();
                chain.pop();
                continue;
            }
            let next = above[top][*pos];
            *pos += 1;
            chain.push(next);
            stack.push(0);
            emit(&mut faces, &chain);
            local += 1;
            if local.is_multiple_of(4096) {
                let t = total.fetch_add(4096, std::sync::atomic::Ordering::Relaxed);
                if t > cap {
                    return None;
                }
            }
        }
        total.fetch_add(local % 4096 + 1, std::sync::atomic::Ordering::Relaxed);
        Some(faces)
    });
    if total.load(std::sync::atomic::Ordering::Relaxed) > cap {
        return Err(HomologyError::CapExceeded { cap });
    }
    let mut faces: Vec<Vec<u32>> = Vec::new();
    for part in per_start {
        let part = part.ok_or(HomologyError::CapExceeded { cap })?;
        if faces.len() < part.len() {
            faces.resize(part.len(), Vec::new());
        }
        for (k, f) in part.into_iter().enumerate() {
            faces[k].extend(f);
        }
    }
    // chains starting at v come before those starting at v' > v, and each
    // start's DFS emits in lexicographic order, so every dimension is sorted
    debug_assert!(faces.iter().enumerate().all(|(k, f)| f.chunks_exact(k + 1).collect::<Vec<_>>().windows(2).all(|w| w[0] < w[1])));
    Ok(OrderComplex { vertices: n, faces })
}

fn emit(faces: &mut Vec<Vec<u32>>, chain: &[u32]) {
    let k = chain.len() - 1;
    if faces.len() <= k {
        faces.resize(k + 1, Vec::new());
    }
    faces[k].extend_from_slice(chain);
}

/// Chain counts by a plain recursive count (an oracle for the enumerator).
pub fn count_chains<T>(p: &Poset<T>) -> Vec<usize> {
    fn rec<T>(p: &Poset<T>, x: usize, len: usize, out: &mut Vec<usize>) {
        if out.len() <= len {
            out.resize(len + 1, 0);
        }
        out[len] += 1;
        for y in p.up_set(x).ones().filter(|&y| y != x) {
            rec(p, y, len + 1, out);
        }
    }
    let mut out = Vec::new();
    for x in 0..p.len() {
        rec(p, x, 0, &mut out);
    }
    out
}
