//! Smith normal form invariants of sparse integer matrices.
//!
//! Unit pivots are eliminated sparsely (Markowitz-style choice) in `i64` with
//! checked arithmetic, falling back to `BigInt` on overflow. Whatever has no
//! unit entry left goes through a dense arbitrary-precision SNF.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{CheckedMul, CheckedSub, One, Signed, Zero};

/// Sparse matrix stored by columns; each column sorted by row.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub cols: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn new(nrows: usize, cols: Vec<Vec<(u32, i64)>>) -> Self {
        SparseMatrix { nrows, cols }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.ncols()]; self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, v) in col {
                d[r as usize][c] = v;
            }
        }
        d
    }

    /// `self · other` (as integer matrices), used to check `∂∂ = 0`.
    pub fn mul_is_zero(&self, other: &SparseMatrix) -> bool {
        assert_eq!(self.ncols(), other.nrows);
        other.cols.iter().all(|col| {
            let mut acc: std::collections::BTreeMap<u32, i64> = Default::default();
            for &(k, v) in col {
                for &(r, w) in &self.cols[k as usize] {
                    *acc.entry(r).or_default() += v * w;
                }
            }
            acc.values().all(|&x| x == 0)
        })
    }
}

trait Coeff: Clone + Zero + One + Signed + CheckedMul + CheckedSub + Send + Sync + Into<BigInt> {}
impl Coeff for i64 {}
impl Coeff for BigInt {}

struct Overflow;

/// Nonzero invariant factors (all positive, in divisibility order).
pub fn invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    let cols64 = m.cols.clone();
    match eliminate_units::<i64>(m.nrows, cols64) {
        Ok((units, rest)) => finish(units, rest),
        Err(Overflow) => {
            log::debug!("i64 overflow in sparse elimination, retrying with BigInt");
            let big = m.cols.iter().map(|c| c.iter().map(|&(r, v)| (r, BigInt::from(v))).collect()).collect();
            match eliminate_units::<BigInt>(m.nrows, big) {
                Ok((units, rest)) => finish(units, rest),
                Err(Overflow) => unreachable!("BigInt arithmetic does not overflow"),
            }
        }
    }
}

pub fn rank(m: &SparseMatrix) -> usize {
    invariant_factors(m).len()
}

fn finish<T: Coeff>(units: usize, rest: Vec<Vec<(u32, T)>>) -> Vec<BigInt> {
    let mut out = vec![BigInt::one(); units];
    if !rest.is_empty() {
        let mut rows: Vec<u32> = rest.iter().flat_map(|c| c.iter().map(|e| e.0)).collect();
        rows.sort_unstable();
        rows.dedup();
        let mut dense = vec![vec![BigInt::zero(); rest.len()]; rows.len()];
        for (c, col) in rest.into_iter().enumerate() {
            for (r, v) in col {
                let i = rows.binary_search(&r).unwrap();
                dense[i][c] = v.into();
            }
        }
        out.extend(dense_invariant_factors(dense));
    }
    out
}

/// Sparse columns of `(row, entry)` pairs.
type Columns<T> = Vec<Vec<(u32, T)>>;

fn eliminate_units<T: Coeff>(nrows: usize, mut cols: Columns<T>) -> Result<(usize, Columns<T>), Overflow> {
    let ncols = cols.len();
    let mut row_cols: Vec<Vec<u32>> = vec![Vec::new(); nrows];
    let mut row_count = vec![0u32; nrows];
    for (c, col) in cols.iter().enumerate() {
        for (r, _) in col {
            row_cols[*r as usize].push(c as u32);
            row_count[*r as usize] += 1;
        }
    }
    let mut alive = vec![true; ncols];
    let mut version = vec![0u32; ncols];
    let mut heap: BinaryHeap<Reverse<(usize, u32, u32)>> =
        (0..ncols).map(|c| Reverse((cols[c].len(), c as u32, 0))).collect();
    let mut units = 0;
    let mut scratch = Vec::new();
    while let Some(Reverse((_, c, ver))) = heap.pop() {
        let c = c as usize;
        if !alive[c] || ver != version[c] {
            continue;
        }
        if cols[c].is_empty() {
            alive[c] = false;
            continue;
        }
        let Some(&(r, ref u)) = cols[c]
            .iter()
            .filter(|(_, v)| v.abs().is_one())
            .min_by_key(|(r, _)| row_count[*r as usize])
        else {
            continue; // revisited if a later update changes it
        };
        let (r, u) = (r, u.clone());
        let pivot = std::mem::take(&mut cols[c]);
        alive[c] = false;
        for (rr, _) in &pivot {
            row_count[*rr as usize] -= 1;
        }
        let others = std::mem::take(&mut row_cols[r as usize]);
        for &o in &others {
            let o = o as usize;
            if !alive[o] {
                continue;
            }
            let Ok(pos) = cols[o].binary_search_by_key(&r, |e| e.0) else { continue };
            let f = cols[o][pos].1.checked_mul(&u).ok_or(Overflow)?;
            scratch.clear();
            axpy(&cols[o], &f, &pivot, &mut scratch)?;
            // keep row counts and row lists in step with the fill-in
            let (old, new) = (&cols[o], &scratch);
            let (mut i, mut j) = (0, 0);
            while i < old.len() || j < new.len() {
                let a = old.get(i).map(|e| e.0);
                let b = new.get(j).map(|e| e.0);
                match (a, b) {
                    (Some(x), Some(y)) if x == y => {
                        i += 1;
                        j += 1;
                    }
                    (Some(x), Some(y)) if x < y => {
                        row_count[x as usize] -= 1;
                        i += 1;
                    }
                    (Some(x), None) => {
                        row_count[x as usize] -= 1;
                        i += 1;
                    }
                    (_, Some(y)) => {
                        row_count[y as usize] += 1;
                        row_cols[y as usize].push(o as u32);
                        j += 1;
                    }
                    (None, None) => unreachable!(),
                }
            }
            std::mem::swap(&mut cols[o], &mut scratch);
            version[o] += 1;
            heap.push(Reverse((cols[o].len(), o as u32, version[o])));
        }
        units += 1;
    }
    let rest = cols.into_iter().enumerate().filter(|(c, col)| alive[*c] && !col.is_empty()).map(|(_, c)| c).collect();
    Ok((units, rest))
}

/// `out = a − f·b` on sorted sparse vectors.
fn axpy<T: Coeff>(a: &[(u32, T)], f: &T, b: &[(u32, T)], out: &mut Vec<(u32, T)>) -> Result<(), Overflow> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ra = a.get(i).map_or(u32::MAX, |e| e.0);
        let rb = b.get(j).map_or(u32::MAX, |e| e.0);
        if ra < rb {
            out.push(a[i].clone());
            i += 1;
        } else {
            let t = f.checked_mul(&b[j].1).ok_or(Overflow)?;
            let v = if ra == rb {
                let v = a[i].1.checked_sub(&t).ok_or(Overflow)?;
                i += 1;
                v
            } else {
                T::zero().checked_sub(&t).ok_or(Overflow)?
            };
            j += 1;
            if !v.is_zero() {
                out.push((rb, v));
            }
        }
    }
    Ok(())
}

/// Dense SNF by pivoting on the entry of smallest magnitude; returns the
/// nonzero invariant factors in divisibility order.
pub fn dense_invariant_factors(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest(&a, t) else {
                return normalize(diag);
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let s = &q * &a[t][j];
                    a[i][j] -= s;
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for i in t..rows {
                    let s = &q * &a[i][t];
                    a[i][j] -= s;
                }
                clean &= a[t][j].is_zero();
            }
            if clean {
                diag.push(a[t][t].abs());
                break;
            }
        }
    }
    normalize(diag)
}

fn smallest(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Diagonal entries to a divisibility chain via pairwise gcd/lcm.
fn normalize(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

/// Rank over ℚ by column reduction with exact rationals (an independent oracle).
pub fn rank_over_q(m: &SparseMatrix) -> usize {
    use std::collections::BTreeMap;
    let mut pivots: BTreeMap<u32, BTreeMap<u32, BigRational>> = BTreeMap::new();
    let mut rank = 0;
    for col in &m.cols {
        let mut v: BTreeMap<u32, BigRational> =
            col.iter().map(|&(r, x)| (r, BigRational::from_integer(BigInt::from(x)))).collect();
        while let Some((&low, x)) = v.iter().next_back() {
            let Some(p) = pivots.get(&low) else { break };
            let f = x / &p[&low];
            for (r, y) in p {
                let e = v.entry(*r).or_insert_with(BigRational::zero);
                *e -= &f * y;
                if e.is_zero() {
                    v.remove(r);
                }
            }
        }
        if let Some((&low, _)) = v.iter().next_back() {
            pivots.insert(low, v);
            rank += 1;
        }
    }
    rank
}
