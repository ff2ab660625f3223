use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::cyclo::{lcm_u32, Cyclotomic};

use super::LinalgError;

/// Dense matrix over a cyclotomic field. All entries share one ambient conductor.
#[derive(Clone)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    conductor: u32,
    data: Vec<Cyclotomic>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Cyclotomic>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        let conductor = data.iter().fold(1, |acc, x| lcm_u32(acc, x.conductor()));
        let data = data
            .into_iter()
            .map(|x| if x.conductor() == conductor { x } else { x.embed(conductor) })
            .collect();
        Matrix { rows, cols, conductor, data }
    }

    pub fn from_rows(rows: Vec<Vec<Cyclotomic>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Cyclotomic::from_i64(x)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Cyclotomic>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for i in 0..r {
            for col in cols {
                data.push(col[i].clone());
            }
        }
        Matrix::new(r, c, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, conductor: 1, data: vec![Cyclotomic::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::scalar(n, &Cyclotomic::one())
    }

    pub fn scalar(n: usize, c: &Cyclotomic) -> Self {
        let mut m = Matrix::zeros(n, n);
        m.conductor = c.conductor();
        for x in m.data.iter_mut() {
            *x = Cyclotomic::zero().embed(m.conductor);
        }
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn diagonal(entries: &[Cyclotomic]) -> Self {
        let n = entries.len();
        let mut data = vec![Cyclotomic::zero(); n * n];
        for (i, e) in entries.iter().enumerate() {
            data[i * n + i] = e.clone();
        }
        Matrix::new(n, n, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyclotomic) {
        let m = lcm_u32(self.conductor, v.conductor());
        if m != self.conductor {
            self.embed_in_place(m);
        }
        self.data[i * self.cols + j] = if v.conductor() == m { v } else { v.embed(m) };
    }

    fn embed_in_place(&mut self, m: u32) {
        for x in self.data.iter_mut() {
            if x.conductor() != m {
                *x = x.embed(m);
            }
        }
        self.conductor = m;
    }

    /// The same matrix with entries viewed in ℚ(ζ_m).
    pub fn embed(&self, m: u32) -> Matrix {
        let mut out = self.clone();
        out.embed_in_place(lcm_u32(m, self.conductor));
        out
    }

    pub fn row(&self, i: usize) -> &[Cyclotomic] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Cyclotomic> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Cyclotomic>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Cyclotomic] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, conductor: self.conductor, data }
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Cyclotomic::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                data.push(acc);
            }
        }
        Ok(Matrix::new(self.rows, other.cols, data))
    }

    pub fn mul_vec(&self, v: &[Cyclotomic]) -> Vec<Cyclotomic> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Cyclotomic::zero();
                for (k, vk) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !vk.is_zero() {
                        acc = &acc + &(a * vk);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix::new(self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix::new(self.rows, self.cols, data)
    }

    pub fn scale(&self, c: &Cyclotomic) -> Matrix {
        let data = self.data.iter().map(|a| a * c).collect();
        Matrix::new(self.rows, self.cols, data)
    }

    /// `self - c·I`.
    pub fn minus_scalar(&self, c: &Cyclotomic) -> Matrix {
        assert!(self.is_square());
        let mut out = self.clone();
        for i in 0..self.rows {
            let v = out.get(i, i) - c;
            out.set(i, i, v);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j { x.is_one() } else { x.is_zero() }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Cyclotomic::is_zero)
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut result = Matrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.checked_mul(&base).unwrap();
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base).unwrap();
            }
        }
        result
    }

    pub fn trace(&self) -> Cyclotomic {
        (0..self.rows.min(self.cols)).fold(Cyclotomic::zero(), |acc, i| &acc + self.get(i, i))
    }

    /// Inverse by Gauss-Jordan elimination on `[self | I]`.
    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare);
        }
        let n = self.rows;
        let mut aug = Vec::with_capacity(n * 2 * n);
        for i in 0..n {
            aug.extend_from_slice(self.row(i));
            for j in 0..n {
                aug.push(if i == j { Cyclotomic::one() } else { Cyclotomic::zero() });
            }
        }
        let r = super::rref(&Matrix::new(n, 2 * n, aug));
        for i in 0..n {
            if !r.get(i, i).is_one() {
                return Err(LinalgError::Singular);
            }
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            data.extend_from_slice(&r.row(i)[n..]);
        }
        Ok(Matrix::new(n, n, data))
    }

    /// `self · other · self^{-1}`.
    pub fn conjugate(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        let inv = self.inverse()?;
        self.checked_mul(other)?.checked_mul(&inv)
    }

    /// Characteristic polynomial coefficients `c_0..c_n` of det(tI - A) (monic),
    /// by the Faddeev-LeVerrier recurrence.
    pub fn char_poly(&self) -> Vec<Cyclotomic> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![Cyclotomic::zero(); n + 1];
        coeffs[n] = Cyclotomic::one();
        let mut m = Matrix::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let am = self.checked_mul(&m).unwrap();
            m = am.add(&Matrix::scalar(n, &coeffs[n - k + 1]));
            let t = self.checked_mul(&m).unwrap().trace();
            coeffs[n - k] = -(&t * &Cyclotomic::rational(1, k as i64).unwrap());
        }
        coeffs
    }
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl Eq for Matrix {}

impl Hash for Matrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        for x in &self.data {
            x.hash(state);
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.row_vecs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<Cyclotomic>> = Vec::deserialize(d)?;
        if rows.iter().any(|r| r.len() != rows[0].len()) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        Ok(Matrix::from_rows(rows))
    }
}
