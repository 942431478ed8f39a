//! Dense matrices over the prime field `F_p`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::inv_mod;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FMat {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FMat {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FMat {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u64, d: usize) -> Self {
        let mut m = Self::zeros(p, d, d);
        for i in 0..d {
            m.data[i * d + i] = 1 % p;
        }
        m
    }

    pub fn from_fn(p: u64, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut m = Self::zeros(p, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j).rem_euclid(p as i64) as u64;
            }
        }
        m
    }

    /// The matrix unit `E_ij` (zero-based indices).
    pub fn unit(p: u64, d: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(p, d, d);
        m.data[i * d + j] = 1;
        m
    }

    pub fn diag(p: u64, entries: &[i64]) -> Self {
        let d = entries.len();
        Self::from_fn(p, d, d, |i, j| if i == j { entries[i] } else { 0 })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v.rem_euclid(self.p as i64) as u64;
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a + b) % self.p)
            .collect();
        FMat { data, ..*self }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = c.rem_euclid(self.p as i64) as u64;
        let data = self.data.iter().map(|&a| a * c % self.p).collect();
        FMat { data, ..*self }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = (out.data[idx] + a * other.get(k, j)) % self.p;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    pub fn trace(&self) -> u64 {
        (0..self.rows.min(self.cols)).fold(0, |acc, i| (acc + self.get(i, i)) % self.p)
    }

    /// `[A, B] = AB - BA`.
    pub fn bracket(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    fn inv_scalar(&self, a: u64) -> u64 {
        inv_mod(a as i128, self.p as i128).expect("nonzero in a field") as u64
    }

    /// Row echelon form in place; returns the pivot columns and the
    /// determinant factor contributed by row swaps and pivots.
    fn echelon(&mut self) -> (Vec<usize>, u64) {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut det = 1u64;
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(piv) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for j in 0..self.cols {
                    self.data.swap(piv * self.cols + j, row * self.cols + j);
                }
                det = (p - det) % p;
            }
            let pv = self.get(row, col);
            det = det * pv % p;
            let inv = self.inv_scalar(pv);
            for j in 0..self.cols {
                let idx = row * self.cols + j;
                self.data[idx] = self.data[idx] * inv % p;
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let f = self.get(r, col);
                if f == 0 {
                    continue;
                }
                for j in 0..self.cols {
                    let v = self.get(row, j);
                    let idx = r * self.cols + j;
                    self.data[idx] = (self.data[idx] + (p - f) * v) % p;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (pivots, det)
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().0.len()
    }

    pub fn det(&self) -> u64 {
        assert_eq!(self.rows, self.cols);
        let (pivots, det) = self.clone().echelon();
        if pivots.len() < self.rows {
            0
        } else {
            det
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let d = self.rows;
        let mut aug = Self::zeros(self.p, d, 2 * d);
        for i in 0..d {
            for j in 0..d {
                aug.data[i * 2 * d + j] = self.get(i, j);
            }
            aug.data[i * 2 * d + d + i] = 1;
        }
        let (pivots, _) = aug.echelon();
        if pivots.len() < d || pivots[d - 1] >= d {
            return None;
        }
        Some(Self::from_fn(self.p, d, d, |i, j| aug.get(i, d + j) as i64))
    }
}

/// Rank of a family of matrices viewed as vectors in `F_p^{rows·cols}`.
pub fn span_rank(p: u64, mats: &[FMat]) -> usize {
    if mats.is_empty() {
        return 0;
    }
    let len = mats[0].entries().len();
    let stacked = FMat::from_fn(p, mats.len(), len, |i, j| mats[i].entries()[j] as i64);
    stacked.rank()
}

impl fmt::Display for FMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}
