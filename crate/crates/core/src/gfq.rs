//! Dense linear algebra over prime fields F_p.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("modulus {0} is not prime")]
    NotPrime(u32),
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {got}")]
    BadShape { rows: usize, cols: usize, expected: usize, got: usize },
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u32, u32),
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut f = 2u32;
    while f.saturating_mul(f) <= p {
        if p % f == 0 {
            return false;
        }
        f += 1;
    }
    true
}

/// Multiplicative inverse of a nonzero residue (Fermat).
pub fn inv_mod(x: u32, p: u32) -> u32 {
    debug_assert!(x % p != 0);
    let mut base = x as u64 % p as u64;
    let mut e = p as u64 - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// A row-major matrix over F_p with entries in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GfMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for GfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})[", self.p)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl GfMatrix {
    /// Builds a matrix, reducing signed entries mod `p`.
    pub fn new(p: u32, rows: usize, cols: usize, entries: &[i64]) -> Result<Self, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if entries.len() != rows * cols {
            return Err(GfError::BadShape { rows, cols, expected: rows * cols, got: entries.len() });
        }
        let data = entries.iter().map(|&x| x.rem_euclid(p as i64) as u32).collect();
        Ok(GfMatrix { p, rows, cols, data })
    }

    pub fn from_rows(p: u32, cols: usize, rows: &[Vec<i64>]) -> Result<Self, GfError> {
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(GfError::BadShape { rows: rows.len(), cols, expected: rows.len() * cols, got: flat.len() });
        }
        GfMatrix::new(p, rows.len(), cols, &flat)
    }

    pub fn zeros(p: u32, rows: usize, cols: usize) -> Result<Self, GfError> {
        GfMatrix::new(p, rows, cols, &vec![0; rows * cols])
    }

    pub fn identity(p: u32, n: usize) -> Result<Self, GfError> {
        let mut m = GfMatrix::zeros(p, n, n)?;
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        Ok(m)
    }

    // Internal constructor for already-reduced data.
    pub(crate) fn from_raw(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&x| x < p));
        GfMatrix { p, rows, cols, data }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> GfMatrix {
        let mut data = vec![0; self.data.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                data[c * self.rows + r] = self.get(r, c);
            }
        }
        GfMatrix::from_raw(self.p, self.cols, self.rows, data)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &GfMatrix) -> Result<GfMatrix, GfError> {
        if self.p != other.p {
            return Err(GfError::ModulusMismatch(self.p, other.p));
        }
        if self.cols != other.cols {
            return Err(GfError::DimensionMismatch { expected: self.cols, got: other.cols });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(GfMatrix::from_raw(self.p, self.rows + other.rows, self.cols, data))
    }

    /// Reduced row echelon form and rank. Zero rows are kept at the bottom.
    pub fn rref(&self) -> (GfMatrix, usize) {
        let (m, pivots) = self.rref_with_pivots();
        (m, pivots.len())
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// RREF together with the pivot columns.
    pub fn rref_with_pivots(&self) -> (GfMatrix, Vec<usize>) {
        let p = self.p as u64;
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..cols {
                    a.swap(piv * cols + j, r * cols + j);
                }
            }
            let inv = inv_mod(a[r * cols + c], self.p) as u64;
            for j in 0..cols {
                a[r * cols + j] = (a[r * cols + j] as u64 * inv % p) as u32;
            }
            for i in 0..rows {
                let f = a[i * cols + c] as u64;
                if i == r || f == 0 {
                    continue;
                }
                for j in 0..cols {
                    let sub = f * a[r * cols + j] as u64 % p;
                    a[i * cols + j] = ((a[i * cols + j] as u64 + p - sub) % p) as u32;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (GfMatrix::from_raw(self.p, rows, cols, a), pivots)
    }

    /// Drops zero rows of an RREF matrix.
    pub fn nonzero_rows(&self) -> GfMatrix {
        let keep: Vec<usize> = (0..self.rows).filter(|&r| self.row(r).iter().any(|&x| x != 0)).collect();
        let mut data = Vec::with_capacity(keep.len() * self.cols);
        for &r in &keep {
            data.extend_from_slice(self.row(r));
        }
        GfMatrix::from_raw(self.p, keep.len(), self.cols, data)
    }

    /// Whether `v` lies in the row space. `self` must be in RREF.
    pub fn solve_membership(&self, v: &[u32]) -> Result<bool, GfError> {
        if v.len() != self.cols {
            return Err(GfError::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        let p = self.p as u64;
        let mut w: Vec<u64> = v.iter().map(|&x| x as u64 % p).collect();
        for r in 0..self.rows {
            let row = self.row(r);
            let Some(c) = row.iter().position(|&x| x != 0) else {
                continue;
            };
            let f = w[c];
            if f != 0 {
                for j in 0..self.cols {
                    w[j] = (w[j] + p - f * row[j] as u64 % p) % p;
                }
            }
        }
        Ok(w.iter().all(|&x| x == 0))
    }

    /// Basis of the right kernel `{x : M x = 0}`, one vector per row of the result.
    pub fn kernel(&self) -> GfMatrix {
        let (r, pivots) = self.rref_with_pivots();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut data = Vec::with_capacity(free.len() * self.cols);
        for &f in &free {
            let mut x = vec![0u32; self.cols];
            x[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                let e = r.get(i, f);
                x[pc] = (p - e) % p;
            }
            data.extend(x);
        }
        GfMatrix::from_raw(p, free.len(), self.cols, data)
    }

    /// Basis of the row space, in RREF.
    pub fn row_space(&self) -> GfMatrix {
        self.rref().0.nonzero_rows()
    }

    /// Basis of the column space (as rows).
    pub fn column_space(&self) -> GfMatrix {
        self.transpose().row_space()
    }
}
