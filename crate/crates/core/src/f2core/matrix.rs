use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A dense vector over GF(2), packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Vector {
    words: Vec<u64>,
    len: usize,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        f.write_str("]")
    }
}

/// A dense GF(2) matrix with bit-packed rows (row-major).
#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    actual: row.len(),
                });
            }
            for (c, &b) in row.iter().enumerate() {
                m.set(r, c, b);
            }
        }
        Ok(m)
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[F2Vector]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    actual: col.len(),
                });
            }
            for r in col.ones() {
                m.set(r, c, true);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        (self.bits[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let w = &mut self.bits[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.bits[r * self.stride..(r + 1) * self.stride]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.bits.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    /// `row[dst] ^= row[src]`
    fn add_row(&mut self, src: usize, dst: usize) {
        for w in 0..self.stride {
            let v = self.bits[src * self.stride + w];
            self.bits[dst * self.stride + w] ^= v;
        }
    }

    pub fn mul_vec(&self, v: &F2Vector) -> Result<F2Vector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: v.len(),
            });
        }
        let mut out = F2Vector::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(&v.words)
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            out.set(r, parity & 1 == 1);
        }
        Ok(out)
    }

    /// Reduced row echelon form in place; returns pivot columns in order.
    /// Pivots are chosen lowest column first, lowest row first.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for c in 0..self.cols {
            if next_row == self.rows {
                break;
            }
            let Some(p) = (next_row..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(p, next_row);
            for r in 0..self.rows {
                if r != next_row && self.get(r, c) {
                    self.add_row(next_row, r);
                }
            }
            pivots.push(c);
            next_row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn kernel_basis(&self) -> Vec<F2Vector> {
        let mut m = self.clone();
        let pivots = m.rref();
        kernel_from_rref(&m, &pivots)
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn kernel_from_rref(m: &F2Matrix, pivots: &[usize]) -> Vec<F2Vector> {
    let mut is_pivot = vec![false; m.cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = F2Vector::zeros(m.cols);
            v.set(free, true);
            for (row, &p) in pivots.iter().enumerate() {
                if m.get(row, free) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(F2Vector),
    /// Consistent but underdetermined: every solution is `particular` plus
    /// a combination of `kernel`.
    Family {
        particular: F2Vector,
        kernel: Vec<F2Vector>,
    },
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub rank: usize,
    pub kernel: Vec<F2Vector>,
    pub solution: LinearSolution,
}

impl SolveReport {
    pub fn particular(&self) -> Option<&F2Vector> {
        match &self.solution {
            LinearSolution::Unique(v) | LinearSolution::Family { particular: v, .. } => Some(v),
            LinearSolution::Inconsistent => None,
        }
    }
}

/// Solves `M s = b` over GF(2) by Gaussian elimination on the augmented
/// matrix. Free variables are set to zero in the particular solution.
pub fn solve_linear(m: &F2Matrix, b: &F2Vector) -> Result<SolveReport> {
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch {
            expected: m.rows,
            actual: b.len(),
        });
    }
    let cols = m.cols;
    let mut aug = F2Matrix::zeros(m.rows, cols + 1);
    for r in 0..m.rows {
        for c in 0..cols {
            if m.get(r, c) {
                aug.set(r, c, true);
            }
        }
        if b.get(r) {
            aug.set(r, cols, true);
        }
    }
    let mut pivots = aug.rref();
    let inconsistent = pivots.last() == Some(&cols);
    if inconsistent {
        pivots.pop();
    }
    let rank = pivots.len();

    // Kernel of M: the augmented column never acts as a free variable.
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let kernel: Vec<F2Vector> = (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = F2Vector::zeros(cols);
            v.set(free, true);
            for (row, &p) in pivots.iter().enumerate() {
                if aug.get(row, free) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect();

    let solution = if inconsistent {
        LinearSolution::Inconsistent
    } else {
        let mut s = F2Vector::zeros(cols);
        for (row, &p) in pivots.iter().enumerate() {
            if aug.get(row, cols) {
                s.set(p, true);
            }
        }
        if kernel.is_empty() {
            LinearSolution::Unique(s)
        } else {
            LinearSolution::Family {
                particular: s,
                kernel: kernel.clone(),
            }
        }
    };
    Ok(SolveReport {
        rank,
        kernel,
        solution,
    })
}
