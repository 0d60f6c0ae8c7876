//! Dense linear algebra over F2 on bit-packed rows.

use std::fmt;

/// A vector over F2 of fixed length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Vec {
    len: usize,
    words: Vec<u64>,
}

impl F2Vec {
    pub fn zeros(len: usize) -> Self {
        F2Vec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = F2Vec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = F2Vec::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &F2Vec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn dot(&self, other: &F2Vec) -> bool {
        let ones: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        ones % 2 == 1
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + t)
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        self.ones().next()
    }

    /// Copy of the coordinates in `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> F2Vec {
        F2Vec::from_indices(range.len(), self.ones().filter(|i| range.contains(i)).map(|i| i - range.start))
    }
}

impl fmt::Debug for F2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Row-major matrix over F2.
#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    ncols: usize,
    rows: Vec<F2Vec>,
}

impl F2Matrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        F2Matrix { ncols, rows: vec![F2Vec::zeros(ncols); nrows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = F2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(ncols: usize, rows: Vec<F2Vec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols));
        F2Matrix { ncols, rows }
    }

    pub fn from_dense(rows: &[&[u8]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| F2Vec::from_bits(&r.iter().map(|&b| b != 0).collect::<Vec<_>>())).collect();
        F2Matrix::from_rows(ncols, rows)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.rows[r].flip(c)
    }

    pub fn row(&self, r: usize) -> &F2Vec {
        &self.rows[r]
    }

    pub fn push_row(&mut self, row: F2Vec) {
        assert_eq!(row.len(), self.ncols);
        self.rows.push(row);
    }

    pub fn column(&self, c: usize) -> F2Vec {
        F2Vec::from_indices(self.nrows(), (0..self.nrows()).filter(|&r| self.get(r, c)))
    }

    pub fn mul_vec(&self, x: &F2Vec) -> F2Vec {
        assert_eq!(x.len(), self.ncols);
        F2Vec::from_indices(self.nrows(), (0..self.nrows()).filter(|&r| self.rows[r].dot(x)))
    }

    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.ncols, other.nrows());
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut out = F2Vec::zeros(other.ncols);
                for k in row.ones() {
                    out.xor_assign(&other.rows[k]);
                }
                out
            })
            .collect();
        F2Matrix { ncols: other.ncols, rows }
    }

    pub fn add(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!((self.nrows(), self.ncols), (other.nrows(), other.ncols));
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&other.rows) {
            a.xor_assign(b);
        }
        out
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.ncols, self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn rank(&self) -> usize {
        Elimination::new(self).rank()
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.nrows(), self.ncols)?;
        for row in &self.rows {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

/// Reduced row echelon form of a matrix, kept together with the row
/// operations that produced it so that many right-hand sides can be solved
/// against the same matrix.
#[derive(Clone, Debug)]
pub struct Elimination {
    ncols: usize,
    nrows: usize,
    /// Reduced rows; row `i` has its pivot in column `pivots[i]`.
    reduced: Vec<F2Vec>,
    pivots: Vec<usize>,
    /// `transform[i]` expresses reduced row `i` as a combination of original rows.
    transform: Vec<F2Vec>,
    /// Combinations of original rows that vanish (left kernel).
    left_kernel: Vec<F2Vec>,
}

impl Elimination {
    /// Pivots are chosen column by column from the left, taking the first
    /// available row, so the result only depends on the input ordering.
    pub fn new(a: &F2Matrix) -> Self {
        let nrows = a.nrows();
        let mut rows: Vec<(F2Vec, F2Vec)> =
            a.rows.iter().enumerate().map(|(i, r)| (r.clone(), F2Vec::from_indices(nrows, [i]))).collect();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..a.ncols {
            let Some(found) = (next..rows.len()).find(|&r| rows[r].0.get(col)) else {
                continue;
            };
            rows.swap(next, found);
            let (pivot_row, pivot_tr) = rows[next].clone();
            for (r, (row, tr)) in rows.iter_mut().enumerate() {
                if r != next && row.get(col) {
                    row.xor_assign(&pivot_row);
                    tr.xor_assign(&pivot_tr);
                }
            }
            pivots.push(col);
            next += 1;
        }
        let left_kernel = rows[next..].iter().map(|(_, tr)| tr.clone()).collect();
        rows.truncate(next);
        let (reduced, transform) = rows.into_iter().unzip();
        Elimination { ncols: a.ncols, nrows, reduced, pivots, transform, left_kernel }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// One solution of `A x = b` with every free variable set to zero.
    pub fn solve(&self, b: &F2Vec) -> Option<F2Vec> {
        assert_eq!(b.len(), self.nrows);
        if self.left_kernel.iter().any(|k| k.dot(b)) {
            return None;
        }
        let mut x = F2Vec::zeros(self.ncols);
        for (tr, &col) in self.transform.iter().zip(&self.pivots) {
            if tr.dot(b) {
                x.set(col, true);
            }
        }
        Some(x)
    }

    /// Basis of the right kernel, one vector per free column in increasing order.
    pub fn kernel(&self) -> Vec<F2Vec> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = F2Vec::from_indices(self.ncols, [free]);
                for (row, &p) in self.reduced.iter().zip(&self.pivots) {
                    if row.get(free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }
}

/// Solve `A x = b` over F2. `None` means the system is inconsistent.
pub fn f2_solve(a: &F2Matrix, b: &F2Vec) -> Option<F2Vec> {
    Elimination::new(a).solve(b)
}

/// Basis of `ker A`.
pub fn f2_kernel(a: &F2Matrix) -> Vec<F2Vec> {
    Elimination::new(a).kernel()
}

/// Incremental span membership test: keeps an echelon basis of the vectors
/// inserted so far.
#[derive(Clone, Debug, Default)]
pub struct Span {
    basis: Vec<(usize, F2Vec)>,
}

impl Span {
    pub fn new() -> Self {
        Span::default()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn reduce(&self, v: &F2Vec) -> F2Vec {
        let mut v = v.clone();
        for (p, b) in &self.basis {
            if v.get(*p) {
                v.xor_assign(b);
            }
        }
        v
    }

    pub fn contains(&self, v: &F2Vec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &F2Vec) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.first_one() else {
            return false;
        };
        for (_, b) in self.basis.iter_mut() {
            if b.get(p) {
                b.xor_assign(&r);
            }
        }
        self.basis.push((p, r));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_system() {
        let a = F2Matrix::identity(3);
        let b = F2Vec::from_bits(&[true, false, true]);
        assert_eq!(f2_solve(&a, &b), Some(b));
    }

    #[test]
    fn parity_equation_kernel() {
        let a = F2Matrix::from_dense(&[&[1, 1]]);
        assert_eq!(f2_kernel(&a), vec![F2Vec::from_bits(&[true, true])]);
        assert_eq!(f2_solve(&a, &F2Vec::zeros(1)), Some(F2Vec::zeros(2)));
    }

    #[test]
    fn inconsistent_system_is_none() {
        let a = F2Matrix::from_dense(&[&[1, 1], &[1, 1]]);
        assert_eq!(f2_solve(&a, &F2Vec::from_bits(&[true, false])), None);
    }

    #[test]
    fn id_plus_iota_kernel_has_dimension_three() {
        // (id + iota) on H(A0) of the doubled figure-eight, ordered basis
        // [x|x], [x|d], [d|x], [a|d+d|a+b|b+c|c], [d|d].
        let a = F2Matrix::from_dense(&[
            &[0, 0, 0, 0, 0],
            &[1, 0, 0, 1, 0],
            &[1, 0, 0, 1, 0],
            &[0, 0, 0, 0, 0],
            &[1, 1, 1, 0, 0],
        ]);
        let ker = f2_kernel(&a);
        assert_eq!(ker.len(), 3);
        for v in &ker {
            assert!(a.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn span_membership() {
        let mut s = Span::new();
        assert!(s.insert(&F2Vec::from_bits(&[true, true, false])));
        assert!(s.insert(&F2Vec::from_bits(&[false, true, true])));
        assert!(s.contains(&F2Vec::from_bits(&[true, false, true])));
        assert!(!s.insert(&F2Vec::from_bits(&[true, false, true])));
        assert!(!s.contains(&F2Vec::from_bits(&[true, false, false])));
    }
}
