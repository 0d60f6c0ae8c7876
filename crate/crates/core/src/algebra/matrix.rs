//! Sparse matrices with polynomial entries, stored column by column.
//!
//! Column `j` is the image of the `j`-th source basis element; absent
//! entries are zero.

use std::collections::BTreeMap;

use super::f2::F2Matrix;
use super::poly::{Monomial, Poly, Ring};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMatrix {
    ring: Ring,
    nrows: usize,
    cols: Vec<BTreeMap<usize, Poly>>,
}

impl MonomialMatrix {
    pub fn zeros(ring: Ring, nrows: usize, ncols: usize) -> Self {
        MonomialMatrix { ring, nrows, cols: vec![BTreeMap::new(); ncols] }
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        let mut m = MonomialMatrix::zeros(ring, n, n);
        for i in 0..n {
            m.add_monomial(i, i, Monomial::ONE);
        }
        m
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&Poly> {
        self.cols[col].get(&row)
    }

    /// Non-zero entries of column `col`, by increasing row.
    pub fn column(&self, col: usize) -> &BTreeMap<usize, Poly> {
        &self.cols[col]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Poly)> + '_ {
        self.cols.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, p)| (*r, c, p)))
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn add_entry(&mut self, row: usize, col: usize, p: &Poly) {
        assert!(row < self.nrows && col < self.cols.len(), "entry ({row}, {col}) out of range");
        if p.is_zero() {
            return;
        }
        let column = &mut self.cols[col];
        match column.get_mut(&row) {
            Some(existing) => {
                existing.add_assign(p);
                if existing.is_zero() {
                    column.remove(&row);
                }
            }
            None => {
                column.insert(row, p.clone());
            }
        }
    }

    pub fn add_monomial(&mut self, row: usize, col: usize, m: Monomial) {
        let p = Poly::monomial(self.ring, m).expect("monomial outside the matrix ring");
        self.add_entry(row, col, &p);
    }

    pub fn set_column(&mut self, col: usize, entries: BTreeMap<usize, Poly>) {
        self.cols[col] = entries.into_iter().filter(|(_, p)| !p.is_zero()).collect();
    }

    pub fn add(&self, other: &MonomialMatrix) -> Result<MonomialMatrix> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (r, c, p) in other.entries() {
            out.add_entry(r, c, p);
        }
        Ok(out)
    }

    fn check_same_shape(&self, other: &MonomialMatrix) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring, other.ring));
        }
        if (self.nrows, self.ncols()) != (other.nrows, other.ncols()) {
            return Err(Error::Incompatible(format!(
                "shapes {}x{} and {}x{}",
                self.nrows,
                self.ncols(),
                other.nrows,
                other.ncols()
            )));
        }
        Ok(())
    }

    /// `self * other`, optionally swapping U and V in the entries of `other`
    /// first (composition after a skew-equivariant map).
    pub fn mul_twisted(&self, other: &MonomialMatrix, swap_right: bool) -> Result<MonomialMatrix> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring, other.ring));
        }
        if self.ncols() != other.nrows {
            return Err(Error::Incompatible(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows,
                self.ncols(),
                other.nrows,
                other.ncols()
            )));
        }
        let mut out = MonomialMatrix::zeros(self.ring, self.nrows, other.ncols());
        for (j, col) in other.cols.iter().enumerate() {
            let mut acc: BTreeMap<usize, Poly> = BTreeMap::new();
            for (k, q) in col {
                let q = if swap_right { q.swap() } else { q.clone() };
                for (i, p) in &self.cols[*k] {
                    let prod = p.mul(&q)?;
                    acc.entry(*i).or_insert_with(|| Poly::zero(self.ring)).add_assign(&prod);
                }
            }
            out.set_column(j, acc);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &MonomialMatrix) -> Result<MonomialMatrix> {
        self.mul_twisted(other, false)
    }

    pub fn transpose(&self) -> MonomialMatrix {
        let mut t = MonomialMatrix::zeros(self.ring, self.ncols(), self.nrows);
        for (r, c, p) in self.entries() {
            t.add_entry(c, r, p);
        }
        t
    }

    /// Swap U and V in every entry.
    pub fn swap_variables(&self) -> MonomialMatrix {
        MonomialMatrix {
            ring: self.ring,
            nrows: self.nrows,
            cols: self.cols.iter().map(|c| c.iter().map(|(r, p)| (*r, p.swap())).collect()).collect(),
        }
    }

    pub fn map_entries(&self, f: impl Fn(&Poly) -> Poly) -> MonomialMatrix {
        let mut out = MonomialMatrix::zeros(self.ring, self.nrows, self.ncols());
        for (r, c, p) in self.entries() {
            out.add_entry(r, c, &f(p));
        }
        out
    }

    /// The F2 matrix of a matrix whose entries are all 0 or 1.
    pub fn to_f2(&self) -> Result<F2Matrix> {
        let mut m = F2Matrix::zeros(self.nrows, self.ncols());
        for (r, c, p) in self.entries() {
            if !p.is_one() {
                return Err(Error::Precondition(format!("entry ({r}, {c}) = {p} is not in F2")));
            }
            m.set(r, c, true);
        }
        Ok(m)
    }

    pub fn from_f2(ring: Ring, m: &F2Matrix) -> Self {
        let mut out = MonomialMatrix::zeros(ring, m.nrows(), m.ncols());
        for r in 0..m.nrows() {
            for c in m.row(r).ones() {
                out.add_monomial(r, c, Monomial::ONE);
            }
        }
        out
    }
}
