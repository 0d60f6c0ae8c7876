//! Smith normal form over F2[U] for grading-homogeneous matrices whose
//! entries are zero or a single power `U^k`, `k >= 1`.
//!
//! Homogeneity is what keeps the elimination monomial: two entries that are
//! added together always sit in the same degree, so their sum is either the
//! same monomial or zero.

use super::matrix::MonomialMatrix;
use super::poly::{Monomial, Ring};
use crate::error::{Error, Result};

/// Dense matrix of optional U-powers, used while eliminating.
#[derive(Clone, Debug)]
struct PowerMatrix {
    cells: Vec<Vec<Option<u32>>>,
}

impl PowerMatrix {
    fn new(nrows: usize, ncols: usize) -> Self {
        PowerMatrix { cells: vec![vec![None; ncols]; nrows] }
    }

    fn identity(n: usize) -> Self {
        let mut m = PowerMatrix::new(n, n);
        for i in 0..n {
            m.cells[i][i] = Some(0);
        }
        m
    }

    fn toggle(&mut self, r: usize, c: usize, k: u32) -> Result<()> {
        let cell = &mut self.cells[r][c];
        *cell = match *cell {
            None => Some(k),
            Some(q) if q == k => None,
            Some(q) => return Err(Error::Internal(format!("inhomogeneous sum U^{q} + U^{k} during elimination"))),
        };
        Ok(())
    }

    /// row `dst` += U^p row `src`
    fn add_row(&mut self, dst: usize, src: usize, p: u32) -> Result<()> {
        for c in 0..self.cells[src].len() {
            if let Some(q) = self.cells[src][c] {
                self.toggle(dst, c, p + q)?;
            }
        }
        Ok(())
    }

    /// column `dst` += U^p column `src`
    fn add_col(&mut self, dst: usize, src: usize, p: u32) -> Result<()> {
        for r in 0..self.cells.len() {
            if let Some(q) = self.cells[r][src] {
                self.toggle(r, dst, p + q)?;
            }
        }
        Ok(())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.cells.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for row in &mut self.cells {
            row.swap(a, b);
        }
    }

    fn to_matrix(&self, ncols: usize) -> MonomialMatrix {
        let mut m = MonomialMatrix::zeros(Ring::OneVariable, self.cells.len(), ncols);
        for (r, row) in self.cells.iter().enumerate() {
            for (c, cell) in row.iter().enumerate() {
                if let Some(k) = cell {
                    m.add_monomial(r, c, Monomial::u_power(*k));
                }
            }
        }
        m
    }
}

/// Output of [`snf_over_fu`]: `row_transform * A * col_transform` is
/// diagonal with entries `U^{diagonal[i]}` in positions `(i, i)`,
/// `i < diagonal.len()`, and zero elsewhere.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub diagonal: Vec<u32>,
    pub row_transform: MonomialMatrix,
    pub row_inverse: MonomialMatrix,
    pub col_transform: MonomialMatrix,
    pub col_inverse: MonomialMatrix,
    /// Gradings of the new row basis `row_inverse * e_i`.
    pub row_gradings: Vec<i64>,
    /// Gradings of the new column basis `col_transform * e_j`.
    pub col_gradings: Vec<i64>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// The diagonal matrix `D`.
    pub fn diagonal_matrix(&self) -> MonomialMatrix {
        let mut d = MonomialMatrix::zeros(Ring::OneVariable, self.row_transform.nrows(), self.col_transform.ncols());
        for (i, k) in self.diagonal.iter().enumerate() {
            d.add_monomial(i, i, Monomial::u_power(*k));
        }
        d
    }

    /// Recomputes `P A Q = D`, `P P^-1 = 1` and `Q Q^-1 = 1` exactly.
    pub fn verify(&self, a: &MonomialMatrix) -> Result<bool> {
        let paq = self.row_transform.mul(a)?.mul(&self.col_transform)?;
        let n = a.nrows();
        let m = a.ncols();
        Ok(paq == self.diagonal_matrix()
            && self.row_transform.mul(&self.row_inverse)? == MonomialMatrix::identity(Ring::OneVariable, n)
            && self.row_inverse.mul(&self.row_transform)? == MonomialMatrix::identity(Ring::OneVariable, n)
            && self.col_transform.mul(&self.col_inverse)? == MonomialMatrix::identity(Ring::OneVariable, m)
            && self.col_inverse.mul(&self.col_transform)? == MonomialMatrix::identity(Ring::OneVariable, m))
    }
}

/// Smith normal form of a homogeneous matrix over F2[U].
///
/// Entry `(r, c) = U^k` must satisfy `row_gradings[r] - 2k = col_gradings[c] + degree`.
/// Pivots are always a lowest U-power entry, ties broken by smallest
/// `(row, col)` in the current ordering.
pub fn snf_over_fu(a: &MonomialMatrix, row_gradings: &[i64], col_gradings: &[i64], degree: i64) -> Result<SmithForm> {
    if a.ring() != Ring::OneVariable {
        return Err(Error::RingMismatch(a.ring(), Ring::OneVariable));
    }
    let (n, m) = (a.nrows(), a.ncols());
    if row_gradings.len() != n || col_gradings.len() != m {
        return Err(Error::Structure("grading vectors do not match the matrix shape".into()));
    }
    let mut work = PowerMatrix::new(n, m);
    for (r, c, p) in a.entries() {
        let mono =
            p.as_monomial().ok_or_else(|| Error::Precondition(format!("entry ({r}, {c}) = {p} is not a monomial")))?;
        if mono.u == 0 {
            return Err(Error::Precondition(format!(
                "entry ({r}, {c}) is a unit; reduce the complex before taking Smith normal form"
            )));
        }
        if row_gradings[r] - 2 * mono.u as i64 != col_gradings[c] + degree {
            return Err(Error::Precondition(format!("entry ({r}, {c}) = {p} is not homogeneous")));
        }
        work.cells[r][c] = Some(mono.u);
    }

    let mut p = PowerMatrix::identity(n);
    let mut p_inv = PowerMatrix::identity(n);
    let mut q = PowerMatrix::identity(m);
    let mut q_inv = PowerMatrix::identity(m);
    let mut rg = row_gradings.to_vec();
    let mut cg = col_gradings.to_vec();
    let mut diagonal = Vec::new();

    for t in 0..n.min(m) {
        let mut best: Option<(u32, usize, usize)> = None;
        for r in t..n {
            for c in t..m {
                if let Some(k) = work.cells[r][c] {
                    if best.is_none_or(|(bk, _, _)| k < bk) {
                        best = Some((k, r, c));
                    }
                }
            }
        }
        let Some((k, r, c)) = best else { break };

        if r != t {
            work.swap_rows(r, t);
            p.swap_rows(r, t);
            p_inv.swap_cols(r, t);
            rg.swap(r, t);
        }
        if c != t {
            work.swap_cols(c, t);
            q.swap_cols(c, t);
            q_inv.swap_rows(c, t);
            cg.swap(c, t);
        }

        for i in 0..n {
            if i == t {
                continue;
            }
            if let Some(ki) = work.cells[i][t] {
                let s = ki - k;
                work.add_row(i, t, s)?;
                p.add_row(i, t, s)?;
                p_inv.add_col(t, i, s)?;
            }
        }
        for j in 0..m {
            if j == t {
                continue;
            }
            if let Some(kj) = work.cells[t][j] {
                let s = kj - k;
                work.add_col(j, t, s)?;
                q.add_col(j, t, s)?;
                q_inv.add_row(t, j, s)?;
            }
        }
        diagonal.push(k);
    }

    Ok(SmithForm {
        diagonal,
        row_transform: p.to_matrix(n),
        row_inverse: p_inv.to_matrix(n),
        col_transform: q.to_matrix(m),
        col_inverse: q_inv.to_matrix(m),
        row_gradings: rg,
        col_gradings: cg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(k: u32) -> Monomial {
        Monomial::u_power(k)
    }

    #[test]
    fn already_diagonal() {
        let mut a = MonomialMatrix::zeros(Ring::OneVariable, 1, 1);
        a.add_monomial(0, 0, u(1));
        let s = snf_over_fu(&a, &[2], &[1], -1).unwrap();
        assert_eq!(s.diagonal, vec![1]);
        assert_eq!(s.row_transform, MonomialMatrix::identity(Ring::OneVariable, 1));
        assert_eq!(s.col_transform, MonomialMatrix::identity(Ring::OneVariable, 1));
        assert!(s.verify(&a).unwrap());
    }

    #[test]
    fn row_vector_clears_second_column() {
        // [[U, U]]: the column transform adds column 1 to column 2.
        let mut a = MonomialMatrix::zeros(Ring::OneVariable, 1, 2);
        a.add_monomial(0, 0, u(1));
        a.add_monomial(0, 1, u(1));
        let s = snf_over_fu(&a, &[2], &[1, 1], -1).unwrap();
        assert_eq!(s.diagonal, vec![1]);
        let mut expected_q = MonomialMatrix::identity(Ring::OneVariable, 2);
        expected_q.add_monomial(0, 1, Monomial::ONE);
        assert_eq!(s.col_transform, expected_q);
        assert!(s.verify(&a).unwrap());
    }

    #[test]
    fn diagonal_is_sorted() {
        let mut a = MonomialMatrix::zeros(Ring::OneVariable, 2, 2);
        a.add_monomial(0, 0, u(2));
        a.add_monomial(1, 1, u(1));
        let s = snf_over_fu(&a, &[4, 2], &[1, 1], -1).unwrap();
        assert_eq!(s.diagonal, vec![1, 2]);
        assert!(s.verify(&a).unwrap());
    }

    #[test]
    fn inhomogeneous_input_rejected() {
        let mut a = MonomialMatrix::zeros(Ring::OneVariable, 1, 1);
        a.add_monomial(0, 0, u(2));
        assert!(matches!(snf_over_fu(&a, &[0], &[1], -1), Err(Error::Precondition(_))));
    }

    #[test]
    fn mixed_torsion_block() {
        // [[U, U^2], [0, U]] with gradings making it homogeneous: rank 2, diag (U, U).
        let mut a = MonomialMatrix::zeros(Ring::OneVariable, 2, 2);
        a.add_monomial(0, 0, u(1));
        a.add_monomial(0, 1, u(2));
        a.add_monomial(1, 1, u(1));
        let s = snf_over_fu(&a, &[2, 0], &[1, -1], -1).unwrap();
        assert_eq!(s.diagonal, vec![1, 1]);
        assert!(s.verify(&a).unwrap());
    }

    #[test]
    fn unit_entries_rejected() {
        let mut a = MonomialMatrix::zeros(Ring::OneVariable, 1, 1);
        a.add_monomial(0, 0, Monomial::ONE);
        assert!(matches!(snf_over_fu(&a, &[0], &[1], -1), Err(Error::Precondition(_))));
    }
}
