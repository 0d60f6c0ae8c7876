use num_rational::Rational64;

use crate::error::{Error, Result};

/// The intersection form of the cobordism built from `n - 1` handles, with
/// the quantities read off from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CobordismData {
    pub n: i64,
    pub intersection_matrix: Vec<Vec<i64>>,
    /// Leading principal minors, computed exactly.
    pub leading_minors: Vec<i128>,
    pub determinant: i128,
    /// All diagonal entries even.
    pub spin_even: bool,
    /// Leading minors alternate in sign starting negative.
    pub definite: bool,
    pub signature: i64,
    pub euler_characteristic: i64,
    /// `(2σ + 3χ) / 4`.
    pub shift: Rational64,
}

/// Shift of the cobordism map, with a warning when `n` is even.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CobordismShift {
    pub n: i64,
    pub shift: Rational64,
    pub warning: Option<String>,
}

/// Determinant of an integer matrix by fraction-free elimination.
fn bareiss_determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// The matrix with `-2` on the diagonal and `-1` elsewhere, of size `n - 1`.
pub fn intersection_form_w1n(n: i64) -> Result<CobordismData> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!("n must be at least 1, got {n}")));
    }
    let size = (n - 1) as usize;
    let matrix: Vec<Vec<i64>> = (0..size).map(|i| (0..size).map(|j| if i == j { -2 } else { -1 }).collect()).collect();
    let leading_minors: Vec<i128> = (1..=size)
        .map(|k| bareiss_determinant(&matrix[..k].iter().map(|r| r[..k].to_vec()).collect::<Vec<_>>()))
        .collect();
    let definite = leading_minors.iter().enumerate().all(|(k, &d)| if k % 2 == 0 { d < 0 } else { d > 0 });
    let spin_even = (0..size).all(|i| matrix[i][i] % 2 == 0);
    let determinant = bareiss_determinant(&matrix);
    let signature = if definite { -(size as i64) } else { 0 };
    let euler_characteristic = size as i64;
    let shift = Rational64::new(2 * signature + 3 * euler_characteristic, 4);
    Ok(CobordismData {
        n,
        intersection_matrix: matrix,
        leading_minors,
        determinant,
        spin_even,
        definite,
        signature,
        euler_characteristic,
        shift,
    })
}

/// `(n - 1) / 4`; even `n` is allowed but flagged, since the spin structure
/// then does not restrict to the self-conjugate one on the far end.
pub fn cobordism_shift(n: i64) -> Result<CobordismShift> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!("n must be at least 1, got {n}")));
    }
    let warning = (n % 2 == 0).then(|| format!("n = {n} is even; the shift is only meaningful for odd n"));
    Ok(CobordismShift { n, shift: Rational64::new(n - 1, 4), warning })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_forms() {
        let d = intersection_form_w1n(2).unwrap();
        assert_eq!(d.intersection_matrix, vec![vec![-2]]);
        assert!(d.definite && d.spin_even);
        let d = intersection_form_w1n(4).unwrap();
        assert_eq!(d.determinant, -4);
        assert_eq!(d.leading_minors, vec![-2, 3, -4]);
        assert!(d.definite);
    }

    #[test]
    fn shifts() {
        assert_eq!(cobordism_shift(5).unwrap().shift, Rational64::from_integer(1));
        assert_eq!(cobordism_shift(1).unwrap().shift, Rational64::from_integer(0));
        let s = cobordism_shift(4).unwrap();
        assert_eq!(s.shift, Rational64::new(3, 4));
        assert!(s.warning.is_some());
        assert!(cobordism_shift(0).is_err());
    }

    #[test]
    fn bareiss_handles_pivoting() {
        assert_eq!(bareiss_determinant(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(bareiss_determinant(&[vec![2, 3], vec![4, 6]]), 0);
    }
}
