use std::collections::BTreeSet;

use cfk_core::*;
use proptest::prelude::*;

type Terms = BTreeSet<(u32, u32)>;

fn to_terms(raw: &[(u32, u32)]) -> Terms {
    let mut out = Terms::new();
    for &t in raw {
        if !out.remove(&t) {
            out.insert(t);
        }
    }
    out
}

fn to_poly(t: &Terms) -> Poly {
    Poly::from_terms(Ring::TwoVariable, t.iter().map(|&(u, v)| Monomial::new(u, v))).unwrap()
}

fn oracle_mul(a: &Terms, b: &Terms) -> Terms {
    let raw: Vec<(u32, u32)> = a.iter().flat_map(|x| b.iter().map(move |y| (x.0 + y.0, x.1 + y.1))).collect();
    to_terms(&raw)
}

fn poly_terms() -> impl Strategy<Value = Terms> {
    prop::collection::vec((0u32..=3, 0u32..=3), 0..6).prop_map(|v| to_terms(&v))
}

fn f2_matrix(max: usize) -> impl Strategy<Value = F2Matrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::bool::ANY, r * c).prop_map(move |bits| {
            let mut m = F2Matrix::zeros(r, c);
            for (k, b) in bits.into_iter().enumerate() {
                m.set(k / c, k % c, b);
            }
            m
        })
    })
}

/// A homogeneous matrix over F2[U] for a map of degree -1, with no unit entries.
fn graded_fu_matrix() -> impl Strategy<Value = (MonomialMatrix, Vec<i64>, Vec<i64>)> {
    (prop::collection::vec(-4i64..=4, 1..6), prop::collection::vec(-4i64..=4, 1..6), any::<u64>()).prop_map(
        |(rows, cols, seed)| {
            let mut a = MonomialMatrix::zeros(Ring::OneVariable, rows.len(), cols.len());
            let mut bits = seed;
            for (r, &gr) in rows.iter().enumerate() {
                for (c, &gc) in cols.iter().enumerate() {
                    let gap = gr - gc + 1;
                    let take = bits & 1 == 1;
                    bits = bits.rotate_right(1) ^ 0x9e37_79b9_7f4a_7c15;
                    if gap >= 2 && gap % 2 == 0 && take {
                        a.add_monomial(r, c, Monomial::u_power((gap / 2) as u32));
                    }
                }
            }
            (a, rows, cols)
        },
    )
}

proptest! {
    #[test]
    fn poly_addition_matches_symmetric_difference(a in poly_terms(), b in poly_terms()) {
        let sum = to_poly(&a).add(&to_poly(&b)).unwrap();
        let expected: Terms = a.symmetric_difference(&b).copied().collect();
        prop_assert_eq!(sum, to_poly(&expected));
    }

    #[test]
    fn poly_multiplication_matches_term_expansion(a in poly_terms(), b in poly_terms()) {
        let product = to_poly(&a).mul(&to_poly(&b)).unwrap();
        prop_assert_eq!(product, to_poly(&oracle_mul(&a, &b)));
    }

    #[test]
    fn poly_ring_laws(a in poly_terms(), b in poly_terms(), c in poly_terms()) {
        let (p, q, r) = (to_poly(&a), to_poly(&b), to_poly(&c));
        prop_assert_eq!(p.mul(&q).unwrap(), q.mul(&p).unwrap());
        prop_assert_eq!(p.mul(&q).unwrap().mul(&r).unwrap(), p.mul(&q.mul(&r).unwrap()).unwrap());
        prop_assert_eq!(p.mul(&q.add(&r).unwrap()).unwrap(), p.mul(&q).unwrap().add(&p.mul(&r).unwrap()).unwrap());
        prop_assert!(p.add(&p).unwrap().is_zero());
    }

    #[test]
    fn f2_solve_finds_consistent_solutions(a in f2_matrix(8), seed in any::<u64>()) {
        let x0 = F2Vec::from_indices(a.ncols(), (0..a.ncols()).filter(|i| seed >> i & 1 == 1));
        let b = a.mul_vec(&x0);
        let x = f2_solve(&a, &b).expect("consistent system");
        prop_assert_eq!(a.mul_vec(&x), b);
    }

    #[test]
    fn f2_kernel_is_a_basis_of_the_null_space(a in f2_matrix(8)) {
        let kernel = f2_kernel(&a);
        prop_assert_eq!(kernel.len(), a.ncols() - a.rank());
        let mut span = Span::new();
        for v in &kernel {
            prop_assert!(a.mul_vec(v).is_zero());
            prop_assert!(span.insert(v));
        }
    }

    #[test]
    fn f2_solve_rejects_inconsistent_systems(a in f2_matrix(6), seed in any::<u64>()) {
        let b = F2Vec::from_indices(a.nrows(), (0..a.nrows()).filter(|i| seed >> i & 1 == 1));
        let augmented = {
            let mut m = F2Matrix::zeros(a.nrows(), a.ncols() + 1);
            for r in 0..a.nrows() {
                for c in 0..a.ncols() {
                    m.set(r, c, a.get(r, c));
                }
                m.set(r, a.ncols(), b.get(r));
            }
            m
        };
        prop_assert_eq!(f2_solve(&a, &b).is_some(), augmented.rank() == a.rank());
    }

    #[test]
    fn smith_form_transforms_are_exact((a, rows, cols) in graded_fu_matrix()) {
        let snf = snf_over_fu(&a, &rows, &cols, -1).unwrap();
        prop_assert!(snf.verify(&a).unwrap());
        prop_assert!(snf.diagonal.iter().all(|&k| k >= 1));
        prop_assert!(snf.rank() <= rows.len().min(cols.len()));
    }
}

#[test]
fn sum_of_one_plus_uv_and_uv_is_one() {
    let uv = Poly::monomial(Ring::TwoVariable, Monomial::new(1, 1)).unwrap();
    let p = Poly::one(Ring::TwoVariable).add(&uv).unwrap();
    assert_eq!(p.add(&uv).unwrap(), Poly::one(Ring::TwoVariable));
}

#[test]
fn v_is_not_in_the_one_variable_ring() {
    assert!(Poly::monomial(Ring::OneVariable, Monomial::new(0, 1)).is_err());
}

#[test]
fn f2_solve_small_systems() {
    let a = F2Matrix::from_dense(&[&[1, 1], &[0, 1]]);
    let x = f2_solve(&a, &F2Vec::from_bits(&[true, true])).unwrap();
    assert_eq!(x, F2Vec::from_bits(&[false, true]));
    let singular = F2Matrix::from_dense(&[&[1, 1], &[1, 1]]);
    assert!(f2_solve(&singular, &F2Vec::from_bits(&[true, false])).is_none());
    assert_eq!(f2_kernel(&singular), vec![F2Vec::from_bits(&[true, true])]);
}

#[test]
fn smith_form_of_a_row_of_us() {
    let mut a = MonomialMatrix::zeros(Ring::OneVariable, 1, 2);
    a.add_monomial(0, 0, Monomial::u_power(1));
    a.add_monomial(0, 1, Monomial::u_power(1));
    let snf = snf_over_fu(&a, &[2], &[1, 1], -1).unwrap();
    assert_eq!(snf.diagonal, vec![1]);
    assert!(snf.verify(&a).unwrap());
}
