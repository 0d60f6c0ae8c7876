use std::sync::{Arc, OnceLock};

use cfk_core::sample::{random_chain_endomorphism, random_complex, sample_knot, scramble_surgery_with_map, SampleKnot};
use cfk_core::*;
use num_rational::Rational64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `A₀` of the double of each sample knot, computed once.
fn sample_a0(kind: usize) -> &'static SurgeryComplex {
    static CACHE: OnceLock<Vec<SurgeryComplex>> = OnceLock::new();
    &CACHE.get_or_init(|| {
        SampleKnot::ALL
            .iter()
            .map(|&k| extract_a0(&double(&sample_knot(k).unwrap(), Convention::Thm31).unwrap()).unwrap())
            .collect()
    })[kind]
}

fn u_times(chain: &Chain, k: u32) -> Chain {
    chain.iter().map(|(i, p)| (*i, p.mul_monomial(Monomial::u_power(k)))).collect()
}

/// A random homogeneous chain of the given grading.
fn random_chain(c: &Complex, grading: i64, rng: &mut impl Rng) -> Chain {
    let mut out = Chain::new();
    for h in 0..c.len() {
        let gap = c.maslov(h) - grading;
        if gap >= 0 && gap % 2 == 0 && rng.gen_bool(0.5) {
            out.insert(h, Poly::monomial(Ring::OneVariable, Monomial::u_power((gap / 2) as u32)).unwrap());
        }
    }
    out
}

fn add_chains(a: &Chain, b: &Chain) -> Chain {
    let mut out = a.clone();
    chain_add_scaled(&mut out, b, &Poly::one(Ring::OneVariable));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn homology_generators_round_trip(seed in any::<u64>()) {
        let c = random_complex(Ring::OneVariable, 6, true, &mut rng(seed)).unwrap();
        let h = Homology::compute(&c).unwrap();
        for (i, g) in h.generators().iter().enumerate() {
            prop_assert!(c.apply_differential(&g.representative).is_empty());
            prop_assert!(!h.is_boundary(&g.representative, g.grading).unwrap());
            prop_assert_eq!(h.class_of(&g.representative, g.grading).unwrap(), h.generator_class(i));
            match g.order {
                Some(k) => {
                    prop_assert!(h.is_boundary(&u_times(&g.representative, k), g.grading - 2 * k as i64).unwrap());
                    prop_assert!(!h.is_boundary(&u_times(&g.representative, k - 1), g.grading - 2 * (k as i64 - 1)).unwrap());
                }
                None => {
                    for k in 1..=4u32 {
                        prop_assert!(!h.is_boundary(&u_times(&g.representative, k), g.grading - 2 * k as i64).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn classes_ignore_boundaries(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_complex(Ring::OneVariable, 6, true, &mut r).unwrap();
        let h = Homology::compute(&c).unwrap();
        for (i, g) in h.generators().iter().enumerate() {
            let filler = random_chain(&c, g.grading + 1, &mut r);
            let moved = add_chains(&g.representative, &c.apply_differential(&filler));
            prop_assert_eq!(h.class_of(&moved, g.grading).unwrap(), h.generator_class(i));
        }
    }

    #[test]
    fn maps_homotopic_to_the_identity_induce_the_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_complex(Ring::OneVariable, 6, true, &mut r).unwrap();
        let h = Homology::compute(&c).unwrap();
        let f = random_chain_endomorphism(&c, &mut r).unwrap();
        let n = h.generators().len();
        prop_assert_eq!(h.induced_matrix(&f).unwrap(), F2Matrix::identity(n));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn obstruction_is_basis_independent(seed in any::<u64>(), kind in 0usize..4) {
        let s = sample_a0(kind);
        let (t, _) = scramble_surgery_with_map(s, &mut rng(seed)).unwrap();
        let (hs, ht) = (homology_fu(s).unwrap(), homology_fu(&t).unwrap());
        prop_assert_eq!(hs.tower_rank(), ht.tower_rank());
        prop_assert_eq!(hs.torsion(), ht.torsion());
        for sym in Symmetries::ALL {
            prop_assert_eq!(obstruct_with(s, sym).unwrap().status, obstruct_with(&t, sym).unwrap().status);
        }
    }

    #[test]
    fn local_maps_compose(seed in any::<u64>(), kind in 0usize..4) {
        let s = sample_a0(kind);
        let (t, a) = scramble_surgery_with_map(s, &mut rng(seed)).unwrap();
        let first = verify_local(s, &t, &a, Rational64::from_integer(0)).unwrap();
        prop_assert!(first.all_pass(), "{:?}", first);
        if let Some((g, report)) = find_local_map_to_trivial(&t).unwrap() {
            prop_assert!(report.all_pass());
            let composite = g.compose(&a).unwrap();
            let trivial = SurgeryComplex::trivial();
            let both = verify_local(s, &trivial, &composite, report.expected_shift).unwrap();
            prop_assert!(both.all_pass(), "{:?}", both);
        }
    }

    #[test]
    fn dual_of_a_local_map_is_local(seed in any::<u64>(), kind in 0usize..4) {
        let s = sample_a0(kind);
        let (t, a) = scramble_surgery_with_map(s, &mut rng(seed)).unwrap();
        let (ds, dt) = (dual_surgery(s).unwrap(), dual_surgery(&t).unwrap());
        let da = dual_surgery_map(&a, &ds, &dt).unwrap();
        let forward = verify_local(s, &t, &a, Rational64::from_integer(0)).unwrap();
        let backward = verify_local(&dt, &ds, &da, Rational64::from_integer(0)).unwrap();
        prop_assert_eq!(forward.conditions(), backward.conditions());
    }
}

#[test]
fn a0_of_samples_has_one_tower() {
    for kind in 0..4 {
        let h = homology_fu(sample_a0(kind)).unwrap();
        assert_eq!(h.tower_rank(), 1, "{}", SampleKnot::ALL[kind]);
    }
}

#[test]
fn only_the_figure_eight_double_is_obstructed() {
    for (kind, expected) in [(0, ObstructionStatus::Inconclusive), (3, ObstructionStatus::Obstructed)] {
        assert_eq!(obstruct_equivariant_ball(sample_a0(kind)).unwrap().status, expected);
    }
}

#[test]
fn shifted_unknot_fails_only_the_shift_condition() {
    let trivial = SurgeryComplex::trivial();
    let c = Arc::new(trivial.complex.with_shift(Rational64::from_integer(1)).unwrap());
    let id = GradedMap::identity(&c);
    let shifted = SurgeryComplex::new(c.clone(), id.clone(), id.clone()).unwrap();
    let f = GradedMap::new(
        trivial.complex.clone(),
        c.clone(),
        MapMode::Linear,
        Bigrading::ZERO,
        MonomialMatrix::identity(Ring::OneVariable, 1),
    )
    .unwrap();
    let report = verify_local(&trivial, &shifted, &f, Rational64::from_integer(0)).unwrap();
    assert_eq!(report.conditions(), [false, true, true, true]);
    let report = verify_local(&trivial, &shifted, &f, Rational64::from_integer(1)).unwrap();
    assert!(report.all_pass());
}

#[test]
fn cobordism_forms_are_definite_and_even() {
    for n in 2..=9 {
        let d = intersection_form_w1n(n).unwrap();
        assert!(d.definite && d.spin_even, "n = {n}");
        // det of -(I + J) of size n-1 is (-1)^(n-1) n
        let sign = if (n - 1) % 2 == 0 { 1 } else { -1 };
        assert_eq!(d.determinant, sign * n as i128);
        assert_eq!(d.signature, -(n - 1));
        assert_eq!(d.shift, Rational64::new(n - 1, 4));
        assert_eq!(cobordism_shift(n).unwrap().shift, d.shift);
    }
}
