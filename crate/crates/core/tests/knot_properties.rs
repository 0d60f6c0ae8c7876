use std::sync::Arc;

use cfk_core::sample::{random_iota_complex, sample_knot, scramble_iota_with_map, SampleKnot};
use cfk_core::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn doubles_of_sampled_complexes_satisfy_their_relations(seed in any::<u64>(), remark in any::<bool>()) {
        let (_, k) = random_iota_complex(&mut rng(seed)).unwrap();
        let convention = if remark { Convention::Remark32 } else { Convention::Thm31 };
        let d = double(&k, convention).unwrap();
        prop_assert!(validate_complex(&d.complex).is_valid());
        prop_assert!(d.iota.is_chain_map());
        prop_assert!(d.tau.is_chain_map());
        let report = check_iota_relations(&d.complex, &d.iota, Some(&d.tau)).unwrap();
        prop_assert!(report.all_pass(), "{:?}", report);
    }

    #[test]
    fn exchange_squares_to_the_identity(seed in any::<u64>()) {
        let (_, k) = random_iota_complex(&mut rng(seed)).unwrap();
        let t = tau_exch(&k).unwrap();
        prop_assert!(t.is_chain_map());
        prop_assert_eq!(t.compose(&t).unwrap(), GradedMap::identity(t.source()));
    }

    #[test]
    fn reflection_is_an_involution_up_to_homotopy(seed in any::<u64>()) {
        let (_, k) = random_iota_complex(&mut rng(seed)).unwrap();
        let (kr, _) = reflect(&k).unwrap();
        let (krr, _) = reflect(&kr).unwrap();
        prop_assert_eq!(krr.complex.differential(), k.complex.differential());
        let back = krr.iota.rebase(&k.complex, &k.complex).unwrap();
        prop_assert!(homotopic(&back, &k.iota).unwrap().is_some());
    }

    #[test]
    fn phi_and_psi_are_chain_maps_commuting_up_to_homotopy(seed in any::<u64>()) {
        let (_, k) = random_iota_complex(&mut rng(seed)).unwrap();
        let c = &k.complex;
        let (f, g) = (phi(c).unwrap(), psi(c).unwrap());
        prop_assert!(f.is_chain_map() && g.is_chain_map());
        prop_assert!(homotopic(&f.compose(&g).unwrap(), &g.compose(&f).unwrap()).unwrap().is_some());
    }
}

/// `f ⊗ f^r` for a change of basis `f : C → C'`, between the two doubles.
fn doubled_map(k0: &IotaComplex, k1: &IotaComplex, f: &GradedMap) -> (DoubleParts, DoubleParts, GradedMap) {
    let p0 = double_parts(k0, Convention::Thm31).unwrap();
    let p1 = double_parts(k1, Convention::Thm31).unwrap();
    let fr = reflect_map(f, &p0.right.complex, &p1.right.complex).unwrap();
    let ff = tensor_maps_between(f, &fr, &p0.tensor, &p1.tensor).unwrap();
    (p0, p1, ff)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn doubling_is_functorial(seed in any::<u64>(), kind in 0usize..4) {
        let k0 = sample_knot(SampleKnot::ALL[kind]).unwrap();
        let (k1, f) = scramble_iota_with_map(&k0, &mut rng(seed)).unwrap();
        prop_assert!(f.is_chain_map());
        prop_assert!(homotopic(&f.compose(&k0.iota).unwrap(), &k1.iota.compose(&f).unwrap()).unwrap().is_some());
        let (p0, p1, ff) = doubled_map(&k0, &k1, &f);
        prop_assert!(ff.is_chain_map());
        prop_assert_eq!(ff.compose(&p0.tau_exch).unwrap(), p1.tau_exch.compose(&ff).unwrap());
        let (d0, d1) = (&p0.result, &p1.result);
        prop_assert!(homotopic(&ff.compose(&d0.tau).unwrap(), &d1.tau.compose(&ff).unwrap()).unwrap().is_some());
        prop_assert!(homotopic(&ff.compose(&d0.iota).unwrap(), &d1.iota.compose(&ff).unwrap()).unwrap().is_some());
    }
}

#[test]
fn sarkar_map_of_the_trefoil_fixes_the_middle_generator() {
    let k = sample_knot(SampleKnot::Trefoil).unwrap();
    let c: &Arc<Complex> = &k.complex;
    let s = sarkar(c).unwrap();
    let b = c.require_index("b").unwrap();
    let a = c.require_index("a").unwrap();
    assert_eq!(s.image(b).len(), 1);
    assert!(s.image(b)[&b].is_one());
    assert!(s.image(a).get(&a).is_some());
}

#[test]
fn unknot_double_is_the_unknot() {
    let k = sample_knot(SampleKnot::Unknot).unwrap();
    let d = double(&k, Convention::Thm31).unwrap();
    assert_eq!(d.complex.len(), 1);
    assert_eq!(d.complex.grading(0), Bigrading::ZERO);
}
