use cfk_cli::document::{parse_document, parse_map_document, ComplexDocument, DocumentError, MapDocument};
use cfk_core::sample::{random_chain_endomorphism, random_complex};
use cfk_core::Ring;
use num_rational::Rational64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn parse_inverts_serialize(
        seed in any::<u64>(),
        one_variable in any::<bool>(),
        maps in 0usize..3,
        p in -40i64..40,
        q in 1i64..9,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = if one_variable { Ring::OneVariable } else { Ring::TwoVariable };
        let c = random_complex(ring, 6, true, &mut rng).unwrap();
        let f = random_chain_endomorphism(&c, &mut rng).unwrap();
        let g = random_chain_endomorphism(&c, &mut rng).unwrap();
        let mut doc = ComplexDocument::from_complex("random", &c, (maps > 0).then_some(&f), (maps > 1).then_some(&g));
        if one_variable {
            doc.shift = Rational64::new(p, q);
        }
        let text = doc.serialize();
        let back = parse_document(&text).unwrap();
        prop_assert_eq!(&back, &doc, "{}", text);
        prop_assert_eq!(back.serialize(), text);
    }

    #[test]
    fn map_documents_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(Ring::TwoVariable, 6, false, &mut rng).unwrap();
        let m = MapDocument::identity(&c);
        let back = parse_map_document(&m.serialize()).unwrap();
        prop_assert_eq!(&back, &m);
        let f = back.to_map(&c, &c).unwrap();
        prop_assert_eq!(f, cfk_core::GradedMap::identity(&c));
    }
}

#[test]
fn shipped_figure_eight_has_five_generators() {
    let doc = parse_document(include_str!("../corpus/fig8.cfk")).unwrap();
    let ids: Vec<&str> = doc.generators.iter().map(|(id, _)| id.as_str()).collect();
    assert_eq!(ids, ["x", "a", "b", "c", "d"]);
    assert!(doc.iota.is_some() && doc.tau.is_none());
}

#[test]
fn empty_generator_list_is_the_zero_complex() {
    let doc = parse_document("ring F2[U,V]\n").unwrap();
    assert!(doc.generators.is_empty());
    assert_eq!(doc.to_complex().unwrap().len(), 0);
}

#[test]
fn missing_target_is_named() {
    let err = parse_document("ring F2[U,V]\ngenerator a 0 0\ndifferential a -> (q, 1, 0)\n").unwrap_err();
    assert!(matches!(&err, DocumentError::Semantic(m) if m.contains("`q`")), "{err}");
}

#[test]
fn unknown_fields_report_their_position() {
    let err = parse_document("ring F2[U,V]\n  colour blue\n").unwrap_err();
    assert_eq!(err, DocumentError::Syntax { line: 2, column: 3, message: "unknown field `colour`".into() });
}

#[test]
fn duplicate_generators_are_rejected() {
    assert!(parse_document("ring F2[U]\ngenerator a 0\ngenerator a 2\n").is_err());
}

#[test]
fn frozen_double_matches_a_fresh_double() {
    let doc = parse_document(include_str!("../corpus/fig8.cfk")).unwrap();
    let cfk_cli::document::Loaded::Knot(k) = doc.load().unwrap() else { panic!("fig8 is an ι-complex") };
    let d = cfk_core::double(&k, cfk_core::Convention::Thm31).unwrap();
    let fresh = ComplexDocument::from_complex("fig8-double", &d.complex, Some(&d.iota), Some(&d.tau));
    let frozen = parse_document(include_str!("../corpus/fig8-double.cfk")).unwrap();
    assert_eq!(frozen, fresh);
}
