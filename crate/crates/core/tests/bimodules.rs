use proptest::prelude::*;
use soergel::bimodule::{
    generic_decompose, hom_bounded, is_intertwiner, BimoduleRecord, MatrixBimodule,
};
use soergel::charring::{orbit_sum, LaurentPoly};
use soergel::hecke::subword_char;
use soergel::{FieldSpec, Matrix, RootDatum};

const Q: FieldSpec = FieldSpec::Rational;

fn datum(name: &str) -> RootDatum {
    RootDatum::preset(name).unwrap()
}

fn word_strategy(rank: usize, max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..rank, 0..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn graphs_tensor_to_products(v in 0usize..6, w in 0usize..6) {
        let d = datum("PGL3");
        let rv = MatrixBimodule::graph(&d, v, Q);
        let rw = MatrixBimodule::graph(&d, w, Q);
        let vw = MatrixBimodule::graph(&d, d.mul(v, w), Q);
        let t = rv.tensor(&rw).unwrap();
        prop_assert_eq!(t.left_actions(), vw.left_actions());
    }

    #[test]
    fn invariants_act_centrally(word in word_strategy(2, 3), a in -2i64..=2, b in -2i64..=2) {
        let d = datum("PGL3");
        let bs = MatrixBimodule::bott_samelson(&d, &word, Q).unwrap();
        let f = orbit_sum(&d, &[a, b], Q);
        let scalar = Matrix::scalar(bs.rank(), &f);
        prop_assert!(bs.extend_left_action(&f) == scalar);
    }

    #[test]
    fn generic_fiber_matches_subwords(word in word_strategy(2, 4)) {
        let d = datum("B2");
        let bs = MatrixBimodule::bott_samelson(&d, &word, Q).unwrap();
        let dec = generic_decompose(&bs).unwrap();
        let oracle = subword_char(&d, &word).unwrap();
        let total: usize = dec.iter().map(|&(_, m)| m).sum();
        prop_assert_eq!(total, 1 << word.len());
        for (w, m) in dec {
            prop_assert_eq!(m, oracle.multiplicity(w));
        }
    }

    #[test]
    fn records_roundtrip(word in word_strategy(2, 3), p in prop::sample::select(vec![0u64, 5, 7])) {
        let d = datum("PGL3");
        let field = if p == 0 { Q } else { FieldSpec::prime(p).unwrap() };
        let bs = MatrixBimodule::bott_samelson(&d, &word, field).unwrap();
        let text = BimoduleRecord::from_plain(&bs).to_json();
        let back = BimoduleRecord::from_json(&text).unwrap().to_plain().unwrap();
        prop_assert_eq!(back, bs);
    }
}

#[test]
fn hom_between_graphs_is_free_of_rank_one_or_zero() {
    let d = datum("PGL2");
    for v in 0..2 {
        for w in 0..2 {
            let src = MatrixBimodule::graph(&d, v, Q);
            let tgt = MatrixBimodule::graph(&d, w, Q);
            let maps = hom_bounded(&src, &tgt, 2).unwrap();
            if v == w {
                // e^{kω} with |k| ≤ 2
                assert_eq!(maps.len(), 5);
            } else {
                assert!(maps.is_empty());
            }
        }
    }
}

#[test]
fn bounded_homs_intertwine() {
    let d = datum("PGL2");
    let b = MatrixBimodule::bott_samelson(&d, &[0], Q).unwrap();
    let r = MatrixBimodule::graph(&d, d.identity(), Q);
    for (src, tgt) in [(&b, &b), (&b, &r), (&r, &b)] {
        let maps = hom_bounded(src, tgt, 1).unwrap();
        assert!(!maps.is_empty());
        for m in &maps {
            assert!(is_intertwiner(src, tgt, &m.matrix));
        }
    }
}

#[test]
fn wrong_shape_is_rejected() {
    let d = datum("PGL2");
    let b = MatrixBimodule::bott_samelson(&d, &[0], Q).unwrap();
    let r = MatrixBimodule::graph(&d, d.identity(), Q);
    let m = Matrix::scalar(2, &LaurentPoly::one(Q, 1));
    assert!(soergel::bimodule::BimoduleMap::new(&b, &r, m).is_err());
}
