use proptest::prelude::*;
use strhom::exactlin::Rational;
use strhom::free_dga::{
    build_hopf, build_unlink, chain_dim, h0_dims_by_wordcount, homology_dim, realizable_lengths, AlgebraElement, Dga,
    DgaError, DgaSpec, GenId, Word,
};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn hopf2() -> Dga {
    build_hopf(2).unwrap()
}

fn word(n: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..n as GenId, 0..4).prop_map(Word)
}

fn euler(dga: &Dga, top: i64, f: impl Fn(&Dga, i64) -> usize) -> i64 {
    (0..=top).map(|p| if p % 2 == 0 { f(dga, p) as i64 } else { -(f(dga, p) as i64) }).sum()
}

#[test]
fn homology_oracles() {
    // R[a0, a1]/(a0 a1): 1 + 2 * #{k >= 1 : k < a}
    let h = hopf2();
    for (a, dim) in [(q(3, 2), 3), (q(5, 2), 5), (q(7, 2), 7), (q(9, 2), 9)] {
        assert_eq!(homology_dim(&h, 0, &h.window(a).unwrap()).unwrap(), dim);
    }
    let u = build_unlink(2, &Rational::from_int(3)).unwrap();
    assert_eq!(h0_dims_by_wordcount(&u, &u.window(q(41, 2)).unwrap(), 3).unwrap(), [1, 2, 4, 8]);
}

#[test]
fn unlink_lengths_are_exact_surds() {
    let u = build_unlink(2, &Rational::from_int(3)).unwrap();
    let lengths: Vec<String> = realizable_lengths(&u, &q(4, 1)).iter().map(|l| l.to_string()).collect();
    assert_eq!(lengths, ["2", "3", "sqrt(13)", "4"]);
    assert!(matches!(u.window(Rational::from_int(4)), Err(DgaError::InvalidWindow { .. })));
}

#[test]
fn euler_characteristic_is_homology_invariant() {
    let h = hopf2();
    for a in [q(3, 2), q(5, 2), q(7, 2)] {
        let w = h.window(a.clone()).unwrap();
        let top = (0..16).filter(|&p| chain_dim(&h, p, &w) > 0).max().unwrap();
        let chains = euler(&h, top, |d, p| chain_dim(d, p, &w));
        let homology = euler(&h, top, |d, p| homology_dim(d, p, &w).unwrap());
        assert_eq!(chains, homology, "a = {a}");
    }
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<GenId>> {
    Just((0..n as GenId).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn leibniz_rule(x in word(24), y in word(24)) {
        let h = hopf2();
        let xy = h.differential_word(&x.concat(&y));
        let sign = if h.word_degree(&x) % 2 == 0 { Rational::one() } else { -Rational::one() };
        let left = h.differential_word(&x).mul(&AlgebraElement::from_word(y.clone()));
        let right = AlgebraElement::from_word(x.clone()).mul(&h.differential_word(&y)).scale(&sign);
        prop_assert_eq!(xy, left.add(&right));
    }

    #[test]
    fn d_squared_vanishes_on_elements(terms in prop::collection::vec((-3i64..=3, word(24)), 1..5), d in 2i64..=4) {
        let h = build_hopf(d).unwrap();
        let x = AlgebraElement::from_terms(terms.into_iter().map(|(c, w)| (Rational::from_int(c), w)));
        prop_assert!(h.differential(&h.differential(&x).unwrap()).unwrap().is_zero());
        let u = build_unlink(d, &Rational::from_int(3)).unwrap();
        let y = x.filter(|w| w.letters().iter().all(|&g| (g as usize) < u.num_generators()));
        prop_assert!(u.differential(&u.differential(&y).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn homology_ignores_generator_order(order in permutation(24), k in 1i64..4) {
        let h = hopf2();
        let r = h.reordered(&order);
        let a = q(2 * k + 1, 2);
        let (w, wr) = (h.window(a.clone()).unwrap(), r.window(a).unwrap());
        for p in 0..=2 {
            prop_assert_eq!(homology_dim(&h, p, &w).unwrap(), homology_dim(&r, p, &wr).unwrap());
        }
        prop_assert_eq!(h0_dims_by_wordcount(&h, &w, 3).unwrap(), h0_dims_by_wordcount(&r, &wr, 3).unwrap());
    }

    #[test]
    fn homology_is_constant_between_realizable_lengths(gap in 1i64..4, t in 1i64..97) {
        // hopf(2) lengths are integers, so every a in (gap, gap + 1) sees the
        // same words
        let h = hopf2();
        let a = Rational::from_int(gap) + q(t, 97);
        let mid = Rational::from_int(gap) + q(1, 2);
        let (w, wm) = (h.window(a).unwrap(), h.window(mid).unwrap());
        for p in 0..=2 {
            prop_assert_eq!(homology_dim(&h, p, &w).unwrap(), homology_dim(&h, p, &wm).unwrap());
        }
    }

    #[test]
    fn spec_files_round_trip(d in 2i64..=5, z in 3i64..6) {
        for dga in [build_hopf(d).unwrap(), build_unlink(d, &Rational::from_int(z)).unwrap()] {
            let back = DgaSpec::from_json(&DgaSpec::from_dga(&dga).to_json()).unwrap().to_dga().unwrap();
            prop_assert_eq!(back.num_generators(), dga.num_generators());
            for g in 0..dga.num_generators() as GenId {
                prop_assert_eq!(back.diff_of(g), dga.diff_of(g));
                prop_assert_eq!(&back.generator(g).length, &dga.generator(g).length);
            }
        }
    }
}
