//! Free graded noncommutative algebras over the rationals with a
//! length-filtered differential, and the Hopf-link and unlink DGAs.

mod basis;
mod builtins;
mod dga;
mod element;
mod homology;
mod length;
mod spec_file;
mod window;

pub use basis::{canonical_cmp, window_words, word_basis, WordBasis};
pub use builtins::{build_hopf, build_unlink};
pub use dga::{DSquaredCheck, Dga, DgaBuilder, Generator};
pub use element::{AlgebraElement, GenId, Word};
pub use homology::{boundary_rank, chain_dim, coordinates, h0_dims_by_wordcount, homology_dim};
pub use length::{Length, LengthError};
pub use spec_file::{DgaSpec, GeneratorSpec, TermSpec};
pub use window::{nearest_realizable, realizable_lengths, LengthWindow, WINDOW_TOLERANCE};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DgaError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator `{0}` declared twice")]
    DuplicateGenerator(String),
    #[error("generator `{0}` must have positive length")]
    NonPositiveLength(String),
    #[error("generator `{0}` must have positive weight")]
    ZeroWeight(String),
    #[error("D({generator}) has term {word} of the wrong degree")]
    DegreeViolation { generator: String, word: String },
    #[error("D({generator}) has term {word} longer than the source")]
    FiltrationViolation { generator: String, word: String },
    #[error("D^2({generator}) = {residue} is nonzero")]
    DSquaredNonzero { generator: String, residue: String },
    #[error("window bound {a} is within {distance:e} of the realizable length {nearest}")]
    InvalidWindow {
        a: String,
        nearest: String,
        distance: f64,
    },
    #[error("generator `{0}` has negative degree")]
    GradingViolation(String),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("invalid DGA spec file: {0}")]
    SpecFile(String),
    #[error(transparent)]
    Length(#[from] LengthError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn names(dga: &Dga, words: &[Word]) -> Vec<String> {
        words.iter().map(|w| dga.format_word(w)).collect()
    }

    #[test]
    fn hopf_degrees_and_lengths() {
        let h = build_hopf(2).unwrap();
        assert_eq!(h.num_generators(), 24);
        let deg = |id: &str| h.generator(h.gen_id(id).unwrap()).degree;
        assert_eq!(
            [deg("c0_01"), deg("c1_00"), deg("c2_00"), deg("e1_00"), deg("e2_01"), deg("d1_11"), deg("d2_10")],
            [0, 1, 2, 0, 1, 1, 2]
        );
        let h3 = build_hopf(3).unwrap();
        let deg3 = |id: &str| h3.generator(h3.gen_id(id).unwrap()).degree;
        assert_eq!([deg3("c0_10"), deg3("e1_00"), deg3("c2_01")], [1, 2, 5]);
        let len = |id: &str| h3.generator(h3.gen_id(id).unwrap()).length.clone();
        assert_eq!(len("c2_00"), Length::from_int(2));
        assert_eq!(len("c2_01"), Length::from_int(3));
    }

    #[test]
    fn hopf_differential_examples() {
        let h = build_hopf(2).unwrap();
        let d = |terms: &[(i64, &[&str])]| h.differential(&h.element(terms).unwrap()).unwrap();
        assert_eq!(d(&[(1, &["d1_00"])]), h.element(&[(1, &["e1_00"])]).unwrap());
        assert_eq!(
            d(&[(1, &["c1_00"])]),
            h.element(&[(1, &["e1_00"]), (1, &["c0_01", "c0_10"])]).unwrap()
        );
        assert!(d(&[(1, &["c0_01", "c0_10"])]).is_zero());
    }

    #[test]
    fn leibniz_sign_uses_prefix_degree() {
        let h = build_hopf(2).unwrap();
        // |c1_01| = 1, so D(c1_01 * c1_00) = -c1_01 * D(c1_00)
        let x = h.element(&[(1, &["c1_01", "c1_00"])]).unwrap();
        let expected = h
            .element(&[(-1, &["c1_01", "e1_00"]), (-1, &["c1_01", "c0_01", "c0_10"])])
            .unwrap();
        assert_eq!(h.differential(&x).unwrap(), expected);
    }

    #[test]
    fn d_squared_checks() {
        for d in 2..=5 {
            assert!(build_hopf(d).unwrap().d_squared_zero_check().ok);
            assert!(build_unlink(d, &q(3, 1)).unwrap().d_squared_zero_check().ok);
        }
        // A degree- and length-compatible corruption: D(d2_01) gains c1_00 c0_01.
        let spec = DgaSpec::from_dga(&build_hopf(2).unwrap());
        let mut bad = spec.clone();
        bad.diff.get_mut("d2_01").unwrap().push(TermSpec {
            coeff: Rational::one(),
            word: vec!["c1_00".into(), "c0_01".into()],
        });
        let dga = bad.to_dga_unvalidated().unwrap();
        let check = dga.d_squared_zero_check();
        assert!(!check.ok);
        assert_eq!(check.witness.unwrap().0, "d2_01");
        assert!(matches!(bad.to_dga(), Err(DgaError::DSquaredNonzero { .. })));
    }

    #[test]
    fn literal_corruption_is_caught() {
        // D(d1_00) := c1_00 breaks the degree rule and D^2.
        let mut spec = DgaSpec::from_dga(&build_hopf(2).unwrap());
        spec.diff.insert(
            "d1_00".into(),
            vec![TermSpec {
                coeff: Rational::one(),
                word: vec!["c1_00".into()],
            }],
        );
        spec.partial = None;
        let dga = spec.to_dga_unvalidated().unwrap();
        let check = dga.d_squared_zero_check();
        assert_eq!(check.witness.map(|w| w.0), Some("d1_00".to_string()));
        assert!(matches!(spec.to_dga(), Err(DgaError::DegreeViolation { .. })));
    }

    #[test]
    fn word_basis_examples() {
        let h = build_hopf(2).unwrap();
        let w = h.window(q(5, 2)).unwrap();
        let basis = word_basis(&h, 0, &w);
        assert_eq!(
            names(&h, &basis),
            ["1", "c0_01", "c0_10", "c0_01*c0_01", "c0_01*c0_10", "c0_10*c0_01", "c0_10*c0_10", "e1_00", "e1_11"]
        );
        assert!(word_basis(&h, -1, &w).is_empty());
        let u = build_unlink(2, &q(3, 1)).unwrap();
        let basis = word_basis(&u, 0, &u.window(q(3, 2)).unwrap());
        assert_eq!(names(&u, &basis), ["1"]);
    }

    #[test]
    fn homology_examples() {
        // R[a0, a1]/(a0 a1) below the bound: 1, a_i^k for k*1 < a
        let h2 = build_hopf(2).unwrap();
        assert_eq!(homology_dim(&h2, 0, &h2.window(q(7, 2)).unwrap()).unwrap(), 7);
        assert_eq!(homology_dim(&h2, 0, &h2.window(q(9, 2)).unwrap()).unwrap(), 9);
        let h3 = build_hopf(3).unwrap();
        assert_eq!(homology_dim(&h3, 2, &h3.window(q(17, 2)).unwrap()).unwrap(), 2);
        let u3 = build_unlink(3, &q(3, 1)).unwrap();
        assert_eq!(homology_dim(&u3, 2, &u3.window(q(17, 2)).unwrap()).unwrap(), 4);
    }

    #[test]
    fn h0_examples() {
        let h2 = build_hopf(2).unwrap();
        let dims = h0_dims_by_wordcount(&h2, &h2.window(q(13, 2)).unwrap(), 4).unwrap();
        assert_eq!(dims, [1, 2, 2, 2, 2]);
        let u2 = build_unlink(2, &q(3, 1)).unwrap();
        let dims = h0_dims_by_wordcount(&u2, &u2.window(q(41, 2)).unwrap(), 4).unwrap();
        assert_eq!(dims, [1, 2, 4, 8, 16]);
        let h3 = build_hopf(3).unwrap();
        let dims = h0_dims_by_wordcount(&h3, &h3.window(q(13, 2)).unwrap(), 2).unwrap();
        assert_eq!(dims, [1, 0, 0]);
    }

    #[test]
    fn h0_rejects_negative_degrees() {
        let dga = DgaBuilder::new("neg")
            .generator(Generator::new("x", -1, Length::from_int(1), 1))
            .build()
            .unwrap();
        let w = LengthWindow::unchecked(q(5, 2)).unwrap();
        assert!(matches!(h0_dims_by_wordcount(&dga, &w, 2), Err(DgaError::GradingViolation(_))));
    }

    #[test]
    fn unlink_shape() {
        let u = build_unlink(2, &q(3, 1)).unwrap();
        assert_eq!(u.num_generators(), 12);
        let u3 = build_unlink(3, &q(3, 1)).unwrap();
        for id in ["c2_00", "c2_02", "c2_20", "c2_22"] {
            assert_eq!(u3.generator(u3.gen_id(id).unwrap()).degree, 5);
        }
        let bent = &u.generator(u.gen_id("cb1_02").unwrap()).length;
        assert_eq!(bent.to_string(), "sqrt(13)");
        assert!(matches!(build_unlink(2, &q(2, 1)), Err(DgaError::ParameterOutOfRange(_))));
    }

    #[test]
    fn forget_f_examples() {
        let h = build_hopf(2).unwrap();
        let f = h.forget_f().unwrap();
        let g = |id: &str| f.gen_id(id).unwrap();
        assert!(f.diff_of(g("c1_00")).is_zero());
        assert_eq!(f.diff_of(g("d2_01")), &f.element(&[(1, &["e2_01"])]).unwrap());
        assert!(f.d_squared_zero_check().ok);
        let u = build_unlink(2, &q(3, 1)).unwrap();
        assert!(matches!(u.forget_f(), Err(DgaError::NotApplicable(_))));
    }

    #[test]
    fn window_validation() {
        let h = build_hopf(2).unwrap();
        assert!(h.window(q(9, 2)).is_ok());
        assert!(matches!(h.window(q(4, 1)), Err(DgaError::InvalidWindow { .. })));
        let u = build_unlink(2, &q(3, 1)).unwrap();
        // 2 + sqrt(13) is realizable, 5.6 is not
        assert!(u.window(q(56, 10)).is_ok());
        assert!(u.window(q(5, 1)).is_err());
    }

    #[test]
    fn spec_roundtrip() {
        let h = build_hopf(2).unwrap();
        let json = DgaSpec::from_dga(&h).to_json();
        let back = DgaSpec::from_json(&json).unwrap().to_dga().unwrap();
        assert_eq!(back.num_generators(), 24);
        for g in 0..24 {
            assert_eq!(back.diff_of(g), h.diff_of(g));
        }
        let f = back.forget_f().unwrap();
        assert!(f.diff_of(f.gen_id("c1_00").unwrap()).is_zero());
    }
}
