//! Degree-zero cross-check: the cord algebra of a link, presented by
//! generators and skein relations, and the slice dimensions of its
//! associated graded under the word-count filtration.

mod presentation;
mod quotient;

pub use presentation::{builtin_presentation, CordBuiltin, CordGenerator, CordPresentation, SkeinInstance};
pub use quotient::{compare_with_h0, comparison_model, quotient_basis, quotient_dims_by_wordcount, Comparison, QuotientBasis};

use crate::free_dga::DgaError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CordError {
    #[error("unknown built-in `{0}` (expected unknot, hopf_link or unlink2)")]
    UnknownBuiltin(String),
    #[error("word count {wmax} exceeds the presentation's bound {bound}")]
    BoundExceeded { wmax: usize, bound: usize },
    #[error("unknown cord generator `{0}`")]
    UnknownGenerator(String),
    #[error("inconsistent presentation: {0}")]
    Inconsistent(String),
    #[error("invalid presentation file: {0}")]
    Format(String),
    #[error("there is no DGA model of the {0} to compare with")]
    NoDgaModel(String),
    #[error(transparent)]
    Dga(#[from] DgaError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Rational;
    use crate::free_dga::{build_hopf, build_unlink};

    #[test]
    fn builtin_dimensions() {
        let dims = |b, k, w| quotient_dims_by_wordcount(&builtin_presentation(b, k).unwrap(), w).unwrap();
        assert_eq!(dims(CordBuiltin::Unknot, 2, 3), [1, 0, 0, 0]);
        assert_eq!(dims(CordBuiltin::HopfLink, 2, 4), [1, 2, 2, 2, 2]);
        assert_eq!(dims(CordBuiltin::Unlink2, 2, 4), [1, 2, 4, 8, 16]);
    }

    #[test]
    fn truncation_is_stable() {
        for (b, w) in [(CordBuiltin::Unknot, 4), (CordBuiltin::HopfLink, 4), (CordBuiltin::Unlink2, 4)] {
            let small = quotient_dims_by_wordcount(&builtin_presentation(b, 2).unwrap(), w).unwrap();
            let big = quotient_dims_by_wordcount(&builtin_presentation(b, 4).unwrap(), w).unwrap();
            assert_eq!(small, big, "{b:?}");
        }
    }

    #[test]
    fn normal_forms() {
        let basis = quotient_basis(&builtin_presentation(CordBuiltin::HopfLink, 2).unwrap(), 2).unwrap();
        assert_eq!(basis.slices[0], ["1"]);
        assert_eq!(basis.slices[1], ["x01", "x10"]);
        assert_eq!(basis.slices[2], ["x01 x01", "x10 x10"]);
    }

    #[test]
    fn bound_is_enforced() {
        let p = builtin_presentation(CordBuiltin::Unknot, 2).unwrap();
        assert_eq!(
            quotient_dims_by_wordcount(&p, 5),
            Err(CordError::BoundExceeded { wmax: 5, bound: 4 })
        );
    }

    #[test]
    fn comparison_with_string_homology() {
        let h = build_hopf(2).unwrap();
        let hw = h.window(Rational::new(13, 2)).unwrap();
        let u = build_unlink(2, &Rational::from_int(3)).unwrap();
        let uw = u.window(Rational::new(41, 2)).unwrap();
        let hopf = builtin_presentation(CordBuiltin::HopfLink, 2).unwrap();
        let unlink = builtin_presentation(CordBuiltin::Unlink2, 2).unwrap();
        let unknot = builtin_presentation(CordBuiltin::Unknot, 2).unwrap();
        assert!(compare_with_h0(&hopf, &h, &hw, 4).unwrap().matches());
        assert!(compare_with_h0(&unlink, &u, &uw, 4).unwrap().matches());
        let c = compare_with_h0(&unknot, &h, &hw, 4).unwrap();
        assert!(!c.matches());
        assert_eq!(c.cord[1], 0);
        assert_eq!(c.h0[1], 2);
        assert!(c.to_csv().starts_with("w,cord_dim,h0_dim,match\n0,1,1,true\n1,0,2,false\n"));
    }
}
