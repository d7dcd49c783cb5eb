use crate::exactlin::{Echelon, Rational, SparseVec};

use super::basis::{word_basis, WordBasis};
use super::dga::Dga;
use super::element::{AlgebraElement, Word};
use super::window::LengthWindow;
use super::DgaError;

/// Coordinates of `x` in `target`. Fails if `x` has a word outside the basis,
/// which happens only when the differential leaves the length filtration.
pub fn coordinates(
    dga: &Dga,
    x: &AlgebraElement,
    target: &WordBasis,
    source: &Word,
) -> Result<SparseVec, DgaError> {
    let mut pairs: Vec<(usize, Rational)> = Vec::with_capacity(x.len());
    for (w, c) in x.terms() {
        match target.index_of(w) {
            Some(i) => pairs.push((i, c.clone())),
            None => {
                return Err(DgaError::FiltrationViolation {
                    generator: dga.format_word(source),
                    word: dga.format_word(w),
                })
            }
        }
    }
    Ok(SparseVec::from_pairs(pairs))
}

/// Rank of `D` restricted to `source`, with image coordinates in `target`.
pub fn boundary_rank(dga: &Dga, source: &[Word], target: &WordBasis) -> Result<usize, DgaError> {
    let mut ech = Echelon::new(target.len());
    for w in source {
        let v = coordinates(dga, &dga.differential_word(w), target, w)?;
        ech.insert(v);
    }
    Ok(ech.rank())
}

/// `dim A^{<a}_p`.
pub fn chain_dim(dga: &Dga, degree: i64, window: &LengthWindow) -> usize {
    word_basis(dga, degree, window).len()
}

/// `dim H_p(A^{<a}, D)`.
pub fn homology_dim(dga: &Dga, degree: i64, window: &LengthWindow) -> Result<usize, DgaError> {
    let below = WordBasis::new(word_basis(dga, degree - 1, window));
    let here = WordBasis::new(word_basis(dga, degree, window));
    let above = word_basis(dga, degree + 1, window);
    let rank_out = boundary_rank(dga, here.words(), &below)?;
    let rank_in = boundary_rank(dga, &above, &here)?;
    Ok(here.len() - rank_out - rank_in)
}

/// Dimensions of the word-count slices of `H_0 = A^{<a}_0 / D(A^{<a}_1)`.
///
/// The word count of a word is the sum of its generator weights. When the
/// ideal is not homogeneous for this grading, the slices are those of the
/// associated graded of the descending filtration by word count: slice `w`
/// has dimension `#{words of count w} - (rank of the ideal projected to
/// counts <= w) + (same for counts <= w - 1)`.
pub fn h0_dims_by_wordcount(
    dga: &Dga,
    window: &LengthWindow,
    wmax: usize,
) -> Result<Vec<usize>, DgaError> {
    if let Some(g) = dga.generators().iter().find(|g| g.degree < 0) {
        return Err(DgaError::GradingViolation(g.id.clone()));
    }
    let wmax64 = wmax as u64;
    // degree-0 words of count <= wmax, ordered by count so that the leading
    // column of a vector is its lowest-count term
    let mut low: Vec<Word> = word_basis(dga, 0, window)
        .into_iter()
        .filter(|w| dga.word_weight(w) <= wmax64)
        .collect();
    low.sort_by_key(|w| dga.word_weight(w));
    let counts: Vec<u64> = low.iter().map(|w| dga.word_weight(w)).collect();
    let target = WordBasis::new(low);

    let mut ech = Echelon::new(target.len());
    for w in word_basis(dga, 1, window) {
        let image = dga.differential_word(&w);
        let mut pairs = Vec::new();
        for (u, c) in image.terms() {
            if dga.word_weight(u) > wmax64 {
                continue;
            }
            let i = target.index_of(u).ok_or_else(|| DgaError::FiltrationViolation {
                generator: dga.format_word(&w),
                word: dga.format_word(u),
            })?;
            pairs.push((i, c.clone()));
        }
        ech.insert(SparseVec::from_pairs(pairs));
    }

    let mut dims = vec![0usize; wmax + 1];
    for &c in &counts {
        dims[c as usize] += 1;
    }
    for p in ech.pivots() {
        dims[counts[p] as usize] -= 1;
    }
    Ok(dims)
}
