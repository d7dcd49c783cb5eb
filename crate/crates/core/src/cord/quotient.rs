use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::presentation::CordPresentation;
use super::CordError;
use crate::exactlin::{Echelon, Rational, SparseVec};
use super::presentation::CordBuiltin;
use crate::free_dga::{build_hopf, build_unlink, h0_dims_by_wordcount, AlgebraElement, Dga, GenId, LengthWindow, Word};

/// Normal-form words spanning each word-count slice of the associated
/// graded quotient, written with generator ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientBasis {
    pub slices: Vec<Vec<String>>,
}

impl QuotientBasis {
    pub fn dims(&self) -> Vec<usize> {
        self.slices.iter().map(Vec::len).collect()
    }
}

/// A relation as an element of the free algebra on the cord generators.
fn relations(pres: &CordPresentation) -> Result<Vec<AlgebraElement>, CordError> {
    pres.validate()?;
    let index = pres.index()?;
    let id = |s: &str| index[s] as GenId;
    let one = Rational::one();
    let mut out = Vec::new();
    for c in &pres.constant {
        out.push(AlgebraElement::generator(id(c)));
    }
    for s in &pres.skein {
        let mut r = AlgebraElement::generator(id(&s.whole));
        r.add_term(-one.clone(), Word::letter(id(&s.with_meridian)));
        r.add_term(-one.clone(), Word(vec![id(&s.left), id(&s.right)]));
        if !r.is_zero() {
            out.push(r);
        }
    }
    Ok(out)
}

fn truncated_mul(a: &AlgebraElement, b: &AlgebraElement, wmax: usize) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (u, x) in a.terms() {
        for (v, y) in b.terms() {
            if u.len() + v.len() <= wmax {
                out.add_term(x * y, u.concat(v));
            }
        }
    }
    out
}

/// Substitution eliminating generators that some relation makes linearly
/// dependent, up to word count `wmax`.
///
/// Relations are reduced on their linear parts, pivoting on the
/// highest-index generator. Each pivot relation `g + Σ c_f f + Q = 0` then
/// defines `ψ(g) = -Σ c_f ψ(f) - ψ(Q)`; the remaining generators are kept.
/// The quotient of the completed free algebra by the relations is the
/// quotient of the free algebra on the kept generators by `ψ(relations)`.
struct Elimination {
    /// Kept generators, in increasing index order.
    kept: Vec<usize>,
    /// Image of every generator in the free algebra on `kept` (letters are
    /// positions in `kept`).
    psi: Vec<AlgebraElement>,
}

fn eliminate(ngens: usize, rels: &[AlgebraElement], wmax: usize) -> Elimination {
    // linear columns: generator g sits at column ngens - 1 - g; quadratic
    // words follow
    let mut quad: HashMap<Word, usize> = HashMap::new();
    for r in rels {
        for (w, _) in r.terms() {
            if w.len() >= 2 {
                let n = quad.len();
                quad.entry(w.clone()).or_insert(ngens + n);
            }
        }
    }
    let col = |w: &Word| -> usize {
        if w.len() == 1 {
            ngens - 1 - w.letters()[0] as usize
        } else {
            quad[w]
        }
    };
    let mut words_of_col: Vec<Word> = (0..ngens).rev().map(|g| Word::letter(g as GenId)).collect();
    words_of_col.resize(ngens + quad.len(), Word::unit());
    for (w, &c) in &quad {
        words_of_col[c] = w.clone();
    }

    let mut ech = Echelon::new(ngens + quad.len());
    for r in rels {
        let v = SparseVec::from_pairs(r.terms().map(|(w, c)| (col(w), c.clone())));
        let reduced = ech.reduce(v);
        if matches!(reduced.leading(), Some((lead, _)) if lead < ngens) {
            ech.insert(reduced);
        }
    }

    let kept: Vec<usize> = (0..ngens).filter(|&g| !ech.is_pivot(ngens - 1 - g)).collect();
    let mut psi = vec![AlgebraElement::zero(); ngens];
    for (pos, &g) in kept.iter().enumerate() {
        psi[g] = AlgebraElement::generator(pos as GenId);
    }
    // pivot rows by decreasing column, so that linear terms (at larger
    // columns) are already substituted
    let mut rows: Vec<&SparseVec> = ech.rows().iter().collect();
    rows.sort_by_key(|r| std::cmp::Reverse(r.leading().unwrap().0));
    // each sweep fixes one more word-count level
    for _ in 0..=wmax {
        for row in &rows {
            let (lead, _) = row.leading().unwrap();
            let mut image = AlgebraElement::zero();
            for (c, coeff) in row.iter().skip(1) {
                let w = &words_of_col[c];
                let mut term = AlgebraElement::one();
                for &l in w.letters() {
                    term = truncated_mul(&term, &psi[l as usize], wmax);
                }
                image.add_scaled(&-coeff.clone(), &term);
            }
            psi[ngens - 1 - lead] = image;
        }
    }
    Elimination { kept, psi }
}

fn substitute(psi: &[AlgebraElement], r: &AlgebraElement, wmax: usize) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (w, c) in r.terms() {
        let mut term = AlgebraElement::one();
        for &l in w.letters() {
            term = truncated_mul(&term, &psi[l as usize], wmax);
        }
        out.add_scaled(c, &term);
    }
    out
}

/// Words over `k` letters with at most `wmax` letters, by increasing length.
fn all_words(k: usize, wmax: usize) -> Vec<Word> {
    let mut out = vec![Word::unit()];
    let mut last = vec![Word::unit()];
    for _ in 0..wmax {
        let next: Vec<Word> = last
            .iter()
            .flat_map(|w| (0..k).map(move |l| w.concat(&Word::letter(l as GenId))))
            .collect();
        out.extend(next.iter().cloned());
        last = next;
    }
    out
}

fn graded_quotient(pres: &CordPresentation, wmax: usize) -> Result<(Vec<String>, Vec<Word>, Echelon), CordError> {
    if wmax > pres.word_bound {
        return Err(CordError::BoundExceeded {
            wmax,
            bound: pres.word_bound,
        });
    }
    let rels = relations(pres)?;
    let elim = eliminate(pres.generators.len(), &rels, wmax);
    let kept_ids: Vec<String> = elim.kept.iter().map(|&g| pres.generators[g].id.clone()).collect();
    let words = all_words(elim.kept.len(), wmax);
    let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let to_vec = |e: &AlgebraElement| SparseVec::from_pairs(e.terms().map(|(w, c)| (index[w], c.clone())));

    // span of the substituted relations, then its two-sided ideal
    let mut base = Echelon::new(words.len());
    for r in &rels {
        let image = substitute(&elim.psi, r, wmax);
        if image.terms().any(|(w, _)| w.is_empty()) {
            return Err(CordError::Inconsistent("a relation has a constant term".into()));
        }
        base.insert(to_vec(&image));
    }
    let mut ideal = Echelon::new(words.len());
    for b in base.rows() {
        let low = words[b.leading().unwrap().0].len();
        let b: AlgebraElement = AlgebraElement::from_terms(b.iter().map(|(i, c)| (c.clone(), words[i].clone())));
        for u in words.iter().filter(|u| u.len() + low <= wmax) {
            for v in words.iter().filter(|v| u.len() + v.len() + low <= wmax) {
                let left = truncated_mul(&AlgebraElement::from_word(u.clone()), &b, wmax);
                let prod = truncated_mul(&left, &AlgebraElement::from_word(v.clone()), wmax);
                if !prod.is_zero() {
                    ideal.insert(to_vec(&prod));
                }
            }
        }
    }
    Ok((kept_ids, words, ideal))
}

/// Dimensions of the word-count slices `w = 0..=wmax` of the associated
/// graded of the cord algebra, filtered by powers of the augmentation ideal.
pub fn quotient_dims_by_wordcount(pres: &CordPresentation, wmax: usize) -> Result<Vec<usize>, CordError> {
    Ok(quotient_basis(pres, wmax)?.dims())
}

/// Normal-form words (those not leading any ideal element) per slice.
pub fn quotient_basis(pres: &CordPresentation, wmax: usize) -> Result<QuotientBasis, CordError> {
    let (kept, words, ideal) = graded_quotient(pres, wmax)?;
    let mut slices = vec![Vec::new(); wmax + 1];
    for (i, w) in words.iter().enumerate() {
        if !ideal.is_pivot(i) {
            let name = if w.is_empty() {
                "1".to_string()
            } else {
                w.letters().iter().map(|&l| kept[l as usize].as_str()).collect::<Vec<_>>().join(" ")
            };
            slices[w.len()].push(name);
        }
    }
    Ok(QuotientBasis { slices })
}

/// Slice dimensions of the cord algebra next to those of `H_0` of a DGA.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub cord: Vec<usize>,
    pub h0: Vec<usize>,
}

impl Comparison {
    pub fn matches(&self) -> bool {
        self.cord == self.h0
    }

    /// `w,cord_dim,h0_dim,match` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("w,cord_dim,h0_dim,match\n");
        for (w, (c, h)) in self.cord.iter().zip(&self.h0).enumerate() {
            s.push_str(&format!("{w},{c},{h},{}\n", c == h));
        }
        s
    }
}

pub fn compare_with_h0(
    pres: &CordPresentation,
    dga: &Dga,
    window: &LengthWindow,
    wmax: usize,
) -> Result<Comparison, CordError> {
    Ok(Comparison {
        cord: quotient_dims_by_wordcount(pres, wmax)?,
        h0: h0_dims_by_wordcount(dga, window, wmax)?,
    })
}

/// The DGA and window whose `H_0` a built-in cord algebra is compared with:
/// `hopf(2)` below `(2 wmax + 5) / 2` and `unlink(2, 3)` below
/// `(10 wmax + 1) / 2`, both clear of every realizable length.
pub fn comparison_model(which: CordBuiltin, wmax: usize) -> Result<(Dga, LengthWindow), CordError> {
    let (dga, a) = match which {
        CordBuiltin::HopfLink => (build_hopf(2)?, Rational::new(2 * wmax as i64 + 5, 2)),
        CordBuiltin::Unlink2 => (build_unlink(2, &Rational::from_int(3))?, Rational::new(10 * wmax as i64 + 1, 2)),
        CordBuiltin::Unknot => return Err(CordError::NoDgaModel("unknot".into())),
    };
    let w = dga.window(a)?;
    Ok((dga, w))
}
