use std::cmp::Ordering;
use std::collections::HashMap;

use super::dga::Dga;
use super::element::{GenId, Word};
use super::length::Length;
use super::window::LengthWindow;

/// Words of one degree inside a window, in canonical order, with a lookup
/// table from word to position.
#[derive(Clone, Debug, Default)]
pub struct WordBasis {
    words: Vec<Word>,
    index: HashMap<Word, usize>,
}

impl WordBasis {
    pub fn new(words: Vec<Word>) -> Self {
        let index = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        WordBasis { words, index }
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }
}

/// Canonical monomial order: degree, then length, then weight, then the
/// lexicographic order of generator indices.
pub fn canonical_cmp(dga: &Dga, a: &Word, b: &Word) -> Ordering {
    dga.word_degree(a)
        .cmp(&dga.word_degree(b))
        .then_with(|| {
            dga.word_length(a)
                .partial_cmp(&dga.word_length(b))
                .unwrap_or(Ordering::Equal)
        })
        .then_with(|| dga.word_weight(a).cmp(&dga.word_weight(b)))
        .then_with(|| a.cmp(b))
}

struct Enumerator<'a> {
    lengths: Vec<Length>,
    degrees: Vec<i64>,
    window: &'a LengthWindow,
    /// Target degree, or `None` for every degree.
    degree: Option<i64>,
    /// Degrees never decrease along a word, so partial degrees above the
    /// target can be pruned.
    prune_degree: bool,
    out: Vec<Word>,
}

impl Enumerator<'_> {
    fn walk(&mut self, word: &mut Vec<GenId>, len: &Length, deg: i64) {
        if self.degree.is_none_or(|d| d == deg) {
            self.out.push(Word(word.clone()));
        }
        for g in 0..self.lengths.len() {
            let new_deg = deg + self.degrees[g];
            if self.prune_degree && self.degree.is_some_and(|d| new_deg > d) {
                continue;
            }
            let Ok(new_len) = len.checked_add(&self.lengths[g]) else {
                continue;
            };
            if !self.window.contains(&new_len) {
                continue;
            }
            word.push(g as GenId);
            self.walk(word, &new_len, new_deg);
            word.pop();
        }
    }
}

fn enumerate(dga: &Dga, degree: Option<i64>, window: &LengthWindow) -> Vec<Word> {
    let mut e = Enumerator {
        lengths: dga.generators().iter().map(|g| g.length.clone()).collect(),
        degrees: dga.generators().iter().map(|g| g.degree).collect(),
        window,
        degree,
        prune_degree: dga.is_nonnegatively_graded(),
        out: Vec::new(),
    };
    e.walk(&mut Vec::new(), &Length::zero(), 0);
    let mut keyed: Vec<(i64, Length, u64, Word)> = e
        .out
        .into_iter()
        .map(|w| (dga.word_degree(&w), dga.word_length(&w), dga.word_weight(&w), w))
        .collect();
    keyed.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then_with(|| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
            .then_with(|| a.2.cmp(&b.2))
            .then_with(|| a.3.cmp(&b.3))
    });
    keyed.into_iter().map(|k| k.3).collect()
}

/// All words of `degree` with length `< a`, in canonical order.
pub fn word_basis(dga: &Dga, degree: i64, window: &LengthWindow) -> Vec<Word> {
    if degree < 0 && dga.is_nonnegatively_graded() {
        return Vec::new();
    }
    enumerate(dga, Some(degree), window)
}

/// All words of any degree with length `< a`, in canonical order.
pub fn window_words(dga: &Dga, window: &LengthWindow) -> Vec<Word> {
    enumerate(dga, None, window)
}
