use std::collections::BTreeMap;
use std::fmt;

use crate::exactlin::Rational;

/// Index of a generator inside its DGA's generator table.
pub type GenId = u32;

/// Monomial in the free algebra: an ordered list of generator indices. The
/// empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<GenId>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn letter(g: GenId) -> Self {
        Word(vec![g])
    }

    pub fn letters(&self) -> &[GenId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Finite rational linear combination of words, with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<Word, Rational>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(Word::unit())
    }

    pub fn from_word(w: Word) -> Self {
        Self::from_term(Rational::one(), w)
    }

    pub fn generator(g: GenId) -> Self {
        Self::from_word(Word::letter(g))
    }

    pub fn from_term(c: Rational, w: Word) -> Self {
        let mut e = Self::zero();
        e.add_term(c, w);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Rational, Word)>) -> Self {
        let mut e = Self::zero();
        for (c, w) in terms {
            e.add_term(c, w);
        }
        e
    }

    pub fn add_term(&mut self, c: Rational, w: Word) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &AlgebraElement) {
        for (w, c) in &other.terms {
            self.add_term(c.clone(), w.clone());
        }
    }

    pub fn add_scaled(&mut self, k: &Rational, other: &AlgebraElement) {
        for (w, c) in &other.terms {
            self.add_term(c * k, w.clone());
        }
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out.add_scaled(&Rational::from_int(-1), other);
        out
    }

    pub fn scale(&self, k: &Rational) -> AlgebraElement {
        let mut out = Self::zero();
        out.add_scaled(k, self);
        out
    }

    /// Free-algebra product (bilinear concatenation).
    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(a * b, u.concat(v));
            }
        }
        out
    }

    /// Keeps only the terms whose word satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Word) -> bool) -> AlgebraElement {
        AlgebraElement {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("{c}*{w:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
