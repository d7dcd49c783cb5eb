use std::collections::HashMap;
use std::fmt;

use crate::exactlin::Rational;

use super::element::{AlgebraElement, GenId, Word};
use super::length::Length;
use super::DgaError;

/// One free generator: degree, length value and word-count weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub id: String,
    pub degree: i64,
    pub length: Length,
    pub weight: u32,
    /// Component indices `(i, j)` for generators attached to a chord between
    /// components `i` and `j`.
    pub tags: Option<(u8, u8)>,
}

impl Generator {
    pub fn new(id: impl Into<String>, degree: i64, length: Length, weight: u32) -> Self {
        Generator {
            id: id.into(),
            degree,
            length,
            weight,
            tags: None,
        }
    }

    pub fn with_tags(mut self, i: u8, j: u8) -> Self {
        self.tags = Some((i, j));
        self
    }
}

/// Result of checking `D(D(g)) = 0` on every generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DSquaredCheck {
    pub ok: bool,
    /// First offending generator and the nonzero value of `D(D(g))`.
    pub witness: Option<(String, AlgebraElement)>,
}

/// Free graded algebra with a degree -1 derivation given on generators.
#[derive(Clone, Debug)]
pub struct Dga {
    name: String,
    generators: Vec<Generator>,
    index: HashMap<String, GenId>,
    diff: Vec<AlgebraElement>,
    /// The `∂` summand of the differential, when the DGA was built as `∂ + F`.
    partial: Option<Vec<AlgebraElement>>,
}

type NamedTerms = Vec<(Rational, Vec<String>)>;

/// Incremental construction of a [`Dga`] from generator names.
#[derive(Clone, Debug, Default)]
pub struct DgaBuilder {
    name: String,
    generators: Vec<Generator>,
    diff: HashMap<String, NamedTerms>,
    partial: Option<HashMap<String, NamedTerms>>,
}

impl DgaBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        DgaBuilder {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn generator(mut self, g: Generator) -> Self {
        self.generators.push(g);
        self
    }

    /// Adds `coeff * word` to `D(id)`.
    pub fn term(mut self, id: &str, coeff: i64, word: &[&str]) -> Self {
        self.push_term(id, Rational::from_int(coeff), word, false);
        self
    }

    /// Adds `coeff * word` to `D(id)` and records it as part of the `∂`
    /// summand, so that [`Dga::forget_f`] can recover `∂` alone.
    pub fn partial_term(mut self, id: &str, coeff: i64, word: &[&str]) -> Self {
        self.push_term(id, Rational::from_int(coeff), word, true);
        self
    }

    /// Declares that the differential splits as `∂ + F` even if `∂` has no
    /// terms yet.
    pub fn with_split(mut self) -> Self {
        self.partial.get_or_insert_with(HashMap::new);
        self
    }

    pub fn rational_term(mut self, id: &str, coeff: Rational, word: &[&str]) -> Self {
        self.push_term(id, coeff, word, false);
        self
    }

    pub fn partial_rational_term(mut self, id: &str, coeff: Rational, word: &[&str]) -> Self {
        self.push_term(id, coeff, word, true);
        self
    }

    fn push_term(&mut self, id: &str, coeff: Rational, word: &[&str], partial: bool) {
        let word: Vec<String> = word.iter().map(|s| s.to_string()).collect();
        if partial {
            self.partial
                .get_or_insert_with(HashMap::new)
                .entry(id.to_string())
                .or_default()
                .push((coeff.clone(), word.clone()));
        }
        self.diff
            .entry(id.to_string())
            .or_default()
            .push((coeff, word));
    }

    /// Builds and checks every structural invariant, including `D² = 0`.
    pub fn build(self) -> Result<Dga, DgaError> {
        let dga = self.build_unvalidated()?;
        dga.validate()?;
        Ok(dga)
    }

    /// Builds without checking degrees, filtration or `D² = 0`. Names are
    /// still resolved, so unknown generators are rejected.
    pub fn build_unvalidated(self) -> Result<Dga, DgaError> {
        let mut index = HashMap::new();
        for (i, g) in self.generators.iter().enumerate() {
            if index.insert(g.id.clone(), i as GenId).is_some() {
                return Err(DgaError::DuplicateGenerator(g.id.clone()));
            }
        }
        let resolve = |table: &HashMap<String, NamedTerms>| -> Result<Vec<AlgebraElement>, DgaError> {
            let mut out = vec![AlgebraElement::zero(); self.generators.len()];
            for (id, terms) in table {
                let g = *index
                    .get(id)
                    .ok_or_else(|| DgaError::UnknownGenerator(id.clone()))?;
                for (c, word) in terms {
                    let w = word
                        .iter()
                        .map(|s| index.get(s).copied().ok_or_else(|| DgaError::UnknownGenerator(s.clone())))
                        .collect::<Result<Vec<_>, _>>()?;
                    out[g as usize].add_term(c.clone(), Word(w));
                }
            }
            Ok(out)
        };
        let diff = resolve(&self.diff)?;
        let partial = self.partial.as_ref().map(&resolve).transpose()?;
        Ok(Dga {
            name: self.name,
            generators: self.generators,
            index,
            diff,
            partial,
        })
    }
}

impl Dga {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator(&self, g: GenId) -> &Generator {
        &self.generators[g as usize]
    }

    pub fn gen_id(&self, id: &str) -> Option<GenId> {
        self.index.get(id).copied()
    }

    /// Differential of a single generator.
    pub fn diff_of(&self, g: GenId) -> &AlgebraElement {
        &self.diff[g as usize]
    }

    pub fn has_split(&self) -> bool {
        self.partial.is_some()
    }

    pub fn word_degree(&self, w: &Word) -> i64 {
        w.letters().iter().map(|&g| self.generator(g).degree).sum()
    }

    pub fn word_weight(&self, w: &Word) -> u64 {
        w.letters().iter().map(|&g| self.generator(g).weight as u64).sum()
    }

    /// Panics if the generator lengths mix quadratic fields; validated DGAs
    /// never do.
    pub fn word_length(&self, w: &Word) -> Length {
        w.letters().iter().fold(Length::zero(), |acc, &g| {
            acc.checked_add(&self.generator(g).length)
                .expect("validated DGA has a single radicand")
        })
    }

    pub fn is_nonnegatively_graded(&self) -> bool {
        self.generators.iter().all(|g| g.degree >= 0)
    }

    pub fn parse_word(&self, ids: &[&str]) -> Result<Word, DgaError> {
        ids.iter()
            .map(|s| self.gen_id(s).ok_or_else(|| DgaError::UnknownGenerator(s.to_string())))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    /// Element `Σ coeff * word` given by generator names.
    pub fn element(&self, terms: &[(i64, &[&str])]) -> Result<AlgebraElement, DgaError> {
        let mut e = AlgebraElement::zero();
        for (c, w) in terms {
            e.add_term(Rational::from_int(*c), self.parse_word(w)?);
        }
        Ok(e)
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let names: Vec<&str> = w.letters().iter().map(|&g| self.generator(g).id.as_str()).collect();
        names.join("*")
    }

    pub fn format_element(&self, x: &AlgebraElement) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = x
            .terms()
            .map(|(w, c)| {
                if c.is_one() {
                    self.format_word(w)
                } else {
                    format!("{c}*{}", self.format_word(w))
                }
            })
            .collect();
        parts.join(" + ")
    }

    fn check_ids(&self, x: &AlgebraElement) -> Result<(), DgaError> {
        for (w, _) in x.terms() {
            if let Some(&bad) = w.letters().iter().find(|&&g| g as usize >= self.generators.len()) {
                return Err(DgaError::UnknownGenerator(format!("#{bad}")));
            }
        }
        Ok(())
    }

    /// `D(g_1 ... g_k) = Σ_i (-1)^{|g_1 ... g_{i-1}|} g_1 ... D(g_i) ... g_k`.
    pub fn differential_word(&self, w: &Word) -> AlgebraElement {
        apply_derivation(w, |g| &self.diff[g as usize], |g| self.generator(g).degree)
    }

    /// Leibniz extension of the generator table to arbitrary elements.
    pub fn differential(&self, x: &AlgebraElement) -> Result<AlgebraElement, DgaError> {
        self.check_ids(x)?;
        let mut out = AlgebraElement::zero();
        for (w, c) in x.terms() {
            out.add_scaled(c, &self.differential_word(w));
        }
        Ok(out)
    }

    pub fn d_squared_zero_check(&self) -> DSquaredCheck {
        for g in 0..self.generators.len() as GenId {
            let dd = self
                .differential(self.diff_of(g))
                .expect("generator table only references known generators");
            if !dd.is_zero() {
                return DSquaredCheck {
                    ok: false,
                    witness: Some((self.generator(g).id.clone(), dd)),
                };
            }
        }
        DSquaredCheck {
            ok: true,
            witness: None,
        }
    }

    /// Checks positive lengths, a single quadratic field, degree drop by one,
    /// the length filtration and `D² = 0`.
    pub fn validate(&self) -> Result<(), DgaError> {
        let mut radicand = 1;
        for g in &self.generators {
            if g.length.signum() <= 0 {
                return Err(DgaError::NonPositiveLength(g.id.clone()));
            }
            if g.weight == 0 {
                return Err(DgaError::ZeroWeight(g.id.clone()));
            }
            match (radicand, g.length.radicand()) {
                (_, 1) => {}
                (1, r) => radicand = r,
                (a, b) if a == b => {}
                (a, b) => return Err(DgaError::Length(super::LengthError::MixedRadicands(a, b))),
            }
        }
        for (gi, g) in self.generators.iter().enumerate() {
            for (w, _) in self.diff[gi].terms() {
                self.check_ids(&AlgebraElement::from_word(w.clone()))?;
                if self.word_degree(w) != g.degree - 1 {
                    return Err(DgaError::DegreeViolation {
                        generator: g.id.clone(),
                        word: self.format_word(w),
                    });
                }
                let len = self.word_length(w);
                let exceeds = len.checked_sub(&g.length).map(|d| d.signum() > 0).unwrap_or(true);
                if exceeds {
                    return Err(DgaError::FiltrationViolation {
                        generator: g.id.clone(),
                        word: self.format_word(w),
                    });
                }
            }
        }
        let check = self.d_squared_zero_check();
        if let Some((generator, residue)) = check.witness {
            return Err(DgaError::DSquaredNonzero {
                generator,
                residue: self.format_element(&residue),
            });
        }
        Ok(())
    }

    /// Same generators with the differential replaced by its `∂` summand.
    pub fn forget_f(&self) -> Result<Dga, DgaError> {
        let partial = self
            .partial
            .clone()
            .ok_or_else(|| DgaError::NotApplicable(format!("{} records no ∂/F split", self.name)))?;
        Ok(Dga {
            name: format!("{}/forget_F", self.name),
            generators: self.generators.clone(),
            index: self.index.clone(),
            diff: partial.clone(),
            partial: Some(partial),
        })
    }

    /// The same DGA with generators listed in the order `order` (a
    /// permutation of the current indices).
    pub fn reordered(&self, order: &[GenId]) -> Dga {
        assert_eq!(order.len(), self.generators.len(), "not a permutation");
        let mut new_index = vec![0 as GenId; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old as usize] = new as GenId;
        }
        let remap = |x: &AlgebraElement| {
            AlgebraElement::from_terms(x.terms().map(|(w, c)| {
                (c.clone(), Word(w.letters().iter().map(|&g| new_index[g as usize]).collect()))
            }))
        };
        let generators: Vec<Generator> =
            order.iter().map(|&g| self.generators[g as usize].clone()).collect();
        Dga {
            name: self.name.clone(),
            index: generators
                .iter()
                .enumerate()
                .map(|(i, g)| (g.id.clone(), i as GenId))
                .collect(),
            diff: order.iter().map(|&g| remap(&self.diff[g as usize])).collect(),
            partial: self
                .partial
                .as_ref()
                .map(|p| order.iter().map(|&g| remap(&p[g as usize])).collect()),
            generators,
        }
    }

    /// The `∂` summand on generators, when recorded.
    pub fn partial_table(&self) -> Option<&[AlgebraElement]> {
        self.partial.as_deref()
    }
}

impl fmt::Display for Dga {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ({} generators)", self.name, self.generators.len())?;
        for (i, g) in self.generators.iter().enumerate() {
            writeln!(
                f,
                "  {:<8} |{}| ℓ={} m={}  D = {}",
                g.id,
                g.degree,
                g.length,
                g.weight,
                self.format_element(&self.diff[i])
            )?;
        }
        Ok(())
    }
}

fn apply_derivation<'a>(
    w: &Word,
    on_gen: impl Fn(GenId) -> &'a AlgebraElement,
    degree: impl Fn(GenId) -> i64,
) -> AlgebraElement {
    let letters = w.letters();
    let mut out = AlgebraElement::zero();
    let mut prefix_degree = 0i64;
    for (i, &g) in letters.iter().enumerate() {
        let dg = on_gen(g);
        if !dg.is_zero() {
            let sign = Rational::from_int(if prefix_degree.rem_euclid(2) == 0 { 1 } else { -1 });
            for (mid, c) in dg.terms() {
                let mut v = Vec::with_capacity(letters.len() + mid.len());
                v.extend_from_slice(&letters[..i]);
                v.extend_from_slice(mid.letters());
                v.extend_from_slice(&letters[i + 1..]);
                out.add_term(c * &sign, Word(v));
            }
        }
        prefix_degree += degree(g);
    }
    out
}
