use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exactlin::Rational;

use super::dga::{Dga, DgaBuilder, Generator};
use super::element::AlgebraElement;
use super::length::Length;
use super::DgaError;

/// On-disk description of a DGA.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DgaSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub diff: BTreeMap<String, Vec<TermSpec>>,
    /// Optional `∂` summand of `diff`, enabling `forget_F` on imported DGAs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partial: Option<BTreeMap<String, Vec<TermSpec>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub id: String,
    pub degree: i64,
    pub length: Length,
    #[serde(default = "default_weight")]
    pub weight: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tags: Option<[u8; 2]>,
}

fn default_weight() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermSpec {
    pub coeff: Rational,
    pub word: Vec<String>,
}

fn terms_of(dga: &Dga, x: &AlgebraElement) -> Vec<TermSpec> {
    x.terms()
        .map(|(w, c)| TermSpec {
            coeff: c.clone(),
            word: w.letters().iter().map(|&g| dga.generator(g).id.clone()).collect(),
        })
        .collect()
}

impl DgaSpec {
    pub fn from_dga(dga: &Dga) -> Self {
        let table = |elems: Vec<&AlgebraElement>| {
            dga.generators()
                .iter()
                .zip(elems)
                .filter(|(_, x)| !x.is_zero())
                .map(|(g, x)| (g.id.clone(), terms_of(dga, x)))
                .collect::<BTreeMap<_, _>>()
        };
        DgaSpec {
            name: Some(dga.name().to_string()),
            generators: dga
                .generators()
                .iter()
                .map(|g| GeneratorSpec {
                    id: g.id.clone(),
                    degree: g.degree,
                    length: g.length.clone(),
                    weight: g.weight,
                    tags: g.tags.map(|(i, j)| [i, j]),
                })
                .collect(),
            diff: table((0..dga.num_generators()).map(|i| dga.diff_of(i as u32)).collect()),
            partial: dga.partial_table().map(|p| table(p.iter().collect())),
        }
    }

    fn builder(&self) -> Result<DgaBuilder, DgaError> {
        let mut b = DgaBuilder::new(self.name.clone().unwrap_or_else(|| "spec".to_string()));
        for g in &self.generators {
            let mut gen = Generator::new(g.id.clone(), g.degree, g.length.clone(), g.weight);
            if let Some([i, j]) = g.tags {
                gen = gen.with_tags(i, j);
            }
            b = b.generator(gen);
        }
        let empty = BTreeMap::new();
        let partial = self.partial.as_ref().unwrap_or(&empty);
        if self.partial.is_some() {
            b = b.with_split();
        }
        for (id, terms) in partial {
            for t in terms {
                let word: Vec<&str> = t.word.iter().map(String::as_str).collect();
                b = b.partial_rational_term(id, t.coeff.clone(), &word);
            }
        }
        // `diff` is the full differential; the recorded ∂ terms were already
        // added to it above, so subtract them before adding `diff`.
        for (id, terms) in partial {
            for t in terms {
                let word: Vec<&str> = t.word.iter().map(String::as_str).collect();
                b = b.rational_term(id, -&t.coeff, &word);
            }
        }
        for (id, terms) in &self.diff {
            for t in terms {
                let word: Vec<&str> = t.word.iter().map(String::as_str).collect();
                b = b.rational_term(id, t.coeff.clone(), &word);
            }
        }
        Ok(b)
    }

    /// Builds the DGA and checks every invariant.
    pub fn to_dga(&self) -> Result<Dga, DgaError> {
        self.builder()?.build()
    }

    /// Builds the DGA without invariant checks.
    pub fn to_dga_unvalidated(&self) -> Result<Dga, DgaError> {
        self.builder()?.build_unvalidated()
    }

    pub fn from_json(text: &str) -> Result<Self, DgaError> {
        serde_json::from_str(text).map_err(|e| DgaError::SpecFile(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialises")
    }
}
