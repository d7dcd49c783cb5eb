use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::CordError;

/// A cord generator: a homotopy class of paths from the push-off of
/// component `source` to the push-off of component `target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CordGenerator {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

/// One skein instance `[γ1 γ2] - [γ1 m γ2] - [γ1][γ2] = 0`, where `whole`
/// is the class of `γ1 γ2`, `with_meridian` the class of `γ1 m γ2`, and
/// `left`, `right` the classes of `γ1`, `γ2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeinInstance {
    pub whole: String,
    pub with_meridian: String,
    pub left: String,
    pub right: String,
}

/// Finite presentation of a truncated cord algebra: the free algebra on
/// `generators` modulo the constant cords and the skein instances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CordPresentation {
    pub name: String,
    pub generators: Vec<CordGenerator>,
    /// Cords homotopic to constant paths; they vanish.
    pub constant: Vec<String>,
    pub skein: Vec<SkeinInstance>,
    /// Largest word count for which the rule table is complete.
    pub word_bound: usize,
}

impl CordPresentation {
    /// Index of every generator id; errors on duplicates.
    pub fn index(&self) -> Result<HashMap<&str, usize>, CordError> {
        let mut map = HashMap::new();
        for (i, g) in self.generators.iter().enumerate() {
            if map.insert(g.id.as_str(), i).is_some() {
                return Err(CordError::Inconsistent(format!("duplicate generator `{}`", g.id)));
            }
        }
        Ok(map)
    }

    /// Checks that every id is known and that every skein instance composes:
    /// `left` ends where `right` starts, and both sides of the relation run
    /// between the same components.
    pub fn validate(&self) -> Result<(), CordError> {
        let index = self.index()?;
        let get = |id: &str| {
            index
                .get(id)
                .map(|&i| &self.generators[i])
                .ok_or_else(|| CordError::UnknownGenerator(id.to_string()))
        };
        for id in &self.constant {
            let g = get(id)?;
            if g.source != g.target {
                return Err(CordError::Inconsistent(format!("constant cord `{id}` joins different components")));
            }
        }
        for s in &self.skein {
            let (w, m, l, r) = (get(&s.whole)?, get(&s.with_meridian)?, get(&s.left)?, get(&s.right)?);
            let ends = (l.source, r.target);
            if l.target != r.source || (w.source, w.target) != ends || (m.source, m.target) != ends {
                return Err(CordError::Inconsistent(format!(
                    "skein instance {} / {} / {} · {} does not compose",
                    s.whole, s.with_meridian, s.left, s.right
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, CordError> {
        let p: CordPresentation = serde_json::from_str(s).map_err(|e| CordError::Format(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }
}

/// Built-in links with hand-derived cord presentations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CordBuiltin {
    Unknot,
    HopfLink,
    Unlink2,
}

impl std::str::FromStr for CordBuiltin {
    type Err = CordError;

    fn from_str(s: &str) -> Result<Self, CordError> {
        match s {
            "unknot" => Ok(CordBuiltin::Unknot),
            "hopf_link" | "hopf" => Ok(CordBuiltin::HopfLink),
            "unlink2" | "unlink" => Ok(CordBuiltin::Unlink2),
            _ => Err(CordError::UnknownBuiltin(s.to_string())),
        }
    }
}

/// Presentation of a built-in with meridian powers (or free-group word
/// lengths) truncated at `kmax`; valid for word counts up to `2 kmax`.
///
/// * `unknot`: `π1 = Z = <m>`, trivial longitude. Cords `A_k` for
///   `|k| <= kmax`, `A_0` constant, skein
///   `A_{j+k} - A_{j+k+1} - A_j A_k`.
/// * `hopf_link`: `π1 = Z^2 = <m0, m1>` with longitude of each component
///   equal to the other meridian. Cords from `i` to `j` are double cosets
///   `<λ_i> \ π1 / <λ_j>`: self cords `s{i}_{k}` indexed by the own meridian
///   power, and a single cross cord `x01`, `x10` each way.
/// * `unlink2`: `π1 = F2 = <m0, m1>` with trivial longitudes, so cords are
///   reduced words; skein instances split a word at a letter boundary.
pub fn builtin_presentation(which: CordBuiltin, kmax: usize) -> Result<CordPresentation, CordError> {
    if kmax < 2 {
        return Err(CordError::Inconsistent(format!("kmax must be at least 2, got {kmax}")));
    }
    let p = match which {
        CordBuiltin::Unknot => unknot(kmax),
        CordBuiltin::HopfLink => hopf_link(kmax),
        CordBuiltin::Unlink2 => unlink2(kmax),
    };
    debug_assert!(p.validate().is_ok());
    Ok(p)
}

/// `0, 1, -1, 2, -2, ...` up to `kmax`.
fn powers(kmax: usize) -> Vec<i64> {
    let mut v = vec![0];
    for k in 1..=kmax as i64 {
        v.push(k);
        v.push(-k);
    }
    v
}

fn skein(whole: String, with_meridian: String, left: String, right: String) -> SkeinInstance {
    SkeinInstance {
        whole,
        with_meridian,
        left,
        right,
    }
}

fn gen(id: String, source: usize, target: usize) -> CordGenerator {
    CordGenerator { id, source, target }
}

/// Self-cord skein instances `s_{j+k} - s_{j+k+1} - s_j s_k` over
/// a meridian-power family.
fn power_skeins(name: impl Fn(i64) -> String, kmax: usize) -> Vec<SkeinInstance> {
    let k = kmax as i64;
    let mut out = Vec::new();
    for a in -k..=k {
        for b in -k..=k {
            if (a + b).abs() <= k && (a + b + 1).abs() <= k {
                out.push(skein(name(a + b), name(a + b + 1), name(a), name(b)));
            }
        }
    }
    out
}

fn unknot(kmax: usize) -> CordPresentation {
    let name = |k: i64| format!("A_{k}");
    CordPresentation {
        name: "unknot".into(),
        generators: powers(kmax).into_iter().map(|k| gen(name(k), 0, 0)).collect(),
        constant: vec![name(0)],
        skein: power_skeins(name, kmax),
        word_bound: 2 * kmax,
    }
}

fn hopf_link(kmax: usize) -> CordPresentation {
    let s = |i: usize| move |k: i64| format!("s{i}_{k}");
    let x = |i: usize, j: usize| format!("x{i}{j}");
    let mut generators = vec![gen(x(0, 1), 0, 1), gen(x(1, 0), 1, 0)];
    for k in powers(kmax) {
        for i in 0..2 {
            generators.push(gen(s(i)(k), i, i));
        }
    }
    let mut sk = Vec::new();
    for i in 0..2 {
        let o = 1 - i;
        // through the own component: ordinary meridian-power skein
        sk.extend(power_skeins(s(i), kmax));
        // through the other component: the inserted meridian is the own
        // longitude, so both sides agree and only the product survives
        for k in powers(kmax) {
            sk.push(skein(s(i)(k), s(i)(k), x(i, o), x(o, i)));
        }
        // cross cords absorb self cords on either side
        for k in powers(kmax) {
            sk.push(skein(x(i, o), x(i, o), s(i)(k), x(i, o)));
            sk.push(skein(x(i, o), x(i, o), x(i, o), s(o)(k)));
        }
    }
    CordPresentation {
        name: "hopf_link".into(),
        generators,
        constant: vec![s(0)(0), s(1)(0)],
        skein: sk,
        word_bound: 2 * kmax,
    }
}

/// Letters of `F2`: `±1` for `m0^{±1}`, `±2` for `m1^{±1}`.
type FreeWord = Vec<i8>;

fn free_words(max_len: usize) -> Vec<FreeWord> {
    let mut all = vec![Vec::new()];
    let mut last: Vec<FreeWord> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &last {
            for l in [1i8, -1, 2, -2] {
                if w.last() != Some(&-l) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        all.extend(next.iter().cloned());
        last = next;
    }
    all
}

fn free_mul(a: &[i8], b: &[i8]) -> FreeWord {
    let mut out: FreeWord = a.to_vec();
    for &l in b {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn free_name(w: &[i8]) -> String {
    if w.is_empty() {
        return "e".into();
    }
    w.iter()
        .map(|&l| match l {
            1 => "m0",
            -1 => "M0",
            2 => "m1",
            _ => "M1",
        })
        .collect()
}

fn unlink2(kmax: usize) -> CordPresentation {
    let words = free_words(kmax);
    let name = |i: usize, j: usize, w: &[i8]| format!("c{i}{j}:{}", free_name(w));
    let pairs = [(0, 1), (1, 0), (0, 0), (1, 1)];
    let mut generators = Vec::new();
    for w in &words {
        for &(i, j) in &pairs {
            generators.push(gen(name(i, j, w), i, j));
        }
    }
    let mut sk = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            for c in 0..2usize {
                let m = [(c + 1) as i8];
                for h in &words {
                    for p in 0..=h.len() {
                        let (g1, g2) = h.split_at(p);
                        let with_m = free_mul(&free_mul(g1, &m), g2);
                        if with_m.len() > kmax {
                            continue;
                        }
                        sk.push(skein(name(i, j, h), name(i, j, &with_m), name(i, c, g1), name(c, j, g2)));
                    }
                }
            }
        }
    }
    CordPresentation {
        name: "unlink2".into(),
        generators,
        constant: vec![name(0, 0, &[]), name(1, 1, &[])],
        skein: sk,
        word_bound: 2 * kmax,
    }
}
