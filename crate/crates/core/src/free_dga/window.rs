use std::collections::HashSet;

use crate::exactlin::Rational;

use super::dga::Dga;
use super::length::Length;
use super::DgaError;

/// Distance below which a window bound counts as colliding with a realizable
/// word length.
pub const WINDOW_TOLERANCE: f64 = 1e-9;

/// Length truncation `A^{<a}`: the span of words of total length `< a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthWindow {
    bound: Rational,
}

impl LengthWindow {
    /// A window that has not been checked against any DGA. Length truncation
    /// is a subcomplex for every bound; validation only guards against bounds
    /// sitting on a realizable length.
    pub fn unchecked(bound: Rational) -> Result<Self, DgaError> {
        if bound.signum() <= 0 {
            return Err(DgaError::InvalidWindow {
                a: bound.to_string(),
                nearest: String::new(),
                distance: 0.0,
            });
        }
        Ok(LengthWindow { bound })
    }

    pub fn bound(&self) -> &Rational {
        &self.bound
    }

    pub fn contains(&self, len: &Length) -> bool {
        len.cmp_rational(&self.bound) == std::cmp::Ordering::Less
    }
}

/// All distinct lengths of nonempty words that do not exceed `limit`.
pub fn realizable_lengths(dga: &Dga, limit: &Rational) -> Vec<Length> {
    let mut values: Vec<Length> = Vec::new();
    for g in dga.generators() {
        if !values.contains(&g.length) {
            values.push(g.length.clone());
        }
    }
    let mut seen: HashSet<Length> = HashSet::new();
    let mut frontier = vec![Length::zero()];
    while let Some(s) = frontier.pop() {
        for v in &values {
            let Ok(t) = s.checked_add(v) else { continue };
            if t.cmp_rational(limit) != std::cmp::Ordering::Greater && seen.insert(t.clone()) {
                frontier.push(t);
            }
        }
    }
    let mut out: Vec<Length> = seen.into_iter().collect();
    out.sort_by(|a, b| a.to_f64().total_cmp(&b.to_f64()));
    out
}

/// The realizable length closest to `a` and its distance, if any lengths
/// are realizable near `a`.
pub fn nearest_realizable(dga: &Dga, a: &Rational) -> Option<(Length, f64)> {
    let slack = Rational::new(1, 1000);
    let limit = a + &slack;
    realizable_lengths(dga, &limit)
        .into_iter()
        .map(|l| {
            let d = l
                .checked_sub(&Length::rational(a.clone()))
                .map(|x| x.to_f64().abs())
                .unwrap_or(f64::INFINITY);
            (l, d)
        })
        .min_by(|x, y| x.1.total_cmp(&y.1))
}

impl Dga {
    /// Validated window: `a` must be positive and farther than
    /// [`WINDOW_TOLERANCE`] from every realizable word length.
    pub fn window(&self, a: Rational) -> Result<LengthWindow, DgaError> {
        let w = LengthWindow::unchecked(a)?;
        if let Some((nearest, distance)) = nearest_realizable(self, &w.bound) {
            if distance < WINDOW_TOLERANCE {
                return Err(DgaError::InvalidWindow {
                    a: w.bound.to_string(),
                    nearest: nearest.to_string(),
                    distance,
                });
            }
        }
        Ok(w)
    }
}
