use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::exactlin::{Rational, SparseMatrix, SparseVec};
use crate::free_dga::{coordinates, window_words, Dga, LengthWindow, WordBasis};

use super::SpecSeqError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub id: String,
    pub degree: i64,
    pub filtration: i64,
}

/// Finite based chain complex with an increasing integer filtration.
///
/// Row `i` of `boundary` is the boundary of cell `i`, written in cell
/// coordinates.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    cells: Vec<Cell>,
    boundary: SparseMatrix,
}

impl FilteredComplex {
    /// Checks that the boundary has degree -1, never raises filtration and
    /// squares to zero.
    pub fn new(cells: Vec<Cell>, boundary: SparseMatrix) -> Result<Self, SpecSeqError> {
        let n = cells.len();
        if boundary.nrows() != n || boundary.ncols() != n {
            return Err(SpecSeqError::Shape {
                cells: n,
                rows: boundary.nrows(),
                cols: boundary.ncols(),
            });
        }
        for (i, row) in boundary.rows().iter().enumerate() {
            for (j, _) in row.iter() {
                if cells[j].degree != cells[i].degree - 1 {
                    return Err(SpecSeqError::DegreeViolation {
                        from: cells[i].id.clone(),
                        to: cells[j].id.clone(),
                    });
                }
                if cells[j].filtration > cells[i].filtration {
                    return Err(SpecSeqError::FiltrationViolation {
                        from: cells[i].id.clone(),
                        to: cells[j].id.clone(),
                    });
                }
            }
        }
        let fc = FilteredComplex { cells, boundary };
        for (i, row) in fc.boundary.rows().iter().enumerate() {
            let mut dd = SparseVec::new();
            for (j, c) in row.iter() {
                dd.axpy(c, fc.boundary.row(j));
            }
            if !dd.is_zero() {
                return Err(SpecSeqError::BoundarySquaredNonzero(fc.cells[i].id.clone()));
            }
        }
        Ok(fc)
    }

    /// The length-truncated DGA as a complex filtered by minus the word
    /// count.
    pub fn from_dga(dga: &Dga, window: &LengthWindow) -> Result<Self, SpecSeqError> {
        let words = window_words(dga, window);
        let basis = WordBasis::new(words);
        let cells: Vec<Cell> = basis
            .words()
            .iter()
            .map(|w| Cell {
                id: dga.format_word(w),
                degree: dga.word_degree(w),
                filtration: -(dga.word_weight(w) as i64),
            })
            .collect();
        let rows = basis
            .words()
            .iter()
            .map(|w| coordinates(dga, &dga.differential_word(w), &basis, w))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(cells, SparseMatrix::from_rows(basis.len(), rows))
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn boundary(&self) -> &SparseMatrix {
        &self.boundary
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell_index(&self, id: &str) -> Option<usize> {
        self.cells.iter().position(|c| c.id == id)
    }

    /// Sorted distinct degrees.
    pub fn degrees(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.cells.iter().map(|c| c.degree).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `(min, max)` filtration level, or `None` for the empty complex.
    pub fn filtration_range(&self) -> Option<(i64, i64)> {
        let lo = self.cells.iter().map(|c| c.filtration).min()?;
        let hi = self.cells.iter().map(|c| c.filtration).max()?;
        Some((lo, hi))
    }

    /// Cells of degree `n` with filtration in `range`.
    pub(crate) fn select(&self, n: i64, keep: impl Fn(i64) -> bool) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&i| self.cells[i].degree == n && keep(self.cells[i].filtration))
            .collect()
    }

    /// Submatrix of the boundary from `sources` to `targets`, as a matrix
    /// with one row per source.
    pub fn boundary_block(&self, sources: &[usize], targets: &[usize]) -> SparseMatrix {
        let pos: HashMap<usize, usize> = targets.iter().enumerate().map(|(k, &t)| (t, k)).collect();
        let rows = sources
            .iter()
            .map(|&s| {
                SparseVec::from_pairs(
                    self.boundary
                        .row(s)
                        .iter()
                        .filter_map(|(j, c)| pos.get(&j).map(|&k| (k, c.clone()))),
                )
            })
            .collect();
        SparseMatrix::from_rows(targets.len(), rows)
    }

    /// The complex with cells appended; `extra_boundary` gives boundaries of
    /// the new cells in the coordinates of the enlarged cell list.
    pub fn extended(
        &self,
        extra: Vec<Cell>,
        extra_boundary: Vec<SparseVec>,
    ) -> Result<FilteredComplex, SpecSeqError> {
        let mut cells = self.cells.clone();
        cells.extend(extra);
        let mut rows: Vec<SparseVec> = self.boundary.rows().to_vec();
        rows.extend(extra_boundary);
        let n = cells.len();
        FilteredComplex::new(cells, SparseMatrix::from_rows(n, rows))
    }

    pub fn to_spec(&self) -> ComplexSpec {
        let mut boundary = Vec::new();
        for (i, row) in self.boundary.rows().iter().enumerate() {
            for (j, c) in row.iter() {
                boundary.push(BoundaryEntry {
                    from: self.cells[i].id.clone(),
                    to: self.cells[j].id.clone(),
                    coeff: c.clone(),
                });
            }
        }
        ComplexSpec {
            cells: self.cells.clone(),
            boundary,
        }
    }

    pub fn from_spec(spec: &ComplexSpec) -> Result<Self, SpecSeqError> {
        let mut index = HashMap::new();
        for (i, c) in spec.cells.iter().enumerate() {
            if index.insert(c.id.as_str(), i).is_some() {
                return Err(SpecSeqError::DuplicateCell(c.id.clone()));
            }
        }
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| SpecSeqError::UnknownCell(id.to_string()))
        };
        let mut triplets = Vec::with_capacity(spec.boundary.len());
        for e in &spec.boundary {
            triplets.push((lookup(&e.from)?, lookup(&e.to)?, e.coeff.clone()));
        }
        let n = spec.cells.len();
        Self::new(spec.cells.clone(), SparseMatrix::from_triplets(n, n, triplets))
    }

    pub fn from_json(text: &str) -> Result<Self, SpecSeqError> {
        let spec: ComplexSpec =
            serde_json::from_str(text).map_err(|e| SpecSeqError::Format(e.to_string()))?;
        Self::from_spec(&spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_spec()).expect("complex serialises")
    }

    /// Number of cells per `(degree, filtration)`.
    pub fn cell_counts(&self) -> BTreeMap<(i64, i64), usize> {
        let mut m = BTreeMap::new();
        for c in &self.cells {
            *m.entry((c.degree, c.filtration)).or_insert(0) += 1;
        }
        m
    }
}

/// JSON form of a [`FilteredComplex`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub cells: Vec<Cell>,
    pub boundary: Vec<BoundaryEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryEntry {
    pub from: String,
    pub to: String,
    pub coeff: Rational,
}
