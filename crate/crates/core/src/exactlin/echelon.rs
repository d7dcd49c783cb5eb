use super::{ExactLinError, Rational, SparseMatrix, SparseVec};

/// Incrementally maintained row-echelon basis.
///
/// Every stored row has leading coefficient 1 and a leading column that no
/// other stored row leads with. Rows are only reduced at their leading entry,
/// so the basis is echelon but not fully reduced. The leading column of a
/// vector is its smallest index; callers choose a column numbering to control
/// which coordinates get eliminated first.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<SparseVec>,
    pivot_row: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: Vec::new(),
            pivot_row: vec![None; ncols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    /// Pivot columns in insertion order.
    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.leading().expect("stored rows are nonzero").0)
    }

    /// Reduces `v` against the basis at leading entries only.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        while let Some((lead, c)) = v.leading() {
            match self.pivot_row[lead] {
                Some(r) => {
                    let c = -c;
                    v.axpy(&c, &self.rows[r]);
                }
                None => break,
            }
        }
        v
    }

    /// Fully reduces `v`: the result has no entry in any pivot column.
    pub fn reduce_fully(&self, v: SparseVec) -> SparseVec {
        let mut v = self.reduce(v);
        loop {
            let hit = v
                .iter()
                .find(|(i, _)| self.pivot_row[*i].is_some())
                .map(|(i, c)| (i, c.clone()));
            match hit {
                Some((i, c)) => v.axpy(&-c, &self.rows[self.pivot_row[i].unwrap()]),
                None => return v,
            }
        }
    }

    /// Adds `v` to the span. Returns the new pivot column, or `None` when `v`
    /// was already in the span.
    pub fn insert(&mut self, v: SparseVec) -> Option<usize> {
        if let Some(m) = v.max_index() {
            assert!(m < self.ncols, "index {m} out of range");
        }
        let mut v = self.reduce(v);
        let (lead, c) = v.leading()?;
        let inv = c.recip();
        v.scale(&inv);
        self.pivot_row[lead] = Some(self.rows.len());
        self.rows.push(v);
        Some(lead)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    /// Fully reduced basis sorted by pivot column.
    pub fn into_rref(self) -> (Vec<SparseVec>, Vec<usize>) {
        let mut rows = self.rows;
        rows.sort_by_key(|r| r.leading().unwrap().0);
        let pivots: Vec<usize> = rows.iter().map(|r| r.leading().unwrap().0).collect();
        for i in (0..rows.len()).rev() {
            let p = pivots[i];
            let (head, tail) = rows.split_at_mut(i);
            let pivot_row = &tail[0];
            for row in head.iter_mut() {
                if let Some(c) = row.get(p).cloned() {
                    row.axpy(&-c, pivot_row);
                }
            }
        }
        (rows, pivots)
    }
}

/// Row-reduced echelon form of `m` and its pivot columns.
pub fn rref(m: &SparseMatrix) -> (SparseMatrix, Vec<usize>) {
    let mut e = Echelon::new(m.ncols());
    for row in m.rows() {
        e.insert(row.clone());
    }
    let (rows, pivots) = e.into_rref();
    (SparseMatrix::from_rows(m.ncols(), rows), pivots)
}

pub fn rank(m: &SparseMatrix) -> usize {
    let mut e = Echelon::new(m.ncols());
    for row in m.rows() {
        e.insert(row.clone());
    }
    e.rank()
}

/// Linear subspace of `Q^ambient_dim`, stored as an RREF basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<SparseVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: (0..ambient_dim).map(SparseVec::unit).collect(),
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn span(ambient_dim: usize, vectors: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut e = Echelon::new(ambient_dim);
        for v in vectors {
            e.insert(v);
        }
        let (basis, pivots) = e.into_rref();
        Subspace {
            ambient_dim,
            basis,
            pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        let mut r = v.clone();
        for (p, row) in self.pivots.iter().zip(&self.basis) {
            if let Some(c) = v.get(*p) {
                r.axpy(&-c.clone(), row);
            }
        }
        r.is_zero()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }
}

/// Basis of `{v : m v = 0}`.
pub fn kernel_basis(m: &SparseMatrix) -> Subspace {
    let (r, pivots) = rref(m);
    let n = m.ncols();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut vectors = Vec::with_capacity(n - pivots.len());
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut pairs = vec![(free, Rational::one())];
        for (row, &p) in r.rows().iter().zip(&pivots) {
            if let Some(c) = row.get(free) {
                pairs.push((p, -c));
            }
        }
        vectors.push(SparseVec::from_pairs(pairs));
    }
    Subspace::span(n, vectors)
}

/// `dim v - dim w`, after checking that `w` lies inside `v`.
pub fn quotient_dim(v: &Subspace, w: &Subspace) -> Result<usize, ExactLinError> {
    if v.ambient_dim() != w.ambient_dim() {
        return Err(ExactLinError::DimensionMismatch {
            left: v.ambient_dim(),
            right: w.ambient_dim(),
        });
    }
    if let Some(index) = w.basis().iter().position(|b| !v.contains(b)) {
        return Err(ExactLinError::ContainmentViolation { index });
    }
    Ok(v.dim() - w.dim())
}
