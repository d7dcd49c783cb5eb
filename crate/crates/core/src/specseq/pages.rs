use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::exactlin::{rank, Echelon, SparseVec};

use super::complex::FilteredComplex;
use super::SpecSeqError;

/// Dimensions `E^r_{p,q}` of one page, keyed by `(p, q)` with total degree
/// `n = p + q`. Every `(p, q)` that carries at least one cell is listed, so
/// zero entries are explicit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PageTable {
    pub r: usize,
    /// True for the limit page `E^∞`.
    pub limit: bool,
    #[serde(serialize_with = "serialize_dims")]
    pub dims: BTreeMap<(i64, i64), usize>,
}

fn serialize_dims<S: serde::Serializer>(
    dims: &BTreeMap<(i64, i64), usize>,
    s: S,
) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry {
        p: i64,
        q: i64,
        dim: usize,
    }
    s.collect_seq(dims.iter().map(|(&(p, q), &dim)| Entry { p, q, dim }))
}

impl PageTable {
    pub fn get(&self, p: i64, q: i64) -> usize {
        self.dims.get(&(p, q)).copied().unwrap_or(0)
    }

    /// Sum of `E_{p, n-p}` over `p`.
    pub fn total(&self, n: i64) -> usize {
        self.dims
            .iter()
            .filter(|((p, q), _)| p + q == n)
            .map(|(_, d)| d)
            .sum()
    }

    /// Entries of the column `p`, keyed by `q`.
    pub fn column(&self, p: i64) -> BTreeMap<i64, usize> {
        self.dims
            .iter()
            .filter(|((pp, _), _)| *pp == p)
            .map(|(&(_, q), &d)| (q, d))
            .collect()
    }

    /// CSV rows `r,p,q,dim`; the limit page uses `inf` for `r`.
    pub fn write_csv_rows(&self, out: &mut String) {
        let r = if self.limit { "inf".to_string() } else { self.r.to_string() };
        for (&(p, q), d) in &self.dims {
            let _ = writeln!(out, "{r},{p},{q},{d}");
        }
    }
}

pub fn pages_to_csv(pages: &[PageTable]) -> String {
    let mut out = String::from("r,p,q,dim\n");
    for page in pages {
        page.write_csv_rows(&mut out);
    }
    out
}

/// Ranks of `∂: C_n -> C_{n-1}` restricted to `F_t C_n` and projected onto
/// `C_{n-1} / F_s C_{n-1}`, for all filtration levels `s`, `t`.
///
/// Target columns are numbered by decreasing filtration, so the columns of
/// filtration `> s` form a prefix and the projected rank is the number of
/// pivots in that prefix. Sources are inserted level by level in increasing
/// filtration and the pivot filtrations are recorded after each level.
#[derive(Clone, Debug)]
struct RankTable {
    levels: Vec<i64>,
    /// Sorted filtrations of the pivot columns after all sources of
    /// filtration `<= levels[k]` were inserted.
    snapshots: Vec<Vec<i64>>,
}

impl RankTable {
    fn build(fc: &FilteredComplex, n: i64, levels: &[i64]) -> Self {
        let cells = fc.cells();
        let mut targets = fc.select(n - 1, |_| true);
        targets.sort_by_key(|&i| std::cmp::Reverse(cells[i].filtration));
        let column: HashMap<usize, usize> = targets.iter().enumerate().map(|(k, &t)| (t, k)).collect();
        let mut sources = fc.select(n, |_| true);
        sources.sort_by_key(|&i| cells[i].filtration);

        let mut ech = Echelon::new(targets.len());
        let mut pivot_filtrations: Vec<i64> = Vec::new();
        let mut snapshots = Vec::with_capacity(levels.len());
        let mut next = 0;
        for &level in levels {
            while next < sources.len() && cells[sources[next]].filtration <= level {
                let row = fc.boundary().row(sources[next]);
                let v = SparseVec::from_pairs(row.iter().map(|(j, c)| (column[&j], c.clone())));
                if let Some(col) = ech.insert(v) {
                    pivot_filtrations.push(cells[targets[col]].filtration);
                }
                next += 1;
            }
            let mut snap = pivot_filtrations.clone();
            snap.sort_unstable();
            snapshots.push(snap);
        }
        RankTable {
            levels: levels.to_vec(),
            snapshots,
        }
    }

    fn snapshot(&self, t: i64) -> Option<&Vec<i64>> {
        let k = self.levels.partition_point(|&l| l <= t);
        if k == 0 {
            None
        } else {
            Some(&self.snapshots[k - 1])
        }
    }

    /// Rank of `F_t C_n -> C_{n-1} / F_s C_{n-1}`.
    fn projected(&self, s: i64, t: i64) -> usize {
        self.snapshot(t)
            .map_or(0, |snap| snap.len() - snap.partition_point(|&f| f <= s))
    }

    /// Rank of `∂` on `F_t C_n`.
    fn full(&self, t: i64) -> usize {
        self.snapshot(t).map_or(0, Vec::len)
    }
}

/// Spectral sequence of a filtered complex, with all ranks precomputed.
#[derive(Clone, Debug)]
pub struct SpectralSequence {
    levels: Vec<i64>,
    /// Cell counts per `(degree, filtration)`.
    counts: BTreeMap<(i64, i64), usize>,
    tables: HashMap<i64, RankTable>,
}

impl SpectralSequence {
    pub fn new(fc: &FilteredComplex) -> Self {
        let mut levels: Vec<i64> = fc.cells().iter().map(|c| c.filtration).collect();
        levels.sort_unstable();
        levels.dedup();
        let mut tables = HashMap::new();
        for n in fc.degrees() {
            tables.insert(n, RankTable::build(fc, n, &levels));
        }
        SpectralSequence {
            levels,
            counts: fc.cell_counts(),
            tables,
        }
    }

    /// `max filtration - min filtration`; pages are constant for
    /// `r > width`.
    pub fn width(&self) -> usize {
        match (self.levels.first(), self.levels.last()) {
            (Some(lo), Some(hi)) => (hi - lo) as usize,
            _ => 0,
        }
    }

    fn f_dim(&self, n: i64, p: i64) -> usize {
        self.counts
            .range((n, i64::MIN)..=(n, p))
            .map(|(_, c)| c)
            .sum()
    }

    fn projected(&self, n: i64, s: i64, t: i64) -> usize {
        self.tables.get(&n).map_or(0, |tab| tab.projected(s, t))
    }

    fn full(&self, n: i64, t: i64) -> usize {
        self.tables.get(&n).map_or(0, |tab| tab.full(t))
    }

    /// `dim Z^r_p` in degree `n`: elements of `F_p C_n` with boundary in
    /// `F_{p-r}`.
    fn z(&self, n: i64, p: i64, r: i64) -> usize {
        self.f_dim(n, p) - self.projected(n, p - r, p)
    }

    /// `dim (F_s C_n ∩ ∂ F_t C_{n+1})`.
    fn b(&self, n: i64, s: i64, t: i64) -> usize {
        self.full(n + 1, t) - self.projected(n + 1, s, t)
    }

    /// `dim E^r_{p,q}`, `r >= 1`:
    /// `Z^r_p / (Z^{r-1}_{p-1} + F_p ∩ ∂F_{p+r-1})`, where the intersection
    /// of the two summands is `F_{p-1} ∩ ∂F_{p+r-1}`.
    pub fn dim(&self, r: usize, p: i64, q: i64) -> usize {
        let n = p + q;
        let r = r as i64;
        let top = self.z(n, p, r) + self.b(n, p - 1, p + r - 1);
        let bottom = self.z(n, p - 1, r - 1) + self.b(n, p, p + r - 1);
        top - bottom
    }

    pub fn page(&self, r: usize) -> Result<PageTable, SpecSeqError> {
        if r == 0 {
            return Err(SpecSeqError::InvalidPage(r));
        }
        let dims = self
            .counts
            .keys()
            .map(|&(n, p)| ((p, n - p), self.dim(r, p, n - p)))
            .collect();
        Ok(PageTable {
            r,
            limit: false,
            dims,
        })
    }

    pub fn e_infinity(&self) -> PageTable {
        let mut page = self.page(self.width() + 1).expect("r >= 1");
        page.limit = true;
        page
    }

    /// `dim H_n` of the whole complex.
    pub fn homology_dim(&self, n: i64) -> usize {
        let top = self.levels.last().copied().unwrap_or(0);
        self.f_dim(n, top) - self.full(n, top) - self.full(n + 1, top)
    }

    pub fn degrees(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.counts.keys().map(|&(n, _)| n).collect();
        v.dedup();
        v
    }
}

pub fn page(fc: &FilteredComplex, r: usize) -> Result<PageTable, SpecSeqError> {
    SpectralSequence::new(fc).page(r)
}

/// Pages `1..=rmax` followed by `E^∞`.
pub fn pages(fc: &FilteredComplex, rmax: usize) -> Result<Vec<PageTable>, SpecSeqError> {
    let ss = SpectralSequence::new(fc);
    let mut out = (1..=rmax).map(|r| ss.page(r)).collect::<Result<Vec<_>, _>>()?;
    out.push(ss.e_infinity());
    Ok(out)
}

/// `dim H_n` for every degree present.
pub fn homology_dims(fc: &FilteredComplex) -> BTreeMap<i64, usize> {
    let ss = SpectralSequence::new(fc);
    ss.degrees().into_iter().map(|n| (n, ss.homology_dim(n))).collect()
}

/// True iff `Σ_p dim E^∞_{p, n-p} = dim H_n` in every degree.
pub fn convergence_check(fc: &FilteredComplex) -> bool {
    let ss = SpectralSequence::new(fc);
    let inf = ss.e_infinity();
    ss.degrees()
        .into_iter()
        .all(|n| inf.total(n) == ss.homology_dim(n))
}

/// `dim H_n(F_p / F_{p-1})`, computed directly from the graded piece with
/// plain matrix ranks.
pub fn associated_graded_homology(fc: &FilteredComplex, p: i64, n: i64) -> usize {
    let here = fc.select(n, |f| f == p);
    let below = fc.select(n - 1, |f| f == p);
    let above = fc.select(n + 1, |f| f == p);
    let out = rank(&fc.boundary_block(&here, &below));
    let into = rank(&fc.boundary_block(&above, &here));
    here.len() - out - into
}
