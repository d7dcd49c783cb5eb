//! Python bindings: `import strhom_py`.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use strhom::chords::{builtin_config, find_spectrum, BuiltinLink, ChordConfig, ChordError, SpectrumReport};
use strhom::cord::{
    builtin_presentation, compare_with_h0, comparison_model, quotient_dims_by_wordcount, CordBuiltin, CordError,
};
use strhom::exactlin::Rational;
use strhom::free_dga::{
    build_hopf, build_unlink, chain_dim, h0_dims_by_wordcount, homology_dim, realizable_lengths, Dga, DgaError,
    DgaSpec, LengthWindow,
};
use strhom::specseq::{pages, FilteredComplex, PageTable, SpecSeqError};

create_exception!(strhom_py, InvalidWindowError, PyValueError, "Window bound on or near a realizable length.");
create_exception!(strhom_py, InvariantError, PyValueError, "A DGA or filtered complex breaks a structural invariant.");

fn dga_err(e: DgaError) -> PyErr {
    match e {
        DgaError::InvalidWindow { .. } => InvalidWindowError::new_err(e.to_string()),
        DgaError::DegreeViolation { .. } | DgaError::FiltrationViolation { .. } | DgaError::DSquaredNonzero { .. } => {
            InvariantError::new_err(e.to_string())
        }
        e => PyValueError::new_err(e.to_string()),
    }
}

fn specseq_err(e: SpecSeqError) -> PyErr {
    match e {
        SpecSeqError::Dga(e) => dga_err(e),
        e => InvariantError::new_err(e.to_string()),
    }
}

fn cord_err(e: CordError) -> PyErr {
    match e {
        CordError::Dga(e) => dga_err(e),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn chord_err(e: ChordError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(s: &str) -> PyResult<Rational> {
    s.parse().map_err(|_| PyValueError::new_err(format!("`{s}` is not a rational number")))
}

/// A free DGA with a length filtration, built in or loaded from JSON.
#[pyclass(name = "Dga", module = "strhom_py", frozen)]
pub struct PyDga {
    inner: Dga,
}

impl PyDga {
    fn window(&self, a: &str) -> PyResult<LengthWindow> {
        self.inner.window(rational(a)?).map_err(dga_err)
    }
}

#[pymethods]
impl PyDga {
    /// Chord DGA of the Hopf link of `(d-1)`-spheres in `R^{2d-1}`.
    #[staticmethod]
    fn hopf(d: i64) -> PyResult<Self> {
        Ok(PyDga { inner: build_hopf(d).map_err(dga_err)? })
    }

    /// Chord DGA of the two-component unlink at separation `z2star`.
    #[staticmethod]
    #[pyo3(signature = (d, z2star = "3"))]
    fn unlink(d: i64, z2star: &str) -> PyResult<Self> {
        Ok(PyDga { inner: build_unlink(d, &rational(z2star)?).map_err(dga_err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let spec = DgaSpec::from_json(text).map_err(dga_err)?;
        Ok(PyDga { inner: spec.to_dga().map_err(dga_err)? })
    }

    fn to_json(&self) -> String {
        DgaSpec::from_dga(&self.inner).to_json()
    }

    #[getter]
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn __len__(&self) -> usize {
        self.inner.num_generators()
    }

    fn __repr__(&self) -> String {
        format!("Dga(name={:?}, generators={})", self.inner.name(), self.inner.num_generators())
    }

    /// `(id, degree, length, weight)` for every generator.
    fn generators(&self) -> Vec<(String, i64, String, u32)> {
        self.inner
            .generators()
            .iter()
            .map(|g| (g.id.clone(), g.degree, g.length.to_string(), g.weight))
            .collect()
    }

    /// Distinct word lengths up to `limit`, as exact strings.
    fn realizable_lengths(&self, limit: &str) -> PyResult<Vec<String>> {
        Ok(realizable_lengths(&self.inner, &rational(limit)?).iter().map(|l| l.to_string()).collect())
    }

    fn d_squared_zero(&self) -> bool {
        self.inner.d_squared_zero_check().ok
    }

    /// The DGA with the `F` part of the differential dropped.
    fn forget_f(&self) -> PyResult<Self> {
        Ok(PyDga { inner: self.inner.forget_f().map_err(dga_err)? })
    }

    fn chain_dim(&self, degree: i64, a: &str) -> PyResult<usize> {
        Ok(chain_dim(&self.inner, degree, &self.window(a)?))
    }

    /// `dim H_degree` of the words of length below `a`.
    fn homology_dim(&self, degree: i64, a: &str) -> PyResult<usize> {
        homology_dim(&self.inner, degree, &self.window(a)?).map_err(dga_err)
    }

    /// Slice dimensions of the word-count graded `H_0` below `a`, for word
    /// counts `0..=wmax`.
    fn h0_dims(&self, a: &str, wmax: usize) -> PyResult<Vec<usize>> {
        h0_dims_by_wordcount(&self.inner, &self.window(a)?, wmax).map_err(dga_err)
    }

    /// Pages `E^1 ..= E^rmax` and `E^∞` of the word-count filtration below `a`.
    #[pyo3(signature = (a, rmax = 3))]
    fn spectral_pages(&self, a: &str, rmax: usize) -> PyResult<Vec<Page>> {
        let fc = FilteredComplex::from_dga(&self.inner, &self.window(a)?).map_err(specseq_err)?;
        page_list(&fc, rmax)
    }
}

/// One page of a spectral sequence.
#[pyclass(module = "strhom_py", frozen)]
pub struct Page {
    inner: PageTable,
}

#[pymethods]
impl Page {
    /// Page index; `None` for `E^∞`.
    #[getter]
    fn r(&self) -> Option<usize> {
        (!self.inner.limit).then_some(self.inner.r)
    }

    #[getter]
    fn dims(&self) -> BTreeMap<(i64, i64), usize> {
        self.inner.dims.clone()
    }

    fn get(&self, p: i64, q: i64) -> usize {
        self.inner.get(p, q)
    }

    /// Sum over the total degree `p + q = n`.
    fn total(&self, n: i64) -> usize {
        self.inner.total(n)
    }

    fn __repr__(&self) -> String {
        match self.r() {
            Some(r) => format!("Page(r={r}, entries={})", self.inner.dims.len()),
            None => format!("Page(r=inf, entries={})", self.inner.dims.len()),
        }
    }
}

fn page_list(fc: &FilteredComplex, rmax: usize) -> PyResult<Vec<Page>> {
    Ok(pages(fc, rmax).map_err(specseq_err)?.into_iter().map(|inner| Page { inner }).collect())
}

/// Spectral pages of a filtered complex given as JSON.
#[pyfunction]
#[pyo3(signature = (text, rmax = 3))]
fn complex_pages(text: &str, rmax: usize) -> PyResult<Vec<Page>> {
    page_list(&FilteredComplex::from_json(text).map_err(specseq_err)?, rmax)
}

/// Binormal chords of a built-in link.
#[pyclass(module = "strhom_py", frozen)]
pub struct ChordSpectrum {
    inner: SpectrumReport,
}

#[pymethods]
impl ChordSpectrum {
    /// Distinct chord lengths, ascending.
    #[getter]
    fn lengths(&self) -> Vec<f64> {
        self.inner.lengths()
    }

    #[getter]
    fn failure_rate(&self) -> f64 {
        self.inner.failure_rate()
    }

    /// `(source, target, length, residual, multiplicity)` per chord.
    fn chords(&self) -> Vec<(usize, usize, f64, f64, usize)> {
        self.inner
            .chords
            .iter()
            .map(|c| (c.components.0, c.components.1, c.length, c.residual, c.multiplicity))
            .collect()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __repr__(&self) -> String {
        format!("ChordSpectrum(lengths={:?})", self.inner.lengths())
    }
}

/// Searches for binormal chords of `link` ("hopf" or "unlink") shorter than
/// `bound`.
#[pyfunction]
#[pyo3(signature = (link, d = 2, z2star = 3.0, bound = None, nu = 16))]
fn find_chords(link: &str, d: usize, z2star: f64, bound: Option<f64>, nu: usize) -> PyResult<ChordSpectrum> {
    let which = match link {
        "hopf" => BuiltinLink::Hopf,
        "unlink" => BuiltinLink::Unlink,
        _ => return Err(PyValueError::new_err(format!("unknown link `{link}` (expected hopf or unlink)"))),
    };
    let k = builtin_config(which, d, z2star).map_err(chord_err)?;
    let cfg = ChordConfig { nu, length_bound: bound, ..ChordConfig::default() };
    Ok(ChordSpectrum { inner: find_spectrum(&k, &cfg).map_err(chord_err)? })
}

fn cord_builtin(name: &str) -> PyResult<CordBuiltin> {
    name.parse().map_err(cord_err)
}

fn default_kmax(wmax: usize) -> usize {
    wmax.div_ceil(2).max(2)
}

/// Word-count slice dimensions of a built-in cord algebra for `0..=wmax`.
#[pyfunction]
#[pyo3(signature = (builtin, wmax, kmax = None))]
fn cord_dims(builtin: &str, wmax: usize, kmax: Option<usize>) -> PyResult<Vec<usize>> {
    let pres = builtin_presentation(cord_builtin(builtin)?, kmax.unwrap_or(default_kmax(wmax))).map_err(cord_err)?;
    quotient_dims_by_wordcount(&pres, wmax).map_err(cord_err)
}

/// Cord slice dimensions next to those of the matching DGA's `H_0`.
#[pyfunction]
#[pyo3(signature = (builtin, wmax, kmax = None))]
fn compare_cord(builtin: &str, wmax: usize, kmax: Option<usize>) -> PyResult<(Vec<usize>, Vec<usize>)> {
    let which = cord_builtin(builtin)?;
    let pres = builtin_presentation(which, kmax.unwrap_or(default_kmax(wmax))).map_err(cord_err)?;
    let (dga, window) = comparison_model(which, wmax).map_err(cord_err)?;
    let c = compare_with_h0(&pres, &dga, &window, wmax).map_err(cord_err)?;
    Ok((c.cord, c.h0))
}

#[pymodule]
pub fn strhom_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("InvalidWindowError", m.py().get_type::<InvalidWindowError>())?;
    m.add("InvariantError", m.py().get_type::<InvariantError>())?;
    m.add_class::<PyDga>()?;
    m.add_class::<Page>()?;
    m.add_class::<ChordSpectrum>()?;
    m.add_function(wrap_pyfunction!(complex_pages, m)?)?;
    m.add_function(wrap_pyfunction!(find_chords, m)?)?;
    m.add_function(wrap_pyfunction!(cord_dims, m)?)?;
    m.add_function(wrap_pyfunction!(compare_cord, m)?)?;
    Ok(())
}
