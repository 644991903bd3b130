use std::collections::HashMap;
use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use layoutforge::corpus::{self, AlphabetConfig, Token};
use layoutforge::evaluator::{self, EvaluateOptions};
use layoutforge::layout::{self, Geometry};
use layoutforge::partition::{self, PartitionOptions};
use layoutforge::pipeline::Pipeline;
use layoutforge::stats;

create_exception!(layoutforge_py, LayoutforgeError, PyException);

fn err(e: layoutforge::Error) -> PyErr {
    LayoutforgeError::new_err(e.to_string())
}

fn one_char(s: &str) -> PyResult<char> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(LayoutforgeError::new_err(format!("expected a single letter, got {s:?}"))),
    }
}

fn alphabet(json: Option<&str>) -> PyResult<AlphabetConfig> {
    match json {
        Some(text) => AlphabetConfig::from_json(text).map_err(err),
        None => Ok(AlphabetConfig::default()),
    }
}

#[pyclass(name = "LetterStream", module = "layoutforge_py", from_py_object)]
#[derive(Clone)]
struct PyLetterStream {
    inner: layoutforge::LetterStream,
}

#[pymethods]
impl PyLetterStream {
    #[getter]
    fn letter_count(&self) -> usize {
        self.inner.letter_count()
    }

    /// Letters as one-character strings, boundaries as `None`.
    fn tokens(&self) -> Vec<Option<String>> {
        self.inner
            .tokens()
            .iter()
            .map(|t| match t {
                Token::Letter(c) => Some(c.to_string()),
                Token::Boundary => None,
            })
            .collect()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn __len__(&self) -> usize {
        self.inner.tokens().len()
    }
}

#[pyclass(name = "NGramTable", module = "layoutforge_py", from_py_object)]
#[derive(Clone)]
struct PyNGramTable {
    inner: stats::NGramTable,
}

#[pymethods]
impl PyNGramTable {
    #[staticmethod]
    fn from_counts(n: usize, counts: HashMap<String, u64>, total_letters: u64) -> PyResult<Self> {
        stats::NGramTable::from_counts(n, counts, total_letters)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn total_letters(&self) -> u64 {
        self.inner.total_letters()
    }

    fn count(&self, gram: &str) -> u64 {
        self.inner.count(gram)
    }

    fn support(&self, gram: &str) -> PyResult<f64> {
        self.inner.support(gram).map_err(err)
    }

    fn involvement_total(&self, letter: &str) -> PyResult<u64> {
        Ok(self.inner.involvement_total(one_char(letter)?))
    }

    fn digraph_confidence(&self, focus: &str, digraph: &str) -> PyResult<f64> {
        self.inner.digraph_confidence(one_char(focus)?, digraph).map_err(err)
    }

    /// `(gram, count)` pairs, most frequent first.
    fn items(&self) -> Vec<(String, u64)> {
        self.inner.sorted().into_iter().map(|(g, c)| (g.to_string(), c)).collect()
    }

    fn to_tsv(&self) -> String {
        stats::table_to_tsv(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

#[pyclass(name = "HandPartition", module = "layoutforge_py", from_py_object)]
#[derive(Clone)]
struct PyHandPartition {
    inner: partition::HandPartition,
}

#[pymethods]
impl PyHandPartition {
    #[getter]
    fn left(&self) -> Vec<String> {
        self.inner.left().iter().map(|c| c.to_string()).collect()
    }

    #[getter]
    fn right(&self) -> Vec<String> {
        self.inner.right().iter().map(|c| c.to_string()).collect()
    }

    /// One `(letter, hand, rule, left_support, left_confidence,
    /// right_support, right_confidence)` tuple per decision.
    fn trace(&self) -> Vec<(String, String, String, f64, f64, f64, f64)> {
        self.inner
            .trace()
            .iter()
            .map(|d| {
                (
                    d.letter.to_string(),
                    d.hand.to_string(),
                    d.rule.to_string(),
                    d.left.cumulative_support,
                    d.left.cumulative_confidence,
                    d.right.cumulative_support,
                    d.right.cumulative_confidence,
                )
            })
            .collect()
    }

    fn assign(&mut self, letter: &str, count: u64, digraphs: &PyNGramTable) -> PyResult<String> {
        let d = self
            .inner
            .assign(one_char(letter)?, count, &digraphs.inner, &PartitionOptions::default())
            .map_err(err)?;
        Ok(d.hand.to_string())
    }

    fn to_json(&self, total_letters: u64) -> String {
        self.inner.to_json(total_letters, Default::default())
    }
}

#[pyclass(name = "KeyboardLayout", module = "layoutforge_py", from_py_object)]
#[derive(Clone)]
struct PyKeyboardLayout {
    inner: layout::KeyboardLayout,
}

#[pymethods]
impl PyKeyboardLayout {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        layout::parse_layout(text).map(|inner| Self { inner }).map_err(err)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    fn hand_of(&self, letter: &str) -> PyResult<Option<String>> {
        Ok(self.inner.hand_of(one_char(letter)?).map(|h| h.to_string()))
    }

    /// `(layer, row, column)` of a letter's key.
    fn slot_of(&self, letter: &str) -> PyResult<Option<(usize, usize, usize)>> {
        Ok(self
            .inner
            .placement(one_char(letter)?)
            .map(|p| (p.slot.layer, p.slot.row, p.slot.column)))
    }

    fn to_json(&self) -> String {
        layout::serialize_layout(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

#[pyclass(name = "EvaluationReport", module = "layoutforge_py", from_py_object, get_all)]
#[derive(Clone)]
struct PyEvaluationReport {
    layout: String,
    hand_switching: u64,
    left_load: u64,
    right_load: u64,
    not_determined: u64,
    total_letters: u64,
}

impl From<evaluator::EvaluationReport> for PyEvaluationReport {
    fn from(r: evaluator::EvaluationReport) -> Self {
        Self {
            layout: r.layout,
            hand_switching: r.hand_switching,
            left_load: r.left_load,
            right_load: r.right_load,
            not_determined: r.not_determined,
            total_letters: r.total_letters,
        }
    }
}

impl PyEvaluationReport {
    fn to_core(&self) -> evaluator::EvaluationReport {
        evaluator::EvaluationReport::from_counts(
            self.layout.clone(),
            self.hand_switching,
            self.left_load,
            self.right_load,
            self.not_determined,
        )
    }
}

#[pymethods]
impl PyEvaluationReport {
    #[new]
    fn new(layout: String, hand_switching: u64, left_load: u64, right_load: u64, not_determined: u64) -> Self {
        evaluator::EvaluationReport::from_counts(layout, hand_switching, left_load, right_load, not_determined).into()
    }

    fn to_json(&self) -> String {
        self.to_core().to_json(Default::default())
    }

    fn __repr__(&self) -> String {
        format!(
            "EvaluationReport(layout={:?}, hand_switching={}, left_load={}, right_load={}, not_determined={})",
            self.layout, self.hand_switching, self.left_load, self.right_load, self.not_determined
        )
    }
}

#[pyfunction]
fn normalize_text(raw: &[u8]) -> PyResult<String> {
    corpus::normalize_text(raw).map_err(err)
}

/// Normalizes and tokenizes `text`; `alphabet` is an alphabet JSON document.
#[pyfunction]
#[pyo3(signature = (text, alphabet=None))]
fn tokenize(text: &str, alphabet: Option<&str>) -> PyResult<PyLetterStream> {
    let cfg = self::alphabet(alphabet)?;
    let inner = corpus::ingest_bytes(text.as_bytes(), &cfg).map_err(err)?;
    Ok(PyLetterStream { inner })
}

#[pyfunction]
#[pyo3(signature = (stream, n, span_boundaries=false))]
fn count_ngrams(stream: &PyLetterStream, n: usize, span_boundaries: bool) -> PyResult<PyNGramTable> {
    stats::count_ngrams_with(&stream.inner, n, span_boundaries)
        .map(|inner| PyNGramTable { inner })
        .map_err(err)
}

/// `(cumulative_support, cumulative_confidence)` of `focus` against `side`.
#[pyfunction]
fn side_scores(focus: &str, side: Vec<String>, digraphs: &PyNGramTable) -> PyResult<(f64, f64)> {
    let side = side.iter().map(|s| one_char(s)).collect::<PyResult<Vec<_>>>()?;
    let s = stats::side_scores(one_char(focus)?, &side, &digraphs.inner).map_err(err)?;
    Ok((s.cumulative_support, s.cumulative_confidence))
}

#[pyfunction]
fn ranked_monograms(mono: &PyNGramTable) -> PyResult<Vec<(String, u64, f64)>> {
    Ok(stats::ranked_monograms(&mono.inner)
        .map_err(err)?
        .into_iter()
        .map(|r| (r.letter.to_string(), r.count, r.percentage))
        .collect())
}

/// Seeds the hands from the four most frequent letters of `mono`.
#[pyfunction]
fn initialize(mono: &PyNGramTable) -> PyResult<PyHandPartition> {
    let ranking = stats::ranked_monograms(&mono.inner).map_err(err)?;
    partition::initialize(&ranking)
        .map(|inner| PyHandPartition { inner })
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (mono, digraphs, balance_tiebreak=false, min_count=1))]
fn partition_all(
    mono: &PyNGramTable,
    digraphs: &PyNGramTable,
    balance_tiebreak: bool,
    min_count: u64,
) -> PyResult<PyHandPartition> {
    let opts = PartitionOptions {
        balance_tiebreak,
        min_count,
    };
    partition::partition_all(&mono.inner, &digraphs.inner, &opts)
        .map(|inner| PyHandPartition { inner })
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (partition, mono, geometry=None))]
fn build_layout(
    partition: &PyHandPartition,
    mono: &PyNGramTable,
    geometry: Option<&str>,
) -> PyResult<PyKeyboardLayout> {
    let geometry = match geometry {
        Some(text) => Geometry::from_json(text).map_err(err)?,
        None => Geometry::default(),
    };
    layout::build_layout(&partition.inner, &mono.inner, geometry)
        .map(|inner| PyKeyboardLayout { inner })
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (layout, stream, reset_on_boundary=false))]
fn evaluate(layout: &PyKeyboardLayout, stream: &PyLetterStream, reset_on_boundary: bool) -> PyEvaluationReport {
    evaluator::evaluate_with(&layout.inner, &stream.inner, EvaluateOptions { reset_on_boundary }).into()
}

/// Rendered comparison table, best hand switching first.
#[pyfunction]
fn compare(reports: Vec<PyEvaluationReport>) -> PyResult<String> {
    let reports: Vec<_> = reports.iter().map(|r| r.to_core()).collect();
    evaluator::compare(&reports).map(|t| t.render()).map_err(err)
}

/// Runs every stage on `inputs`, writing into `out`. Returns the comparison table.
#[pyfunction]
#[pyo3(signature = (inputs, out, baselines=Vec::new()))]
fn run_all(inputs: Vec<PathBuf>, out: PathBuf, baselines: Vec<PathBuf>) -> PyResult<String> {
    Pipeline::default()
        .run_all(&inputs, &baselines, &out).map_err(err)
}

#[pymodule]
pub fn layoutforge_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("LayoutforgeError", m.py().get_type::<LayoutforgeError>())?;
    m.add_class::<PyLetterStream>()?;
    m.add_class::<PyNGramTable>()?;
    m.add_class::<PyHandPartition>()?;
    m.add_class::<PyKeyboardLayout>()?;
    m.add_class::<PyEvaluationReport>()?;
    m.add_function(wrap_pyfunction!(normalize_text, m)?)?;
    m.add_function(wrap_pyfunction!(tokenize, m)?)?;
    m.add_function(wrap_pyfunction!(count_ngrams, m)?)?;
    m.add_function(wrap_pyfunction!(side_scores, m)?)?;
    m.add_function(wrap_pyfunction!(ranked_monograms, m)?)?;
    m.add_function(wrap_pyfunction!(initialize, m)?)?;
    m.add_function(wrap_pyfunction!(partition_all, m)?)?;
    m.add_function(wrap_pyfunction!(build_layout, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(run_all, m)?)?;
    Ok(())
}
